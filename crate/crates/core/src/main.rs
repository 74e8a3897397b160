use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use corprod::checks;
use corprod::coh::DEFAULT_COCHAIN_CAP;
use corprod::corpus;
use corprod::error::{Error, Result};
use corprod::input::{parse, ModuleJson, SpecJson, TopoJson, TowerJson};
use corprod::report::{self, digest, Format, Record};

#[derive(Parser)]
#[command(name = "corprod", version, about = "Check suites for free products of finite group families")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Family specification (JSON).
    #[arg(long, global = true)]
    spec: Option<PathBuf>,
    /// Coefficient module with per-fiber actions (JSON).
    #[arg(long, global = true)]
    module: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = 1)]
    degree: usize,
    /// Truncation level; for `colimit`, the last level.
    #[arg(long, global = true)]
    truncate: Option<usize>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Size cap on cochain spaces and enumerations.
    #[arg(long, global = true, default_value_t = DEFAULT_COCHAIN_CAP)]
    cap: usize,
    /// Report file; records are appended.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = OutFormat::Text)]
    format: OutFormat,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutFormat {
    Text,
    Structured,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a family and, if given, its module.
    Validate,
    /// Abelianization formula per fiber.
    Abelianize,
    /// `H^degree` formula per fiber.
    Cohomology,
    /// Four-term sequence of a truncation, checked against the oracle.
    ExactCheck,
    /// Pontryagin duality of the formula families.
    DualityCheck,
    /// `H¹(G_t, Z/p)` against the dual of `G_t^ab / p` for every prime.
    CrossCheck,
    /// Truncation levels and their transitions.
    Colimit,
    /// Adjacent transitions of a tower of families.
    TowerCheck {
        #[arg(long)]
        tower: PathBuf,
    },
    /// Openness of subsets and open-map certificates.
    TopoCheck {
        #[arg(long)]
        open: Option<PathBuf>,
    },
    /// Generate a seeded corpus and run the invariant suite on it.
    Corpus {
        #[arg(long, default_value_t = 30)]
        count: usize,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Validate => "validate",
            Command::Abelianize => "abelianize",
            Command::Cohomology => "cohomology",
            Command::ExactCheck => "exact-check",
            Command::DualityCheck => "duality-check",
            Command::CrossCheck => "cross-check",
            Command::Colimit => "colimit",
            Command::TowerCheck { .. } => "tower-check",
            Command::TopoCheck { .. } => "topo-check",
            Command::Corpus { .. } => "corpus",
        }
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn run(cli: &Cli) -> Result<Vec<Record>> {
    let spec_text = cli.spec.as_deref().map(read).transpose()?;
    let module_text = cli.module.as_deref().map(read).transpose()?;
    let extra_text = match &cli.command {
        Command::TowerCheck { tower } => Some(read(tower)?),
        Command::TopoCheck { open: Some(p) } => Some(read(p)?),
        _ => None,
    };
    let params = format!("{} degree={} truncate={:?} seed={} cap={}", cli.command.name(), cli.degree, cli.truncate, cli.seed, cli.cap);
    let d = digest(&[
        params.as_bytes(),
        spec_text.as_deref().unwrap_or("").as_bytes(),
        module_text.as_deref().unwrap_or("").as_bytes(),
        extra_text.as_deref().unwrap_or("").as_bytes(),
    ]);

    match &cli.command {
        Command::Corpus { count } => return corpus::run(cli.seed, *count, cli.cap),
        Command::TowerCheck { .. } => {
            let tower = parse::<TowerJson>(extra_text.as_deref().unwrap_or_default())?.build()?;
            return Ok(checks::tower_check(&tower, &d));
        }
        _ => {}
    }

    let spec_text = spec_text.ok_or_else(|| Error::Parse("--spec is required for this command".into()))?;
    let spec = parse::<SpecJson>(&spec_text)?.build()?;
    let module = || {
        let text = module_text
            .as_deref()
            .ok_or_else(|| Error::Parse("--module is required for this command".into()))?;
        parse::<ModuleJson>(text)?.build(&spec)
    };
    let optional_module = module_text.as_ref().map(|_| module()).transpose()?;

    match &cli.command {
        Command::Validate => checks::validate(&spec, optional_module.as_ref(), &d),
        Command::Abelianize => Ok(checks::abelianize(&spec, &d)),
        Command::Cohomology => checks::cohomology(&spec, &module()?, cli.degree, cli.cap, &d),
        Command::ExactCheck => checks::exact_check(&spec, &module()?, cli.truncate.unwrap_or(1), &d),
        Command::DualityCheck => checks::duality_check(&spec, optional_module.as_ref(), cli.cap, &d),
        Command::CrossCheck => checks::cross_check(&spec, &d),
        Command::Colimit => checks::colimit(&spec, &module()?, cli.degree, cli.truncate.unwrap_or(6), &d),
        Command::TopoCheck { .. } => {
            let topo = match &extra_text {
                Some(t) => parse::<TopoJson>(t)?,
                None => TopoJson::default(),
            };
            let sets = topo.sets.iter().map(|s| s.build(&spec)).collect::<Result<Vec<_>>>()?;
            let morphisms = topo
                .morphisms
                .iter()
                .enumerate()
                .map(|(i, m)| Ok((format!("input{i}"), m.map.build(&spec, &m.target.build()?)?)))
                .collect::<Result<Vec<_>>>()?;
            checks::topo_check(&spec, &sets, &morphisms, &d)
        }
        Command::TowerCheck { .. } | Command::Corpus { .. } => unreachable!("handled above"),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let format = match cli.format {
        OutFormat::Text => Format::Text,
        OutFormat::Structured => Format::Structured,
    };
    match run(&cli) {
        Ok(records) => {
            print!("{}", report::render(&records, format));
            if let Some(out) = &cli.out {
                if let Err(e) = report::append(out, &records, format) {
                    eprintln!("cannot write {}: {e}", out.display());
                    return ExitCode::from(2);
                }
            }
            if records.iter().all(Record::passed) {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            match format {
                Format::Text => eprintln!("error: {e}"),
                Format::Structured => eprintln!("{}", serde_json::json!({ "command": cli.command.name(), "error": e.to_string() })),
            }
            ExitCode::from(2)
        }
    }
}
