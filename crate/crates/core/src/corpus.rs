//! Seeded random families with coefficient modules, and the check suite run
//! on each of them.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::ab::FiniteAbelianGroup;
use crate::checks;
use crate::coh::GModule;
use crate::error::Result;
use crate::input::{ActionEntry, ActionJson, FiberJson, GroupJson, ModuleJson, SpecJson};
use crate::report::{digest, Record};

/// Truncation level used for the exactness check of corpus instances.
pub const CORPUS_LEVEL: usize = 1;

#[derive(Clone, Debug, Serialize)]
pub struct CorpusInstance {
    pub id: usize,
    pub spec: SpecJson,
    pub module: ModuleJson,
}

impl CorpusInstance {
    pub fn digest(&self) -> String {
        let s = serde_json::to_vec(&self.spec).expect("spec serializes");
        let m = serde_json::to_vec(&self.module).expect("module serializes");
        digest(&[&s, &m])
    }
}

fn group_menu() -> Vec<GroupJson> {
    use GroupJson::*;
    vec![
        Cyclic { n: 2 },
        Cyclic { n: 3 },
        Cyclic { n: 4 },
        Cyclic { n: 5 },
        Cyclic { n: 6 },
        Cyclic { n: 8 },
        Cyclic { n: 9 },
        Dihedral { n: 3 },
        Dihedral { n: 4 },
        Dihedral { n: 6 },
        Ab { orders: vec![2, 2] },
        Ab { orders: vec![3, 3] },
        Ab { orders: vec![2, 4] },
        Heisenberg { p: 3 },
        Perm {
            degree: 4,
            generators: vec![vec![1, 2, 0, 3], vec![1, 0, 3, 2]],
        },
        Product {
            factors: vec![Dihedral { n: 3 }, Cyclic { n: 3 }],
        },
    ]
}

const COEFF_MENU: &[&[u64]] = &[&[2], &[3], &[4], &[5], &[7], &[8], &[9], &[2, 2], &[3, 3], &[6], &[2, 4]];

fn primes_of(mut n: u64, out: &mut Vec<u64>) {
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            out.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
}

fn random_matrix(rng: &mut ChaCha8Rng, a: &FiniteAbelianGroup) -> Vec<Vec<i64>> {
    let f = a.factors();
    let r = f.len();
    match rng.gen_range(0..3) {
        0 => (0..r).map(|i| (0..r).map(|j| i64::from(i == j)).collect()).collect(),
        1 => (0..r).map(|i| (0..r).map(|j| -i64::from(i == j)).collect()).collect(),
        _ => (0..r)
            .map(|i| (0..r).map(|_| rng.gen_range(0..f[i] as i64)).collect())
            .collect(),
    }
}

/// A random action of the group on `a` through its generating set, or the
/// trivial action when no attempt gives a homomorphism.
fn random_action(rng: &mut ChaCha8Rng, g: &GroupJson, a: &FiniteAbelianGroup) -> ActionJson {
    if rng.gen_bool(0.25) {
        return ActionJson::default();
    }
    let group = g.build().expect("menu groups build");
    let gens = group.generating_set();
    for _ in 0..30 {
        let mats: Vec<_> = gens.iter().map(|_| random_matrix(rng, a)).collect();
        if let Ok(m) = GModule::from_generators(&group, a, &gens, &mats) {
            if m.is_trivial_action() {
                continue;
            }
            return ActionJson {
                action: gens
                    .iter()
                    .zip(mats)
                    .map(|(&element, matrix)| ActionEntry { element, matrix })
                    .collect(),
            };
        }
    }
    ActionJson::default()
}

fn random_fiber(rng: &mut ChaCha8Rng, menu: &[GroupJson]) -> FiberJson {
    let group = menu.choose(rng).expect("menu is not empty").clone();
    let order = group.build().expect("menu groups build").order();
    let k = rng.gen_range(0..=2);
    FiberJson {
        group,
        subgroup_generators: Some((0..k).map(|_| rng.gen_range(0..order)).collect()),
        subgroup_elements: None,
    }
}

pub fn generate_instance(seed: u64, id: usize) -> CorpusInstance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(id as u64);
    let menu = group_menu();
    let coeff = COEFF_MENU.choose(&mut rng).expect("menu is not empty").to_vec();
    let a = FiniteAbelianGroup::from_cyclic_orders(&coeff);
    let n = rng.gen_range(2..=4);
    let names = ["a", "b", "c", "d"];
    let mut exceptional = BTreeMap::new();
    let mut actions = BTreeMap::new();
    let mut primes = Vec::new();
    for name in &names[..n] {
        let fiber = random_fiber(&mut rng, &menu);
        primes_of(fiber.group.build().expect("menu groups build").order() as u64, &mut primes);
        let act = random_action(&mut rng, &fiber.group, &a);
        if !act.action.is_empty() {
            actions.insert(name.to_string(), act);
        }
        exceptional.insert(name.to_string(), fiber);
    }
    // Tails keep U = G and act trivially, so every truncation is a finite free product.
    let tail = rng.gen_bool(1.0 / 3.0).then(|| {
        let group = menu.choose(&mut rng).expect("menu is not empty").clone();
        let g = group.build().expect("menu groups build");
        primes_of(g.order() as u64, &mut primes);
        FiberJson {
            group,
            subgroup_generators: Some(g.generating_set()),
            subgroup_elements: None,
        }
    });
    primes_of(a.order() as u64, &mut primes);
    primes.sort_unstable();
    primes.dedup();
    CorpusInstance {
        id,
        spec: SpecJson {
            prime_set: primes,
            exceptional,
            tail,
        },
        module: ModuleJson {
            coeff,
            exceptional: actions,
            tail: None,
        },
    }
}

pub fn generate(seed: u64, count: usize) -> Vec<CorpusInstance> {
    (0..count).map(|id| generate_instance(seed, id)).collect()
}

/// Exactness with oracle bookkeeping, the character cross-check at every
/// prime, normal-closure invariance, duality and dimension shifting.
pub fn run_instance(inst: &CorpusInstance, cap: usize) -> Result<Vec<Record>> {
    let d = inst.digest();
    let spec = inst.spec.build()?;
    let m = inst.module.build(&spec)?;
    let mut out = checks::exact_check(&spec, &m, CORPUS_LEVEL, &d)?;
    out.extend(checks::cross_check(&spec, &d)?);
    out.extend(checks::normal_closure_invariance(&spec, &m, CORPUS_LEVEL, cap, &d)?);
    out.extend(checks::duality_check(&spec, Some(&m), cap, &d)?);
    out.extend(checks::dimension_shift(&m, cap, &d)?);
    for r in &mut out {
        r.check = format!("corpus/{}/{}", inst.id, r.check);
    }
    Ok(out)
}

/// One record per instance: passes iff every check of the suite passes, and
/// lists the failing checks with their witnesses otherwise.
pub fn summarize(inst: &CorpusInstance, detail: &[Record]) -> Record {
    let mut r = Record::new(format!("corpus/{}", inst.id), &inst.digest(), detail.iter().all(Record::passed))
        .witness(format!("{} checks", detail.len()));
    if let Some(h1) = detail.first().and_then(|d| d.invariant_factors.get("h1")) {
        r = r.factors("h1", h1);
    }
    for d in detail.iter().filter(|d| !d.passed()) {
        r = r.witness(format!("failed {}", d.check));
        r = r.witnesses(d.witnesses.iter().map(|w| format!("  {w}")));
    }
    r
}

/// Instances run in parallel; records keep instance order.
pub fn run(seed: u64, count: usize, cap: usize) -> Result<Vec<Record>> {
    let per: Vec<Result<Record>> = generate(seed, count)
        .par_iter()
        .map(|inst| Ok(summarize(inst, &run_instance(inst, cap)?)))
        .collect();
    per.into_iter().collect()
}
