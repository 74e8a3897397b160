//! Named check suites producing report records.

use crate::coh::dimension_shift_check_capped;
use crate::error::{Error, Result};
use crate::family::{
    check_tower, normal_closure_family, truncate, validate_family, FamilyMorphism, FamilySpec,
    ModuleFamily, NormalChoice, Tower, quotient_family,
};
use crate::freeprod::{
    abelianization_formula, check_exactness, cross_check_h1_vs_ab, dualize_family,
    four_term_sequence, h_formula_capped, high_degree_formula, oracle_h1, truncation_colimit,
    AbPair, RestrictedAbFamily,
};
use crate::report::Record;
use crate::topo::{is_open, open_map_certificate, OpenSetSpec};

/// Turns refusals (unmet preconditions, size caps) into failed records and
/// passes every other error through.
fn refusal(check: &str, digest: &str, e: Error) -> Result<Vec<Record>> {
    match e {
        Error::Precondition(_) | Error::SizeCap { .. } => {
            Ok(vec![Record::new(check, digest, false).witness(e.to_string())])
        }
        other => Err(other),
    }
}

pub fn validate(spec: &FamilySpec, modules: Option<&ModuleFamily>, digest: &str) -> Result<Vec<Record>> {
    let mut out = Vec::new();
    for f in validate_family(spec)? {
        out.push(
            Record::new(format!("validate/{}", f.index), digest, true).witness(format!(
                "|G| = {}, |U| = {}, |normal closure| = {}, U normal: {}",
                f.order, f.sub_order, f.closure_order, f.sub_normal
            )),
        );
    }
    if let Some(m) = modules {
        for (name, module) in m.modules() {
            out.push(
                Record::new(format!("validate/module/{name}"), digest, true)
                    .factors("coeff", module.coeff().factors())
                    .witness(format!("trivial action: {}", module.is_trivial_action())),
            );
        }
    }
    Ok(out)
}

fn pair_records(prefix: &str, f: &RestrictedAbFamily, digest: &str) -> Vec<Record> {
    let one = |name: &str, p: &AbPair| {
        Record::new(format!("{prefix}/{name}"), digest, true)
            .factors("group", p.group.factors())
            .factors("sub", p.sub_group().factors())
    };
    f.exceptional
        .iter()
        .map(|(k, p)| one(k, p))
        .chain(f.tail.iter().map(|p| one("tail", p)))
        .collect()
}

pub fn abelianize(spec: &FamilySpec, digest: &str) -> Vec<Record> {
    pair_records("abelianize", &abelianization_formula(spec), digest)
}

pub fn cohomology(spec: &FamilySpec, m: &ModuleFamily, degree: usize, cap: usize, digest: &str) -> Result<Vec<Record>> {
    let check = format!("cohomology/{degree}");
    if degree >= 3 {
        return match high_degree_formula(spec, m, degree, cap) {
            Ok(h) => {
                let mut out: Vec<Record> = h
                    .exceptional
                    .iter()
                    .map(|(k, g)| Record::new(format!("{check}/{k}"), digest, true).factors("h", g.factors()))
                    .collect();
                if let Some(t) = &h.tail {
                    out.push(
                        Record::new(format!("{check}/tail"), digest, true)
                            .factors("h", t.factors())
                            .witness("summand repeated at every tail index"),
                    );
                }
                Ok(out)
            }
            Err(e) => refusal(&check, digest, e),
        };
    }
    match h_formula_capped(spec, m, degree, cap) {
        Ok(h) => {
            let mut out = pair_records(&check, &h.family, digest);
            out.push(
                Record::new(format!("{check}/summary"), digest, true)
                    .witness(format!("tail class {:?}", h.summary.tail_class))
                    .witness(format!("finite: {}", h.summary.finite)),
            );
            Ok(out)
        }
        Err(e) => refusal(&check, digest, e),
    }
}

pub fn exact_check(spec: &FamilySpec, m: &ModuleFamily, level: usize, digest: &str) -> Result<Vec<Record>> {
    let check = "exact-check";
    let t = truncate(spec, level);
    let seq = match four_term_sequence(&t, m) {
        Ok(s) => s,
        Err(e) => return refusal(check, digest, e),
    };
    let report = check_exactness(&seq);
    let oracle = oracle_h1(&t, m)?;
    let o = |i: usize| seq.terms[i].order();
    let bookkeeping = o(2) * o(0) == o(1) * o(3) && oracle.is_consistent();
    let mut r = Record::new(check, digest, report.passed && bookkeeping)
        .factors("a_mod_fixed", seq.terms[0].factors())
        .factors("sum_a_mod_fixed", seq.terms[1].factors())
        .factors("h1", seq.terms[2].factors())
        .factors("sum_h1", seq.terms[3].factors())
        .witnesses(report.failures);
    for p in report.positions.iter().filter(|p| p.obstruction_order != 1) {
        r = r.witness(format!("term {}: obstruction {} witness {:?}", p.position, p.obstruction_order, p.witness));
    }
    if !bookkeeping {
        r = r.witness("orders do not satisfy |H¹|·|A/A^G| = |⊕A/A^{G_t}|·|⊕H¹(G_t, A)|");
    }
    Ok(vec![r])
}

fn involution_record(name: &str, f: &RestrictedAbFamily, digest: &str) -> Record {
    let d = dualize_family(f);
    let dd = dualize_family(&d);
    let mut ok = dd.shape() == f.shape() && d.flavor == f.flavor.dual();
    let mut r = Record::new(format!("duality-check/{name}"), digest, true);
    for (k, p) in f.exceptional.iter().map(|(k, p)| (k.as_str(), p)).chain(f.tail.iter().map(|p| ("tail", p))) {
        let ann = p.dual().sub;
        if p.sub.order() * ann.order() != p.group.order() {
            ok = false;
            r = r.witness(format!("{k}: |B|·|ann B| ≠ |A|"));
        }
    }
    r.result = crate::report::Outcome::from_bool(ok);
    r.witness(format!("flavor {:?} ↦ {:?}", f.flavor, d.flavor))
}

pub fn duality_check(spec: &FamilySpec, m: Option<&ModuleFamily>, cap: usize, digest: &str) -> Result<Vec<Record>> {
    let mut out = vec![involution_record("abelianization", &abelianization_formula(spec), digest)];
    if let Some(m) = m {
        for deg in 1..=2 {
            match h_formula_capped(spec, m, deg, cap) {
                Ok(h) => out.push(involution_record(&format!("h{deg}"), &h.family, digest)),
                Err(e) => out.extend(refusal(&format!("duality-check/h{deg}"), digest, e)?),
            }
        }
    }
    Ok(out)
}

pub fn cross_check(spec: &FamilySpec, digest: &str) -> Result<Vec<Record>> {
    let mut out = Vec::new();
    for &p in spec.prime_set() {
        let r = cross_check_h1_vs_ab(spec, p)?;
        for f in r.fibers {
            let ok = f.isomorphism && f.nr_match;
            let mut rec = Record::new(format!("cross-check/{p}/{}", f.index), digest, ok)
                .factors("h1", &f.h1)
                .factors("dual_ab_mod_p", &f.dual_ab_mod_p)
                .factors("h1_nr", &f.h1_nr)
                .factors("annihilator", &f.annihilator);
            if !f.isomorphism {
                rec = rec.witness("character map is not an isomorphism");
            }
            if !f.nr_match {
                rec = rec.witness("annihilator of the image of U differs from H¹_nr");
            }
            out.push(rec);
        }
    }
    Ok(out)
}

pub fn colimit(spec: &FamilySpec, m: &ModuleFamily, degree: usize, n_max: usize, digest: &str) -> Result<Vec<Record>> {
    let check = format!("colimit/{degree}");
    match truncation_colimit(spec, m, degree, n_max) {
        Ok(c) => {
            let mut r = Record::new(check, digest, c.passed)
                .factors("tail_contribution", c.tail_contribution.factors())
                .witnesses(c.failures.clone())
                .witness(format!("stabilization {:?}", c.stabilization));
            for (n, l) in c.levels.iter().enumerate() {
                r = r.factors(format!("level{n}"), l.factors());
            }
            Ok(vec![r])
        }
        Err(e) => refusal(&check, digest, e),
    }
}

pub fn tower_check(t: &Tower, digest: &str) -> Vec<Record> {
    let cert = check_tower(t);
    cert.transitions
        .into_iter()
        .map(|tr| {
            Record::new(
                format!("tower-check/{}", tr.transition),
                digest,
                tr.fibrewise_surjective_and_strict && tr.star_preimage_is_star,
            )
            .witnesses(tr.failures)
        })
        .collect()
}

fn certificate_record(name: &str, m: &FamilyMorphism, digest: &str) -> Record {
    let c = open_map_certificate(m);
    Record::new(format!("topo-check/morphism/{name}"), digest, true)
        .witness(format!("certified open: {}", c.certified_open))
        .witnesses(c.failures)
}

/// Open-set checks report membership; certificates only report hypotheses,
/// so neither fails the run.
pub fn topo_check(spec: &FamilySpec, sets: &[OpenSetSpec], morphisms: &[(String, FamilyMorphism)], digest: &str) -> Result<Vec<Record>> {
    let mut out = Vec::new();
    for (i, v) in sets.iter().enumerate() {
        let c = is_open(spec, v);
        out.push(
            Record::new(format!("topo-check/set/{i}"), digest, true)
                .witness(format!("open: {}", c.open))
                .witness(format!("witness: {}", c.witness.as_deref().unwrap_or("none"))),
        );
    }
    out.push(certificate_record("identity", &FamilyMorphism::identity(spec), digest));
    let (_, q) = quotient_family(spec, &NormalChoice::closures(spec))?;
    out.push(certificate_record("closure-quotient", &q, digest));
    for (name, m) in morphisms {
        out.push(certificate_record(name, m, digest));
    }
    Ok(out)
}

/// `H¹(G, A') ≅ H²(G, A)` and `H¹(G, Coind A) = 0` for every fiber module.
pub fn dimension_shift(m: &ModuleFamily, cap: usize, digest: &str) -> Result<Vec<Record>> {
    let mut out = Vec::new();
    for (name, module) in m.modules() {
        let check = format!("dimension-shift/{name}");
        match dimension_shift_check_capped(module, cap) {
            Ok(s) => {
                let mut r = Record::new(check, digest, s.passed)
                    .factors("h1_shifted", s.h1_shifted.factors())
                    .factors("h2", s.h2.factors())
                    .factors("h1_coinduced", s.h1_coinduced.factors());
                if let Some(f) = s.failure {
                    r = r.witness(f);
                }
                out.push(r);
            }
            Err(e) => out.extend(refusal(&check, digest, e)?),
        }
    }
    Ok(out)
}

/// Every formula agrees on the family and its normal-closure replacement.
pub fn normal_closure_invariance(spec: &FamilySpec, m: &ModuleFamily, level: usize, cap: usize, digest: &str) -> Result<Vec<Record>> {
    let n = normal_closure_family(spec);
    let mn = m.over(&n)?;
    let mut diffs = Vec::new();
    if abelianization_formula(spec) != abelianization_formula(&n) {
        diffs.push("abelianization formula".to_string());
    }
    for deg in 1..=2 {
        if h_formula_capped(spec, m, deg, cap)? != h_formula_capped(&n, &mn, deg, cap)? {
            diffs.push(format!("H^{deg} formula"));
        }
    }
    for &p in spec.prime_set() {
        if cross_check_h1_vs_ab(spec, p)? != cross_check_h1_vs_ab(&n, p)? {
            diffs.push(format!("cross-check at {p}"));
        }
    }
    let (t, tn) = (truncate(spec, level), truncate(&n, level));
    if t.beyond_is_trivial() {
        let (s, sn) = (four_term_sequence(&t, m)?, four_term_sequence(&tn, &mn)?);
        if s.terms != sn.terms || s.maps != sn.maps {
            diffs.push("four-term sequence".into());
        }
    }
    Ok(vec![Record::new("normal-closure", digest, diffs.is_empty()).witnesses(diffs)])
}
