use serde::Serialize;

use crate::ab::{AbHom, Element, FiniteAbelianGroup};
use crate::coh::{cohomology, GModule};
use crate::error::{Error, Result};
use crate::family::{truncate, FamilySpec, ModuleFamily};

use super::formulas::h_formula;
use super::oracle::{OracleH1, DEFAULT_ENUMERATION_CAP};
use super::restricted::TailClass;
use super::sequence::{check_exactness, sequence_of_modules};
use super::sum::BlockSum;

/// Truncation levels `N = 0..=N_max` of `H^i` with extend-by-zero transitions.
#[derive(Clone, Debug, Serialize)]
pub struct ColimitSystem {
    pub degree: usize,
    pub levels: Vec<FiniteAbelianGroup>,
    #[serde(skip)]
    pub transitions: Vec<AbHom>,
    /// `H^i(G_τ, A)`, added once per level.
    pub tail_contribution: FiniteAbelianGroup,
    /// First level from which every transition is an isomorphism.
    pub stabilization: Option<usize>,
    pub passed: bool,
    pub failures: Vec<String>,
}

fn unit(g: &FiniteAbelianGroup, k: usize) -> Element {
    let mut e = g.zero();
    e[k] = 1;
    e
}

fn level_modules(spec: &FamilySpec, m: &ModuleFamily, n: usize) -> Result<Vec<(String, GModule)>> {
    let t = truncate(spec, n);
    let fm = m.truncate(&t)?;
    Ok(fm
        .exceptional()
        .iter()
        .map(|(k, v)| (k.clone(), v.clone()))
        .collect())
}

/// Requires `Ũ_τ = G_τ`, so that each truncation is a plain finite free product.
pub fn truncation_colimit(spec: &FamilySpec, m: &ModuleFamily, degree: usize, n_max: usize) -> Result<ColimitSystem> {
    if !(1..=2).contains(&degree) {
        return Err(Error::Precondition(format!("colimits are built in degrees 1 and 2, not {degree}")));
    }
    if let Some(t) = spec.tail() {
        if !t.closure().is_whole() {
            return Err(Error::Precondition(
                "the tail has Ũ ≠ G, so the truncations are not finite free products".into(),
            ));
        }
    }
    let tail_contribution = match m.tail() {
        Some(tm) => cohomology(tm, degree)?.value().clone(),
        None => FiniteAbelianGroup::trivial(),
    };
    let mut failures = Vec::new();
    let mut levels = Vec::new();
    let mut transitions = Vec::new();

    if degree == 1 {
        let mut prev: Option<OracleH1> = None;
        for n in 0..=n_max {
            let mods = level_modules(spec, m, n)?;
            let oracle = OracleH1::from_modules(&mods, DEFAULT_ENUMERATION_CAP)?;
            if !oracle.is_consistent() {
                failures.push(format!("level {n}: |H¹|·|B¹| differs from |Z¹|"));
            }
            let seq = sequence_of_modules(mods)?;
            if !check_exactness(&seq).passed {
                failures.push(format!("level {n}: the four-term sequence is not exact"));
            }
            if seq.terms[2] != *oracle.value() {
                failures.push(format!("level {n}: the sequence carries a different H¹"));
            }
            if let Some(p) = &prev {
                let images: Vec<Element> = (0..p.value().rank())
                    .map(|k| {
                        let rep = p.representative(&unit(p.value(), k));
                        oracle
                            .class_of_generator_values(&p.transfer(&rep, &oracle))
                            .ok_or_else(|| Error::Precondition(format!("level {n}: extension by zero is not a cocycle")))
                    })
                    .collect::<Result<_>>()?;
                transitions.push(AbHom::from_images(p.value().clone(), oracle.value().clone(), &images)?);
            }
            levels.push(oracle.value().clone());
            prev = Some(oracle);
        }
    } else {
        let mut prev: Option<(Vec<String>, BlockSum)> = None;
        for n in 0..=n_max {
            let mods = level_modules(spec, m, n)?;
            let names: Vec<String> = mods.iter().map(|(k, _)| k.clone()).collect();
            let parts = mods
                .iter()
                .map(|(_, md)| Ok(cohomology(md, 2)?.value().clone()))
                .collect::<Result<Vec<_>>>()?;
            let sum = BlockSum::new(parts);
            if let Some((pnames, psum)) = &prev {
                let images: Vec<Element> = (0..psum.group().rank())
                    .map(|k| {
                        let blocks = psum.blocks(&unit(psum.group(), k));
                        let moved: Vec<Element> = names
                            .iter()
                            .enumerate()
                            .map(|(j, name)| match pnames.iter().position(|p| p == name) {
                                Some(i) => blocks[i].clone(),
                                None => sum.part(j).zero(),
                            })
                            .collect();
                        sum.from_blocks(&moved)
                    })
                    .collect();
                transitions.push(AbHom::from_images(psum.group().clone(), sum.group().clone(), &images)?);
            }
            levels.push(sum.group().clone());
            prev = Some((names, sum));
        }
    }

    for (n, tr) in transitions.iter().enumerate() {
        if !tr.is_injective() {
            failures.push(format!("transition {n} → {} is not injective", n + 1));
        }
        let mut orders = levels[n].factors().to_vec();
        orders.extend_from_slice(tail_contribution.factors());
        if levels[n + 1] != FiniteAbelianGroup::from_cyclic_orders(&orders) {
            failures.push(format!(
                "level {} is {} but level {n} plus the tail contribution is {}",
                n + 1,
                levels[n + 1],
                FiniteAbelianGroup::from_cyclic_orders(&orders)
            ));
        }
    }

    let summary = h_formula(spec, m, degree)?.summary;
    if !matches!(summary.tail_class, TailClass::Finite | TailClass::Trivial | TailClass::DirectSum) {
        failures.push(format!("the restricted product has tail class {:?}, not a direct sum", summary.tail_class));
    }
    let stabilization = transitions
        .iter()
        .rposition(|t| !t.is_isomorphism())
        .map_or(Some(0), |i| (i + 1 < transitions.len()).then_some(i + 1));

    Ok(ColimitSystem {
        degree,
        levels,
        transitions,
        tail_contribution,
        stabilization,
        passed: failures.is_empty(),
        failures,
    })
}
