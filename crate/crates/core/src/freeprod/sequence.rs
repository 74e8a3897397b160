use serde::Serialize;

use crate::ab::{kernel_generators, AbHom, AbSubgroup, Element, FiniteAbelianGroup, Subquotient};
use crate::coh::{cohomology, fixed_submodule, GModule};
use crate::error::{Error, Result};
use crate::family::{ModuleFamily, TruncatedFamily};
use crate::grp::Subgroup;

use super::oracle::{OracleH1, DEFAULT_ENUMERATION_CAP};
use super::sum::BlockSum;

/// `0 → A/A^G → ⊕ A/A^{G_t} → H¹(G, A) → ⊕ H¹(G_t, A) → 0` for a finite
/// free product `G = *_t G_t`.
#[derive(Clone, Debug)]
pub struct FourTermSequence {
    pub terms: [FiniteAbelianGroup; 4],
    pub maps: [AbHom; 3],
    /// Factors and their modules; `None` for a hand-built sequence.
    pub context: Option<Vec<(String, GModule)>>,
}

/// `A^G` for `G` generated by all the factor groups.
fn common_fixed(coeff: &FiniteAbelianGroup, fibers: &[(String, GModule)]) -> AbSubgroup {
    let r = coeff.rank();
    let mut rows = Vec::new();
    let mut tgt = Vec::new();
    for (_, m) in fibers {
        for s in m.group().generating_set() {
            let mat = m.action(s).matrix();
            for i in 0..r {
                rows.push((0..r).map(|j| mat[i][j] - i64::from(i == j)).collect());
                tgt.push(coeff.factors()[i]);
            }
        }
    }
    AbSubgroup::new(coeff, kernel_generators(coeff.factors(), &tgt, &rows))
}

fn quotient_by(coeff: &FiniteAbelianGroup, sub: &AbSubgroup) -> Subquotient {
    Subquotient::new(coeff.factors(), &coeff.basis(), sub.generators())
}

fn unit(rank: usize, k: usize) -> Element {
    let mut e = vec![0; rank];
    e[k] = 1;
    e
}

fn build(fibers: &[(String, GModule)], cap: usize) -> Result<([FiniteAbelianGroup; 4], [AbHom; 3])> {
    let oracle = OracleH1::from_modules(fibers, cap)?;
    let coeff = oracle.coeff().clone();
    let quotients: Vec<Subquotient> = fibers
        .iter()
        .map(|(_, m)| Ok(quotient_by(&coeff, &fixed_submodule(m, &Subgroup::whole(m.group()))?)))
        .collect::<Result<_>>()?;
    let q0 = quotient_by(&coeff, &common_fixed(&coeff, fibers));
    let s1 = BlockSum::new(quotients.iter().map(|q| q.group().clone()).collect());
    let local_h1 = fibers
        .iter()
        .map(|(_, m)| cohomology(m, 1))
        .collect::<Result<Vec<_>>>()?;
    let s3 = BlockSum::new(local_h1.iter().map(|h| h.value().clone()).collect());

    let t0 = q0.group().clone();
    let alpha_images: Vec<Element> = (0..t0.rank())
        .map(|k| {
            let a = q0.lift(&unit(t0.rank(), k));
            let blocks: Vec<Element> = quotients
                .iter()
                .map(|q| q.coords(&a).expect("A is the numerator"))
                .collect();
            s1.from_blocks(&blocks)
        })
        .collect();
    let alpha = AbHom::from_images(t0.clone(), s1.group().clone(), &alpha_images)?;

    let beta_images: Vec<Element> = (0..s1.group().rank())
        .map(|k| {
            let blocks = s1.blocks(&unit(s1.group().rank(), k));
            let mut total: Option<Element> = None;
            for (((name, _), q), c) in fibers.iter().zip(&quotients).zip(&blocks) {
                let a = q.lift(c);
                let class = oracle
                    .class_of_generator_values(&oracle.principal_on(name, &a))
                    .ok_or_else(|| Error::Precondition("principal cocycle rejected".into()))?;
                total = Some(match total {
                    None => class,
                    Some(t) => oracle.value().add(&t, &class),
                });
            }
            Ok(total.unwrap_or_else(|| oracle.value().zero()))
        })
        .collect::<Result<_>>()?;
    let beta = AbHom::from_images(s1.group().clone(), oracle.value().clone(), &beta_images)?;

    let h = oracle.value().clone();
    let gamma_images: Vec<Element> = (0..h.rank())
        .map(|k| {
            let e = unit(h.rank(), k);
            let blocks: Vec<Element> = local_h1
                .iter()
                .enumerate()
                .map(|(i, hl)| {
                    hl.class_of_values(&oracle.representative_table(&e, i))
                        .ok_or_else(|| Error::Precondition("restricted cocycle rejected".into()))
                })
                .collect::<Result<_>>()?;
            Ok(s3.from_blocks(&blocks))
        })
        .collect::<Result<_>>()?;
    let gamma = AbHom::from_images(h.clone(), s3.group().clone(), &gamma_images)?;

    Ok((
        [t0, s1.group().clone(), h, s3.group().clone()],
        [alpha, beta, gamma],
    ))
}

/// The sequence for a truncation whose beyond-part is trivial, with `H¹(G, A)`
/// taken from the enumeration oracle.
pub fn four_term_sequence(t: &TruncatedFamily, m: &ModuleFamily) -> Result<FourTermSequence> {
    if !t.beyond_is_trivial() {
        return Err(Error::Precondition(
            "the tail quotient beyond the truncation is nontrivial".into(),
        ));
    }
    let finite = m.truncate(t)?;
    let fibers: Vec<(String, GModule)> = finite
        .exceptional()
        .iter()
        .map(|(k, v)| (k.clone(), v.clone()))
        .collect();
    sequence_of_modules(fibers)
}

/// The sequence for the free product of the given factors.
pub fn sequence_of_modules(fibers: Vec<(String, GModule)>) -> Result<FourTermSequence> {
    let (terms, maps) = build(&fibers, DEFAULT_ENUMERATION_CAP)?;
    Ok(FourTermSequence {
        terms,
        maps,
        context: Some(fibers),
    })
}

impl FourTermSequence {
    /// The all-zero sequence on trivial groups.
    pub fn zero() -> Self {
        let t = FiniteAbelianGroup::trivial();
        let z = AbHom::zero(&t, &t);
        FourTermSequence {
            terms: [t.clone(), t.clone(), t.clone(), t],
            maps: [z.clone(), z.clone(), z],
            context: None,
        }
    }

    /// Copy with one matrix entry of one map replaced, without validation.
    pub fn with_entry(&self, map: usize, row: usize, col: usize, value: i64) -> Self {
        let mut out = self.clone();
        out.maps[map] = self.maps[map].with_entry_unchecked(row, col, value);
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PositionReport {
    /// Index of the term, `0..4`.
    pub position: usize,
    /// Order of `ker(out) / im(in)` at this term; 1 when exact.
    pub obstruction_order: u128,
    pub witness: Option<Element>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExactnessReport {
    pub passed: bool,
    pub positions: Vec<PositionReport>,
    pub failures: Vec<String>,
}

fn first_outside(gens: &[Element], sub: &AbSubgroup) -> Option<Element> {
    gens.iter().find(|x| !sub.contains(x)).cloned()
}

/// Checks exactness at all four terms, well-definedness of the maps, and, when
/// the sequence carries its factors, agreement with freshly built maps.
pub fn check_exactness(seq: &FourTermSequence) -> ExactnessReport {
    let mut failures = Vec::new();
    for (i, m) in seq.maps.iter().enumerate() {
        if m.source() != &seq.terms[i] || m.target() != &seq.terms[i + 1] {
            failures.push(format!("map {i} has the wrong source or target"));
        }
        if let Some(c) = m.relation_violation() {
            failures.push(format!("map {i} is not well defined on generator {c}"));
        }
    }
    if !failures.is_empty() {
        return ExactnessReport {
            passed: false,
            positions: Vec::new(),
            failures,
        };
    }

    let mut positions = Vec::new();
    let zero_sub = |g: &FiniteAbelianGroup| AbSubgroup::trivial(g);
    for pos in 0..4 {
        let incoming = if pos == 0 {
            zero_sub(&seq.terms[0])
        } else {
            seq.maps[pos - 1].image()
        };
        let kernel = if pos == 3 {
            AbSubgroup::whole(&seq.terms[3])
        } else {
            seq.maps[pos].kernel()
        };
        if !incoming.is_subgroup_of(&kernel) {
            let w = first_outside(incoming.generators(), &kernel);
            failures.push(format!("composite into term {} is not zero", pos + 1));
            positions.push(PositionReport {
                position: pos,
                obstruction_order: 0,
                witness: w,
            });
            continue;
        }
        let order = kernel.order() / incoming.order();
        let witness = if order > 1 {
            failures.push(format!("not exact at term {pos}"));
            first_outside(kernel.generators(), &incoming)
        } else {
            None
        };
        positions.push(PositionReport {
            position: pos,
            obstruction_order: order,
            witness,
        });
    }

    if let Some(fibers) = &seq.context {
        match build(fibers, DEFAULT_ENUMERATION_CAP) {
            Ok((terms, maps)) => {
                if terms != seq.terms {
                    failures.push("terms differ from the recomputed sequence".into());
                } else {
                    for (i, (m, fresh)) in seq.maps.iter().zip(&maps).enumerate() {
                        if let Some(x) = m
                            .source()
                            .basis()
                            .into_iter()
                            .find(|x| m.apply(x) != fresh.apply(x))
                        {
                            failures.push(format!(
                                "map {i} differs from the canonical map on {x:?}"
                            ));
                        }
                    }
                }
            }
            Err(e) => failures.push(format!("recomputation failed: {e}")),
        }
    }
    ExactnessReport {
        passed: failures.is_empty(),
        positions,
        failures,
    }
}
