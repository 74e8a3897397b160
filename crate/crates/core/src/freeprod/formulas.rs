use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::ab::{dual_group, kernel_generators, AbHom, AbSubgroup, Element, FiniteAbelianGroup};
use crate::coh::{cohomology_capped, h_nr, high_degree_cohomology, CochainValues, GModule, DEFAULT_COCHAIN_CAP};
use crate::error::{Error, Result};
use crate::family::{abelianize_family, FamilySpec, Fiber, ModuleFamily, TruncatedFamily};
use crate::grp::abelianization;

use super::oracle::{OracleH1, DEFAULT_ENUMERATION_CAP};
use super::restricted::{AbPair, Flavor, RestrictedAbFamily, TailClass};
use super::sum::BlockSum;

/// Size summary of a restricted product of cohomology pairs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HSummary {
    pub tail_class: TailClass,
    /// `∏ |H^i(G_t, A)|` over the exceptional indices.
    pub exceptional_order: u128,
    /// Whether the restricted product is a finite group.
    pub finite: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct HFormula {
    pub degree: usize,
    pub family: RestrictedAbFamily,
    pub summary: HSummary,
}

fn cohomology_pair(fiber: &Fiber, m: &GModule, degree: usize, cap: usize) -> Result<AbPair> {
    let h = cohomology_capped(m, degree, cap)?;
    let nr = h_nr(&h, &fiber.sub)?;
    Ok(AbPair {
        group: h.value().clone(),
        sub: nr,
    })
}

/// Fiberwise pairs `(H^i(G_t, A), H^i_nr(G_t, A))`, tagged discretized.
pub fn h_formula(spec: &FamilySpec, m: &ModuleFamily, degree: usize) -> Result<HFormula> {
    h_formula_capped(spec, m, degree, DEFAULT_COCHAIN_CAP)
}

pub fn h_formula_capped(spec: &FamilySpec, m: &ModuleFamily, degree: usize, cap: usize) -> Result<HFormula> {
    if !(1..=2).contains(&degree) {
        return Err(Error::Precondition(format!(
            "the restricted-product formula covers degrees 1 and 2, not {degree}"
        )));
    }
    let mut exceptional = BTreeMap::new();
    for (name, fiber) in spec.exceptional() {
        let module = m
            .exceptional()
            .get(name)
            .ok_or_else(|| Error::InvalidModule(format!("no module at {name}")))?;
        exceptional.insert(name.clone(), cohomology_pair(fiber, module, degree, cap)?);
    }
    let tail = match (spec.tail(), m.tail()) {
        (Some(f), Some(module)) => Some(cohomology_pair(f, module, degree, cap)?),
        (None, None) => None,
        _ => return Err(Error::InvalidModule("module family does not match the tail".into())),
    };
    let family = RestrictedAbFamily {
        exceptional,
        tail,
        flavor: Flavor::Discretized,
    };
    let summary = HSummary {
        tail_class: family.tail_class(),
        exceptional_order: family.exceptional_sum().order(),
        finite: family.is_finite(),
    };
    Ok(HFormula {
        degree,
        family,
        summary,
    })
}

/// `H^i(G, A) ≅ ⊕_t H^i(G_t, A)` for `i ≥ 3`, with one tail summand standing
/// for every tail index.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HighDegree {
    pub degree: usize,
    pub exceptional: BTreeMap<String, FiniteAbelianGroup>,
    pub tail: Option<FiniteAbelianGroup>,
    /// The whole sum when it is finite.
    pub total: Option<FiniteAbelianGroup>,
}

/// Requires `Ũ_t = G_t` everywhere. For a finite group `G_t/Ũ_t`, having
/// cohomological dimension at most 1 means being trivial.
pub fn high_degree_formula(spec: &FamilySpec, m: &ModuleFamily, degree: usize, cap: usize) -> Result<HighDegree> {
    if degree < 3 {
        return Err(Error::Precondition(format!("degree {degree} is below 3")));
    }
    for (name, fiber) in spec.fibers() {
        if !fiber.closure().is_whole() {
            return Err(Error::Precondition(format!(
                "fiber {name}: G/Ũ has order {}, but the high-degree formula needs \
                 cd(G/Ũ) ≤ 1, which for a finite group means G/Ũ = 1",
                fiber.closure().index()
            )));
        }
    }
    let mut exceptional = BTreeMap::new();
    for (name, module) in m.exceptional() {
        exceptional.insert(name.clone(), high_degree_cohomology(module, degree, cap)?);
    }
    let tail = m
        .tail()
        .map(|module| high_degree_cohomology(module, degree, cap))
        .transpose()?;
    let parts: Vec<FiniteAbelianGroup> = exceptional.values().cloned().collect();
    let total = match &tail {
        Some(t) if !t.is_trivial() => None,
        _ => Some(BlockSum::new(parts).group().clone()),
    };
    Ok(HighDegree {
        degree,
        exceptional,
        tail,
        total,
    })
}

/// Fiberwise `(G_t^ab, Ū_t)`, tagged compactified.
pub fn abelianization_formula(spec: &FamilySpec) -> RestrictedAbFamily {
    abelianize_family(spec)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CrossCheckFiber {
    pub index: String,
    pub h1: Vec<u64>,
    pub dual_ab_mod_p: Vec<u64>,
    pub h1_nr: Vec<u64>,
    pub annihilator: Vec<u64>,
    /// The character map `((G^ab)/p)^∨ → H¹(G, Z/p)` is an isomorphism.
    pub isomorphism: bool,
    /// It carries the annihilator of `Ū` onto `H¹_nr`.
    pub nr_match: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CrossCheckReport {
    pub prime: u64,
    pub passed: bool,
    pub fibers: Vec<CrossCheckFiber>,
}

fn cross_check_fiber(name: &str, fiber: &Fiber, p: u64) -> Result<CrossCheckFiber> {
    let g = &fiber.group;
    let zp = FiniteAbelianGroup::cyclic(p);
    let h1 = cohomology_capped(&GModule::trivial(g, &zp), 1, usize::MAX)?;
    let nr = h_nr(&h1, &fiber.sub)?;

    let ab = abelianization(g);
    let idx: Vec<usize> = ab
        .group
        .factors()
        .iter()
        .enumerate()
        .filter(|(_, &d)| d % p == 0)
        .map(|(i, _)| i)
        .collect();
    let k = idx.len();
    let dual = FiniteAbelianGroup::new(vec![p; k])?;
    let p_i = p as i64;
    let images: Vec<Element> = idx
        .iter()
        .map(|&i| {
            let values: Vec<Element> = g
                .elements()
                .map(|x| vec![ab.project(x)[i].rem_euclid(p_i)])
                .collect();
            let c = CochainValues {
                degree: 1,
                order: g.order(),
                values,
            };
            h1.class_of_values(&c)
                .ok_or_else(|| Error::Precondition(format!("character {i} of {name} is not a cocycle")))
        })
        .collect::<Result<_>>()?;
    let map = AbHom::from_images(dual.clone(), h1.value().clone(), &images)?;

    let ubar = ab.image_generators(g, &fiber.sub);
    let rows: Vec<Vec<i64>> = ubar
        .iter()
        .map(|u| idx.iter().map(|&i| u[i].rem_euclid(p_i)).collect())
        .collect();
    let ann_gens = kernel_generators(dual.factors(), &vec![p; rows.len()], &rows);
    let ann = AbSubgroup::new(&dual, ann_gens.clone());
    let ann_image = AbSubgroup::new(h1.value(), ann_gens.iter().map(|x| map.apply(x)).collect());

    Ok(CrossCheckFiber {
        index: name.to_string(),
        h1: h1.value().factors().to_vec(),
        dual_ab_mod_p: dual.factors().to_vec(),
        h1_nr: nr.group().factors().to_vec(),
        annihilator: ann.group().factors().to_vec(),
        isomorphism: map.is_isomorphism(),
        nr_match: ann_image == nr,
    })
}

/// Compares `H¹(G_t, Z/p)` with `((G_t^ab)/p)^∨` and `H¹_nr(G_t, Z/p)` with the
/// characters vanishing on `Ū_t`, fiber by fiber, through explicit characters.
pub fn cross_check_h1_vs_ab(spec: &FamilySpec, p: u64) -> Result<CrossCheckReport> {
    if !spec.prime_set().contains(&p) {
        return Err(Error::Precondition(format!("{p} is not in the prime set")));
    }
    let fibers = spec
        .fibers()
        .map(|(name, f)| cross_check_fiber(name, f, p))
        .collect::<Result<Vec<_>>>()?;
    Ok(CrossCheckReport {
        prime: p,
        passed: fibers.iter().all(|f| f.isomorphism && f.nr_match),
        fibers,
    })
}

/// A map `i: S → F` with a left inverse `r: F → S`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RetractionReport {
    pub sub: Vec<u64>,
    pub full: Vec<u64>,
    /// Kernel of the retraction, a complement of the image of `i`.
    pub complement: Vec<u64>,
    pub left_inverse: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SplittingReport {
    pub abelianization: RetractionReport,
    pub h1: Option<RetractionReport>,
    pub h1_skipped: Option<String>,
    pub passed: bool,
}

fn retraction_report(inc: &AbHom, ret: &AbHom) -> Result<RetractionReport> {
    let comp = ret.compose(inc)?;
    let kernel = ret.kernel();
    let left_inverse = comp == AbHom::identity(inc.source())
        && inc.source().order() * kernel.order() == inc.target().order();
    Ok(RetractionReport {
        sub: inc.source().factors().to_vec(),
        full: inc.target().factors().to_vec(),
        complement: kernel.group().factors().to_vec(),
        left_inverse,
    })
}

/// Shows the invariants of the free product over `subset` as direct summands
/// of those over all indices of a finite truncation. The retraction kills the
/// complementary factors; on `H¹` this needs them to act trivially on `A`.
pub fn splitting_check(t: &TruncatedFamily, subset: &BTreeSet<String>, m: &ModuleFamily) -> Result<SplittingReport> {
    if !t.beyond_is_trivial() {
        return Err(Error::Precondition(
            "the tail quotient beyond the truncation is nontrivial".into(),
        ));
    }
    let fin = &t.finite;
    if let Some(s) = subset.iter().find(|s| !fin.exceptional().contains_key(*s)) {
        return Err(Error::InvalidFamily(format!("index {s} is not in the truncation")));
    }
    let names: Vec<&String> = fin.exceptional().keys().collect();
    let chosen: Vec<usize> = (0..names.len()).filter(|&i| subset.contains(names[i])).collect();

    let abs: Vec<FiniteAbelianGroup> = fin
        .exceptional()
        .values()
        .map(|f| abelianization(&f.group).group)
        .collect();
    let full = BlockSum::new(abs.clone());
    let sub = BlockSum::new(chosen.iter().map(|&i| abs[i].clone()).collect());
    let rank_unit = |g: &FiniteAbelianGroup, k: usize| {
        let mut e = g.zero();
        e[k] = 1;
        e
    };
    let inc_images: Vec<Element> = (0..sub.group().rank())
        .map(|k| {
            let blocks = sub.blocks(&rank_unit(sub.group(), k));
            let mut all: Vec<Element> = abs.iter().map(FiniteAbelianGroup::zero).collect();
            for (b, &i) in blocks.into_iter().zip(&chosen) {
                all[i] = b;
            }
            full.from_blocks(&all)
        })
        .collect();
    let ret_images: Vec<Element> = (0..full.group().rank())
        .map(|k| {
            let blocks = full.blocks(&rank_unit(full.group(), k));
            sub.from_blocks(&chosen.iter().map(|&i| blocks[i].clone()).collect::<Vec<_>>())
        })
        .collect();
    let ab_report = retraction_report(
        &AbHom::from_images(sub.group().clone(), full.group().clone(), &inc_images)?,
        &AbHom::from_images(full.group().clone(), sub.group().clone(), &ret_images)?,
    )?;

    let modules = m.truncate(t)?;
    let moving = modules
        .exceptional()
        .iter()
        .find(|(k, mk)| !subset.contains(*k) && !mk.is_trivial_action());
    let (h1, h1_skipped) = match moving {
        Some((k, _)) => (
            None,
            Some(format!("factor {k} outside the subset acts nontrivially on A")),
        ),
        None => {
            let all: Vec<(String, GModule)> = modules
                .exceptional()
                .iter()
                .map(|(k, v)| (k.clone(), v.clone()))
                .collect();
            let part: Vec<(String, GModule)> = all.iter().filter(|(k, _)| subset.contains(k)).cloned().collect();
            let full_o = OracleH1::from_modules(&all, DEFAULT_ENUMERATION_CAP)?;
            let sub_o = OracleH1::from_modules(&part, DEFAULT_ENUMERATION_CAP)?;
            let classes = |from: &OracleH1, to: &OracleH1| -> Result<AbHom> {
                let images: Vec<Element> = (0..from.value().rank())
                    .map(|k| {
                        let rep = from.representative(&rank_unit(from.value(), k));
                        to.class_of_generator_values(&from.transfer(&rep, to))
                            .ok_or_else(|| Error::Precondition("transferred cocycle rejected".into()))
                    })
                    .collect::<Result<_>>()?;
                AbHom::from_images(from.value().clone(), to.value().clone(), &images)
            };
            (Some(retraction_report(&classes(&sub_o, &full_o)?, &classes(&full_o, &sub_o)?)?), None)
        }
    };
    let passed = ab_report.left_inverse && h1.as_ref().map_or(true, |r| r.left_inverse);
    Ok(SplittingReport {
        abelianization: ab_report,
        h1,
        h1_skipped,
        passed,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CorestrictionFiber {
    pub index: String,
    /// `|Ū'|` and `|Ū|` inside `G^ab`.
    pub sub_orders: (u128, u128),
    /// `|ann(Ū)|` and `|ann(Ū')|` inside `(G^ab)^∨`.
    pub annihilator_orders: (u128, u128),
    pub contained: bool,
    pub dual_injective: bool,
    pub equal: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CorestrictionReport {
    pub passed: bool,
    pub fibers: Vec<CorestrictionFiber>,
}

/// Compares the families `(G_t, U'_t)` and `(G_t, U_t)` with `U'_t ⊆ U_t`:
/// `Ū'_t ⊆ Ū_t` in `G_t^ab`, and dually `ann(Ū_t) ⊆ ann(Ū'_t)`.
pub fn corestriction_compare(spec: &FamilySpec, smaller: &FamilySpec) -> Result<CorestrictionReport> {
    let big: Vec<(&str, &Fiber)> = spec.fibers().collect();
    let small: Vec<(&str, &Fiber)> = smaller.fibers().collect();
    if big.len() != small.len() {
        return Err(Error::Precondition("the families have different index sets".into()));
    }
    let ab_big = abelianize_family(spec);
    let ab_small = abelianize_family(smaller);
    let pairs = |f: &RestrictedAbFamily| -> Vec<AbPair> {
        f.exceptional.values().cloned().chain(f.tail.clone()).collect()
    };
    let mut fibers = Vec::new();
    for (((name, fb), (name2, fs)), (pb, ps)) in big
        .iter()
        .zip(&small)
        .zip(pairs(&ab_big).into_iter().zip(pairs(&ab_small)))
    {
        if name != name2 || fb.group != fs.group {
            return Err(Error::Precondition(format!("fibers {name} and {name2} differ")));
        }
        if !fs.sub.is_subgroup_of(&fb.sub) {
            return Err(Error::Precondition(format!("fiber {name}: U' is not contained in U")));
        }
        let (_, pairing) = dual_group(&pb.group);
        let ann_big = pairing.annihilator(&pb.sub);
        let ann_small = pairing.annihilator(&ps.sub);
        let contained = ps.sub.is_subgroup_of(&pb.sub);
        fibers.push(CorestrictionFiber {
            index: name.to_string(),
            sub_orders: (ps.sub.order(), pb.sub.order()),
            annihilator_orders: (ann_big.order(), ann_small.order()),
            contained,
            dual_injective: ann_big.is_subgroup_of(&ann_small),
            equal: ps.sub == pb.sub,
        });
    }
    Ok(CorestrictionReport {
        passed: fibers.iter().all(|f| f.contained && f.dual_injective),
        fibers,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::{normal_closure_family, truncate};
    use crate::grp::{FiniteGroup, Subgroup};

    fn fam(ex: Vec<(&str, Fiber)>, tail: Option<Fiber>, ps: &[u64]) -> FamilySpec {
        FamilySpec::new(
            ex.into_iter().map(|(k, f)| (k.to_string(), f)).collect(),
            tail,
            ps.iter().copied().collect(),
        )
        .unwrap()
    }

    fn fiber(g: FiniteGroup, gens: &[usize]) -> Fiber {
        Fiber::generated(g, gens).unwrap()
    }

    #[test]
    fn h_formula_examples() {
        let c3 = FiniteGroup::cyclic(3);
        let s = fam(vec![], Some(fiber(c3, &[1])), &[3]);
        let m = ModuleFamily::trivial(&s, &FiniteAbelianGroup::cyclic(3));
        let h = h_formula(&s, &m, 1).unwrap();
        assert_eq!(h.family.tail.as_ref().unwrap().shape(), (vec![3], vec![]));
        assert_eq!(h.summary.tail_class, TailClass::DirectSum);
        assert_eq!(h.family.flavor, Flavor::Discretized);

        let v4 = FiniteGroup::direct_product(&FiniteGroup::cyclic(2), &FiniteGroup::cyclic(2)).unwrap();
        // index g·2 + h: the first factor is generated by 2
        let s = fam(vec![], Some(fiber(v4, &[2])), &[2]);
        let m = ModuleFamily::trivial(&s, &FiniteAbelianGroup::cyclic(2));
        let h = h_formula(&s, &m, 1).unwrap();
        assert_eq!(h.family.tail.as_ref().unwrap().shape(), (vec![2, 2], vec![2]));
        assert_eq!(h.summary.tail_class, TailClass::Restricted);

        let e = fam(vec![], None, &[2]);
        let h = h_formula(&e, &ModuleFamily::trivial(&e, &FiniteAbelianGroup::cyclic(2)), 2).unwrap();
        assert!(h.summary.finite && h.summary.exceptional_order == 1);
        assert!(h_formula(&e, &ModuleFamily::trivial(&e, &FiniteAbelianGroup::cyclic(2)), 3).is_err());
    }

    #[test]
    fn high_degree_examples() {
        let c2 = FiniteGroup::cyclic(2);
        let s = fam(vec![], Some(fiber(c2.clone(), &[1])), &[2, 3]);
        let m = ModuleFamily::trivial(&s, &FiniteAbelianGroup::cyclic(2));
        let h = high_degree_formula(&s, &m, 3, DEFAULT_COCHAIN_CAP).unwrap();
        assert_eq!(h.tail.as_ref().unwrap().factors(), &[2]);
        assert!(h.total.is_none());

        let m3 = ModuleFamily::trivial(&s, &FiniteAbelianGroup::cyclic(3));
        let h = high_degree_formula(&s, &m3, 3, DEFAULT_COCHAIN_CAP).unwrap();
        assert!(h.tail.as_ref().unwrap().is_trivial());
        assert!(h.total.as_ref().unwrap().is_trivial());

        let bad = fam(vec![("a", fiber(c2, &[]))], None, &[2]);
        let m = ModuleFamily::trivial(&bad, &FiniteAbelianGroup::cyclic(2));
        let err = high_degree_formula(&bad, &m, 3, DEFAULT_COCHAIN_CAP).unwrap_err();
        assert!(err.to_string().contains("cd"));
    }

    #[test]
    fn abelianization_examples() {
        let s = fam(
            vec![("a", fiber(FiniteGroup::cyclic(4), &[2]))],
            Some(fiber(FiniteGroup::cyclic(2), &[1])),
            &[2],
        );
        let f = abelianization_formula(&s);
        assert_eq!(f.exceptional["a"].shape(), (vec![4], vec![2]));
        assert_eq!(f.tail.as_ref().unwrap().shape(), (vec![2], vec![2]));
        assert_eq!(f.flavor, Flavor::Compactified);

        let s = fam(
            vec![
                ("a", fiber(FiniteGroup::cyclic(4), &[])),
                ("b", fiber(FiniteGroup::cyclic(2), &[])),
            ],
            None,
            &[2],
        );
        assert_eq!(abelianization_formula(&s).exceptional_sum().factors(), &[2, 4]);
    }

    #[test]
    fn cross_check_examples() {
        let s = fam(vec![("a", fiber(FiniteGroup::cyclic(4), &[2]))], None, &[2, 3]);
        let r = cross_check_h1_vs_ab(&s, 2).unwrap();
        assert!(r.passed);
        assert_eq!(r.fibers[0].h1, vec![2]);
        assert_eq!(r.fibers[0].h1_nr, vec![2]);
        assert!(cross_check_h1_vs_ab(&s, 3).unwrap().passed);
        assert!(cross_check_h1_vs_ab(&s, 5).is_err());

        let h = FiniteGroup::heisenberg(3);
        let s = fam(vec![("h", fiber(h, &[9]))], None, &[3]);
        let r = cross_check_h1_vs_ab(&s, 3).unwrap();
        assert!(r.passed);
        assert_eq!(r.fibers[0].h1, vec![3, 3]);
        assert_eq!(r.fibers[0].h1_nr, vec![3, 3]);

        let t = fam(vec![("e", Fiber::trivial())], None, &[2]);
        let r = cross_check_h1_vs_ab(&t, 2).unwrap();
        assert!(r.passed && r.fibers[0].h1.is_empty());

        let d4 = FiniteGroup::dihedral(4);
        let s = fam(vec![("d", fiber(d4, &[4]))], None, &[2]);
        let r = cross_check_h1_vs_ab(&s, 2).unwrap();
        assert!(r.passed);
        assert_eq!(r.fibers[0].h1_nr, vec![2]);
    }

    #[test]
    fn splitting_examples() {
        let s = fam(
            vec![
                ("a", fiber(FiniteGroup::cyclic(4), &[])),
                ("b", fiber(FiniteGroup::cyclic(2), &[])),
                ("c", fiber(FiniteGroup::cyclic(2), &[])),
            ],
            None,
            &[2],
        );
        let t = truncate(&s, 0);
        let m = ModuleFamily::trivial(&s, &FiniteAbelianGroup::cyclic(2));
        let r = splitting_check(&t, &BTreeSet::from(["a".to_string()]), &m).unwrap();
        assert!(r.passed);
        let h1 = r.h1.unwrap();
        assert_eq!((h1.sub, h1.full), (vec![2], vec![2, 2, 2]));

        let all: BTreeSet<String> = ["a", "b", "c"].iter().map(|s| s.to_string()).collect();
        let r = splitting_check(&t, &all, &m).unwrap();
        assert!(r.passed && r.abelianization.complement.is_empty());
        let r = splitting_check(&t, &BTreeSet::new(), &m).unwrap();
        assert!(r.passed && r.h1.unwrap().sub.is_empty());
    }

    #[test]
    fn splitting_skips_moving_complement() {
        let c2 = FiniteGroup::cyclic(2);
        let z3 = FiniteAbelianGroup::cyclic(3);
        let s = fam(vec![("a", fiber(c2.clone(), &[])), ("b", fiber(c2.clone(), &[]))], None, &[2, 3]);
        let neg = GModule::from_generators(&c2, &z3, &[1], &[vec![vec![-1]]]).unwrap();
        let m = ModuleFamily::new(&s, z3, BTreeMap::from([("b".to_string(), neg)]), None).unwrap();
        let r = splitting_check(&truncate(&s, 0), &BTreeSet::from(["a".to_string()]), &m).unwrap();
        assert!(r.h1.is_none() && r.h1_skipped.is_some());
        assert!(r.passed);
    }

    #[test]
    fn corestriction_examples() {
        let c4 = FiniteGroup::cyclic(4);
        let big = fam(vec![("a", fiber(c4.clone(), &[1]))], None, &[2]);
        let small = fam(vec![("a", fiber(c4.clone(), &[2]))], None, &[2]);
        let r = corestriction_compare(&big, &small).unwrap();
        assert!(r.passed && !r.fibers[0].equal);
        assert_eq!(r.fibers[0].annihilator_orders, (1, 2));
        assert!(corestriction_compare(&small, &big).is_err());
        assert!(corestriction_compare(&big, &big).unwrap().fibers[0].equal);

        let trivial = fam(vec![("a", Fiber::new(c4.clone(), Subgroup::trivial(&c4)).unwrap())], None, &[2]);
        let r = corestriction_compare(&big, &trivial).unwrap();
        assert_eq!(r.fibers[0].annihilator_orders, (1, 4));
    }

    #[test]
    fn normal_closure_invariance() {
        let d4 = FiniteGroup::dihedral(4);
        let s = fam(vec![("d", fiber(d4, &[4]))], Some(fiber(FiniteGroup::cyclic(2), &[])), &[2]);
        let n = normal_closure_family(&s);
        let a = FiniteAbelianGroup::cyclic(2);
        for deg in 1..=2 {
            let h = h_formula(&s, &ModuleFamily::trivial(&s, &a), deg).unwrap();
            let hn = h_formula(&n, &ModuleFamily::trivial(&n, &a), deg).unwrap();
            assert_eq!(h, hn);
        }
        assert_eq!(abelianization_formula(&s), abelianization_formula(&n));
        assert_eq!(cross_check_h1_vs_ab(&s, 2).unwrap(), cross_check_h1_vs_ab(&n, 2).unwrap());
    }
}
