//! Finitely described families `(G_t, U_t)` over `T = T₀ ∪ {*}`.
//!
//! `T₀` is a finite set of named exceptional indices plus, optionally, an
//! infinite sequence `tau1, tau2, …` of indices that all carry the same tail
//! fiber. The fiber over `*` is the trivial group.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::ab::{factorize, FiniteAbelianGroup};
use crate::coh::GModule;
use crate::error::{Error, Result};
use crate::freeprod::{AbPair, Flavor, RestrictedAbFamily};
use crate::grp::{abelianization, normal_closure, quotient_group, FiniteGroup, GroupHom, Subgroup};

pub const STAR: &str = "*";

/// Name of the `i`-th tail index (one-based).
pub fn tail_name(i: usize) -> String {
    format!("tau{i}")
}

/// Position of a tail index name, if `name` is one.
pub fn parse_tail_name(name: &str) -> Option<usize> {
    let digits = name.strip_prefix("tau")?;
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    digits.parse().ok().filter(|&i| i >= 1)
}

/// A fiber `(G_t, U_t)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fiber {
    pub group: FiniteGroup,
    pub sub: Subgroup,
}

impl Fiber {
    pub fn new(group: FiniteGroup, sub: Subgroup) -> Result<Self> {
        if sub.parent_order() != group.order() {
            return Err(Error::NotSubgroup("subgroup of a different group".into()));
        }
        Ok(Fiber { group, sub })
    }

    pub fn trivial() -> Self {
        let g = FiniteGroup::trivial();
        let sub = Subgroup::whole(&g);
        Fiber { group: g, sub }
    }

    /// `(G, U)` with `U` generated by the given elements.
    pub fn generated(group: FiniteGroup, gens: &[usize]) -> Result<Self> {
        if let Some(&x) = gens.iter().find(|&&x| x >= group.order()) {
            return Err(Error::NotSubgroup(format!("generator {x} out of range")));
        }
        let sub = Subgroup::generated(&group, gens);
        Ok(Fiber { group, sub })
    }

    pub fn closure(&self) -> Subgroup {
        normal_closure(&self.group, &self.sub).expect("subgroup of the fiber group")
    }

    pub fn with_closure(&self) -> Fiber {
        Fiber {
            group: self.group.clone(),
            sub: self.closure(),
        }
    }

    /// `(G^ab, image of U)`.
    pub fn abelianize(&self) -> AbPair {
        let ab = abelianization(&self.group);
        let gens = ab.image_generators(&self.group, &self.sub);
        AbPair::new(ab.group, gens)
    }
}

/// Family `(G_t, U_t)_{t ∈ T}` with exceptional fibers and an optional tail.
#[derive(Clone, Debug)]
pub struct FamilySpec {
    exceptional: BTreeMap<String, Fiber>,
    tail: Option<Fiber>,
    prime_set: BTreeSet<u64>,
    canonical: bool,
}

/// Equality ignores whether the family came out of [`normal_closure_family`].
impl PartialEq for FamilySpec {
    fn eq(&self, other: &Self) -> bool {
        self.exceptional == other.exceptional
            && self.tail == other.tail
            && self.prime_set == other.prime_set
    }
}

fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

impl FamilySpec {
    pub fn new(
        exceptional: BTreeMap<String, Fiber>,
        tail: Option<Fiber>,
        prime_set: BTreeSet<u64>,
    ) -> Result<Self> {
        if let Some(&p) = prime_set.iter().find(|&&p| !is_prime(p)) {
            return Err(Error::InvalidFamily(format!("{p} in the prime set is not prime")));
        }
        for (name, fiber) in &exceptional {
            if name.is_empty() || name == STAR {
                return Err(Error::InvalidFamily(format!("index name {name:?} is reserved")));
            }
            if tail.is_some() && parse_tail_name(name).is_some() {
                return Err(Error::InvalidFamily(format!(
                    "index name {name} clashes with the tail indices"
                )));
            }
            check_fiber(name, fiber, &prime_set)?;
        }
        if let Some(t) = &tail {
            check_fiber("tail", t, &prime_set)?;
        }
        Ok(FamilySpec {
            exceptional,
            tail,
            prime_set,
            canonical: false,
        })
    }

    pub fn exceptional(&self) -> &BTreeMap<String, Fiber> {
        &self.exceptional
    }

    pub fn tail(&self) -> Option<&Fiber> {
        self.tail.as_ref()
    }

    pub fn prime_set(&self) -> &BTreeSet<u64> {
        &self.prime_set
    }

    /// Whether every `U_t` is already its own normal closure by construction.
    pub fn is_canonical(&self) -> bool {
        self.canonical
    }

    /// Fiber over an index name, including tail names.
    pub fn fiber(&self, name: &str) -> Option<&Fiber> {
        self.exceptional.get(name).or_else(|| {
            parse_tail_name(name)
                .and(self.tail.as_ref())
                .filter(|_| !self.exceptional.contains_key(name))
        })
    }

    pub fn has_index(&self, name: &str) -> bool {
        self.fiber(name).is_some()
    }

    /// Exceptional fibers followed by the tail, labelled `"tail"`.
    pub fn fibers(&self) -> impl Iterator<Item = (&str, &Fiber)> {
        self.exceptional
            .iter()
            .map(|(k, f)| (k.as_str(), f))
            .chain(self.tail.iter().map(|f| ("tail", f)))
    }

    /// Applies a fiberwise transform to every fiber, tail included.
    fn map_fibers(&self, f: impl Fn(&Fiber) -> Fiber) -> FamilySpec {
        FamilySpec {
            exceptional: self
                .exceptional
                .iter()
                .map(|(k, v)| (k.clone(), f(v)))
                .collect(),
            tail: self.tail.as_ref().map(&f),
            prime_set: self.prime_set.clone(),
            canonical: self.canonical,
        }
    }
}

fn check_fiber(name: &str, fiber: &Fiber, primes: &BTreeSet<u64>) -> Result<()> {
    if fiber.sub.parent_order() != fiber.group.order() {
        return Err(Error::InvalidFamily(format!(
            "fiber {name}: U is a subgroup of a different group"
        )));
    }
    Subgroup::from_elements(&fiber.group, fiber.sub.elements())
        .map_err(|e| Error::InvalidFamily(format!("fiber {name}: {e}")))?;
    for (p, _) in factorize(fiber.group.order() as u64) {
        if !primes.contains(&p) {
            return Err(Error::InvalidFamily(format!(
                "fiber {name}: group order {} has prime divisor {p} outside the prime set",
                fiber.group.order()
            )));
        }
    }
    Ok(())
}

/// Per-fiber facts reported by [`validate_family`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FiberReport {
    pub index: String,
    pub order: usize,
    pub sub_order: usize,
    pub closure_order: usize,
    pub sub_normal: bool,
}

pub fn validate_family(spec: &FamilySpec) -> Result<Vec<FiberReport>> {
    let mut out = Vec::new();
    for (name, fiber) in spec.fibers() {
        check_fiber(name, fiber, &spec.prime_set)?;
        let closure = fiber.closure();
        out.push(FiberReport {
            index: name.to_string(),
            order: fiber.group.order(),
            sub_order: fiber.sub.order(),
            closure_order: closure.order(),
            sub_normal: closure == fiber.sub,
        });
    }
    Ok(out)
}

/// Replaces every `U_t` by its normal closure `Ũ_t`.
pub fn normal_closure_family(spec: &FamilySpec) -> FamilySpec {
    let mut out = spec.map_fibers(Fiber::with_closure);
    out.canonical = true;
    out
}

/// Fiberwise `(G_t^ab, Ū_t)`, tagged compactified.
pub fn abelianize_family(spec: &FamilySpec) -> RestrictedAbFamily {
    RestrictedAbFamily {
        exceptional: spec
            .exceptional
            .iter()
            .map(|(k, f)| (k.clone(), f.abelianize()))
            .collect(),
        tail: spec.tail.as_ref().map(Fiber::abelianize),
        flavor: Flavor::Compactified,
    }
}

/// Normal subgroups `V_t` per fiber; missing entries mean the trivial subgroup.
#[derive(Clone, Debug, Default)]
pub struct NormalChoice {
    pub exceptional: BTreeMap<String, Subgroup>,
    pub tail: Option<Subgroup>,
}

impl NormalChoice {
    /// `V_t = Ũ_t` everywhere.
    pub fn closures(spec: &FamilySpec) -> Self {
        NormalChoice {
            exceptional: spec
                .exceptional
                .iter()
                .map(|(k, f)| (k.clone(), f.closure()))
                .collect(),
            tail: spec.tail.as_ref().map(Fiber::closure),
        }
    }
}

/// Fibers `G_t/V_t` with the images of `U_t`, and the projection morphism.
pub fn quotient_family(spec: &FamilySpec, v: &NormalChoice) -> Result<(FamilySpec, FamilyMorphism)> {
    for name in v.exceptional.keys() {
        if !spec.exceptional.contains_key(name) {
            return Err(Error::InvalidFamily(format!("no exceptional index {name}")));
        }
    }
    if v.tail.is_some() && spec.tail.is_none() {
        return Err(Error::InvalidFamily("normal subgroup given for a missing tail".into()));
    }
    let quotient = |fiber: &Fiber, n: Option<&Subgroup>| -> Result<(Fiber, GroupHom)> {
        let n = n.cloned().unwrap_or_else(|| Subgroup::trivial(&fiber.group));
        let (q, proj) = quotient_group(&fiber.group, &n)?;
        let sub = proj.image_of(&fiber.sub);
        Ok((Fiber { group: q, sub }, proj))
    };
    let mut exceptional = BTreeMap::new();
    let mut maps = BTreeMap::new();
    for (name, fiber) in &spec.exceptional {
        let (f, proj) = quotient(fiber, v.exceptional.get(name))?;
        exceptional.insert(name.clone(), f);
        maps.insert(name.clone(), (IndexImage::Index(name.clone()), Some(proj)));
    }
    let (tail, tail_map) = match &spec.tail {
        Some(fiber) => {
            let (f, proj) = quotient(fiber, v.tail.as_ref())?;
            (Some(f), Some(TailMap::Tail(proj)))
        }
        None => (None, None),
    };
    let target = FamilySpec {
        exceptional,
        tail,
        prime_set: spec.prime_set.clone(),
        canonical: false,
    };
    let m = FamilyMorphism::new(spec.clone(), target.clone(), maps, tail_map)?;
    Ok((target, m))
}

/// Image of a non-star index under a morphism.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IndexImage {
    Index(String),
    Star,
}

/// What happens to the tail indices `tau_i` of the source.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TailMap {
    /// `tau_i ↦ tau_i` with the same fiber map for every `i`.
    Tail(GroupHom),
    /// Every tail index goes to `*`.
    Star,
}

/// Morphism of families: an index map fixing `*` plus fiber homomorphisms.
#[derive(Clone, Debug)]
pub struct FamilyMorphism {
    source: FamilySpec,
    target: FamilySpec,
    exceptional: BTreeMap<String, (IndexImage, Option<GroupHom>)>,
    tail: Option<TailMap>,
}

/// Hypotheses evaluated on a morphism.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MorphismPredicates {
    pub strict: bool,
    pub fibrewise_surjective: bool,
    pub fibrewise_injective: bool,
    pub star_unique_preimage: bool,
    pub index_map_open: bool,
    /// One line per failed predicate, naming the offending index.
    pub failures: Vec<String>,
}

impl FamilyMorphism {
    pub fn new(
        source: FamilySpec,
        target: FamilySpec,
        exceptional: BTreeMap<String, (IndexImage, Option<GroupHom>)>,
        tail: Option<TailMap>,
    ) -> Result<Self> {
        for name in source.exceptional.keys() {
            if !exceptional.contains_key(name) {
                return Err(Error::InvalidHom(format!("index {name} has no image")));
            }
        }
        for (name, (img, hom)) in &exceptional {
            let fiber = source
                .exceptional
                .get(name)
                .ok_or_else(|| Error::InvalidHom(format!("unknown source index {name}")))?;
            match (img, hom) {
                (IndexImage::Star, None) => {}
                (IndexImage::Star, Some(_)) => {
                    return Err(Error::InvalidHom(format!(
                        "index {name} goes to * but carries a fiber map"
                    )))
                }
                (IndexImage::Index(t), Some(h)) => {
                    let tf = target.fiber(t).ok_or_else(|| {
                        Error::InvalidHom(format!("index {name} maps to unknown index {t}"))
                    })?;
                    check_fiber_map(name, fiber, tf, h)?;
                }
                (IndexImage::Index(t), None) => {
                    return Err(Error::InvalidHom(format!(
                        "index {name} maps to {t} without a fiber map"
                    )))
                }
            }
        }
        match (&source.tail, &tail) {
            (None, None) => {}
            (Some(_), None) => return Err(Error::InvalidHom("tail indices have no image".into())),
            (None, Some(_)) => return Err(Error::InvalidHom("tail map without a source tail".into())),
            (Some(_), Some(TailMap::Star)) => {}
            (Some(sf), Some(TailMap::Tail(h))) => {
                let tf = target
                    .tail
                    .as_ref()
                    .ok_or_else(|| Error::InvalidHom("tail maps to a missing target tail".into()))?;
                check_fiber_map("tail", sf, tf, h)?;
            }
        }
        Ok(FamilyMorphism {
            source,
            target,
            exceptional,
            tail,
        })
    }

    pub fn identity(spec: &FamilySpec) -> Self {
        let exceptional = spec
            .exceptional
            .iter()
            .map(|(k, f)| {
                (
                    k.clone(),
                    (IndexImage::Index(k.clone()), Some(GroupHom::identity(&f.group))),
                )
            })
            .collect();
        let tail = spec
            .tail
            .as_ref()
            .map(|f| TailMap::Tail(GroupHom::identity(&f.group)));
        FamilyMorphism::new(spec.clone(), spec.clone(), exceptional, tail)
            .expect("identity is a morphism")
    }

    pub fn source(&self) -> &FamilySpec {
        &self.source
    }

    pub fn target(&self) -> &FamilySpec {
        &self.target
    }

    pub fn exceptional_maps(&self) -> &BTreeMap<String, (IndexImage, Option<GroupHom>)> {
        &self.exceptional
    }

    pub fn tail_map(&self) -> Option<&TailMap> {
        self.tail.as_ref()
    }

    /// Source fibers with their image index and fiber map (`None` for `*`),
    /// the tail reported under the label `"tail"`.
    fn fiber_maps(&self) -> Vec<(String, &Fiber, Option<(&Fiber, &GroupHom)>)> {
        let mut out = Vec::new();
        for (name, (img, hom)) in &self.exceptional {
            let src = &self.source.exceptional[name];
            let tgt = match (img, hom) {
                (IndexImage::Index(t), Some(h)) => Some((self.target.fiber(t).expect("validated"), h)),
                _ => None,
            };
            out.push((name.clone(), src, tgt));
        }
        if let (Some(sf), Some(tm)) = (&self.source.tail, &self.tail) {
            let tgt = match tm {
                TailMap::Tail(h) => Some((self.target.tail.as_ref().expect("validated"), h)),
                TailMap::Star => None,
            };
            out.push(("tail".into(), sf, tgt));
        }
        out
    }

    pub fn predicates(&self) -> MorphismPredicates {
        let mut failures = Vec::new();
        let mut strict = true;
        let mut surj = true;
        let mut inj = true;
        let mut star_unique = true;
        for (name, src, tgt) in self.fiber_maps() {
            match tgt {
                Some((tf, h)) => {
                    if h.preimage(&tf.sub) != src.sub {
                        strict = false;
                        failures.push(format!("strict: fiber {name} has preimage of V different from U"));
                    }
                    if !h.is_surjective() {
                        surj = false;
                        failures.push(format!("fibrewise surjective: fiber map at {name} is not onto"));
                    }
                    if !h.is_injective() {
                        inj = false;
                        failures.push(format!("fibrewise injective: fiber map at {name} has a kernel"));
                    }
                }
                None => {
                    star_unique = false;
                    failures.push(format!("star unique preimage: index {name} maps to *"));
                    if !src.sub.is_whole() {
                        strict = false;
                        failures.push(format!("strict: fiber {name} goes to * but U is proper"));
                    }
                    if src.group.order() > 1 {
                        inj = false;
                        failures.push(format!("fibrewise injective: nontrivial fiber {name} collapses to *"));
                    }
                }
            }
        }

        // index map surjectivity and injectivity on T₀
        let tail_to_tail = matches!(self.tail, Some(TailMap::Tail(_)));
        let mut hit: BTreeMap<String, usize> = BTreeMap::new();
        for (img, _) in self.exceptional.values() {
            if let IndexImage::Index(t) = img {
                *hit.entry(t.clone()).or_default() += 1;
            }
        }
        for t in self.target.exceptional.keys() {
            if !hit.contains_key(t) {
                surj = false;
                failures.push(format!("fibrewise surjective: target index {t} is not hit"));
            }
        }
        if self.target.tail.is_some() && !tail_to_tail {
            surj = false;
            failures.push("fibrewise surjective: target tail indices are not hit".into());
        }
        for (t, &count) in &hit {
            let collides_with_tail = tail_to_tail && parse_tail_name(t).is_some()
                && !self.target.exceptional.contains_key(t);
            if count > 1 || collides_with_tail {
                inj = false;
                failures.push(format!("fibrewise injective: index {t} has several preimages"));
            }
        }

        // T₀ points are isolated; * has cofinite neighbourhoods only when a tail exists
        let target_has_tail = self.target.tail.is_some();
        let mut open = true;
        if target_has_tail {
            for (name, (img, _)) in &self.exceptional {
                if *img == IndexImage::Star {
                    open = false;
                    failures.push(format!("index map open: isolated index {name} maps to *"));
                }
            }
            if !tail_to_tail {
                open = false;
                failures.push("index map open: neighbourhoods of * do not map onto neighbourhoods of *".into());
            }
        }
        MorphismPredicates {
            strict,
            fibrewise_surjective: surj,
            fibrewise_injective: inj,
            star_unique_preimage: star_unique,
            index_map_open: open,
            failures,
        }
    }
}

fn check_fiber_map(name: &str, src: &Fiber, tgt: &Fiber, h: &GroupHom) -> Result<()> {
    if h.source() != &src.group || h.target() != &tgt.group {
        return Err(Error::InvalidHom(format!(
            "fiber map at {name} has the wrong source or target"
        )));
    }
    if !h.image_of(&src.sub).is_subgroup_of(&tgt.sub) {
        return Err(Error::InvalidHom(format!(
            "fiber map at {name} does not send U into V"
        )));
    }
    Ok(())
}

/// Projective system of families; `transitions[i]` maps level `i + 1` to level `i`.
#[derive(Clone, Debug)]
pub struct Tower {
    pub levels: Vec<FamilySpec>,
    pub transitions: Vec<FamilyMorphism>,
}

impl Tower {
    pub fn new(levels: Vec<FamilySpec>, transitions: Vec<FamilyMorphism>) -> Result<Self> {
        if levels.is_empty() || transitions.len() + 1 != levels.len() {
            return Err(Error::InvalidFamily(
                "a tower needs one transition per adjacent pair of levels".into(),
            ));
        }
        for (i, m) in transitions.iter().enumerate() {
            if m.source != levels[i + 1] || m.target != levels[i] {
                return Err(Error::InvalidFamily(format!(
                    "transition {i} does not map level {} to level {i}",
                    i + 1
                )));
            }
        }
        Ok(Tower {
            levels,
            transitions,
        })
    }

    pub fn constant(spec: &FamilySpec, levels: usize) -> Self {
        let levels = levels.max(1);
        Tower {
            levels: vec![spec.clone(); levels],
            transitions: vec![FamilyMorphism::identity(spec); levels - 1],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TransitionReport {
    pub transition: usize,
    pub fibrewise_surjective_and_strict: bool,
    pub star_preimage_is_star: bool,
    pub failures: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TowerCertificate {
    pub passed: bool,
    pub transitions: Vec<TransitionReport>,
}

/// Checks, for every adjacent transition, that it is fibrewise surjective and
/// strict and that only `*` maps to `*`. Both properties pass to composites.
pub fn check_tower(t: &Tower) -> TowerCertificate {
    let transitions: Vec<TransitionReport> = t
        .transitions
        .iter()
        .enumerate()
        .map(|(i, m)| {
            let p = m.predicates();
            let failures: Vec<String> = p
                .failures
                .iter()
                .filter(|f| {
                    f.starts_with("strict")
                        || f.starts_with("fibrewise surjective")
                        || f.starts_with("star unique")
                })
                .cloned()
                .collect();
            TransitionReport {
                transition: i,
                fibrewise_surjective_and_strict: p.strict && p.fibrewise_surjective,
                star_preimage_is_star: p.star_unique_preimage,
                failures,
            }
        })
        .collect();
    TowerCertificate {
        passed: transitions
            .iter()
            .all(|r| r.fibrewise_surjective_and_strict && r.star_preimage_is_star),
        transitions,
    }
}

/// Finite truncation: the exceptional indices and `tau1..tauN`, with every
/// later tail index replaced by the quotient pattern `G_τ/Ũ_τ`.
#[derive(Clone, Debug)]
pub struct TruncatedFamily {
    pub base: FamilySpec,
    pub level: usize,
    /// The finite family on exceptional indices and `tau1..tauN`.
    pub finite: FamilySpec,
    /// `G_τ/Ũ_τ` for the indices beyond the truncation; `None` without a tail.
    pub beyond: Option<FiniteGroup>,
}

impl TruncatedFamily {
    /// Whether the beyond-part is trivial, so the truncation is a plain finite family.
    pub fn beyond_is_trivial(&self) -> bool {
        self.beyond.as_ref().map_or(true, |q| q.order() == 1)
    }

    pub fn indices(&self) -> Vec<String> {
        self.finite.exceptional.keys().cloned().collect()
    }
}

pub fn truncate(spec: &FamilySpec, n: usize) -> TruncatedFamily {
    let mut exceptional = spec.exceptional.clone();
    let mut beyond = None;
    if let Some(t) = &spec.tail {
        for i in 1..=n {
            exceptional.insert(tail_name(i), t.clone());
        }
        let (q, _) = quotient_group(&t.group, &t.closure()).expect("closure is normal");
        beyond = Some(q);
    }
    let finite = FamilySpec {
        exceptional,
        tail: None,
        prime_set: spec.prime_set.clone(),
        canonical: spec.canonical,
    };
    TruncatedFamily {
        base: spec.clone(),
        level: n,
        finite,
        beyond,
    }
}

/// The inclusion of level `N` into level `N + 1` of the truncations, as a
/// morphism of finite families.
pub fn truncation_embedding(lower: &TruncatedFamily, upper: &TruncatedFamily) -> Result<FamilyMorphism> {
    let maps = lower
        .finite
        .exceptional
        .iter()
        .map(|(k, f)| {
            if !upper.finite.exceptional.contains_key(k) {
                return Err(Error::InvalidFamily(format!("index {k} missing at the upper level")));
            }
            Ok((
                k.clone(),
                (IndexImage::Index(k.clone()), Some(GroupHom::identity(&f.group))),
            ))
        })
        .collect::<Result<_>>()?;
    FamilyMorphism::new(lower.finite.clone(), upper.finite.clone(), maps, None)
}

/// A finite abelian group with an action of every fiber group.
#[derive(Clone, Debug)]
pub struct ModuleFamily {
    coeff: FiniteAbelianGroup,
    exceptional: BTreeMap<String, GModule>,
    tail: Option<GModule>,
}

impl ModuleFamily {
    /// The tail action must be trivial on `U_τ`: otherwise the action of the
    /// free product on the discrete module would not be continuous.
    pub fn new(
        spec: &FamilySpec,
        coeff: FiniteAbelianGroup,
        exceptional: BTreeMap<String, GModule>,
        tail: Option<GModule>,
    ) -> Result<Self> {
        let mut ex = BTreeMap::new();
        for (name, fiber) in &spec.exceptional {
            let m = exceptional
                .get(name)
                .cloned()
                .unwrap_or_else(|| GModule::trivial(&fiber.group, &coeff));
            check_module(name, fiber, &coeff, &m)?;
            ex.insert(name.clone(), m);
        }
        if let Some(k) = exceptional.keys().find(|k| !spec.exceptional.contains_key(*k)) {
            return Err(Error::InvalidModule(format!("action given for unknown index {k}")));
        }
        let tail = match (&spec.tail, tail) {
            (None, None) => None,
            (None, Some(_)) => {
                return Err(Error::InvalidModule("tail action without a tail".into()))
            }
            (Some(f), m) => {
                let m = m.unwrap_or_else(|| GModule::trivial(&f.group, &coeff));
                check_module("tail", f, &coeff, &m)?;
                if f.sub.elements().iter().any(|&u| *m.action(u) != crate::ab::AbHom::identity(&coeff)) {
                    return Err(Error::InvalidModule(
                        "tail action must be trivial on U of the tail".into(),
                    ));
                }
                Some(m)
            }
        };
        Ok(ModuleFamily {
            coeff,
            exceptional: ex,
            tail,
        })
    }

    pub fn trivial(spec: &FamilySpec, coeff: &FiniteAbelianGroup) -> Self {
        Self::new(spec, coeff.clone(), BTreeMap::new(), None).expect("trivial actions")
    }

    pub fn coeff(&self) -> &FiniteAbelianGroup {
        &self.coeff
    }

    pub fn exceptional(&self) -> &BTreeMap<String, GModule> {
        &self.exceptional
    }

    pub fn tail(&self) -> Option<&GModule> {
        self.tail.as_ref()
    }

    /// Modules over every fiber, tail included, labelled as in [`FamilySpec::fibers`].
    pub fn modules(&self) -> impl Iterator<Item = (&str, &GModule)> {
        self.exceptional
            .iter()
            .map(|(k, m)| (k.as_str(), m))
            .chain(self.tail.iter().map(|m| ("tail", m)))
    }

    /// Modules over the finite family of a truncation.
    pub fn truncate(&self, t: &TruncatedFamily) -> Result<ModuleFamily> {
        let mut ex = self.exceptional.clone();
        if let Some(m) = &self.tail {
            for i in 1..=t.level {
                ex.insert(tail_name(i), m.clone());
            }
        }
        ModuleFamily::new(&t.finite, self.coeff.clone(), ex, None)
    }

    /// The same actions over a family with the same groups (for example its
    /// normal-closure replacement).
    pub fn over(&self, spec: &FamilySpec) -> Result<ModuleFamily> {
        ModuleFamily::new(spec, self.coeff.clone(), self.exceptional.clone(), self.tail.clone())
    }
}

fn check_module(name: &str, fiber: &Fiber, coeff: &FiniteAbelianGroup, m: &GModule) -> Result<()> {
    if m.group() != &fiber.group || m.coeff() != coeff {
        return Err(Error::InvalidModule(format!(
            "module at {name} is over the wrong group or coefficients"
        )));
    }
    Ok(())
}
