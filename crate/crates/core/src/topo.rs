//! Open subsets of a family of finite groups over a one-point compactified
//! index set, and the open-map hypotheses for morphisms.
//!
//! A subset `V` is open exactly when, if it contains `*`, it contains `U_t`
//! for all but finitely many `t`. Fibers are finite and discrete, so there is
//! no condition inside a single fiber.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::family::{parse_tail_name, tail_name, FamilyMorphism, FamilySpec, IndexImage, TailMap};

pub type ElementSet = BTreeSet<usize>;

/// Finitely described subset of the total space of a family.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OpenSetSpec {
    pub exceptional_parts: BTreeMap<String, ElementSet>,
    /// `V ∩ G_{tau_i}` for every tail index not listed in `tail_exceptions`.
    pub tail_default: ElementSet,
    /// Keyed by the tail position `i ≥ 1`.
    pub tail_exceptions: BTreeMap<usize, ElementSet>,
    pub contains_star: bool,
}

fn check_subset(what: &str, set: &ElementSet, order: usize) -> Result<()> {
    match set.iter().find(|&&x| x >= order) {
        Some(x) => Err(Error::InvalidFamily(format!("{what}: element {x} out of range"))),
        None => Ok(()),
    }
}

impl OpenSetSpec {
    pub fn empty() -> Self {
        OpenSetSpec {
            exceptional_parts: BTreeMap::new(),
            tail_default: ElementSet::new(),
            tail_exceptions: BTreeMap::new(),
            contains_star: false,
        }
    }

    /// The whole total space.
    pub fn whole(spec: &FamilySpec) -> Self {
        OpenSetSpec {
            exceptional_parts: spec
                .exceptional()
                .iter()
                .map(|(k, f)| (k.clone(), f.group.elements().collect()))
                .collect(),
            tail_default: spec
                .tail()
                .map(|f| f.group.elements().collect())
                .unwrap_or_default(),
            tail_exceptions: BTreeMap::new(),
            contains_star: true,
        }
    }

    /// The subbundle `U` together with `*`.
    pub fn subbundle(spec: &FamilySpec) -> Self {
        OpenSetSpec {
            exceptional_parts: spec
                .exceptional()
                .iter()
                .map(|(k, f)| (k.clone(), f.sub.elements().iter().copied().collect()))
                .collect(),
            tail_default: spec
                .tail()
                .map(|f| f.sub.elements().iter().copied().collect())
                .unwrap_or_default(),
            tail_exceptions: BTreeMap::new(),
            contains_star: true,
        }
    }

    pub fn validate(&self, spec: &FamilySpec) -> Result<()> {
        for (name, set) in &self.exceptional_parts {
            let f = spec
                .exceptional()
                .get(name)
                .ok_or_else(|| Error::InvalidFamily(format!("open set names unknown index {name}")))?;
            check_subset(name, set, f.group.order())?;
        }
        match spec.tail() {
            Some(t) => {
                check_subset("tail", &self.tail_default, t.group.order())?;
                for (&i, set) in &self.tail_exceptions {
                    if i == 0 {
                        return Err(Error::InvalidFamily("tail positions start at 1".into()));
                    }
                    check_subset(&tail_name(i), set, t.group.order())?;
                }
            }
            None if !self.tail_default.is_empty() || !self.tail_exceptions.is_empty() => {
                return Err(Error::InvalidFamily("open set has tail parts but the family has no tail".into()))
            }
            None => {}
        }
        Ok(())
    }

    /// `V ∩ G_t` for an index name (exceptional or tail).
    pub fn part(&self, name: &str) -> ElementSet {
        if let Some(s) = self.exceptional_parts.get(name) {
            return s.clone();
        }
        match parse_tail_name(name) {
            Some(i) => self.tail_part(i).clone(),
            None => ElementSet::new(),
        }
    }

    pub fn tail_part(&self, i: usize) -> &ElementSet {
        self.tail_exceptions.get(&i).unwrap_or(&self.tail_default)
    }

    /// Tail positions whose part is given explicitly, plus the first generic one.
    fn tail_positions(&self, other: Option<&OpenSetSpec>) -> (Vec<usize>, usize) {
        let mut keys: BTreeSet<usize> = self.tail_exceptions.keys().copied().collect();
        if let Some(o) = other {
            keys.extend(o.tail_exceptions.keys().copied());
        }
        let generic = (1..).find(|i| !keys.contains(i)).expect("finite key set");
        (keys.into_iter().collect(), generic)
    }

    fn combine(&self, other: &OpenSetSpec, star: bool, op: impl Fn(&ElementSet, &ElementSet) -> ElementSet) -> OpenSetSpec {
        let names: BTreeSet<&String> = self
            .exceptional_parts
            .keys()
            .chain(other.exceptional_parts.keys())
            .collect();
        let empty = ElementSet::new();
        let get = |v: &OpenSetSpec, n: &String| v.exceptional_parts.get(n).cloned().unwrap_or_else(|| empty.clone());
        let (keys, _) = self.tail_positions(Some(other));
        OpenSetSpec {
            exceptional_parts: names
                .into_iter()
                .map(|n| (n.clone(), op(&get(self, n), &get(other, n))))
                .collect(),
            tail_default: op(&self.tail_default, &other.tail_default),
            tail_exceptions: keys
                .into_iter()
                .map(|i| (i, op(self.tail_part(i), other.tail_part(i))))
                .collect(),
            contains_star: star,
        }
    }

    pub fn intersection(&self, other: &OpenSetSpec) -> OpenSetSpec {
        self.combine(other, self.contains_star && other.contains_star, |a, b| {
            a.intersection(b).copied().collect()
        })
    }

    pub fn union(&self, other: &OpenSetSpec) -> OpenSetSpec {
        self.combine(other, self.contains_star || other.contains_star, |a, b| {
            a.union(b).copied().collect()
        })
    }
}

/// Result of [`is_open`]; `witness` names the first index whose part misses `U_t`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OpenCheck {
    pub open: bool,
    pub witness: Option<String>,
}

pub fn is_open(spec: &FamilySpec, v: &OpenSetSpec) -> OpenCheck {
    let open = OpenCheck {
        open: true,
        witness: None,
    };
    if !v.contains_star {
        return open;
    }
    let Some(tail) = spec.tail() else {
        return open;
    };
    // finitely many exceptional indices and tail exceptions never matter
    if tail.sub.elements().iter().all(|u| v.tail_default.contains(u)) {
        return open;
    }
    let (_, generic) = v.tail_positions(None);
    OpenCheck {
        open: false,
        witness: Some(tail_name(generic)),
    }
}

/// `φ⁻¹(V)` for a morphism into the family of `V`.
pub fn preimage(m: &FamilyMorphism, v: &OpenSetSpec) -> OpenSetSpec {
    let pull = |h: &crate::grp::GroupHom, set: &ElementSet| -> ElementSet {
        h.source().elements().filter(|&x| set.contains(&h.apply(x))).collect()
    };
    let all_or_nothing = |order: usize| -> ElementSet {
        if v.contains_star {
            (0..order).collect()
        } else {
            ElementSet::new()
        }
    };
    let src = m.source();
    let exceptional_parts = m
        .exceptional_maps()
        .iter()
        .map(|(name, (img, hom))| {
            let part = match (img, hom) {
                (IndexImage::Index(s), Some(h)) => pull(h, &v.part(s)),
                _ => all_or_nothing(src.exceptional()[name].group.order()),
            };
            (name.clone(), part)
        })
        .collect();
    let (tail_default, tail_exceptions) = match (src.tail(), m.tail_map()) {
        (Some(_), Some(TailMap::Tail(h))) => (
            pull(h, &v.tail_default),
            v.tail_exceptions
                .iter()
                .map(|(&i, s)| (i, pull(h, s)))
                .collect(),
        ),
        (Some(f), Some(TailMap::Star)) => (all_or_nothing(f.group.order()), BTreeMap::new()),
        _ => (ElementSet::new(), BTreeMap::new()),
    };
    OpenSetSpec {
        exceptional_parts,
        tail_default,
        tail_exceptions,
        contains_star: v.contains_star,
    }
}

/// `φ(W)` for a subset `W` of the source family.
pub fn image(m: &FamilyMorphism, w: &OpenSetSpec) -> OpenSetSpec {
    let push = |h: &crate::grp::GroupHom, set: &ElementSet| -> ElementSet {
        set.iter().map(|&x| h.apply(x)).collect()
    };
    let tgt = m.target();
    let mut star = w.contains_star;
    let mut exceptional_parts: BTreeMap<String, ElementSet> = tgt
        .exceptional()
        .keys()
        .map(|k| (k.clone(), ElementSet::new()))
        .collect();
    let mut tail_extra: BTreeMap<usize, ElementSet> = BTreeMap::new();
    for (name, (img, hom)) in m.exceptional_maps() {
        let part = w.part(name);
        match (img, hom) {
            (IndexImage::Index(s), Some(h)) => {
                let pushed = push(h, &part);
                match exceptional_parts.get_mut(s) {
                    Some(e) => e.extend(pushed),
                    None => {
                        let i = parse_tail_name(s).expect("validated target index");
                        tail_extra.entry(i).or_default().extend(pushed);
                    }
                }
            }
            _ => star |= !part.is_empty(),
        }
    }
    let (tail_default, mut tail_exceptions) = match (m.source().tail(), m.tail_map()) {
        (Some(_), Some(TailMap::Tail(h))) => (
            push(h, &w.tail_default),
            w.tail_exceptions
                .iter()
                .map(|(&i, s)| (i, push(h, s)))
                .collect::<BTreeMap<_, _>>(),
        ),
        (Some(_), Some(TailMap::Star)) => {
            star |= !w.tail_default.is_empty() || w.tail_exceptions.values().any(|s| !s.is_empty());
            (ElementSet::new(), BTreeMap::new())
        }
        _ => (ElementSet::new(), BTreeMap::new()),
    };
    for (i, extra) in tail_extra {
        let base = tail_exceptions.get(&i).unwrap_or(&tail_default).clone();
        tail_exceptions.insert(i, base.union(&extra).copied().collect());
    }
    OpenSetSpec {
        exceptional_parts,
        tail_default,
        tail_exceptions,
        contains_star: star,
    }
}

/// Hypotheses of the open mapping theorem, evaluated on a morphism.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OpenMapCertificate {
    pub fibrewise_surjective: bool,
    pub strict: bool,
    pub index_map_open: bool,
    pub star_unique_preimage: bool,
    /// All hypotheses hold, so the morphism is open. `false` makes no claim.
    pub certified_open: bool,
    pub failures: Vec<String>,
}

pub fn open_map_certificate(m: &FamilyMorphism) -> OpenMapCertificate {
    let p = m.predicates();
    let failures: Vec<String> = p
        .failures
        .into_iter()
        .filter(|f| !f.starts_with("fibrewise injective"))
        .collect();
    OpenMapCertificate {
        fibrewise_surjective: p.fibrewise_surjective,
        strict: p.strict,
        index_map_open: p.index_map_open,
        star_unique_preimage: p.star_unique_preimage,
        certified_open: p.fibrewise_surjective && p.strict && p.index_map_open && p.star_unique_preimage,
        failures,
    }
}
