use std::collections::BTreeMap;

use serde::Serialize;

use crate::ab::{dual_group, AbSubgroup, Element, FiniteAbelianGroup};

/// Topological flavor of a restricted product of finite abelian groups.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Flavor {
    Plain,
    /// Direct limit over finite subgroups.
    Discretized,
    /// Inverse limit over open subgroups of finite index.
    Compactified,
}

impl Flavor {
    pub fn dual(self) -> Flavor {
        match self {
            Flavor::Plain => Flavor::Plain,
            Flavor::Discretized => Flavor::Compactified,
            Flavor::Compactified => Flavor::Discretized,
        }
    }
}

/// A finite abelian group with a distinguished subgroup.
#[derive(Clone, Debug, PartialEq)]
pub struct AbPair {
    pub group: FiniteAbelianGroup,
    pub sub: AbSubgroup,
}

impl AbPair {
    pub fn new(group: FiniteAbelianGroup, generators: Vec<Element>) -> Self {
        let sub = AbSubgroup::new(&group, generators);
        AbPair { group, sub }
    }

    pub fn trivial() -> Self {
        Self::new(FiniteAbelianGroup::trivial(), Vec::new())
    }

    pub fn full(group: FiniteAbelianGroup) -> Self {
        let gens = group.basis();
        Self::new(group, gens)
    }

    pub fn sub_group(&self) -> &FiniteAbelianGroup {
        self.sub.group()
    }

    /// `(A^∨, ann(B))`, where `ann(B) ≅ (A/B)^∨`.
    pub fn dual(&self) -> AbPair {
        let (dual, pairing) = dual_group(&self.group);
        AbPair {
            group: dual,
            sub: pairing.annihilator(&self.sub),
        }
    }

    /// Invariant factors of `(A, B)`.
    pub fn shape(&self) -> (Vec<u64>, Vec<u64>) {
        (
            self.group.factors().to_vec(),
            self.sub_group().factors().to_vec(),
        )
    }
}

/// How the tail of a restricted product looks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TailClass {
    /// No tail: the index set is finite.
    Finite,
    /// `A_τ = 0`.
    Trivial,
    /// `B_τ = 0`: only finitely supported tuples, a countable direct sum.
    DirectSum,
    /// `B_τ = A_τ`: the full product.
    FullProduct,
    /// `0 ≠ B_τ ≠ A_τ`.
    Restricted,
}

/// Finitely described family `(A_t, B_t)` of finite abelian groups over a
/// one-point compactified index set: exceptional pairs plus one tail pattern.
#[derive(Clone, Debug, PartialEq)]
pub struct RestrictedAbFamily {
    pub exceptional: BTreeMap<String, AbPair>,
    pub tail: Option<AbPair>,
    pub flavor: Flavor,
}

impl RestrictedAbFamily {
    pub fn tail_class(&self) -> TailClass {
        match &self.tail {
            None => TailClass::Finite,
            Some(p) if p.group.is_trivial() => TailClass::Trivial,
            Some(p) if p.sub.order() == 1 => TailClass::DirectSum,
            Some(p) if p.sub.order() == p.group.order() => TailClass::FullProduct,
            Some(_) => TailClass::Restricted,
        }
    }

    /// Whether the restricted product is a finite group.
    pub fn is_finite(&self) -> bool {
        matches!(self.tail_class(), TailClass::Finite | TailClass::Trivial)
    }

    /// `⊕ A_t` over the exceptional indices.
    pub fn exceptional_sum(&self) -> FiniteAbelianGroup {
        let orders: Vec<u64> = self
            .exceptional
            .values()
            .flat_map(|p| p.group.factors().iter().copied())
            .collect();
        FiniteAbelianGroup::from_cyclic_orders(&orders)
    }

    /// Invariant-factor shape of every pair, for isomorphism comparisons.
    pub fn shape(&self) -> FamilyShape {
        FamilyShape {
            exceptional: self
                .exceptional
                .iter()
                .map(|(k, p)| (k.clone(), p.shape()))
                .collect(),
            tail: self.tail.as_ref().map(AbPair::shape),
            flavor: self.flavor,
        }
    }
}

/// Invariant factors of a [`RestrictedAbFamily`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FamilyShape {
    pub exceptional: BTreeMap<String, (Vec<u64>, Vec<u64>)>,
    pub tail: Option<(Vec<u64>, Vec<u64>)>,
    pub flavor: Flavor,
}

/// Fiberwise `(A_t^∨, (A_t/B_t)^∨)`, flipping compactified and discretized.
pub fn dualize_family(f: &RestrictedAbFamily) -> RestrictedAbFamily {
    RestrictedAbFamily {
        exceptional: f
            .exceptional
            .iter()
            .map(|(k, p)| (k.clone(), p.dual()))
            .collect(),
        tail: f.tail.as_ref().map(AbPair::dual),
        flavor: f.flavor.dual(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dual_pairs() {
        let p = AbPair::new(FiniteAbelianGroup::cyclic(4), vec![vec![2]]);
        let d = p.dual();
        assert_eq!(d.group.factors(), &[4]);
        assert_eq!(d.sub_group().factors(), &[2]);
        assert!(d.sub.contains(&[2]));

        let full = AbPair::full(FiniteAbelianGroup::new(vec![2, 4]).unwrap());
        assert_eq!(full.dual().sub.order(), 1);
        assert_eq!(full.dual().dual(), full);
    }

    #[test]
    fn tail_classes_and_flavor() {
        let mut f = RestrictedAbFamily {
            exceptional: BTreeMap::new(),
            tail: Some(AbPair::full(FiniteAbelianGroup::cyclic(3))),
            flavor: Flavor::Compactified,
        };
        assert_eq!(f.tail_class(), TailClass::FullProduct);
        let d = dualize_family(&f);
        assert_eq!(d.flavor, Flavor::Discretized);
        assert_eq!(d.tail_class(), TailClass::DirectSum);
        assert_eq!(dualize_family(&d), f);
        f.tail = None;
        assert!(f.is_finite());
    }
}
