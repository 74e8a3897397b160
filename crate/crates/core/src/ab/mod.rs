//! Finite abelian groups in invariant-factor form, homomorphisms between
//! them, Hom groups and Pontryagin duality.

mod snf;
mod subquotient;
mod zpk;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use snf::{mat_mul, smith_normal_form, smith_normal_form_with_cols, SmithForm};
pub use subquotient::Subquotient;
pub(crate) use subquotient::{factorize, kernel_generators};

/// Element vector of a direct sum of cyclic groups.
pub type Element = Vec<i64>;

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// `Z/d_1 ⊕ … ⊕ Z/d_r` with `d_1 | d_2 | … | d_r` and every `d_i ≥ 2`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize, Default)]
pub struct FiniteAbelianGroup {
    factors: Vec<u64>,
}

impl fmt::Debug for FiniteAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for FiniteAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.factors.iter().map(|d| format!("Z/{d}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl FiniteAbelianGroup {
    pub fn new(factors: Vec<u64>) -> Result<Self> {
        if let Some(&d) = factors.iter().find(|&&d| d < 2) {
            return Err(Error::InvalidAbelian(format!(
                "invariant factor {d} is smaller than 2"
            )));
        }
        if let Some(w) = factors.windows(2).find(|w| w[1] % w[0] != 0) {
            return Err(Error::InvalidAbelian(format!(
                "invariant factors {} and {} do not form a divisibility chain",
                w[0], w[1]
            )));
        }
        Ok(FiniteAbelianGroup { factors })
    }

    pub fn trivial() -> Self {
        FiniteAbelianGroup::default()
    }

    pub fn cyclic(n: u64) -> Self {
        assert!(n >= 1, "cyclic group of order 0");
        if n == 1 {
            Self::trivial()
        } else {
            FiniteAbelianGroup { factors: vec![n] }
        }
    }

    /// Normal form of `Z/n_1 ⊕ … ⊕ Z/n_k` for arbitrary orders (1s are dropped).
    pub fn from_cyclic_orders(orders: &[u64]) -> Self {
        let mut by_prime: std::collections::BTreeMap<u64, Vec<u32>> = Default::default();
        for &n in orders {
            assert!(n >= 1, "cyclic group of order 0");
            for (p, e) in factorize(n) {
                by_prime.entry(p).or_default().push(e);
            }
        }
        let width = by_prime.values().map(Vec::len).max().unwrap_or(0);
        let mut factors = vec![1u64; width];
        for (p, mut exps) in by_prime {
            exps.sort_unstable_by(|a, b| b.cmp(a));
            for (slot, e) in exps.into_iter().enumerate() {
                factors[width - 1 - slot] *= p.pow(e);
            }
        }
        FiniteAbelianGroup { factors }
    }

    pub fn factors(&self) -> &[u64] {
        &self.factors
    }

    pub fn rank(&self) -> usize {
        self.factors.len()
    }

    /// Group order; saturates at `u128::MAX`.
    pub fn order(&self) -> u128 {
        self.factors
            .iter()
            .fold(1u128, |acc, &d| acc.saturating_mul(u128::from(d)))
    }

    pub fn exponent(&self) -> u64 {
        self.factors.last().copied().unwrap_or(1)
    }

    pub fn is_trivial(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn zero(&self) -> Element {
        vec![0; self.rank()]
    }

    pub fn basis(&self) -> Vec<Element> {
        (0..self.rank())
            .map(|i| {
                let mut e = self.zero();
                e[i] = 1;
                e
            })
            .collect()
    }

    pub fn reduce(&self, x: &[i64]) -> Element {
        assert_eq!(x.len(), self.rank(), "element length mismatch");
        x.iter()
            .zip(&self.factors)
            .map(|(&v, &d)| v.rem_euclid(d as i64))
            .collect()
    }

    pub fn add(&self, x: &[i64], y: &[i64]) -> Element {
        let s: Vec<i64> = x.iter().zip(y).map(|(a, b)| a + b).collect();
        self.reduce(&s)
    }

    pub fn sub(&self, x: &[i64], y: &[i64]) -> Element {
        let s: Vec<i64> = x.iter().zip(y).map(|(a, b)| a - b).collect();
        self.reduce(&s)
    }

    pub fn scale(&self, c: i64, x: &[i64]) -> Element {
        let s: Vec<i64> = x
            .iter()
            .zip(&self.factors)
            .map(|(&a, &d)| ((c as i128 * a as i128).rem_euclid(d as i128)) as i64)
            .collect();
        s
    }

    pub fn is_zero(&self, x: &[i64]) -> bool {
        self.reduce(x).iter().all(|&v| v == 0)
    }

    pub fn element_order(&self, x: &[i64]) -> u64 {
        self.reduce(x)
            .iter()
            .zip(&self.factors)
            .map(|(&v, &d)| d / gcd(v as u64, d))
            .fold(1, |acc, o| acc / gcd(acc, o) * o)
    }

    /// All elements in lexicographic order. Intended for small groups.
    pub fn elements(&self) -> Vec<Element> {
        let mut out = vec![Vec::new()];
        for &d in &self.factors {
            out = out
                .into_iter()
                .flat_map(|prefix| {
                    (0..d as i64).map(move |v| {
                        let mut e = prefix.clone();
                        e.push(v);
                        e
                    })
                })
                .collect();
        }
        out
    }

    /// Invariant-factor form of a direct sum together with coordinates.
    pub fn direct_sum(parts: &[FiniteAbelianGroup]) -> Subquotient {
        let moduli: Vec<u64> = parts.iter().flat_map(|g| g.factors.iter().copied()).collect();
        Subquotient::whole(&moduli)
    }
}

/// Homomorphism of finite abelian groups given by an integer matrix acting on
/// column vectors: column `j` is the image of the `j`-th basis element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbHom {
    source: FiniteAbelianGroup,
    target: FiniteAbelianGroup,
    matrix: Vec<Vec<i64>>,
}

impl AbHom {
    pub fn new(
        source: FiniteAbelianGroup,
        target: FiniteAbelianGroup,
        matrix: Vec<Vec<i64>>,
    ) -> Result<Self> {
        if matrix.len() != target.rank() || matrix.iter().any(|r| r.len() != source.rank()) {
            return Err(Error::InvalidHom(format!(
                "matrix shape does not match {} -> {}",
                source, target
            )));
        }
        let matrix: Vec<Vec<i64>> = matrix
            .iter()
            .zip(target.factors())
            .map(|(row, &e)| row.iter().map(|&x| x.rem_euclid(e as i64)).collect())
            .collect();
        let h = AbHom {
            source,
            target,
            matrix,
        };
        if let Some(j) = h.relation_violation() {
            return Err(Error::InvalidHom(format!(
                "image of generator {j} has order not dividing {}",
                h.source.factors()[j]
            )));
        }
        Ok(h)
    }

    /// Builds the map from the images of the source basis.
    pub fn from_images(
        source: FiniteAbelianGroup,
        target: FiniteAbelianGroup,
        images: &[Element],
    ) -> Result<Self> {
        if images.len() != source.rank() {
            return Err(Error::InvalidHom("wrong number of images".into()));
        }
        let matrix = (0..target.rank())
            .map(|i| images.iter().map(|img| img[i]).collect())
            .collect();
        Self::new(source, target, matrix)
    }

    pub fn identity(a: &FiniteAbelianGroup) -> Self {
        AbHom::from_images(a.clone(), a.clone(), &a.basis()).expect("identity is a hom")
    }

    pub fn zero(source: &FiniteAbelianGroup, target: &FiniteAbelianGroup) -> Self {
        AbHom {
            source: source.clone(),
            target: target.clone(),
            matrix: vec![vec![0; source.rank()]; target.rank()],
        }
    }

    pub fn source(&self) -> &FiniteAbelianGroup {
        &self.source
    }

    pub fn target(&self) -> &FiniteAbelianGroup {
        &self.target
    }

    pub fn matrix(&self) -> &[Vec<i64>] {
        &self.matrix
    }

    /// Replaces one entry without any validation. Used to build mutated maps
    /// for sensitivity tests.
    pub fn with_entry_unchecked(&self, row: usize, col: usize, value: i64) -> Self {
        let mut h = self.clone();
        let e = h.target.factors()[row] as i64;
        h.matrix[row][col] = value.rem_euclid(e);
        h
    }

    /// First source generator whose image violates the source relation.
    pub fn relation_violation(&self) -> Option<usize> {
        (0..self.source.rank()).find(|&j| {
            let d = self.source.factors()[j] as i64;
            let img: Vec<i64> = self.matrix.iter().map(|r| r[j] * d).collect();
            !self.target.is_zero(&img)
        })
    }

    pub fn is_well_defined(&self) -> bool {
        self.relation_violation().is_none()
    }

    pub fn apply(&self, x: &[i64]) -> Element {
        assert_eq!(x.len(), self.source.rank(), "element length mismatch");
        let y: Vec<i64> = self
            .matrix
            .iter()
            .zip(self.target.factors())
            .map(|(row, &e)| {
                row.iter()
                    .zip(x)
                    .map(|(&a, &b)| a as i128 * b as i128)
                    .sum::<i128>()
                    .rem_euclid(e as i128) as i64
            })
            .collect();
        y
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &AbHom) -> Result<AbHom> {
        if inner.target != self.source {
            return Err(Error::InvalidHom("composition of incompatible maps".into()));
        }
        let images: Vec<Element> = inner
            .source
            .basis()
            .iter()
            .map(|e| self.apply(&inner.apply(e)))
            .collect();
        AbHom::from_images(inner.source.clone(), self.target.clone(), &images)
    }

    pub fn kernel(&self) -> AbSubgroup {
        let gens = kernel_generators(self.source.factors(), self.target.factors(), &self.matrix);
        AbSubgroup::new(&self.source, gens)
    }

    pub fn image(&self) -> AbSubgroup {
        let gens = self.source.basis().iter().map(|e| self.apply(e)).collect();
        AbSubgroup::new(&self.target, gens)
    }

    /// Cokernel in invariant-factor form with the projection from the target.
    pub fn cokernel(&self) -> (FiniteAbelianGroup, AbHom) {
        self.image().quotient()
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.iter().flatten().all(|&x| x == 0)
    }

    pub fn is_injective(&self) -> bool {
        self.kernel().order() == 1
    }

    pub fn is_surjective(&self) -> bool {
        self.image().order() == self.target.order()
    }

    pub fn is_isomorphism(&self) -> bool {
        self.source.order() == self.target.order() && self.is_injective()
    }
}

/// Subgroup of a finite abelian group, given by generators and presented in
/// invariant-factor form.
#[derive(Clone, Debug)]
pub struct AbSubgroup {
    ambient: FiniteAbelianGroup,
    generators: Vec<Element>,
    sq: Subquotient,
}

impl AbSubgroup {
    pub fn new(ambient: &FiniteAbelianGroup, generators: Vec<Element>) -> Self {
        let generators: Vec<Element> = generators.iter().map(|g| ambient.reduce(g)).collect();
        let sq = Subquotient::new(ambient.factors(), &generators, &[]);
        AbSubgroup {
            ambient: ambient.clone(),
            generators,
            sq,
        }
    }

    pub fn trivial(ambient: &FiniteAbelianGroup) -> Self {
        Self::new(ambient, Vec::new())
    }

    pub fn whole(ambient: &FiniteAbelianGroup) -> Self {
        Self::new(ambient, ambient.basis())
    }

    pub fn ambient(&self) -> &FiniteAbelianGroup {
        &self.ambient
    }

    pub fn generators(&self) -> &[Element] {
        &self.generators
    }

    /// The subgroup in invariant-factor form.
    pub fn group(&self) -> &FiniteAbelianGroup {
        self.sq.group()
    }

    pub fn order(&self) -> u128 {
        self.group().order()
    }

    pub fn contains(&self, x: &[i64]) -> bool {
        self.sq.in_numerator(x)
    }

    /// Coordinates of `x` in [`Self::group`], if `x` lies in the subgroup.
    pub fn coords(&self, x: &[i64]) -> Option<Element> {
        self.sq.coords(x)
    }

    pub fn inclusion(&self) -> AbHom {
        AbHom::from_images(
            self.group().clone(),
            self.ambient.clone(),
            &self.sq.reps().to_vec(),
        )
        .expect("inclusion is a hom")
    }

    pub fn is_subgroup_of(&self, other: &AbSubgroup) -> bool {
        self.ambient == other.ambient && self.sq.reps().iter().all(|g| other.contains(g))
    }

    /// `ambient / self` with its projection.
    pub fn quotient(&self) -> (FiniteAbelianGroup, AbHom) {
        let sq = Subquotient::new(self.ambient.factors(), &self.ambient.basis(), &self.generators);
        let images: Vec<Element> = self
            .ambient
            .basis()
            .iter()
            .map(|e| sq.coords(e).expect("basis lies in the whole group"))
            .collect();
        let q = sq.group().clone();
        let proj = AbHom::from_images(self.ambient.clone(), q.clone(), &images)
            .expect("projection is a hom");
        (q, proj)
    }
}

impl PartialEq for AbSubgroup {
    fn eq(&self, other: &Self) -> bool {
        self.is_subgroup_of(other) && other.is_subgroup_of(self)
    }
}

/// Value in `Q/Z`, stored as a reduced fraction `num/den` with `0 ≤ num < den`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct QmodZ {
    pub num: u64,
    pub den: u64,
}

impl QmodZ {
    pub fn new(num: i64, den: u64) -> Self {
        let n = num.rem_euclid(den as i64) as u64;
        let g = gcd(n, den);
        let g = if g == 0 { den } else { g };
        QmodZ {
            num: n / g,
            den: den / g,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.num == 0
    }
}

/// Evaluation pairing `A × A^∨ → Q/Z`, `(x, χ) ↦ Σ x_i χ_i / d_i`, identifying
/// `A^∨` with a group having the same invariant factors as `A`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualPairing {
    left: FiniteAbelianGroup,
    right: FiniteAbelianGroup,
}

impl DualPairing {
    pub fn left(&self) -> &FiniteAbelianGroup {
        &self.left
    }

    pub fn right(&self) -> &FiniteAbelianGroup {
        &self.right
    }

    pub fn evaluate(&self, x: &[i64], chi: &[i64]) -> QmodZ {
        let e = self.left.exponent();
        let x = self.left.reduce(x);
        let chi = self.right.reduce(chi);
        let total: i128 = x
            .iter()
            .zip(&chi)
            .zip(self.left.factors())
            .map(|((&a, &c), &d)| a as i128 * c as i128 * (e / d) as i128)
            .sum();
        QmodZ::new(total.rem_euclid(e as i128) as i64, e)
    }

    /// The pairing with the roles swapped, realizing `A^∨∨ = A`.
    pub fn transpose(&self) -> DualPairing {
        DualPairing {
            left: self.right.clone(),
            right: self.left.clone(),
        }
    }

    /// Characters vanishing on `sub` (a subgroup of the left group).
    pub fn annihilator(&self, sub: &AbSubgroup) -> AbSubgroup {
        assert_eq!(sub.ambient(), &self.left, "subgroup of the wrong group");
        let e = self.left.exponent();
        let matrix: Vec<Vec<i64>> = sub
            .generators()
            .iter()
            .map(|b| {
                b.iter()
                    .zip(self.left.factors())
                    .map(|(&bi, &d)| (bi as i128 * (e / d) as i128).rem_euclid(e as i128) as i64)
                    .collect()
            })
            .collect();
        let tgt = vec![e; matrix.len()];
        let gens = kernel_generators(self.right.factors(), &tgt, &matrix);
        AbSubgroup::new(&self.right, gens)
    }
}

/// Pontryagin dual of `A` with its evaluation pairing.
pub fn dual_group(a: &FiniteAbelianGroup) -> (FiniteAbelianGroup, DualPairing) {
    let dual = a.clone();
    (
        dual.clone(),
        DualPairing {
            left: a.clone(),
            right: dual,
        },
    )
}

/// `Hom(A, B) ≅ ⊕_{i,j} Z/gcd(d_i, e_j)`.
pub fn hom_group(a: &FiniteAbelianGroup, b: &FiniteAbelianGroup) -> FiniteAbelianGroup {
    let orders: Vec<u64> = a
        .factors()
        .iter()
        .flat_map(|&d| b.factors().iter().map(move |&e| gcd(d, e)))
        .collect();
    FiniteAbelianGroup::from_cyclic_orders(&orders)
}

/// Subgroup, quotient and annihilator attached to a generator list.
#[derive(Clone, Debug)]
pub struct SubQuotientData {
    pub sub: AbSubgroup,
    pub quotient: FiniteAbelianGroup,
    pub projection: AbHom,
    pub annihilator: AbSubgroup,
    pub pairing: DualPairing,
    /// `annihilator ≅ (A/B)^∨` and `|B|·|annihilator| = |A|`.
    pub certified: bool,
}

pub fn sub_and_quotient(a: &FiniteAbelianGroup, generators: Vec<Element>) -> SubQuotientData {
    let sub = AbSubgroup::new(a, generators);
    let (quotient, projection) = sub.quotient();
    let (_, pairing) = dual_group(a);
    let annihilator = pairing.annihilator(&sub);
    let (quotient_dual, _) = dual_group(&quotient);
    let certified = annihilator.group() == &quotient_dual
        && sub.order() * annihilator.order() == a.order();
    SubQuotientData {
        sub,
        quotient,
        projection,
        annihilator,
        pairing,
        certified,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn fag(f: &[u64]) -> FiniteAbelianGroup {
        FiniteAbelianGroup::new(f.to_vec()).unwrap()
    }

    #[test]
    fn rejects_broken_chain() {
        assert!(FiniteAbelianGroup::new(vec![4, 6]).is_err());
        assert!(FiniteAbelianGroup::new(vec![1]).is_err());
        assert!(FiniteAbelianGroup::new(vec![2, 4]).is_ok());
    }

    #[test]
    fn normal_form_of_cyclic_orders() {
        assert_eq!(FiniteAbelianGroup::from_cyclic_orders(&[2, 3]).factors(), &[6]);
        assert_eq!(
            FiniteAbelianGroup::from_cyclic_orders(&[4, 2, 1, 6]).factors(),
            &[2, 2, 12]
        );
        assert!(FiniteAbelianGroup::from_cyclic_orders(&[1, 1]).is_trivial());
    }

    #[test]
    fn hom_groups() {
        assert_eq!(hom_group(&fag(&[4]), &fag(&[2])), fag(&[2]));
        assert!(hom_group(&fag(&[2]), &fag(&[3])).is_trivial());
        assert_eq!(hom_group(&fag(&[5, 5]), &fag(&[5])), fag(&[5, 5]));
    }

    #[test]
    fn dual_of_cyclic() {
        let (d, pairing) = dual_group(&fag(&[4]));
        assert_eq!(d, fag(&[4]));
        assert_eq!(pairing.evaluate(&[1], &[1]), QmodZ { num: 1, den: 4 });
        assert_eq!(pairing.evaluate(&[2], &[3]), QmodZ { num: 1, den: 2 });
        let (d, _) = dual_group(&fag(&[2, 4]));
        assert_eq!(d, fag(&[2, 4]));
        assert!(dual_group(&FiniteAbelianGroup::trivial()).0.is_trivial());
    }

    #[test]
    fn sub_and_quotient_of_z4() {
        let a = fag(&[4]);
        let data = sub_and_quotient(&a, vec![vec![2]]);
        assert_eq!(data.sub.group(), &fag(&[2]));
        assert_eq!(data.quotient, fag(&[2]));
        assert_eq!(data.annihilator.group(), &fag(&[2]));
        assert!(data.annihilator.contains(&[2]));
        assert!(data.certified);

        let all = sub_and_quotient(&a, vec![vec![1]]);
        assert!(all.quotient.is_trivial());
        assert!(all.annihilator.group().is_trivial());

        let none = sub_and_quotient(&a, vec![]);
        assert_eq!(none.quotient, a);
        assert_eq!(none.annihilator.group(), &a);
    }

    #[test]
    fn hom_kernel_image_cokernel() {
        // Z/4 → Z/2 ⊕ Z/4, 1 ↦ (1, 2)
        let h = AbHom::from_images(fag(&[4]), fag(&[2, 4]), &[vec![1, 2]]).unwrap();
        assert_eq!(h.kernel().group(), &fag(&[2]));
        assert_eq!(h.image().group(), &fag(&[2]));
        let (coker, proj) = h.cokernel();
        assert_eq!(coker.order(), 4);
        assert!(proj.compose(&h).unwrap().is_zero());
        assert!(AbHom::from_images(fag(&[2]), fag(&[4]), &[vec![1]]).is_err());
    }

    #[test]
    fn annihilator_double_dual_restores_subgroup() {
        let a = fag(&[2, 4]);
        let sub = AbSubgroup::new(&a, vec![vec![1, 2]]);
        let (_, pairing) = dual_group(&a);
        let ann = pairing.annihilator(&sub);
        let back = pairing.transpose().annihilator(&ann);
        assert_eq!(back, sub);
    }

    fn arb_group() -> impl Strategy<Value = FiniteAbelianGroup> {
        proptest::collection::vec(prop_oneof![Just(2u64), Just(3), Just(4), Just(5), Just(8), Just(9)], 0..4)
            .prop_map(|orders| FiniteAbelianGroup::from_cyclic_orders(&orders))
    }

    proptest! {
        #[test]
        fn annihilator_law(a in arb_group(), raw in proptest::collection::vec(0i64..72, 0..6)) {
            let r = a.rank().max(1);
            let gens: Vec<Element> = raw.chunks(r)
                .filter(|c| c.len() == r && a.rank() > 0)
                .map(|c| a.reduce(c))
                .collect();
            let data = sub_and_quotient(&a, gens);
            prop_assert!(data.certified);
            prop_assert_eq!(data.sub.order() * data.annihilator.order(), a.order());
            prop_assert_eq!(data.sub.order() * data.quotient.order(), a.order());
        }

        #[test]
        fn pairing_is_nondegenerate(a in arb_group()) {
            prop_assume!(a.order() <= 200);
            let (_, pairing) = dual_group(&a);
            let basis = a.basis();
            for x in a.elements() {
                if a.is_zero(&x) { continue; }
                prop_assert!(basis.iter().any(|chi| !pairing.evaluate(&x, chi).is_zero()));
                prop_assert!(basis.iter().any(|e| !pairing.evaluate(e, &x).is_zero()));
            }
        }

        #[test]
        fn whole_coordinates_roundtrip(orders in proptest::collection::vec(1u64..13, 0..4), seed in 0i64..1000) {
            let sq = Subquotient::whole(&orders);
            let x: Vec<i64> = orders.iter().enumerate().map(|(i, &m)| (seed * (i as i64 + 7)).rem_euclid(m as i64)).collect();
            let c = sq.coords(&x).unwrap();
            prop_assert_eq!(sq.lift(&c), x);
            let total: u128 = orders.iter().map(|&m| m as u128).product();
            prop_assert_eq!(sq.group().order(), total);
        }
    }
}
