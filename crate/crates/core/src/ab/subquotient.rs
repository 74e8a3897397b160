//! Subquotients `N / D` of a direct sum of cyclic groups.
//!
//! The ambient group is `Z/m_0 ⊕ … ⊕ Z/m_{n-1}` with arbitrary moduli. Each
//! computation splits into p-primary parts, is carried out over `Z/p^k`, and
//! the pieces are glued back together by the Chinese remainder theorem.

use super::zpk::{local_smith, row_times, LocalRing};
use super::{Element, FiniteAbelianGroup};

pub(crate) fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

fn p_adic(mut n: u64, p: u64) -> u32 {
    if n == 0 {
        return 0;
    }
    let mut e = 0;
    while n % p == 0 {
        n /= p;
        e += 1;
    }
    e
}

fn mod_inverse(a: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let (mut t, mut new_t) = (0i128, 1i128);
    let (mut r, mut new_r) = (m as i128, (a % m) as i128);
    while new_r != 0 {
        let quot = r / new_r;
        (t, new_t) = (new_t, t - quot * new_t);
        (r, new_r) = (new_r, r - quot * new_r);
    }
    debug_assert_eq!(r, 1);
    t.rem_euclid(m as i128) as u64
}

/// The unique `x mod a·b` with `x ≡ r (mod a)` and `x ≡ s (mod b)`, `gcd(a,b) = 1`.
pub(crate) fn crt_pair(r: u64, a: u64, s: u64, b: u64) -> u64 {
    let m = a as u128 * b as u128;
    let ia = mod_inverse(a % b.max(1), b) as u128;
    // x = r + a·((s - r)·a^{-1} mod b)
    let diff = ((s as i128 - r as i128).rem_euclid(b as i128)) as u128;
    let t = diff * ia % b as u128;
    ((r as u128 + a as u128 * t) % m) as u64
}

/// Embeds the p-component value `r mod p^a` into `Z/m` with all other primary
/// components zero.
fn embed_primary(r: u64, pa: u64, m: u64) -> u64 {
    let rest = m / pa;
    crt_pair(r % pa, pa, 0, rest)
}

#[derive(Clone, Debug)]
struct PrimaryPart {
    ring: LocalRing,
    /// p-adic exponent of each ambient modulus
    amb_exp: Vec<u32>,
    /// numerator basis: w_i = p^{num_vals[i]} · num_vinv[i] for i in basis
    num_vals: Vec<u32>,
    num_v: Vec<Vec<u64>>,
    num_vinv: Vec<Vec<u64>>,
    basis: Vec<usize>,
    quo_vals: Vec<u32>,
    quo_v: Vec<Vec<u64>>,
    quo_vinv: Vec<Vec<u64>>,
    /// quotient components with nonzero exponent, sorted by exponent descending
    comps: Vec<usize>,
}

impl PrimaryPart {
    fn localize(&self, x: &[i64]) -> Vec<u64> {
        x.iter()
            .zip(&self.amb_exp)
            .map(|(&xi, &a)| {
                if a == 0 {
                    0
                } else {
                    xi.rem_euclid(self.ring.p.pow(a) as i64) as u64
                }
            })
            .collect()
    }

    fn num_coords(&self, local: &[u64]) -> Option<Vec<u64>> {
        let ring = self.ring;
        let y = row_times(ring, local, &self.num_v);
        let mut in_basis = vec![false; y.len()];
        for &i in &self.basis {
            in_basis[i] = true;
        }
        for (i, &yi) in y.iter().enumerate() {
            if !in_basis[i] && yi != 0 {
                return None;
            }
        }
        let mut out = Vec::with_capacity(self.basis.len());
        for &i in &self.basis {
            let pv = ring.p_pow(self.num_vals[i]).max(1);
            if y[i] % pv != 0 {
                return None;
            }
            out.push(y[i] / pv);
        }
        Some(out)
    }

    fn quo_coords(&self, local: &[u64]) -> Option<Vec<u64>> {
        let c = self.num_coords(local)?;
        let z = row_times(self.ring, &c, &self.quo_v);
        Some(
            self.comps
                .iter()
                .map(|&j| z[j] % self.ring.p.pow(self.quo_vals[j]))
                .collect(),
        )
    }

    fn comp_exp(&self, slot: usize) -> u32 {
        self.quo_vals[self.comps[slot]]
    }

    /// Local ambient representative of quotient component `slot`.
    fn comp_rep(&self, slot: usize) -> Vec<u64> {
        let ring = self.ring;
        let c = &self.quo_vinv[self.comps[slot]];
        let n = self.amb_exp.len();
        let mut x = vec![0u64; n];
        for (ci, &bi) in c.iter().zip(&self.basis) {
            if *ci == 0 {
                continue;
            }
            let scale = ring.mul(*ci, ring.p_pow(self.num_vals[bi]));
            for (xj, &wj) in x.iter_mut().zip(&self.num_vinv[bi]) {
                *xj = ring.add(*xj, ring.mul(scale, wj));
            }
        }
        x
    }
}

/// `N / D` inside `Z/m_0 ⊕ … ⊕ Z/m_{n-1}`, presented in invariant-factor form
/// with explicit representatives and a coordinate map.
#[derive(Clone, Debug)]
pub struct Subquotient {
    moduli: Vec<u64>,
    parts: Vec<PrimaryPart>,
    group: FiniteAbelianGroup,
    /// slots[f] lists (part, local slot) feeding invariant factor f
    slots: Vec<Vec<(usize, usize)>>,
    reps: Vec<Element>,
}

impl Subquotient {
    /// `numerator` and `denominator` are generator lists of ambient elements;
    /// the denominator is added to the numerator, so `D ⊆ N` always holds.
    pub fn new(moduli: &[u64], numerator: &[Element], denominator: &[Element]) -> Self {
        let n = moduli.len();
        let mut primes: Vec<u64> = moduli
            .iter()
            .flat_map(|&m| factorize(m).into_iter().map(|(p, _)| p))
            .collect();
        primes.sort_unstable();
        primes.dedup();

        let mut parts = Vec::new();
        for p in primes {
            let amb_exp: Vec<u32> = moduli.iter().map(|&m| p_adic(m, p)).collect();
            let k = *amb_exp.iter().max().unwrap_or(&0);
            if k == 0 {
                continue;
            }
            let ring = LocalRing::new(p, k);
            let mut part = PrimaryPart {
                ring,
                amb_exp: amb_exp.clone(),
                num_vals: Vec::new(),
                num_v: Vec::new(),
                num_vinv: Vec::new(),
                basis: Vec::new(),
                quo_vals: Vec::new(),
                quo_v: Vec::new(),
                quo_vinv: Vec::new(),
                comps: Vec::new(),
            };
            let relations: Vec<Vec<u64>> = amb_exp
                .iter()
                .enumerate()
                .filter(|(_, &a)| a < k)
                .map(|(i, &a)| {
                    let mut r = vec![0u64; n];
                    r[i] = ring.p_pow(a);
                    r
                })
                .collect();
            let den_local: Vec<Vec<u64>> = denominator.iter().map(|x| part.localize(x)).collect();
            let mut num_rows: Vec<Vec<u64>> =
                numerator.iter().map(|x| part.localize(x)).collect();
            num_rows.extend(den_local.iter().cloned());
            num_rows.extend(relations.iter().cloned());
            num_rows.retain(|r| r.iter().any(|&x| x != 0));
            let s = local_smith(ring, num_rows, n);
            part.basis = (0..n).filter(|&i| s.vals[i] < k).collect();
            part.num_vals = s.vals;
            part.num_v = s.right;
            part.num_vinv = s.right_inv;

            let b = part.basis.len();
            let mut rel_rows: Vec<Vec<u64>> = Vec::new();
            for d in den_local.iter().chain(relations.iter()) {
                let c = part
                    .num_coords(d)
                    .expect("denominator generator outside numerator");
                if c.iter().any(|&x| x != 0) {
                    rel_rows.push(c);
                }
            }
            for (slot, &bi) in part.basis.iter().enumerate() {
                let order_exp = k - part.num_vals[bi];
                if order_exp < k {
                    let mut r = vec![0u64; b];
                    r[slot] = ring.p_pow(order_exp);
                    rel_rows.push(r);
                }
            }
            let s2 = local_smith(ring, rel_rows, b);
            let mut comps: Vec<usize> = (0..b).filter(|&j| s2.vals[j] > 0).collect();
            comps.sort_by(|&x, &y| s2.vals[y].cmp(&s2.vals[x]).then(x.cmp(&y)));
            part.quo_vals = s2.vals;
            part.quo_v = s2.right;
            part.quo_vinv = s2.right_inv;
            part.comps = comps;
            parts.push(part);
        }

        let width = parts.iter().map(|p| p.comps.len()).max().unwrap_or(0);
        let mut slots = vec![Vec::new(); width];
        let mut factors = vec![1u64; width];
        for (pi, part) in parts.iter().enumerate() {
            for slot in 0..part.comps.len() {
                // the largest local component feeds the last invariant factor
                let f = width - 1 - slot;
                slots[f].push((pi, slot));
                factors[f] *= part.ring.p.pow(part.comp_exp(slot));
            }
        }
        let group = FiniteAbelianGroup::new(factors).expect("glued factors form a chain");

        let reps = slots
            .iter()
            .map(|slot_list| {
                let mut x = vec![0i64; n];
                for &(pi, slot) in slot_list {
                    let part = &parts[pi];
                    let local = part.comp_rep(slot);
                    for (i, (&li, &a)) in local.iter().zip(&part.amb_exp).enumerate() {
                        if a == 0 {
                            continue;
                        }
                        let pa = part.ring.p.pow(a);
                        let e = embed_primary(li % pa, pa, moduli[i]);
                        x[i] = ((x[i] as u64 + e) % moduli[i]) as i64;
                    }
                }
                x
            })
            .collect();

        Subquotient {
            moduli: moduli.to_vec(),
            parts,
            group,
            slots,
            reps,
        }
    }

    /// Invariant-factor form of the whole ambient group.
    pub fn whole(moduli: &[u64]) -> Self {
        let basis: Vec<Element> = (0..moduli.len())
            .map(|i| {
                let mut e = vec![0; moduli.len()];
                e[i] = 1;
                e
            })
            .collect();
        Self::new(moduli, &basis, &[])
    }

    pub fn moduli(&self) -> &[u64] {
        &self.moduli
    }

    pub fn group(&self) -> &FiniteAbelianGroup {
        &self.group
    }

    /// Ambient representatives of the invariant-factor generators.
    pub fn reps(&self) -> &[Element] {
        &self.reps
    }

    pub fn in_numerator(&self, x: &[i64]) -> bool {
        self.parts
            .iter()
            .all(|p| p.num_coords(&p.localize(x)).is_some())
    }

    pub fn in_denominator(&self, x: &[i64]) -> bool {
        self.coords(x)
            .map_or(false, |c| c.iter().all(|&v| v == 0))
    }

    /// Coordinates of the class of `x` in the invariant-factor form, or `None`
    /// when `x` is not in the numerator.
    pub fn coords(&self, x: &[i64]) -> Option<Element> {
        assert_eq!(x.len(), self.moduli.len(), "element length mismatch");
        let local: Vec<Vec<u64>> = self
            .parts
            .iter()
            .map(|p| p.quo_coords(&p.localize(x)))
            .collect::<Option<_>>()?;
        Some(
            self.slots
                .iter()
                .map(|slot_list| {
                    let mut value = 0u64;
                    let mut modulus = 1u64;
                    for &(pi, slot) in slot_list {
                        let part = &self.parts[pi];
                        let pe = part.ring.p.pow(part.comp_exp(slot));
                        value = crt_pair(value, modulus, local[pi][slot] % pe, pe);
                        modulus *= pe;
                    }
                    value as i64
                })
                .collect(),
        )
    }

    /// Ambient element with the given coordinates.
    pub fn lift(&self, coords: &[i64]) -> Element {
        let mut x = vec![0i64; self.moduli.len()];
        for (c, rep) in coords.iter().zip(&self.reps) {
            for ((xi, &ri), &m) in x.iter_mut().zip(rep).zip(&self.moduli) {
                *xi = (*xi as i128 + *c as i128 * ri as i128).rem_euclid(m as i128) as i64;
            }
        }
        x
    }
}

/// Generators of the kernel of `x ↦ M·x` from `⊕ Z/src` to `⊕ Z/tgt`, where
/// `matrix` has one row per target coordinate.
pub(crate) fn kernel_generators(src: &[u64], tgt: &[u64], matrix: &[Vec<i64>]) -> Vec<Element> {
    let m = src.len();
    assert_eq!(matrix.len(), tgt.len(), "matrix rows must match target");
    let mut primes: Vec<u64> = src
        .iter()
        .flat_map(|&x| factorize(x).into_iter().map(|(p, _)| p))
        .collect();
    primes.sort_unstable();
    primes.dedup();
    let mut out = Vec::new();
    for p in primes {
        let a: Vec<u32> = src.iter().map(|&x| p_adic(x, p)).collect();
        let b: Vec<u32> = tgt.iter().map(|&x| p_adic(x, p)).collect();
        let k = a.iter().chain(&b).copied().max().unwrap_or(0);
        let ring = LocalRing::new(p, k);
        let rows: Vec<Vec<u64>> = matrix
            .iter()
            .zip(&b)
            .filter(|(_, &bj)| bj > 0)
            .map(|(row, &bj)| {
                let scale = ring.p_pow(k - bj);
                row.iter()
                    .map(|&x| ring.mul(ring.reduce(x), scale))
                    .collect::<Vec<u64>>()
            })
            .filter(|r| r.iter().any(|&x| x != 0))
            .collect();
        let s = local_smith(ring, rows, m);
        for t in 0..m {
            if s.vals[t] == 0 {
                continue;
            }
            let scale = ring.p_pow(k - s.vals[t]);
            let local: Vec<u64> = s.right.iter().map(|row| ring.mul(row[t], scale)).collect();
            let mut x = vec![0i64; m];
            let mut nonzero = false;
            for i in 0..m {
                if a[i] == 0 {
                    continue;
                }
                let pa = p.pow(a[i]);
                let e = embed_primary(local[i] % pa, pa, src[i]);
                x[i] = e as i64;
                nonzero |= e != 0;
            }
            if nonzero {
                out.push(x);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn crt_pair_basic() {
        assert_eq!(crt_pair(1, 4, 2, 3), 5);
        assert_eq!(crt_pair(0, 1, 2, 3), 2);
    }

    #[test]
    fn whole_group_normalizes() {
        let sq = Subquotient::whole(&[2, 3]);
        assert_eq!(sq.group().factors(), &[6]);
        let sq = Subquotient::whole(&[4, 2, 1, 6]);
        assert_eq!(sq.group().factors(), &[2, 2, 12]);
        let x = vec![3, 1, 0, 5];
        let c = sq.coords(&x).unwrap();
        assert_eq!(sq.lift(&c), x);
    }

    #[test]
    fn quotient_of_z4_by_two() {
        let sq = Subquotient::new(&[4], &[vec![1]], &[vec![2]]);
        assert_eq!(sq.group().factors(), &[2]);
        assert!(sq.in_denominator(&[2]));
        assert!(!sq.in_denominator(&[1]));
        let sub = Subquotient::new(&[4], &[vec![2]], &[]);
        assert_eq!(sub.group().factors(), &[2]);
        assert!(!sub.in_numerator(&[1]));
        assert!(sub.in_numerator(&[2]));
    }

    #[test]
    fn kernel_of_doubling() {
        // x ↦ 2x on Z/4 ⊕ Z/6
        let k = kernel_generators(&[4, 6], &[4, 6], &[vec![2, 0], vec![0, 2]]);
        let sq = Subquotient::new(&[4, 6], &k, &[]);
        assert_eq!(sq.group().order(), 4);
        assert!(sq.in_numerator(&[2, 3]));
        assert!(!sq.in_numerator(&[1, 0]));
    }

    #[test]
    fn kernel_with_smaller_target() {
        // Z/4 → Z/2 reduction has kernel ⟨2⟩
        let k = kernel_generators(&[4], &[2], &[vec![1]]);
        let sq = Subquotient::new(&[4], &k, &[]);
        assert_eq!(sq.group().factors(), &[2]);
        assert!(sq.in_numerator(&[2]));
    }
}
