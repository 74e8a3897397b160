//! Linear algebra over the local ring `Z/p^k`.
//!
//! Every submodule of a finite abelian p-group can be handled here without
//! coefficient growth: the entry of least p-adic valuation divides all others,
//! so elimination never needs a gcd step.

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct LocalRing {
    pub p: u64,
    pub k: u32,
    pub q: u64,
}

impl LocalRing {
    pub fn new(p: u64, k: u32) -> Self {
        LocalRing { p, k, q: p.pow(k) }
    }

    pub fn reduce(&self, x: i64) -> u64 {
        x.rem_euclid(self.q as i64) as u64
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        ((a as u128 + b as u128) % self.q as u128) as u64
    }

    pub fn sub(&self, a: u64, b: u64) -> u64 {
        ((a as u128 + self.q as u128 - b as u128) % self.q as u128) as u64
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.q as u128) as u64
    }

    /// `p^e`, which is zero once `e >= k`.
    pub fn p_pow(&self, e: u32) -> u64 {
        if e >= self.k {
            0
        } else {
            self.p.pow(e)
        }
    }

    /// p-adic valuation; `k` for zero.
    pub fn val(&self, mut x: u64) -> u32 {
        x %= self.q;
        if x == 0 {
            return self.k;
        }
        let mut v = 0;
        while x % self.p == 0 {
            x /= self.p;
            v += 1;
        }
        v
    }

    pub fn inv_unit(&self, u: u64) -> u64 {
        let (mut t, mut new_t) = (0i128, 1i128);
        let (mut r, mut new_r) = (self.q as i128, (u % self.q) as i128);
        while new_r != 0 {
            let quot = r / new_r;
            (t, new_t) = (new_t, t - quot * new_t);
            (r, new_r) = (new_r, r - quot * new_r);
        }
        debug_assert_eq!(r, 1, "not a unit");
        t.rem_euclid(self.q as i128) as u64
    }
}

/// Diagonal valuations and column transforms of a matrix over `Z/p^k`.
///
/// `U · M · right = diag(p^vals)` for some untracked invertible `U`;
/// `right_inv` is the inverse of `right`. `vals` has one entry per column,
/// with `k` standing for a zero (or absent) diagonal entry.
#[derive(Clone, Debug)]
pub(crate) struct LocalSmith {
    pub vals: Vec<u32>,
    pub right: Vec<Vec<u64>>,
    pub right_inv: Vec<Vec<u64>>,
}

pub(crate) fn local_smith(ring: LocalRing, mut a: Vec<Vec<u64>>, cols: usize) -> LocalSmith {
    let rows = a.len();
    let ident = |n: usize| -> Vec<Vec<u64>> {
        (0..n)
            .map(|i| (0..n).map(|j| u64::from(i == j)).collect())
            .collect()
    };
    let mut v = ident(cols);
    let mut vinv = ident(cols);
    let mut vals = vec![ring.k; cols];

    for t in 0..rows.min(cols) {
        let mut best: Option<(usize, usize, u32)> = None;
        'search: for (i, row) in a.iter().enumerate().skip(t) {
            for (j, &x) in row.iter().enumerate().skip(t) {
                if x == 0 {
                    continue;
                }
                let vx = ring.val(x);
                if best.map_or(true, |(_, _, bv)| vx < bv) {
                    best = Some((i, j, vx));
                    if vx == 0 {
                        break 'search;
                    }
                }
            }
        }
        let Some((pi, pj, pv)) = best else {
            break;
        };
        a.swap(t, pi);
        if pj != t {
            for row in a.iter_mut() {
                row.swap(t, pj);
            }
            for row in v.iter_mut() {
                row.swap(t, pj);
            }
            vinv.swap(t, pj);
        }
        // scale the pivot row so the pivot is exactly p^pv
        let pp = ring.p_pow(pv);
        let unit = a[t][t] / pp;
        let unit_inv = ring.inv_unit(unit);
        for x in a[t].iter_mut().skip(t) {
            *x = ring.mul(*x, unit_inv);
        }
        let pivot_row = a[t].clone();
        for row in a.iter_mut().skip(t + 1) {
            let c = row[t] / pp;
            if c == 0 {
                continue;
            }
            for j in t..cols {
                row[j] = ring.sub(row[j], ring.mul(c, pivot_row[j]));
            }
        }
        for j in t + 1..cols {
            let c = a[t][j] / pp;
            if c == 0 {
                continue;
            }
            a[t][j] = 0;
            for row in v.iter_mut() {
                row[j] = ring.sub(row[j], ring.mul(c, row[t]));
            }
            let (head, tail) = vinv.split_at_mut(j);
            let row_t = &mut head[t];
            let row_j = &tail[0];
            for (x, &y) in row_t.iter_mut().zip(row_j) {
                *x = ring.add(*x, ring.mul(c, y));
            }
        }
        vals[t] = pv;
    }
    LocalSmith {
        vals,
        right: v,
        right_inv: vinv,
    }
}

/// Row vector times matrix over the ring.
pub(crate) fn row_times(ring: LocalRing, x: &[u64], m: &[Vec<u64>]) -> Vec<u64> {
    let cols = m.first().map_or(0, Vec::len);
    let mut out = vec![0u64; cols];
    for (xi, row) in x.iter().zip(m) {
        if *xi == 0 {
            continue;
        }
        for (o, &r) in out.iter_mut().zip(row) {
            *o = ring.add(*o, ring.mul(*xi, r));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat_mul(ring: LocalRing, a: &[Vec<u64>], b: &[Vec<u64>]) -> Vec<Vec<u64>> {
        a.iter().map(|r| row_times(ring, r, b)).collect()
    }

    #[test]
    fn right_transform_is_inverted() {
        let ring = LocalRing::new(3, 2);
        let m = vec![vec![3, 6, 1], vec![0, 3, 3], vec![6, 0, 2]];
        let s = local_smith(ring, m.clone(), 3);
        let id = mat_mul(ring, &s.right, &s.right_inv);
        for (i, row) in id.iter().enumerate() {
            for (j, &x) in row.iter().enumerate() {
                assert_eq!(x, u64::from(i == j));
            }
        }
        assert!(s.vals.windows(2).all(|w| w[0] <= w[1]));
        // the column space of M·V is spanned by the diagonal pattern
        let mv = mat_mul(ring, &m, &s.right);
        for (j, &v) in s.vals.iter().enumerate() {
            for row in &mv {
                assert!(ring.val(row[j]) >= v);
            }
        }
    }

    #[test]
    fn valuations_and_units() {
        let ring = LocalRing::new(2, 3);
        assert_eq!(ring.val(0), 3);
        assert_eq!(ring.val(4), 2);
        assert_eq!(ring.mul(ring.inv_unit(3), 3), 1);
        assert_eq!(ring.p_pow(3), 0);
    }
}
