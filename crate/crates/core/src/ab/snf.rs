//! Smith normal form over the integers.

/// Result of [`smith_normal_form`]: `left · M · right = diag(diagonal)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm {
    /// Diagonal entries `s_1 | s_2 | ...`, all non-negative; length `min(rows, cols)`.
    pub diagonal: Vec<i64>,
    /// Unimodular row transform, `rows × rows`.
    pub left: Vec<Vec<i64>>,
    /// Unimodular column transform, `cols × cols`.
    pub right: Vec<Vec<i64>>,
}

fn identity(n: usize) -> Vec<Vec<i128>> {
    (0..n)
        .map(|i| (0..n).map(|j| i128::from(i == j)).collect())
        .collect()
}

fn narrow(m: Vec<Vec<i128>>) -> Vec<Vec<i64>> {
    m.into_iter()
        .map(|row| {
            row.into_iter()
                .map(|x| i64::try_from(x).expect("Smith transform entry overflows i64"))
                .collect()
        })
        .collect()
}

/// Smith normal form of an integer matrix given as rows.
///
/// `cols` is taken from the first row; an empty matrix yields empty transforms.
pub fn smith_normal_form(m: &[Vec<i64>]) -> SmithForm {
    let cols = m.first().map_or(0, Vec::len);
    smith_normal_form_with_cols(m, cols)
}

/// Like [`smith_normal_form`] but with an explicit column count, so that
/// matrices with zero rows still carry a `cols × cols` right transform.
pub fn smith_normal_form_with_cols(m: &[Vec<i64>], cols: usize) -> SmithForm {
    let rows = m.len();
    let mut a: Vec<Vec<i128>> = m
        .iter()
        .map(|r| {
            assert_eq!(r.len(), cols, "ragged matrix");
            r.iter().map(|&x| i128::from(x)).collect()
        })
        .collect();
    let mut u = identity(rows);
    let mut v = identity(cols);
    let n = rows.min(cols);

    'pivots: for t in 0..n {
        loop {
            // smallest nonzero entry of the trailing block
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    if a[i][j] != 0
                        && best.map_or(true, |(bi, bj)| a[i][j].abs() < a[bi][bj].abs())
                    {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                break 'pivots;
            };
            a.swap(t, pi);
            u.swap(t, pi);
            for row in a.iter_mut() {
                row.swap(t, pj);
            }
            for row in v.iter_mut() {
                row.swap(t, pj);
            }

            let pivot = a[t][t];
            let mut clean = true;
            for i in t + 1..rows {
                let q = a[i][t] / pivot;
                if q != 0 {
                    for j in t..cols {
                        a[i][j] -= q * a[t][j];
                    }
                    for j in 0..rows {
                        u[i][j] -= q * u[t][j];
                    }
                }
                if a[i][t] != 0 {
                    clean = false;
                }
            }
            for j in t + 1..cols {
                let q = a[t][j] / pivot;
                if q != 0 {
                    for i in t..rows {
                        a[i][j] -= q * a[i][t];
                    }
                    for i in 0..cols {
                        v[i][j] -= q * v[i][t];
                    }
                }
                if a[t][j] != 0 {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            let offender = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| a[i][j] % pivot != 0));
            match offender {
                Some(i) => {
                    for j in t..cols {
                        a[t][j] += a[i][j];
                    }
                    for j in 0..rows {
                        u[t][j] += u[i][j];
                    }
                }
                None => break,
            }
        }
        if a[t][t] < 0 {
            for j in t..cols {
                a[t][j] = -a[t][j];
            }
            for j in 0..rows {
                u[t][j] = -u[t][j];
            }
        }
    }

    let diagonal = (0..n)
        .map(|i| i64::try_from(a[i][i]).expect("Smith diagonal overflows i64"))
        .collect();
    SmithForm {
        diagonal,
        left: narrow(u),
        right: narrow(v),
    }
}

/// Integer matrix product, used by tests and by callers checking transforms.
pub fn mat_mul(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            assert_eq!(row.len(), inner);
            (0..cols)
                .map(|j| (0..inner).map(|k| row[k] * b[k][j]).sum())
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn det(m: &[Vec<i64>]) -> i128 {
        // Bareiss fraction-free elimination
        let n = m.len();
        if n == 0 {
            return 1;
        }
        let mut a: Vec<Vec<i128>> = m
            .iter()
            .map(|r| r.iter().map(|&x| i128::from(x)).collect())
            .collect();
        let mut sign = 1;
        let mut prev = 1i128;
        for k in 0..n - 1 {
            if a[k][k] == 0 {
                let Some(s) = (k + 1..n).find(|&i| a[i][k] != 0) else {
                    return 0;
                };
                a.swap(k, s);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
                }
            }
            prev = a[k][k];
        }
        sign * a[n - 1][n - 1]
    }

    fn check(m: &[Vec<i64>]) -> SmithForm {
        let s = smith_normal_form(m);
        let d = mat_mul(&mat_mul(&s.left, m), &s.right);
        for (i, row) in d.iter().enumerate() {
            for (j, &x) in row.iter().enumerate() {
                let want = if i == j { s.diagonal[i] } else { 0 };
                assert_eq!(x, want, "U·M·V is not the diagonal at ({i},{j})");
            }
        }
        assert_eq!(det(&s.left).abs(), 1);
        assert_eq!(det(&s.right).abs(), 1);
        for w in s.diagonal.windows(2) {
            assert!(w[0] >= 0 && w[1] >= 0);
            if w[0] == 0 {
                assert_eq!(w[1], 0);
            } else {
                assert_eq!(w[1] % w[0], 0);
            }
        }
        s
    }

    #[test]
    fn coprime_diagonal_merges() {
        assert_eq!(check(&[vec![2, 0], vec![0, 3]]).diagonal, vec![1, 6]);
    }

    #[test]
    fn identity_and_zero() {
        assert_eq!(check(&[vec![1, 0], vec![0, 1]]).diagonal, vec![1, 1]);
        assert_eq!(check(&[vec![0, 0], vec![0, 0]]).diagonal, vec![0, 0]);
    }

    #[test]
    fn rectangular() {
        let s = check(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]);
        assert_eq!(s.diagonal, vec![2, 6, 12]);
        let s = check(&[vec![4, 6], vec![6, 9], vec![2, 3]]);
        assert_eq!(s.diagonal, vec![1, 0]);
    }

    proptest! {
        #[test]
        fn transforms_are_unimodular(
            rows in 1usize..5,
            cols in 1usize..5,
            seed in proptest::collection::vec(-12i64..12, 25),
        ) {
            let m: Vec<Vec<i64>> = (0..rows)
                .map(|i| (0..cols).map(|j| seed[i * 5 + j]).collect())
                .collect();
            check(&m);
        }
    }
}
