use serde::{Deserialize, Serialize};

use super::{ExactError, ExactScalar};

/// Dense matrix of Gaussian rationals, row-major.
///
/// Serializes as a JSON array of rows, each row an array of canonical scalar
/// strings (see [`ExactScalar`]'s `Display`).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<ExactScalar>>", into = "Vec<Vec<ExactScalar>>")]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<ExactScalar>,
}

impl ExactMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<ExactScalar>) -> Result<Self, ExactError> {
        if rows == 0 || cols == 0 {
            return Err(ExactError::EmptyMatrix { rows, cols });
        }
        let expected = rows * cols;
        if entries.len() != expected {
            return Err(ExactError::EntryCountMismatch {
                rows,
                cols,
                expected,
                got: entries.len(),
            });
        }
        Ok(Self {
            rows,
            cols,
            entries,
        })
    }

    /// Panics on zero dimensions; use [`ExactMatrix::new`] for fallible
    /// construction.
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> ExactScalar) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        Self {
            rows,
            cols,
            entries,
        }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::from_fn(rows, cols, |_, _| ExactScalar::zero())
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| {
            if i == j {
                ExactScalar::one()
            } else {
                ExactScalar::zero()
            }
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[ExactScalar] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> &ExactScalar {
        assert!(i < self.rows && j < self.cols, "index out of range");
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: ExactScalar) {
        assert!(i < self.rows && j < self.cols, "index out of range");
        self.entries[i * self.cols + j] = value;
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(ExactScalar::is_zero)
    }

    /// Squared Frobenius norm as an exact rational.
    pub fn frobenius_sq(&self) -> super::Rational {
        self.entries
            .iter()
            .map(ExactScalar::norm_sq)
            .fold(super::Rational::from_integer(0.into()), |acc, x| acc + x)
    }

    /// Matrix-vector product `M·x`.
    pub fn mul_vec(&self, x: &[ExactScalar]) -> Result<Vec<ExactScalar>, ExactError> {
        if x.len() != self.cols {
            return Err(ExactError::EntryCountMismatch {
                rows: self.cols,
                cols: 1,
                expected: self.cols,
                got: x.len(),
            });
        }
        Ok((0..self.rows)
            .map(|i| {
                let mut acc = ExactScalar::zero();
                for j in 0..self.cols {
                    let e = self.get(i, j);
                    if !e.is_zero() && !x[j].is_zero() {
                        acc = acc + e * &x[j];
                    }
                }
                acc
            })
            .collect())
    }

    /// Rank over the complex field, by fraction-free (Bareiss) elimination
    /// with full pivoting. Exact; no tolerance anywhere.
    pub fn rank(&self) -> usize {
        let (rows, cols) = (self.rows, self.cols);
        let mut a = self.entries.clone();
        let idx = |i: usize, j: usize| i * cols + j;
        let mut prev = ExactScalar::one();
        let mut r = 0;
        let limit = rows.min(cols);
        while r < limit {
            // Any nonzero entry of the remaining submatrix can be the pivot.
            let pivot = (r..rows)
                .flat_map(|i| (r..cols).map(move |j| (i, j)))
                .find(|&(i, j)| !a[idx(i, j)].is_zero());
            let Some((pi, pj)) = pivot else { break };
            if pi != r {
                for j in 0..cols {
                    a.swap(idx(pi, j), idx(r, j));
                }
            }
            if pj != r {
                for i in 0..rows {
                    a.swap(idx(i, pj), idx(i, r));
                }
            }
            for i in (r + 1)..rows {
                for j in (r + 1)..cols {
                    let num = &a[idx(i, j)] * &a[idx(r, r)] - &a[idx(i, r)] * &a[idx(r, j)];
                    a[idx(i, j)] = num / &prev;
                }
                a[idx(i, r)] = ExactScalar::zero();
            }
            prev = a[idx(r, r)].clone();
            r += 1;
        }
        r
    }

    /// Exact determinant by Bareiss elimination with row pivoting.
    pub fn det(&self) -> Result<ExactScalar, ExactError> {
        if self.rows != self.cols {
            return Err(ExactError::NonSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        let mut a = self.entries.clone();
        let idx = |i: usize, j: usize| i * n + j;
        let mut negate = false;
        let mut prev = ExactScalar::one();
        for k in 0..n {
            if a[idx(k, k)].is_zero() {
                let Some(r) = ((k + 1)..n).find(|&r| !a[idx(r, k)].is_zero()) else {
                    return Ok(ExactScalar::zero());
                };
                for j in 0..n {
                    a.swap(idx(k, j), idx(r, j));
                }
                negate = !negate;
            }
            if k + 1 == n {
                break;
            }
            for i in (k + 1)..n {
                for j in (k + 1)..n {
                    let num = &a[idx(i, j)] * &a[idx(k, k)] - &a[idx(i, k)] * &a[idx(k, j)];
                    a[idx(i, j)] = num / &prev;
                }
                a[idx(i, k)] = ExactScalar::zero();
            }
            prev = a[idx(k, k)].clone();
        }
        let det = a[idx(n - 1, n - 1)].clone();
        Ok(if negate { -det } else { det })
    }

    /// Determinant of the submatrix selected by `row_idx` × `col_idx`.
    ///
    /// Index sets must be nonempty, strictly increasing, in range, and of
    /// equal size.
    pub fn minor(&self, row_idx: &[usize], col_idx: &[usize]) -> Result<ExactScalar, ExactError> {
        if row_idx.len() != col_idx.len() {
            return Err(ExactError::BadIndexSet(format!(
                "row set has {} indices, column set has {}",
                row_idx.len(),
                col_idx.len()
            )));
        }
        check_index_set(row_idx, self.rows, "row")?;
        check_index_set(col_idx, self.cols, "column")?;
        let k = row_idx.len();
        let sub = Self::from_fn(k, k, |i, j| self.get(row_idx[i], col_idx[j]).clone());
        sub.det()
    }
}

fn check_index_set(idx: &[usize], bound: usize, what: &str) -> Result<(), ExactError> {
    if idx.is_empty() {
        return Err(ExactError::BadIndexSet(format!("empty {what} set")));
    }
    for pair in idx.windows(2) {
        if pair[0] >= pair[1] {
            return Err(ExactError::BadIndexSet(format!(
                "{what} indices must be strictly increasing, got {:?} before {:?}",
                pair[0], pair[1]
            )));
        }
    }
    let last = *idx.last().unwrap();
    if last >= bound {
        return Err(ExactError::BadIndexSet(format!(
            "{what} index {last} out of range for {bound}"
        )));
    }
    Ok(())
}

impl TryFrom<Vec<Vec<ExactScalar>>> for ExactMatrix {
    type Error = ExactError;

    fn try_from(rows: Vec<Vec<ExactScalar>>) -> Result<Self, Self::Error> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        if nrows == 0 || ncols == 0 {
            return Err(ExactError::EmptyMatrix {
                rows: nrows,
                cols: ncols,
            });
        }
        let mut entries = Vec::with_capacity(nrows * ncols);
        for row in rows {
            if row.len() != ncols {
                return Err(ExactError::EntryCountMismatch {
                    rows: nrows,
                    cols: ncols,
                    expected: ncols,
                    got: row.len(),
                });
            }
            entries.extend(row);
        }
        Self::new(nrows, ncols, entries)
    }
}

impl From<ExactMatrix> for Vec<Vec<ExactScalar>> {
    fn from(m: ExactMatrix) -> Self {
        m.entries
            .chunks(m.cols)
            .map(|chunk| chunk.to_vec())
            .collect()
    }
}

/// The `s×s` tridiagonal matrix with `-2` on the diagonal and `1` on the
/// sub- and super-diagonals.
pub fn tridiagonal_c(s: usize) -> ExactMatrix {
    assert!(s >= 1, "tridiagonal order must be at least 1");
    ExactMatrix::from_fn(s, s, |i, j| {
        if i == j {
            ExactScalar::from_int(-2)
        } else if i.abs_diff(j) == 1 {
            ExactScalar::one()
        } else {
            ExactScalar::zero()
        }
    })
}

/// Exact determinant of [`tridiagonal_c`]`(s)`, computed by elimination (not
/// by the closed form, which callers check against it).
pub fn det_c(s: usize) -> ExactScalar {
    tridiagonal_c(s)
        .det()
        .expect("tridiagonal matrix is square")
}

/// The closed form `(−1)^s (s+1)` that [`det_c`] is expected to match. Kept
/// as a separate route so the two can be compared.
pub fn det_c_closed_form(s: usize) -> ExactScalar {
    let magnitude = s as i64 + 1;
    ExactScalar::from_int(if s % 2 == 0 { magnitude } else { -magnitude })
}

#[cfg(test)]
mod tests {
    use super::*;
    use itertools::Itertools;
    use proptest::prelude::*;

    fn mat(rows: &[&[i64]]) -> ExactMatrix {
        ExactMatrix::from_fn(rows.len(), rows[0].len(), |i, j| {
            ExactScalar::from_int(rows[i][j])
        })
    }

    /// Independent determinant oracle: the Leibniz permutation sum. Only
    /// usable for small sizes; never calls the elimination path.
    fn det_permutation_sum(m: &ExactMatrix) -> ExactScalar {
        assert_eq!(m.rows(), m.cols());
        let n = m.rows();
        let mut acc = ExactScalar::zero();
        for perm in (0..n).permutations(n) {
            let mut term = if permutation_parity(&perm) {
                -ExactScalar::one()
            } else {
                ExactScalar::one()
            };
            for (i, &j) in perm.iter().enumerate() {
                term = term * m.get(i, j);
            }
            acc = acc + term;
        }
        acc
    }

    /// True for odd permutations.
    fn permutation_parity(perm: &[usize]) -> bool {
        let mut inversions = 0;
        for i in 0..perm.len() {
            for j in (i + 1)..perm.len() {
                if perm[i] > perm[j] {
                    inversions += 1;
                }
            }
        }
        inversions % 2 == 1
    }

    /// Independent rank oracle: largest order with a nonzero minor, where the
    /// minors themselves come from the permutation-sum determinant.
    fn rank_by_minors(m: &ExactMatrix) -> usize {
        let max = m.rows().min(m.cols());
        for r in (1..=max).rev() {
            for rows in (0..m.rows()).combinations(r) {
                for cols in (0..m.cols()).combinations(r) {
                    let sub = ExactMatrix::from_fn(r, r, |i, j| m.get(rows[i], cols[j]).clone());
                    if !det_permutation_sum(&sub).is_zero() {
                        return r;
                    }
                }
            }
        }
        0
    }

    fn a_t(t: usize) -> ExactMatrix {
        ExactMatrix::from_fn(t + 2, t, |i, j| {
            match i as i64 - j as i64 {
                0 | 2 => ExactScalar::one(),
                1 => ExactScalar::from_int(-2),
                _ => ExactScalar::zero(),
            }
        })
    }

    #[test]
    fn rank_of_zero_matrix() {
        assert_eq!(ExactMatrix::zeros(3, 3).rank(), 0);
    }

    #[test]
    fn rank_of_identity() {
        assert_eq!(ExactMatrix::identity(3).rank(), 3);
    }

    #[test]
    fn rank_of_a2_columns() {
        // Columns (1,-2,1,0)ᵀ and (0,1,-2,1)ᵀ are linearly independent.
        assert_eq!(a_t(2).rank(), 2);
    }

    #[test]
    fn det_of_one_by_one() {
        assert_eq!(mat(&[&[1]]).det().unwrap(), ExactScalar::one());
    }

    #[test]
    fn det_of_c2() {
        let c2 = mat(&[&[-2, 1], &[1, -2]]);
        assert_eq!(c2.det().unwrap(), ExactScalar::from_int(3));
    }

    #[test]
    fn det_of_antidiagonal() {
        // Frozen from the permutation-sum oracle: the antidiagonal
        // permutation (2,1,0) is odd, so det = -(1 * -2 * 1) = 2.
        let m = mat(&[&[0, 0, 1], &[0, -2, 0], &[1, 0, 0]]);
        assert_eq!(det_permutation_sum(&m), ExactScalar::from_int(2));
        assert_eq!(m.det().unwrap(), ExactScalar::from_int(2));
    }

    #[test]
    fn det_rejects_non_square() {
        assert!(matches!(
            a_t(2).det(),
            Err(ExactError::NonSquare { rows: 4, cols: 2 })
        ));
    }

    #[test]
    fn minor_of_a1() {
        let a1 = a_t(1);
        assert_eq!(a1.minor(&[1], &[0]).unwrap(), ExactScalar::from_int(-2));
    }

    #[test]
    fn minor_of_a2_rows_0_3() {
        // Selecting rows {0,3} of A_2 gives the identity; frozen from the
        // permutation-sum oracle.
        let a2 = a_t(2);
        let sub = ExactMatrix::from_fn(2, 2, |i, j| a2.get([0, 3][i], j).clone());
        assert_eq!(det_permutation_sum(&sub), ExactScalar::one());
        assert_eq!(a2.minor(&[0, 3], &[0, 1]).unwrap(), ExactScalar::one());
    }

    #[test]
    fn full_minor_is_determinant() {
        let m = mat(&[&[3, 1, 0], &[-1, 2, 2], &[5, 0, 1]]);
        assert_eq!(m.minor(&[0, 1, 2], &[0, 1, 2]).unwrap(), m.det().unwrap());
    }

    #[test]
    fn minor_rejects_bad_index_sets() {
        let m = ExactMatrix::identity(3);
        assert!(matches!(
            m.minor(&[0, 0], &[0, 1]),
            Err(ExactError::BadIndexSet(_))
        ));
        assert!(matches!(
            m.minor(&[0, 3], &[0, 1]),
            Err(ExactError::BadIndexSet(_))
        ));
        assert!(matches!(
            m.minor(&[0, 1], &[0]),
            Err(ExactError::BadIndexSet(_))
        ));
        assert!(matches!(m.minor(&[], &[]), Err(ExactError::BadIndexSet(_))));
    }

    #[test]
    fn det_c_small_values() {
        assert_eq!(det_c(1), ExactScalar::from_int(-2));
        assert_eq!(det_c(2), ExactScalar::from_int(3));
        assert_eq!(det_c(3), ExactScalar::from_int(-4));
    }

    #[test]
    fn det_c_matches_closed_form_up_to_50() {
        for s in 1..=50 {
            let sign = if s % 2 == 0 { 1 } else { -1 };
            let expected = ExactScalar::from_int(sign * (s as i64 + 1));
            assert_eq!(det_c(s), expected, "det C_{s}");
        }
    }

    #[test]
    fn complex_rank() {
        // Second row is i times the first: rank 1.
        let m = ExactMatrix::new(
            2,
            2,
            vec![
                ExactScalar::one(),
                ExactScalar::from_ints(2, 0),
                ExactScalar::i(),
                ExactScalar::from_ints(0, 2),
            ],
        )
        .unwrap();
        assert_eq!(m.rank(), 1);
    }

    #[test]
    fn matrix_json_round_trip() {
        let m = mat(&[&[1, -2], &[0, 5]]);
        let json = serde_json::to_string(&m).unwrap();
        assert_eq!(json, r#"[["1","-2"],["0","5"]]"#);
        let back: ExactMatrix = serde_json::from_str(&json).unwrap();
        assert_eq!(back, m);
    }

    #[test]
    fn ragged_rows_rejected() {
        let rows = vec![
            vec![ExactScalar::one(), ExactScalar::zero()],
            vec![ExactScalar::one()],
        ];
        assert!(ExactMatrix::try_from(rows).is_err());
    }

    fn arb_square(max_n: usize) -> impl Strategy<Value = ExactMatrix> {
        (1..=max_n).prop_flat_map(|n| {
            proptest::collection::vec(-3i64..=3, n * n).prop_map(move |vals| {
                ExactMatrix::new(n, n, vals.into_iter().map(ExactScalar::from_int).collect())
                    .unwrap()
            })
        })
    }

    fn arb_rect(max_n: usize) -> impl Strategy<Value = ExactMatrix> {
        (1..=max_n, 1..=max_n).prop_flat_map(|(r, c)| {
            proptest::collection::vec(-3i64..=3, r * c).prop_map(move |vals| {
                ExactMatrix::new(r, c, vals.into_iter().map(ExactScalar::from_int).collect())
                    .unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn det_matches_permutation_sum(m in arb_square(5)) {
            prop_assert_eq!(m.det().unwrap(), det_permutation_sum(&m));
        }

        #[test]
        fn rank_matches_minor_search(m in arb_rect(4)) {
            prop_assert_eq!(m.rank(), rank_by_minors(&m));
        }

        #[test]
        fn rank_unchanged_by_row_product(a in arb_rect(3), b in arb_rect(3)) {
            // rank(AB) <= min(rank A, rank B); exercises rank-deficient inputs.
            if a.cols() == b.rows() {
                let prod = ExactMatrix::from_fn(a.rows(), b.cols(), |i, j| {
                    let mut acc = ExactScalar::zero();
                    for k in 0..a.cols() {
                        acc = acc + a.get(i, k) * b.get(k, j);
                    }
                    acc
                });
                prop_assert!(prod.rank() <= a.rank().min(b.rank()));
            }
        }
    }
}
