//! Pure bipartite states: matricization, Schmidt decomposition, Schmidt rank.
//!
//! A state `|v⟩ = Σ c_ij |e_i⟩⊗|e_j⟩` in `C^m ⊗ C^n` is stored as the flat
//! amplitude vector with `c_ij` at index `i·n + j`. Matricization maps it to
//! the `m×n` matrix `[c_ij]`; that map is an isometry, and the Schmidt
//! coefficients of the state are exactly the singular values of the matrix.
//! Two rank paths are provided: a tolerance-based one through the SVD
//! ([`PureState::schmidt_rank`]) and a tolerance-free one through exact
//! elimination ([`ExactState::schmidt_rank`]).

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exact::{ExactMatrix, ExactScalar, Rational};

/// Complex double-precision scalar used throughout the floating-point side.
pub type C64 = Complex64;

#[derive(Debug, Error)]
pub enum StateError {
    #[error("dimensions must be positive (m={m}, n={n})")]
    BadDimensions { m: usize, n: usize },

    #[error("amplitude vector for C^{m} x C^{n} needs {expected} entries, got {got}")]
    LengthMismatch {
        m: usize,
        n: usize,
        expected: usize,
        got: usize,
    },

    #[error("state is zero (norm {norm:.3e}); Schmidt data is undefined")]
    ZeroState { norm: f64 },
}

fn check_dims(m: usize, n: usize, got: usize) -> Result<(), StateError> {
    if m == 0 || n == 0 {
        return Err(StateError::BadDimensions { m, n });
    }
    if got != m * n {
        return Err(StateError::LengthMismatch {
            m,
            n,
            expected: m * n,
            got,
        });
    }
    Ok(())
}

/// A pure state of `C^m ⊗ C^n` with floating-point amplitudes.
///
/// Inputs are not required to be normalized; Schmidt data reflects the input
/// norm. Serializes as `{"m":…,"n":…,"amplitudes":[[re,im],…]}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PureStateRepr", into = "PureStateRepr")]
pub struct PureState {
    m: usize,
    n: usize,
    amplitudes: Vec<C64>,
}

#[derive(Serialize, Deserialize)]
struct PureStateRepr {
    m: usize,
    n: usize,
    amplitudes: Vec<(f64, f64)>,
}

impl TryFrom<PureStateRepr> for PureState {
    type Error = StateError;
    fn try_from(repr: PureStateRepr) -> Result<Self, StateError> {
        PureState::new(
            repr.m,
            repr.n,
            repr.amplitudes
                .into_iter()
                .map(|(re, im)| C64::new(re, im))
                .collect(),
        )
    }
}

impl From<PureState> for PureStateRepr {
    fn from(state: PureState) -> Self {
        PureStateRepr {
            m: state.m,
            n: state.n,
            amplitudes: state.amplitudes.iter().map(|c| (c.re, c.im)).collect(),
        }
    }
}

impl PureState {
    pub fn new(m: usize, n: usize, amplitudes: Vec<C64>) -> Result<Self, StateError> {
        check_dims(m, n, amplitudes.len())?;
        Ok(Self { m, n, amplitudes })
    }

    /// The basis product state `|e_i⟩⊗|e_j⟩`.
    pub fn basis(m: usize, n: usize, i: usize, j: usize) -> Self {
        assert!(i < m && j < n, "basis index out of range");
        let mut amplitudes = vec![C64::new(0.0, 0.0); m * n];
        amplitudes[i * n + j] = C64::new(1.0, 0.0);
        Self { m, n, amplitudes }
    }

    /// The Bell state `(|e_0 e_0⟩ + |e_1 e_1⟩)/√2` in `C² ⊗ C²`.
    pub fn bell() -> Self {
        let x = std::f64::consts::FRAC_1_SQRT_2;
        Self {
            m: 2,
            n: 2,
            amplitudes: vec![
                C64::new(x, 0.0),
                C64::new(0.0, 0.0),
                C64::new(0.0, 0.0),
                C64::new(x, 0.0),
            ],
        }
    }

    /// Product state `|u⟩⊗|w⟩`.
    pub fn from_product(left: &[C64], right: &[C64]) -> Result<Self, StateError> {
        let (m, n) = (left.len(), right.len());
        if m == 0 || n == 0 {
            return Err(StateError::BadDimensions { m, n });
        }
        let mut amplitudes = Vec::with_capacity(m * n);
        for u in left {
            for w in right {
                amplitudes.push(u * w);
            }
        }
        Ok(Self { m, n, amplitudes })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes
            .iter()
            .map(|c| c.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn is_normalized(&self, tol: f64) -> bool {
        (self.norm() - 1.0).abs() <= tol
    }

    /// Unit-norm copy; fails on (numerically) zero states.
    pub fn normalized(&self, tol: f64) -> Result<Self, StateError> {
        let norm = self.norm();
        if norm < tol {
            return Err(StateError::ZeroState { norm });
        }
        Ok(Self {
            m: self.m,
            n: self.n,
            amplitudes: self.amplitudes.iter().map(|c| c / norm).collect(),
        })
    }

    /// The matrix `[c_ij]` with entry `(i,j)` equal to the amplitude at flat
    /// index `i·n + j`. Frobenius norm equals the vector norm.
    pub fn matricize(&self) -> DMatrix<C64> {
        DMatrix::from_fn(self.m, self.n, |i, j| self.amplitudes[i * self.n + j])
    }

    pub fn from_matrix(mat: &DMatrix<C64>) -> Self {
        let (m, n) = (mat.nrows(), mat.ncols());
        assert!(m > 0 && n > 0, "matrix dimensions must be positive");
        Self {
            m,
            n,
            amplitudes: (0..m * n).map(|f| mat[(f / n, f % n)]).collect(),
        }
    }

    /// Schmidt decomposition via the singular value decomposition of the
    /// matricization. Coefficients come back sorted descending, truncated at
    /// `tol`×(largest singular value).
    pub fn schmidt_decompose(&self, tol: f64) -> Result<SchmidtDecomposition, StateError> {
        assert!(tol > 0.0, "tolerance must be positive");
        let norm = self.norm();
        if !(norm >= tol) {
            return Err(StateError::ZeroState { norm });
        }
        let svd = self.matricize().svd(true, true);
        let u = svd.u.expect("svd was computed with vectors");
        let v_t = svd.v_t.expect("svd was computed with vectors");
        let sv = &svd.singular_values;
        debug_assert!(sv.iter().zip(sv.iter().skip(1)).all(|(a, b)| a >= b));
        let cutoff = tol * sv[0];
        let k = sv.iter().take_while(|&&s| s > cutoff).count().max(1);
        let coefficients = sv.iter().take(k).copied().collect();
        let left = u.columns(0, k).into_owned();
        // Rows of v_t are exactly the right Schmidt vectors: the amplitude at
        // (i,j) is Σ_l α_l · u[(i,l)] · v_t[(l,j)].
        let right = DMatrix::from_fn(self.n, k, |j, l| v_t[(l, j)]);
        Ok(SchmidtDecomposition {
            coefficients,
            left,
            right,
        })
    }

    /// Number of singular values above `tol`×(largest); equals the rank of
    /// the matricization at that tolerance.
    pub fn schmidt_rank(&self, tol: f64) -> Result<usize, StateError> {
        assert!(tol > 0.0, "tolerance must be positive");
        let norm = self.norm();
        if !(norm >= tol) {
            return Err(StateError::ZeroState { norm });
        }
        let sv = self.matricize().svd(false, false).singular_values;
        let cutoff = tol * sv[0];
        Ok(sv.iter().filter(|&&s| s > cutoff).count().max(1))
    }
}

/// Result of [`PureState::schmidt_decompose`]: `|v⟩ = Σ_j α_j |u_j⟩⊗|w_j⟩`
/// with `α_j` descending and the factor columns orthonormal.
#[derive(Clone, Debug)]
pub struct SchmidtDecomposition {
    coefficients: Vec<f64>,
    left: DMatrix<C64>,
    right: DMatrix<C64>,
}

impl SchmidtDecomposition {
    /// Number of retained terms.
    pub fn rank(&self) -> usize {
        self.coefficients.len()
    }

    /// Nonnegative coefficients `α_j`, sorted descending.
    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    /// `m×k` matrix whose columns are the left factor vectors.
    pub fn left_vectors(&self) -> &DMatrix<C64> {
        &self.left
    }

    /// `n×k` matrix whose columns are the right factor vectors.
    pub fn right_vectors(&self) -> &DMatrix<C64> {
        &self.right
    }

    /// `Σ_j α_j |u_j⟩⊗|w_j⟩` as a flat state again.
    pub fn reconstruct(&self) -> PureState {
        let (m, n) = (self.left.nrows(), self.right.nrows());
        let mut amplitudes = vec![C64::new(0.0, 0.0); m * n];
        for (l, &alpha) in self.coefficients.iter().enumerate() {
            for i in 0..m {
                let scaled = alpha * self.left[(i, l)];
                for j in 0..n {
                    amplitudes[i * n + j] += scaled * self.right[(j, l)];
                }
            }
        }
        PureState { m, n, amplitudes }
    }
}

/// A pure state with Gaussian-rational amplitudes, for tolerance-free rank
/// decisions. Serializes as `{"m":…,"n":…,"amplitudes":["p/q", …]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "ExactStateRepr", into = "ExactStateRepr")]
pub struct ExactState {
    m: usize,
    n: usize,
    amplitudes: Vec<ExactScalar>,
}

#[derive(Serialize, Deserialize)]
struct ExactStateRepr {
    m: usize,
    n: usize,
    amplitudes: Vec<ExactScalar>,
}

impl TryFrom<ExactStateRepr> for ExactState {
    type Error = StateError;
    fn try_from(repr: ExactStateRepr) -> Result<Self, StateError> {
        ExactState::new(repr.m, repr.n, repr.amplitudes)
    }
}

impl From<ExactState> for ExactStateRepr {
    fn from(state: ExactState) -> Self {
        ExactStateRepr {
            m: state.m,
            n: state.n,
            amplitudes: state.amplitudes,
        }
    }
}

impl ExactState {
    pub fn new(m: usize, n: usize, amplitudes: Vec<ExactScalar>) -> Result<Self, StateError> {
        check_dims(m, n, amplitudes.len())?;
        Ok(Self { m, n, amplitudes })
    }

    pub fn basis(m: usize, n: usize, i: usize, j: usize) -> Self {
        assert!(i < m && j < n, "basis index out of range");
        let mut amplitudes = vec![ExactScalar::zero(); m * n];
        amplitudes[i * n + j] = ExactScalar::one();
        Self { m, n, amplitudes }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[ExactScalar] {
        &self.amplitudes
    }

    pub fn is_zero(&self) -> bool {
        self.amplitudes.iter().all(ExactScalar::is_zero)
    }

    /// `Σ|c_ij|²` as an exact rational.
    pub fn norm_sq(&self) -> Rational {
        self.amplitudes
            .iter()
            .map(ExactScalar::norm_sq)
            .fold(Rational::from_integer(0.into()), |acc, x| acc + x)
    }

    pub fn matricize(&self) -> ExactMatrix {
        ExactMatrix::from_fn(self.m, self.n, |i, j| {
            self.amplitudes[i * self.n + j].clone()
        })
    }

    /// Tolerance-free Schmidt rank: the exact rank of the matricization.
    pub fn schmidt_rank(&self) -> Result<usize, StateError> {
        if self.is_zero() {
            return Err(StateError::ZeroState { norm: 0.0 });
        }
        Ok(self.matricize().rank())
    }

    /// Floating-point view of the same state.
    pub fn to_pure_state(&self) -> PureState {
        PureState {
            m: self.m,
            n: self.n,
            amplitudes: self.amplitudes.iter().map(ExactScalar::to_c64).collect(),
        }
    }
}

/// Exact Schmidt rank of a raw amplitude vector; convenience wrapper around
/// [`ExactState::schmidt_rank`].
pub fn schmidt_rank_exact(
    amplitudes: &[ExactScalar],
    m: usize,
    n: usize,
) -> Result<usize, StateError> {
    ExactState::new(m, n, amplitudes.to_vec())?.schmidt_rank()
}
