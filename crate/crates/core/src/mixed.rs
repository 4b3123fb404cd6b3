//! Density matrices, support computation, and Schmidt-number bounds.
//!
//! The witness logic: a state whose support (range) lies inside a subspace
//! that contains no vector of Schmidt rank ≤ k must have Schmidt number at
//! least k+1 — any decomposition into pure states of rank ≤ k would put one
//! of them inside the subspace. Here k = 2, established by a
//! [`RankCertificate`], so [`schmidt_number_lower_bound`] issues 3. The bound
//! is conditional: the certificate is validated and the support check must
//! pass, otherwise no bound is issued.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exact::ExactScalar;
use crate::states::{C64, PureState, StateError};
use crate::subspace::{RankCertificate, SubspaceBasis};

#[derive(Debug, Error)]
pub enum MixedError {
    #[error("entries are {rows}x{cols}, expected {dim}x{dim} for C^{m} x C^{n}")]
    ShapeMismatch {
        m: usize,
        n: usize,
        dim: usize,
        rows: usize,
        cols: usize,
    },

    #[error("not a valid state: {reason}")]
    NotAState { reason: String },

    #[error("state lives on C^{rho_m} x C^{rho_n}, subspace on C^{basis_m} x C^{basis_n}")]
    DimensionMismatch {
        rho_m: usize,
        rho_n: usize,
        basis_m: usize,
        basis_n: usize,
    },

    #[error(
        "state is not supported on the subspace (worst projection residual {residual:.3e}, tolerance {tol:.3e})"
    )]
    NotSupported { residual: f64, tol: f64 },

    #[error("invalid certificate: {0}")]
    InvalidCertificate(String),

    #[error(transparent)]
    State(#[from] StateError),
}

/// A mixed state on `C^m ⊗ C^n`: an `(m·n)×(m·n)` complex matrix expected to
/// be Hermitian, positive semidefinite, and of unit trace.
///
/// Construction checks only the shape; [`DensityMatrix::validate`] checks
/// the state axioms at a given tolerance. Serializes as
/// `{"m":…,"n":…,"entries":[[[re,im],…],…]}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "DensityMatrixRepr", into = "DensityMatrixRepr")]
pub struct DensityMatrix {
    m: usize,
    n: usize,
    entries: DMatrix<C64>,
}

#[derive(Serialize, Deserialize)]
struct DensityMatrixRepr {
    m: usize,
    n: usize,
    entries: Vec<Vec<(f64, f64)>>,
}

impl TryFrom<DensityMatrixRepr> for DensityMatrix {
    type Error = MixedError;
    fn try_from(repr: DensityMatrixRepr) -> Result<Self, MixedError> {
        let dim = repr.m * repr.n;
        let rows = repr.entries.len();
        let cols = repr.entries.first().map_or(0, Vec::len);
        if rows != dim || repr.entries.iter().any(|r| r.len() != dim) {
            return Err(MixedError::ShapeMismatch {
                m: repr.m,
                n: repr.n,
                dim,
                rows,
                cols,
            });
        }
        let entries = DMatrix::from_fn(dim, dim, |i, j| {
            let (re, im) = repr.entries[i][j];
            C64::new(re, im)
        });
        DensityMatrix::new(repr.m, repr.n, entries)
    }
}

impl From<DensityMatrix> for DensityMatrixRepr {
    fn from(rho: DensityMatrix) -> Self {
        let dim = rho.dim();
        DensityMatrixRepr {
            m: rho.m,
            n: rho.n,
            entries: (0..dim)
                .map(|i| {
                    (0..dim)
                        .map(|j| {
                            let z = rho.entries[(i, j)];
                            (z.re, z.im)
                        })
                        .collect()
                })
                .collect(),
        }
    }
}

impl DensityMatrix {
    pub fn new(m: usize, n: usize, entries: DMatrix<C64>) -> Result<Self, MixedError> {
        let dim = m * n;
        if dim == 0 || entries.nrows() != dim || entries.ncols() != dim {
            return Err(MixedError::ShapeMismatch {
                m,
                n,
                dim,
                rows: entries.nrows(),
                cols: entries.ncols(),
            });
        }
        Ok(Self { m, n, entries })
    }

    /// Rank-one projector `|ψ⟩⟨ψ|` of the normalized input.
    pub fn from_pure(state: &PureState, tol: f64) -> Result<Self, MixedError> {
        let normalized = state.normalized(tol)?;
        let dim = normalized.m() * normalized.n();
        let v = DVector::from_column_slice(normalized.amplitudes());
        let entries = DMatrix::from_fn(dim, dim, |i, j| v[i] * v[j].conj());
        Ok(Self {
            m: normalized.m(),
            n: normalized.n(),
            entries,
        })
    }

    /// `I/(m·n)`, the maximally mixed state.
    pub fn maximally_mixed(m: usize, n: usize) -> Self {
        let dim = m * n;
        assert!(dim > 0, "dimensions must be positive");
        let p = C64::new(1.0 / dim as f64, 0.0);
        Self {
            m,
            n,
            entries: DMatrix::from_diagonal_element(dim, dim, p),
        }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Total dimension `m·n`.
    pub fn dim(&self) -> usize {
        self.m * self.n
    }

    pub fn entries(&self) -> &DMatrix<C64> {
        &self.entries
    }

    pub fn trace(&self) -> C64 {
        self.entries.diagonal().iter().sum()
    }

    /// Checks Hermiticity, positive semidefiniteness (eigenvalues ≥ −tol),
    /// and unit trace, all at tolerance `tol`.
    pub fn validate(&self, tol: f64) -> Result<(), MixedError> {
        let dim = self.dim();
        let mut worst = 0.0f64;
        for i in 0..dim {
            for j in i..dim {
                let dev = (self.entries[(i, j)] - self.entries[(j, i)].conj()).norm();
                worst = worst.max(dev);
            }
        }
        if worst > tol {
            return Err(MixedError::NotAState {
                reason: format!("not Hermitian (worst deviation {worst:.3e})"),
            });
        }
        let tr = self.trace();
        if (tr - C64::new(1.0, 0.0)).norm() > tol {
            return Err(MixedError::NotAState {
                reason: format!("trace is {tr} instead of 1"),
            });
        }
        let min_eig = self
            .eigen_descending()
            .0
            .last()
            .copied()
            .unwrap_or_default();
        if min_eig < -tol {
            return Err(MixedError::NotAState {
                reason: format!("not positive semidefinite (eigenvalue {min_eig:.3e})"),
            });
        }
        Ok(())
    }

    /// Eigenvalues (descending) and matching eigenvector columns.
    fn eigen_descending(&self) -> (Vec<f64>, DMatrix<C64>) {
        let eig = nalgebra::SymmetricEigen::new(self.entries.clone());
        let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[b].partial_cmp(&eig.eigenvalues[a]).unwrap());
        let values: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
        let vectors = DMatrix::from_fn(self.dim(), order.len(), |r, c| {
            eig.eigenvectors[(r, order[c])]
        });
        (values, vectors)
    }

    /// Orthonormal eigenvectors with eigenvalue above `tol`×(largest); they
    /// span the range of the state.
    pub fn support_basis(&self, tol: f64) -> Result<Vec<DVector<C64>>, MixedError> {
        self.validate(tol)?;
        let (values, vectors) = self.eigen_descending();
        let cutoff = tol * values[0];
        Ok(values
            .iter()
            .enumerate()
            .take_while(|(_, &v)| v > cutoff)
            .map(|(c, _)| vectors.column(c).into_owned())
            .collect())
    }

    /// Norm of the residual of each support vector after projecting onto the
    /// span of the basis, in support order (descending eigenvalue).
    pub fn support_residuals(
        &self,
        basis: &SubspaceBasis,
        tol: f64,
    ) -> Result<Vec<f64>, MixedError> {
        if self.m != basis.m() || self.n != basis.n() {
            return Err(MixedError::DimensionMismatch {
                rho_m: self.m,
                rho_n: self.n,
                basis_m: basis.m(),
                basis_n: basis.n(),
            });
        }
        let support = self.support_basis(tol)?;
        let dim = self.dim();
        let span = DMatrix::from_fn(dim, basis.len(), |i, j| {
            basis.elements()[j].vector()[i].to_c64()
        });
        // The basis columns have full rank (they are exactly independent),
        // so the thin Q spans the same subspace.
        let q = span.qr().q();
        Ok(support
            .iter()
            .map(|v| {
                let projected = &q * (q.adjoint() * v);
                (v - projected).norm()
            })
            .collect())
    }

    /// True iff every support vector lies in the span of `basis` (all
    /// projection residuals below `tol`).
    pub fn supported_on(&self, basis: &SubspaceBasis, tol: f64) -> Result<bool, MixedError> {
        Ok(self
            .support_residuals(basis, tol)?
            .iter()
            .all(|&r| r < tol))
    }

    /// Largest Schmidt rank among the support eigenvectors. The
    /// eigendecomposition is itself one pure-state decomposition of the
    /// state, so this is a valid Schmidt-number upper bound.
    pub fn schmidt_number_upper_bound(&self, tol: f64) -> Result<usize, MixedError> {
        self.validate(tol)?;
        let mut best = 0;
        for vector in self.support_basis(tol)? {
            let state = PureState::new(self.m, self.n, vector.iter().copied().collect())?;
            best = best.max(state.schmidt_rank(tol)?);
        }
        Ok(best)
    }
}

/// Identity of the certificate a witness relies on.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateRef {
    pub m: usize,
    pub n: usize,
    pub sha256: String,
}

/// A Schmidt-number lower-bound witness: the certified subspace excludes
/// Schmidt rank ≤ 2, the state is supported on it, hence its Schmidt number
/// is at least `lower_bound` = 3.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SchmidtNumberWitness {
    pub lower_bound: usize,
    pub certificate_ref: CertificateRef,
    /// Projection residual of each support vector onto the subspace.
    pub support_check: Vec<f64>,
}

/// Issues the Schmidt-number ≥ 3 witness for `rho`, after validating the
/// certificate and checking that `rho`'s support lies in the subspace.
/// Fails with `NotSupported` (no bound issued) when the support check does
/// not hold, and with `InvalidCertificate` when the certificate does not
/// re-verify or does not match the basis dimensions.
pub fn schmidt_number_lower_bound(
    rho: &DensityMatrix,
    basis: &SubspaceBasis,
    certificate: &RankCertificate,
    tol: f64,
) -> Result<SchmidtNumberWitness, MixedError> {
    certificate
        .validate()
        .map_err(|e| MixedError::InvalidCertificate(e.to_string()))?;
    if certificate.m() != basis.m() || certificate.n() != basis.n() {
        return Err(MixedError::InvalidCertificate(format!(
            "certificate is for S({},{}), basis is for S({},{})",
            certificate.m(),
            certificate.n(),
            basis.m(),
            basis.n()
        )));
    }
    let residuals = rho.support_residuals(basis, tol)?;
    let worst = residuals.iter().cloned().fold(0.0f64, f64::max);
    if worst >= tol {
        return Err(MixedError::NotSupported {
            residual: worst,
            tol,
        });
    }
    Ok(SchmidtNumberWitness {
        lower_bound: certificate.verdict().schmidt_number_bound(),
        certificate_ref: CertificateRef {
            m: certificate.m(),
            n: certificate.n(),
            sha256: certificate.digest(),
        },
        support_check: residuals,
    })
}

/// Equal mixture of the orthonormalized basis vectors: exact Gram-Schmidt
/// over the Gaussian rationals, then numeric normalization. Trace 1 and
/// support equal to the subspace span by construction.
pub fn make_uniform_state(basis: &SubspaceBasis) -> DensityMatrix {
    assert!(!basis.is_empty(), "basis must be nonempty");
    let dim = basis.m() * basis.n();

    let mut ortho: Vec<Vec<ExactScalar>> = Vec::with_capacity(basis.len());
    for el in basis.elements() {
        let mut w: Vec<ExactScalar> = el.vector().to_vec();
        for u in &ortho {
            let overlap = inner(u, &w);
            if overlap.is_zero() {
                continue;
            }
            let coef = overlap / inner(u, u);
            for (wi, ui) in w.iter_mut().zip(u) {
                *wi = &*wi - &(&coef * ui);
            }
        }
        debug_assert!(
            w.iter().any(|x| !x.is_zero()),
            "basis vectors are linearly independent"
        );
        ortho.push(w);
    }

    let weight = C64::new(1.0 / ortho.len() as f64, 0.0);
    let mut entries = DMatrix::<C64>::zeros(dim, dim);
    for w in &ortho {
        let v = DVector::from_iterator(dim, w.iter().map(ExactScalar::to_c64));
        let v = &v / C64::new(v.norm(), 0.0);
        entries += (&v * v.adjoint()) * weight;
    }
    DensityMatrix {
        m: basis.m(),
        n: basis.n(),
        entries,
    }
}

/// `⟨a|b⟩ = Σ conj(a_i)·b_i`, exact.
fn inner(a: &[ExactScalar], b: &[ExactScalar]) -> ExactScalar {
    a.iter()
        .zip(b)
        .filter(|(x, y)| !x.is_zero() && !y.is_zero())
        .fold(ExactScalar::zero(), |acc, (x, y)| acc + x.conj() * y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::SweepMode;
    use crate::subspace::{certify, CertifyOptions};
    use crate::DEFAULT_TOL as TOL;

    fn exhaustive_cert(m: usize, n: usize) -> RankCertificate {
        let options = CertifyOptions {
            mode: SweepMode::Exhaustive,
            ..CertifyOptions::default()
        };
        certify(m, n, &options).unwrap()
    }

    fn random_cert(m: usize, n: usize) -> RankCertificate {
        let options = CertifyOptions {
            mode: SweepMode::Random,
            trials: 100,
            seed: 3,
            ..CertifyOptions::default()
        };
        certify(m, n, &options).unwrap()
    }

    fn first_basis_state(m: usize, n: usize) -> PureState {
        let basis = SubspaceBasis::build(m, n).unwrap();
        let amps: Vec<C64> = basis.elements()[0]
            .vector()
            .iter()
            .map(ExactScalar::to_c64)
            .collect();
        PureState::new(m, n, amps).unwrap()
    }

    #[test]
    fn pure_projector_support_is_one_dimensional() {
        let state = PureState::bell();
        let rho = DensityMatrix::from_pure(&state, TOL).unwrap();
        let support = rho.support_basis(TOL).unwrap();
        assert_eq!(support.len(), 1);
        let overlap: C64 = support[0]
            .iter()
            .zip(state.amplitudes())
            .map(|(a, b)| a.conj() * b)
            .sum();
        assert!((overlap.norm() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn diagonal_mixture_support() {
        let mut entries = DMatrix::<C64>::zeros(4, 4);
        entries[(0, 0)] = C64::new(0.5, 0.0);
        entries[(3, 3)] = C64::new(0.5, 0.0);
        let rho = DensityMatrix::new(2, 2, entries).unwrap();
        let support = rho.support_basis(TOL).unwrap();
        assert_eq!(support.len(), 2);
        for v in &support {
            assert!(v[1].norm() < 1e-12 && v[2].norm() < 1e-12);
        }
    }

    #[test]
    fn uniform_state_support_dimension() {
        let basis = SubspaceBasis::build(3, 4).unwrap();
        let rho = make_uniform_state(&basis);
        rho.validate(TOL).unwrap();
        let support = rho.support_basis(TOL).unwrap();
        assert_eq!(support.len(), 2);
        let (values, _) = rho.eigen_descending();
        assert!((values[0] - 0.5).abs() < 1e-12);
        assert!((values[1] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn uniform_state_4x4_trace_and_rank() {
        let basis = SubspaceBasis::build(4, 4).unwrap();
        let rho = make_uniform_state(&basis);
        assert!((rho.trace() - C64::new(1.0, 0.0)).norm() < 1e-12);
        assert_eq!(rho.support_basis(TOL).unwrap().len(), 4);
    }

    #[test]
    fn uniform_state_3x3_is_the_pure_stencil() {
        let basis = SubspaceBasis::build(3, 3).unwrap();
        let rho = make_uniform_state(&basis);
        let direct =
            DensityMatrix::from_pure(&first_basis_state(3, 3), TOL).unwrap();
        assert!((rho.entries() - direct.entries()).norm() < 1e-12);
    }

    #[test]
    fn supported_on_basis_projector() {
        let basis = SubspaceBasis::build(3, 3).unwrap();
        let rho = DensityMatrix::from_pure(&first_basis_state(3, 3), TOL).unwrap();
        assert!(rho.supported_on(&basis, TOL).unwrap());
    }

    #[test]
    fn maximally_mixed_is_not_supported() {
        let basis = SubspaceBasis::build(3, 3).unwrap();
        let rho = DensityMatrix::maximally_mixed(3, 3);
        assert!(!rho.supported_on(&basis, TOL).unwrap());
    }

    #[test]
    fn uniform_state_is_supported() {
        let basis = SubspaceBasis::build(4, 4).unwrap();
        let rho = make_uniform_state(&basis);
        assert!(rho.supported_on(&basis, TOL).unwrap());
    }

    #[test]
    fn supported_on_checks_dimensions() {
        let basis = SubspaceBasis::build(3, 4).unwrap();
        let rho = DensityMatrix::maximally_mixed(3, 3);
        assert!(matches!(
            rho.supported_on(&basis, TOL),
            Err(MixedError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn witness_for_pure_stencil() {
        let basis = SubspaceBasis::build(3, 3).unwrap();
        let cert = exhaustive_cert(3, 3);
        let rho = DensityMatrix::from_pure(&first_basis_state(3, 3), TOL).unwrap();
        let witness = schmidt_number_lower_bound(&rho, &basis, &cert, TOL).unwrap();
        assert_eq!(witness.lower_bound, 3);
        assert_eq!(witness.certificate_ref.sha256, cert.digest());
        assert!(witness.support_check.iter().all(|&r| r < TOL));
    }

    #[test]
    fn witness_for_uniform_4x4() {
        let basis = SubspaceBasis::build(4, 4).unwrap();
        let cert = random_cert(4, 4);
        let rho = make_uniform_state(&basis);
        let witness = schmidt_number_lower_bound(&rho, &basis, &cert, TOL).unwrap();
        assert_eq!(witness.lower_bound, 3);
        assert_eq!(witness.support_check.len(), 4);
    }

    #[test]
    fn witness_rejects_product_state() {
        let basis = SubspaceBasis::build(3, 3).unwrap();
        let cert = exhaustive_cert(3, 3);
        let rho = DensityMatrix::from_pure(&PureState::basis(3, 3, 0, 0), TOL).unwrap();
        assert!(matches!(
            schmidt_number_lower_bound(&rho, &basis, &cert, TOL),
            Err(MixedError::NotSupported { .. })
        ));
    }

    #[test]
    fn witness_rejects_mismatched_certificate() {
        let basis = SubspaceBasis::build(3, 3).unwrap();
        let cert = exhaustive_cert(3, 4);
        let rho = DensityMatrix::from_pure(&first_basis_state(3, 3), TOL).unwrap();
        assert!(matches!(
            schmidt_number_lower_bound(&rho, &basis, &cert, TOL),
            Err(MixedError::InvalidCertificate(_))
        ));
    }

    #[test]
    fn upper_bound_examples() {
        let bell = DensityMatrix::from_pure(&PureState::bell(), TOL).unwrap();
        assert_eq!(bell.schmidt_number_upper_bound(TOL).unwrap(), 2);

        let product = DensityMatrix::from_pure(&PureState::basis(2, 3, 1, 2), TOL).unwrap();
        assert_eq!(product.schmidt_number_upper_bound(TOL).unwrap(), 1);

        let basis = SubspaceBasis::build(3, 3).unwrap();
        let uniform = make_uniform_state(&basis);
        assert_eq!(uniform.schmidt_number_upper_bound(TOL).unwrap(), 3);
    }

    #[test]
    fn pure_state_bounds_are_consistent() {
        // For |ψ⟩⟨ψ| with ψ in the subspace, the lower bound 3 cannot exceed
        // the upper bound (the state's own Schmidt rank).
        let basis = SubspaceBasis::build(4, 4).unwrap();
        let cert = random_cert(4, 4);
        for el in basis.elements() {
            let amps: Vec<C64> = el.vector().iter().map(ExactScalar::to_c64).collect();
            let state = PureState::new(4, 4, amps).unwrap();
            let rho = DensityMatrix::from_pure(&state, TOL).unwrap();
            let upper = rho.schmidt_number_upper_bound(TOL).unwrap();
            let witness = schmidt_number_lower_bound(&rho, &basis, &cert, TOL).unwrap();
            assert_eq!(upper, state.schmidt_rank(TOL).unwrap());
            assert!(witness.lower_bound <= upper);
        }
    }

    #[test]
    fn witness_ignores_mixture_weights() {
        // Any positive mixture of the orthonormalized basis has the same
        // support, hence the same witness verdict.
        let basis = SubspaceBasis::build(3, 4).unwrap();
        let cert = exhaustive_cert(3, 4);
        let uniform = make_uniform_state(&basis);
        let (_, vectors) = uniform.eigen_descending();
        for weights in [[0.9, 0.1], [0.5, 0.5], [0.01, 0.99]] {
            let mut entries = DMatrix::<C64>::zeros(12, 12);
            for (c, w) in weights.iter().enumerate() {
                let v = vectors.column(c);
                entries += (v * v.adjoint()) * C64::new(*w, 0.0);
            }
            let rho = DensityMatrix::new(3, 4, entries).unwrap();
            let witness = schmidt_number_lower_bound(&rho, &basis, &cert, TOL).unwrap();
            assert_eq!(witness.lower_bound, 3);
        }
    }

    #[test]
    fn validate_rejects_bad_states() {
        // not Hermitian
        let mut entries = DMatrix::<C64>::zeros(4, 4);
        entries[(0, 1)] = C64::new(1.0, 0.0);
        entries[(0, 0)] = C64::new(1.0, 0.0);
        let rho = DensityMatrix::new(2, 2, entries).unwrap();
        assert!(matches!(
            rho.validate(TOL),
            Err(MixedError::NotAState { .. })
        ));

        // wrong trace
        let rho = DensityMatrix::new(2, 2, DMatrix::identity(4, 4)).unwrap();
        assert!(matches!(
            rho.validate(TOL),
            Err(MixedError::NotAState { .. })
        ));

        // negative eigenvalue
        let mut entries = DMatrix::<C64>::zeros(4, 4);
        entries[(0, 0)] = C64::new(1.5, 0.0);
        entries[(1, 1)] = C64::new(-0.5, 0.0);
        let rho = DensityMatrix::new(2, 2, entries).unwrap();
        assert!(matches!(
            rho.validate(TOL),
            Err(MixedError::NotAState { .. })
        ));
    }

    #[test]
    fn shape_mismatch_is_rejected() {
        assert!(matches!(
            DensityMatrix::new(2, 2, DMatrix::<C64>::zeros(3, 3)),
            Err(MixedError::ShapeMismatch { .. })
        ));
    }

    #[test]
    fn density_matrix_json_round_trip() {
        let rho = DensityMatrix::from_pure(&PureState::bell(), TOL).unwrap();
        let json = serde_json::to_string(&rho).unwrap();
        let back: DensityMatrix = serde_json::from_str(&json).unwrap();
        assert_eq!(back, rho);
    }

    #[test]
    fn witness_json_round_trip() {
        let basis = SubspaceBasis::build(3, 3).unwrap();
        let cert = exhaustive_cert(3, 3);
        let rho = make_uniform_state(&basis);
        let witness = schmidt_number_lower_bound(&rho, &basis, &cert, TOL).unwrap();
        let json = serde_json::to_string(&witness).unwrap();
        let back: SchmidtNumberWitness = serde_json::from_str(&json).unwrap();
        assert_eq!(back, witness);
    }
}
