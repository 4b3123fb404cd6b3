//! Construction and certification of a subspace of `C^m ⊗ C^n` that
//! contains no vector of Schmidt rank ≤ 2.
//!
//! The subspace is spanned by second-difference stencils
//! `|e_{i-1}⟩⊗|e_{j+1}⟩ − 2|e_i⟩⊗|e_j⟩ + |e_{i+1}⟩⊗|e_{j-1}⟩` over all
//! `1 ≤ i ≤ m−2`, `1 ≤ j ≤ n−2`. Each stencil matricizes to a `(1,−2,1)`
//! pattern on the anti-diagonal `k = i+j`, so the matricization of any
//! combination restricted to one anti-diagonal is `A_t·c` for the banded
//! matrix [`build_a`]`(t)`. The certification argument is:
//!
//! 1. every order-`t` minor of `A_t` is nonzero (verified here by exact
//!    enumeration), hence `A_t·c` has at least 3 nonzero entries for `c ≠ 0`;
//! 2. the lowest such anti-diagonal of a mixed combination therefore yields
//!    a nonzero order-3 minor, so every nonzero vector of the span has rank
//!    at least 3.
//!
//! [`certify`] materializes that evidence — minor values, the tridiagonal
//! determinant chain behind the minor induction, and a brute-force sweep —
//! into a serializable [`RankCertificate`] that [`RankCertificate::validate`]
//! re-checks from scratch.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::exact::{det_c, det_c_closed_form, ExactError, ExactMatrix, ExactScalar};
use crate::oracle::{self, CoefficientSampler, OracleError, SweepMode, SweepReport};

#[derive(Debug, Error)]
pub enum SubspaceError {
    #[error("both dimensions must be at least 3 (got m={m}, n={n})")]
    DimensionTooSmall { m: usize, n: usize },

    #[error("anti-diagonal label {k} out of range 0..={max}")]
    OutOfRange { k: usize, max: usize },

    #[error("vector length {got} does not match m*n = {expected}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("certification failed: {detail}")]
    CertificationFailed { detail: String },

    #[error("invalid certificate: {detail}")]
    InvalidCertificate { detail: String },

    #[error("invalid basis file: {detail}")]
    InvalidBasisFile { detail: String },

    #[error(transparent)]
    Exact(#[from] ExactError),

    #[error(transparent)]
    Oracle(#[from] OracleError),
}

/// One spanning vector of the subspace: the stencil at `(i, j)` on
/// anti-diagonal `k = i + j`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasisElement {
    pub k: usize,
    pub i: usize,
    pub j: usize,
    vector: Vec<ExactScalar>,
}

impl BasisElement {
    pub fn vector(&self) -> &[ExactScalar] {
        &self.vector
    }

    /// Nonzero amplitudes as `(flat index, value)` pairs (always three).
    pub fn support(&self) -> impl Iterator<Item = (usize, &ExactScalar)> {
        self.vector
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
    }
}

/// Basis of the Schmidt-rank ≥ 3 subspace of `C^m ⊗ C^n`, ordered by
/// ascending anti-diagonal label `k`, then ascending `i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "SubspaceBasisRepr", into = "SubspaceBasisRepr")]
pub struct SubspaceBasis {
    m: usize,
    n: usize,
    elements: Vec<BasisElement>,
}

#[derive(Serialize, Deserialize)]
struct SubspaceBasisRepr {
    m: usize,
    n: usize,
    dimension: usize,
    elements: Vec<BasisElement>,
}

impl TryFrom<SubspaceBasisRepr> for SubspaceBasis {
    type Error = SubspaceError;
    fn try_from(repr: SubspaceBasisRepr) -> Result<Self, SubspaceError> {
        let built = SubspaceBasis::build(repr.m, repr.n)?;
        if repr.dimension != built.elements.len() {
            return Err(SubspaceError::InvalidBasisFile {
                detail: format!(
                    "dimension field says {}, S({},{}) has dimension {}",
                    repr.dimension,
                    repr.m,
                    repr.n,
                    built.elements.len()
                ),
            });
        }
        if repr.elements != built.elements {
            return Err(SubspaceError::InvalidBasisFile {
                detail: "elements do not match the canonical basis".into(),
            });
        }
        Ok(built)
    }
}

impl From<SubspaceBasis> for SubspaceBasisRepr {
    fn from(basis: SubspaceBasis) -> Self {
        SubspaceBasisRepr {
            m: basis.m,
            n: basis.n,
            dimension: basis.elements.len(),
            elements: basis.elements,
        }
    }
}

impl SubspaceBasis {
    /// Builds the `(m−2)(n−2)` stencil vectors. Requires `min(m,n) ≥ 3`.
    pub fn build(m: usize, n: usize) -> Result<Self, SubspaceError> {
        if m.min(n) < 3 {
            return Err(SubspaceError::DimensionTooSmall { m, n });
        }
        let last = m + n - 2;
        let mut elements = Vec::with_capacity((m - 2) * (n - 2));
        for k in 2..=last - 2 {
            let lo = 1.max(k.saturating_sub(n - 2));
            let hi = (m - 2).min(k - 1);
            for i in lo..=hi {
                let j = k - i;
                let mut vector = vec![ExactScalar::zero(); m * n];
                vector[(i - 1) * n + (j + 1)] = ExactScalar::one();
                vector[i * n + j] = ExactScalar::from_int(-2);
                vector[(i + 1) * n + (j - 1)] = ExactScalar::one();
                elements.push(BasisElement { k, i, j, vector });
            }
        }
        debug_assert_eq!(elements.len(), (m - 2) * (n - 2));
        Ok(Self { m, n, elements })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of basis vectors, `(m−2)(n−2)`.
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[BasisElement] {
        &self.elements
    }

    /// Label of the last anti-diagonal, `N = m + n − 2`.
    pub fn last_antidiagonal(&self) -> usize {
        self.m + self.n - 2
    }

    /// Basis vectors stacked as rows of a `len × m·n` matrix.
    pub fn stacked_matrix(&self) -> ExactMatrix {
        ExactMatrix::from_fn(self.elements.len(), self.m * self.n, |i, j| {
            self.elements[i].vector[j].clone()
        })
    }

    /// Exact membership test: does `v` lie in the span of the basis?
    ///
    /// Decided by comparing the rank of the stacked basis columns with the
    /// rank of the same matrix augmented by `v`; both ranks are exact.
    pub fn contains(&self, v: &[ExactScalar]) -> Result<bool, SubspaceError> {
        let expected = self.m * self.n;
        if v.len() != expected {
            return Err(SubspaceError::LengthMismatch {
                expected,
                got: v.len(),
            });
        }
        if v.iter().all(ExactScalar::is_zero) {
            return Ok(true);
        }
        let d = self.elements.len();
        let plain = ExactMatrix::from_fn(expected, d, |i, j| self.elements[j].vector[i].clone());
        let augmented = ExactMatrix::from_fn(expected, d + 1, |i, j| {
            if j < d {
                self.elements[j].vector[i].clone()
            } else {
                v[i].clone()
            }
        });
        Ok(augmented.rank() == plain.rank())
    }
}

/// The `(t+2)×t` banded matrix whose column `c` carries the stencil
/// `(1, −2, 1)` at rows `c, c+1, c+2`.
pub fn build_a(t: usize) -> ExactMatrix {
    assert!(t >= 1, "A_t is defined for t >= 1");
    ExactMatrix::from_fn(t + 2, t, |i, j| match i as i64 - j as i64 {
        0 | 2 => ExactScalar::one(),
        1 => ExactScalar::from_int(-2),
        _ => ExactScalar::zero(),
    })
}

/// Length of the `k`-th anti-diagonal of an `m×n` matrix, counting from the
/// upper-left cell (`k = 0`) down to the lower-right (`k = m+n−2`).
pub fn antidiag_length(m: usize, n: usize, k: usize) -> Result<usize, SubspaceError> {
    let max = m + n - 2;
    if k > max {
        return Err(SubspaceError::OutOfRange { k, max });
    }
    let (lo, hi) = (m.min(n), m.max(n));
    Ok(if k <= lo - 1 {
        k + 1
    } else if k <= hi - 1 {
        lo
    } else {
        m + n - (k + 1)
    })
}

/// Lexicographically ordered `k`-subsets of `0..n`.
fn index_combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    assert!(k >= 1 && k <= n);
    let mut result = Vec::new();
    let mut cur: Vec<usize> = (0..k).collect();
    'outer: loop {
        result.push(cur.clone());
        for pos in (0..k).rev() {
            if cur[pos] < n - k + pos {
                cur[pos] += 1;
                for j in (pos + 1)..k {
                    cur[j] = cur[j - 1] + 1;
                }
                continue 'outer;
            }
        }
        return result;
    }
}

/// All order-`t` minors of `A_t`, ordered lexicographically by the kept row
/// set. One entry per way of deleting two of the `t+2` rows.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinorReport {
    pub t: usize,
    pub minors: Vec<ExactScalar>,
}

/// What a certificate claims; serialized as the literal `"rank_ge_3"`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    #[serde(rename = "rank_ge_3")]
    RankGe3,
}

impl Verdict {
    /// Largest Schmidt rank excluded from the subspace.
    pub fn excluded_rank(self) -> usize {
        match self {
            Verdict::RankGe3 => 2,
        }
    }

    /// Schmidt-number lower bound implied for states supported on the
    /// subspace: excluded rank + 1.
    pub fn schmidt_number_bound(self) -> usize {
        self.excluded_rank() + 1
    }
}

/// Machine-checkable evidence that the subspace for `(m, n)` contains no
/// vector of Schmidt rank ≤ 2.
///
/// Contents: every order-`t` minor of `A_t` for each stencil-block size `t`
/// occurring at the given dimensions, the tridiagonal determinant chain
/// `det C_s` for `s` up to the largest such `t`, and a sweep report from the
/// brute-force oracle. All exact values serialize as canonical strings, so
/// zero versus nonzero is decidable by a reader.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RankCertificate {
    m: usize,
    n: usize,
    minor_reports: Vec<MinorReport>,
    det_chain: Vec<ExactScalar>,
    oracle: SweepReport,
    verdict: Verdict,
}

impl RankCertificate {
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn minor_reports(&self) -> &[MinorReport] {
        &self.minor_reports
    }

    /// `det C_s` values for `s = 1, 2, …` (index `s−1`).
    pub fn det_chain(&self) -> &[ExactScalar] {
        &self.det_chain
    }

    pub fn oracle(&self) -> &SweepReport {
        &self.oracle
    }

    pub fn verdict(&self) -> Verdict {
        self.verdict
    }

    /// SHA-256 of the canonical JSON encoding, used as the certificate
    /// identity in witnesses.
    pub fn digest(&self) -> String {
        let json = serde_json::to_string(self).expect("certificate serializes");
        hex::encode(Sha256::digest(json.as_bytes()))
    }

    /// Re-checks the certificate from scratch: recomputes every minor and
    /// every chain determinant, verifies nonzeroness and the closed form
    /// `det C_s = (−1)^s (s+1)`, and checks the oracle summary.
    pub fn validate(&self) -> Result<(), SubspaceError> {
        let fail = |detail: String| SubspaceError::InvalidCertificate { detail };
        if self.m.min(self.n) < 3 {
            return Err(fail(format!(
                "dimensions ({}, {}) too small",
                self.m, self.n
            )));
        }
        let expected_sorted: Vec<usize> =
            stencil_block_sizes(self.m, self.n).into_iter().collect();
        let got_t: Vec<usize> = self.minor_reports.iter().map(|r| r.t).collect();
        if got_t != expected_sorted {
            return Err(fail(format!(
                "minor reports cover t = {got_t:?}, expected {expected_sorted:?}"
            )));
        }
        for report in &self.minor_reports {
            let recomputed = enumerate_minors(report.t)?;
            if report.minors != recomputed {
                return Err(fail(format!(
                    "order-{t} minors do not match recomputation",
                    t = report.t
                )));
            }
            if let Some(pos) = report.minors.iter().position(ExactScalar::is_zero) {
                return Err(fail(format!(
                    "order-{t} minor #{pos} is zero",
                    t = report.t
                )));
            }
        }
        let t_max = expected_sorted.last().copied().unwrap_or(0);
        if self.det_chain.len() != t_max {
            return Err(fail(format!(
                "determinant chain has {} entries, expected {}",
                self.det_chain.len(),
                t_max
            )));
        }
        for (idx, value) in self.det_chain.iter().enumerate() {
            let s = idx + 1;
            if *value != det_c(s) || *value != det_c_closed_form(s) {
                return Err(fail(format!("det C_{s} = {value} fails the chain check")));
            }
        }
        if self.oracle.trials == 0 {
            return Err(fail("oracle sweep ran no trials".into()));
        }
        if self.oracle.min_rank_observed < 3 {
            return Err(fail(format!(
                "oracle observed rank {}",
                self.oracle.min_rank_observed
            )));
        }
        if self.oracle.violating_combination.is_some() {
            return Err(fail("oracle recorded a violating combination".into()));
        }
        Ok(())
    }
}

/// Distinct stencil-block sizes `t = |k|−2` over the anti-diagonals that
/// carry basis elements, ascending.
fn stencil_block_sizes(m: usize, n: usize) -> BTreeSet<usize> {
    let last = m + n - 2;
    let mut sizes = BTreeSet::new();
    for k in 2..=last - 2 {
        let len = antidiag_length(m, n, k).expect("k in range");
        if len >= 3 {
            sizes.insert(len - 2);
        }
    }
    sizes
}

/// All order-`t` minors of `A_t` in lexicographic row-set order.
fn enumerate_minors(t: usize) -> Result<Vec<ExactScalar>, SubspaceError> {
    let a = build_a(t);
    let cols: Vec<usize> = (0..t).collect();
    index_combinations(t + 2, t)
        .into_iter()
        .map(|rows| a.minor(&rows, &cols).map_err(SubspaceError::from))
        .collect()
}

/// Oracle configuration for [`certify`].
#[derive(Clone, Debug)]
pub struct CertifyOptions {
    pub mode: SweepMode,
    /// Random mode: number of combinations sampled.
    pub trials: usize,
    /// Random mode: RNG seed, recorded in the report.
    pub seed: u64,
    /// Exhaustive mode: coefficient grid.
    pub grid: Vec<ExactScalar>,
    /// Exhaustive mode: cap on the number of rank evaluations.
    pub budget: u64,
    /// Random mode: coefficient distribution.
    pub sampler: CoefficientSampler,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        Self {
            mode: SweepMode::Random,
            trials: 1000,
            seed: 0,
            grid: (-2..=2).map(ExactScalar::from_int).collect(),
            budget: oracle::DEFAULT_BUDGET,
            sampler: CoefficientSampler::default(),
        }
    }
}

/// Builds the basis for `(m, n)` and assembles a [`RankCertificate`]:
/// enumerates all order-`t` minors of `A_t` for every occurring block size,
/// records the `det C_s` chain, and runs the configured oracle sweep. Any
/// failed check aborts with `CertificationFailed` (which would indicate a
/// bug, not a property of the subspace).
pub fn certify(
    m: usize,
    n: usize,
    options: &CertifyOptions,
) -> Result<RankCertificate, SubspaceError> {
    let basis = SubspaceBasis::build(m, n)?;
    let fail = |detail: String| SubspaceError::CertificationFailed { detail };

    let mut per_k: BTreeMap<usize, usize> = BTreeMap::new();
    for el in basis.elements() {
        *per_k.entry(el.k).or_insert(0) += 1;
    }
    let mut t_values = BTreeSet::new();
    for (&k, &count) in &per_k {
        let len = antidiag_length(m, n, k)?;
        if len - 2 != count {
            return Err(fail(format!(
                "anti-diagonal {k} carries {count} stencils but |k|-2 = {}",
                len - 2
            )));
        }
        t_values.insert(count);
    }
    if t_values != stencil_block_sizes(m, n) {
        return Err(fail("block sizes disagree with the length formula".into()));
    }

    let mut minor_reports = Vec::new();
    for &t in &t_values {
        let minors = enumerate_minors(t)?;
        if let Some(pos) = minors.iter().position(ExactScalar::is_zero) {
            return Err(fail(format!("order-{t} minor #{pos} of A_{t} is zero")));
        }
        minor_reports.push(MinorReport { t, minors });
    }

    let t_max = *t_values.iter().max().expect("basis is nonempty");
    let mut det_chain = Vec::with_capacity(t_max);
    for s in 1..=t_max {
        let value = det_c(s);
        if value != det_c_closed_form(s) {
            return Err(fail(format!(
                "det C_{s} = {value}, closed form gives {}",
                det_c_closed_form(s)
            )));
        }
        det_chain.push(value);
    }

    let report = match options.mode {
        SweepMode::Exhaustive => oracle::exhaustive_sweep(&basis, &options.grid, options.budget)?,
        SweepMode::Random => {
            oracle::random_sweep(&basis, options.trials, options.seed, &options.sampler)?
        }
    };
    if report.min_rank_observed < 3 {
        return Err(fail(format!(
            "oracle sweep observed rank {} (combination {:?})",
            report.min_rank_observed, report.violating_combination
        )));
    }

    Ok(RankCertificate {
        m,
        n,
        minor_reports,
        det_chain,
        oracle: report,
        verdict: Verdict::RankGe3,
    })
}
