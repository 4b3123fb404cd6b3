//! Brute-force verification sweeps over the subspace.
//!
//! Independent of the minor-based certification: a sweep takes actual
//! coefficient tuples, forms the exact linear combination of basis vectors,
//! and computes the exact rank of its matricization. Exhaustive sweeps cover
//! a finite coefficient grid completely; random sweeps sample seeded
//! Gaussian-rational tuples. Either way, observing any rank below 3 would
//! contradict the certificate and is reported as a violation.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exact::{ExactMatrix, ExactScalar};
use crate::subspace::{build_a, SubspaceBasis};

/// Default cap on the number of rank evaluations in an exhaustive sweep.
pub const DEFAULT_BUDGET: u64 = 10_000_000;

#[derive(Debug, Error)]
pub enum OracleError {
    #[error("exhaustive sweep needs {required} rank evaluations, budget is {budget}; use a random sweep instead")]
    BudgetExceeded { required: u128, budget: u64 },

    #[error("sweep has no nonzero coefficient combination to evaluate")]
    EmptySweep,

    #[error("coefficient list is empty or all zero")]
    AllZeroCoefficients,

    #[error("random sweep needs at least one trial")]
    NoTrials,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SweepMode {
    Exhaustive,
    Random,
}

impl std::fmt::Display for SweepMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SweepMode::Exhaustive => write!(f, "exhaustive"),
            SweepMode::Random => write!(f, "random"),
        }
    }
}

/// Outcome of a sweep. `violating_combination` is present exactly when
/// `min_rank_observed < 3`; `seed` is present for random sweeps.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub mode: SweepMode,
    pub coefficient_domain: String,
    pub trials: usize,
    pub min_rank_observed: usize,
    pub violating_combination: Option<Vec<ExactScalar>>,
    pub seed: Option<u64>,
}

/// Distribution for random sweep coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CoefficientSampler {
    /// Gaussian integers with real and imaginary parts uniform in `lo..=hi`.
    UniformInt { lo: i64, hi: i64 },
    /// Gaussian rationals with numerators uniform in `lo..=hi` and
    /// denominators uniform in `1..=max_den`, independently per part.
    UniformRational { lo: i64, hi: i64, max_den: i64 },
}

impl Default for CoefficientSampler {
    fn default() -> Self {
        CoefficientSampler::UniformInt { lo: -5, hi: 5 }
    }
}

impl CoefficientSampler {
    pub fn describe(&self) -> String {
        match self {
            CoefficientSampler::UniformInt { lo, hi } => {
                format!("Gaussian integers, re and im uniform in [{lo}, {hi}]")
            }
            CoefficientSampler::UniformRational { lo, hi, max_den } => format!(
                "Gaussian rationals, numerators uniform in [{lo}, {hi}], denominators in [1, {max_den}]"
            ),
        }
    }

    fn sample<R: Rng>(&self, rng: &mut R) -> ExactScalar {
        match *self {
            CoefficientSampler::UniformInt { lo, hi } => {
                ExactScalar::from_ints(rng.gen_range(lo..=hi), rng.gen_range(lo..=hi))
            }
            CoefficientSampler::UniformRational { lo, hi, max_den } => ExactScalar::from_ratios(
                (rng.gen_range(lo..=hi), rng.gen_range(1..=max_den)),
                (rng.gen_range(lo..=hi), rng.gen_range(1..=max_den)),
            ),
        }
    }
}

/// Exact rank of the matricized combination `Σ c_l · b_l`.
fn combination_rank(basis: &SubspaceBasis, coeffs: &[ExactScalar]) -> usize {
    let (m, n) = (basis.m(), basis.n());
    let mut amps = vec![ExactScalar::zero(); m * n];
    for (el, c) in basis.elements().iter().zip(coeffs) {
        if c.is_zero() {
            continue;
        }
        for (idx, val) in el.support() {
            amps[idx] = &amps[idx] + &(c * val);
        }
    }
    ExactMatrix::new(m, n, amps)
        .expect("dimensions are positive and length matches")
        .rank()
}

struct SweepTracker {
    trials: usize,
    min_rank: usize,
    violator: Option<Vec<ExactScalar>>,
}

impl SweepTracker {
    fn new() -> Self {
        Self {
            trials: 0,
            min_rank: usize::MAX,
            violator: None,
        }
    }

    fn record(&mut self, rank: usize, coeffs: &[ExactScalar]) {
        self.trials += 1;
        if rank < 3 && self.violator.is_none() {
            self.violator = Some(coeffs.to_vec());
        }
        self.min_rank = self.min_rank.min(rank);
    }
}

/// Evaluates the exact rank of every not-all-zero coefficient tuple over the
/// grid and reports the minimum. `grid.len()^basis.len()` must stay within
/// `budget`.
pub fn exhaustive_sweep(
    basis: &SubspaceBasis,
    grid: &[ExactScalar],
    budget: u64,
) -> Result<SweepReport, OracleError> {
    let d = basis.len();
    let g = grid.len();
    if g == 0 || grid.iter().all(ExactScalar::is_zero) {
        return Err(OracleError::EmptySweep);
    }
    let required = (g as u128)
        .checked_pow(d as u32)
        .ok_or(OracleError::BudgetExceeded {
            required: u128::MAX,
            budget,
        })?;
    if required > u128::from(budget) {
        return Err(OracleError::BudgetExceeded { required, budget });
    }

    let mut tracker = SweepTracker::new();
    let mut counters = vec![0usize; d];
    let mut coeffs: Vec<ExactScalar> = vec![ExactScalar::zero(); d];
    'sweep: loop {
        if counters.iter().any(|&c| !grid[c].is_zero()) {
            for (slot, &c) in coeffs.iter_mut().zip(&counters) {
                *slot = grid[c].clone();
            }
            let rank = combination_rank(basis, &coeffs);
            tracker.record(rank, &coeffs);
        }
        let mut pos = 0;
        loop {
            if pos == d {
                break 'sweep;
            }
            counters[pos] += 1;
            if counters[pos] < g {
                break;
            }
            counters[pos] = 0;
            pos += 1;
        }
    }
    if tracker.trials == 0 {
        return Err(OracleError::EmptySweep);
    }

    let grid_desc: Vec<String> = grid.iter().map(ToString::to_string).collect();
    Ok(SweepReport {
        mode: SweepMode::Exhaustive,
        coefficient_domain: format!(
            "grid {{{}}}^{d}, all-zero tuple excluded",
            grid_desc.join(", ")
        ),
        trials: tracker.trials,
        min_rank_observed: tracker.min_rank,
        violating_combination: tracker.violator,
        seed: None,
    })
}

/// Samples `trials` not-all-zero coefficient tuples from `sampler` (seeded,
/// so reports are reproducible) and checks exact ranks.
pub fn random_sweep(
    basis: &SubspaceBasis,
    trials: usize,
    seed: u64,
    sampler: &CoefficientSampler,
) -> Result<SweepReport, OracleError> {
    if trials == 0 {
        return Err(OracleError::NoTrials);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let d = basis.len();
    let mut tracker = SweepTracker::new();
    for _ in 0..trials {
        let coeffs = loop {
            let c: Vec<ExactScalar> = (0..d).map(|_| sampler.sample(&mut rng)).collect();
            if c.iter().any(|x| !x.is_zero()) {
                break c;
            }
        };
        let rank = combination_rank(basis, &coeffs);
        tracker.record(rank, &coeffs);
    }
    Ok(SweepReport {
        mode: SweepMode::Random,
        coefficient_domain: sampler.describe(),
        trials: tracker.trials,
        min_rank_observed: tracker.min_rank,
        violating_combination: tracker.violator,
        seed: Some(seed),
    })
}

/// Number of exact nonzero entries of `A_t · c` for a coefficient vector
/// over a single anti-diagonal block (`t = c.len()`). Always ≥ 3 for
/// nonzero `c`.
pub fn antidiagonal_nonzeros(coeffs: &[ExactScalar]) -> Result<usize, OracleError> {
    if coeffs.is_empty() || coeffs.iter().all(ExactScalar::is_zero) {
        return Err(OracleError::AllZeroCoefficients);
    }
    let product = build_a(coeffs.len())
        .mul_vec(coeffs)
        .expect("length matches by construction");
    Ok(product.iter().filter(|v| !v.is_zero()).count())
}
