//! Galton-Watson offspring distributions and extinction probabilities.
//!
//! The M/M/1 busy period hides a branching process: watch one customer in
//! service. The next event is either their completion (they leave no
//! descendants) or an arrival (two customers now have to be cleared — the
//! newcomer plus the original). So each individual independently produces
//! 0 offspring with probability `mu / (lambda + mu)` or 2 offspring with
//! probability `lambda / (lambda + mu)`, and the busy period ends exactly
//! when this population dies out. The extinction probability — the smallest
//! fixed point of the offspring generating function — must therefore equal
//! the transform value `L(0)` computed analytically, which makes this
//! module an independent consistency check on [`crate::analytic`].
//!
//! The solver accepts any finite-support offspring distribution, not just
//! the two-atom one induced by a queue.

use crate::analytic::QueueParams;
use crate::error::{Error, Result};

/// Tolerance used by [`busy_end_probability`] for the fixed-point increment.
pub const DEFAULT_TOL: f64 = 1e-12;

/// Iteration cap used by [`busy_end_probability`].
pub const DEFAULT_MAX_ITER: u64 = 10_000_000;

/// A finite-support offspring probability mass function `p[0..=K]`.
///
/// Entries are nonnegative, sum to 1 within 1e-12, and the top entry is
/// nonzero (trailing zeros are trimmed on construction) unless the
/// distribution is the single atom `p[0] = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct OffspringDist {
    probs: Vec<f64>,
}

impl OffspringDist {
    pub fn new(mut probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::EmptyOffspringDist);
        }
        for (index, &value) in probs.iter().enumerate() {
            if !(value.is_finite() && (0.0..=1.0).contains(&value)) {
                return Err(Error::InvalidOffspringProb { index, value });
            }
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > 1e-12 {
            return Err(Error::OffspringSumNotOne { sum });
        }
        while probs.len() > 1 && *probs.last().unwrap() == 0.0 {
            probs.pop();
        }
        Ok(Self { probs })
    }

    /// The two-atom offspring law embedded in an M/M/1 busy period:
    /// `p[0] = mu / (lambda + mu)`, `p[2] = lambda / (lambda + mu)`.
    pub fn from_queue(params: QueueParams) -> Self {
        let total = params.lambda() + params.mu();
        Self {
            probs: vec![params.mu() / total, 0.0, params.lambda() / total],
        }
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    /// Largest offspring count with nonzero probability.
    pub fn max_offspring(&self) -> usize {
        self.probs.len() - 1
    }

    /// Mean offspring count; the process is subcritical, critical or
    /// supercritical as this is below, at or above 1.
    pub fn mean_offspring(&self) -> f64 {
        self.probs
            .iter()
            .enumerate()
            .map(|(k, p)| k as f64 * p)
            .sum()
    }

    /// Probability generating function `sum_k p[k] z^k`, evaluated by
    /// Horner's scheme. Only `z` in `[0, 1]` is accepted.
    pub fn pgf(&self, z: f64) -> Result<f64> {
        if !(z.is_finite() && (0.0..=1.0).contains(&z)) {
            return Err(Error::PgfArgOutOfRange { z });
        }
        Ok(self.pgf_unchecked(z))
    }

    fn pgf_unchecked(&self, z: f64) -> f64 {
        let raw = self
            .probs
            .iter()
            .rev()
            .fold(0.0f64, |acc, &p| acc * z + p);
        // round-off can push a few ulps past 1
        raw.clamp(0.0, 1.0)
    }
}

/// Outcome of the extinction fixed-point iteration.
///
/// `converged` means the final increment dropped to `tol` or below; the
/// increment bounds how far one more step could move, not the distance to
/// the true root, which near criticality can be larger.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExtinctionResult {
    pub alpha: f64,
    pub iterations: u64,
    pub converged: bool,
}

/// Smallest nonnegative fixed point of the offspring PGF, found by monotone
/// iteration from zero: `alpha_0 = 0`, `alpha_{n+1} = pgf(alpha_n)`.
///
/// The iterates increase toward the smallest root, so no bracketing or
/// derivative is needed, and the double root at criticality cannot be
/// jumped over. Iteration stops once the increment falls to `tol` or below;
/// if `max_iter` steps pass first, the result carries `converged = false`
/// and the last iterate (near-critical distributions converge linearly and
/// can legitimately run out of budget).
pub fn extinction_probability(dist: &OffspringDist, tol: f64, max_iter: u64) -> ExtinctionResult {
    assert!(tol > 0.0, "tolerance must be positive");
    assert!(max_iter >= 1, "need at least one iteration");

    let mut alpha = 0.0f64;
    for iterations in 1..=max_iter {
        let next = dist.pgf_unchecked(alpha);
        debug_assert!(next >= alpha - 1e-15, "iterates must be nondecreasing");
        let increment = next - alpha;
        alpha = next;
        if increment <= tol {
            return ExtinctionResult {
                alpha,
                iterations,
                converged: true,
            };
        }
    }
    ExtinctionResult {
        alpha,
        iterations: max_iter,
        converged: false,
    }
}

/// Probability that an M/M/1 busy period ever ends, via the branching
/// route: extinction probability of [`OffspringDist::from_queue`].
///
/// Agrees with [`crate::analytic::lt_at_zero`] — for a two-atom law the
/// smallest root is `min(1, p0/p2) = min(1, mu/lambda)`.
pub fn busy_end_probability(params: QueueParams) -> Result<f64> {
    let result = extinction_probability(
        &OffspringDist::from_queue(params),
        DEFAULT_TOL,
        DEFAULT_MAX_ITER,
    );
    if result.converged {
        Ok(result.alpha)
    } else {
        Err(Error::SolverDidNotConverge {
            alpha: result.alpha,
            iterations: result.iterations,
        })
    }
}
