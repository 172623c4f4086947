//! Stability-boundary location via the defect mass.
//!
//! `L(0)` carries a structural signal: it equals 1 exactly on the stable
//! side of parameter space and drops below 1 the moment the system can
//! escape to infinity. Fixing all rates but one and sweeping the free rate,
//! the point where the defect mass `1 - L(0)` first becomes positive *is*
//! the stability boundary — no steady-state analysis required.
//!
//! Because the defect is identically zero on the whole stable side, this is
//! a one-sided crossing, not a sign change: bisection here maintains a
//! bracket on the predicate "defect > 0" rather than on the sign of a
//! smooth function (whose flatness at zero would defeat secant or Newton
//! steps).

use crate::analytic::{defect_mass, QueueParams};
use crate::error::{Error, Result};

/// Which rate the search is allowed to move.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FreeParam {
    Arrival,
    Service,
}

/// A bracketed search for the stability boundary of a one-parameter family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundarySearchSpec {
    pub free_param: FreeParam,
    pub fixed_value: f64,
    pub bracket_lo: f64,
    pub bracket_hi: f64,
    pub tol: f64,
}

impl BoundarySearchSpec {
    pub fn new(
        free_param: FreeParam,
        fixed_value: f64,
        bracket_lo: f64,
        bracket_hi: f64,
        tol: f64,
    ) -> Result<Self> {
        if !(fixed_value.is_finite() && fixed_value > 0.0) {
            return Err(Error::InvalidBoundarySpec {
                reason: "fixed rate must be positive and finite",
            });
        }
        if !(bracket_lo.is_finite() && bracket_hi.is_finite() && 0.0 < bracket_lo) {
            return Err(Error::InvalidBoundarySpec {
                reason: "bracket endpoints must be positive and finite",
            });
        }
        if bracket_lo >= bracket_hi {
            return Err(Error::InvalidBoundarySpec {
                reason: "bracket must satisfy lo < hi",
            });
        }
        if !(tol.is_finite() && tol > 0.0) {
            return Err(Error::InvalidBoundarySpec {
                reason: "tolerance must be positive and finite",
            });
        }
        Ok(Self {
            free_param,
            fixed_value,
            bracket_lo,
            bracket_hi,
            tol,
        })
    }
}

/// Where the boundary was found and how much work it took.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryResult {
    /// Located value of the free rate; within `tol` of the true crossing.
    pub value: f64,
    /// Width of the final bracket (at most `tol`).
    pub bracket_width_final: f64,
    /// Number of defect evaluations, endpoint checks included.
    pub evaluations: u64,
}

/// Bisect the predicate `defect(theta) > 0` for an arbitrary defect-mass
/// evaluator over the free parameter.
///
/// The bracket endpoints must land on opposite sides of the predicate;
/// otherwise there is no crossing to find and the call fails rather than
/// extrapolate. The returned value is the final bracket midpoint, within
/// `tol` of the crossing, after `ceil(log2(width / tol))` midpoint
/// evaluations plus the two endpoint checks.
pub fn find_boundary_with<F>(spec: &BoundarySearchSpec, mut defect: F) -> Result<BoundaryResult>
where
    F: FnMut(f64) -> f64,
{
    let mut lo = spec.bracket_lo;
    let mut hi = spec.bracket_hi;
    let mut evaluations = 2u64;
    let defect_lo = defect(lo);
    let defect_hi = defect(hi);
    let lo_unstable = defect_lo > 0.0;
    if lo_unstable == (defect_hi > 0.0) {
        return Err(Error::BracketDoesNotStraddle {
            defect_lo,
            defect_hi,
        });
    }

    while hi - lo > spec.tol {
        let mid = 0.5 * (lo + hi);
        evaluations += 1;
        if (defect(mid) > 0.0) == lo_unstable {
            lo = mid;
        } else {
            hi = mid;
        }
    }

    Ok(BoundaryResult {
        value: 0.5 * (lo + hi),
        bracket_width_final: hi - lo,
        evaluations,
    })
}

/// Locate the stability boundary of the M/M/1 family by sweeping the free
/// rate against the closed-form defect mass. The crossing sits where the
/// two rates meet, so the result is the fixed rate up to `tol`.
pub fn find_stability_boundary(spec: &BoundarySearchSpec) -> Result<BoundaryResult> {
    let params_at = |theta: f64| match spec.free_param {
        FreeParam::Arrival => QueueParams::new(theta, spec.fixed_value),
        FreeParam::Service => QueueParams::new(spec.fixed_value, theta),
    };
    find_boundary_with(spec, |theta| {
        let params = params_at(theta).expect("bracket endpoints are validated positive");
        defect_mass(params).value()
    })
}
