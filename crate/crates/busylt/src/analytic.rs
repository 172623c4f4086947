//! Closed-form busy-period Laplace transforms for the M/M/1 queue.
//!
//! A busy period starts when a customer arrives at an empty queue and ends
//! when the queue next drains. Racing the busy period `B` against an
//! independent exponential "catastrophe" clock `Y` at rate `s` gives the
//! probabilistic reading of the transform,
//!
//! ```text
//! L(s) = E[exp(-sB)] = P(B < Y),
//! ```
//!
//! and conditioning on the first event (completion, arrival, catastrophe)
//! yields the fixed-point equation
//!
//! ```text
//! (lambda + mu + s) L = mu + lambda L^2,
//! ```
//!
//! whose root in [0, 1] is
//!
//! ```text
//! L(s) = (mu + lambda + s - sqrt((mu + lambda + s)^2 - 4 lambda mu)) / (2 lambda).
//! ```
//!
//! When `lambda > mu` the queue is unstable and the busy period is
//! *defective*: with probability `1 - mu/lambda` it never ends, so
//! `L(0) = mu/lambda < 1`. The missing mass at `s = 0` is exactly the
//! probability assigned to an infinite busy period, exposed here as
//! [`DefectMass`].

use crate::error::{Error, Result};

/// Arrival and service rates of an M/M/1 queue, both in events per unit
/// time. Construction rejects nonpositive or non-finite rates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QueueParams {
    lambda: f64,
    mu: f64,
}

impl QueueParams {
    pub fn new(lambda: f64, mu: f64) -> Result<Self> {
        if !(lambda.is_finite() && lambda > 0.0) {
            return Err(Error::InvalidRate {
                name: "arrival rate lambda",
                value: lambda,
            });
        }
        if !(mu.is_finite() && mu > 0.0) {
            return Err(Error::InvalidRate {
                name: "service rate mu",
                value: mu,
            });
        }
        Ok(Self { lambda, mu })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    /// `lambda < mu`: the queue drains faster than it fills, so every busy
    /// period ends with probability one.
    pub fn is_stable(&self) -> bool {
        self.lambda < self.mu
    }

    /// Rates with arrival and service swapped.
    pub fn swapped(&self) -> Self {
        Self {
            lambda: self.mu,
            mu: self.lambda,
        }
    }
}

/// The Laplace variable `s`, read as the rate of an independent exponential
/// catastrophe clock. Only `s >= 0` is supported; the transform is evaluated
/// nowhere near its abscissa of convergence.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct TransformArg {
    s: f64,
}

impl TransformArg {
    pub const ZERO: TransformArg = TransformArg { s: 0.0 };

    pub fn new(s: f64) -> Result<Self> {
        if !(s.is_finite() && s >= 0.0) {
            return Err(Error::InvalidTransformArg { s });
        }
        Ok(Self { s })
    }

    pub fn value(&self) -> f64 {
        self.s
    }

    pub fn is_zero(&self) -> bool {
        self.s == 0.0
    }
}

/// Probability mass a defective busy period assigns to infinity. Always in
/// `[0, 1)`; zero exactly when the queue is stable or critical.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct DefectMass {
    k: f64,
}

impl DefectMass {
    pub fn value(&self) -> f64 {
        self.k
    }

    pub fn is_proper(&self) -> bool {
        self.k == 0.0
    }
}

/// One sample of the transform curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LtPoint {
    pub s: f64,
    pub value: f64,
}

/// An evenly spaced sampling of `L(s)`: `s` strictly increasing, values in
/// `(0, 1]` and nonincreasing.
#[derive(Debug, Clone, PartialEq)]
pub struct LtCurve {
    points: Vec<LtPoint>,
}

impl LtCurve {
    pub fn points(&self) -> &[LtPoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Expected busy-period length. Defective busy periods (and the critical
/// case `lambda = mu`) have no finite mean, and the distinction matters, so
/// the infinite case is a dedicated variant rather than an `f64::INFINITY`
/// sentinel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BusyPeriodMean {
    Finite(f64),
    Infinite,
}

impl BusyPeriodMean {
    pub fn is_infinite(&self) -> bool {
        matches!(self, BusyPeriodMean::Infinite)
    }

    /// The mean as a number, or `None` when infinite.
    pub fn finite(self) -> Option<f64> {
        match self {
            BusyPeriodMean::Finite(m) => Some(m),
            BusyPeriodMean::Infinite => None,
        }
    }
}

/// Laplace transform of the busy period at `s`.
///
/// Evaluates the minus-branch root of the quadratic fixed-point equation;
/// that branch lies in `(0, 1]` for every `s >= 0`, so no runtime root
/// filtering is needed.
pub fn busy_lt(params: QueueParams, s: TransformArg) -> f64 {
    if s.is_zero() {
        // At s = 0 the square root collapses to |mu - lambda| and the whole
        // expression simplifies to min(1, mu/lambda). Evaluating that form
        // sidesteps a cancellation that costs ~1e-10 near criticality.
        return lt_at_zero(params);
    }
    let total = params.mu + params.lambda + s.s;
    // >= (mu - lambda)^2 >= 0 in exact arithmetic; the clamp only absorbs
    // round-off for near-critical rates.
    let disc = (total * total - 4.0 * params.lambda * params.mu).max(0.0);
    ((total - disc.sqrt()) / (2.0 * params.lambda)).min(1.0)
}

/// `L(0) = min(1, mu / lambda)`: the probability that the busy period ends
/// at all. Equals 1 exactly when the queue is stable or critical.
pub fn lt_at_zero(params: QueueParams) -> f64 {
    (params.mu / params.lambda).min(1.0)
}

/// Probability that the busy period never ends, `1 - L(0)`.
pub fn defect_mass(params: QueueParams) -> DefectMass {
    DefectMass {
        k: (1.0 - params.mu / params.lambda).max(0.0),
    }
}

/// Transform of the time to drain a queue currently holding `level`
/// customers: each customer must independently be walked down one level, so
/// the transform is `L(s)^level`. `level = 0` gives 1 (the queue is already
/// empty).
pub fn lt_from_level(params: QueueParams, s: TransformArg, level: u32) -> f64 {
    busy_lt(params, s).powi(level as i32)
}

/// Sample `L(s)` on `n_points` evenly spaced values of `s`, endpoints
/// included.
pub fn lt_curve(
    params: QueueParams,
    s_min: TransformArg,
    s_max: TransformArg,
    n_points: usize,
) -> Result<LtCurve> {
    if s_min.s >= s_max.s {
        return Err(Error::InvalidCurveRange {
            s_min: s_min.s,
            s_max: s_max.s,
        });
    }
    if n_points < 2 {
        return Err(Error::TooFewCurvePoints { n_points });
    }

    let span = s_max.s - s_min.s;
    let denom = (n_points - 1) as f64;
    let points = (0..n_points)
        .map(|i| {
            // Multiply before dividing so grid values land on the shortest
            // representable doubles (0.1, 0.3, ...); the last point is
            // pinned to s_max, which the rounded formula can miss by an ulp.
            let s = if i + 1 == n_points {
                s_max.s
            } else {
                s_min.s + span * i as f64 / denom
            };
            LtPoint {
                s,
                value: busy_lt(params, TransformArg { s }),
            }
        })
        .collect();
    Ok(LtCurve { points })
}

/// Expected busy-period length: `1 / (mu - lambda)` when stable, infinite
/// otherwise (including the critical case).
pub fn mean_busy_period(params: QueueParams) -> BusyPeriodMean {
    if params.is_stable() {
        BusyPeriodMean::Finite(1.0 / (params.mu - params.lambda))
    } else {
        BusyPeriodMean::Infinite
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn q(lambda: f64, mu: f64) -> QueueParams {
        QueueParams::new(lambda, mu).unwrap()
    }

    fn arg(s: f64) -> TransformArg {
        TransformArg::new(s).unwrap()
    }

    #[test]
    fn rejects_bad_rates() {
        for bad in [0.0, -1.0, f64::NAN, f64::INFINITY] {
            assert!(QueueParams::new(bad, 1.0).is_err());
            assert!(QueueParams::new(1.0, bad).is_err());
        }
    }

    #[test]
    fn rejects_bad_transform_args() {
        for bad in [-1e-9, -1.0, f64::NAN, f64::INFINITY] {
            assert!(TransformArg::new(bad).is_err());
        }
        assert!(TransformArg::new(0.0).is_ok());
    }

    #[test]
    fn busy_lt_known_values() {
        // Unstable (4, 3): L(0) = 3/4.
        assert_abs_diff_eq!(busy_lt(q(4.0, 3.0), arg(0.0)), 0.75, epsilon = 1e-15);
        // Stable (3, 4): proper busy period.
        assert_abs_diff_eq!(busy_lt(q(3.0, 4.0), arg(0.0)), 1.0, epsilon = 1e-15);
        // (3, 4, 1): (8 - sqrt(16)) / 6 = 2/3.
        assert_abs_diff_eq!(
            busy_lt(q(3.0, 4.0), arg(1.0)),
            0.6666666666666666,
            epsilon = 1e-15
        );
        // (4, 3, 1): (8 - sqrt(16)) / 8 = 1/2.
        assert_abs_diff_eq!(busy_lt(q(4.0, 3.0), arg(1.0)), 0.5, epsilon = 1e-15);
        // (3, 4, 5): (12 - sqrt(96)) / 6.
        assert_abs_diff_eq!(
            busy_lt(q(3.0, 4.0), arg(5.0)),
            0.3670068381445481,
            epsilon = 1e-15
        );
    }

    #[test]
    fn lt_at_zero_matches_busy_lt_at_zero() {
        for (lambda, mu) in [(4.0, 3.0), (3.0, 4.0), (2.0, 2.0), (0.5, 7.0), (7.0, 0.5)] {
            let params = q(lambda, mu);
            assert_abs_diff_eq!(
                lt_at_zero(params),
                busy_lt(params, TransformArg::ZERO),
                epsilon = 1e-12
            );
        }
        assert_eq!(lt_at_zero(q(4.0, 3.0)), 0.75);
        assert_eq!(lt_at_zero(q(3.0, 4.0)), 1.0);
        assert_eq!(lt_at_zero(q(2.0, 2.0)), 1.0);
    }

    #[test]
    fn defect_mass_is_complement_of_lt_at_zero() {
        assert_eq!(defect_mass(q(4.0, 3.0)).value(), 0.25);
        assert_eq!(defect_mass(q(3.0, 4.0)).value(), 0.0);
        assert_eq!(defect_mass(q(6.0, 3.0)).value(), 0.5);
        for (lambda, mu) in [(4.0, 3.0), (3.0, 4.0), (1.0, 1.0), (9.0, 0.3)] {
            let params = q(lambda, mu);
            let k = defect_mass(params).value();
            assert_eq!(k + lt_at_zero(params), 1.0);
            assert!((0.0..1.0).contains(&k));
        }
        assert!(defect_mass(q(3.0, 4.0)).is_proper());
        assert!(!defect_mass(q(4.0, 3.0)).is_proper());
    }

    #[test]
    fn level_transform_is_a_power() {
        let params = q(3.0, 4.0);
        let s = arg(1.0);
        assert_eq!(lt_from_level(params, s, 0), 1.0);
        assert_abs_diff_eq!(
            lt_from_level(params, s, 1),
            0.6666666666666666,
            epsilon = 1e-15
        );
        // Two customers: both must be walked down, so the transform squares.
        assert_abs_diff_eq!(
            lt_from_level(params, s, 2),
            0.4444444444444444,
            epsilon = 1e-15
        );
    }

    #[test]
    fn curve_endpoints_and_interior_match_closed_form() {
        let stable = lt_curve(q(3.0, 4.0), arg(0.0), arg(10.0), 11).unwrap();
        assert_eq!(stable.len(), 11);
        assert_eq!(stable.points()[0].s, 0.0);
        assert_eq!(stable.points()[0].value, 1.0);
        assert_eq!(stable.points()[10].s, 10.0);
        // Interior grid point s = 5: (12 - sqrt(96)) / 6.
        assert_abs_diff_eq!(
            stable.points()[5].value,
            0.3670068381445481,
            epsilon = 1e-15
        );

        let unstable = lt_curve(q(4.0, 3.0), arg(0.0), arg(10.0), 11).unwrap();
        assert_eq!(unstable.points()[0].value, 0.75);
    }

    #[test]
    fn curve_satisfies_its_invariants() {
        let curve = lt_curve(q(4.0, 3.0), arg(0.0), arg(15.0), 151).unwrap();
        for pair in curve.points().windows(2) {
            assert!(pair[0].s < pair[1].s);
            assert!(pair[0].value >= pair[1].value);
        }
        for p in curve.points() {
            assert!(p.value > 0.0 && p.value <= 1.0);
        }
    }

    #[test]
    fn curve_rejects_bad_grids() {
        let params = q(3.0, 4.0);
        assert!(matches!(
            lt_curve(params, arg(1.0), arg(1.0), 10),
            Err(Error::InvalidCurveRange { .. })
        ));
        assert!(matches!(
            lt_curve(params, arg(2.0), arg(1.0), 10),
            Err(Error::InvalidCurveRange { .. })
        ));
        assert!(matches!(
            lt_curve(params, arg(0.0), arg(1.0), 1),
            Err(Error::TooFewCurvePoints { .. })
        ));
    }

    #[test]
    fn mean_busy_period_cases() {
        assert_eq!(mean_busy_period(q(3.0, 4.0)), BusyPeriodMean::Finite(1.0));
        assert_eq!(mean_busy_period(q(3.0, 5.0)), BusyPeriodMean::Finite(0.5));
        assert!(mean_busy_period(q(4.0, 3.0)).is_infinite());
        // Critical case: L(0) = 1 but the mean still diverges.
        assert!(mean_busy_period(q(2.0, 2.0)).is_infinite());
        assert_eq!(mean_busy_period(q(2.0, 2.0)).finite(), None);
    }

    #[test]
    fn critical_rates_are_exact() {
        // At lambda = mu the transform hits 1 with no round-off at all.
        let params = q(2.0, 2.0);
        assert_eq!(busy_lt(params, TransformArg::ZERO), 1.0);
        // Near-critical stable rates must agree with min(1, mu/lambda)
        // exactly, not merely to within a cancellation error.
        let near = q(3.0, 3.0 + 1e-9);
        assert_eq!(busy_lt(near, TransformArg::ZERO), 1.0);
    }

    #[test]
    fn tail_vanishes_at_large_s() {
        for lambda in [0.5, 3.0, 10.0] {
            for mu in [0.5, 3.0, 10.0] {
                let v = busy_lt(q(lambda, mu), arg(1e6));
                assert!(v > 0.0);
                assert!(v < 10.0 * mu / 1e6, "lambda={lambda} mu={mu} v={v}");
            }
        }
    }
}
