use thiserror::Error;

/// Errors reported by busylt operations and constructors.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A rate parameter was zero, negative, NaN or infinite.
    #[error("{name} must be positive and finite, got {value}")]
    InvalidRate { name: &'static str, value: f64 },

    /// The transform argument s was negative, NaN or infinite.
    #[error("transform argument s must be nonnegative and finite, got {s}")]
    InvalidTransformArg { s: f64 },

    /// A sampling grid had an inverted or degenerate range.
    #[error("curve range must satisfy s_min < s_max, got [{s_min}, {s_max}]")]
    InvalidCurveRange { s_min: f64, s_max: f64 },

    /// Fewer than two grid points were requested.
    #[error("a curve needs at least 2 points, got {n_points}")]
    TooFewCurvePoints { n_points: usize },

    /// An offspring distribution entry was negative, NaN or infinite.
    #[error("offspring probability p[{index}] must be in [0, 1], got {value}")]
    InvalidOffspringProb { index: usize, value: f64 },

    /// Offspring probabilities did not sum to one.
    #[error("offspring probabilities must sum to 1 within 1e-12, got {sum}")]
    OffspringSumNotOne { sum: f64 },

    /// An offspring distribution with no entries at all.
    #[error("offspring distribution must have at least one entry")]
    EmptyOffspringDist,

    /// A generating-function argument outside the unit interval.
    #[error("pgf argument must lie in [0, 1], got {z}")]
    PgfArgOutOfRange { z: f64 },

    /// The extinction solver hit its iteration cap before the increment
    /// dropped below tolerance. Carries the last iterate.
    #[error("fixed-point iteration did not converge after {iterations} steps (last iterate {alpha})")]
    SolverDidNotConverge { alpha: f64, iterations: u64 },

    /// Simulation configuration with a zero trial count or event cap.
    #[error("{name} must be at least 1")]
    InvalidSimConfig { name: &'static str },

    /// An operation that races against an exponential catastrophe was given
    /// rate zero, so the catastrophe would never fire.
    #[error("catastrophe rate s must be strictly positive for this operation")]
    ZeroCatastropheRate,

    /// A user-supplied duration sampler produced a negative or non-finite
    /// value.
    #[error("sampler returned {value} on trial {trial}; draws must be nonnegative and finite")]
    SamplerReturnedInvalid { value: f64, trial: u64 },

    /// A boundary search specification with a bad bracket or tolerance.
    #[error("invalid boundary search: {reason}")]
    InvalidBoundarySpec { reason: &'static str },

    /// Both bracket endpoints were on the same side of the stability
    /// boundary, so bisection has nothing to locate.
    #[error(
        "bracket does not straddle the stability boundary \
         (defect {defect_lo} at lo, {defect_hi} at hi)"
    )]
    BracketDoesNotStraddle { defect_lo: f64, defect_hi: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
