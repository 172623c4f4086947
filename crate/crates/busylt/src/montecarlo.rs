//! Monte Carlo estimators that cross-check the closed forms.
//!
//! Both estimators target the same quantity, `L(s) = P(B < Y)` with `Y`
//! exponential at rate `s`, through deliberately different mechanisms:
//!
//! - [`estimate_lt_mc`] walks the embedded jump chain. Competing
//!   exponential clocks (arrival `lambda`, completion `mu`, catastrophe
//!   `s`) reduce to a memoryless three-way coin per step, so no clock is
//!   ever sampled.
//! - [`estimate_lt_time_domain`] simulates the busy period on a continuous
//!   clock with explicit exponential holding times and races it against a
//!   separately drawn catastrophe time.
//!
//! Agreement between the two is itself a test of the uniformization step
//! that justifies the first.
//!
//! Every trial draws from its own RNG stream, a pure function of
//! `(seed, trial index)`, so results are bit-identical no matter how trials
//! are scheduled across threads. Success and censor counts are accumulated
//! as integers; nothing about the estimate depends on summation order.
//!
//! Trials that exhaust their event budget are *censored*: scored as
//! failures and reported via [`SimEstimate::n_censored`]. Censoring biases
//! `p_hat` downward by at most `n_censored / n_trials`, which matters
//! mainly at `s = 0` on an unstable queue, where the walk escapes to
//! infinity with positive probability and the cap is what ends it.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp};
use rayon::prelude::*;

use crate::analytic::{QueueParams, TransformArg};
use crate::error::{Error, Result};

/// The per-trial generator. ChaCha8 keyed by the run seed, with the trial
/// index as the stream: independent streams by construction.
pub type TrialRng = ChaCha8Rng;

/// The deterministic stream for one trial. This is the whole reproducibility
/// contract: same `(seed, trial_index)`, same draws, on every platform and
/// at any thread count.
pub fn trial_rng(seed: u64, trial_index: u64) -> TrialRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial_index);
    rng
}

/// Per-step probabilities of the embedded walk: completion steps down,
/// arrival steps up, catastrophe ends the race. The three sum to 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WalkStepProbs {
    p_down: f64,
    p_up: f64,
    p_cat: f64,
}

impl WalkStepProbs {
    pub fn p_down(&self) -> f64 {
        self.p_down
    }

    pub fn p_up(&self) -> f64 {
        self.p_up
    }

    pub fn p_cat(&self) -> f64 {
        self.p_cat
    }
}

/// Uniformize the three competing clocks into one jump chain:
/// `(mu, lambda, s) / (lambda + mu + s)`.
pub fn embedded_step_probs(params: QueueParams, s: TransformArg) -> WalkStepProbs {
    let total = params.lambda() + params.mu() + s.value();
    WalkStepProbs {
        p_down: params.mu() / total,
        p_up: params.lambda() / total,
        p_cat: s.value() / total,
    }
}

/// Trial count, base seed, and per-trial event cap for an estimator run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimConfig {
    n_trials: u64,
    seed: u64,
    max_events: u64,
}

impl SimConfig {
    /// Default event cap for `s > 0`, where the catastrophe ends walks
    /// geometrically fast and censoring is negligible.
    pub const DEFAULT_MAX_EVENTS: u64 = 1_000_000;

    /// Default event cap for `s = 0`. With no catastrophe channel an
    /// unstable walk only ever stops at the cap, so it is kept lower and
    /// `n_censored` deserves a hard look.
    pub const DEFAULT_MAX_EVENTS_NO_CATASTROPHE: u64 = 100_000;

    pub fn new(n_trials: u64, seed: u64) -> Result<Self> {
        if n_trials == 0 {
            return Err(Error::InvalidSimConfig { name: "n_trials" });
        }
        Ok(Self {
            n_trials,
            seed,
            max_events: Self::DEFAULT_MAX_EVENTS,
        })
    }

    pub fn with_max_events(mut self, max_events: u64) -> Result<Self> {
        if max_events == 0 {
            return Err(Error::InvalidSimConfig { name: "max_events" });
        }
        self.max_events = max_events;
        Ok(self)
    }

    /// The default cap appropriate for a given transform argument.
    pub fn default_max_events(s: TransformArg) -> u64 {
        if s.is_zero() {
            Self::DEFAULT_MAX_EVENTS_NO_CATASTROPHE
        } else {
            Self::DEFAULT_MAX_EVENTS
        }
    }

    pub fn n_trials(&self) -> u64 {
        self.n_trials
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn max_events(&self) -> u64 {
        self.max_events
    }
}

/// A binomial probability estimate with its Wald standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimEstimate {
    p_hat: f64,
    std_error: f64,
    ci95_half_width: f64,
    n_trials: u64,
    n_censored: u64,
}

impl SimEstimate {
    fn from_counts(successes: u64, n_trials: u64, n_censored: u64) -> Self {
        debug_assert!(successes <= n_trials && n_censored <= n_trials);
        let n = n_trials as f64;
        let p_hat = successes as f64 / n;
        let std_error = (p_hat * (1.0 - p_hat) / n).sqrt();
        Self {
            p_hat,
            std_error,
            ci95_half_width: 1.96 * std_error,
            n_trials,
            n_censored,
        }
    }

    pub fn p_hat(&self) -> f64 {
        self.p_hat
    }

    pub fn std_error(&self) -> f64 {
        self.std_error
    }

    pub fn ci95_half_width(&self) -> f64 {
        self.ci95_half_width
    }

    pub fn n_trials(&self) -> u64 {
        self.n_trials
    }

    pub fn n_censored(&self) -> u64 {
        self.n_censored
    }

    /// Upper bound on the downward censoring bias of `p_hat`.
    pub fn censored_fraction(&self) -> f64 {
        self.n_censored as f64 / self.n_trials as f64
    }
}

/// How one simulated busy period ended.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BusyPeriodOutcome {
    /// The queue drained; `duration` is the busy-period length on the
    /// simulation clock and `events` counts arrivals plus completions.
    Finished { duration: f64, events: u64 },
    /// The event cap was hit with customers still in the queue.
    Censored { events: u64 },
}

impl BusyPeriodOutcome {
    pub fn is_finished(&self) -> bool {
        matches!(self, BusyPeriodOutcome::Finished { .. })
    }

    pub fn duration(&self) -> Option<f64> {
        match self {
            BusyPeriodOutcome::Finished { duration, .. } => Some(*duration),
            BusyPeriodOutcome::Censored { .. } => None,
        }
    }

    pub fn events(&self) -> u64 {
        match self {
            BusyPeriodOutcome::Finished { events, .. } => *events,
            BusyPeriodOutcome::Censored { events } => *events,
        }
    }
}

enum TrialOutcome {
    Success,
    Failure,
    Censored,
}

fn embedded_walk_trial(probs: &WalkStepProbs, max_events: u64, rng: &mut TrialRng) -> TrialOutcome {
    // Catastrophe occupies the top of the unit interval so that p_cat = 0
    // can never fire, not even by an ulp.
    let cat_threshold = 1.0 - probs.p_cat;
    let mut level: u64 = 1;
    let mut events: u64 = 0;
    loop {
        if events == max_events {
            return TrialOutcome::Censored;
        }
        let u: f64 = rng.random();
        if u >= cat_threshold {
            return TrialOutcome::Failure;
        }
        events += 1;
        if u < probs.p_down {
            level -= 1;
            if level == 0 {
                return TrialOutcome::Success;
            }
        } else {
            level += 1;
        }
    }
}

/// Estimate `L(s)` by the embedded jump chain: walk down/up/catastrophe per
/// [`embedded_step_probs`], success when the walk hits level 0 before a
/// catastrophe.
///
/// Censored trials score as failures, so at `s = 0` on an unstable queue
/// the estimate is biased *downward* by at most
/// [`SimEstimate::censored_fraction`]; check `n_censored` before trusting
/// the last digit.
pub fn estimate_lt_mc(params: QueueParams, s: TransformArg, config: &SimConfig) -> SimEstimate {
    let probs = embedded_step_probs(params, s);
    let (successes, censored) = (0..config.n_trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = trial_rng(config.seed, trial);
            match embedded_walk_trial(&probs, config.max_events, &mut rng) {
                TrialOutcome::Success => (1u64, 0u64),
                TrialOutcome::Failure => (0, 0),
                TrialOutcome::Censored => (0, 1),
            }
        })
        .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1));
    SimEstimate::from_counts(successes, config.n_trials, censored)
}

/// Estimate `L(s)` on a continuous clock: accumulate exponential holding
/// times at rate `lambda + mu` while the busy period runs, and race the
/// running time against an independently drawn `Y ~ Exp(s)`.
///
/// Rejects `s = 0` (the catastrophe would never fire; use
/// [`estimate_lt_mc`] with its event cap instead).
pub fn estimate_lt_time_domain(
    params: QueueParams,
    s: TransformArg,
    config: &SimConfig,
) -> Result<SimEstimate> {
    if s.is_zero() {
        return Err(Error::ZeroCatastropheRate);
    }
    let event_rate = params.lambda() + params.mu();
    let p_down = params.mu() / event_rate;
    let holding = Exp::new(event_rate).expect("rates are positive");
    let catastrophe = Exp::new(s.value()).expect("s is positive");

    let (successes, censored) = (0..config.n_trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = trial_rng(config.seed, trial);
            let y = catastrophe.sample(&mut rng);
            let mut clock = 0.0f64;
            let mut level: u64 = 1;
            let mut events: u64 = 0;
            loop {
                if events == config.max_events {
                    return (0u64, 1u64);
                }
                clock += holding.sample(&mut rng);
                if clock >= y {
                    // catastrophe fired mid-holding; the busy period lost
                    return (0, 0);
                }
                events += 1;
                if rng.random::<f64>() < p_down {
                    level -= 1;
                    if level == 0 {
                        return (1, 0);
                    }
                } else {
                    level += 1;
                }
            }
        })
        .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1));
    Ok(SimEstimate::from_counts(
        successes,
        config.n_trials,
        censored,
    ))
}

/// Estimate `L_X(s) = P(X < Y)` for an arbitrary nonnegative duration
/// sampler, racing each draw against `Y ~ Exp(s)`.
///
/// The sampler receives the trial's own RNG stream and must return a
/// nonnegative finite duration; anything else aborts the run. Within one
/// trial the sampler draws first, then `Y` — part of the determinism
/// contract. `s` must be strictly positive.
pub fn catastrophe_race<F>(sampler: F, s: TransformArg, config: &SimConfig) -> Result<SimEstimate>
where
    F: Fn(&mut TrialRng) -> f64 + Sync,
{
    if s.is_zero() {
        return Err(Error::ZeroCatastropheRate);
    }
    let catastrophe = Exp::new(s.value()).expect("s is positive");
    let successes = (0..config.n_trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = trial_rng(config.seed, trial);
            let x = sampler(&mut rng);
            if !(x.is_finite() && x >= 0.0) {
                return Err(Error::SamplerReturnedInvalid { value: x, trial });
            }
            let y = catastrophe.sample(&mut rng);
            Ok(u64::from(x < y))
        })
        .try_reduce(|| 0, |a, b| Ok(a + b))?;
    Ok(SimEstimate::from_counts(successes, config.n_trials, 0))
}

fn busy_walk(
    holding: &Exp<f64>,
    p_down: f64,
    max_events: u64,
    rng: &mut TrialRng,
) -> BusyPeriodOutcome {
    let mut duration = 0.0f64;
    let mut level: u64 = 1;
    let mut events: u64 = 0;
    loop {
        if events == max_events {
            return BusyPeriodOutcome::Censored { events };
        }
        duration += holding.sample(rng);
        events += 1;
        if rng.random::<f64>() < p_down {
            level -= 1;
            if level == 0 {
                return BusyPeriodOutcome::Finished { duration, events };
            }
        } else {
            level += 1;
        }
    }
}

/// Simulate one busy period from a single initial customer in continuous
/// time. On an unstable queue a positive fraction of walks never drain, so
/// the cap is what ends them: expect `Censored` about `1 - mu/lambda` of
/// the time.
///
/// Uses the stream `trial_rng(seed, 0)`; draw ensembles either with
/// distinct seeds or via [`busy_period_ensemble`].
pub fn sample_busy_period(
    params: QueueParams,
    seed: u64,
    max_events: u64,
) -> Result<BusyPeriodOutcome> {
    if max_events == 0 {
        return Err(Error::InvalidSimConfig { name: "max_events" });
    }
    let event_rate = params.lambda() + params.mu();
    let holding = Exp::new(event_rate).expect("rates are positive");
    let p_down = params.mu() / event_rate;
    Ok(busy_walk(
        &holding,
        p_down,
        max_events,
        &mut trial_rng(seed, 0),
    ))
}

/// Simulate `config.n_trials` independent busy periods; trial `i` uses the
/// stream `trial_rng(config.seed, i)`, so the result is reproducible and
/// order-independent. Index 0 coincides with [`sample_busy_period`] at the
/// same seed and cap.
pub fn busy_period_ensemble(params: QueueParams, config: &SimConfig) -> Vec<BusyPeriodOutcome> {
    let event_rate = params.lambda() + params.mu();
    let holding = Exp::new(event_rate).expect("rates are positive");
    let p_down = params.mu() / event_rate;
    (0..config.n_trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = trial_rng(config.seed, trial);
            busy_walk(&holding, p_down, config.max_events, &mut rng)
        })
        .collect()
}
