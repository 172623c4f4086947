//! Independent numerical oracles for validating `busylt`.
//!
//! Everything in this crate is deliberately implemented from first
//! principles, without touching `busylt` itself, so that a bug in the
//! library cannot hide behind the same bug in its tests. The crate is only
//! ever pulled in as a dev-dependency.

/// Absorption probability of the embedded M/M/1 jump chain with a
/// catastrophe channel, computed by finite-horizon dynamic programming.
///
/// Starting from one customer, each step is a service completion with
/// probability `mu / (lambda + mu + s)`, an arrival with probability
/// `lambda / (lambda + mu + s)`, or a catastrophe with the remaining
/// probability. The walk is truncated at `level_cap` (reaching the cap
/// counts as failure) and at `horizon` steps. The returned value is the
/// probability of hitting level 0 before a catastrophe, within the horizon.
///
/// For `s >= 0.1` the catastrophe channel kills unresolved walks
/// geometrically fast, so the truncation error at `level_cap = 1000`,
/// `horizon = 10_000` is far below 1e-6.
pub fn dp_hit_zero_before_catastrophe(
    lambda: f64,
    mu: f64,
    s: f64,
    level_cap: usize,
    horizon: usize,
) -> f64 {
    assert!(lambda > 0.0 && mu > 0.0 && s >= 0.0, "invalid rates");
    assert!(level_cap >= 2 && horizon >= 1);
    let total = lambda + mu + s;
    let p_down = mu / total;
    let p_up = lambda / total;

    // f[i] = P(hit 0 within t steps | currently at level i); level 0 is
    // absorbing success, level_cap is absorbing failure.
    let mut f = vec![0.0f64; level_cap + 1];
    f[0] = 1.0;
    let mut g = f.clone();
    for _ in 0..horizon {
        for i in 1..level_cap {
            g[i] = p_down * f[i - 1] + p_up * f[i + 1];
        }
        std::mem::swap(&mut f, &mut g);
    }
    f[1]
}

/// Two-sample Kolmogorov-Smirnov statistic: the supremum distance between
/// the two empirical CDFs.
pub fn two_sample_ks_statistic(a: &[f64], b: &[f64]) -> f64 {
    assert!(!a.is_empty() && !b.is_empty());
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(|x, y| x.total_cmp(y));
    b.sort_by(|x, y| x.total_cmp(y));

    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j) = (0usize, 0usize);
    let mut d = 0.0f64;
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    d
}

/// Critical value for the two-sample KS test at significance `alpha`:
/// `c(alpha) * sqrt((n + m) / (n * m))` with `c(alpha) = sqrt(-ln(alpha/2)/2)`.
pub fn ks_critical_value(alpha: f64, n: usize, m: usize) -> f64 {
    assert!(alpha > 0.0 && alpha < 1.0);
    let c = (-((alpha / 2.0).ln()) / 2.0).sqrt();
    c * (((n + m) as f64) / ((n * m) as f64)).sqrt()
}

/// Second-order one-sided finite-difference derivative at `x`, using
/// evaluations at `x`, `x + h`, `x + 2h` only. Suited to functions whose
/// domain ends at `x` (error is O(h^2)).
pub fn one_sided_derivative<F: Fn(f64) -> f64>(f: F, x: f64, h: f64) -> f64 {
    assert!(h > 0.0);
    (-3.0 * f(x) + 4.0 * f(x + h) - f(x + 2.0 * h)) / (2.0 * h)
}

/// Sample mean and standard error of the mean.
pub fn mean_and_sem(xs: &[f64]) -> (f64, f64) {
    let n = xs.len();
    assert!(n >= 2);
    let mean = xs.iter().sum::<f64>() / n as f64;
    let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n as f64 - 1.0);
    (mean, (var / n as f64).sqrt())
}
