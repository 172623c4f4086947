//! Property tests for the algebraic invariants of the closed forms and the
//! extinction solver.

use busylt::analytic::{
    busy_lt, defect_mass, lt_at_zero, lt_curve, lt_from_level, QueueParams, TransformArg,
};
use busylt::branching::{busy_end_probability, extinction_probability, OffspringDist};
use proptest::prelude::*;

fn rate() -> impl Strategy<Value = f64> {
    0.1f64..8.0
}

fn transform_arg() -> impl Strategy<Value = f64> {
    0.0f64..50.0
}

fn q(lambda: f64, mu: f64) -> QueueParams {
    QueueParams::new(lambda, mu).unwrap()
}

fn arg(s: f64) -> TransformArg {
    TransformArg::new(s).unwrap()
}

/// Random finite-support offspring PMF with up to six atoms.
fn offspring_dist() -> impl Strategy<Value = OffspringDist> {
    prop::collection::vec(0.0f64..1.0, 1..=6)
        .prop_filter("needs positive mass", |ws| ws.iter().sum::<f64>() > 1e-3)
        .prop_map(|ws| {
            let total: f64 = ws.iter().sum();
            let mut probs: Vec<f64> = ws.iter().map(|w| w / total).collect();
            // make the sum exactly 1 up to one rounding by recomputing p0
            let tail: f64 = probs[1..].iter().sum();
            probs[0] = (1.0 - tail).max(0.0);
            OffspringDist::new(probs).unwrap()
        })
}

proptest! {
    // The transform is the in-range root of its defining quadratic:
    // (lambda + mu + s) L = mu + lambda L^2.
    #[test]
    fn quadratic_residual_is_tiny(lambda in rate(), mu in rate(), s in transform_arg()) {
        let params = q(lambda, mu);
        let value = busy_lt(params, arg(s));
        let residual = (lambda + mu + s) * value - mu - lambda * value * value;
        prop_assert!(residual.abs() <= 1e-10, "residual {residual}");
    }

    #[test]
    fn transform_stays_in_unit_interval(lambda in rate(), mu in rate(), s in transform_arg()) {
        let value = busy_lt(q(lambda, mu), arg(s));
        prop_assert!(value > 0.0 && value <= 1.0, "value {value}");
    }

    #[test]
    fn transform_is_nonincreasing(
        lambda in rate(),
        mu in rate(),
        s_lo in 0.0f64..50.0,
        delta in 1e-6f64..50.0,
    ) {
        let params = q(lambda, mu);
        let lower = busy_lt(params, arg(s_lo));
        let higher = busy_lt(params, arg(s_lo + delta));
        prop_assert!(lower >= higher);
    }

    // lambda * L(lambda, mu, s) is symmetric under swapping the rates; an
    // algebraic consequence of the shared square root.
    #[test]
    fn swap_duality(lambda in rate(), mu in rate(), s in transform_arg()) {
        let a = lambda * busy_lt(q(lambda, mu), arg(s));
        let b = mu * busy_lt(q(mu, lambda), arg(s));
        prop_assert!((a - b).abs() <= 1e-10, "{a} vs {b}");
    }

    // The swapped system's transform equals the conditioned-on-finishing
    // transform of the original, whenever the original is defective.
    #[test]
    fn conditioned_transform_matches_swapped_system(
        mu in rate(),
        excess in 0.05f64..4.0,
        s in transform_arg(),
    ) {
        let lambda = mu + excess;
        let unstable = q(lambda, mu);
        let conditioned = busy_lt(unstable, arg(s)) / lt_at_zero(unstable);
        let swapped = busy_lt(unstable.swapped(), arg(s));
        prop_assert!((conditioned - swapped).abs() <= 1e-10);
    }

    #[test]
    fn lt_at_zero_equals_transform_at_zero(lambda in rate(), mu in rate()) {
        let params = q(lambda, mu);
        let diff = (lt_at_zero(params) - busy_lt(params, TransformArg::ZERO)).abs();
        prop_assert!(diff <= 1e-12);
        // and the defect is its exact complement
        prop_assert_eq!(defect_mass(params).value() + lt_at_zero(params), 1.0);
    }

    #[test]
    fn level_transform_composes(
        lambda in rate(),
        mu in rate(),
        s in transform_arg(),
        i in 0u32..12,
        j in 0u32..12,
    ) {
        let params = q(lambda, mu);
        let s = arg(s);
        let combined = lt_from_level(params, s, i + j);
        let product = lt_from_level(params, s, i) * lt_from_level(params, s, j);
        prop_assert!((combined - product).abs() <= 1e-12);
    }

    #[test]
    fn curves_respect_their_invariants(
        lambda in rate(),
        mu in rate(),
        s_max in 0.5f64..50.0,
        n_points in 2usize..200,
    ) {
        let curve = lt_curve(q(lambda, mu), TransformArg::ZERO, arg(s_max), n_points).unwrap();
        prop_assert_eq!(curve.len(), n_points);
        for pair in curve.points().windows(2) {
            prop_assert!(pair[0].s < pair[1].s);
            prop_assert!(pair[0].value >= pair[1].value);
        }
        for p in curve.points() {
            prop_assert!(p.value > 0.0 && p.value <= 1.0);
        }
        prop_assert_eq!(curve.points()[n_points - 1].s, s_max);
    }

    #[test]
    fn pgf_maps_unit_interval_into_itself(dist in offspring_dist(), z in 0.0f64..=1.0) {
        let value = dist.pgf(z).unwrap();
        prop_assert!((0.0..=1.0).contains(&value));
        prop_assert!((dist.pgf(1.0).unwrap() - 1.0).abs() <= 2e-12);
        prop_assert!((dist.pgf(0.0).unwrap() - dist.probs()[0]).abs() <= 1e-15);
    }

    // Every converged run certifies itself: the returned point is a fixed
    // point of the PGF up to ten tolerances.
    #[test]
    fn converged_results_carry_a_fixed_point_certificate(dist in offspring_dist()) {
        let tol = 1e-12;
        let r = extinction_probability(&dist, tol, 10_000_000);
        prop_assert!(r.converged);
        prop_assert!((0.0..=1.0).contains(&r.alpha));
        let defect = (dist.pgf(r.alpha).unwrap() - r.alpha).abs();
        prop_assert!(defect <= 10.0 * tol, "defect {defect}");
    }

    // Two-atom distributions have the closed form min(1, p0/p2); keep a
    // safety margin around criticality, where the iteration's linear rate
    // approaches 1 and the final iterate legitimately sits ~tol/(1-rate)
    // from the root.
    #[test]
    fn two_atom_extinction_matches_closed_form(p0 in 0.05f64..0.95) {
        prop_assume!((p0 - 0.5).abs() > 0.05);
        let dist = OffspringDist::new(vec![p0, 0.0, 1.0 - p0]).unwrap();
        let tol = 1e-12;
        let r = extinction_probability(&dist, tol, 10_000_000);
        prop_assert!(r.converged);
        let expected = (p0 / (1.0 - p0)).min(1.0);
        prop_assert!((r.alpha - expected).abs() <= 10.0 * tol);
    }

    // Subcritical or critical populations die out; clearly supercritical
    // ones survive with positive probability.
    #[test]
    fn criticality_dichotomy(dist in offspring_dist()) {
        let mean = dist.mean_offspring();
        prop_assume!(mean <= 0.85 || mean >= 1.1);
        let tol = 1e-12;
        let r = extinction_probability(&dist, tol, 10_000_000);
        prop_assert!(r.converged);
        if mean <= 0.85 {
            prop_assert!((r.alpha - 1.0).abs() <= 10.0 * tol, "alpha {}", r.alpha);
        } else {
            prop_assert!(r.alpha < 1.0 - 1e-6, "alpha {}", r.alpha);
        }
    }

    // The branching route and the closed form agree on L(0); stay a hair
    // away from the critical line where the solver's certificate is honest
    // but loose.
    #[test]
    fn branching_route_matches_analytic(lambda in rate(), mu in rate()) {
        prop_assume!((lambda - mu).abs() >= (lambda + mu) / 500.0);
        let params = q(lambda, mu);
        let via_branching = busy_end_probability(params).unwrap();
        prop_assert!((via_branching - lt_at_zero(params)).abs() <= 1e-9);
    }
}
