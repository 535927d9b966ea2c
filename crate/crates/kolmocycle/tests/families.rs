use std::f64::consts::PI;

use kolmocycle::corner::{log_l, LIndex};
use kolmocycle::families::*;
use kolmocycle::flow::{conservation_check, equilibrium_first_quadrant};
use kolmocycle::invariants::*;
use kolmocycle::{Error, Tolerances};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn draw_ex1(rng: &mut ChaCha8Rng) -> Family1Params {
    Family1Params::new(rng.gen_range(-2.0..2.0), rng.gen_range(-4.0..-1.2), rng.gen_range(1.2..4.0)).unwrap()
}

fn draw_ex2(rng: &mut ChaCha8Rng) -> Family2Params {
    let (p, q): (f64, f64) = (rng.gen_range(0.3..3.0), rng.gen_range(0.3..3.0));
    let b = rng.gen_range(-2.0..2.0 * (p * q).sqrt() - 0.1);
    Family2Params::new(rng.gen_range(-2.0..2.0), b, rng.gen_range(0.3..3.0), p, q).unwrap()
}

#[test]
fn build_examples() {
    let sys = family1_build(Family1Params::new(0.0, -2.0, 2.0).unwrap()).unwrap();
    assert_eq!(sys.f().eval(1.0, 1.0), 1.0);
    assert_eq!(sys.degree(), 2);
    let sys = family2_build(Family2Params::new(-800.01, -900.99999, 1000.0, 1.0, 0.001).unwrap()).unwrap();
    assert!(sys.f().eval(0.1, 10.0).abs() < 1e-9, "{}", sys.f().eval(0.1, 10.0));
    assert!(sys.g().eval(0.1, 10.0).abs() < 1e-9, "{}", sys.g().eval(0.1, 10.0));
    match Family1Params::new(0.0, -0.5, 2.0) {
        Err(Error::Inadmissible { family, reason }) => {
            assert_eq!(family, "ex1");
            assert!(reason.contains("p < -1"));
        }
        other => panic!("{other:?}"),
    }
    assert!(Family2Params::new(0.0, 5.0, 1.0, 2.0, 2.0).is_err());
    assert!(Family2Params::new(0.0, 0.0, -1.0, 2.0, 2.0).is_err());
}

#[test]
fn oracle_examples() {
    let o = family1_oracle(Family1Params::new(1.0, -2.0, 2.0).unwrap()).unwrap();
    assert!((o.d2_on_variety + PI / 2.0).abs() < 1e-15);
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    for a in [-1.0, 0.0, 2.5] {
        let o = family1_oracle(Family1Params::new(a, -2.0, 3.0).unwrap()).unwrap();
        assert!((o.center_point - phi).abs() < 1e-15);
    }
    let o = family2_oracle(Family2Params::new(0.5, 1.0, 1.0, 2.0, 2.0).unwrap(), 1e-13).unwrap();
    assert!(o.center_condition);
    let o = family2_oracle(Family2Params::new(0.6, 1.0, 1.0, 2.0, 2.0).unwrap(), 1e-13).unwrap();
    assert!(!o.center_condition);
}

#[test]
fn phi_is_negative() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for _ in 0..20 {
        assert!(phi(draw_ex2(&mut rng), 1e-12).unwrap() < 0.0);
    }
}

#[test]
fn pipeline_matches_closed_forms() {
    let tol = Tolerances::default();
    let mut rng = ChaCha8Rng::seed_from_u64(32);
    for _ in 0..20 {
        let params = draw_ex1(&mut rng);
        let o = family1_oracle(params).unwrap();
        let sys = CheckedSystem::new(family1_build(params).unwrap()).unwrap();
        assert!((d1(&sys) - o.d1_closed).abs() <= 1e-12);
        let on = Family1Params::new(params.a, params.p, -params.p).unwrap();
        let sys = CheckedSystem::new(family1_build(on).unwrap()).unwrap();
        let v = d2(&sys, &tol).unwrap();
        assert!((v - family1_oracle(on).unwrap().d2_on_variety).abs() <= 1e-8, "{on:?}: {v}");
    }
    for _ in 0..20 {
        let params = draw_ex2(&mut rng);
        let o = family2_oracle(params, 1e-13).unwrap();
        let sys = CheckedSystem::new(family2_build(params).unwrap()).unwrap();
        assert!((d1(&sys) - o.d1_closed).abs() <= 1e-12);
        assert!((d2(&sys, &tol).unwrap() - o.d2_closed).abs() <= 1e-8 * o.d2_closed.abs().max(1.0));
        let Family2Params { a, b, c, q, .. } = params;
        let Ok(on) = Family2Params::new(a, b, c, c * q, q) else { continue };
        let sys = CheckedSystem::new(family2_build(on).unwrap()).unwrap();
        let expected = family2_oracle(on, 1e-13).unwrap().d2_on_variety;
        assert!((d2(&sys, &tol).unwrap() - expected).abs() <= 1e-8 * expected.abs().max(1.0));
    }
}

#[test]
fn second_family_log_l_closed_forms() {
    let mut rng = ChaCha8Rng::seed_from_u64(33);
    for _ in 0..10 {
        let params = draw_ex2(&mut rng);
        let o = family2_oracle(params, 1e-13).unwrap();
        let sys = CheckedSystem::new(family2_build(params).unwrap()).unwrap();
        for (idx, closed) in [(LIndex::L11, o.log_l11), (LIndex::L31, o.log_l31), (LIndex::L22, o.log_l22), (LIndex::L32, o.log_l32)] {
            let v = log_l(&sys, idx, 1e-13).unwrap();
            assert!((v - closed).abs() <= 1e-10, "{idx:?}: {v} vs {closed}");
        }
        let l = o.lambdas;
        let got = sys.lambdas();
        assert!((l.lambda1 - got.lambda1).abs() < 1e-14 && (l.lambda2 - got.lambda2).abs() < 1e-14 && (l.lambda3 - got.lambda3).abs() < 1e-14);
    }
}

#[test]
fn center_linearization() {
    let params = Family1Params::new(0.0, -2.0, 2.0).unwrap();
    let o = family1_oracle(params).unwrap();
    let eq = equilibrium_first_quadrant(&family1_build(params).unwrap()).unwrap();
    let (u1, u2) = eq.point;
    assert!((u1 - o.center_point).abs() < 1e-10 && (u2 - o.center_point).abs() < 1e-10);
    assert!(o.trace_at(u1, u2).abs() < 1e-10 && eq.jacobian_trace.abs() < 1e-10);
    let root5 = 5f64.sqrt();
    assert!((eq.jacobian_det - (65.0 + 27.0 * root5) / 2.0).abs() < 1e-9, "{}", eq.jacobian_det);
    assert!((eq.discriminant + 130.0 + 54.0 * root5).abs() < 1e-8, "{}", eq.discriminant);
    assert!(o.discriminant_sample < 0.0);
}

#[test]
fn trace_formula_matches_jacobian() {
    let mut rng = ChaCha8Rng::seed_from_u64(34);
    let mut checked = 0;
    while checked < 10 {
        let params = draw_ex1(&mut rng);
        let Ok(eq) = equilibrium_first_quadrant(&family1_build(params).unwrap()) else { continue };
        let o = family1_oracle(params).unwrap();
        let (u1, u2) = eq.point;
        assert!((o.trace_at(u1, u2) - eq.jacobian_trace).abs() <= 1e-8 * (1.0 + eq.jacobian_trace.abs()));
        checked += 1;
    }
}

proptest! {
    #[test]
    fn eta3_sign_structure(sigma in 0.01f64..20.0, frac in prop_oneof![-0.999f64..-0.001, 0.001f64..0.999]) {
        let rho = frac * sigma;
        prop_assert!(Family1Oracle::eta3_bracket(rho, sigma) > 0.0);
        prop_assert!(Family1Oracle::eta3_denominator(rho, sigma) > 0.0);
        let eta3 = Family1Oracle::eta3_at_tau0(rho, sigma);
        prop_assert_eq!(eta3.signum(), (rho * (rho - sigma)).signum());
    }
}

/// On the zero-trace slice through an actual equilibrium the sign of η3 is that of `ρ(ρ - σ)`.
#[test]
fn eta3_sign_at_weak_focus() {
    for (p, q) in [(-2.5, 2.0), (-1.6, 3.0), (-3.0, 1.5)] {
        // choose a so that the trace vanishes at the equilibrium, by bisection on a
        let trace = |a: f64| {
            let params = Family1Params::new(a, p, q).unwrap();
            let eq = equilibrium_first_quadrant(&family1_build(params).unwrap()).unwrap();
            (eq.jacobian_trace, eq.point)
        };
        let (mut lo, mut hi) = (-3.0, 3.0);
        assert!(trace(lo).0.signum() != trace(hi).0.signum());
        for _ in 0..80 {
            let mid = 0.5 * (lo + hi);
            if trace(mid).0.signum() == trace(lo).0.signum() {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let (_, (u1, u2)) = trace(lo);
        let (rho, sigma) = ((u1 - u2) / 2.0, (u1 + u2) / 2.0);
        assert!(rho != 0.0 && rho.abs() < sigma, "p + q = {}: rho {rho}, sigma {sigma}", p + q);
        assert_eq!(Family1Oracle::eta3_at_tau0(rho, sigma).signum(), (rho * (rho - sigma)).signum());
    }
}

#[test]
fn first_integral_conservation() {
    let on = Family2Params::new(0.5, 1.0, 1.0, 2.0, 2.0).unwrap();
    let o = family2_oracle(on, 1e-13).unwrap();
    let sys = family2_build(on).unwrap();
    let r = conservation_check(&sys, |x, y| o.first_integral(x, y), (2.0, 2.0), 1e-11).unwrap();
    assert!(r.max_drift <= 1e-6, "{:e}", r.max_drift);
    let off = family2_build(Family2Params::new(0.6, 1.0, 1.0, 2.0, 2.0).unwrap()).unwrap();
    let r = conservation_check(&off, |x, y| o.first_integral(x, y), (2.0, 2.0), 1e-11).unwrap();
    assert!(r.max_drift > 1e-3, "{:e}", r.max_drift);
}
