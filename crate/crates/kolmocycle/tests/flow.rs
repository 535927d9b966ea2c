use std::f64::consts::{LN_10, PI};

use kolmocycle::families::*;
use kolmocycle::flow::*;
use kolmocycle::invariants::*;
use kolmocycle::{Error, Tolerances};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const TOL: f64 = 1e-11;

fn ex1(a: f64, p: f64, q: f64) -> CheckedSystem {
    CheckedSystem::new(family1_build(Family1Params::new(a, p, q).unwrap()).unwrap()).unwrap()
}

fn ex2(a: f64, b: f64, c: f64, p: f64, q: f64) -> CheckedSystem {
    CheckedSystem::new(family2_build(Family2Params::new(a, b, c, p, q).unwrap()).unwrap()).unwrap()
}

fn draw(rng: &mut ChaCha8Rng, family: usize) -> CheckedSystem {
    if family == 1 {
        ex1(rng.gen_range(-2.0..2.0), rng.gen_range(-4.0..-1.2), rng.gen_range(1.2..4.0))
    } else {
        let (p, q): (f64, f64) = (rng.gen_range(0.3..3.0), rng.gen_range(0.3..3.0));
        let b = rng.gen_range(-2.0..2.0 * (p * q).sqrt() - 0.1);
        ex2(rng.gen_range(-2.0..2.0), b, rng.gen_range(0.3..3.0), p, q)
    }
}

fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|k| lo + (hi - lo) * k as f64 / (n - 1) as f64).collect()
}

#[test]
fn chart_field_examples() {
    let sys = ex1(0.7, -2.5, 3.0);
    let u1 = chart_field(sys.system(), ChartKind::U1).unwrap();
    assert!((u1.origin_ratio() - 0.5).abs() < 1e-15);
    let sys = ex2(0.2, 0.5, 0.4, 1.4, 3.5);
    let sw = chart_field(sys.system(), ChartKind::SwapReversed).unwrap();
    assert!((sw.origin_ratio() - 0.4).abs() < 1e-15);
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    let aff = chart_field(ex1(0.0, -2.0, 2.0).system(), ChartKind::Affine).unwrap();
    let (u, v) = aff.eval(phi, phi);
    assert!(u.abs() < 1e-14 && v.abs() < 1e-14);
    for kind in [ChartKind::U1, ChartKind::U2, ChartKind::SwapReversed] {
        let f = chart_field(sys.system(), kind).unwrap();
        assert!(f.p1.eval(0.0, 0.0) > 0.0 && f.p2.eval(0.0, 0.0) < 0.0, "{kind:?}");
    }
}

#[test]
fn dulac_slope_and_prefactor() {
    let flow = PolycycleFlow::new(&ex1(1.0, -2.0, 2.0), TOL).unwrap();
    let xs = log_grid(-4.0 * LN_10, -2.0 * LN_10, 41);
    let ys: Vec<f64> = xs.iter().map(|&x| flow.log_dulac(DulacMap::Third, x).unwrap()).collect();
    let fit = fit_log_slope(&xs, &ys, &dulac_corrections(1.0, 1.0, 0.05)).unwrap();
    assert!((fit.slope - 1.0).abs() <= 1e-3, "{fit:?}");

    let sys = ex2(5.0 / 7.0, 1.0, 0.4, 1.4, 3.5);
    let lam = sys.lambdas();
    let pp = PrincipalPart::new(lam, &LogLValues::compute(&sys, 1e-13).unwrap());
    let flow = PolycycleFlow::new(&sys, TOL).unwrap();
    let ys: Vec<f64> = xs.iter().map(|&x| flow.log_dulac(DulacMap::Third, x).unwrap()).collect();
    let fit = fit_log_slope(&xs, &ys, &dulac_corrections(1.0 / lam.lambda3, 1.0, 0.05)).unwrap();
    assert!((fit.slope - 1.0 / lam.lambda3).abs() <= 1e-3, "{fit:?}");
    assert!((fit.intercept.exp() / pp.delta30 - 1.0).abs() <= 0.01, "{} vs {}", fit.intercept.exp(), pp.delta30);
}

#[test]
fn chained_halves_match_one_affine_orbit() {
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    for family in [1, 2] {
        let sys = draw(&mut rng, family);
        let flow = PolycycleFlow::new(&sys, TOL).unwrap();
        for _ in 0..10 {
            let ln_s = rng.gen_range(1e-3f64.ln()..0.5f64.ln());
            let chained = flow.log_halves(ln_s).unwrap().0;
            let direct = composed_transit_affine(&sys, ln_s, TOL).unwrap();
            assert!((chained - direct).abs() <= 1e-8 * (1.0 + chained.abs()), "ln s = {ln_s}: {chained} vs {direct}");
        }
    }
}

#[test]
fn identity_return_map() {
    let sys = ex1(0.0, -2.0, 2.0);
    for s in [1e-3, 1e-2, 0.1, 0.3] {
        let d = displacement_numeric(&sys, s, TOL).unwrap();
        assert!(d.value.abs() <= 1e-7, "s = {s}: {:e}", d.value);
        assert!((return_map(&sys, s, TOL).unwrap() - s).abs() <= 1e-7 * s.max(1e-2));
    }
    let flow = PolycycleFlow::new(&sys, TOL).unwrap();
    assert!(flow.find_limit_cycles(1e-3f64.ln(), 0.3f64.ln(), 30).unwrap().is_empty());
    for x in log_grid(1e-3f64.ln(), 0.3f64.ln(), 30) {
        assert!(flow.displacement_log(x).unwrap().value.abs() <= 1e-7);
    }
}

#[test]
fn stable_polycycle_displacement_is_negative() {
    let flow = PolycycleFlow::new(&ex1(1.0, -2.0, 2.0), TOL).unwrap();
    for x in log_grid(-12.0 * LN_10, 0.3f64.ln(), 20) {
        let d = flow.displacement_log(x).unwrap();
        assert!(d.value < 0.0 && d.log_ratio < 0.0, "ln s = {x}: {d:?}");
    }
    assert!(flow.find_limit_cycles(1e-3f64.ln(), 0.3f64.ln(), 30).unwrap().is_empty());
}

#[test]
fn displacement_exponent_is_the_smaller_one() {
    let flow = PolycycleFlow::new(&ex1(1.0, -2.0, 3.0), TOL).unwrap();
    let xs = log_grid(-60.0 * LN_10, -40.0 * LN_10, 25);
    let ys: Vec<f64> = xs
        .iter()
        .map(|&x| {
            let d = flow.displacement_log(x).unwrap();
            d.ln_d3 + d.log_ratio.exp_m1().abs().ln()
        })
        .collect();
    let fit = fit_log_slope(&xs, &ys, &[]).unwrap();
    assert!((fit.slope - 0.5).abs() <= 2e-3, "{fit:?}");
}

#[test]
fn bifurcated_cycle_is_found() {
    let flow = PolycycleFlow::new(&ex1(1.0, -2.0 + 1e-3, 2.0), TOL).unwrap();
    let cycles = flow.find_limit_cycles(-1000.0 * LN_10, 0.3f64.ln(), 60).unwrap();
    assert_eq!(cycles.len(), 1, "{cycles:?}");
    let c = &cycles[0];
    assert!(c.bracket.0 <= c.ln_s && c.ln_s <= c.bracket.1);
    // leading-order prediction ln s ≈ d2/α with α = 1e-3 (up to the log of a1/a2 ratio)
    assert!((c.ln_s - (-PI / 2.0) / 1e-3).abs() < 5.0, "{}", c.ln_s);
    assert!(flow.log_ratio(c.ln_s).unwrap().abs() < 1e-9);
}

#[test]
fn equilibrium_examples() {
    let rem = ex2(-800.01, -900.99999, 1000.0, 1.0, 0.001);
    let e = equilibrium_first_quadrant(rem.system()).unwrap();
    assert!((e.point.0 - 0.1).abs() <= 1e-8 && (e.point.1 - 10.0).abs() <= 1e-8, "{e:?}");
    assert_eq!(e.kind, EquilibriumKind::Node);
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    let e = equilibrium_first_quadrant(ex1(0.0, -2.0, 2.0).system()).unwrap();
    assert!((e.point.0 - phi).abs() <= 1e-10 && (e.point.1 - phi).abs() <= 1e-10);
    assert!(e.jacobian_trace.abs() <= 1e-10);
    assert_eq!(e.kind, EquilibriumKind::FocusOrCenter);
    let e = equilibrium_first_quadrant(ex2(0.5, 1.0, 1.0, 2.0, 2.0).system()).unwrap();
    let t = (2.0f64 / 3.0).sqrt();
    assert!((e.point.0 - t).abs() <= 1e-10 && (e.point.1 - t).abs() <= 1e-10, "{e:?}");
}

#[test]
fn equilibrium_classification_is_consistent() {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    for family in [1, 2] {
        for _ in 0..10 {
            let sys = draw(&mut rng, family);
            for e in equilibria_first_quadrant(sys.system()) {
                let (x, y) = e.point;
                let (u, v) = sys.system().field(x, y);
                assert!(u.abs() < 1e-8 && v.abs() < 1e-8);
                let disc = e.jacobian_trace.powi(2) - 4.0 * e.jacobian_det;
                assert!((disc - e.discriminant).abs() <= 1e-9 * (1.0 + disc.abs()));
                let expected = if e.jacobian_det < 0.0 {
                    EquilibriumKind::Saddle
                } else if e.discriminant < 0.0 {
                    EquilibriumKind::FocusOrCenter
                } else {
                    EquilibriumKind::Node
                };
                if e.kind != EquilibriumKind::Degenerate {
                    assert_eq!(e.kind, expected, "{e:?}");
                }
            }
        }
    }
    let no_interior = ex2(0.0, 0.0, 1.0, 0.5, 0.5);
    let r = equilibrium_first_quadrant(no_interior.system());
    assert!(r.is_ok() || matches!(r, Err(Error::NotFound(_))));
}

fn samples(flow: &PolycycleFlow, lo: f64, hi: f64, n: usize) -> Vec<DisplacementSample> {
    log_grid(lo * LN_10, hi * LN_10, n).into_iter().map(|x| flow.displacement_log(x).unwrap()).collect()
}

#[test]
fn principal_part_on_first_order_variety() {
    let sys = ex1(1.0, -2.0, 2.0);
    let lam = sys.lambdas();
    let tol = Tolerances::default();
    let d2v = d2(&sys, &tol).unwrap();
    let pp = PrincipalPart::new(lam, &LogLValues::compute(&sys, tol.quad).unwrap());
    let kappa1 = pp.delta30 * d2v.exp_m1() / d2v;
    let flow = PolycycleFlow::new(&sys, TOL).unwrap();
    let fit = fit_principal_part(&samples(&flow, -12.0, -6.0, 13), lam).unwrap();
    assert_eq!(fit.b2.signum(), d2v.signum());
    assert!((fit.b2.abs() / (kappa1 * d2v).abs() - 1.0).abs() <= 0.2, "{fit:?} vs {}", kappa1 * d2v);
    assert_eq!(fit.alpha, 0.0);

    let flow = PolycycleFlow::new(&ex1(0.0, -2.0, 2.0), TOL).unwrap();
    let fit = fit_principal_part(&samples(&flow, -12.0, -6.0, 13), lam).unwrap();
    assert!(fit.b1.abs() < 1e-6 && fit.b2.abs() < 1e-6, "{fit:?}");
}

#[test]
fn principal_part_rejects_narrow_windows() {
    let flow = PolycycleFlow::new(&ex1(1.0, -2.0, 2.0), TOL).unwrap();
    let lam = HyperbolicityRatios { lambda1: 1.0, lambda2: 1.0, lambda3: 1.0 };
    assert!(fit_principal_part(&samples(&flow, -4.0, -3.0, 12), lam).is_err());
    assert!(fit_principal_part(&samples(&flow, -6.0, -3.0, 5), lam).is_err());
}

#[test]
fn reversible_center_family() {
    let sys = ex1(0.0, -2.0, 2.0);
    for (s, eps) in [(1.0, 0.3), (0.4, 0.5), (2.5, 0.1)] {
        let d = reversibility_check(sys.system(), (s, s * (1.0 + eps)), TOL).unwrap();
        assert!(d < 1e-8, "{d:e}");
    }
    let d = reversibility_check(ex1(0.8, -2.0, 2.0).system(), (1.0, 1.3), TOL).unwrap();
    assert!(d > 1e-4, "{d:e}");
}

#[test]
fn conservation_drift_shrinks_with_tolerance() {
    let params = Family2Params::new(0.5, 1.0, 1.0, 2.0, 2.0).unwrap();
    let o = family2_oracle(params, 1e-13).unwrap();
    let sys = family2_build(params).unwrap();
    let h = |x: f64, y: f64| o.first_integral(x, y);
    let drift: Vec<f64> = [1e-7, 1e-8, 1e-9].iter().map(|&t| conservation_check(&sys, h, (2.0, 2.0), t).unwrap().max_drift).collect();
    assert!(drift[1] < drift[0] / 3.0 && drift[2] < drift[1] / 3.0, "{drift:?}");
}

#[test]
fn dulac_maps_are_increasing() {
    let mut rng = ChaCha8Rng::seed_from_u64(43);
    for family in [1, 2] {
        let flow = PolycycleFlow::new(&draw(&mut rng, family), TOL).unwrap();
        for map in [DulacMap::First, DulacMap::Second, DulacMap::Third] {
            let values: Vec<f64> =
                log_grid(-8.0 * LN_10, -2.0 * LN_10, 50).into_iter().map(|x| flow.log_dulac(map, x).unwrap()).collect();
            assert!(values.windows(2).all(|w| w[1] > w[0]), "{map:?}");
        }
    }
}

/// `D3(ℛ(s)) = D2(D1(s))`, and `ℛ(s) - s` has the sign of `𝒟(s)` because `D3` is increasing.
#[test]
fn return_map_agrees_with_displacement() {
    let mut rng = ChaCha8Rng::seed_from_u64(44);
    for family in [1, 2] {
        let flow = PolycycleFlow::new(&draw(&mut rng, family), TOL).unwrap();
        for _ in 0..20 {
            let ln_s = rng.gen_range(-8.0 * LN_10..0.5f64.ln());
            let d = flow.displacement_log(ln_s).unwrap();
            let ln_r = match flow.return_map_log(ln_s) {
                Ok(r) => r,
                Err(Error::StepBudget(_)) => continue,
                Err(e) => panic!("{e}"),
            };
            if ln_r < 0.0 {
                let (d21, _) = flow.log_halves(ln_s).unwrap();
                let back = flow.log_dulac(DulacMap::Third, ln_r).unwrap();
                assert!((back - d21).abs() <= 1e-9 * (1.0 + d21.abs()));
            }
            if d.log_ratio.abs() > 1e-7 {
                assert_eq!((ln_r - ln_s).signum(), d.log_ratio.signum(), "ln s = {ln_s}");
            }
        }
    }
}

/// The verdict describes `ℛ - s` between the polycycle and the innermost cycle around it, so
/// at a fixed `s` either the sign agrees or a limit cycle lies below `s`.
#[test]
fn stability_matches_flow_below_innermost_cycle() {
    let tol = Tolerances::default();
    let s = 1e-3f64;
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for family in [1, 2] {
        let mut done = 0;
        while done < 20 {
            let sys = draw(&mut rng, family);
            let values = TestValues::compute(&sys, &tol).unwrap();
            if values.d1.abs() <= 1e-4 {
                continue;
            }
            let flow = PolycycleFlow::new(&sys, TOL).unwrap();
            let r = match flow.return_map(s) {
                Ok(r) => r,
                Err(Error::StepBudget(_)) => continue,
                Err(e) => panic!("{e}"),
            };
            done += 1;
            let verdict = stability(&sys, &tol).unwrap();
            let agrees = match verdict {
                Stability::Stable => r < s,
                Stability::Unstable => r > s,
                Stability::Undetermined => unreachable!(),
            };
            if !agrees {
                let cycles = flow.find_limit_cycles(-400.0, s.ln(), 120).unwrap();
                assert!(!cycles.is_empty(), "family {family}: {values:?}, R(s) - s = {:e}", r - s);
            }
        }
    }
}

#[test]
fn error_estimate_bounds_tolerance_refinement() {
    let sys = ex1(1.0, -2.0, 2.0);
    let coarse = PolycycleFlow::new(&sys, 1e-8).unwrap();
    let fine = coarse.with_tol(1e-10);
    for s in [1e-3, 1e-2, 0.1] {
        let a = coarse.displacement(s).unwrap();
        let b = fine.displacement(s).unwrap();
        assert!((a.value - b.value).abs() < 10.0 * a.est_error, "s = {s}: {:e} vs est {:e}", (a.value - b.value).abs(), a.est_error);
    }
}
