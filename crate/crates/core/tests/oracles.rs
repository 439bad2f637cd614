mod common;

use common::{dual_sum, free_gaussian, indicator_norm, passing_points, riesz_radial_3d, unit_ball_volume, Frac};
use hartree_lab::exponents::{dual_pair, holder_splits, int, rat, theorem_gate, AdmissiblePair};
use hartree_lab::grid::{ComplexField, GridSpec, RealField};
use hartree_lab::lorentz::{lorentz_norm, lorentz_norm_of, RearrangementProfile, TestFunction};
use hartree_lab::spectral::{riesz_constant, RieszOperator, Spectral};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn radius(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

fn riesz_error(alpha: f64, points: usize, half_width: f64, f: impl Fn(f64) -> f64 + Sync) -> f64 {
    let g = GridSpec::new(3, points, half_width).unwrap();
    let field = ComplexField::from_fn(g, |x| Complex64::new(f(radius(x)), 0.0));
    let got = RieszOperator::new(g, alpha).unwrap().apply(&field);
    let mut x = [0.0; 3];
    let (mut num, mut den) = (0.0, 0.0);
    let mut cache = std::collections::HashMap::new();
    for (k, z) in got.values().iter().enumerate() {
        g.point(k, &mut x);
        let r = radius(&x);
        let want = *cache
            .entry(r.to_bits())
            .or_insert_with(|| riesz_radial_3d(&f, alpha, r, 14.0, 4000));
        num += (z.re - want).powi(2) + z.im.powi(2);
        den += want * want;
    }
    (num / den).sqrt()
}

#[test]
fn riesz_constants_agree() {
    for alpha in [0.5, 1.0, 1.5, 2.0, 2.5] {
        let a = riesz_constant(3, alpha);
        let b = common::riesz_constant_3d(alpha);
        assert!((a - b).abs() < 1e-13 * b, "{alpha}: {a} vs {b}");
    }
    assert!((riesz_constant(3, 2.0) - 1.0 / (4.0 * std::f64::consts::PI)).abs() < 1e-15);
}

#[test]
fn radial_oracle_reproduces_closed_form() {
    // (3 − r²)e^{−r²/2} = −Δ e^{−r²/2}, so I₂ maps it back to the Gaussian
    let bump = |r: f64| (3.0 - r * r) * (-0.5 * r * r).exp();
    for r in [0.0, 0.3, 1.0, 2.5] {
        let got = riesz_radial_3d(&bump, 2.0, r, 14.0, 4000);
        assert!((got - (-0.5 * r * r).exp()).abs() < 1e-9, "r = {r}: {got}");
    }
}

#[test]
fn riesz_matches_quadrature_at_order_two() {
    let e = riesz_error(2.0, 32, 8.0, |r| (3.0 - r * r) * (-0.5 * r * r).exp());
    assert!(e < 1e-3, "relative L2 error {e}");
}

#[test]
fn riesz_matches_quadrature_at_fractional_order() {
    // mean-free: ∫(3 − r²)e^{−r²/2} r² dr = 0
    let e = riesz_error(1.5, 32, 8.0, |r| (3.0 - r * r) * (-0.5 * r * r).exp());
    assert!(e < 1e-4, "relative L2 error {e}");
}

#[test]
fn free_gaussian_matches_closed_form() {
    let g = GridSpec::new(3, 64, 10.0).unwrap();
    let u0 = ComplexField::from_fn(g, |x| Complex64::new((-0.5 * radius(x).powi(2)).exp(), 0.0));
    let sp = Spectral::new(g);
    for t in [0.1, 0.25, 0.5] {
        let got = sp.propagator(&u0, t);
        let want = ComplexField::from_fn(g, |x| free_gaussian(3, 1.0, t, radius(x).powi(2)));
        let e = got.relative_l2(&want);
        assert!(e < 1e-6, "t = {t}: {e}");
    }
}

#[test]
fn indicator_closed_forms() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..100 {
        let m = rng.gen_range(0.01..100.0);
        let p = rng.gen_range(1.05..8.0);
        let q = if rng.gen_bool(0.1) { f64::INFINITY } else { rng.gen_range(1.0..10.0) };
        let got = lorentz_norm(&RearrangementProfile::from_steps(vec![1.0], vec![m]), p, q).unwrap();
        let want = indicator_norm(m, p, q);
        assert!((got - want).abs() <= 1e-10 * want, "m={m} p={p} q={q}: {got} vs {want}");
    }
}

#[test]
fn cube_indicator_on_grid() {
    // indicator of [−1, 1)³ on a grid where it is a union of whole cells
    let g = GridSpec::new(3, 16, 4.0).unwrap();
    let f = RealField::from_fn(g, |x| if x.iter().all(|v| v.abs() < 1.0) { 1.0 } else { 0.0 });
    for (p, q) in [(2.0, 2.0), (3.0, 1.5), (1.5, 4.0), (4.0, f64::INFINITY)] {
        let got = lorentz_norm_of(&f, p, q).unwrap();
        let want = indicator_norm(8.0, p, q);
        assert!((got - want).abs() <= 1e-12 * want);
    }
}

#[test]
fn weak_norm_of_cored_inverse_radius() {
    let omega = unit_ball_volume(3);
    let g = GridSpec::new(3, 128, 4.0).unwrap();
    let f = TestFunction::TruncatedPower { gamma: 1.0, core: 0.25, radius: 100.0 }.sample(&g, 1.0);
    let got = lorentz_norm_of(&f, 3.0, f64::INFINITY).unwrap();
    let want = omega.powf(1.0 / 3.0);
    assert!((got / want - 1.0).abs() < 0.05, "{got} vs {want}");
}

#[test]
fn dual_identity_against_bigint_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for point in passing_points(5, 200) {
        let w = hartree_lab::exponents::r_window(&point).unwrap().window;
        for _ in 0..5 {
            let frac = rat(rng.gen_range(1..1000), 1000);
            let x = w.interpolate(&frac).unwrap();
            let pair = AdmissiblePair::from_n_over_r(point.n, &x).unwrap();
            let dual = dual_pair(&point, &pair).unwrap();
            assert!(dual.identity_holds);
            let f = |r: &hartree_lab::exponents::Rational| Frac::parse(&r.to_string());
            let sum = dual_sum(point.n as i64, &f(&point.s), &f(&point.alpha), &f(&point.b), &f(&point.p), &f(&x));
            assert!(sum.eq(&Frac::new(point.n as i64, 2)), "{point:?} at n/r = {x}");
            let h = holder_splits(&point, &pair.r);
            for inv in [&h.inv_r1, &h.inv_r3, &h.inv_r5, &h.inv_r7] {
                assert!(f(inv).in_unit_open(), "{point:?} at n/r = {x}");
            }
        }
    }
}

#[test]
fn hand_evaluated_gate_points() {
    let v = theorem_gate(3, &int(0), &int(2), &rat(1, 2));
    let w = v.window.as_ref().unwrap();
    assert_eq!(w.lo.as_rational(), Some(&rat(5, 6)));
    assert_eq!(w.hi.as_rational(), Some(&rat(7, 6)));
    let v = theorem_gate(3, &int(1), &rat(6, 5), &int(1));
    let w = v.window.as_ref().unwrap();
    assert_eq!(w.lo.as_rational(), Some(&rat(12, 11)));
    assert_eq!(w.hi.as_rational(), Some(&rat(41, 34)));
    assert!(v.pass);
}
