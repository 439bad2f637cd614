//! Picard iteration of the Duhamel map for small data, and continuous
//! dependence on the datum.

use hartree_lab::exponents::{int, rat, Coupling, ParameterPoint};
use hartree_lab::grid::{ComplexField, GridSpec};
use hartree_lab::sim::{continuous_dependence_check, picard_contraction, EquationParams, PicardConfig};
use num_complex::Complex64;

fn main() {
    let g = GridSpec::new(3, 32, 8.0).unwrap();
    let point = ParameterPoint::critical(3, int(0), int(2), rat(1, 2), Coupling::Focusing).unwrap();
    let params = EquationParams::new(point, g).unwrap();
    let mut u0 = ComplexField::from_fn(g, |x| Complex64::new((-0.5 * x.iter().map(|v| v * v).sum::<f64>()).exp(), 0.0));
    let norm = u0.l2_norm();
    u0.scale((1e-2 / norm).into());
    let config = PicardConfig::new(0.5, 4.0, 3.0);
    let rep = picard_contraction(&u0, &config, &params).unwrap();
    println!("ball radii M = {:.3e}, N = {:.3e}, epsilon = {:.3e}", rep.m_radius, rep.n_radius, rep.epsilon);
    for (k, d) in rep.distances.iter().enumerate() {
        match k.checked_sub(1).and_then(|j| rep.ratios.get(j)) {
            Some(r) => println!("  step {k}: distance {d:.3e}, ratio to previous {r:.3e}"),
            None => println!("  step {k}: distance {d:.3e}"),
        }
    }
    println!("in ball {}, contraction {}, fixed point vs simulate {:.1e}", rep.in_ball, rep.contraction_by_3, rep.simulate_distance);
    let direction = ComplexField::from_fn(g, |x| Complex64::new(0.0, (-x.iter().map(|v| (v - 0.5) * (v - 0.5)).sum::<f64>()).exp()));
    let dep = continuous_dependence_check(&u0, &direction, &[1e-2, 1e-3, 1e-4], &config, &params).unwrap();
    println!("dependence ratios {:?}, variation {:.4}", dep.ratios, dep.variation);
}
