//! Pulls a small solution back by the free flow and watches the profile
//! settle at growing times.

use hartree_lab::exponents::{int, rat, Coupling, ParameterPoint};
use hartree_lab::grid::{ComplexField, GridSpec};
use hartree_lab::sim::{scattering_diagnostic, EquationParams};
use num_complex::Complex64;

fn main() {
    let g = GridSpec::new(3, 64, 24.0).unwrap();
    let u0 = ComplexField::from_fn(g, |x| Complex64::new(0.1 * (-0.5 * x.iter().map(|v| v * v).sum::<f64>()).exp(), 0.0));
    let point = ParameterPoint::critical(3, rat(1, 2), int(2), int(1), Coupling::Defocusing).unwrap();
    let params = EquationParams::new(point, g).unwrap();
    let r = scattering_diagnostic(&u0, &params, &[0.5, 1.0, 2.0, 4.0], 0.05).unwrap();
    for (k, t) in r.checkpoints.iter().enumerate().skip(1) {
        println!("t = {t:>4}: profile change {:.3e}, boundary mass {:.1e}", r.cauchy[k - 1], r.boundary_mass[k]);
    }
    println!("decay factors {:?}, decreasing {}, horizon {:?}", r.decay_factors, r.decreasing, r.horizon);
}
