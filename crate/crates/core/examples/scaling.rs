//! Compares the evolution of a dilated datum with the dilation of the
//! evolution, on matched grids.

use hartree_lab::exponents::{int, rat, Coupling, ParameterPoint};
use hartree_lab::grid::{ComplexField, GridSpec};
use hartree_lab::sim::{scaling_covariance_check, EquationParams};
use num_complex::Complex64;

fn main() {
    let g = GridSpec::new(3, 32, 12.0).unwrap();
    let u0 = ComplexField::from_fn(g, |x| Complex64::new((-0.5 * x.iter().map(|v| v * v).sum::<f64>()).exp(), 0.0));
    let point = ParameterPoint::critical(3, rat(1, 2), int(2), int(1), Coupling::Focusing).unwrap();
    let params = EquationParams::new(point, g).unwrap();
    for delta in [0.5, 2.0] {
        let r = scaling_covariance_check(&u0, delta, 0.1, 10, &params).unwrap();
        println!(
            "delta = {delta}: exponent {:.4}, s_c = {:.3}, Hdot^sc {:.3e} -> {:.3e} (rel {:.1e}), field mismatch {:.1e}",
            r.exponent, r.s_c, r.hdot_sc_original, r.hdot_sc_dilated, r.hdot_sc_relative, r.field_mismatch
        );
    }
}
