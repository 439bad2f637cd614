//! Strang-split evolution of a Gaussian, printing mass and energy.

use hartree_lab::exponents::{int, rat, Coupling, ParameterPoint};
use hartree_lab::grid::{ComplexField, GridSpec};
use hartree_lab::sim::{simulate, Diagnostics, EquationParams};
use num_complex::Complex64;

fn main() {
    let g = GridSpec::new(3, 32, 8.0).unwrap();
    let u0 = ComplexField::from_fn(g, |x| Complex64::new((-0.5 * x.iter().map(|v| v * v).sum::<f64>()).exp(), 0.0));
    for lambda in [Coupling::Defocusing, Coupling::Focusing] {
        let point = ParameterPoint::critical(3, int(0), int(2), rat(1, 2), lambda).unwrap();
        let params = EquationParams::new(point, g).unwrap();
        let diag = Diagnostics { every: 20, ..Default::default() };
        let traj = simulate(&u0, 5e-3, 0.5, &params, &diag).unwrap();
        println!("{lambda:?}");
        for (k, t) in traj.times.iter().enumerate() {
            println!("  t = {t:.2}  mass {:.12}  energy {:+.9}", traj.mass[k], traj.energy[k]);
        }
        println!("  drift: mass {:.1e}, energy {:.1e}", traj.mass_drift(), traj.energy_drift());
    }
}
