//! Applies I_2 to (3 - r^2) e^{-r^2/2}, whose image is exactly e^{-r^2/2}.

use hartree_lab::grid::{ComplexField, GridSpec};
use hartree_lab::spectral::{riesz_constant, RieszOperator};
use num_complex::Complex64;

fn main() {
    let g = GridSpec::new(3, 32, 8.0).unwrap();
    let f = ComplexField::from_fn(g, |x| {
        let r2: f64 = x.iter().map(|v| v * v).sum();
        Complex64::new((3.0 - r2) * (-0.5 * r2).exp(), 0.0)
    });
    let op = RieszOperator::new(g, 2.0).unwrap();
    let u = op.apply(&f);
    println!("c(3, 2) = {:.6} (1/4pi = {:.6})", riesz_constant(3, 2.0), 0.25 / std::f64::consts::PI);
    let want = ComplexField::from_fn(g, |x| Complex64::new((-0.5 * x.iter().map(|v| v * v).sum::<f64>()).exp(), 0.0));
    println!("relative L2 error against e^(-r^2/2): {:.2e}", u.relative_l2(&want));
    // along the first axis through the origin
    let m = g.points();
    let mut x = [0.0; 3];
    for i in (m / 2..m).step_by(2) {
        let k = (i * m + m / 2) * m + m / 2;
        g.point(k, &mut x);
        let r2: f64 = x.iter().map(|v| v * v).sum();
        println!("  |x| = {:5.2}: {:+.8} vs {:+.8}", r2.sqrt(), u.values()[k].re, (-0.5 * r2).exp());
    }
}
