//! Lorentz norms of the manifest test families and of an indicator.

use hartree_lab::grid::GridSpec;
use hartree_lab::lorentz::{lorentz_identity_suite, lorentz_norm, lorentz_norm_of, RearrangementProfile, MANIFEST};

fn main() {
    let m = 2.0;
    let ind = RearrangementProfile::from_steps(vec![1.0], vec![m]);
    for (p, q) in [(2.0, 2.0), (3.0, 1.0), (3.0, f64::INFINITY)] {
        println!("indicator, |E| = {m}: L^({p},{q}) = {:.6}", lorentz_norm(&ind, p, q).unwrap());
    }
    let grid = GridSpec::new(3, MANIFEST.grid_points, MANIFEST.half_width).unwrap();
    for fam in MANIFEST.families {
        let f = fam.sample(&grid, 1.0);
        let norms: Vec<String> = [(2.0, 2.0), (3.0, f64::INFINITY), (4.0, 1.0)]
            .iter()
            .map(|&(p, q)| format!("{:.4e}", lorentz_norm_of(&f, p, q).unwrap()))
            .collect();
        let id = lorentz_identity_suite(fam, &grid, 2.0, 4.0, 2.0, MANIFEST.ladder).unwrap();
        println!("{:<28} L2,2 / L3,inf / L4,1 = {}  power residual {:.1e}", fam.name(), norms.join(" / "), id.power_residual.unwrap_or(f64::NAN));
    }
}
