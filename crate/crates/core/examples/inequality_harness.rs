//! Ratio of the two sides of the Lorentz Hölder inequality along a dilation
//! ladder, for every manifest family.

use hartree_lab::exponents::{rat, Exponent};
use hartree_lab::grid::GridSpec;
use hartree_lab::lorentz::{inequality_harness, Lemma, MANIFEST};

fn main() {
    let lemma = Lemma::Holder {
        p: rat(3, 2),
        q: Exponent::Finite(rat(1, 1)),
        p1: rat(3, 1),
        q1: Exponent::Finite(rat(2, 1)),
        p2: rat(3, 1),
        q2: Exponent::Finite(rat(2, 1)),
    };
    let grid = GridSpec::new(3, 32, 8.0).unwrap();
    let report = inequality_harness(&lemma, MANIFEST.families, &grid, MANIFEST.ladder).unwrap();
    for (family, sup, spread) in &report.families {
        println!("{family:<28} sup ratio {sup:.4}  spread {spread:.1e}");
    }
    println!("{}: max variation {:.1e}, {}", report.lemma, report.max_variation, if report.pass { "ok" } else { "FAILED" });
}
