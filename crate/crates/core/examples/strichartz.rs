//! Ratio of the Strichartz norm of a free Gaussian to its data norm, across
//! dilations, for an admissible pair and the energy endpoint.

use hartree_lab::exponents::{int, Exponent};
use hartree_lab::grid::GridSpec;
use hartree_lab::sim::{strichartz_diagnostic, StrichartzFamily};

fn main() {
    let family = StrichartzFamily {
        base: GridSpec::new(3, 32, 8.0).unwrap(),
        width: 1.0,
        dilations: vec![0.5, 1.0, 2.0],
        window: 0.5,
        intervals: 8,
    };
    for (q, r) in [(Exponent::Infinite, int(2)), (Exponent::Finite(int(4)), int(3)), (Exponent::Finite(int(8)), int(12) / int(5))] {
        let rep = strichartz_diagnostic(&family, q, r, 0.0).unwrap();
        println!(
            "(q, r) = ({}, {}): ratios {:?}, variation {:.1e}, endpoint deviation {:?}",
            rep.pair.q, rep.pair.r, rep.ratios, rep.variation, rep.endpoint_deviation
        );
    }
}
