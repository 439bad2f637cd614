//! Checks that the assumption region sits inside the pair window for each n.

use hartree_lab::exponents::{int, rat, remark_containment_check};

fn main() {
    for n in 3..=10 {
        for s in [int(0), rat(1, 4), rat(49, 100)] {
            let v = remark_containment_check(n, &s).expect("valid n, s");
            println!("n = {n:>2}, s = {s:<6} {}", if v.pass { "contained" } else { "NOT contained" });
        }
    }
}
