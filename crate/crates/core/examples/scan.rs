//! Prints a pass/fail map of the gate over (alpha, b) for fixed n and s.
//!
//!     cargo run --example scan -- 4 1/4

use hartree_lab::exponents::{int, rat, theorem_gate, Rational};

fn main() {
    let mut args = std::env::args().skip(1);
    let n: u32 = args.next().map_or(3, |a| a.parse().expect("integer n"));
    let s: Rational = args.next().map_or(int(0), |a| a.parse().expect("rational s"));
    let (cols, rows) = (48i64, 16i64);
    println!("rows: b from 1 down to 1/{rows}; columns: alpha in (0, {n}); # passes");
    let mut total = 0;
    for j in (1..=rows).rev() {
        let b = rat(j, rows);
        let line: String = (1..cols)
            .map(|i| {
                let alpha = rat(i * n as i64, cols);
                if theorem_gate(n, &s, &alpha, &b).pass {
                    total += 1;
                    '#'
                } else {
                    '.'
                }
            })
            .collect();
        println!("{:>6} {line}", b.to_string());
    }
    println!("{total} of {} points pass", rows * (cols - 1));
}
