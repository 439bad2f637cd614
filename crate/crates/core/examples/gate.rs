//! Runs the exact gate at a parameter point and prints every check.
//!
//!     cargo run --example gate -- 3 0 2 1/2

use hartree_lab::exponents::{theorem_gate, Rational};

fn arg(k: usize, default: &str) -> Rational {
    std::env::args().nth(k).unwrap_or_else(|| default.into()).parse().expect("rational argument")
}

fn main() {
    let n: u32 = std::env::args().nth(1).map_or(3, |a| a.parse().expect("integer n"));
    let (s, alpha, b) = (arg(2, "0"), arg(3, "2"), arg(4, "1/2"));
    let v = theorem_gate(n, &s, &alpha, &b);
    println!("n = {n}, s = {s}, alpha = {alpha}, b = {b}: {}", v.label());
    for c in &v.checks {
        println!("  {:<16} {:<8} {}", c.tag, format!("{:?}", c.status), c.detail);
    }
    if let Some(p) = &v.point {
        println!("p = {}", p.p);
    }
    if let Some(w) = &v.window {
        println!("n/r window {w}");
    }
    if let (Some(pair), Some(dual)) = (&v.sample, &v.dual) {
        println!("sample pair (q, r) = ({}, {}), dual (q~, r~) = ({}, {})", pair.q, pair.r, dual.q_tilde, dual.r_tilde);
    }
    if let Some(h) = &v.holder {
        println!("1/r1 = {}, 1/r3 = {}, 1/r5 = {}, 1/r7 = {}", h.inv_r1, h.inv_r3, h.inv_r5, h.inv_r7);
    }
    for f in &v.findings {
        println!("note: {f}");
    }
}
