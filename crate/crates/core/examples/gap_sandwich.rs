//! Pointwise distance between the exact centered depth law at `t` and its
//! limit, bounded by two Kolmogorov-Smirnov distances of scaled partial sums.
//!
//! ```bash
//! cargo run --release -p renewal-dst --example gap_sandwich -- 1024
//! ```

use renewal_dst::metrics::pmf_gap_bound_checks;

fn main() -> renewal_dst::Result<()> {
    let t: i64 = std::env::args()
        .nth(1)
        .map(|s| s.parse().expect("t must be an integer"))
        .unwrap_or(1024);
    let js: Vec<i64> = (-2..=5).collect();
    println!("{:>3} {:>12} {:>12} {:>6}", "j", "|gap|", "bound", "ratio");
    for c in pmf_gap_bound_checks(t, &js)? {
        println!("{:>3} {:>12.4e} {:>12.4e} {:>6.3}", c.j, c.lhs, c.rhs, c.lhs / c.rhs);
    }
    Ok(())
}
