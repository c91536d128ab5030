//! Convergence rates: total variation between the exact depth law and its
//! limit, and Kolmogorov-Smirnov distance between `2^-n S_n` and `S`, each
//! with its finite-n monotone check.
//!
//! ```bash
//! cargo run --release -p renewal-dst --example convergence_rates
//! ```

use renewal_dst::metrics::{check_rate_proxy, rate_report, DistanceKind};

fn main() -> renewal_dst::Result<()> {
    let tv_grid: Vec<u64> = (4..=18).step_by(2).map(|e| 1u64 << e).collect();
    let tv = rate_report(&tv_grid, DistanceKind::TvLimit)?;
    println!("{:>8} {:>12} {:>12}", "n", "tv", "tv n^0.9");
    for r in &tv.rows {
        println!("{:>8} {:>12.4e} {:>12.6}", r.n, r.value, r.value * (r.n as f64).powf(0.9));
    }
    report(check_rate_proxy(&tv));

    let ks_grid: Vec<u64> = (4..=18).collect();
    let ks = rate_report(&ks_grid, DistanceKind::KsScaled)?;
    println!("\n{:>4} {:>12} {:>12} {:>12}", "n", "ks", "ks 2^n / n", "trunc");
    for r in &ks.rows {
        let scaled = r.value * 2f64.powi(r.n as i32) / r.n as f64;
        println!("{:>4} {:>12.4e} {:>12.6} {:>12.2e}", r.n, r.value, scaled, r.trunc_bound);
    }
    report(check_rate_proxy(&ks));
    Ok(())
}

fn report(check: Result<(), renewal_dst::metrics::ProxyViolation>) {
    match check {
        Ok(()) => println!("proxy holds"),
        Err(v) => println!("proxy fails at row {} (n = {}): {}", v.row, v.n, v.reason),
    }
}
