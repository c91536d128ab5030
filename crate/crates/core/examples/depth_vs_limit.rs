//! Exact insertion-depth law of a digital search tree after `n` keys,
//! centered by `floor(log2 n)`, next to its limit `Q_eta` with
//! `eta = {log2 n}`.
//!
//! ```bash
//! cargo run -p renewal-dst --example depth_vs_limit -- 1000
//! ```

use renewal_dst::limit_law::LimitLaw;
use renewal_dst::metrics::tv_to_limit;
use renewal_dst::renewal::centered_count_distribution;

fn main() -> renewal_dst::Result<()> {
    let n: i64 = std::env::args()
        .nth(1)
        .map(|s| s.parse().expect("n must be an integer"))
        .unwrap_or(1000);

    let (centered, eta) = centered_count_distribution(n)?;
    let law = LimitLaw::new(eta)?;
    println!("n = {n}, eta = {eta:.6}");
    println!("{:>4} {:>14} {:>14} {:>10}", "j", "exact", "limit", "diff");
    for j in centered.min()..=centered.max() {
        let (p, q) = (centered.get(j), law.pmf(j));
        if p < 1e-12 && q < 1e-12 {
            continue;
        }
        println!("{j:>4} {p:>14.10} {q:>14.10} {:>10.2e}", p - q);
    }
    println!("TV = {:.6e}", tv_to_limit(n)?.tv);

    // No single limit: along n = 2^k the law settles, between them it drifts.
    println!("\n{:>8} {:>8} {:>12}", "n", "eta", "tv");
    for n in [256, 300, 362, 420, 512, 1024, 1448, 2048] {
        let r = tv_to_limit(n)?;
        println!("{n:>8} {:>8.4} {:>12.4e}", r.eta, r.tv);
    }
    Ok(())
}
