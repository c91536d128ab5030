//! Lifetimes `alpha^k E_k` with exponential `E_k` for growth rates other than
//! two. The limit law has no closed form here, so it is sampled from the
//! series `sum alpha^-k E_k`.
//!
//! ```bash
//! cargo run --release -p renewal-dst --example general_alpha
//! ```

use renewal_dst::cli::cmd_simulate;
use renewal_dst::lifetimes::LifetimeFamily;
use renewal_dst::rng::DEFAULT_SEED;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for alpha in [1.5, 3.0, 10.0] {
        let family = LifetimeFamily::scaled_exponential(alpha, 1.0)?;
        let grid = [10, 100, 1_000, 10_000, 100_000];
        let report = cmd_simulate(&family, &grid, 50_000, DEFAULT_SEED)?;
        println!("alpha = {alpha}");
        for r in &report.rows {
            println!("  t = {:>10}  eta = {:.4}  TV = {:.4}", r.n, r.eta, r.value);
        }
    }
    Ok(())
}
