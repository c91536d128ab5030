//! Seeded simulation checked against the exact laws: samples of `Q_eta`,
//! random digital search trees, and renewal counts with geometric lifetimes.
//!
//! ```bash
//! cargo run --release -p renewal-dst --example monte_carlo
//! ```

use renewal_dst::dst::simulate_insertion_depth;
use renewal_dst::lifetimes::LifetimeFamily;
use renewal_dst::limit_law::LimitLaw;
use renewal_dst::metrics::{tv_distance, tv_to_limit};
use renewal_dst::renewal::{depth_distribution_exact, log2_split, simulate_count, RenewalConfig};
use renewal_dst::rng::{stream_rng, DEFAULT_SEED};
use renewal_dst::IntPmf;

fn main() -> renewal_dst::Result<()> {
    let samples = 200_000;
    for eta in [0.0, 0.5] {
        let law = LimitLaw::new(eta)?;
        let mut rng = stream_rng(DEFAULT_SEED, 0);
        let sampled = IntPmf::from_samples((0..samples).map(|_| law.sample(&mut rng)))?;
        let exact = IntPmf::new(-5, (-5..=20).map(|j| law.pmf(j)).collect())?;
        println!("Q_{eta}: TV(sample, exact) = {:.5}", tv_distance(&sampled, &exact));
    }

    let n = 100;
    let mut rng = stream_rng(DEFAULT_SEED, 1);
    let sim = simulate_insertion_depth(n, 20_000, 256, &mut rng)?;
    let exact = depth_distribution_exact(n as i64)?.pmf;
    println!("\ninsertion depth after {n} keys ({} replicates overflowed)", sim.overflowed);
    println!("{:>4} {:>10} {:>10}", "d", "simulated", "exact");
    for d in exact.min()..=exact.max() {
        if exact.get(d) > 1e-4 {
            println!("{d:>4} {:>10.5} {:>10.5}", sim.pmf.get(d), exact.get(d));
        }
    }

    println!("\nrenewal counts N_t, centered, against the limit:");
    for t in [64u64, 1000, 4096] {
        let config = RenewalConfig {
            family: LifetimeFamily::GeometricDst,
            horizon: t as f64,
            samples,
            seed: DEFAULT_SEED,
        };
        let (k, eta) = log2_split(t);
        let counts = simulate_count(&config)?;
        let centered = IntPmf::from_samples(counts.iter().map(|&c| c as i64 - k))?;
        let law = LimitLaw::new(eta)?;
        let limit = IntPmf::new(-10, (-10..=30).map(|j| law.pmf(j)).collect())?;
        println!(
            "  t = {t:>5}: TV(sim, limit) = {:.4}, exact TV = {:.4}",
            tv_distance(&centered, &limit),
            tv_to_limit(t as i64)?.tv
        );
    }
    Ok(())
}
