//! The limit family `Q_eta`: distribution function and mass function for a
//! few values of `eta`, and the signed exponential mixture behind them.
//!
//! ```bash
//! cargo run -p renewal-dst --example limit_law
//! ```

use renewal_dst::limit_law::{euler_b, limit_mixture, s_infinity_cdf, LimitLaw};

fn main() -> renewal_dst::Result<()> {
    println!("b = prod (1 - 2^-j)^-1 = {:.16}", euler_b());
    let mix = limit_mixture();
    println!("first mixture coefficients:");
    for k in 1..=6 {
        println!("  a_{k} = {:+.12e}  (rate 2^{k})", mix.coefficient(k));
    }

    println!("\nP(S <= t):");
    for t in [0.125, 0.25, 0.5, 1.0, 2.0, 4.0] {
        println!("  t = {t:<6} {:.12}", s_infinity_cdf(t)?);
    }

    let etas = [0.0, 0.25, 0.5, 0.75, 1.0];
    print!("\n{:>4}", "x");
    for eta in etas {
        print!("  pmf(eta={eta:<4})");
    }
    println!();
    let laws: Vec<LimitLaw> = etas.iter().map(|&e| LimitLaw::new(e)).collect::<Result<_, _>>()?;
    for x in -2..=6 {
        print!("{x:>4}");
        for law in &laws {
            print!("  {:>14.10}", law.pmf(x));
        }
        println!();
    }

    // Mean minus eta is nearly constant; what is left oscillates at the 1e-6 level.
    println!("\nmean - eta:");
    for i in 0..=8 {
        let eta = i as f64 / 8.0;
        let law = LimitLaw::new(eta)?;
        let mean: f64 = (-20..=60).map(|j| j as f64 * law.pmf(j)).sum();
        println!("  eta = {eta:.3}  {:.9}", mean - eta);
    }
    Ok(())
}
