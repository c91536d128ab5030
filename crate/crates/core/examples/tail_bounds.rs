//! Left tail of `S` against `2^(-j(j-1)/2)`, and the superexponential upper
//! tail of `Q_0`. The deep values need the double-double series.
//!
//! ```bash
//! cargo run -p renewal-dst --example tail_bounds
//! ```

use renewal_dst::limit_law::{q_tail, s_infinity_cdf};

fn main() -> renewal_dst::Result<()> {
    println!("{:>3} {:>24} {:>14}", "j", "P(S <= 2^-j)", "2^-j(j-1)/2");
    for j in 1..=9 {
        let f = s_infinity_cdf(2f64.powi(-j))?;
        println!("{j:>3} {f:>24.16e} {:>14.6e}", 2f64.powi(-j * (j - 1) / 2));
    }

    println!("\n{:>3} {:>24} {:>16}", "j", "P(Q_0 >= j)", "x e^(0.3 j^2)");
    for j in 1..=10i64 {
        let t = q_tail(0.0, j)?;
        println!("{j:>3} {t:>24.16e} {:>16.6e}", t * (0.3 * (j * j) as f64).exp());
    }
    Ok(())
}
