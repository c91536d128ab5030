//! Renewal counts for exponentially increasing lifetimes.
//!
//! When the k-th lifetime grows like `alpha^k`, the number of renewals up to
//! time `t`, centered at `floor(log_alpha t)`, does not converge in law.
//! Along times with `{log_alpha t} -> eta` it converges to
//! `Q_eta = law of floor(-log_alpha S + eta)`, where `S` is the limit of the
//! rescaled partial sums. The insertion depth of a digital search tree built
//! from uniform keys is the special case `alpha = 2`.
//!
//! Modules:
//! - [`lifetimes`]: lifetime families, the geometric DST family and its
//!   coupling with exponential variables;
//! - [`limit_law`]: `S` as a signed exponential mixture and the family `Q_eta`;
//! - [`renewal`]: exact birth-chain laws, renewal-count simulation, exact KS
//!   distance of the rescaled partial sums;
//! - [`dst`]: digital search trees and insertion-depth simulation;
//! - [`metrics`]: total variation, Kolmogorov-Smirnov, rate reports;
//! - [`cli`]: the command line front end.

pub mod cli;
pub mod dd;
pub mod dst;
pub mod error;
pub mod lifetimes;
pub mod limit_law;
pub mod metrics;
pub mod output;
pub mod pmf;
pub mod renewal;
pub mod rng;

pub use error::{Error, Result};
pub use pmf::IntPmf;
