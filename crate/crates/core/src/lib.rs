//! Exact q-Whittaker coefficients, quantum difference Toda operators, and
//! Markov intertwinings on reverse plane partitions.
//!
//! All algebra runs over arbitrary-precision rationals. `q` is a concrete
//! rational in `(0,1)`; identities are verified by exact equality at sampled
//! values of `q`.
//!
//! # Modules
//!
//! - [`qnum`]: exact scalars, q-Pochhammer symbols, q-binomials, drift parameters
//! - [`shapes`]: Young diagrams, skew shapes and their special cell sets
//! - [`arrays`]: drift-constrained fillings, fibers and down-sets
//! - [`toda`]: coefficients `a_r(n,z;q)`, Toda residuals, Doob rates, weights
//! - [`dynamics`]: jump rates, generators, the kernel `Λ` and exact intertwining checks
//! - [`sim`]: continuous-time simulation and statistical audits
//! - [`cli`]: the `qtoda` command line
//!
//! # Example
//!
//! ```
//! use qtoda::qnum::{parse_scalar, DriftParams};
//! use qtoda::toda::coeff_direct;
//!
//! let drift = DriftParams::new(vec![], parse_scalar("1/2").unwrap()).unwrap();
//! assert_eq!(coeff_direct(&[1, 1], &drift).to_string(), "24");
//! ```

pub mod arrays;
pub mod cli;
pub mod dynamics;
pub mod error;
pub mod qnum;
pub mod shapes;
pub mod sim;
pub mod toda;

pub use error::{Error, Result};
pub use qnum::{DriftParams, ExactScalar};
