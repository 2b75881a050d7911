//! Lossy transmission of correlated sources over two-way channels.
//!
//! The crate evaluates the quantities needed to judge a joint
//! source-channel scheme on a two-way channel where both terminals
//! transmit at once and each uses its own source as side information:
//!
//! - rate-distortion and Wyner–Ziv rate-distortion curves ([`rd_functions`]),
//!   with a Blahut–Arimoto solver as an independent check;
//! - per-direction capacities, converse distortion bounds and region tests
//!   ([`bounds`]);
//! - scalar (uncoded) schemes and their loss against the bounds
//!   ([`scalar_coding`]);
//! - a seeded, worker-count-independent Monte Carlo harness ([`simulator`]).
//!
//! Two channel families are covered: q-ary modulo-additive noise and
//! additive white Gaussian noise. Information is measured in bits.
//!
//! ```
//! use twc_jscc::bounds::converse_lb_gaussian;
//! use twc_jscc::scalar_coding::{gaussian_scalar_distortion, GaussianDecoder};
//!
//! // independent Gaussian sources: uncoded transmission meets the bound
//! let lb = converse_lb_gaussian(0.0, 3.0, 1.0).unwrap();
//! let d = gaussian_scalar_distortion(0.0, 3.0, GaussianDecoder::PaperMmse).unwrap();
//! assert_eq!(lb, d);
//! ```

pub mod bounds;
pub mod error;
pub mod info_measures;
pub mod models;
pub mod rd_functions;
pub mod rng;
pub mod scalar_coding;
pub mod simulator;

pub use error::{Result, TwcError};
pub use models::{Direction, DistortionMeasure, JointSourceModel, Symbol, Terminal, TwcModel};

/// Crate version.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
