//! Quantum correlations of a two-spin NMR dimer.
//!
//! The crate builds the dimer density matrix from inverse temperature `β`
//! and time factor `ε`, then evaluates quantum discord, geometric discord
//! and measurement-induced nonlocality twice: once from closed forms
//! ([`closed`]) and once by brute-force optimisation over local measurements
//! ([`oracle`]). The [`sweep`] and [`check`] modules turn that into
//! plot-ready CSV and a self-test suite.
//!
//! ```
//! use dimer_qc::{closed, dimer, oracle, OptimizerConfig};
//!
//! let params = dimer::DimerParams::new(2.0, 0.3)?;
//! let rho = dimer::build_density(&dimer::xstate_params(&params))?;
//! let closed_qd = closed::qd_closed(&params)?;
//! let oracle_qd = oracle::qd_oracle(&rho, &OptimizerConfig::default())?.value;
//! assert!((closed_qd - oracle_qd).abs() < 1e-4);
//! # Ok::<(), dimer_qc::Error>(())
//! ```
//!
//! The guide in `book/` walks through each piece; its code listings are
//! compiled and run as doctests of this crate.

// `!(x >= 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod check;
pub mod closed;
pub mod density;
pub mod dimer;
mod error;
pub mod optimize;
pub mod oracle;
pub mod random;
mod report;
pub mod sweep;

pub use density::{DensityMatrix4, MeasurementAxis, Party, QubitState2};
pub use dimer::{DimerParams, XStateParams};
pub use error::{Error, Result};
pub use optimize::{OptimizerConfig, OracleResult};
pub use report::CorrelationReport;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/states.md")]
    mod states {}
    #[doc = include_str!("../../../book/src/linear-algebra.md")]
    mod linear_algebra {}
    #[doc = include_str!("../../../book/src/closed-forms.md")]
    mod closed_forms {}
    #[doc = include_str!("../../../book/src/oracles.md")]
    mod oracles {}
    #[doc = include_str!("../../../book/src/sweeps.md")]
    mod sweeps {}
}
