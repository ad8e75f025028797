//! Exact arithmetic for Hecke operators on spaces of cusp forms for
//! Gamma0(N), p-adic slope statistics of `U_p`, and replayable
//! certificates comparing slope counts across weights.
//!
//! The crate is organised bottom-up:
//!
//! * [`ntheory`]: integers, residues, valuations, class numbers.
//! * [`traceformula`]: traces of `T_n` and dimension formulas.
//! * [`linalg`]: exact and modular linear algebra, characteristic polynomials.
//! * [`modsym`]: weight-k modular symbols and Hecke matrices.
//! * [`slopes`]: Newton polygons, slope multisets and certificates.

pub mod error;
pub mod linalg;
pub mod modsym;
pub mod ntheory;
pub mod slopes;
pub mod traceformula;

pub use error::{Error, Result};

/// Version string recorded in every report, certificate and cache key.
pub const ENGINE_VERSION: &str = concat!("slopecert-core/", env!("CARGO_PKG_VERSION"));
