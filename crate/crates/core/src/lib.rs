//! Ramanujan's tau function at scale, the Lucas-sequence and congruence
//! machinery around its values, and a decision procedure that proves
//! targets `±2·ℓ^j` are never tau values, with a trace of every step.
//!
//! Modules, bottom-up:
//!
//! * [`tau`]: series expansion of the discriminant form, Hecke recursion,
//!   multiplicativity, table persistence;
//! * [`lucas`]: Lucas sequences `u_n` with `u_(m+1) = a(p^m)`, ranks of
//!   apparition and primitive prime divisors;
//! * [`congruence`]: Ramanujan's congruences and the progression tables;
//! * [`curves`]: integer-point scans on the defective-case curves;
//! * [`exclusion`]: the decision procedure and its registry of known facts;
//! * [`verify`]: scans of computed tables;
//! * [`cli`]: the `tauvals` command line.
//!
//! Data-parallel loops use rayon when the `parallel` feature (on by
//! default) is enabled; [`Exec::Sequential`] forces a single thread.

pub mod arith;
pub mod cli;
pub mod congruence;
pub mod curves;
pub mod exclusion;
pub mod factor;
pub mod lucas;
pub mod par;
pub mod tau;
pub mod verify;

mod serde_util;

pub use congruence::Sign;
pub use exclusion::{decide, Target, Verdict};
pub use factor::Factorizer;
pub use lucas::LucasParams;
pub use par::Exec;
pub use tau::{compute_tau_table, TauTable};
