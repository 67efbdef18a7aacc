//! Exact verification of Casoratian identities for the Wilson and
//! Askey-Wilson polynomials and their nine reductions with purely imaginary
//! shifts.
//!
//! Everything is computed over the Gaussian rationals at concrete rational
//! parameter points; identities are checked by exact equality or by exact
//! proportionality, never with tolerances.

pub mod arith;
pub mod casoratian;
pub mod det;
pub mod error;
pub mod eta;
pub mod families;
mod intpoly;
mod modular;
pub mod poly;
pub mod ratfunc;
pub mod report;
pub mod verify;

pub use arith::{GaussianRational, QBase};
pub use error::{Error, Result};
pub use eta::{EtaKind, EtaPoly};
pub use poly::{HalfInt, Kind, RingPoly};
pub use ratfunc::{Factored, RatFunc};
