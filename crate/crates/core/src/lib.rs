//! The Weil representation of `SL_2(F_p)` and the discrete oscillator transform.
//!
//! The building blocks are the prime field ([`field`]), the Heisenberg
//! representation ([`heisenberg`]), the Weil representation ([`weil`]) and the
//! maximal tori of `SL_2(F_p)` ([`tori`]). On top of these sit the character
//! eigenspaces of a torus ([`spectral`]) and the oscillator transform with its
//! fast variant ([`oscillator`]).

pub mod error;
pub mod fft;
pub mod field;
pub mod heisenberg;
pub mod linalg;
pub mod oscillator;
pub mod sl2;
pub mod spectral;
pub mod tori;
pub mod verify;
pub mod weil;

pub use error::{Error, Result};
pub use field::{Fp, PrimeField};
pub use linalg::{OperatorMatrix, StateVector};
pub use sl2::{Mat2, Sl2};
