//! Phase-space localization measures of spin-j pure states.
//!
//! States live in the Bargmann representation ([`PureState`]); Husimi moments,
//! Rényi–Wehrl entropies and their duals are in [`entropy`], the
//! entropy-reducing maps in [`maps`], Haar-random ensembles in [`ensemble`]
//! and Schrödinger dynamics in [`dynamics`].
#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod ensemble;
pub mod entropy;
pub mod dynamics;
pub mod error;
pub mod quadrature;
mod prelude;
pub mod maps;
pub mod optimize;
pub(crate) mod poly;
pub mod special;
pub mod spin;

pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use spin::{PureState, Rotation, SpherePoint, StellarRoots, TwiceJ};
