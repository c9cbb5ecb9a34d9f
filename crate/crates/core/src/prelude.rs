//! Common imports for the crate.

pub(crate) use alloc::vec;
pub(crate) use alloc::vec::Vec;
pub(crate) use num_complex::Complex64;
pub(crate) use num_traits::Zero;
// Float math without std. Builds that link std resolve the inherent methods
// first and leave this unused.
#[allow(unused_imports)]
pub(crate) use num_traits::Float;
