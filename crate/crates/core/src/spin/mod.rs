//! Spin-j pure states in the Bargmann representation, coherent states,
//! Husimi functions, stellar roots and the SU(2) action.

mod point;
mod roots;
mod rotation;
mod state;

pub use point::SpherePoint;
pub use roots::{roots_from_state, state_from_roots, StellarRoots, INFINITY_RADIUS};
pub use rotation::{mobius_rotate_point, rotate_state, Rotation};
pub use state::{
    amplitudes_from_state, bargmann_coefficients, bargmann_eval, basis_state, coherent_state, husimi_eval, kernel,
    ln_kernel, state_from_amplitudes, PureState, COHERENCE_TOL,
};
pub(crate) use roots::{polynomial_roots, ZERO_AMPLITUDE};
pub(crate) use state::{amplitudes_of, polar_amplitude};

use core::fmt;

/// Twice the spin quantum number, so half-integer spins stay exact.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TwiceJ(u32);

impl TwiceJ {
    pub const fn new(twice_j: u32) -> Self {
        Self(twice_j)
    }

    pub const fn get(self) -> u32 {
        self.0
    }

    /// Hilbert-space dimension N = 2j + 1.
    pub const fn dim(self) -> usize {
        self.0 as usize + 1
    }

    pub fn j(self) -> f64 {
        f64::from(self.0) / 2.0
    }
}

impl From<u32> for TwiceJ {
    fn from(v: u32) -> Self {
        Self(v)
    }
}

impl fmt::Display for TwiceJ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 % 2 == 0 {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

/// Row C(2j, k), k = 0..=2j.
pub(crate) fn binomial_row(twice_j: TwiceJ) -> alloc::vec::Vec<f64> {
    let n = u64::from(twice_j.get());
    if n > 1000 {
        return (0..=n).map(|k| crate::special::binomial(n, k)).collect();
    }
    let mut row = alloc::vec::Vec::with_capacity(n as usize + 1);
    let mut c = 1.0f64;
    for k in 0..=n {
        row.push(c);
        c = c * (n - k) as f64 / (k + 1) as f64;
    }
    row
}
