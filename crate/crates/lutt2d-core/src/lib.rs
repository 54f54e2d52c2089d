//! Core numerics for the two-dimensional Luttinger model obtained from the
//! 2D t-t′-V lattice model.
//!
//! The crate is `no_std` (it needs `alloc`). Everything here is a pure
//! function of immutable parameters, so callers can fan grid sweeps out
//! over threads without coordination.
//!
//! Module map:
//!
//! * [`lattice`]: bare model, exact momentum grids, dispersion, Fermi contours.
//! * [`partition`]: eight-region Brillouin-zone decomposition and cutoffs.
//! * [`vertices`]: interaction vertices surviving the momentum restriction.
//! * [`couplings`]: derived Luttinger-model constants and chemical potentials.
//! * [`nodal`]: nodal boson dispersion, ground-state and free energy.
//! * [`antinodal`]: boson-induced interaction between antinodal fermions.
//! * [`realspace`]: the special function `f_γ` and `v_eff(τ, x)`.
//! * [`fock`]: finite Fock-space engine checking the operator identities.
#![no_std]
#![forbid(unsafe_code)]
// `!(x < y)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod antinodal;
pub mod couplings;
mod error;
pub mod fock;
pub mod lattice;
pub mod linalg;
pub mod nodal;
pub mod partition;
pub mod realspace;
pub mod vertices;

pub use error::{Error, Result};
pub use lattice::{Kind, ModelParams, MomentumIndex};
pub use partition::{Flavor, PartitionParams, R, S};

use core::f64::consts::PI;

/// `√2`, used everywhere the diagonal coordinates `k± = (k₁ ± k₂)/√2` appear.
pub(crate) const SQRT2: f64 = core::f64::consts::SQRT_2;

/// Pairwise (tree) summation. Fixed reduction order keeps results
/// bit-reproducible regardless of how the terms were produced.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    match xs.len() {
        0 => 0.0,
        1 => xs[0],
        n if n <= 8 => xs.iter().sum(),
        n => {
            let (lo, hi) = xs.split_at(n / 2);
            pairwise_sum(lo) + pairwise_sum(hi)
        }
    }
}

pub(crate) fn sq(x: f64) -> f64 {
    x * x
}

pub(crate) fn pi() -> f64 {
    PI
}
