//! Gravitation on a flat three-space with a warped time coordinate.
//!
//! Geometric units throughout: `c = 1`, lengths in metres, and a central
//! mass enters only through its energy radius `r_o = G E_M / c⁴`.

// `!(x > 0.0)` is used on purpose: it also rejects NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod carrier;
pub mod geodesic;
pub mod metric;
pub mod numerics;
pub mod photon;
pub mod spin;

pub use metric::Vec3;
