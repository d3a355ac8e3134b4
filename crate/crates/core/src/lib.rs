//! Monodromy of the dualizing covering of a plane curve.
//!
//! Exact elimination over the Gaussian rationals finds where a pencil of
//! lines stops meeting the curve transversally; double-precision path
//! tracking around those points yields permutations of the intersection
//! points, and a Schreier–Sims chain identifies the group they generate.

#![no_std]

extern crate alloc;

pub mod algebra;
pub mod partitions;
pub mod permgroup;
pub mod curve;
pub mod chart;
pub mod localgeom;
pub mod pencil;
pub mod tracker;
