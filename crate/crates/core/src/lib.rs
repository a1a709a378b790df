//! Exact-arithmetic workbench for generalized class functions.
//!
//! The crate models the p-divisible torus `(Q_p/Z_p)^n` through integer
//! lattices, finite groups through permutation tables, and the coefficient
//! ring of generalized class functions through rational-valued functions on
//! `M_n(Z/p^N)`. On top of that it implements transfers, the power
//! operations `P_m` and the total power operations, together with a small
//! formal-group-law engine.
//!
//! Everything is exact: integers are arbitrary precision and values are
//! rationals.

pub mod class_function;
pub mod error;
pub mod formal_group;
pub mod group;
pub mod isogeny;
pub mod lattice;
pub mod lemmas;
pub mod power;
pub mod rng;
pub mod serialize;
pub mod session;
pub mod torsion;
pub mod transfer;
pub mod verify;

pub use error::{Error, Result};
