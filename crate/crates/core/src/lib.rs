//! Distance-induced orders on pairs of point sets.
//!
//! Two finite point sets `P = {p_0..p_{n-1}}` and `Q = {q_0..q_{m-1}}` in
//! `R^d` order the grid `[n] x [m]` by comparing the distances
//! `|p_i - q_j|`. This crate provides:
//!
//! * [`order`]: exact combinatorics of total orders on the grid, including
//!   the unrealizable family on `[d+1] x [d+2]`, its diagonal-filling
//!   construction, counting, enumeration and canonical forms.
//! * [`geom`]: the numerical kernel (bisectors, circumcenters, barycentric
//!   coordinates, distance permutations, dual cones).
//! * [`realizer`]: induced orders, a margin-based search for realizing
//!   configurations, and a step-by-step audit of the geometric argument
//!   that rules out the unrealizable family.
//! * [`enumerator`]: resumable realizability campaigns over small grids.

pub mod enumerator;
pub mod error;
pub mod geom;
pub mod order;
pub mod realizer;
pub(crate) mod seed;

pub use error::{Error, Result};
