//! Critical points and parameter planes of Newton-like root-finding
//! operators on quadratic polynomials.
//!
//! Every operator here has the form `O(z) = z^n p(z)/q(z)` with `p` the
//! coefficient reversal of `q`, so `O(1/z) = 1/O(z)` and the roots of the
//! quadratic sit at `0` and `∞`.

// `!(x < tol)` is deliberate: a NaN residual must fail the check.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod dynamics;
pub mod operators;
pub mod poly;
pub mod render;
