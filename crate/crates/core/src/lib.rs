//! Rotationally symmetric metrics on the 2-sphere whose geodesics are all
//! closed with a common length, and the induced Finsler metric of constant
//! flag curvature 1 on their manifold of geodesics, with the norm evaluated
//! in closed radicals.
//!
//! The crate is generic over the floating-point scalar (see [`real::Real`]);
//! the aliases below fix `f64`, which is what the command-line tools and the
//! verification suite use.

// Validation comparisons are written in negated form (`!(x > lo && x < hi)`)
// on purpose: they must reject NaN, which the de Morgan rewrite would accept.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod deriv;
pub mod error;
pub mod finsler;
pub mod indicatrix;
pub mod polyroots;
pub mod quad;
pub mod real;
pub mod verify;
pub mod zoll;

pub use error::{Error, Result};
pub use real::Real;

pub type HParamF64 = zoll::HParam<f64>;
pub type ZollSurfaceF64 = zoll::ZollSurface<f64>;
pub type GeodesicStateF64 = zoll::GeodesicState<f64>;
pub type TangentSampleF64 = indicatrix::TangentSample<f64>;
pub type QuarticCoeffsF64 = indicatrix::QuarticCoeffs<f64>;
pub type DepressedQuarticF64 = polyroots::DepressedQuartic<f64>;
pub type ResolventSolutionF64 = polyroots::ResolventSolution<f64>;
pub type FinslerEvalF64 = finsler::FinslerEval<f64>;
