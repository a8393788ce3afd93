//! Closed spacelike curves in Lorentz 3-space.
//!
//! The crate computes total curvature and tangent indicatrices of closed
//! spacelike curves, counts intersections of curves on the de Sitter sphere
//! with closed geodesics, and checks Crofton-type integral identities over
//! the hyperbolic plane of poles, both by quadrature and by Monte Carlo.

pub mod arclength;
pub mod cli;
pub mod curve;
pub mod desitter;
pub mod engine;
pub mod error;
pub mod gallery;
pub mod hyperbolic;
pub mod lorentz;
pub mod quadrature;
pub mod spline;

pub use error::{Error, Result};
