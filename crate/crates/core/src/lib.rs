//! Monotone traveling fronts of Fisher-KPP equations with degenerate diffusion
//! `u_t = (D(u) u_x)_x + f(u)`, `D(0) = 0`, and their spectral stability in
//! exponentially weighted spaces.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod asymptotics;
pub mod cli;
pub mod energy;
pub mod error;
pub mod io;
pub mod model;
pub mod ode;
pub mod operators;
pub mod profile;
pub mod spectra;

pub use error::{Error, Result};
pub use model::Model;
pub use num_complex::Complex64;
pub use profile::FrontProfile;
