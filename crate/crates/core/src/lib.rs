//! Numerical verification toolkit for sharp weighted Sobolev-type inequalities.
//!
//! The crate covers second-order Caffarelli–Kohn–Nirenberg (CKN) inequalities,
//! weighted Rellich–Sobolev and Hardy–Rellich inequalities, and the Stein–Weiss
//! inequality with the Newton kernel `|x-y|^{2-N}`. Every closed-form sharp
//! constant is paired with an explicit extremal family, and is cross-checked
//! by quadrature of the corresponding Rayleigh quotient or by a discrete
//! variational minimization.
//!
//! Module layout, bottom up:
//!
//! - [`specfun`]: log-Gamma, sphere areas and the `B(M)` constant.
//! - [`constants`]: exponents, sharp constants, mode coefficients, region map.
//! - [`quadrature`]: double-exponential radial integration and the Newton kernel.
//! - [`profiles`]: radial function families with exact derivatives.
//! - [`functionals`]: Rayleigh quotients and mode-wise quadratic forms.
//! - [`transforms`]: changes of variable and algebraic identity checks.
//! - [`spectral`]: banded generalized eigenvalue cross-checks.
//! - [`harness`]: suites, sweeps, reports and the command-line front end.
//!
//! Runnable walk-throughs live in the `examples/` directory of this crate.

pub mod constants;
pub mod error;
pub mod functionals;
pub mod harness;
pub mod jet;
pub mod profiles;
pub mod quadrature;
pub mod specfun;
pub mod spectral;
pub mod transforms;

pub use error::{Error, Result};
