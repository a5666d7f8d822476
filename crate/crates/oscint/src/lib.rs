//! Symmetric trigonometric integrators for oscillatory second-order systems
//! `q̈ = -Ω²q + g(q)` with a diagonal, possibly large frequency matrix `Ω`.
//!
//! The linear part is propagated exactly through `cos(hΩ)` / `sinc(hΩ)` while
//! the (possibly nonlinear) force is damped by even filter functions. When the
//! filters satisfy the compliance condition `ψ₁ = sinc · φ`, the method
//! conserves a step-size-dependent *modified energy* exactly in the linear
//! case `g(q) = -Aq` — for every step size, including resonant ones. The crate
//! implements
//!
//! - the filter catalog and its certified bound constants ([`filters`]),
//! - the oscillatory system, total and modified energies, and the quantitative
//!   closeness/drift/regularity bound checks ([`system`]),
//! - the one-step integrator in direct and Strang-splitting form together with
//!   trajectory generation and per-step conservation audits ([`integrator`]),
//! - independent reference solutions used only for verification ([`oracle`]),
//! - a Fourier-collocation semi-discretization of the linear Klein-Gordon
//!   equation that produces such oscillatory systems ([`wave`]),
//! - experiment plumbing: energy series with CSV/JSON output ([`series`]) and
//!   the runner behind the `oscint` command-line binary ([`runner`]).
//!
//! Each major capability has a runnable demo under `examples/`; start with
//! `cargo run --example modified_energy_conservation`.

pub mod cvec;
pub mod error;
pub mod filters;
pub mod integrator;
pub mod linalg;
pub mod oracle;
pub mod runner;
pub mod series;
pub mod system;
pub mod wave;

pub use error::OscintError;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, OscintError>;

/// Complex double-precision scalar used throughout.
pub type C64 = num_complex::Complex64;
