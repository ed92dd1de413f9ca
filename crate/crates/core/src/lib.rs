//! WKB pseudomodes for the two-dimensional magnetic Laplacian
//! `(-ih∇ - A)^2` with a complex vector potential `A`.
//!
//! The crate is organised bottom-up:
//!
//! * [`cseries`]: truncated power series in `(z, w)` and the complexification
//!   `a(x1, x2) -> a~(z, w)` that turns Wirtinger calculus into plain partials;
//! * [`fieldmodel`]: complex potentials, their fields, the admissible set Γ
//!   and the pointwise/asymptotic hypothesis checkers;
//! * [`wkb`]: the eikonal phase and the transport hierarchy solved exactly
//!   in series arithmetic;
//! * [`pseudomode`]: the cut-off pseudomode, quadrature norms and the
//!   residual ratio evaluated from the series identities;
//! * [`numop`]: an independent finite-difference realisation of the operator;
//! * [`experiment`]: configuration, sweeps and report files.

pub mod cseries;
pub mod experiment;
pub mod fieldmodel;
pub mod numop;
pub mod pseudomode;
pub mod quadrature;
pub mod wkb;
