//! Numerical toolkit for scalar quasistatic brittle fracture in heterogeneous
//! and composite media.
//!
//! The pieces fit together as follows. [`grid`] and [`medium`] define the
//! discrete geometry and the coefficient fields a(x), kappa(x, nu). [`elastic`]
//! minimizes the bulk energy at a fixed crack. [`mincut`] evaluates
//! crack-discounted surface functionals by exact min-cut and drives the
//! windowed density probes. [`cell`] computes effective homogenized densities
//! on the periodic unit cell. [`evolution`] runs the incremental quasistatic
//! scheme with irreversibility, minimality verification and an energy-balance
//! audit, and [`sweep`] compares evolutions at decreasing microstructure scale
//! against the homogenized evolution.

// NaN-rejecting validations are written as negated comparisons on purpose,
// and indexed loops mirror the assembly structure of the kernels.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
#![allow(clippy::needless_range_loop)]
#![allow(clippy::too_many_arguments)]
#![allow(clippy::manual_memcpy)]

pub mod artifacts;
pub mod cell;
pub mod config;
pub mod elastic;
pub mod error;
pub mod evolution;
pub mod field;
pub mod grid;
pub mod medium;
pub mod mincut;
pub mod sparse;
pub mod sweep;

pub use error::{Error, Result};
pub use field::{BoundaryDatum, CrackState, EnergyBreakdown, ScalarField};
pub use grid::{build_grid, Axis, DirichletSpec, EdgeId, Grid, NodeId};
pub use medium::{sample_periodic, CellPattern, Medium, PeriodicMedium};
