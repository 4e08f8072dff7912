//! Exact computation of generalized Frobenius numbers and the Kannan-simplex
//! geometry around them.
//!
//! * [`instance`]: validated inputs `a` and multiplicities `s`.
//! * [`denumerant`]: capped representation-count tables.
//! * [`frobenius`]: F_s(a) by three independent routes.
//! * [`lattice`]: the simplex `S_a`, the lattice `Λ_a`, covering radii and
//!   successive minima.
//! * [`bounds`]: exact checks of the known upper and lower bounds.
//! * [`experiments`]: seeded Monte-Carlo sampling and report writers.
//! * [`cli`]: the `frobgeom` command-line front end.
//! * [`arith`], [`par`], [`error`]: checked integer arithmetic, the
//!   sequential/parallel switch and error types.

pub mod arith;
pub mod bounds;
pub mod cli;
pub mod denumerant;
pub mod error;
pub mod experiments;
pub mod frobenius;
pub mod instance;
pub mod lattice;
pub mod par;

pub use denumerant::Limits;
pub use error::{Error, ErrorKind, Result};
pub use instance::{InputVector, Multiplicity};
pub use par::Execution;
