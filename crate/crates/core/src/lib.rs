//! Numerics for inner functions on the unit disk: Taylor jets over float and
//! exact Gaussian-rational scalars, Blaschke products with singular atoms,
//! zero-sequence geometry, admissible jets on finite sets, the exact
//! `M(k, n)` Cramer system and grid estimators for decrease criteria.

pub mod admissible;
pub mod cramer;
pub mod criteria;
pub mod disk;
pub mod error;
pub mod expr;
pub mod geometry;
pub mod inner;
pub mod jet;
pub mod quadrature;
pub mod scalar;

pub use admissible::{build_delta_jet, check_admissible, trace_of_expr, AdmissibilityReport, JetData};
pub use cramer::{build_m, cramer_solve, det_exact, recover_gk, RationalMatrix, SystemSolution};
pub use criteria::{CriterionReport, Verdict};
pub use disk::{rho, DiskPoint};
pub use error::{Error, Result};
pub use expr::AnalyticExpr;
pub use geometry::{gen_sequence, SequenceKind, ZeroSequence};
pub use inner::{eval_inner, inner_jet, BoundaryGrid, GridSpec, InnerFunction};
pub use jet::{jet_arith, Jet, JetOp};
pub use scalar::{GaussRat, Scalar};
