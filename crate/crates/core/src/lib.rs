//! proxikit: best proximity points of set-valued maps on finite metric
//! spaces, with machine-checked hypotheses.
//!
//! Given two finite point sets A and B, a set-valued map F from A into B,
//! and a contraction budget (a comparison function, an exponent k, an
//! almost-term weight lambda, and an admissibility weight alpha), the
//! toolkit:
//!
//! - audits the structural hypotheses (range condition, P and weak P
//!   properties, alpha-proximal admissibility, the contraction
//!   inequality itself) with full witness reporting ([`proximal`],
//!   [`theta`]);
//! - runs the proximal Picard iteration and records a per-step decay
//!   certificate ([`solver`]);
//! - cross-checks results against a brute-force oracle and generates
//!   random instances for property testing ([`oracle`]);
//! - applies the same fixed-point machinery to a two-point boundary value
//!   problem through its kernel integral operator ([`bvp`]);
//! - reads and writes a JSON instance format ([`instance`]).
//!
//! The `proxikit` binary in the companion CLI crate exposes all of this
//! on the command line.

pub mod bvp;
pub mod instance;
pub mod mapping;
pub mod metric;
pub mod oracle;
pub mod proximal;
pub mod rng;
pub mod solver;
pub mod theta;

pub use mapping::{AlphaMap, MultiMap};
pub use metric::{dist, dist_point_set, dist_set_set, hausdorff, Metric, Point, PointSet};
pub use proximal::{proximal_pairs, ProximalPairing};
pub use solver::{
    certify, solve, solve_fixed_point, BppResult, ProximityProblem, Seeds, Tolerances,
};
pub use theta::{audit_contraction, audit_single_valued, ContractionParams, ThetaSpec};
