//! Følner sets, empirical measures and exact Wasserstein distances for
//! actions of ℤ, ℤ^d and the discrete Heisenberg group.
//!
//! The crate is organized bottom-up:
//!
//! - [`group`] and [`folner`]: group arithmetic, finite subsets, Følner
//!   defects and temperedness, all in exact integer and rational arithmetic.
//! - [`dynamics`]: the [`GSystem`] trait and a catalog of concrete systems.
//! - [`measures`]: uniform measures `μ_{x,F}` along orbits, integration and
//!   the weak-* metric `ρ`.
//! - [`transport`]: the Wasserstein distance between equal-size uniform
//!   measures as an assignment problem.
//! - [`analysis`]: finite-scale traces of the orbit pseudometrics and
//!   diagnostics built from them.
//!
//! ```
//! use folner_core::dynamics::{CircleRotation, RotationNumber, SystemPoint};
//! use folner_core::{empirical_measure, wasserstein_empirical, FiniteSubset};
//!
//! let sys = CircleRotation::rotation(RotationNumber::GOLDEN);
//! let f = FiniteSubset::z_range(0, 99);
//! let mu = empirical_measure(&sys, &SystemPoint::circle(0.0), &f).unwrap();
//! let nu = empirical_measure(&sys, &SystemPoint::circle(0.3), &f).unwrap();
//! let w = wasserstein_empirical(&sys, &mu, &nu, 1e-9).unwrap();
//! assert!(w <= 0.3);
//! ```

pub mod analysis;
pub mod dynamics;
pub mod error;
pub mod folner;
pub mod group;
pub mod measures;
pub mod numeric;
pub mod transport;

pub use dynamics::{act, metric, orbit_sample, product_system, GSystem, SharedSystem, SystemPoint};
pub use error::{Error, Result};
pub use folner::{
    extract_tempered_subsequence, temperedness_report, Direction, FolnerSequence, FolnerSpec, TemperednessReport,
};
pub use group::{
    folner_defect_left, folner_defect_right, inverse, multiply, translate_left, translate_right, FiniteSubset,
    GroupElement, GroupId,
};
pub use measures::{birkhoff_average, empirical_measure, integrate, rho_distance, EmpiricalMeasure, Observable};
pub use transport::{assignment_min, bruteforce_min, plan_cost, wasserstein_empirical, CostMatrix, TransportPlan};
