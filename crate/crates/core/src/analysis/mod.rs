//! Finite-scale evidence for the orbit pseudometrics.
//!
//! `W_F(x, y) = limsup_n W(μ_{x,F_n}, μ_{y,F_n})` and the averaged orbit
//! distance `limsup_n (1/|F_n|) Σ_{g∈F_n} d(gx, gy)` are traced over a finite
//! list of indices. Limits are never certified: [`PseudometricTrace`]
//! reports the maximum over the last half of the computed indices as its
//! limsup estimate, and every diagnostic reports its raw values.

mod diagnostics;
mod modulus;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use diagnostics::{
    generic_measure_trace, measure_map_continuity_diagnostic, uniform_convergence_diagnostic,
    unique_ergodicity_diagnostic, ContinuityRow, GenericMeasureTrace, MeasureMapContinuityReport,
    UniformConvergenceReport, UniformConvergenceRow, UniqueErgodicityPair, UniqueErgodicityReport,
    DEFAULT_UE_THRESHOLD,
};
pub use modulus::{
    modulus_estimate, CirclePairSampler, ModulusEstimate, PairSampler, ShiftFlipSampler, ShiftWindowSampler,
    DEFAULT_PAIRS_PER_DELTA,
};

use crate::dynamics::{orbit_sample, product_system, GSystem, SharedSystem, SystemPoint};
use crate::error::{check_tolerance, Error, Result};
use crate::folner::FolnerSequence;
use crate::group::FiniteSubset;
use crate::measures::empirical_measure;
use crate::numeric::pairwise_mean;
use crate::transport::{
    assignment_min, bruteforce_min, plan_cost, wasserstein_empirical, CostMatrix, TransportPlan, BRUTEFORCE_MAX,
};

/// Agreement required between the permutation minimum and the Wasserstein value.
pub const AUT_AGREEMENT: f64 = 1e-10;

/// Float slack added to every inequality budget for summation rounding.
pub const SUMMATION_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TraceKind {
    /// `n ↦ W(μ_{x,F_n}, μ_{y,F_n})`.
    Wasserstein,
    /// `n ↦ (1/|F_n|) Σ_{g∈F_n} d(gx, gy)`.
    MeanDistance,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PseudometricTrace {
    pub kind: TraceKind,
    pub indices: Vec<usize>,
    pub values: Vec<f64>,
    /// Maximum of `values` over the last half of `indices`.
    pub limsup_estimate: f64,
}

impl PseudometricTrace {
    pub fn new(kind: TraceKind, indices: Vec<usize>, values: Vec<f64>) -> Self {
        let limsup_estimate = tail_max(&values);
        PseudometricTrace {
            kind,
            indices,
            values,
            limsup_estimate,
        }
    }

    /// `(n, value)` rows in index order.
    pub fn rows(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.indices.iter().copied().zip(self.values.iter().copied())
    }
}

pub(crate) fn tail_max(values: &[f64]) -> f64 {
    values[values.len() / 2..].iter().copied().fold(0.0, f64::max)
}

pub(crate) fn check_indices(indices: &[usize]) -> Result<()> {
    if indices.is_empty() {
        return Err(Error::InvalidParameter("index list is empty".into()));
    }
    if indices[0] == 0 {
        return Err(Error::InvalidParameter("Følner indices start at 1".into()));
    }
    if indices.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidParameter("indices must be strictly increasing".into()));
    }
    Ok(())
}

/// Evaluates `f` at every index concurrently, returning values in index order.
fn per_index<F>(indices: &[usize], f: F) -> Result<Vec<f64>>
where
    F: Fn(usize) -> Result<f64> + Sync,
{
    check_indices(indices)?;
    indices.par_iter().map(|&n| f(n)).collect()
}

pub fn trace(
    kind: TraceKind,
    sys: &dyn GSystem,
    x: &SystemPoint,
    y: &SystemPoint,
    seq: &FolnerSequence,
    indices: &[usize],
    tol: f64,
) -> Result<PseudometricTrace> {
    match kind {
        TraceKind::Wasserstein => w_trace(sys, x, y, seq, indices, tol),
        TraceKind::MeanDistance => d_trace(sys, x, y, seq, indices, tol),
    }
}

/// `W(μ_{x,F_n}, μ_{y,F_n})` for each `n` in `indices`, each within `tol`.
pub fn w_trace(
    sys: &dyn GSystem,
    x: &SystemPoint,
    y: &SystemPoint,
    seq: &FolnerSequence,
    indices: &[usize],
    tol: f64,
) -> Result<PseudometricTrace> {
    check_tolerance(tol)?;
    let values = per_index(indices, |n| {
        let set = seq.set(n)?;
        let mu = empirical_measure(sys, x, &set)?;
        let nu = empirical_measure(sys, y, &set)?;
        wasserstein_empirical(sys, &mu, &nu, tol)
    })?;
    Ok(PseudometricTrace::new(TraceKind::Wasserstein, indices.to_vec(), values))
}

/// `(1/|F_n|) Σ_{g∈F_n} d(gx, gy)` for each `n` in `indices`.
pub fn d_trace(
    sys: &dyn GSystem,
    x: &SystemPoint,
    y: &SystemPoint,
    seq: &FolnerSequence,
    indices: &[usize],
    tol: f64,
) -> Result<PseudometricTrace> {
    check_tolerance(tol)?;
    let values = per_index(indices, |n| mean_orbit_distance(sys, x, y, &seq.set(n)?, tol))?;
    Ok(PseudometricTrace::new(
        TraceKind::MeanDistance,
        indices.to_vec(),
        values,
    ))
}

pub(crate) fn mean_orbit_distance(
    sys: &dyn GSystem,
    x: &SystemPoint,
    y: &SystemPoint,
    set: &FiniteSubset,
    tol: f64,
) -> Result<f64> {
    let ox = orbit_sample(sys, x, set)?;
    let oy = orbit_sample(sys, y, set)?;
    let d = ox
        .iter()
        .zip(&oy)
        .map(|(a, b)| sys.distance(a, b, tol))
        .collect::<Result<Vec<f64>>>()?;
    Ok(pairwise_mean(&d))
}

/// `min_{h ∈ Aut(F)} (1/|F|) Σ_{g∈F} d(gx, h(g)y)`.
///
/// Small sets are minimized literally over all permutations, larger ones by
/// the assignment solver. The result is checked against
/// [`wasserstein_empirical`] and a disagreement beyond [`AUT_AGREEMENT`]
/// is reported as [`Error::SolverInconsistency`].
pub fn w_aut_value(sys: &dyn GSystem, x: &SystemPoint, y: &SystemPoint, set: &FiniteSubset, tol: f64) -> Result<f64> {
    check_tolerance(tol)?;
    let n = set.len();
    let ox = orbit_sample(sys, x, set)?;
    let oy = orbit_sample(sys, y, set)?;
    let cost = CostMatrix::from_points(sys, &ox, &oy, tol / n as f64)?;
    let aut = if n <= BRUTEFORCE_MAX {
        bruteforce_min(&cost)?.cost
    } else {
        assignment_min(&cost).cost
    };
    let w = wasserstein_empirical(
        sys,
        &empirical_measure(sys, x, set)?,
        &empirical_measure(sys, y, set)?,
        tol,
    )?;
    if (aut - w).abs() > AUT_AGREEMENT {
        return Err(Error::SolverInconsistency {
            assignment: aut,
            wasserstein: w,
        });
    }
    Ok(aut)
}

/// Two points `z₁ = (x₁, y₁)`, `z₂ = (x₂, y₂)` of the product system.
#[derive(Debug, Clone, PartialEq)]
pub struct PairOfPairs {
    pub x1: SystemPoint,
    pub y1: SystemPoint,
    pub x2: SystemPoint,
    pub y2: SystemPoint,
}

impl PairOfPairs {
    pub fn new(x1: SystemPoint, y1: SystemPoint, x2: SystemPoint, y2: SystemPoint) -> Self {
        PairOfPairs { x1, y1, x2, y2 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Theorem12Row {
    pub pair: usize,
    pub n: usize,
    pub set_size: usize,
    /// `W(μ_{z₁,F_n}, μ_{z₂,F_n})` in the product.
    pub w_product: f64,
    /// `(1/|F_n|) Σ d̃(g z₁, g z₂)`, the cost of the diagonal plan.
    pub diagonal_cost: f64,
    pub violation_upper: f64,
    /// `W(μ_{(x,y),F_n}, μ_{(y,y),F_n})` for `(x, y) = z₁` and `z₂`.
    pub w_marginal: [f64; 2],
    /// `(1/|F_n|) Σ d(gx, gy)` for the same two pairs.
    pub mean_distance: [f64; 2],
    pub violation_lower: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Theorem12Report {
    pub rows: Vec<Theorem12Row>,
    pub max_violation_upper: f64,
    pub max_violation_lower: f64,
    pub max_violation: f64,
    /// Propagated metric error plus summation slack.
    pub budget: f64,
    pub passed: bool,
}

/// Checks, at every index and for every pair of pairs, the two finite-`n`
/// inequalities relating the product system to the base:
///
/// - `W(μ_{z₁,F}, μ_{z₂,F}) <= (1/|F|) Σ_g d̃(g z₁, g z₂)` (diagonal plan), and
/// - `W(μ_{(x,y),F}, μ_{(y,y),F}) >= (1/|F|) Σ_g d(gx, gy)` (first marginal).
///
/// Violations are reported, never raised.
pub fn theorem12_check(
    base: &SharedSystem,
    pairs: &[PairOfPairs],
    seq: &FolnerSequence,
    indices: &[usize],
    tol: f64,
) -> Result<Theorem12Report> {
    check_tolerance(tol)?;
    check_indices(indices)?;
    let prod = product_system(base.clone());
    let jobs: Vec<(usize, usize)> = (0..pairs.len())
        .flat_map(|p| indices.iter().map(move |&n| (p, n)))
        .collect();
    let rows = jobs
        .par_iter()
        .map(|&(p, n)| {
            let set = seq.set(n)?;
            let size = set.len();
            let entry_tol = tol / size as f64;
            let pp = &pairs[p];
            let z1 = SystemPoint::pair(pp.x1.clone(), pp.y1.clone());
            let z2 = SystemPoint::pair(pp.x2.clone(), pp.y2.clone());
            let cost = CostMatrix::from_points(
                &prod,
                &orbit_sample(&prod, &z1, &set)?,
                &orbit_sample(&prod, &z2, &set)?,
                entry_tol,
            )?;
            let w_product = assignment_min(&cost).cost;
            let diagonal_cost = plan_cost(&cost, &TransportPlan::identity(size))?;

            let mut w_marginal = [0.0; 2];
            let mut mean_distance = [0.0; 2];
            for (k, (x, y)) in [(&pp.x1, &pp.y1), (&pp.x2, &pp.y2)].into_iter().enumerate() {
                let z = SystemPoint::pair(x.clone(), y.clone());
                let zz = SystemPoint::pair(y.clone(), y.clone());
                let c = CostMatrix::from_points(
                    &prod,
                    &orbit_sample(&prod, &z, &set)?,
                    &orbit_sample(&prod, &zz, &set)?,
                    entry_tol,
                )?;
                w_marginal[k] = assignment_min(&c).cost;
                mean_distance[k] = mean_orbit_distance(base.as_ref(), x, y, &set, entry_tol)?;
            }
            let violation_lower = (0..2)
                .map(|k| (mean_distance[k] - w_marginal[k]).max(0.0))
                .fold(0.0, f64::max);
            Ok(Theorem12Row {
                pair: p,
                n,
                set_size: size,
                w_product,
                diagonal_cost,
                violation_upper: (w_product - diagonal_cost).max(0.0),
                w_marginal,
                mean_distance,
                violation_lower,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let max_size = indices
        .iter()
        .map(|&n| seq.set(n).map(|s| s.len()))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .max()
        .unwrap_or(1);
    // Each side is an average of metric values, each off by at most the
    // entry error; the base side uses the same per-entry tolerance.
    let entry_tol = tol / max_size as f64;
    let budget = 2.0 * prod.metric_error(entry_tol) + base.metric_error(entry_tol) + SUMMATION_SLACK;
    let max_violation_upper = rows.iter().map(|r| r.violation_upper).fold(0.0, f64::max);
    let max_violation_lower = rows.iter().map(|r| r.violation_lower).fold(0.0, f64::max);
    let max_violation = max_violation_upper.max(max_violation_lower);
    Ok(Theorem12Report {
        rows,
        max_violation_upper,
        max_violation_lower,
        max_violation,
        budget,
        passed: max_violation <= budget,
    })
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::dynamics::{CircleRotation, DisjointRotations, FullShift, RotationNumber, SymbolicPoint};
    use crate::folner::Direction;

    fn forward() -> FolnerSequence {
        FolnerSequence::z_interval(Direction::Forward)
    }

    #[test]
    fn limsup_uses_last_half() {
        let t = PseudometricTrace::new(
            TraceKind::Wasserstein,
            vec![1, 2, 3, 4, 5],
            vec![9.0, 1.0, 3.0, 2.0, 1.0],
        );
        assert_eq!(t.limsup_estimate, 3.0);
        let single = PseudometricTrace::new(TraceKind::Wasserstein, vec![7], vec![0.25]);
        assert_eq!(single.limsup_estimate, 0.25);
    }

    #[test]
    fn index_validation() {
        let sys = CircleRotation::rotation(RotationNumber::GOLDEN);
        let x = SystemPoint::circle(0.0);
        for bad in [&[][..], &[0, 1], &[3, 2], &[2, 2]] {
            assert!(w_trace(&sys, &x, &x, &forward(), bad, 1e-9).is_err());
        }
    }

    #[test]
    fn equal_points_trace_zero() {
        let sys = CircleRotation::rotation(RotationNumber::GOLDEN);
        let x = SystemPoint::circle(0.37);
        let w = w_trace(&sys, &x, &x, &forward(), &[1, 5, 20], 1e-9).unwrap();
        let d = d_trace(&sys, &x, &x, &forward(), &[1, 5, 20], 1e-9).unwrap();
        assert!(w.values.iter().chain(&d.values).all(|v| *v == 0.0));
    }

    #[test]
    fn shift_fixed_points_stay_at_distance_one() {
        let sys = FullShift::new();
        let zero = SystemPoint::Symbolic(SymbolicPoint::constant(0));
        let one = SystemPoint::Symbolic(SymbolicPoint::constant(1));
        let t = w_trace(&sys, &zero, &one, &forward(), &[1, 4, 16], 1e-12).unwrap();
        assert!(t.values.iter().all(|v| (v - 1.0).abs() <= 1e-12));
    }

    #[test]
    fn rotation_mean_distance_is_constant() {
        let sys = CircleRotation::rotation(RotationNumber::GOLDEN);
        let (x, y) = (SystemPoint::circle(0.0), SystemPoint::circle(0.3));
        let d0 = sys.distance(&x, &y, 1e-9).unwrap();
        let t = d_trace(&sys, &x, &y, &forward(), &[1, 10, 100], 1e-9).unwrap();
        assert!(t.values.iter().all(|v| (v - d0).abs() <= 1e-12));
        let w = w_trace(&sys, &x, &y, &forward(), &[1, 10, 100], 1e-9).unwrap();
        assert!(w.values.iter().all(|v| *v <= d0 + 1e-12));
    }

    #[test]
    fn w_aut_matches_both_regimes() {
        let sys = CircleRotation::rotation(RotationNumber::GOLDEN);
        let (x, y) = (SystemPoint::circle(0.1), SystemPoint::circle(0.65));
        for n in [1, 6, 30] {
            let set = FiniteSubset::z_range(0, n - 1);
            let a = w_aut_value(&sys, &x, &y, &set, 1e-9).unwrap();
            let mu = empirical_measure(&sys, &x, &set).unwrap();
            let nu = empirical_measure(&sys, &y, &set).unwrap();
            assert!((a - wasserstein_empirical(&sys, &mu, &nu, 1e-9).unwrap()).abs() <= AUT_AGREEMENT);
        }
        let disjoint = DisjointRotations::new(RotationNumber::GOLDEN, RotationNumber::SILVER);
        let p = SystemPoint::tagged(0, SystemPoint::circle(0.2));
        let q = SystemPoint::tagged(1, SystemPoint::circle(0.2));
        assert_eq!(
            w_aut_value(&disjoint, &p, &q, &FiniteSubset::z_range(0, 9), 1e-9).unwrap(),
            1.0
        );
    }

    #[test]
    fn theorem12_identical_pairs() {
        let base: SharedSystem = Arc::new(CircleRotation::rotation(RotationNumber::GOLDEN));
        let x = SystemPoint::circle(0.2);
        let y = SystemPoint::circle(0.9);
        let pp = PairOfPairs::new(x.clone(), y.clone(), x, y);
        let r = theorem12_check(&base, &[pp], &forward(), &[1, 8, 32], 1e-9).unwrap();
        assert!(r.passed);
        for row in &r.rows {
            assert_eq!(row.w_product, 0.0);
            assert_eq!(row.diagonal_cost, 0.0);
        }
    }
}
