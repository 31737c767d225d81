//! Unique ergodicity, generic points, continuity of `x ↦ μ_x^G` and uniform
//! convergence of averages, each at a fixed finite scale.

use rayon::prelude::*;
use serde::Serialize;

use super::{check_indices, tail_max};
use crate::dynamics::{GSystem, SystemPoint};
use crate::error::{check_tolerance, Error, Result};
use crate::folner::FolnerSequence;
use crate::measures::{empirical_measure, integrate, rho_distance, EmpiricalMeasure, Observable, ObservableFamily};
use crate::transport::wasserstein_empirical;

/// Default threshold for "consistent with unique ergodicity".
pub const DEFAULT_UE_THRESHOLD: f64 = 0.05;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UniqueErgodicityPair {
    pub left: usize,
    pub right: usize,
    pub wasserstein: f64,
    pub rho: f64,
    pub rho_upper: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UniqueErgodicityReport {
    pub n: usize,
    pub set_size: usize,
    pub rho_terms: usize,
    pub threshold: f64,
    pub pairs: Vec<UniqueErgodicityPair>,
    pub max_wasserstein: f64,
    pub max_rho: f64,
    pub consistent: bool,
    pub verdict: String,
}

/// Compares `μ_{x,F_n}` across all pairs of sample points by both `W` and
/// `ρ`. The verdict is "consistent" iff both maxima are at most `threshold`.
#[allow(clippy::too_many_arguments)]
pub fn unique_ergodicity_diagnostic(
    sys: &dyn GSystem,
    points: &[SystemPoint],
    seq: &FolnerSequence,
    n: usize,
    family: &ObservableFamily,
    terms: usize,
    threshold: f64,
    tol: f64,
) -> Result<UniqueErgodicityReport> {
    check_tolerance(tol)?;
    if points.is_empty() {
        return Err(Error::InvalidParameter("no sample points".into()));
    }
    check_indices(&[n])?;
    let set = seq.set(n)?;
    let measures = points
        .par_iter()
        .map(|x| empirical_measure(sys, x, &set))
        .collect::<Result<Vec<_>>>()?;
    let jobs: Vec<(usize, usize)> = (0..points.len())
        .flat_map(|i| (i + 1..points.len()).map(move |j| (i, j)))
        .collect();
    let pairs = jobs
        .par_iter()
        .map(|&(i, j)| {
            let rho = rho_distance(&measures[i], &measures[j], family, terms)?;
            Ok(UniqueErgodicityPair {
                left: i,
                right: j,
                wasserstein: wasserstein_empirical(sys, &measures[i], &measures[j], tol)?,
                rho: rho.value,
                rho_upper: rho.upper(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let max_wasserstein = pairs.iter().map(|p| p.wasserstein).fold(0.0, f64::max);
    let max_rho = pairs.iter().map(|p| p.rho).fold(0.0, f64::max);
    let consistent = max_wasserstein.max(max_rho) <= threshold;
    let verdict = format!(
        "{} with unique ergodicity at scale n = {n}",
        if consistent { "consistent" } else { "inconsistent" }
    );
    Ok(UniqueErgodicityReport {
        n,
        set_size: set.len(),
        rho_terms: terms,
        threshold,
        pairs,
        max_wasserstein,
        max_rho,
        consistent,
        verdict,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct GenericMeasureTrace {
    pub indices: Vec<usize>,
    #[serde(skip)]
    pub measures: Vec<EmpiricalMeasure>,
    /// `∫ f_1 dμ_{x,F_n}` for the first observable of the family.
    pub leading_integrals: Vec<f64>,
    /// `ρ(μ_{x,F_{n_k}}, μ_{x,F_{n_{k+1}}})`.
    pub consecutive_rho: Vec<f64>,
    /// Maximum of `consecutive_rho` over the last half.
    pub cauchy_defect: f64,
}

/// `μ_{x,F_n}` along `indices` with consecutive `ρ` distances.
pub fn generic_measure_trace(
    sys: &dyn GSystem,
    x: &SystemPoint,
    seq: &FolnerSequence,
    indices: &[usize],
    family: &ObservableFamily,
    terms: usize,
) -> Result<GenericMeasureTrace> {
    check_indices(indices)?;
    let measures = indices
        .par_iter()
        .map(|&n| empirical_measure(sys, x, &seq.set(n)?))
        .collect::<Result<Vec<_>>>()?;
    let f1 = family.observable(1);
    let leading_integrals = measures
        .iter()
        .map(|mu| integrate(mu, &f1, 1e-9))
        .collect::<Result<Vec<_>>>()?;
    let consecutive_rho = measures
        .par_windows(2)
        .map(|w| Ok(rho_distance(&w[0], &w[1], family, terms)?.value))
        .collect::<Result<Vec<_>>>()?;
    let cauchy_defect = if consecutive_rho.is_empty() {
        0.0
    } else {
        tail_max(&consecutive_rho)
    };
    Ok(GenericMeasureTrace {
        indices: indices.to_vec(),
        measures,
        leading_integrals,
        consecutive_rho,
        cauchy_defect,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ContinuityRow {
    pub left: usize,
    pub right: usize,
    pub distance: f64,
    pub rho: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MeasureMapContinuityReport {
    pub n: usize,
    pub rows: Vec<ContinuityRow>,
    pub max_rho: f64,
}

/// `d(x, x')` against `ρ(μ_{x,F_n}, μ_{x',F_n})` for adjacent grid points.
pub fn measure_map_continuity_diagnostic(
    sys: &dyn GSystem,
    grid: &[SystemPoint],
    seq: &FolnerSequence,
    n: usize,
    family: &ObservableFamily,
    terms: usize,
    tol: f64,
) -> Result<MeasureMapContinuityReport> {
    check_tolerance(tol)?;
    check_indices(&[n])?;
    let set = seq.set(n)?;
    let measures = grid
        .par_iter()
        .map(|x| empirical_measure(sys, x, &set))
        .collect::<Result<Vec<_>>>()?;
    let rows = (0..grid.len().saturating_sub(1))
        .into_par_iter()
        .map(|i| {
            Ok(ContinuityRow {
                left: i,
                right: i + 1,
                distance: sys.distance(&grid[i], &grid[i + 1], tol)?,
                rho: rho_distance(&measures[i], &measures[i + 1], family, terms)?.value,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let max_rho = rows.iter().map(|r| r.rho).fold(0.0, f64::max);
    Ok(MeasureMapContinuityReport { n, rows, max_rho })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UniformConvergenceRow {
    pub n: usize,
    pub m: usize,
    /// `sup_x |A_{F_n} f(x) − A_{F_m} f(x)|` over the grid.
    pub sup_difference: f64,
    /// Grid position attaining the sup.
    pub argmax: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UniformConvergenceReport {
    pub rows: Vec<UniformConvergenceRow>,
}

/// Uniform Cauchy modulus of the averages `A_{F_n} f` over a grid.
pub fn uniform_convergence_diagnostic(
    sys: &dyn GSystem,
    f: &Observable,
    grid: &[SystemPoint],
    seq: &FolnerSequence,
    index_pairs: &[(usize, usize)],
) -> Result<UniformConvergenceReport> {
    if grid.is_empty() {
        return Err(Error::InvalidParameter("empty grid".into()));
    }
    if let Some((n, m)) = index_pairs.iter().find(|(n, m)| !(*n >= 1 && n < m)) {
        return Err(Error::InvalidParameter(format!(
            "index pair ({n}, {m}) needs 1 <= n < m"
        )));
    }
    let average = |n: usize| -> Result<Vec<f64>> {
        let set = seq.set(n)?;
        grid.iter()
            .map(|x| integrate(&empirical_measure(sys, x, &set)?, f, 1e-9))
            .collect()
    };
    let rows = index_pairs
        .par_iter()
        .map(|&(n, m)| {
            let (an, am) = (average(n)?, average(m)?);
            let (argmax, sup_difference) = an
                .iter()
                .zip(&am)
                .map(|(a, b)| (a - b).abs())
                .enumerate()
                .fold((0, 0.0), |best, (i, v)| if v > best.1 { (i, v) } else { best });
            Ok(UniformConvergenceRow {
                n,
                m,
                sup_difference,
                argmax,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(UniformConvergenceReport { rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{
        CircleRotation, DisjointRotations, FullShift, IntervalSquare, RotationNumber, Space, SymbolicPoint,
    };
    use crate::folner::Direction;

    fn forward() -> FolnerSequence {
        FolnerSequence::z_interval(Direction::Forward)
    }

    #[test]
    fn single_point_is_degenerate_consistent() {
        let sys = CircleRotation::rotation(RotationNumber::GOLDEN);
        let fam = ObservableFamily::for_space(Space::Circle);
        let r = unique_ergodicity_diagnostic(&sys, &[SystemPoint::circle(0.4)], &forward(), 10, &fam, 40, 0.05, 1e-9)
            .unwrap();
        assert!(r.pairs.is_empty() && r.consistent);
        assert_eq!(r.max_wasserstein, 0.0);
    }

    #[test]
    fn disjoint_components_are_inconsistent() {
        let sys = DisjointRotations::new(RotationNumber::GOLDEN, RotationNumber::SILVER);
        let fam = ObservableFamily::for_space(Space::DisjointCircles);
        let pts = [
            SystemPoint::tagged(0, SystemPoint::circle(0.1)),
            SystemPoint::tagged(1, SystemPoint::circle(0.1)),
        ];
        let r = unique_ergodicity_diagnostic(&sys, &pts, &forward(), 50, &fam, 40, 0.05, 1e-9).unwrap();
        assert_eq!(r.max_wasserstein, 1.0);
        assert!(!r.consistent);
    }

    #[test]
    fn interval_forward_and_backward_limits() {
        let sys = IntervalSquare;
        let fam = ObservableFamily::for_space(Space::Interval);
        let x = SystemPoint::interval(0.5).unwrap();
        let idx = [10, 100, 1000];
        let fwd = generic_measure_trace(&sys, &x, &forward(), &idx, &fam, 40).unwrap();
        let bwd = generic_measure_trace(
            &sys,
            &x,
            &FolnerSequence::z_interval(Direction::Backward),
            &idx,
            &fam,
            40,
        )
        .unwrap();
        assert!(fwd.leading_integrals[2] <= 0.01);
        assert!(bwd.leading_integrals[2] >= 0.99);
        assert!(fwd.consecutive_rho.iter().all(|r| *r >= 0.0));
    }

    #[test]
    fn one_point_grid_gives_empty_report() {
        let sys = CircleRotation::rotation(RotationNumber::GOLDEN);
        let fam = ObservableFamily::for_space(Space::Circle);
        let r = measure_map_continuity_diagnostic(&sys, &[SystemPoint::circle(0.0)], &forward(), 10, &fam, 40, 1e-9)
            .unwrap();
        assert!(r.rows.is_empty());
    }

    #[test]
    fn constant_observable_converges_trivially() {
        let sys = CircleRotation::rotation(RotationNumber::GOLDEN);
        let grid: Vec<_> = (0..5).map(|k| SystemPoint::circle(k as f64 / 5.0)).collect();
        let r =
            uniform_convergence_diagnostic(&sys, &Observable::Constant(1.0), &grid, &forward(), &[(10, 20)]).unwrap();
        assert_eq!(r.rows[0].sup_difference, 0.0);
        assert!(
            uniform_convergence_diagnostic(&sys, &Observable::Constant(1.0), &grid, &forward(), &[(20, 10)]).is_err()
        );
    }

    #[test]
    fn shift_fixed_points_have_unit_gap() {
        let sys = FullShift::new();
        let grid = [
            SystemPoint::Symbolic(SymbolicPoint::constant(0)),
            SystemPoint::Symbolic(SymbolicPoint::constant(1)),
        ];
        let f = Observable::symbol_at(0, 1);
        let r = uniform_convergence_diagnostic(&sys, &f, &grid, &forward(), &[(5, 10), (10, 40)]).unwrap();
        // Both averages are constant in n, so consecutive differences vanish;
        // the limit itself jumps by 1 between the two fixed points.
        assert!(r.rows.iter().all(|row| row.sup_difference == 0.0));
        let set = forward().set(10).unwrap();
        let a0 = integrate(&empirical_measure(&sys, &grid[0], &set).unwrap(), &f, 1e-9).unwrap();
        let a1 = integrate(&empirical_measure(&sys, &grid[1], &set).unwrap(), &f, 1e-9).unwrap();
        assert_eq!(a1 - a0, 1.0);
    }
}
