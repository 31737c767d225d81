//! Exact Wasserstein-1 distance between equal-size uniform atomic measures.
//!
//! For `μ = (1/n)Σδ_{a_i}` and `ν = (1/n)Σδ_{b_j}`, every doubly stochastic
//! matrix `A` induces the coupling `π_A = (1/n) Σ A_ij δ_{(a_i, b_j)}` and
//! every coupling arises this way. The cost `A ↦ (1/n)Σ A_ij d(a_i, b_j)` is
//! linear and the extreme points of the doubly stochastic matrices are the
//! permutation matrices, so the Wasserstein distance is an assignment
//! problem. [`assignment_min`] solves it exactly; [`bruteforce_min`] scans
//! all permutations for small `n` and serves as the independent check.

mod hungarian;

use std::io::{Read, Write};

use itertools::Itertools;
use rayon::prelude::*;
use serde::Serialize;

use crate::dynamics::{GSystem, SystemPoint};
use crate::error::{check_tolerance, Error, Result};
use crate::measures::EmpiricalMeasure;
use crate::numeric::pairwise_sum;

/// Largest size accepted by [`bruteforce_min`].
pub const BRUTEFORCE_MAX: usize = 8;

/// Row/column sum tolerance for doubly stochastic plans.
pub const STOCHASTIC_TOL: f64 = 1e-12;

/// Dense `n × n` nonnegative cost matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct CostMatrix {
    n: usize,
    entries: Vec<f64>,
}

impl CostMatrix {
    pub fn new(n: usize, entries: Vec<f64>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidCost("empty matrix".into()));
        }
        if entries.len() != n * n {
            return Err(Error::InvalidCost(format!(
                "{} entries for a {n}×{n} matrix",
                entries.len()
            )));
        }
        if let Some((k, v)) = entries.iter().enumerate().find(|(_, v)| !(v.is_finite() && **v >= 0.0)) {
            return Err(Error::InvalidCost(format!(
                "entry ({}, {}) = {v} is not finite and nonnegative",
                k / n,
                k % n
            )));
        }
        Ok(CostMatrix { n, entries })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        if let Some(r) = rows.iter().find(|r| r.len() != n) {
            return Err(Error::InvalidCost(format!(
                "non-square: row of length {} in {n} rows",
                r.len()
            )));
        }
        Self::new(n, rows.concat())
    }

    /// `entries[i][j] = d(a_i, b_j)` with per-entry metric tolerance `tol`.
    pub fn from_points(sys: &dyn GSystem, left: &[SystemPoint], right: &[SystemPoint], tol: f64) -> Result<Self> {
        check_tolerance(tol)?;
        if left.len() != right.len() {
            return Err(Error::UnequalAtomCounts {
                left: left.len(),
                right: right.len(),
            });
        }
        let n = left.len();
        let rows = left
            .par_iter()
            .map(|a| {
                right
                    .iter()
                    .map(|b| sys.distance(a, b, tol))
                    .collect::<Result<Vec<f64>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(n, rows.concat())
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.n + j]
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn transpose(&self) -> CostMatrix {
        let n = self.n;
        let entries = (0..n * n).map(|k| self.entries[(k % n) * n + k / n]).collect();
        CostMatrix { n, entries }
    }

    pub fn scaled(&self, lambda: f64) -> Result<CostMatrix> {
        CostMatrix::new(self.n, self.entries.iter().map(|v| v * lambda).collect())
    }

    /// Headerless CSV, one row per line, shortest round-trip formatting.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
        for row in self.entries.chunks(self.n) {
            w.write_record(row.iter().map(f64::to_string))?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn read_csv<R: Read>(input: R) -> Result<Self> {
        let mut r = csv::ReaderBuilder::new()
            .has_headers(false)
            .trim(csv::Trim::All)
            .from_reader(input);
        let mut rows = Vec::new();
        for rec in r.records() {
            let rec = rec?;
            let row = rec
                .iter()
                .map(|s| s.parse::<f64>().map_err(|e| Error::Csv(format!("`{s}`: {e}"))))
                .collect::<Result<Vec<_>>>()?;
            rows.push(row);
        }
        Self::from_rows(&rows)
    }
}

/// A coupling of two `n`-atom uniform measures, as a matrix `A` with
/// `π = (1/n) Σ A_ij δ_{(a_i, b_j)}`.
#[derive(Debug, Clone, PartialEq)]
pub enum TransportPlan {
    /// `sigma[j] = i`: column `j` is served by row `i` (`A_ij = 1` iff `σ(j) = i`).
    Permutation(Vec<usize>),
    /// Nonnegative row-major `n × n` with unit row and column sums.
    DoublyStochastic { n: usize, entries: Vec<f64> },
}

impl TransportPlan {
    pub fn identity(n: usize) -> Self {
        TransportPlan::Permutation((0..n).collect())
    }

    pub fn size(&self) -> usize {
        match self {
            TransportPlan::Permutation(s) => s.len(),
            TransportPlan::DoublyStochastic { n, .. } => *n,
        }
    }

    /// Checks the plan invariants.
    pub fn validate(&self) -> Result<()> {
        match self {
            TransportPlan::Permutation(sigma) => {
                let mut seen = vec![false; sigma.len()];
                for &i in sigma {
                    if i >= sigma.len() || std::mem::replace(&mut seen[i], true) {
                        return Err(Error::InvalidPlan("not a bijection".into()));
                    }
                }
                Ok(())
            }
            TransportPlan::DoublyStochastic { n, entries } => {
                let n = *n;
                if entries.len() != n * n {
                    return Err(Error::InvalidPlan("wrong entry count".into()));
                }
                if entries.iter().any(|v| !(v.is_finite() && *v >= 0.0)) {
                    return Err(Error::InvalidPlan("negative or non-finite entry".into()));
                }
                for k in 0..n {
                    let row: f64 = entries[k * n..(k + 1) * n].iter().sum();
                    let col: f64 = (0..n).map(|i| entries[i * n + k]).sum();
                    if (row - 1.0).abs() > STOCHASTIC_TOL || (col - 1.0).abs() > STOCHASTIC_TOL {
                        return Err(Error::InvalidPlan(format!("line {k} sums to {row} / {col}")));
                    }
                }
                Ok(())
            }
        }
    }

    /// Matrix form; a permutation becomes its permutation matrix `A^σ`.
    pub fn to_matrix(&self) -> Vec<f64> {
        match self {
            TransportPlan::Permutation(sigma) => {
                let n = sigma.len();
                let mut a = vec![0.0; n * n];
                for (j, &i) in sigma.iter().enumerate() {
                    a[i * n + j] = 1.0;
                }
                a
            }
            TransportPlan::DoublyStochastic { entries, .. } => entries.clone(),
        }
    }

    /// `Σ_k w_k A^{σ_k}` for permutations `σ_k` and weights normalized to sum 1.
    pub fn convex_combination(perms: &[Vec<usize>], weights: &[f64]) -> Result<Self> {
        if perms.is_empty() || perms.len() != weights.len() {
            return Err(Error::InvalidPlan("need one weight per permutation".into()));
        }
        let n = perms[0].len();
        let total: f64 = weights.iter().sum();
        if total.is_nan() || total <= 0.0 || weights.iter().any(|w| *w < 0.0) {
            return Err(Error::InvalidPlan(
                "weights must be nonnegative with positive sum".into(),
            ));
        }
        let mut entries = vec![0.0; n * n];
        for (sigma, w) in perms.iter().zip(weights) {
            let p = TransportPlan::Permutation(sigma.clone());
            if sigma.len() != n {
                return Err(Error::InvalidPlan("permutations of different sizes".into()));
            }
            p.validate()?;
            for (j, &i) in sigma.iter().enumerate() {
                entries[i * n + j] += w / total;
            }
        }
        Ok(TransportPlan::DoublyStochastic { n, entries })
    }
}

/// The coupling `π_A` induced by a plan on two atom lists, merged over equal
/// atom pairs. Each entry is `(atom of μ, atom of ν, mass)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Coupling {
    pub support: Vec<(SystemPoint, SystemPoint, f64)>,
}

impl Coupling {
    pub fn induced(mu: &EmpiricalMeasure, nu: &EmpiricalMeasure, plan: &TransportPlan) -> Result<Self> {
        mu.check_same_space(nu)?;
        let n = mu.count();
        if nu.count() != n {
            return Err(Error::UnequalAtomCounts {
                left: n,
                right: nu.count(),
            });
        }
        if plan.size() != n {
            return Err(Error::InvalidPlan(format!(
                "plan of size {} for {n} atoms",
                plan.size()
            )));
        }
        plan.validate()?;
        let a = plan.to_matrix();
        let mut support: Vec<(SystemPoint, SystemPoint, f64)> = Vec::new();
        for i in 0..n {
            for j in 0..n {
                let mass = a[i * n + j] / n as f64;
                if mass == 0.0 {
                    continue;
                }
                let (x, y) = (&mu.atoms()[i], &nu.atoms()[j]);
                match support.iter_mut().find(|(p, q, _)| p == x && q == y) {
                    Some(entry) => entry.2 += mass,
                    None => support.push((x.clone(), y.clone(), mass)),
                }
            }
        }
        Ok(Coupling { support })
    }

    /// Pushforward under the first projection, as `(atom, mass)` over distinct atoms.
    pub fn first_marginal(&self) -> Vec<(SystemPoint, f64)> {
        marginal(self.support.iter().map(|(x, _, m)| (x, *m)))
    }

    pub fn second_marginal(&self) -> Vec<(SystemPoint, f64)> {
        marginal(self.support.iter().map(|(_, y, m)| (y, *m)))
    }
}

fn marginal<'a>(items: impl Iterator<Item = (&'a SystemPoint, f64)>) -> Vec<(SystemPoint, f64)> {
    let mut out: Vec<(SystemPoint, f64)> = Vec::new();
    for (p, m) in items {
        match out.iter_mut().find(|(q, _)| q == p) {
            Some(e) => e.1 += m,
            None => out.push((p.clone(), m)),
        }
    }
    out
}

/// An uniform measure as `(atom, mass)` over distinct atoms.
pub fn atom_masses(mu: &EmpiricalMeasure) -> Vec<(SystemPoint, f64)> {
    marginal(mu.atoms().iter().map(|a| (a, mu.weight())))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AssignmentResult {
    /// `sigma[j] = i`.
    pub permutation: Vec<usize>,
    /// `(1/n) Σ_j C[σ(j)][j]`.
    pub cost: f64,
    /// Dual potentials `(u, v)` when the solver produces them.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub duals: Option<(Vec<f64>, Vec<f64>)>,
}

/// Sums the matched entries in sorted order, so the value depends only on
/// their multiset; `W(μ, ν)` and `W(ν, μ)` then agree bit for bit.
fn permutation_cost(c: &CostMatrix, sigma: &[usize]) -> f64 {
    let mut terms: Vec<f64> = sigma.iter().enumerate().map(|(j, &i)| c.get(i, j)).collect();
    terms.sort_unstable_by(f64::total_cmp);
    pairwise_sum(&terms) / c.n as f64
}

/// Optimal assignment by the Hungarian method. Ties may resolve to any
/// optimal permutation; only the cost is part of the contract.
pub fn assignment_min(c: &CostMatrix) -> AssignmentResult {
    let (permutation, u, v) = hungarian::solve(c.n, &c.entries);
    AssignmentResult {
        cost: permutation_cost(c, &permutation),
        permutation,
        duals: Some((u, v)),
    }
}

/// Exact minimum over all `n!` permutations, `n <= 8`.
pub fn bruteforce_min(c: &CostMatrix) -> Result<AssignmentResult> {
    if c.n > BRUTEFORCE_MAX {
        return Err(Error::SizeLimit {
            n: c.n,
            max: BRUTEFORCE_MAX,
        });
    }
    let mut best: Option<(f64, Vec<usize>)> = None;
    for sigma in (0..c.n).permutations(c.n) {
        let cost = permutation_cost(c, &sigma);
        if best.as_ref().is_none_or(|(b, _)| cost < *b) {
            best = Some((cost, sigma));
        }
    }
    let (cost, permutation) = best.expect("at least one permutation");
    Ok(AssignmentResult {
        permutation,
        cost,
        duals: None,
    })
}

/// `(1/n) Σ_{i,j} A_ij C_ij`.
pub fn plan_cost(c: &CostMatrix, plan: &TransportPlan) -> Result<f64> {
    if plan.size() != c.n {
        return Err(Error::InvalidPlan(format!(
            "plan of size {} for a {}×{} cost",
            plan.size(),
            c.n,
            c.n
        )));
    }
    plan.validate()?;
    match plan {
        TransportPlan::Permutation(sigma) => Ok(permutation_cost(c, sigma)),
        TransportPlan::DoublyStochastic { entries, .. } => {
            let terms: Vec<f64> = entries.iter().zip(&c.entries).map(|(a, v)| a * v).collect();
            Ok(pairwise_sum(&terms) / c.n as f64)
        }
    }
}

/// `W(μ, ν)` for equal-size uniform measures, within `tol` of the true value.
pub fn wasserstein_empirical(sys: &dyn GSystem, mu: &EmpiricalMeasure, nu: &EmpiricalMeasure, tol: f64) -> Result<f64> {
    check_tolerance(tol)?;
    if mu.count() != nu.count() {
        return Err(Error::UnequalAtomCounts {
            left: mu.count(),
            right: nu.count(),
        });
    }
    mu.check_same_space(nu)?;
    if mu.system_id() != sys.id() {
        return Err(Error::SpaceMismatch {
            left: mu.system_id().to_string(),
            right: sys.id(),
        });
    }
    let c = CostMatrix::from_points(sys, mu.atoms(), nu.atoms(), tol / mu.count() as f64)?;
    Ok(assignment_min(&canonical_orientation(c)).cost)
}

/// `C` or `Cᵀ`, whichever is lexicographically smaller by bit pattern.
/// Metrics are exactly symmetric, so swapping `μ` and `ν` transposes `C`
/// and both orders solve the same matrix: symmetry of `W` holds bit for bit
/// even when several optimal permutations exist.
fn canonical_orientation(c: CostMatrix) -> CostMatrix {
    let n = c.n;
    for i in 0..n {
        for j in i + 1..n {
            let (a, b) = (c.get(i, j).to_bits(), c.get(j, i).to_bits());
            if a != b {
                return if a < b { c } else { c.transpose() };
            }
        }
    }
    c
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_and_identity_costs() {
        let zero = CostMatrix::new(3, vec![0.0; 9]).unwrap();
        assert_eq!(assignment_min(&zero).cost, 0.0);
        let off = CostMatrix::from_rows(&[vec![0.0, 1.0, 1.0], vec![1.0, 0.0, 1.0], vec![1.0, 1.0, 0.0]]).unwrap();
        let r = assignment_min(&off);
        assert_eq!(r.permutation, vec![0, 1, 2]);
        assert_eq!(r.cost, 0.0);
    }

    #[test]
    fn bruteforce_small_cases() {
        let one = CostMatrix::new(1, vec![0.7]).unwrap();
        assert_eq!(bruteforce_min(&one).unwrap().cost, 0.7);
        let two = CostMatrix::from_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        let r = bruteforce_min(&two).unwrap();
        assert_eq!((r.permutation, r.cost), (vec![0, 1], 0.0));
        let nine = CostMatrix::new(9, vec![0.0; 81]).unwrap();
        assert_eq!(bruteforce_min(&nine), Err(Error::SizeLimit { n: 9, max: 8 }));
    }

    #[test]
    fn rejects_bad_matrices() {
        assert!(CostMatrix::new(2, vec![0.0, -1.0, 0.0, 0.0]).is_err());
        assert!(CostMatrix::new(2, vec![0.0, f64::NAN, 0.0, 0.0]).is_err());
        assert!(CostMatrix::from_rows(&[vec![0.0, 1.0]]).is_err());
        assert!(CostMatrix::new(0, vec![]).is_err());
    }

    #[test]
    fn uniform_plan_costs_grand_mean() {
        let c = CostMatrix::from_rows(&[vec![1.0, 2.0], vec![3.0, 6.0]]).unwrap();
        let plan = TransportPlan::DoublyStochastic {
            n: 2,
            entries: vec![0.5; 4],
        };
        assert_eq!(plan_cost(&c, &plan).unwrap(), 3.0);
        let bad = TransportPlan::DoublyStochastic {
            n: 2,
            entries: vec![0.5, 0.5, 0.5, 0.6],
        };
        assert!(plan_cost(&c, &bad).is_err());
        assert!(plan_cost(&c, &TransportPlan::Permutation(vec![0, 0])).is_err());
    }

    #[test]
    fn permutation_matrix_semantics() {
        // σ(0) = 2, σ(1) = 0, σ(2) = 1.
        let a = TransportPlan::Permutation(vec![2, 0, 1]).to_matrix();
        assert_eq!(a[2 * 3], 1.0);
        assert_eq!(a[1], 1.0);
        assert_eq!(a[3 + 2], 1.0);
        assert_eq!(a.iter().sum::<f64>(), 3.0);
    }

    #[test]
    fn csv_round_trip() {
        let c = CostMatrix::from_rows(&[vec![0.1, 1.0 / 3.0], vec![2.5e-17, 7.0]]).unwrap();
        let mut buf = Vec::new();
        c.write_csv(&mut buf).unwrap();
        assert_eq!(CostMatrix::read_csv(buf.as_slice()).unwrap(), c);
        assert!(CostMatrix::read_csv("1,2\n3\n".as_bytes()).is_err());
    }

    #[test]
    fn transpose_swaps_indices() {
        let c = CostMatrix::from_rows(&[vec![1.0, 2.0], vec![3.0, 4.0]]).unwrap();
        assert_eq!(c.transpose().entries(), &[1.0, 3.0, 2.0, 4.0]);
    }
}
