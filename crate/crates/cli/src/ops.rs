//! Executes validated operations into a JSON result and a CSV table.

use folner_core::analysis::{
    generic_measure_trace, measure_map_continuity_diagnostic, modulus_estimate, theorem12_check,
    uniform_convergence_diagnostic, unique_ergodicity_diagnostic, w_aut_value, PseudometricTrace,
};
use folner_core::folner::extract_tempered_subsequence_with_budget;
use folner_core::measures::ObservableFamily;
use folner_core::{
    empirical_measure, folner_defect_left, folner_defect_right, temperedness_report, wasserstein_empirical,
    SharedSystem,
};
use num_rational::Ratio;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::config::{sampler_for, DefectSide, Operation, Plan};
use crate::error::CliError;
use crate::output::{num, Table};

pub struct OpOutput {
    pub result: Value,
    pub table: Table,
}

pub fn ratio_string(r: Ratio<u64>) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

fn ratio_value(r: Ratio<u64>) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

fn to_value<T: Serialize>(t: &T) -> Value {
    serde_json::to_value(t).expect("result serializes")
}

fn trace_output(trace: PseudometricTrace) -> OpOutput {
    let mut table = Table::new(vec!["n", "value"]);
    for (n, v) in trace.rows() {
        table.push(vec![n.to_string(), num(v)]);
    }
    OpOutput {
        result: to_value(&trace),
        table,
    }
}

fn coords_string(c: &[i64]) -> String {
    let parts: Vec<String> = c.iter().map(i64::to_string).collect();
    format!("({})", parts.join(" "))
}

pub fn execute(plan: &Plan) -> Result<OpOutput, CliError> {
    let name = plan.config.operation.name.as_str();
    let rt = |e| CliError::runtime(name, e);
    let indices = &plan.config.indices;
    let tol = plan.config.tolerance;
    let seq = &plan.sequence;
    let system = || -> &SharedSystem { plan.system.as_ref().expect("validated: system present") };

    Ok(match &plan.operation {
        Operation::WTrace { x, y } => {
            trace_output(folner_core::analysis::w_trace(system().as_ref(), x, y, seq, indices, tol).map_err(rt)?)
        }
        Operation::DTrace { x, y } => {
            trace_output(folner_core::analysis::d_trace(system().as_ref(), x, y, seq, indices, tol).map_err(rt)?)
        }
        Operation::WAut { x, y } => {
            let sys = system().as_ref();
            let values = indices
                .par_iter()
                .map(|&n| w_aut_value(sys, x, y, &seq.set(n)?, tol))
                .collect::<folner_core::Result<Vec<f64>>>()
                .map_err(rt)?;
            let mut table = Table::new(vec!["n", "value"]);
            for (n, v) in indices.iter().zip(&values) {
                table.push(vec![n.to_string(), num(*v)]);
            }
            OpOutput {
                result: json!({"indices": indices, "values": values}),
                table,
            }
        }
        Operation::Wasserstein { x, y, n, m } => {
            let sys = system().as_ref();
            let mu = empirical_measure(sys, x, &seq.set(*n).map_err(rt)?).map_err(rt)?;
            let nu = empirical_measure(sys, y, &seq.set(*m).map_err(rt)?).map_err(rt)?;
            let value = wasserstein_empirical(sys, &mu, &nu, tol).map_err(rt)?;
            let mut table = Table::new(vec!["n", "m", "value"]);
            table.push(vec![n.to_string(), m.to_string(), num(value)]);
            OpOutput {
                result: json!({"n": n, "m": m, "atoms": mu.count(), "value": value}),
                table,
            }
        }
        Operation::Modulus { params } => {
            let (sampler, _) = sampler_for(&params.sampler).expect("validated sampler");
            let est = modulus_estimate(
                system().as_ref(),
                params.kind,
                seq,
                &params.deltas,
                sampler.as_ref(),
                indices,
                params.pairs_per_delta,
                plan.config.seed,
                tol,
            )
            .map_err(rt)?;
            let mut table = Table::new(vec!["delta", "sup_value", "raw_sup_value"]);
            for ((d, s), r) in est.delta_grid.iter().zip(&est.sup_values).zip(&est.raw_sup_values) {
                table.push(vec![num(*d), num(*s), num(*r)]);
            }
            OpOutput {
                result: to_value(&est),
                table,
            }
        }
        Operation::Theorem12 { pairs } => {
            let report = theorem12_check(system(), pairs, seq, indices, tol).map_err(rt)?;
            let mut table = Table::new(vec![
                "pair",
                "n",
                "set_size",
                "w_product",
                "diagonal_cost",
                "violation_upper",
                "w_marginal_1",
                "w_marginal_2",
                "mean_distance_1",
                "mean_distance_2",
                "violation_lower",
            ]);
            for r in &report.rows {
                table.push(vec![
                    r.pair.to_string(),
                    r.n.to_string(),
                    r.set_size.to_string(),
                    num(r.w_product),
                    num(r.diagonal_cost),
                    num(r.violation_upper),
                    num(r.w_marginal[0]),
                    num(r.w_marginal[1]),
                    num(r.mean_distance[0]),
                    num(r.mean_distance[1]),
                    num(r.violation_lower),
                ]);
            }
            let points: Vec<[String; 4]> = pairs
                .iter()
                .map(|p| [p.x1.to_string(), p.y1.to_string(), p.x2.to_string(), p.y2.to_string()])
                .collect();
            let mut result = to_value(&report);
            result["pairs"] = to_value(&points);
            OpOutput { result, table }
        }
        Operation::UniqueErgodicity { points, params } => {
            let sys = system().as_ref();
            let family = ObservableFamily::for_space(sys.space());
            let report = unique_ergodicity_diagnostic(
                sys,
                points,
                seq,
                params.n,
                &family,
                params.rho_terms,
                params.threshold,
                tol,
            )
            .map_err(rt)?;
            let mut table = Table::new(vec!["left", "right", "wasserstein", "rho", "rho_upper"]);
            for p in &report.pairs {
                table.push(vec![
                    p.left.to_string(),
                    p.right.to_string(),
                    num(p.wasserstein),
                    num(p.rho),
                    num(p.rho_upper),
                ]);
            }
            let mut result = to_value(&report);
            result["points"] = to_value(&points.iter().map(ToString::to_string).collect::<Vec<_>>());
            OpOutput { result, table }
        }
        Operation::GenericTrace { x, rho_terms } => {
            let sys = system().as_ref();
            let family = ObservableFamily::for_space(sys.space());
            let trace = generic_measure_trace(sys, x, seq, indices, &family, *rho_terms).map_err(rt)?;
            let mut table = Table::new(vec!["n", "leading_integral", "rho_to_previous"]);
            for (k, n) in trace.indices.iter().enumerate() {
                let rho = if k == 0 {
                    String::new()
                } else {
                    num(trace.consecutive_rho[k - 1])
                };
                table.push(vec![n.to_string(), num(trace.leading_integrals[k]), rho]);
            }
            OpOutput {
                result: to_value(&trace),
                table,
            }
        }
        Operation::Continuity { grid, n, rho_terms } => {
            let sys = system().as_ref();
            let family = ObservableFamily::for_space(sys.space());
            let report = measure_map_continuity_diagnostic(sys, grid, seq, *n, &family, *rho_terms, tol).map_err(rt)?;
            let mut table = Table::new(vec!["left", "right", "distance", "rho"]);
            for r in &report.rows {
                table.push(vec![
                    r.left.to_string(),
                    r.right.to_string(),
                    num(r.distance),
                    num(r.rho),
                ]);
            }
            OpOutput {
                result: to_value(&report),
                table,
            }
        }
        Operation::UniformConvergence {
            observable,
            grid,
            index_pairs,
        } => {
            let report = uniform_convergence_diagnostic(system().as_ref(), &observable.build(), grid, seq, index_pairs)
                .map_err(rt)?;
            let mut table = Table::new(vec!["n", "m", "sup_difference", "argmax"]);
            for r in &report.rows {
                table.push(vec![
                    r.n.to_string(),
                    r.m.to_string(),
                    num(r.sup_difference),
                    r.argmax.to_string(),
                ]);
            }
            OpOutput {
                result: to_value(&report),
                table,
            }
        }
        Operation::Temperedness { upto } => {
            let report = temperedness_report(seq, *upto).map_err(rt)?;
            let mut table = Table::new(vec!["n", "ratio", "value"]);
            for (n, r) in report.indices.iter().zip(&report.ratios) {
                table.push(vec![n.to_string(), ratio_string(*r), num(ratio_value(*r))]);
            }
            OpOutput {
                result: json!({
                    "indices": report.indices,
                    "ratios": report.ratios.iter().map(|r| ratio_string(*r)).collect::<Vec<_>>(),
                    "constant": ratio_string(report.constant),
                    "constant_value": ratio_value(report.constant),
                }),
                table,
            }
        }
        Operation::Defect { generators, side } => {
            let sides: &[&str] = match side {
                DefectSide::Left => &["left"],
                DefectSide::Right => &["right"],
                DefectSide::Both => &["left", "right"],
            };
            let mut table = Table::new(vec!["n", "generator", "side", "defect", "value"]);
            let mut rows = Vec::new();
            for &n in indices {
                let set = seq.set(n).map_err(rt)?;
                for g in generators {
                    for &s in sides {
                        let d = if s == "left" {
                            folner_defect_left(&set, g)
                        } else {
                            folner_defect_right(&set, g)
                        }
                        .map_err(rt)?;
                        let gen = coords_string(g.coords());
                        table.push(vec![
                            n.to_string(),
                            gen.clone(),
                            s.to_string(),
                            ratio_string(d),
                            num(ratio_value(d)),
                        ]);
                        rows.push(json!({"n": n, "generator": g.coords(), "side": s, "defect": ratio_string(d), "value": ratio_value(d)}));
                    }
                }
            }
            OpOutput {
                result: json!({ "rows": rows }),
                table,
            }
        }
        Operation::Extract {
            constant,
            count,
            budget_factor,
        } => {
            let picks = extract_tempered_subsequence_with_budget(seq, *constant, *count, *budget_factor).map_err(rt)?;
            let mut table = Table::new(vec!["step", "index"]);
            for (k, n) in picks.iter().enumerate() {
                table.push(vec![(k + 1).to_string(), n.to_string()]);
            }
            OpOutput {
                result: json!({"constant": ratio_string(*constant), "indices": picks}),
                table,
            }
        }
    })
}
