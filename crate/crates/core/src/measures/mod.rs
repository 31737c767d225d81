//! Uniform atomic measures along Følner sets, integration, Birkhoff
//! averages and the weak-* metric `ρ`.

mod observable;

use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;

pub use observable::{Observable, ObservableFamily, Phase};

use crate::dynamics::{orbit_sample, GSystem, SystemPoint};
use crate::error::{check_tolerance, Error, Result};
use crate::group::FiniteSubset;
use crate::numeric::pairwise_sum;

/// Default truncation for `ρ`; the tail is at most `2^{-39}`.
pub const DEFAULT_RHO_TERMS: usize = 40;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MeasureOrigin {
    pub point: String,
    pub set: String,
}

/// `μ = (1/n) Σ δ_{atom}`. Weights are implicit: the atom count is the
/// denominator, materialized only when integrating.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalMeasure {
    system: String,
    atoms: Vec<SystemPoint>,
    origin: Option<MeasureOrigin>,
}

impl EmpiricalMeasure {
    pub fn from_atoms(system_id: impl Into<String>, atoms: Vec<SystemPoint>) -> Result<Self> {
        if atoms.is_empty() {
            return Err(Error::EmptySubset);
        }
        Ok(EmpiricalMeasure {
            system: system_id.into(),
            atoms,
            origin: None,
        })
    }

    pub fn system_id(&self) -> &str {
        &self.system
    }

    pub fn atoms(&self) -> &[SystemPoint] {
        &self.atoms
    }

    pub fn count(&self) -> usize {
        self.atoms.len()
    }

    pub fn weight(&self) -> f64 {
        1.0 / self.atoms.len() as f64
    }

    pub fn origin(&self) -> Option<&MeasureOrigin> {
        self.origin.as_ref()
    }

    pub(crate) fn check_same_space(&self, other: &EmpiricalMeasure) -> Result<()> {
        if self.system == other.system {
            Ok(())
        } else {
            Err(Error::SpaceMismatch {
                left: self.system.clone(),
                right: other.system.clone(),
            })
        }
    }

    /// Writes `index, x0, x1, …, weight` rows.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let width = self.atoms.iter().map(|a| a.coordinates().len()).max().unwrap_or(0);
        let mut w = csv::Writer::from_writer(out);
        let mut header = vec!["index".to_string()];
        header.extend((0..width).map(|k| format!("x{k}")));
        header.push("weight".into());
        w.write_record(&header)?;
        let weight = self.weight().to_string();
        for (i, atom) in self.atoms.iter().enumerate() {
            let mut row = vec![i.to_string()];
            let coords = atom.coordinates();
            row.extend((0..width).map(|k| coords.get(k).map(f64::to_string).unwrap_or_default()));
            row.push(weight.clone());
            w.write_record(&row)?;
        }
        w.flush()?;
        Ok(())
    }
}

/// `μ_{x,F} = (1/|F|) Σ_{g∈F} δ_{gx}`.
pub fn empirical_measure(sys: &dyn GSystem, x: &SystemPoint, set: &FiniteSubset) -> Result<EmpiricalMeasure> {
    if set.is_empty() {
        return Err(Error::EmptySubset);
    }
    let atoms = orbit_sample(sys, x, set)?;
    Ok(EmpiricalMeasure {
        system: sys.id(),
        atoms,
        origin: Some(MeasureOrigin {
            point: x.to_string(),
            set: format!("{} elements of {}", set.len(), set.group()),
        }),
    })
}

/// `∫ f dμ`. Observables evaluate in closed form to float precision, which
/// is well inside any admissible `tol`.
pub fn integrate(mu: &EmpiricalMeasure, f: &Observable, tol: f64) -> Result<f64> {
    check_tolerance(tol)?;
    let values = mu.atoms.par_iter().map(|a| f.eval(a)).collect::<Result<Vec<f64>>>()?;
    Ok(pairwise_sum(&values) / values.len() as f64)
}

/// `(1/|F|) Σ_{g∈F} f(gx)`.
pub fn birkhoff_average(sys: &dyn GSystem, f: &Observable, x: &SystemPoint, set: &FiniteSubset) -> Result<f64> {
    integrate(&empirical_measure(sys, x, set)?, f, 1e-9)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MeasureDistanceResult {
    /// Partial sum over the first `terms_used` observables; a lower bound.
    pub value: f64,
    /// `value + tail_bound` is an upper bound.
    pub tail_bound: f64,
    pub terms_used: usize,
}

impl MeasureDistanceResult {
    pub fn upper(&self) -> f64 {
        self.value + self.tail_bound
    }
}

/// `ρ(μ, ν) = Σ_i |∫f_i dμ − ∫f_i dν| / (2^i (‖f_i‖ + 1))`, truncated after `terms` terms.
pub fn rho_distance(
    mu: &EmpiricalMeasure,
    nu: &EmpiricalMeasure,
    family: &ObservableFamily,
    terms: usize,
) -> Result<MeasureDistanceResult> {
    if terms == 0 {
        return Err(Error::InvalidParameter("rho needs at least one term".into()));
    }
    mu.check_same_space(nu)?;
    let mut value = 0.0;
    let mut scale = 1.0;
    for i in 1..=terms {
        scale *= 0.5;
        let f = family.observable(i);
        let diff = (integrate(mu, &f, 1e-9)? - integrate(nu, &f, 1e-9)?).abs();
        value += scale * diff / (f.sup_norm() + 1.0);
    }
    Ok(MeasureDistanceResult {
        value,
        tail_bound: 2f64.powi(1 - terms as i32),
        terms_used: terms,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{CircleRotation, FullShift, RotationNumber, Space, SymbolicPoint};
    use crate::group::FiniteSubset;

    #[test]
    fn identity_set_gives_dirac() {
        let sys = CircleRotation::rotation(RotationNumber::GOLDEN);
        let x = SystemPoint::circle(0.3);
        let mu = empirical_measure(&sys, &x, &FiniteSubset::z_range(0, 0)).unwrap();
        assert_eq!(mu.atoms(), &[x]);
        assert_eq!(mu.weight(), 1.0);
    }

    #[test]
    fn half_rotation_alternates() {
        let sys = CircleRotation::rotation(RotationNumber::from_f64(0.5));
        let mu = empirical_measure(&sys, &SystemPoint::circle(0.0), &FiniteSubset::z_range(0, 3)).unwrap();
        let xs: Vec<f64> = mu.atoms().iter().map(|a| a.coordinates()[0]).collect();
        assert_eq!(xs, vec![0.0, 0.5, 0.0, 0.5]);
        assert_eq!(mu.weight(), 0.25);
    }

    #[test]
    fn fixed_point_of_shift() {
        let sys = FullShift::new();
        let x = SystemPoint::Symbolic(SymbolicPoint::constant(0));
        let mu = empirical_measure(&sys, &x, &FiniteSubset::z_range(-3, 3)).unwrap();
        assert!(mu.atoms().iter().all(|a| a == &x));
    }

    #[test]
    fn constant_integrates_to_itself() {
        let sys = CircleRotation::rotation(RotationNumber::GOLDEN);
        let mu = empirical_measure(&sys, &SystemPoint::circle(0.1), &FiniteSubset::z_range(0, 99)).unwrap();
        assert_eq!(integrate(&mu, &Observable::Constant(2.5), 1e-9).unwrap(), 2.5);
        assert!(integrate(&mu, &Observable::Constant(1.0), 0.0).is_err());
    }

    #[test]
    fn rho_basics() {
        let sys = CircleRotation::rotation(RotationNumber::GOLDEN);
        let fam = ObservableFamily::for_space(Space::Circle);
        let mu = empirical_measure(&sys, &SystemPoint::circle(0.1), &FiniteSubset::z_range(0, 49)).unwrap();
        let nu = empirical_measure(&sys, &SystemPoint::circle(0.7), &FiniteSubset::z_range(0, 49)).unwrap();
        assert_eq!(rho_distance(&mu, &mu, &fam, 40).unwrap().value, 0.0);
        let a = rho_distance(&mu, &nu, &fam, 40).unwrap();
        let b = rho_distance(&nu, &mu, &fam, 40).unwrap();
        assert_eq!(a.value, b.value);
        assert_eq!(a.tail_bound, 2f64.powi(-39));
        assert!(rho_distance(&mu, &nu, &fam, 0).is_err());

        let other = EmpiricalMeasure::from_atoms("elsewhere", vec![SystemPoint::circle(0.0)]).unwrap();
        assert!(matches!(
            rho_distance(&mu, &other, &fam, 5),
            Err(Error::SpaceMismatch { .. })
        ));
    }

    #[test]
    fn csv_export() {
        let mu = EmpiricalMeasure::from_atoms("s", vec![SystemPoint::circle(0.5), SystemPoint::circle(0.25)]).unwrap();
        let mut buf = Vec::new();
        mu.write_csv(&mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "index,x0,weight\n0,0.5,0.5\n1,0.25,0.5\n"
        );
    }
}
