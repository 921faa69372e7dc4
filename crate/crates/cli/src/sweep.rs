//! Parameter sweeps written as CSV.

use std::fmt::Write as _;
use std::path::Path;

use rayon::prelude::*;

use geophase::{unwrap_sequence, Analytic, PhaseError, Result};

use crate::args::{SweptParam, Target};
use crate::format::fmt_num;
use crate::point::{evaluate, Bindings, Point, Row};

pub const HEADER: &str = "swept_value,chi,delta,gamma,gamma_mod_2pi,overlap_abs";

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRequest {
    pub target: Target,
    pub param: SweptParam,
    pub start: f64,
    pub end: f64,
    pub steps: usize,
    pub unwrap: bool,
    pub fixed: Bindings,
}

/// A grid point that produced no (or only partial) output.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepWarning {
    pub index: usize,
    pub value: f64,
    pub error: PhaseError,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepOutput {
    pub csv: String,
    pub warnings: Vec<SweepWarning>,
}

impl SweepRequest {
    pub fn validate(&self) -> Result<()> {
        if !(self.start.is_finite() && self.end.is_finite()) {
            return Err(PhaseError::InvalidArgument("sweep range must be finite".into()));
        }
        if self.start > self.end {
            return Err(PhaseError::InvalidArgument(format!(
                "sweep start {} exceeds end {}",
                self.start, self.end
            )));
        }
        if self.steps < 2 {
            return Err(PhaseError::InvalidArgument(format!(
                "steps must be at least 2, got {}",
                self.steps
            )));
        }
        if self.target == Target::Single
            && matches!(self.param, SweptParam::Theta | SweptParam::Varphi | SweptParam::RhoMu)
        {
            return Err(PhaseError::InvalidArgument(
                "the single target only depends on tau and rho_alpha".into(),
            ));
        }
        Ok(())
    }

    /// Grid value `i`; the last point is exactly `end`.
    pub fn value(&self, i: usize) -> f64 {
        if i + 1 == self.steps {
            self.end
        } else {
            self.start + (self.end - self.start) * i as f64 / (self.steps - 1) as f64
        }
    }

    pub fn bindings(&self, value: f64) -> Bindings {
        let mut b = self.fixed;
        match self.param {
            SweptParam::Tau => b.tau = value,
            SweptParam::Theta => b.theta = value,
            SweptParam::Varphi => b.varphi = value,
            SweptParam::RhoAlpha => b.rho_alpha = value,
            SweptParam::RhoMu => b.rho_mu = value,
        }
        b
    }

    /// Validate every grid point before evaluating any of them.
    pub fn points(&self) -> Result<Vec<(f64, Point)>> {
        self.validate()?;
        (0..self.steps)
            .map(|i| {
                let v = self.value(i);
                Ok((v, Point::build(self.target, &self.bindings(v))?))
            })
            .collect()
    }
}

fn field(x: Option<f64>) -> String {
    x.map(fmt_num).unwrap_or_default()
}

/// Evaluate the sweep (grid points in parallel) and render the CSV.
pub fn run_sweep(analytic: &Analytic, request: &SweepRequest) -> Result<SweepOutput> {
    let points = request.points()?;
    let rows: Vec<(Row, Option<PhaseError>)> =
        points.par_iter().map(|(_, p)| evaluate(analytic, p)).collect();

    let unwrapped = if request.unwrap {
        Some(unwrap_defined(rows.iter().map(|(r, _)| r.gamma))?)
    } else {
        None
    };

    let mut csv = String::from(HEADER);
    if request.unwrap {
        csv.push_str(",gamma_unwrapped");
    }
    csv.push('\n');
    let mut warnings = Vec::new();
    for (i, ((value, _), (row, err))) in points.iter().zip(&rows).enumerate() {
        write!(
            csv,
            "{},{},{},{},{},{}",
            fmt_num(*value),
            field(row.chi),
            field(row.delta),
            field(row.gamma),
            field(row.gamma_mod_2pi),
            field(row.overlap_abs)
        )
        .expect("writing to a String cannot fail");
        if let Some(u) = &unwrapped {
            csv.push(',');
            csv.push_str(&field(u[i]));
        }
        csv.push('\n');
        if let Some(error) = err {
            warnings.push(SweepWarning {
                index: i,
                value: *value,
                error: error.clone(),
            });
        }
    }
    Ok(SweepOutput { csv, warnings })
}

/// Unwrap the defined entries as one sequence, leaving gaps in place.
fn unwrap_defined(gammas: impl Iterator<Item = Option<f64>>) -> Result<Vec<Option<f64>>> {
    let gammas: Vec<Option<f64>> = gammas.collect();
    let defined: Vec<f64> = gammas.iter().flatten().copied().collect();
    if defined.is_empty() {
        return Ok(gammas);
    }
    let mut unwrapped = unwrap_sequence(&defined)?.into_iter();
    Ok(gammas.iter().map(|g| g.and_then(|_| unwrapped.next())).collect())
}

pub fn write_csv(path: &Path, csv: &str) -> std::io::Result<()> {
    std::fs::write(path, csv)
}
