//! Validation report plumbing shared by the four measure families.

use crate::error::MeasureError;
use serde::Serialize;

/// Tolerance for probability-vector and matrix-row sums.
pub const SUM_TOL: f64 = 1e-12;
/// Tolerance for orthogonality defects and exact geometric identities.
pub const GEOM_TOL: f64 = 1e-12;

/// One validated invariant: name, verdict, and the worst margin observed.
/// Positive margins mean slack; failures carry the typed error.
#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub margin: f64,
    pub detail: String,
    #[serde(skip)]
    pub(crate) error: Option<MeasureError>,
}

impl Check {
    pub fn pass(name: &str, margin: f64, detail: impl Into<String>) -> Self {
        Check { name: name.to_string(), passed: true, margin, detail: detail.into(), error: None }
    }

    pub fn fail(name: &str, margin: f64, detail: impl Into<String>, error: MeasureError) -> Self {
        Check {
            name: name.to_string(),
            passed: false,
            margin,
            detail: detail.into(),
            error: Some(error),
        }
    }

    pub fn gated(name: &str, margin: f64, detail: impl Into<String>, error: MeasureError) -> Self {
        if margin >= 0.0 {
            Check::pass(name, margin, detail)
        } else {
            Check::fail(name, margin, detail, error)
        }
    }
}

/// Outcome of validating a measure spec. Downstream construction is refused
/// unless every check passed.
#[derive(Debug, Clone, Serialize)]
pub struct ValidationReport {
    pub checks: Vec<Check>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn worst_margin(&self) -> f64 {
        self.checks.iter().map(|c| c.margin).fold(f64::INFINITY, f64::min)
    }

    pub fn first_error(&self) -> Option<&MeasureError> {
        self.checks.iter().find_map(|c| c.error.as_ref())
    }

    pub fn into_result(self) -> Result<(), MeasureError> {
        match self.checks.into_iter().find_map(|c| c.error) {
            Some(e) => Err(e),
            None => Ok(()),
        }
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// Common probability-vector checks: positivity and unit sum.
pub fn probability_vector_checks(name: &str, p: &[f64]) -> Vec<Check> {
    let mut out = Vec::new();
    let min = p.iter().cloned().fold(f64::INFINITY, f64::min);
    out.push(Check::gated(
        &format!("{name}-positive"),
        min - f64::MIN_POSITIVE,
        format!("min entry {min}"),
        MeasureError::ProbabilityInvalid {
            context: name.to_string(),
            detail: format!("non-positive entry {min}"),
        },
    ));
    let sum: f64 = p.iter().sum();
    out.push(Check::gated(
        &format!("{name}-sum"),
        SUM_TOL - (sum - 1.0).abs(),
        format!("sum {sum}"),
        MeasureError::ProbabilityInvalid {
            context: name.to_string(),
            detail: format!("sum {sum} differs from 1 beyond {SUM_TOL}"),
        },
    ));
    out
}
