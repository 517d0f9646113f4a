//! Dimension of carpet measures: the unique s_r with
//!   (sum_G (p_ij m^-r)^t)^theta * (sum_{rows} (q_j m^-r)^t)^(1-theta) = 1,
//! t = s_r/(s_r+r), theta = log m / log n, plus the structural conditions
//! (A)/(B) that guarantee positive finite quantization coefficients.

use super::bisect::{bisect_decreasing, Bracket};
use super::{t_to_dimension, DimensionReport, EQUALITY_TOL};
use crate::error::SolveError;
use crate::measure::CarpetSpec;
use serde::Serialize;

#[derive(Debug, Clone, Serialize)]
pub struct CarpetSolution {
    pub report: DimensionReport,
    pub theta: f64,
    /// Occupied rows with their masses q_j.
    pub rows: Vec<RowMass>,
}

#[derive(Debug, Clone, Serialize)]
pub struct RowMass {
    pub row: u32,
    pub mass: f64,
}

fn sorted_powers(values: &[f64]) -> Vec<f64> {
    let mut v = values.to_vec();
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    v
}

/// Log-domain left side of the defining equation, strictly decreasing in t.
fn log_equation(cell_terms: &[f64], row_terms: &[f64], theta: f64, t: f64) -> f64 {
    let a: f64 = cell_terms.iter().map(|&x| x.powf(t)).sum();
    let b: f64 = row_terms.iter().map(|&x| x.powf(t)).sum();
    theta * a.ln() + (1.0 - theta) * b.ln()
}

pub fn solve_carpet(spec: &CarpetSpec, r: f64) -> Result<CarpetSolution, SolveError> {
    let theta = spec.theta();
    let m_pow = (spec.m as f64).powf(-r);
    let cell_terms = sorted_powers(
        &spec.probs.iter().map(|&p| p * m_pow).collect::<Vec<_>>(),
    );
    let rows = spec.rows();
    let row_masses: Vec<f64> = rows.iter().map(|&j| spec.row_mass(j)).collect();
    let row_terms = sorted_powers(
        &row_masses.iter().map(|&q| q * m_pow).collect::<Vec<_>>(),
    );

    let root = match bisect_decreasing(|t| log_equation(&cell_terms, &row_terms, theta, t), 0.0) {
        Bracket::Root(root) => root,
        Bracket::BelowTarget => return Err(SolveError::NoRoot { side: "below" }),
        Bracket::AboveTarget => return Err(SolveError::NoRoot { side: "above" }),
    };
    let value = t_to_dimension(root.t, r);
    let residual = log_equation(&cell_terms, &row_terms, theta, value / (value + r))
        .abs();
    let report = DimensionReport::plain("carpet", r, value, residual, root.iterations);
    Ok(CarpetSolution {
        report,
        theta,
        rows: rows
            .iter()
            .zip(&row_masses)
            .map(|(&row, &mass)| RowMass { row, mass })
            .collect(),
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct CarpetConditions {
    pub order: f64,
    pub dimension: f64,
    /// Per-row values of sum_{i in row j} (p_ij / q_j)^{s/(s+r)}.
    pub row_sums: Vec<f64>,
    pub condition_a: bool,
    pub row_masses: Vec<f64>,
    pub condition_b: bool,
    /// Whether either condition certifies positive finite coefficients.
    pub coefficients_guaranteed: bool,
    pub statement: String,
}

/// Evaluate conditions (A) and (B) at an already-solved dimension value.
pub fn carpet_conditions(spec: &CarpetSpec, r: f64, dimension: f64) -> CarpetConditions {
    let t = dimension / (dimension + r);
    let rows = spec.rows();
    let mut row_sums = Vec::with_capacity(rows.len());
    let mut row_masses = Vec::with_capacity(rows.len());
    for &j in &rows {
        let q = spec.row_mass(j);
        row_masses.push(q);
        let sum: f64 = spec
            .digits
            .iter()
            .zip(&spec.probs)
            .filter(|(&(_, dj), _)| dj == j)
            .map(|(_, &p)| (p / q).powf(t))
            .sum();
        row_sums.push(sum);
    }
    let spread = |v: &[f64]| {
        let max = v.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let min = v.iter().cloned().fold(f64::INFINITY, f64::min);
        max - min
    };
    let condition_a = spread(&row_sums) < EQUALITY_TOL;
    let condition_b = spread(&row_masses) < EQUALITY_TOL;
    let coefficients_guaranteed = condition_a || condition_b;
    let statement = if coefficients_guaranteed {
        "upper and lower coefficients positive and finite".to_string()
    } else {
        "neither condition holds; coefficient finiteness undecided".to_string()
    };
    CarpetConditions {
        order: r,
        dimension,
        row_sums,
        condition_a,
        row_masses,
        condition_b,
        coefficients_guaranteed,
        statement,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solve::self_similar::solve_power_sum;

    #[test]
    fn full_uniform_grid_has_dimension_two() {
        for (n, m) in [(2u32, 2u32), (3, 2), (4, 3), (5, 5)] {
            let spec = CarpetSpec::full_grid(n, m);
            for r in [0.5, 1.0, 2.0] {
                let sol = solve_carpet(&spec, r).unwrap();
                assert!(
                    (sol.report.value - 2.0).abs() < 1e-10,
                    "n={n} m={m} r={r}: {}",
                    sol.report.value
                );
                assert!(sol.report.residual < 1e-12);
            }
        }
    }

    #[test]
    fn square_grid_reduces_to_self_similar() {
        // theta = 1: the equation collapses to the power-sum equation with
        // equal ratios 1/m
        let spec = CarpetSpec {
            n: 3,
            m: 3,
            digits: vec![(0, 0), (1, 1), (2, 0), (0, 2)],
            probs: vec![0.1, 0.2, 0.3, 0.4],
        };
        let ratios = vec![1.0 / 3.0; 4];
        for r in [0.7, 1.0, 2.0] {
            let carpet = solve_carpet(&spec, r).unwrap();
            let flat = solve_power_sum("self-similar", &spec.probs, &ratios, r).unwrap();
            assert!((carpet.report.value - flat.value).abs() < 1e-10);
        }
    }

    #[test]
    fn cross_carpet_matches_secant_oracle() {
        let spec = CarpetSpec {
            n: 3,
            m: 2,
            digits: vec![(0, 0), (1, 1), (2, 0)],
            probs: vec![1.0 / 3.0; 3],
        };
        let r = 1.0;
        let sol = solve_carpet(&spec, r).unwrap();

        // independent secant iteration on the same display
        let theta = spec.theta();
        let m_pow = (spec.m as f64).powf(-r);
        let f = |t: f64| {
            let a: f64 = spec.probs.iter().map(|&p| (p * m_pow).powf(t)).sum();
            let q0 = spec.row_mass(0);
            let q1 = spec.row_mass(1);
            let b = (q0 * m_pow).powf(t) + (q1 * m_pow).powf(t);
            a.powf(theta) * b.powf(1.0 - theta) - 1.0
        };
        let (mut t0, mut t1) = (0.2, 0.8);
        let (mut f0, mut f1) = (f(t0), f(t1));
        for _ in 0..100 {
            let t2 = t1 - f1 * (t1 - t0) / (f1 - f0);
            t0 = t1;
            f0 = f1;
            t1 = t2;
            f1 = f(t1);
            if f1.abs() < 1e-15 {
                break;
            }
        }
        let oracle = r * t1 / (1.0 - t1);
        assert!((sol.report.value - oracle).abs() < 1e-10);
    }

    #[test]
    fn conditions_on_uniform_grid() {
        let spec = CarpetSpec::full_grid(3, 2);
        let sol = solve_carpet(&spec, 1.0).unwrap();
        let cond = carpet_conditions(&spec, 1.0, sol.report.value);
        assert!(cond.condition_a);
        assert!(cond.condition_b);
        assert!(cond.coefficients_guaranteed);
    }

    #[test]
    fn condition_b_follows_row_masses() {
        let digits = vec![(0u32, 0u32), (1, 0), (0, 1)];
        // balanced rows: q_0 = 1/2, q_1 = 1/2
        let spec = CarpetSpec { n: 2, m: 2, digits: digits.clone(), probs: vec![0.25, 0.25, 0.5] };
        let sol = solve_carpet(&spec, 1.0).unwrap();
        let cond = carpet_conditions(&spec, 1.0, sol.report.value);
        assert!(cond.condition_b);

        // unbalanced rows: q_0 = 3/4, q_1 = 1/4
        let spec = CarpetSpec { n: 2, m: 2, digits, probs: vec![0.5, 0.25, 0.25] };
        let sol = solve_carpet(&spec, 1.0).unwrap();
        let cond = carpet_conditions(&spec, 1.0, sol.report.value);
        assert!(!cond.condition_b);
        assert!((cond.row_masses[0] - 0.75).abs() < 1e-12);
        assert!((cond.row_masses[1] - 0.25).abs() < 1e-12);
    }
}
