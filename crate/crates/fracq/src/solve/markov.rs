//! Dimension of Markov-type measures: the unique s_r with
//! psi(A(s_r/(s_r+r))) = 1 for A(u) = ((p_ij c_ij^r)^u), together with the
//! per-component values over the strongly connected components and the
//! incomparability verdict that decides coefficient finiteness.

use super::bisect::{bisect_decreasing, Bracket};
use super::scc::{strongly_connected_components, SccDecomposition};
use super::spectral::{spectral_radius, Mat};
use super::{t_to_dimension, ComponentReport, DimensionReport, VerdictSet, EQUALITY_TOL};
use crate::error::SolveError;
use crate::measure::MarkovSpec;
use serde::Serialize;

#[derive(Debug, Clone, Serialize)]
pub struct MarkovSolution {
    pub report: DimensionReport,
    pub scc: SccDecomposition,
    /// Indices (into scc.components) of the critical set M.
    pub critical_set: Vec<usize>,
    pub critical_incomparable: bool,
}

/// Edge weights p_ij c_ij^r (zero where the transition vanishes).
fn edge_weights(spec: &MarkovSpec, r: f64) -> Mat {
    let n = spec.states();
    let mut data = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            if spec.transition[i][j] > 0.0 {
                data[i * n + j] = spec.transition[i][j] * spec.ratios[i][j].powf(r);
            }
        }
    }
    Mat::new(n, data)
}

fn entrywise_power(w: &Mat, t: f64) -> Mat {
    Mat::new(
        w.n,
        w.data.iter().map(|&x| if x > 0.0 { x.powf(t) } else { 0.0 }).collect(),
    )
}

/// psi(A(t)): spectral radius of the entrywise power of the edge weights.
pub fn psi_at(spec: &MarkovSpec, r: f64, t: f64) -> f64 {
    spectral_radius(&entrywise_power(&edge_weights(spec, r), t))
}

fn solve_block(w: &Mat) -> Option<(f64, f64, usize)> {
    match bisect_decreasing(|t| spectral_radius(&entrywise_power(w, t)), 1.0) {
        Bracket::Root(root) => {
            let residual = (spectral_radius(&entrywise_power(w, root.t)) - 1.0).abs();
            Some((root.t, residual, root.iterations))
        }
        // Spectral radius below 1 throughout (0,1): simple cycles and
        // singleton components. No positive root exists.
        _ => None,
    }
}

pub fn solve_markov(spec: &MarkovSpec, r: f64) -> Result<MarkovSolution, SolveError> {
    let weights = edge_weights(spec, r);
    let (t_star, residual, iterations) =
        solve_block(&weights).ok_or(SolveError::NoRoot { side: "below" })?;
    let value = t_to_dimension(t_star, r);

    let scc = strongly_connected_components(&weights.support());
    let mut components = Vec::with_capacity(scc.components.len());
    let mut critical_set = Vec::new();
    for (ci, comp) in scc.components.iter().enumerate() {
        let block = weights.principal(comp);
        let solved = solve_block(&block).map(|(t, res, _)| (t_to_dimension(t, r), res));
        let critical = solved
            .map(|(v, _)| (v - value).abs() < EQUALITY_TOL)
            .unwrap_or(false);
        if critical {
            critical_set.push(ci);
        }
        components.push(ComponentReport {
            states: comp.clone(),
            value: solved.map(|(v, _)| v),
            residual: solved.map(|(_, res)| res),
            critical,
        });
    }

    let mut critical_incomparable = true;
    for ai in 0..critical_set.len() {
        for bi in ai + 1..critical_set.len() {
            if scc.comparable(critical_set[ai], critical_set[bi]) {
                critical_incomparable = false;
            }
        }
    }

    let statement = if critical_incomparable {
        "critical components incomparable: upper coefficient finite, lower positive".to_string()
    } else {
        "critical components comparable: upper and lower coefficients infinite".to_string()
    };
    let verdicts = VerdictSet {
        statements: vec![statement],
        critical_incomparable: Some(critical_incomparable),
        upper_coefficient_finite: Some(critical_incomparable),
        lower_coefficient_positive: Some(true),
        ..VerdictSet::default()
    };

    let report = DimensionReport {
        family: "markov".to_string(),
        r,
        value,
        residual,
        iterations,
        components,
        verdicts,
        sequences: Vec::new(),
    };
    Ok(MarkovSolution { report, scc, critical_set, critical_incomparable })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solve::self_similar::solve_power_sum;

    fn rank_one(probs: &[f64], ratios: &[f64], gap: f64) -> MarkovSpec {
        let n = probs.len();
        MarkovSpec {
            transition: vec![probs.to_vec(); n],
            ratios: vec![ratios.to_vec(); n],
            initial: vec![1.0 / n as f64; n],
            gap,
        }
    }

    #[test]
    fn rank_one_reduces_to_self_similar() {
        let probs = [0.3, 0.45, 0.25];
        let ratios = [0.2, 0.25, 0.15];
        let spec = rank_one(&probs, &ratios, 0.2);
        for r in [0.5, 1.0, 2.0] {
            let markov = solve_markov(&spec, r).unwrap();
            let flat = solve_power_sum("self-similar", &probs, &ratios, r).unwrap();
            assert!(
                (markov.report.value - flat.value).abs() < 1e-10,
                "r={r}: {} vs {}",
                markov.report.value,
                flat.value
            );
            assert!(markov.report.residual < 1e-12);
        }
    }

    #[test]
    fn two_state_uniform_is_cantor_like() {
        let spec = MarkovSpec {
            transition: vec![vec![0.5, 0.5]; 2],
            ratios: vec![vec![1.0 / 3.0; 2]; 2],
            initial: vec![0.5, 0.5],
            gap: 1.0 / 3.0,
        };
        let expect = 2f64.ln() / 3f64.ln();
        for r in [0.5, 1.0, 2.0] {
            let markov = solve_markov(&spec, r).unwrap();
            assert!((markov.report.value - expect).abs() < 1e-10);
        }
    }

    #[test]
    fn psi_strictly_decreasing_in_s() {
        let spec = rank_one(&[0.4, 0.6], &[0.3, 0.2], 0.3);
        let r = 1.0;
        let mut prev = f64::INFINITY;
        for i in 1..=100 {
            let s = i as f64 * 0.05;
            let v = psi_at(&spec, r, s / (s + r));
            assert!(v < prev, "psi not strictly decreasing at s={s}");
            prev = v;
        }
    }

    #[test]
    fn component_values_dominated_by_global() {
        // two closed blocks with different weights plus a bridge
        let eps = 1e-3;
        let spec = MarkovSpec {
            transition: vec![
                vec![0.5, 0.5, 0.0, 0.0],
                vec![(1.0 - eps) / 2.0, (1.0 - eps) / 2.0, eps, 0.0],
                vec![0.0, 0.0, 0.5, 0.5],
                vec![0.0, 0.0, 0.5, 0.5],
            ],
            ratios: vec![
                vec![0.25, 0.25, 0.25, 0.25],
                vec![0.25, 0.25, 0.25, 0.25],
                vec![0.0, 0.0, 0.2, 0.2],
                vec![0.0, 0.0, 0.2, 0.2],
            ],
            initial: vec![0.25; 4],
            gap: 0.2,
        };
        let sol = solve_markov(&spec, 1.0).unwrap();
        for comp in &sol.report.components {
            if let Some(v) = comp.value {
                assert!(sol.report.value >= v - 1e-9);
            }
        }
        assert!(!sol.critical_set.is_empty());
    }
}
