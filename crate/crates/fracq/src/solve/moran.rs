//! Per-level Moran dimensions d_{k,r}: roots of
//! sum_{sigma in Omega_k} (p_sigma c_sigma^r)^{d/(d+r)} = 1.
//!
//! The sum factorizes over levels, so each evaluation is a product of
//! per-level power sums computed in the log domain; the cardinality of
//! Omega_k never needs to be enumerated. Whether the running extremes
//! identify the upper/lower quantization dimension is open, so they are
//! labeled conjectural diagnostics and asserted nowhere.

use super::bisect::{bisect_decreasing, Bracket};
use super::{equation_terms, t_to_dimension};
use crate::error::SolveError;
use crate::measure::MultiscaleSpec;
use serde::Serialize;

/// One construction level: probability and ratio vectors of equal length.
#[derive(Debug, Clone, Serialize)]
pub struct MoranLevel {
    pub probs: Vec<f64>,
    pub ratios: Vec<f64>,
}

/// Hard cap on the number of levels solved in one call.
pub const LEVEL_CAP: usize = 100_000;

#[derive(Debug, Clone, Serialize)]
pub struct MoranSequence {
    pub r: f64,
    /// d_{k,r} for k = 1..=k_max.
    pub values: Vec<f64>,
    pub max_residual: f64,
    /// Running extremes over the tail half of the horizon: finite-horizon
    /// proxies only, never the limits themselves.
    pub limsup_proxy: f64,
    pub liminf_proxy: f64,
    pub horizon: usize,
    pub note: String,
}

/// Level data induced by a multiscale spec along its pattern sequence.
pub fn levels_from_multiscale(spec: &MultiscaleSpec, k_max: usize) -> Vec<MoranLevel> {
    spec.omega_prefix(k_max)
        .into_iter()
        .map(|pat| MoranLevel {
            probs: spec.patterns[pat].probs.clone(),
            ratios: spec.patterns[pat].contractions.clone(),
        })
        .collect()
}

pub fn moran_dkr_sequence(
    levels: &[MoranLevel],
    r: f64,
    k_max: usize,
) -> Result<MoranSequence, SolveError> {
    if k_max == 0 || k_max > levels.len() || k_max > LEVEL_CAP {
        return Err(SolveError::LevelCapExceeded {
            requested: k_max,
            available: levels.len().min(LEVEL_CAP),
        });
    }
    let term_lists: Vec<Vec<f64>> = levels[..k_max]
        .iter()
        .map(|lvl| equation_terms(&lvl.probs, &lvl.ratios, r))
        .collect();
    let mut values = Vec::with_capacity(k_max);
    let mut max_residual: f64 = 0.0;
    for k in 1..=k_max {
        let lists = &term_lists[..k];
        let f = |t: f64| -> f64 {
            lists
                .iter()
                .map(|terms| terms.iter().map(|&x| x.powf(t)).sum::<f64>().ln())
                .sum()
        };
        let root = match bisect_decreasing(f, 0.0) {
            Bracket::Root(root) => root,
            Bracket::BelowTarget => return Err(SolveError::NoRoot { side: "below" }),
            Bracket::AboveTarget => return Err(SolveError::NoRoot { side: "above" }),
        };
        let d = t_to_dimension(root.t, r);
        max_residual = max_residual.max(f(d / (d + r)).abs());
        values.push(d);
    }
    let tail_start = k_max / 2;
    let tail = &values[tail_start..];
    Ok(MoranSequence {
        r,
        limsup_proxy: tail.iter().cloned().fold(f64::NEG_INFINITY, f64::max),
        liminf_proxy: tail.iter().cloned().fold(f64::INFINITY, f64::min),
        values,
        max_residual,
        horizon: k_max,
        note: "conjectural diagnostics: finite-horizon proxies for the limsup/liminf".to_string(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solve::self_similar::solve_power_sum;

    fn cantor_level() -> MoranLevel {
        MoranLevel { probs: vec![0.5, 0.5], ratios: vec![1.0 / 3.0, 1.0 / 3.0] }
    }

    #[test]
    fn constant_levels_stay_at_cantor_dimension() {
        let levels = vec![cantor_level(); 12];
        let seq = moran_dkr_sequence(&levels, 1.0, 12).unwrap();
        let expect = 2f64.ln() / 3f64.ln();
        for v in &seq.values {
            assert!((v - expect).abs() < 1e-12);
        }
        assert!(seq.max_residual < 1e-12);
        assert!((seq.limsup_proxy - expect).abs() < 1e-12);
    }

    #[test]
    fn first_level_matches_power_sum_equation() {
        let lvl = MoranLevel { probs: vec![0.3, 0.7], ratios: vec![0.25, 0.2] };
        let seq = moran_dkr_sequence(&[lvl.clone()], 1.5, 1).unwrap();
        let flat = solve_power_sum("self-similar", &lvl.probs, &lvl.ratios, 1.5).unwrap();
        assert!((seq.values[0] - flat.value).abs() < 1e-12);
    }

    #[test]
    fn alternating_levels_oscillate_and_match_secant_oracle() {
        let a = MoranLevel { probs: vec![0.5, 0.5], ratios: vec![0.3, 0.3] };
        let b = MoranLevel { probs: vec![0.2, 0.8], ratios: vec![0.25, 0.2] };
        let levels: Vec<MoranLevel> = (0..10)
            .map(|k| if k % 2 == 0 { a.clone() } else { b.clone() })
            .collect();
        let r = 1.0;
        let seq = moran_dkr_sequence(&levels, r, 10).unwrap();
        assert!(seq.limsup_proxy > seq.liminf_proxy);

        // independent secant oracle per k
        for (ki, &d) in seq.values.iter().enumerate() {
            let k = ki + 1;
            let f = |t: f64| -> f64 {
                (0..k)
                    .map(|l| {
                        let lvl = if l % 2 == 0 { &a } else { &b };
                        lvl.probs
                            .iter()
                            .zip(&lvl.ratios)
                            .map(|(&p, &c)| (p * c.powf(r)).powf(t))
                            .sum::<f64>()
                            .ln()
                    })
                    .sum()
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
            assert!((d - oracle).abs() < 1e-10, "k={k}: {d} vs {oracle}");
        }
    }

    #[test]
    fn cap_errors() {
        let levels = vec![cantor_level(); 3];
        assert!(matches!(
            moran_dkr_sequence(&levels, 1.0, 4),
            Err(SolveError::LevelCapExceeded { requested: 4, available: 3 })
        ));
        assert!(moran_dkr_sequence(&levels, 1.0, 0).is_err());
    }
}
