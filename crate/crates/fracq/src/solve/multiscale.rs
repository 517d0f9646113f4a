//! Dimension of multiscale Moran measures: the chi-weighted limit equation
//!   prod_i (sum_j (p_ij g_ij^r)^t)^{chi_i} = 1,  t = s_r/(s_r+r),
//! the per-level roots s_{k,r} with exponents N_{k,i}, and the convergence
//! diagnostics k|s_{k,r} - s_r| that control coefficient finiteness.

use super::bisect::{bisect_decreasing, Bracket};
use super::{equation_terms, t_to_dimension, DimensionReport, SequenceEntry, VerdictSet};
use crate::error::SolveError;
use crate::measure::{MultiscaleSpec, PatternSequence};
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum G0Verdict {
    /// Eventually periodic sequence: deviations are exactly periodic, the
    /// supremum is computed over one prefix plus one period.
    Member,
    /// Deviations observed only over a finite horizon.
    Inconclusive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SignPattern {
    Equal,
    AboveOrEqual,
    BelowOrEqual,
    Mixed,
}

#[derive(Debug, Clone, Serialize)]
pub struct MultiscaleSolution {
    pub report: DimensionReport,
    pub g0: G0Verdict,
    /// sup_k |N_{k,i} - k chi_i| over the decided range (periodic) or the
    /// horizon (sampled).
    pub deviation_sup: f64,
    pub eventual_sign: SignPattern,
    /// min/max of k|s_{k,r} - s_r| over the tail half of the horizon.
    pub h_lower_proxy: f64,
    pub h_upper_proxy: f64,
    pub horizon: usize,
}

const SIGN_TOL: f64 = 1e-12;

fn solve_weighted(
    term_lists: &[Vec<f64>],
    weights: &[f64],
    r: f64,
) -> Result<(f64, f64, usize), SolveError> {
    let f = |t: f64| -> f64 {
        term_lists
            .iter()
            .zip(weights)
            .filter(|(_, &w)| w > 0.0)
            .map(|(terms, &w)| w * terms.iter().map(|&x| x.powf(t)).sum::<f64>().ln())
            .sum()
    };
    let root = match bisect_decreasing(f, 0.0) {
        Bracket::Root(root) => root,
        Bracket::BelowTarget => return Err(SolveError::NoRoot { side: "below" }),
        Bracket::AboveTarget => return Err(SolveError::NoRoot { side: "above" }),
    };
    let value = t_to_dimension(root.t, r);
    Ok((value, f(value / (value + r)).abs(), root.iterations))
}

pub fn solve_multiscale(
    spec: &MultiscaleSpec,
    r: f64,
    k_max: usize,
) -> Result<MultiscaleSolution, SolveError> {
    let m = spec.pattern_count();
    if k_max == 0 {
        return Err(SolveError::LevelCapExceeded { requested: 0, available: 1 });
    }

    // A declared frequency vector must match the periodic tail exactly.
    if let (Some(chi), Some(freq)) = (&spec.chi, spec.cycle_frequencies()) {
        let worst = chi
            .iter()
            .zip(&freq)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        if worst > 1e-9 {
            return Err(SolveError::FrequencyMismatch {
                detail: format!("worst deviation {worst:.3e}"),
            });
        }
    }

    let chi = spec.frequencies();
    let term_lists: Vec<Vec<f64>> = spec
        .patterns
        .iter()
        .map(|p| equation_terms(&p.probs, &p.contractions, r))
        .collect();

    let (value, residual, iterations) = solve_weighted(&term_lists, &chi, r)?;

    // Per-level roots along omega.
    let omega = spec.omega_prefix(k_max);
    let mut counts = vec![0.0f64; m];
    let mut sequences = Vec::with_capacity(k_max);
    for (ki, &pat) in omega.iter().enumerate() {
        counts[pat] += 1.0;
        let k = ki + 1;
        let (level_value, _, _) = solve_weighted(&term_lists, &counts, r)?;
        sequences.push(SequenceEntry {
            k,
            value: level_value,
            k_times_gap: k as f64 * (level_value - value).abs(),
        });
    }

    // G_0 membership.
    let (g0, deviation_sup) = match &spec.sequence {
        PatternSequence::Periodic { prefix, cycle } => {
            // Integer arithmetic: deviation of N_{k,i} from k * counts_i/P
            // is |N_{k,i} P - k counts_i| / P, exactly periodic beyond the
            // prefix, so the supremum over prefix + one period is global.
            let period = cycle.len() as i64;
            let mut cycle_counts = vec![0i64; m];
            for &i in cycle {
                cycle_counts[i] += 1;
            }
            let horizon = prefix.len() + cycle.len();
            let word = spec.omega_prefix(horizon);
            let mut n = vec![0i64; m];
            let mut sup = 0.0f64;
            for (ki, &pat) in word.iter().enumerate() {
                n[pat] += 1;
                let k = (ki + 1) as i64;
                for i in 0..m {
                    let dev = (n[i] * period - k * cycle_counts[i]).abs() as f64 / period as f64;
                    sup = sup.max(dev);
                }
            }
            (G0Verdict::Member, sup)
        }
        PatternSequence::Frequency { chi } => {
            let mut n = vec![0.0f64; m];
            let mut sup = 0.0f64;
            for (ki, &pat) in omega.iter().enumerate() {
                n[pat] += 1.0;
                let k = (ki + 1) as f64;
                for i in 0..m {
                    sup = sup.max((n[i] - k * chi[i]).abs());
                }
            }
            (G0Verdict::Inconclusive, sup)
        }
    };

    // Sign pattern and H proxies over the tail half.
    let tail_start = k_max / 2;
    let tail = &sequences[tail_start..];
    let mut all_above = true;
    let mut all_below = true;
    let mut h_lower = f64::INFINITY;
    let mut h_upper = f64::NEG_INFINITY;
    for entry in tail {
        let gap = entry.value - value;
        if gap < -SIGN_TOL {
            all_above = false;
        }
        if gap > SIGN_TOL {
            all_below = false;
        }
        h_lower = h_lower.min(entry.k_times_gap);
        h_upper = h_upper.max(entry.k_times_gap);
    }
    let eventual_sign = match (all_above, all_below) {
        (true, true) => SignPattern::Equal,
        (true, false) => SignPattern::AboveOrEqual,
        (false, true) => SignPattern::BelowOrEqual,
        (false, false) => SignPattern::Mixed,
    };

    let mut statements =
        vec!["dimension exists and is independent of the admissible sequence".to_string()];
    match g0 {
        G0Verdict::Member => statements.push(
            "bounded frequency deviations: upper and lower coefficients positive and finite"
                .to_string(),
        ),
        G0Verdict::Inconclusive => statements.push(format!(
            "frequency deviations sampled to horizon {k_max}: membership inconclusive"
        )),
    }
    match eventual_sign {
        SignPattern::Equal => statements.push(
            "per-level roots equal the limit on the tested tail".to_string(),
        ),
        SignPattern::AboveOrEqual => statements.push(
            "per-level roots at or above the limit on the tested tail: lower coefficient positive (finite-horizon evidence)"
                .to_string(),
        ),
        SignPattern::BelowOrEqual => statements.push(
            "per-level roots at or below the limit on the tested tail: upper coefficient finite (finite-horizon evidence)"
                .to_string(),
        ),
        SignPattern::Mixed => statements.push(
            "per-level roots straddle the limit on the tested tail".to_string(),
        ),
    }

    let verdicts = VerdictSet {
        statements,
        g0_membership: Some(
            match g0 {
                G0Verdict::Member => "member",
                G0Verdict::Inconclusive => "inconclusive",
            }
            .to_string(),
        ),
        eventual_sign: Some(
            match eventual_sign {
                SignPattern::Equal => "equal",
                SignPattern::AboveOrEqual => "above-or-equal",
                SignPattern::BelowOrEqual => "below-or-equal",
                SignPattern::Mixed => "mixed",
            }
            .to_string(),
        ),
        upper_coefficient_finite: match g0 {
            G0Verdict::Member => Some(true),
            G0Verdict::Inconclusive => None,
        },
        lower_coefficient_positive: match g0 {
            G0Verdict::Member => Some(true),
            G0Verdict::Inconclusive => None,
        },
        ..VerdictSet::default()
    };

    let report = DimensionReport {
        family: "multiscale".to_string(),
        r,
        value,
        residual,
        iterations,
        components: Vec::new(),
        verdicts,
        sequences,
    };

    Ok(MultiscaleSolution {
        report,
        g0,
        deviation_sup,
        eventual_sign,
        h_lower_proxy: h_lower,
        h_upper_proxy: h_upper,
        horizon: k_max,
    })
}
