//! Dimension of self-similar measures: the unique k_r with
//! sum_i (p_i c_i^r)^{k_r/(k_r+r)} = 1, and the quotient formula for k_0.

use super::bisect::{bisect_decreasing, Bracket};
use super::{equation_terms, power_sum, t_to_dimension, DimensionReport};
use crate::error::SolveError;
use crate::measure::SelfSimilarSpec;

/// Solve for k_r, r > 0. The sum is strictly decreasing in t = k/(k+r),
/// runs from N at t=0 to sum p_i c_i^r < 1 at t=1, so a unique root exists.
pub fn solve_self_similar(spec: &SelfSimilarSpec, r: f64) -> Result<DimensionReport, SolveError> {
    solve_power_sum("self-similar", &spec.probs, &spec.ratios(), r)
}

/// Same equation from raw (probability, ratio) vectors; used by reductions.
pub fn solve_power_sum(
    family: &str,
    probs: &[f64],
    ratios: &[f64],
    r: f64,
) -> Result<DimensionReport, SolveError> {
    let terms = equation_terms(probs, ratios, r);
    let root = match bisect_decreasing(|t| power_sum(&terms, t), 1.0) {
        Bracket::Root(root) => root,
        Bracket::BelowTarget => return Err(SolveError::NoRoot { side: "below" }),
        Bracket::AboveTarget => return Err(SolveError::NoRoot { side: "above" }),
    };
    let value = t_to_dimension(root.t, r);
    let residual = (power_sum(&terms, value / (value + r)) - 1.0).abs();
    Ok(DimensionReport::plain(family, r, value, residual, root.iterations))
}

/// k_0 = (sum p_i log p_i) / (sum p_i log c_i), the geometric-mean-error
/// dimension of the self-similar measure.
pub fn dimension_zero(spec: &SelfSimilarSpec) -> DimensionReport {
    let num: f64 = spec.probs.iter().map(|&p| p * p.ln()).sum();
    let den: f64 = spec
        .probs
        .iter()
        .zip(spec.ratios())
        .map(|(&p, c)| p * c.ln())
        .sum();
    DimensionReport::plain("self-similar", 0.0, num / den, 0.0, 0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::interval_self_similar;

    fn cantor() -> SelfSimilarSpec {
        interval_self_similar(&[1.0 / 3.0, 1.0 / 3.0], &[0.0, 2.0 / 3.0], &[0.5, 0.5])
    }

    #[test]
    fn cantor_dimension_for_every_order() {
        let expect = 2f64.ln() / 3f64.ln();
        for r in [0.5, 1.0, 2.0] {
            let report = solve_self_similar(&cantor(), r).unwrap();
            assert!((report.value - expect).abs() < 1e-12, "r={r}: {}", report.value);
            assert!(report.residual < 1e-12);
        }
    }

    #[test]
    fn uniform_equal_ratio_closed_form() {
        // k_r = log N / log(1/c) independent of r
        let spec = interval_self_similar(
            &[0.2, 0.2, 0.2],
            &[0.0, 0.4, 0.8],
            &[1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0],
        );
        let expect = 3f64.ln() / 5f64.ln();
        for r in [0.5, 1.0, 2.0] {
            let report = solve_self_similar(&spec, r).unwrap();
            assert!((report.value - expect).abs() < 1e-12);
        }
    }

    #[test]
    fn skewed_quarter_maps_match_fixed_point_oracle() {
        // independent oracle: iterate t = ln(1 - x2^t)/ln(x1), a contraction
        // near the root for these weights
        let spec = interval_self_similar(
            &[0.25, 0.25],
            &[0.0, 0.75],
            &[1.0 / 3.0, 2.0 / 3.0],
        );
        let (x1, x2): (f64, f64) = (0.25 / 3.0, 2.0 * 0.25 / 3.0);
        let mut t = 0.5;
        for _ in 0..2000 {
            t = (1.0 - x2.powf(t)).ln() / x1.ln();
        }
        let oracle = 1.0 * t / (1.0 - t);
        let report = solve_self_similar(&spec, 1.0).unwrap();
        assert!((report.value - oracle).abs() < 1e-10, "{} vs {oracle}", report.value);
        assert!((report.value - 0.486).abs() < 2e-3);
    }

    #[test]
    fn natural_measure_collapses_to_similarity_dimension() {
        // p_i = c_i^D with sum c_i^D = 1 forces k_r = D for every r
        let c: [f64; 2] = [0.5, 0.25];
        // D solves 0.5^D + 0.25^D = 1: D = golden-ratio exponent
        let d = ((1.0 + 5f64.sqrt()) / 2.0).ln() / 2f64.ln();
        let probs: Vec<f64> = c.iter().map(|&ci| ci.powf(d)).collect();
        let spec = interval_self_similar(&c, &[0.0, 0.7], &probs);
        for r in [0.5, 1.0, 2.0, 3.5] {
            let report = solve_self_similar(&spec, r).unwrap();
            assert!((report.value - d).abs() < 1e-10, "r={r}");
        }
    }

    #[test]
    fn zero_order_quotient() {
        let report = dimension_zero(&cantor());
        assert!((report.value - 2f64.ln() / 3f64.ln()).abs() < 1e-14);

        let spec = interval_self_similar(
            &[0.25, 0.25],
            &[0.0, 0.75],
            &[1.0 / 3.0, 2.0 / 3.0],
        );
        let report = dimension_zero(&spec);
        let by_hand = ((1.0f64 / 3.0) * (1.0f64 / 3.0).ln()
            + (2.0f64 / 3.0) * (2.0f64 / 3.0).ln())
            / (0.25f64).ln();
        assert!((report.value - by_hand).abs() < 1e-14);
        assert!((report.value - 0.4591).abs() < 1e-4);

        // natural case collapses to the similarity dimension
        let c: [f64; 2] = [0.5, 0.25];
        let d = ((1.0 + 5f64.sqrt()) / 2.0).ln() / 2f64.ln();
        let probs: Vec<f64> = c.iter().map(|&ci| ci.powf(d)).collect();
        let spec = interval_self_similar(&c, &[0.0, 0.7], &probs);
        assert!((dimension_zero(&spec).value - d).abs() < 1e-12);
    }

    #[test]
    fn power_sum_strictly_decreasing_on_grid() {
        let spec = interval_self_similar(
            &[0.25, 0.25],
            &[0.0, 0.75],
            &[1.0 / 3.0, 2.0 / 3.0],
        );
        let terms = equation_terms(&spec.probs, &spec.ratios(), 1.0);
        let mut prev = f64::INFINITY;
        for i in 1..=100 {
            let t = i as f64 / 101.0;
            let v = power_sum(&terms, t);
            assert!(v < prev, "not strictly decreasing at t={t}");
            prev = v;
        }
    }
}
