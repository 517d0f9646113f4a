//! Markov-type measures on graph-directed interval constructions.
//!
//! Cylinder masses are `chi_{s1} p_{s1 s2} ... p_{s_{k-1} s_k}` and the cell
//! of `sigma * j` is geometrically similar to the base cell of `j` with
//! `|J_{sigma * j}| = c_{ij} |J_sigma|` for `i` the last symbol of `sigma`.
//! The realization places equally sized base intervals on [0,1] and, inside
//! each cell, the admissible children left to right with equal gaps sized by
//! the declared separation parameter `t`.

use super::validate::{probability_vector_checks, Check, ValidationReport, GEOM_TOL, SUM_TOL};
use crate::error::MeasureError;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MarkovSpec {
    /// Row-stochastic transition matrix, row-major.
    pub transition: Vec<Vec<f64>>,
    /// Contraction ratio per edge; read only where the transition is positive.
    pub ratios: Vec<Vec<f64>>,
    /// Initial distribution, all entries positive.
    pub initial: Vec<f64>,
    /// Separation parameter t in (0,1).
    pub gap: f64,
}

/// Precomputed interval layout: base cells plus per-state child offsets in
/// parent-relative units.
#[derive(Debug, Clone)]
pub struct MarkovLayout {
    pub base_len: f64,
    pub anchors: Vec<f64>,
    /// children[i] = admissible (state, rel_offset, rel_width, prob), ascending state.
    pub children: Vec<Vec<MarkovChild>>,
}

#[derive(Debug, Clone)]
pub struct MarkovChild {
    pub state: usize,
    pub rel_offset: f64,
    pub rel_width: f64,
    pub prob: f64,
}

impl MarkovSpec {
    pub fn states(&self) -> usize {
        self.transition.len()
    }

    pub fn admissible(&self, i: usize) -> Vec<usize> {
        (0..self.states()).filter(|&j| self.transition[i][j] > 0.0).collect()
    }

    /// Interval layout used by every geometric operation. Assumes the spec
    /// validates; spans wider than the parent are surfaced by `validate`.
    pub fn layout(&self) -> MarkovLayout {
        let n = self.states();
        let t = self.gap;
        let base_len = 1.0 / (n as f64 + (n as f64 - 1.0) * t);
        let anchors: Vec<f64> = (0..n).map(|i| i as f64 * base_len * (1.0 + t)).collect();
        let mut children = Vec::with_capacity(n);
        for i in 0..n {
            let adm = self.admissible(i);
            let widths: Vec<f64> = adm.iter().map(|&j| self.ratios[i][j]).collect();
            let gap = t * widths.iter().cloned().fold(0.0, f64::max);
            let mut offset = 0.0;
            let mut row = Vec::with_capacity(adm.len());
            for (k, &j) in adm.iter().enumerate() {
                row.push(MarkovChild {
                    state: j,
                    rel_offset: offset,
                    rel_width: widths[k],
                    prob: self.transition[i][j],
                });
                offset += widths[k] + gap;
            }
            children.push(row);
        }
        MarkovLayout { base_len, anchors, children }
    }

    pub fn validate(&self) -> ValidationReport {
        let mut checks = Vec::new();
        let n = self.states();
        checks.push(Check::gated(
            "state-count",
            n as f64 - 2.0,
            format!("{n} states"),
            MeasureError::InvalidSpec("need at least 2 states".into()),
        ));
        let shapes_ok = self.transition.iter().all(|r| r.len() == n)
            && self.ratios.len() == n
            && self.ratios.iter().all(|r| r.len() == n)
            && self.initial.len() == n;
        checks.push(Check::gated(
            "shapes",
            if shapes_ok { 0.0 } else { -1.0 },
            String::new(),
            MeasureError::InvalidSpec("matrix shapes inconsistent".into()),
        ));
        if !shapes_ok || n < 2 {
            return ValidationReport { checks };
        }

        for (i, row) in self.transition.iter().enumerate() {
            let sum: f64 = row.iter().sum();
            checks.push(Check::gated(
                &format!("row-{i}-stochastic"),
                SUM_TOL - (sum - 1.0).abs(),
                format!("sum {sum}"),
                MeasureError::NonStochasticMatrix { row: i, sum },
            ));
            if row.iter().any(|&p| p < 0.0) {
                checks.push(Check::fail(
                    &format!("row-{i}-nonnegative"),
                    -1.0,
                    "negative transition probability".to_string(),
                    MeasureError::ProbabilityInvalid {
                        context: format!("transition row {i}"),
                        detail: "negative entry".into(),
                    },
                ));
            }
            let count = row.iter().filter(|&&p| p > 0.0).count();
            checks.push(Check::gated(
                &format!("row-{i}-branching"),
                count as f64 - 2.0,
                format!("{count} positive transitions"),
                MeasureError::DegenerateRow { row: i, count },
            ));
        }

        checks.extend(probability_vector_checks("initial", &self.initial));

        let mut ratio_margin = f64::INFINITY;
        let mut bad_ratio = None;
        for i in 0..n {
            for j in 0..n {
                if self.transition[i][j] > 0.0 {
                    let c = self.ratios[i][j];
                    ratio_margin = ratio_margin.min(c).min(1.0 - c);
                    if c <= 0.0 || c >= 1.0 {
                        bad_ratio = Some(c);
                    }
                }
            }
        }
        checks.push(Check::gated(
            "ratios-in-range",
            if bad_ratio.is_none() { ratio_margin } else { -1.0 },
            format!("min slack {ratio_margin}"),
            MeasureError::RatioOutOfRange {
                context: "markov edge ratios".into(),
                value: bad_ratio.unwrap_or(f64::NAN),
            },
        ));

        checks.push(Check::gated(
            "gap-in-range",
            self.gap.min(1.0 - self.gap) - f64::MIN_POSITIVE,
            format!("t = {}", self.gap),
            MeasureError::InvalidSpec(format!("gap parameter {} outside (0,1)", self.gap)),
        ));

        if checks.iter().any(|c| !c.passed) {
            return ValidationReport { checks };
        }

        // Children of each state must fit inside the parent cell.
        let layout = self.layout();
        let mut fit_margin = f64::INFINITY;
        for row in &layout.children {
            if let Some(last) = row.last() {
                fit_margin = fit_margin.min(1.0 - (last.rel_offset + last.rel_width));
            }
        }
        checks.push(Check::gated(
            "children-fit",
            fit_margin + GEOM_TOL,
            format!("worst slack {fit_margin:.3e}"),
            MeasureError::SeparationViolation {
                context: "children overflow parent cell (ratios too large for t)".into(),
                margin: fit_margin,
            },
        ));

        // (A2) on all realized depth-1 and depth-2 sibling pairs. Deeper pairs
        // repeat these gaps by self-similar nesting.
        let mut sep_margin = f64::INFINITY;
        let mut pairs = |cells: &[(f64, f64)]| {
            for a in 0..cells.len() {
                for b in a + 1..cells.len() {
                    let (l1, w1) = cells[a];
                    let (l2, w2) = cells[b];
                    let gap = (l2 - (l1 + w1)).max(l1 - (l2 + w2));
                    sep_margin = sep_margin.min(gap - self.gap * w1.max(w2));
                }
            }
        };
        let depth1: Vec<(f64, f64)> = layout
            .anchors
            .iter()
            .map(|&a| (a, layout.base_len))
            .collect();
        pairs(&depth1);
        for i in 0..n {
            let parent_left = layout.anchors[i];
            let parent_w = layout.base_len;
            let cells: Vec<(f64, f64)> = layout.children[i]
                .iter()
                .map(|c| (parent_left + c.rel_offset * parent_w, c.rel_width * parent_w))
                .collect();
            pairs(&cells);
        }
        checks.push(Check::gated(
            "separation-a2",
            sep_margin + GEOM_TOL,
            format!("worst margin {sep_margin:.3e}"),
            MeasureError::SeparationViolation {
                context: "(A2) sibling gap below t * max diameter".into(),
                margin: sep_margin,
            },
        ));

        ValidationReport { checks }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub fn two_state_uniform() -> MarkovSpec {
        MarkovSpec {
            transition: vec![vec![0.5, 0.5], vec![0.5, 0.5]],
            ratios: vec![vec![1.0 / 3.0; 2]; 2],
            initial: vec![0.5, 0.5],
            gap: 1.0 / 3.0,
        }
    }

    #[test]
    fn two_state_uniform_passes() {
        let report = two_state_uniform().validate();
        assert!(report.passed(), "{report:?}");
    }

    #[test]
    fn deterministic_row_violates_a1() {
        let mut spec = two_state_uniform();
        spec.transition[0] = vec![1.0, 0.0];
        let report = spec.validate();
        assert!(!report.passed());
        assert!(matches!(
            report.first_error(),
            Some(MeasureError::DegenerateRow { row: 0, count: 1 })
        ));
    }

    #[test]
    fn non_stochastic_row_rejected() {
        let mut spec = two_state_uniform();
        spec.transition[1] = vec![0.5, 0.4];
        let report = spec.validate();
        assert!(matches!(
            report.first_error(),
            Some(MeasureError::NonStochasticMatrix { row: 1, .. })
        ));
    }

    #[test]
    fn oversized_ratios_violate_separation() {
        let mut spec = two_state_uniform();
        spec.ratios = vec![vec![0.6; 2]; 2];
        let report = spec.validate();
        assert!(matches!(
            report.first_error(),
            Some(MeasureError::SeparationViolation { .. })
        ));
    }

    #[test]
    fn layout_gaps_match_declared_t() {
        let spec = two_state_uniform();
        let layout = spec.layout();
        // base cells: two intervals of length l with gap t*l
        let l = layout.base_len;
        assert!((layout.anchors[1] - (l + spec.gap * l)).abs() < 1e-15);
        // children: [0, c] and [c + t*c, ...] in relative units
        let row = &layout.children[0];
        let expect = 1.0 / 3.0 + spec.gap / 3.0;
        assert!((row[1].rel_offset - expect).abs() < 1e-15);
    }
}
