//! Multiscale Moran measures: the pattern used at level k is selected by a
//! sequence omega over m templates, each template carrying contraction and
//! probability vectors. Realized on [0,1] with children left to right and
//! equal gaps sized by the declared separation parameter beta.

use super::validate::{probability_vector_checks, Check, ValidationReport, GEOM_TOL};
use crate::error::MeasureError;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Pattern {
    /// Contraction vector (g_j), each in (0,1).
    pub contractions: Vec<f64>,
    /// Probability vector aligned with `contractions`.
    pub probs: Vec<f64>,
}

/// How the level patterns are chosen.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub enum PatternSequence {
    /// Finite prefix followed by a repeating cycle (0-based pattern ids).
    Periodic { prefix: Vec<usize>, cycle: Vec<usize> },
    /// Deterministic low-discrepancy sequence realizing the frequency vector.
    Frequency { chi: Vec<f64> },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MultiscaleSpec {
    pub patterns: Vec<Pattern>,
    pub sequence: PatternSequence,
    /// Separation parameter beta in (0,1).
    pub gap: f64,
    /// Optional declared frequency vector; for periodic sequences it must
    /// match the cycle frequencies.
    pub chi: Option<Vec<f64>>,
}

impl MultiscaleSpec {
    pub fn pattern_count(&self) -> usize {
        self.patterns.len()
    }

    /// Pattern id used at level `level` (1-based).
    pub fn pattern_at(&self, level: usize) -> usize {
        match &self.sequence {
            PatternSequence::Periodic { prefix, cycle } => {
                if level <= prefix.len() {
                    prefix[level - 1]
                } else {
                    cycle[(level - 1 - prefix.len()) % cycle.len()]
                }
            }
            PatternSequence::Frequency { chi } => {
                // Greedy largest-deficit rule; ties go to the lowest id.
                let m = chi.len();
                let mut counts = vec![0u64; m];
                let mut pick = 0;
                for k in 1..=level {
                    let mut best = 0;
                    let mut best_deficit = f64::NEG_INFINITY;
                    for i in 0..m {
                        let deficit = chi[i] * k as f64 - counts[i] as f64;
                        if deficit > best_deficit + 1e-15 {
                            best = i;
                            best_deficit = deficit;
                        }
                    }
                    counts[best] += 1;
                    pick = best;
                }
                pick
            }
        }
    }

    /// Pattern ids for levels 1..=horizon.
    pub fn omega_prefix(&self, horizon: usize) -> Vec<usize> {
        match &self.sequence {
            PatternSequence::Periodic { prefix, cycle } => (1..=horizon)
                .map(|l| {
                    if l <= prefix.len() {
                        prefix[l - 1]
                    } else {
                        cycle[(l - 1 - prefix.len()) % cycle.len()]
                    }
                })
                .collect(),
            PatternSequence::Frequency { chi } => {
                let m = chi.len();
                let mut counts = vec![0u64; m];
                let mut out = Vec::with_capacity(horizon);
                for k in 1..=horizon {
                    let mut best = 0;
                    let mut best_deficit = f64::NEG_INFINITY;
                    for i in 0..m {
                        let deficit = chi[i] * k as f64 - counts[i] as f64;
                        if deficit > best_deficit + 1e-15 {
                            best = i;
                            best_deficit = deficit;
                        }
                    }
                    counts[best] += 1;
                    out.push(best);
                }
                out
            }
        }
    }

    /// Frequency vector: declared, or derived from the cycle / generator.
    pub fn frequencies(&self) -> Vec<f64> {
        if let Some(chi) = &self.chi {
            return chi.clone();
        }
        match &self.sequence {
            PatternSequence::Periodic { cycle, .. } => {
                let m = self.pattern_count();
                let mut freq = vec![0.0; m];
                for &i in cycle {
                    freq[i] += 1.0;
                }
                for f in &mut freq {
                    *f /= cycle.len() as f64;
                }
                freq
            }
            PatternSequence::Frequency { chi } => chi.clone(),
        }
    }

    /// Cycle frequencies for a periodic sequence, None otherwise.
    pub fn cycle_frequencies(&self) -> Option<Vec<f64>> {
        match &self.sequence {
            PatternSequence::Periodic { cycle, .. } => {
                let m = self.pattern_count();
                let mut freq = vec![0.0; m];
                for &i in cycle {
                    freq[i] += 1.0;
                }
                for f in &mut freq {
                    *f /= cycle.len() as f64;
                }
                Some(freq)
            }
            PatternSequence::Frequency { .. } => None,
        }
    }

    /// Child layout of one pattern in parent-relative units:
    /// (rel_offset, rel_width, prob) per child.
    pub fn pattern_layout(&self, pattern: usize) -> Vec<(f64, f64, f64)> {
        let pat = &self.patterns[pattern];
        let gap = self.gap * pat.contractions.iter().cloned().fold(0.0, f64::max);
        let mut offset = 0.0;
        let mut out = Vec::with_capacity(pat.contractions.len());
        for (j, &g) in pat.contractions.iter().enumerate() {
            out.push((offset, g, pat.probs[j]));
            offset += g + gap;
        }
        out
    }

    pub fn validate(&self) -> ValidationReport {
        let mut checks = Vec::new();
        let m = self.pattern_count();
        checks.push(Check::gated(
            "pattern-count",
            m as f64 - 1.0,
            format!("{m} patterns"),
            MeasureError::InvalidSpec("need at least 1 pattern".into()),
        ));
        checks.push(Check::gated(
            "gap-in-range",
            self.gap.min(1.0 - self.gap) - f64::MIN_POSITIVE,
            format!("beta = {}", self.gap),
            MeasureError::InvalidSpec(format!("gap parameter {} outside (0,1)", self.gap)),
        ));
        let mut min_contraction = f64::INFINITY;
        for (i, pat) in self.patterns.iter().enumerate() {
            checks.push(Check::gated(
                &format!("pattern-{i}-branching"),
                pat.contractions.len() as f64 - 2.0,
                format!("{} children", pat.contractions.len()),
                MeasureError::InvalidSpec(format!("pattern {i} needs at least 2 children")),
            ));
            if pat.probs.len() != pat.contractions.len() {
                checks.push(Check::fail(
                    &format!("pattern-{i}-shape"),
                    -1.0,
                    "prob/contraction length mismatch".to_string(),
                    MeasureError::InvalidSpec(format!("pattern {i} shape mismatch")),
                ));
                continue;
            }
            checks.extend(probability_vector_checks(&format!("pattern-{i}-probs"), &pat.probs));
            let mut slack = f64::INFINITY;
            for &g in &pat.contractions {
                slack = slack.min(g).min(1.0 - g);
                min_contraction = min_contraction.min(g);
            }
            checks.push(Check::gated(
                &format!("pattern-{i}-ratios"),
                slack - f64::MIN_POSITIVE,
                format!("min slack {slack}"),
                MeasureError::RatioOutOfRange {
                    context: format!("pattern {i}"),
                    value: pat
                        .contractions
                        .iter()
                        .cloned()
                        .find(|g| *g <= 0.0 || *g >= 1.0)
                        .unwrap_or(f64::NAN),
                },
            ));
            let total: f64 = pat.contractions.iter().sum();
            let gaps = (pat.contractions.len() as f64 - 1.0)
                * self.gap
                * pat.contractions.iter().cloned().fold(0.0, f64::max);
            checks.push(Check::gated(
                &format!("pattern-{i}-fit"),
                1.0 - (total + gaps) + GEOM_TOL,
                format!("span {}", total + gaps),
                MeasureError::SeparationViolation {
                    context: format!("pattern {i} children overflow the parent"),
                    margin: 1.0 - (total + gaps),
                },
            ));
        }
        // (B1): uniform positive lower contraction bound.
        checks.push(Check::gated(
            "b1-uniform-contraction",
            min_contraction - f64::MIN_POSITIVE,
            format!("c = {min_contraction}"),
            MeasureError::RatioOutOfRange {
                context: "(B1) infimum of contractions".into(),
                value: min_contraction,
            },
        ));

        match &self.sequence {
            PatternSequence::Periodic { prefix, cycle } => {
                let ok = !cycle.is_empty()
                    && cycle.iter().all(|&i| i < m)
                    && prefix.iter().all(|&i| i < m);
                checks.push(Check::gated(
                    "sequence-wellformed",
                    if ok { 0.0 } else { -1.0 },
                    format!("prefix {}, cycle {}", prefix.len(), cycle.len()),
                    MeasureError::InvalidSpec("periodic sequence malformed".into()),
                ));
                if let (Some(chi), Some(freq)) = (&self.chi, self.cycle_frequencies()) {
                    let worst = chi
                        .iter()
                        .zip(&freq)
                        .map(|(a, b)| (a - b).abs())
                        .fold(0.0, f64::max);
                    checks.push(Check::gated(
                        "frequency-consistency",
                        1e-9 - worst,
                        format!("worst deviation {worst:.3e}"),
                        MeasureError::InvalidSpec(
                            "declared chi inconsistent with the periodic tail".into(),
                        ),
                    ));
                }
            }
            PatternSequence::Frequency { chi } => {
                let ok = chi.len() == m;
                checks.push(Check::gated(
                    "sequence-wellformed",
                    if ok { 0.0 } else { -1.0 },
                    format!("chi length {}", chi.len()),
                    MeasureError::InvalidSpec("frequency vector length mismatch".into()),
                ));
                if ok {
                    checks.extend(probability_vector_checks("chi", chi));
                }
            }
        }

        // (B2) on realized depth-2 siblings for every pattern pair that can
        // occur consecutively; gaps nest self-similarly below depth 2.
        if checks.iter().all(|c| c.passed) {
            let mut margin = f64::INFINITY;
            for p in 0..m {
                let cells = self.pattern_layout(p);
                for a in 0..cells.len() {
                    for b in a + 1..cells.len() {
                        let (l1, w1, _) = cells[a];
                        let (l2, w2, _) = cells[b];
                        let gap = (l2 - (l1 + w1)).max(l1 - (l2 + w2));
                        margin = margin.min(gap - self.gap * w1.max(w2));
                    }
                }
            }
            checks.push(Check::gated(
                "separation-b2",
                margin + GEOM_TOL,
                format!("worst margin {margin:.3e}"),
                MeasureError::SeparationViolation {
                    context: "(B2) sibling gap below beta * max diameter".into(),
                    margin,
                },
            ));
        }

        ValidationReport { checks }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub fn period2() -> MultiscaleSpec {
        MultiscaleSpec {
            patterns: vec![
                Pattern { contractions: vec![0.25, 0.25], probs: vec![0.5, 0.5] },
                Pattern { contractions: vec![0.2, 0.3], probs: vec![0.4, 0.6] },
            ],
            sequence: PatternSequence::Periodic { prefix: vec![], cycle: vec![0, 1] },
            gap: 0.25,
            chi: None,
        }
    }

    #[test]
    fn period2_passes() {
        let report = period2().validate();
        assert!(report.passed(), "{report:?}");
    }

    #[test]
    fn omega_alternates() {
        let spec = period2();
        assert_eq!(spec.omega_prefix(5), vec![0, 1, 0, 1, 0]);
        assert_eq!(spec.frequencies(), vec![0.5, 0.5]);
    }

    #[test]
    fn declared_chi_mismatch_rejected() {
        let mut spec = period2();
        spec.chi = Some(vec![0.7, 0.3]);
        assert!(!spec.validate().passed());
    }

    #[test]
    fn frequency_generator_tracks_chi() {
        let spec = MultiscaleSpec {
            patterns: period2().patterns,
            sequence: PatternSequence::Frequency { chi: vec![0.25, 0.75] },
            gap: 0.25,
            chi: None,
        };
        assert!(spec.validate().passed());
        let omega = spec.omega_prefix(1000);
        let n0 = omega.iter().filter(|&&i| i == 0).count();
        assert!((n0 as f64 / 1000.0 - 0.25).abs() < 0.01);
    }

    #[test]
    fn overflowing_pattern_rejected() {
        let mut spec = period2();
        spec.patterns[0].contractions = vec![0.5, 0.5];
        assert!(matches!(
            spec.validate().first_error(),
            Some(MeasureError::SeparationViolation { .. })
        ));
    }
}
