//! Self-affine measures on grid carpets: the unit square is divided into an
//! `n x m` grid, a digit set `G` of kept cells, and cell probabilities.

use super::validate::{probability_vector_checks, Check, ValidationReport};
use crate::error::MeasureError;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CarpetSpec {
    /// Horizontal subdivision (columns), n >= m.
    pub n: u32,
    /// Vertical subdivision (rows).
    pub m: u32,
    /// Kept cells (i, j) with 0 <= i < n, 0 <= j < m.
    pub digits: Vec<(u32, u32)>,
    /// Probability per kept cell, aligned with `digits`.
    pub probs: Vec<f64>,
}

impl CarpetSpec {
    /// log m / log n.
    pub fn theta(&self) -> f64 {
        (self.m as f64).ln() / (self.n as f64).ln()
    }

    /// Occupied rows j, ascending.
    pub fn rows(&self) -> Vec<u32> {
        let mut rows: Vec<u32> = self.digits.iter().map(|&(_, j)| j).collect();
        rows.sort_unstable();
        rows.dedup();
        rows
    }

    /// Total probability of row j.
    pub fn row_mass(&self, j: u32) -> f64 {
        self.digits
            .iter()
            .zip(&self.probs)
            .filter(|(&(_, dj), _)| dj == j)
            .map(|(_, &p)| p)
            .sum()
    }

    /// Column digits of row j, ascending.
    pub fn row_columns(&self, j: u32) -> Vec<u32> {
        let mut cols: Vec<u32> = self
            .digits
            .iter()
            .filter(|&&(_, dj)| dj == j)
            .map(|&(i, _)| i)
            .collect();
        cols.sort_unstable();
        cols
    }

    pub fn full_grid(n: u32, m: u32) -> Self {
        let mut digits = Vec::new();
        for i in 0..n {
            for j in 0..m {
                digits.push((i, j));
            }
        }
        let p = 1.0 / (n as f64 * m as f64);
        let probs = vec![p; digits.len()];
        CarpetSpec { n, m, digits, probs }
    }

    pub fn validate(&self) -> ValidationReport {
        let mut checks = Vec::new();
        checks.push(Check::gated(
            "grid-sizes",
            if self.m >= 2 && self.n >= self.m { 0.0 } else { -1.0 },
            format!("n={}, m={}", self.n, self.m),
            MeasureError::InvalidSpec("need 2 <= m <= n".into()),
        ));
        checks.push(Check::gated(
            "digit-count",
            self.digits.len() as f64 - 2.0,
            format!("{} digits", self.digits.len()),
            MeasureError::InvalidSpec("need at least 2 digits".into()),
        ));
        let in_range = self
            .digits
            .iter()
            .all(|&(i, j)| i < self.n && j < self.m);
        checks.push(Check::gated(
            "digits-in-range",
            if in_range { 0.0 } else { -1.0 },
            String::new(),
            MeasureError::InvalidSpec("digit outside grid".into()),
        ));
        let mut sorted = self.digits.clone();
        sorted.sort_unstable();
        let distinct = sorted.windows(2).all(|w| w[0] != w[1]);
        checks.push(Check::gated(
            "digits-distinct",
            if distinct { 0.0 } else { -1.0 },
            String::new(),
            MeasureError::InvalidSpec("duplicate digit".into()),
        ));
        if self.probs.len() != self.digits.len() {
            checks.push(Check::fail(
                "prob-count",
                -1.0,
                format!("{} probs for {} digits", self.probs.len(), self.digits.len()),
                MeasureError::InvalidSpec("probability count differs from digit count".into()),
            ));
        } else {
            checks.extend(probability_vector_checks("probs", &self.probs));
        }
        ValidationReport { checks }
    }
}
