//! Threshold partitions: the maximal antichain of cylinders whose
//! mass-diameter weight just dropped below a threshold.

use super::{CylinderRecord, Measure};
use crate::error::MeasureError;
use serde::Serialize;

/// Maximum word depth a partition may reach.
pub const DEFAULT_DEPTH_CAP: usize = 96;
/// Hard cap on partition size.
pub const CELL_CAP: usize = 2_000_000;

/// A partition of the support into cylinder cells with uniformly comparable
/// weights mu(F)|F|^r.
#[derive(Debug, Clone, Serialize)]
pub struct Partition {
    pub threshold: f64,
    pub order: f64,
    pub cells: Vec<CylinderRecord>,
    /// max/min of mu(F)|F|^r over the cells.
    pub uniformity: f64,
}

impl Partition {
    pub fn cell_count(&self) -> usize {
        self.cells.len()
    }

    /// Sum of mu(F)|F|^r: a rigorous upper bound for e^r at codebook size
    /// `cell_count` (one arbitrary point per cell).
    pub fn moment_sum(&self) -> f64 {
        self.cells.iter().map(|c| c.weight(self.order)).sum()
    }

    /// Sum of (mu(F)|F|^r)^t.
    pub fn weighted_sum(&self, t: f64) -> f64 {
        self.cells.iter().map(|c| c.weight(self.order).powf(t)).sum()
    }

    pub fn total_mass(&self) -> f64 {
        self.cells.iter().map(|c| c.mass).sum()
    }

    pub fn depth_range(&self) -> (usize, usize) {
        let mut lo = usize::MAX;
        let mut hi = 0;
        for c in &self.cells {
            lo = lo.min(c.depth());
            hi = hi.max(c.depth());
        }
        (lo, hi)
    }

    /// Worst pairwise gap over max diameter: min over cell pairs of
    /// d(F_i, F_j) / max(|F_i|, |F_j|).
    pub fn separation(&self) -> f64 {
        let cells = &self.cells;
        if cells.len() < 2 {
            return f64::INFINITY;
        }
        let max_diam = cells.iter().map(|c| c.diameter).fold(0.0, f64::max);
        // Sort by first box coordinate; once the running gap over max_diam
        // exceeds the current minimum the remaining pairs cannot improve it.
        let mut order: Vec<usize> = (0..cells.len()).collect();
        order.sort_by(|&a, &b| {
            cells[a].region.lo[0]
                .partial_cmp(&cells[b].region.lo[0])
                .unwrap()
                .then(a.cmp(&b))
        });
        let one_d = cells[0].region.dim() == 1;
        let mut best = f64::INFINITY;
        for ai in 0..order.len() {
            let a = &cells[order[ai]];
            for bi in ai + 1..order.len() {
                let b = &cells[order[bi]];
                if one_d {
                    let gap = b.region.lo[0] - a.region.hi[0];
                    if gap / max_diam >= best {
                        break; // gaps only grow to the right
                    }
                    best = best.min(gap.max(0.0) / a.diameter.max(b.diameter));
                } else {
                    let gap = a.region.distance(&b.region);
                    best = best.min(gap / a.diameter.max(b.diameter));
                }
            }
        }
        best
    }
}

impl Measure {
    /// mu(J)|J|^r of the root cell.
    pub fn root_weight(&self, r: f64) -> f64 {
        self.root().weight(r)
    }

    /// Partition at threshold `eps`: all minimal words with weight below
    /// `eps` whose parent is still at or above it. The root is never
    /// returned; at `eps` equal to the root weight this yields the depth-1
    /// children, so every partition is a genuine refinement.
    pub fn partition_at_threshold(&self, eps: f64, r: f64) -> Result<Partition, MeasureError> {
        self.partition_with_cap(eps, r, DEFAULT_DEPTH_CAP)
    }

    pub fn partition_with_cap(
        &self,
        eps: f64,
        r: f64,
        depth_cap: usize,
    ) -> Result<Partition, MeasureError> {
        let root_weight = self.root_weight(r);
        if !(eps > 0.0 && eps <= root_weight) {
            return Err(MeasureError::ThresholdOutOfRange { eps, max: root_weight });
        }
        if r <= 0.0 {
            return Err(MeasureError::InvalidSpec(format!("order r must be positive, got {r}")));
        }
        let mut cells = Vec::new();
        let mut stack = vec![(self.root(), self.root_cursor())];
        while let Some((rec, cur)) = stack.pop() {
            let splits = rec.word.is_empty() || rec.weight(r) >= eps;
            if !splits {
                cells.push(rec);
                if cells.len() > CELL_CAP {
                    return Err(MeasureError::ThresholdTooSmall { cap: CELL_CAP });
                }
                continue;
            }
            if rec.depth() >= depth_cap {
                return Err(MeasureError::ThresholdTooSmall { cap: depth_cap });
            }
            let n = self.branching(&cur);
            // push in reverse so cells emit in ascending symbol order
            for k in (0..n).rev() {
                stack.push(self.child(&rec, &cur, k));
            }
        }
        let weights: Vec<f64> = cells.iter().map(|c| c.weight(r)).collect();
        let max = weights.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let min = weights.iter().cloned().fold(f64::INFINITY, f64::min);
        Ok(Partition { threshold: eps, order: r, cells, uniformity: max / min })
    }

    /// All admissible cylinders of the given depth.
    pub fn enumerate_depth(&self, depth: usize) -> Result<Vec<CylinderRecord>, MeasureError> {
        if depth > DEFAULT_DEPTH_CAP {
            return Err(MeasureError::DepthCapExceeded { depth, cap: DEFAULT_DEPTH_CAP });
        }
        let mut frontier = vec![(self.root(), self.root_cursor())];
        for _ in 0..depth {
            let mut next = Vec::with_capacity(frontier.len() * 2);
            for (rec, cur) in &frontier {
                let n = self.branching(cur);
                for k in 0..n {
                    next.push(self.child(rec, cur, k));
                }
                if next.len() > CELL_CAP {
                    return Err(MeasureError::ThresholdTooSmall { cap: CELL_CAP });
                }
            }
            frontier = next;
        }
        Ok(frontier.into_iter().map(|(rec, _)| rec).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::{interval_self_similar, MeasureSpec};

    fn cantor() -> Measure {
        Measure::new(MeasureSpec::SelfSimilar(interval_self_similar(
            &[1.0 / 3.0, 1.0 / 3.0],
            &[0.0, 2.0 / 3.0],
            &[0.5, 0.5],
        )))
        .unwrap()
    }

    #[test]
    fn cantor_threshold_just_below_depth_one() {
        // depth-1 weight is 1/6; eps slightly below forces depth 2
        let mu = cantor();
        let part = mu.partition_at_threshold(0.99 / 6.0, 1.0).unwrap();
        assert_eq!(part.cell_count(), 4);
        for c in &part.cells {
            assert_eq!(c.depth(), 2);
            assert!((c.weight(1.0) - 1.0 / 36.0).abs() < 1e-15);
        }
        assert!((part.uniformity - 1.0).abs() < 1e-12);
        assert!((part.total_mass() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn threshold_at_root_weight_returns_children() {
        let mu = cantor();
        let part = mu.partition_at_threshold(mu.root_weight(1.0), 1.0).unwrap();
        assert_eq!(part.cell_count(), 2);
        assert!(part.cells.iter().all(|c| c.depth() == 1));
    }

    #[test]
    fn threshold_out_of_range_rejected() {
        let mu = cantor();
        assert!(matches!(
            mu.partition_at_threshold(1.5, 1.0),
            Err(MeasureError::ThresholdOutOfRange { .. })
        ));
        assert!(matches!(
            mu.partition_at_threshold(0.0, 1.0),
            Err(MeasureError::ThresholdOutOfRange { .. })
        ));
    }

    #[test]
    fn tiny_threshold_hits_depth_cap() {
        let mu = cantor();
        let err = mu.partition_with_cap(1e-30, 1.0, 12).unwrap_err();
        assert!(matches!(err, MeasureError::ThresholdTooSmall { cap: 12 }));
    }

    #[test]
    fn cantor_separation_is_one() {
        // siblings at every depth are one diameter apart
        let mu = cantor();
        let part = mu.partition_at_threshold(0.99 / 6.0, 1.0).unwrap();
        assert!((part.separation() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn enumerate_depth_counts() {
        let mu = cantor();
        let cells = mu.enumerate_depth(5).unwrap();
        assert_eq!(cells.len(), 32);
        let mass: f64 = cells.iter().map(|c| c.mass).sum();
        assert!((mass - 1.0).abs() < 1e-12);
    }
}
