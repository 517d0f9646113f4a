//! Axis-aligned boxes and affine maps used by the measure realizations.

use serde::{Deserialize, Serialize};

/// Axis-aligned box in `R^q`, stored as per-axis lower/upper bounds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundingBox {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
}

impl BoundingBox {
    pub fn new(lo: Vec<f64>, hi: Vec<f64>) -> Self {
        assert_eq!(lo.len(), hi.len(), "box bounds must share a dimension");
        BoundingBox { lo, hi }
    }

    pub fn interval(lo: f64, hi: f64) -> Self {
        BoundingBox { lo: vec![lo], hi: vec![hi] }
    }

    pub fn unit(dim: usize) -> Self {
        BoundingBox { lo: vec![0.0; dim], hi: vec![1.0; dim] }
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    /// Euclidean diameter (length of the main diagonal).
    pub fn diameter(&self) -> f64 {
        self.lo
            .iter()
            .zip(&self.hi)
            .map(|(a, b)| (b - a) * (b - a))
            .sum::<f64>()
            .sqrt()
    }

    /// Euclidean distance between two boxes (0 if they intersect).
    pub fn distance(&self, other: &BoundingBox) -> f64 {
        let mut acc = 0.0;
        for i in 0..self.dim() {
            let gap = (other.lo[i] - self.hi[i]).max(self.lo[i] - other.hi[i]).max(0.0);
            acc += gap * gap;
        }
        acc.sqrt()
    }

    /// True when the boxes overlap with positive volume on every axis.
    pub fn overlaps_interior(&self, other: &BoundingBox) -> bool {
        (0..self.dim()).all(|i| self.lo[i].max(other.lo[i]) < self.hi[i].min(other.hi[i]))
    }

    pub fn contains_box(&self, inner: &BoundingBox, tol: f64) -> bool {
        (0..self.dim())
            .all(|i| inner.lo[i] >= self.lo[i] - tol && inner.hi[i] <= self.hi[i] + tol)
    }

    pub fn contains_point(&self, p: &[f64], tol: f64) -> bool {
        (0..self.dim()).all(|i| p[i] >= self.lo[i] - tol && p[i] <= self.hi[i] + tol)
    }

    pub fn min_corner(&self) -> Vec<f64> {
        self.lo.clone()
    }
}

/// Affine map `x -> L x + b` with a dense `q x q` linear part (row-major).
#[derive(Debug, Clone)]
pub struct Affine {
    pub dim: usize,
    pub linear: Vec<f64>,
    pub offset: Vec<f64>,
}

impl Affine {
    pub fn identity(dim: usize) -> Self {
        let mut linear = vec![0.0; dim * dim];
        for i in 0..dim {
            linear[i * dim + i] = 1.0;
        }
        Affine { dim, linear, offset: vec![0.0; dim] }
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let q = self.dim;
        let mut out = self.offset.clone();
        for i in 0..q {
            let row = &self.linear[i * q..(i + 1) * q];
            out[i] += row.iter().zip(x).map(|(a, b)| a * b).sum::<f64>();
        }
        out
    }

    /// `self` after `other`: (self ∘ other)(x) = self(other(x)).
    pub fn compose(&self, other: &Affine) -> Affine {
        let q = self.dim;
        let mut linear = vec![0.0; q * q];
        for i in 0..q {
            for j in 0..q {
                let mut acc = 0.0;
                for k in 0..q {
                    acc += self.linear[i * q + k] * other.linear[k * q + j];
                }
                linear[i * q + j] = acc;
            }
        }
        let offset = self.apply(&other.offset);
        Affine { dim: q, linear, offset }
    }

    /// Axis-aligned bounding box of the image of `b`.
    pub fn image_box(&self, b: &BoundingBox) -> BoundingBox {
        let q = self.dim;
        let mut lo = self.offset.clone();
        let mut hi = self.offset.clone();
        for i in 0..q {
            for j in 0..q {
                let a = self.linear[i * q + j];
                let (x, y) = (a * b.lo[j], a * b.hi[j]);
                lo[i] += x.min(y);
                hi[i] += x.max(y);
            }
        }
        BoundingBox { lo, hi }
    }
}

pub fn euclidean(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn box_distance_and_diameter() {
        let a = BoundingBox::interval(0.0, 1.0 / 3.0);
        let b = BoundingBox::interval(2.0 / 3.0, 1.0);
        assert!((a.distance(&b) - 1.0 / 3.0).abs() < 1e-15);
        assert!((a.diameter() - 1.0 / 3.0).abs() < 1e-15);
        let sq = BoundingBox::unit(2);
        assert!((sq.diameter() - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn affine_compose_matches_nested_apply() {
        let f = Affine { dim: 2, linear: vec![0.5, 0.0, 0.0, 0.5], offset: vec![0.5, 0.0] };
        let g = Affine { dim: 2, linear: vec![0.0, -1.0, 1.0, 0.0], offset: vec![0.1, 0.2] };
        let fg = f.compose(&g);
        let x = [0.3, 0.7];
        let direct = f.apply(&g.apply(&x));
        let composed = fg.apply(&x);
        assert!(euclidean(&direct, &composed) < 1e-15);
    }

    #[test]
    fn image_box_of_reflection() {
        let f = Affine { dim: 1, linear: vec![-0.5], offset: vec![1.0] };
        let img = f.image_box(&BoundingBox::interval(0.0, 1.0));
        assert!((img.lo[0] - 0.5).abs() < 1e-15);
        assert!((img.hi[0] - 1.0).abs() < 1e-15);
    }
}
