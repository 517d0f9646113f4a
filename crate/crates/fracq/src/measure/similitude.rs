//! Contractive similitudes `x -> c O x + b` with orthogonal `O`.

use crate::error::MeasureError;
use crate::geom::Affine;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Similitude {
    /// Contraction ratio in (0,1).
    pub ratio: f64,
    /// Orthogonal part, row-major q x q.
    pub orthogonal: Vec<f64>,
    pub translation: Vec<f64>,
}

impl Similitude {
    pub fn new(ratio: f64, orthogonal: Vec<f64>, translation: Vec<f64>) -> Result<Self, MeasureError> {
        let q = translation.len();
        if orthogonal.len() != q * q {
            return Err(MeasureError::InvalidSpec(format!(
                "orthogonal part has {} entries, expected {}",
                orthogonal.len(),
                q * q
            )));
        }
        Ok(Similitude { ratio, orthogonal, translation })
    }

    /// Similitude with identity orthogonal part.
    pub fn homothety(ratio: f64, translation: Vec<f64>) -> Self {
        let q = translation.len();
        let mut orthogonal = vec![0.0; q * q];
        for i in 0..q {
            orthogonal[i * q + i] = 1.0;
        }
        Similitude { ratio, orthogonal, translation }
    }

    pub fn dim(&self) -> usize {
        self.translation.len()
    }

    pub fn affine(&self) -> Affine {
        let q = self.dim();
        let linear: Vec<f64> = self.orthogonal.iter().map(|a| a * self.ratio).collect();
        Affine { dim: q, linear, offset: self.translation.clone() }
    }

    /// Max-norm defect of `O O^T - I`.
    pub fn orthogonality_defect(&self) -> f64 {
        let q = self.dim();
        let mut worst: f64 = 0.0;
        for i in 0..q {
            for j in 0..q {
                let mut acc = 0.0;
                for k in 0..q {
                    acc += self.orthogonal[i * q + k] * self.orthogonal[j * q + k];
                }
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((acc - target).abs());
            }
        }
        worst
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        self.affine().apply(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn homothety_is_orthogonal() {
        let s = Similitude::homothety(1.0 / 3.0, vec![2.0 / 3.0]);
        assert!(s.orthogonality_defect() < 1e-15);
        let y = s.apply(&[1.0]);
        assert!((y[0] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn rotation_is_orthogonal() {
        let (c, s) = (0.6, 0.8); // 3-4-5 rotation
        let m = Similitude::new(0.5, vec![c, -s, s, c], vec![0.0, 0.0]).unwrap();
        assert!(m.orthogonality_defect() < 1e-15);
    }
}
