//! Monte Carlo realization: i.i.d. draws of truncated coding-map images.
//!
//! Point `i` is produced from its own random stream derived from
//! `(seed, i)`, so clouds are identical regardless of thread count.

use super::{Measure, MeasureSpec};
use crate::rng::{domain, stream};
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

const POINT_CHUNK: usize = 2048;

/// An empirical stand-in for the measure: M equally weighted points.
#[derive(Debug, Clone, Serialize)]
pub struct SampleCloud {
    pub dim: usize,
    pub coords: Vec<f64>,
    pub seed: u64,
    pub depth: usize,
    pub measure_id: String,
}

impl SampleCloud {
    pub fn len(&self) -> usize {
        self.coords.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn iter_points(&self) -> impl Iterator<Item = &[f64]> {
        self.coords.chunks_exact(self.dim)
    }

    /// Cloud from explicit points (test and synthetic use).
    pub fn from_points(dim: usize, points: &[Vec<f64>]) -> SampleCloud {
        let mut coords = Vec::with_capacity(points.len() * dim);
        for p in points {
            assert_eq!(p.len(), dim);
            coords.extend_from_slice(p);
        }
        SampleCloud { dim, coords, seed: 0, depth: 0, measure_id: "explicit".into() }
    }

    pub fn map_coords(&self, f: impl Fn(f64) -> f64) -> SampleCloud {
        SampleCloud {
            dim: self.dim,
            coords: self.coords.iter().map(|&x| f(x)).collect(),
            seed: self.seed,
            depth: self.depth,
            measure_id: self.measure_id.clone(),
        }
    }
}

fn draw(cum: &[f64], u: f64) -> usize {
    cum.partition_point(|&c| c <= u).min(cum.len() - 1)
}

fn cumulative(p: &[f64]) -> Vec<f64> {
    let mut acc = 0.0;
    p.iter()
        .map(|&x| {
            acc += x;
            acc
        })
        .collect()
}

impl Measure {
    /// Truncation depth at which the largest cylinder diameter falls below
    /// 1e-9 of the root.
    pub fn default_sample_depth(&self) -> usize {
        let c = self.max_ratio();
        let k = (1e-9f64.ln() / c.ln()).ceil() as usize;
        k.clamp(8, super::MAX_LEVELS.min(4000))
    }

    /// M independent draws of the coding map truncated at `depth`.
    pub fn sample(&self, count: usize, depth: usize, seed: u64) -> SampleCloud {
        let q = self.dim();
        let mut coords = vec![0.0f64; count * q];
        match self.spec() {
            MeasureSpec::SelfSimilar(s) => {
                let cum = cumulative(&s.probs);
                let affines = &self.affines;
                let anchor = self.root_box().min_corner();
                coords
                    .par_chunks_mut(POINT_CHUNK * q)
                    .enumerate()
                    .for_each(|(chunk, slab)| {
                        let mut symbols = vec![0usize; depth];
                        for (local, out) in slab.chunks_exact_mut(q).enumerate() {
                            let idx = chunk * POINT_CHUNK + local;
                            let mut rng = stream(seed, domain::SAMPLE, idx as u64);
                            for s in symbols.iter_mut() {
                                *s = draw(&cum, rng.gen::<f64>());
                            }
                            let mut x = anchor.clone();
                            for &s in symbols.iter().rev() {
                                x = affines[s].apply(&x);
                            }
                            out.copy_from_slice(&x);
                        }
                    });
            }
            MeasureSpec::Carpet(s) => {
                let cum = cumulative(&s.probs);
                let digits = &s.digits;
                let (inv_n, inv_m) = (1.0 / s.n as f64, 1.0 / s.m as f64);
                coords
                    .par_chunks_mut(POINT_CHUNK * q)
                    .enumerate()
                    .for_each(|(chunk, slab)| {
                        for (local, out) in slab.chunks_exact_mut(q).enumerate() {
                            let idx = chunk * POINT_CHUNK + local;
                            let mut rng = stream(seed, domain::SAMPLE, idx as u64);
                            let (mut x, mut y) = (0.0, 0.0);
                            let (mut wx, mut wy) = (1.0, 1.0);
                            for _ in 0..depth {
                                let k = draw(&cum, rng.gen::<f64>());
                                let (i, j) = digits[k];
                                wx *= inv_n;
                                wy *= inv_m;
                                x += i as f64 * wx;
                                y += j as f64 * wy;
                            }
                            out[0] = x;
                            out[1] = y;
                        }
                    });
            }
            MeasureSpec::Markov(s) => {
                let layout = self.markov_layout.as_ref().unwrap();
                let init_cum = cumulative(&s.initial);
                let child_cums: Vec<Vec<f64>> = layout
                    .children
                    .iter()
                    .map(|row| cumulative(&row.iter().map(|c| c.prob).collect::<Vec<_>>()))
                    .collect();
                coords
                    .par_chunks_mut(POINT_CHUNK * q)
                    .enumerate()
                    .for_each(|(chunk, slab)| {
                        for (local, out) in slab.chunks_exact_mut(q).enumerate() {
                            let idx = chunk * POINT_CHUNK + local;
                            let mut rng = stream(seed, domain::SAMPLE, idx as u64);
                            let mut state = draw(&init_cum, rng.gen::<f64>());
                            let mut left = layout.anchors[state];
                            let mut width = layout.base_len;
                            for _ in 1..depth {
                                let k = draw(&child_cums[state], rng.gen::<f64>());
                                let child = &layout.children[state][k];
                                left += child.rel_offset * width;
                                width *= child.rel_width;
                                state = child.state;
                            }
                            out[0] = left;
                        }
                    });
            }
            MeasureSpec::Multiscale(_) => {
                let layouts = &self.multiscale_layouts;
                let omega = &self.omega;
                let depth = depth.min(omega.len());
                let cums: Vec<Vec<f64>> = layouts
                    .iter()
                    .map(|l| cumulative(&l.iter().map(|&(_, _, p)| p).collect::<Vec<_>>()))
                    .collect();
                coords
                    .par_chunks_mut(POINT_CHUNK * q)
                    .enumerate()
                    .for_each(|(chunk, slab)| {
                        for (local, out) in slab.chunks_exact_mut(q).enumerate() {
                            let idx = chunk * POINT_CHUNK + local;
                            let mut rng = stream(seed, domain::SAMPLE, idx as u64);
                            let mut left = 0.0;
                            let mut width = 1.0;
                            for level in 0..depth {
                                let pat = omega[level];
                                let k = draw(&cums[pat], rng.gen::<f64>());
                                let (off, g, _) = layouts[pat][k];
                                left += off * width;
                                width *= g;
                            }
                            out[0] = left;
                        }
                    });
            }
        }
        SampleCloud { dim: q, coords, seed, depth, measure_id: self.id().to_string() }
    }
}

#[cfg(test)]
mod tests {
    use crate::measure::{interval_self_similar, Measure, MeasureSpec};

    fn cantor() -> Measure {
        Measure::new(MeasureSpec::SelfSimilar(interval_self_similar(
            &[1.0 / 3.0, 1.0 / 3.0],
            &[0.0, 2.0 / 3.0],
            &[0.5, 0.5],
        )))
        .unwrap()
    }

    #[test]
    fn cantor_cloud_statistics() {
        let mu = cantor();
        let cloud = mu.sample(100_000, 30, 7);
        let mean: f64 = cloud.coords.iter().sum::<f64>() / cloud.len() as f64;
        assert!((mean - 0.5).abs() < 0.005, "mean {mean}");
        let left = cloud.coords.iter().filter(|&&x| x <= 1.0 / 3.0).count();
        let frac = left as f64 / cloud.len() as f64;
        assert!((frac - 0.5).abs() < 0.005, "left mass {frac}");
        for &x in &cloud.coords {
            assert!((0.0..=1.0).contains(&x));
        }
    }

    #[test]
    fn same_seed_same_cloud() {
        let mu = cantor();
        let a = mu.sample(5_000, 30, 42);
        let b = mu.sample(5_000, 30, 42);
        assert_eq!(a.coords, b.coords);
        let c = mu.sample(5_000, 30, 43);
        assert_ne!(a.coords, c.coords);
    }

    #[test]
    fn default_depth_shrinks_cylinders() {
        let mu = cantor();
        let k = mu.default_sample_depth();
        assert!((1.0f64 / 3.0).powi(k as i32) < 1e-9);
    }
}
