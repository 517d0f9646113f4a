//! Generalized Lloyd iteration with farthest-point style seeding.
//!
//! Assignment sends every sample to its nearest codepoint (ties to the
//! lowest index); the representative update is exact for r=2 (mean) and
//! r=1 in one dimension (median), a damped Weiszfeld iteration for the
//! geometric median in higher dimension, and a damped fixed-point descent
//! with step halving for general r. Empty cells are re-seeded at the sample
//! with the largest contribution inside the heaviest cell.
//!
//! One dimension gets a fast path: the cloud is sorted once, cells of sorted
//! codepoints are index ranges, and means/medians/costs for r in {1,2} come
//! from prefix sums.

use crate::measure::SampleCloud;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

pub(crate) const MAX_ITER: usize = 500;
const REL_IMPROVE: f64 = 1e-9;
const INNER_ITER: usize = 200;
const GRAD_TOL: f64 = 1e-12;

pub(crate) fn pow_r(d: f64, r: f64) -> f64 {
    if r == 2.0 {
        d * d
    } else if r == 1.0 {
        d
    } else {
        d.powf(r)
    }
}

#[derive(Debug, Clone)]
pub(crate) struct LloydRun {
    pub points: Vec<Vec<f64>>,
    /// Mean of d(x, codebook)^r over the cloud, recomputed for the final
    /// codebook so diagnostics reproduce it exactly.
    pub distortion_pow: f64,
    pub iterations: usize,
    pub converged: bool,
    /// Post-update distortion after every iteration; nonincreasing.
    pub history: Vec<f64>,
    pub subunit_order: bool,
}

/// Sorted 1-D cloud with prefix sums of x and x^2.
pub(crate) struct Cloud1d {
    pub xs: Vec<f64>,
    s1: Vec<f64>,
    s2: Vec<f64>,
}

impl Cloud1d {
    pub fn new(cloud: &SampleCloud) -> Cloud1d {
        let mut xs = cloud.coords.clone();
        xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let mut s1 = Vec::with_capacity(xs.len() + 1);
        let mut s2 = Vec::with_capacity(xs.len() + 1);
        let (mut a1, mut a2) = (0.0f64, 0.0f64);
        s1.push(0.0);
        s2.push(0.0);
        for &x in &xs {
            a1 += x;
            a2 += x * x;
            s1.push(a1);
            s2.push(a2);
        }
        Cloud1d { xs, s1, s2 }
    }

    fn sum1(&self, lo: usize, hi: usize) -> f64 {
        self.s1[hi] - self.s1[lo]
    }

    fn sum2(&self, lo: usize, hi: usize) -> f64 {
        self.s2[hi] - self.s2[lo]
    }
}

pub(crate) enum View<'a> {
    One(Cloud1d),
    Multi { cloud: &'a SampleCloud },
}

impl View<'_> {
    pub fn len(&self) -> usize {
        match self {
            View::One(c) => c.xs.len(),
            View::Multi { cloud } => cloud.len(),
        }
    }

    fn dim(&self) -> usize {
        match self {
            View::One(_) => 1,
            View::Multi { cloud } => cloud.dim,
        }
    }

    fn point(&self, i: usize) -> Vec<f64> {
        match self {
            View::One(c) => vec![c.xs[i]],
            View::Multi { cloud } => cloud.point(i).to_vec(),
        }
    }

    fn dist(&self, i: usize, center: &[f64]) -> f64 {
        match self {
            View::One(c) => (c.xs[i] - center[0]).abs(),
            View::Multi { cloud } => crate::geom::euclidean(cloud.point(i), center),
        }
    }
}

/// Farthest-point style seeding: the first codepoint is uniform, later ones
/// are drawn with probability proportional to d(x, chosen)^r. Stops early
/// when every sample sits on a chosen point.
fn seed_centers(view: &View, n: usize, r: f64, rng: &mut ChaCha8Rng) -> Vec<Vec<f64>> {
    let m = view.len();
    let mut centers: Vec<Vec<f64>> = Vec::with_capacity(n);
    let first = rng.gen_range(0..m);
    centers.push(view.point(first));
    let mut weight: Vec<f64> = (0..m).map(|i| pow_r(view.dist(i, &centers[0]), r)).collect();
    while centers.len() < n {
        let total: f64 = weight.iter().sum();
        if total <= 0.0 {
            break;
        }
        let u = rng.gen::<f64>() * total;
        let mut acc = 0.0;
        let mut pick = m - 1;
        for (i, &w) in weight.iter().enumerate() {
            acc += w;
            if acc > u {
                pick = i;
                break;
            }
        }
        let c = view.point(pick);
        for i in 0..m {
            let d = pow_r(view.dist(i, &c), r);
            if d < weight[i] {
                weight[i] = d;
            }
        }
        centers.push(c);
    }
    centers
}

/// Representative update for general r: damped fixed point on the weighted
/// mean with weights d^{r-2}, accepting only improving steps.
fn general_update(points: &[Vec<f64>], start: &[f64], r: f64) -> (Vec<f64>, f64) {
    let q = start.len();
    let cost = |a: &[f64]| -> f64 {
        points.iter().map(|p| pow_r(crate::geom::euclidean(p, a), r)).sum()
    };
    let mut a = start.to_vec();
    let mut fa = cost(&a);
    let scale = points
        .iter()
        .map(|p| crate::geom::euclidean(p, start))
        .fold(0.0, f64::max)
        .max(1e-300);
    for _ in 0..INNER_ITER {
        let mut wsum = 0.0;
        let mut acc = vec![0.0; q];
        let mut grad = vec![0.0; q];
        for p in points {
            let d = crate::geom::euclidean(p, &a).max(1e-300);
            let w = d.powf(r - 2.0);
            wsum += w;
            for k in 0..q {
                acc[k] += w * p[k];
                grad[k] += r * w * (a[k] - p[k]);
            }
        }
        let gnorm = grad.iter().map(|g| g * g).sum::<f64>().sqrt();
        if gnorm < GRAD_TOL * scale.powf(r - 1.0) * points.len() as f64 || wsum <= 0.0 {
            break;
        }
        let target: Vec<f64> = acc.iter().map(|s| s / wsum).collect();
        let mut lambda = 1.0;
        let mut improved = false;
        while lambda > 1e-8 {
            let cand: Vec<f64> = a
                .iter()
                .zip(&target)
                .map(|(&ai, &ti)| ai + lambda * (ti - ai))
                .collect();
            let fc = cost(&cand);
            if fc < fa {
                a = cand;
                fa = fc;
                improved = true;
                break;
            }
            lambda *= 0.5;
        }
        if !improved {
            break;
        }
    }
    (a, fa)
}

/// Weiszfeld iteration for the geometric median (r = 1, dim >= 2), started
/// at the componentwise median.
fn geometric_median(points: &[Vec<f64>]) -> (Vec<f64>, f64) {
    let q = points[0].len();
    let mut start = vec![0.0; q];
    let mut buf: Vec<f64> = Vec::with_capacity(points.len());
    for k in 0..q {
        buf.clear();
        buf.extend(points.iter().map(|p| p[k]));
        buf.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let mid = buf.len() / 2;
        start[k] = if buf.len() % 2 == 1 {
            buf[mid]
        } else {
            0.5 * (buf[mid - 1] + buf[mid])
        };
    }
    general_update(points, &start, 1.0)
}

struct CellUpdate {
    center: Vec<f64>,
    cost: f64,
    count: usize,
    range: Option<(usize, usize)>, // 1-D fast path: index range into xs
    members: Option<Vec<u32>>,     // general path
}

pub(crate) fn lloyd(view: &View, n: usize, r: f64, rng: &mut ChaCha8Rng) -> LloydRun {
    let m = view.len();
    let mut centers = seed_centers(view, n, r, rng);
    let mut history = Vec::new();
    let mut prev = f64::INFINITY;
    let mut iterations = 0;
    let mut converged = false;
    for _ in 0..MAX_ITER {
        iterations += 1;
        let (updates, active_of_center) = match view {
            View::One(c) => assign_update_1d(c, &centers, r),
            View::Multi { cloud } => assign_update_multi(cloud, &centers, r),
        };
        let total_cost: f64 = updates.iter().map(|u| u.cost).sum();
        for (ci, &slot) in active_of_center.iter().enumerate() {
            if let Some(slot) = slot {
                centers[ci] = updates[slot].center.clone();
            }
        }
        // Re-seed codepoints that own no samples at the sample with the
        // largest contribution inside the heaviest cell.
        let empties: Vec<usize> = (0..centers.len())
            .filter(|&ci| active_of_center[ci].is_none_or_empty(&updates))
            .collect();
        if !empties.is_empty() && total_cost > 0.0 {
            let mut costs: Vec<f64> = updates.iter().map(|u| u.cost).collect();
            for &ci in &empties {
                let heavy = costs
                    .iter()
                    .enumerate()
                    .max_by(|a, b| a.1.partial_cmp(b.1).unwrap())
                    .map(|(i, _)| i)
                    .unwrap();
            let target = farthest_member(view, &updates[heavy], r);
                centers[ci] = target;
                costs[heavy] *= 0.25;
            }
        }
        let cur = total_cost / m as f64;
        history.push(cur);
        debug_assert!(
            cur <= prev * (1.0 + 1e-12) + 1e-300,
            "distortion increased: {prev} -> {cur}"
        );
        if cur == 0.0 || (prev.is_finite() && (prev - cur) <= REL_IMPROVE * prev) {
            converged = true;
            break;
        }
        prev = cur;
    }
    // Final pass: distortion of the returned codebook under its own nearest
    // assignment, so cell diagnostics add up to it exactly.
    let distortion_pow = recompute_cost(view, &centers, r) / m as f64;
    // Drop exact duplicates, keeping first occurrences.
    let mut points: Vec<Vec<f64>> = Vec::with_capacity(centers.len());
    for c in centers {
        if !points.iter().any(|p| p == &c) {
            points.push(c);
        }
    }
    LloydRun {
        points,
        distortion_pow,
        iterations,
        converged,
        history,
        subunit_order: r < 1.0,
    }
}

trait EmptySlot {
    fn is_none_or_empty(&self, updates: &[CellUpdate]) -> bool;
}

impl EmptySlot for Option<usize> {
    fn is_none_or_empty(&self, updates: &[CellUpdate]) -> bool {
        match self {
            None => true,
            Some(slot) => updates[*slot].count == 0,
        }
    }
}

fn farthest_member(view: &View, cell: &CellUpdate, r: f64) -> Vec<f64> {
    match view {
        View::One(c) => {
            let (lo, hi) = cell.range.expect("1-D cell without range");
            let a = c.xs[lo];
            let b = c.xs[hi - 1];
            if (a - cell.center[0]).abs() >= (b - cell.center[0]).abs() {
                vec![a]
            } else {
                vec![b]
            }
        }
        View::Multi { cloud } => {
            let members = cell.members.as_ref().expect("cell without members");
            let mut best = members[0] as usize;
            let mut best_d = f64::NEG_INFINITY;
            for &i in members {
                let d = pow_r(crate::geom::euclidean(cloud.point(i as usize), &cell.center), r);
                if d > best_d {
                    best_d = d;
                    best = i as usize;
                }
            }
            cloud.point(best).to_vec()
        }
    }
}

fn recompute_cost(view: &View, centers: &[Vec<f64>], r: f64) -> f64 {
    match view {
        View::One(c) => {
            let mut total = 0.0;
            for &x in &c.xs {
                let mut best = f64::INFINITY;
                for ctr in centers {
                    let d = (x - ctr[0]).abs();
                    if d < best {
                        best = d;
                    }
                }
                total += pow_r(best, r);
            }
            total
        }
        View::Multi { cloud } => {
            let costs: Vec<f64> = (0..cloud.len())
                .into_par_iter()
                .map(|i| {
                    let p = cloud.point(i);
                    let mut best = f64::INFINITY;
                    for ctr in centers {
                        let d = crate::geom::euclidean(p, ctr);
                        if d < best {
                            best = d;
                        }
                    }
                    pow_r(best, r)
                })
                .collect();
            costs.iter().sum()
        }
    }
}

/// 1-D fast path. Active codepoints are the distinct center values (ties
/// keep the lowest index); their Voronoi cells are index ranges of the
/// sorted cloud, split at midpoints with ties resolved toward the lower
/// original index.
fn assign_update_1d(
    cloud: &Cloud1d,
    centers: &[Vec<f64>],
    r: f64,
) -> (Vec<CellUpdate>, Vec<Option<usize>>) {
    let m = cloud.xs.len();
    let mut order: Vec<usize> = (0..centers.len()).collect();
    order.sort_by(|&a, &b| {
        centers[a][0]
            .partial_cmp(&centers[b][0])
            .unwrap()
            .then(a.cmp(&b))
    });
    // active: distinct values, lowest original index first
    let mut active: Vec<usize> = Vec::with_capacity(order.len());
    for &ci in &order {
        match active.last() {
            Some(&last) if centers[last][0] == centers[ci][0] => {
                if ci < last {
                    *active.last_mut().unwrap() = ci;
                }
            }
            _ => active.push(ci),
        }
    }
    let mut active_of_center = vec![None; centers.len()];
    let mut updates = Vec::with_capacity(active.len());
    let mut start = 0usize;
    for (slot, &ci) in active.iter().enumerate() {
        let end = if slot + 1 < active.len() {
            let next = active[slot + 1];
            let b = 0.5 * (centers[ci][0] + centers[next][0]);
            if ci < next {
                cloud.xs.partition_point(|&x| x <= b)
            } else {
                cloud.xs.partition_point(|&x| x < b)
            }
        } else {
            m
        };
        let count = end - start;
        let update = if count == 0 {
            CellUpdate { center: centers[ci].clone(), cost: 0.0, count, range: Some((start, end)), members: None }
        } else if r == 2.0 {
            let mean = cloud.sum1(start, end) / count as f64;
            let cost =
                (cloud.sum2(start, end) - mean * mean * count as f64).max(0.0);
            CellUpdate { center: vec![mean], cost, count, range: Some((start, end)), members: None }
        } else if r == 1.0 {
            let mid = start + count / 2;
            let med = if count % 2 == 1 {
                cloud.xs[mid]
            } else {
                0.5 * (cloud.xs[mid - 1] + cloud.xs[mid])
            };
            let left = (mid - start) as f64;
            let right = (end - mid) as f64;
            let cost = (med * left - cloud.sum1(start, mid))
                + (cloud.sum1(mid, end) - med * right);
            CellUpdate { center: vec![med], cost: cost.max(0.0), count, range: Some((start, end)), members: None }
        } else {
            let pts: Vec<Vec<f64>> = cloud.xs[start..end].iter().map(|&x| vec![x]).collect();
            let (center, cost) = general_update(&pts, &centers[ci], r);
            CellUpdate { center, cost, count, range: Some((start, end)), members: None }
        };
        active_of_center[ci] = Some(slot);
        updates.push(update);
        start = end;
    }
    (updates, active_of_center)
}

/// General-dimension path: brute-force nearest assignment in parallel
/// (pure per-point writes), then serial accumulation in point order so the
/// result is independent of the thread schedule.
fn assign_update_multi(
    cloud: &SampleCloud,
    centers: &[Vec<f64>],
    r: f64,
) -> (Vec<CellUpdate>, Vec<Option<usize>>) {
    let m = cloud.len();
    let q = cloud.dim;
    let mut assign = vec![0u32; m];
    assign.par_iter_mut().enumerate().for_each(|(i, slot)| {
        let p = cloud.point(i);
        let mut best = 0usize;
        let mut best_d = f64::INFINITY;
        for (ci, ctr) in centers.iter().enumerate() {
            let d = crate::geom::euclidean(p, ctr);
            if d < best_d {
                best_d = d;
                best = ci;
            }
        }
        *slot = best as u32;
    });
    let mut members: Vec<Vec<u32>> = vec![Vec::new(); centers.len()];
    for (i, &a) in assign.iter().enumerate() {
        members[a as usize].push(i as u32);
    }
    let mut updates = Vec::with_capacity(centers.len());
    let mut active_of_center = vec![None; centers.len()];
    for (ci, cell_members) in members.into_iter().enumerate() {
        let count = cell_members.len();
        if count == 0 {
            active_of_center[ci] = Some(updates.len());
            updates.push(CellUpdate {
                center: centers[ci].clone(),
                cost: 0.0,
                count,
                range: None,
                members: Some(cell_members),
            });
            continue;
        }
        let pts: Vec<Vec<f64>> = cell_members
            .iter()
            .map(|&i| cloud.point(i as usize).to_vec())
            .collect();
        let (center, cost) = if r == 2.0 {
            let mut mean = vec![0.0; q];
            for p in &pts {
                for k in 0..q {
                    mean[k] += p[k];
                }
            }
            for v in &mut mean {
                *v /= count as f64;
            }
            let cost = pts
                .iter()
                .map(|p| {
                    p.iter()
                        .zip(&mean)
                        .map(|(a, b)| (a - b) * (a - b))
                        .sum::<f64>()
                })
                .sum();
            (mean, cost)
        } else if r == 1.0 {
            geometric_median(&pts)
        } else {
            general_update(&pts, &centers[ci], r)
        };
        active_of_center[ci] = Some(updates.len());
        updates.push(CellUpdate { center, cost, count, range: None, members: Some(cell_members) });
    }
    (updates, active_of_center)
}
