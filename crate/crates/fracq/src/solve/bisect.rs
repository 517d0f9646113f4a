//! Bisection on (0,1) for strictly decreasing residual functions.
//!
//! Every implicit equation in this crate is solved in the transformed
//! variable t = s/(s+r), where the left side is provably monotone, so plain
//! bisection converges without derivative estimates. We bisect until the
//! midpoint is no longer strictly between the bracket ends, which pins t to
//! full f64 resolution (well inside the 1e-14 contract).

#[derive(Debug, Clone, Copy)]
pub struct RootResult {
    pub t: f64,
    pub iterations: usize,
}

#[derive(Debug, Clone, Copy)]
pub enum Bracket {
    Root(RootResult),
    /// f stays at or below the target on all of (0,1): any root sits at 0.
    BelowTarget,
    /// f stays at or above the target: any root sits at or beyond 1.
    AboveTarget,
}

const EDGE: f64 = 1e-13;
const MAX_ITER: usize = 200;

/// Solve f(t) = target for strictly decreasing `f` on (0,1).
pub fn bisect_decreasing(f: impl Fn(f64) -> f64, target: f64) -> Bracket {
    let mut lo = EDGE;
    let mut hi = 1.0 - EDGE;
    if f(lo) <= target {
        return Bracket::BelowTarget;
    }
    if f(hi) >= target {
        return Bracket::AboveTarget;
    }
    let mut iterations = 0;
    for _ in 0..MAX_ITER {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        iterations += 1;
        if f(mid) > target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Bracket::Root(RootResult { t: 0.5 * (lo + hi), iterations })
}

impl Bracket {
    pub fn root(self) -> Option<RootResult> {
        match self {
            Bracket::Root(r) => Some(r),
            _ => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solves_power_sum_to_machine_precision() {
        // 2 x^t = 1 with x = 1/18: t = ln2 / ln18
        let x: f64 = 1.0 / 18.0;
        let f = |t: f64| 2.0 * x.powf(t);
        let root = bisect_decreasing(f, 1.0).root().unwrap();
        let expect = 2f64.ln() / 18f64.ln();
        assert!((root.t - expect).abs() < 1e-15);
        assert!((f(root.t) - 1.0).abs() < 1e-13);
    }

    #[test]
    fn detects_missing_bracket() {
        assert!(matches!(bisect_decreasing(|t| 0.5 - 0.1 * t, 1.0), Bracket::BelowTarget));
        assert!(matches!(bisect_decreasing(|t| 3.0 - t, 1.0), Bracket::AboveTarget));
    }
}
