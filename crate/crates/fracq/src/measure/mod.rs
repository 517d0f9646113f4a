//! The four fractal measure families, their validation, and the cylinder
//! machinery (coding map, enumeration, partitions, sampling) shared by the
//! solvers, the quantizer, and the bounds pipeline.

pub mod carpet;
pub mod markov;
pub mod multiscale;
pub mod partition;
pub mod sample;
pub mod self_similar;
pub mod similitude;
pub mod validate;

pub use carpet::CarpetSpec;
pub use markov::{MarkovLayout, MarkovSpec};
pub use multiscale::{MultiscaleSpec, Pattern, PatternSequence};
pub use partition::Partition;
pub use sample::SampleCloud;
pub use self_similar::{interval_self_similar, SelfSimilarSpec, Separation};
pub use similitude::Similitude;
pub use validate::{Check, ValidationReport};

use crate::error::MeasureError;
use crate::geom::{Affine, BoundingBox};
use serde::Serialize;

/// Levels of the multiscale pattern sequence cached at construction.
pub const MAX_LEVELS: usize = 4096;

/// A validated description of one of the four measure families.
#[derive(Debug, Clone, Serialize)]
pub enum MeasureSpec {
    SelfSimilar(SelfSimilarSpec),
    Carpet(CarpetSpec),
    Markov(MarkovSpec),
    Multiscale(MultiscaleSpec),
}

impl MeasureSpec {
    pub fn family(&self) -> &'static str {
        match self {
            MeasureSpec::SelfSimilar(_) => "self-similar",
            MeasureSpec::Carpet(_) => "carpet",
            MeasureSpec::Markov(_) => "markov",
            MeasureSpec::Multiscale(_) => "multiscale",
        }
    }

    pub fn validate(&self) -> ValidationReport {
        match self {
            MeasureSpec::SelfSimilar(s) => s.validate(),
            MeasureSpec::Carpet(s) => s.validate(),
            MeasureSpec::Markov(s) => s.validate(),
            MeasureSpec::Multiscale(s) => s.validate(),
        }
    }
}

/// A symbolic word plus its geometric cell.
#[derive(Debug, Clone, Serialize)]
pub struct CylinderRecord {
    /// Raw symbols: map/digit indices, Markov states, or within-pattern
    /// child indices depending on the family.
    pub word: Vec<u32>,
    /// mu(J_sigma).
    pub mass: f64,
    /// |J_sigma|.
    pub diameter: f64,
    /// Axis-aligned cover of the cell.
    pub region: BoundingBox,
    /// Representative point: left/min corner image under the coding map.
    pub anchor: Vec<f64>,
}

impl CylinderRecord {
    pub fn depth(&self) -> usize {
        self.word.len()
    }

    /// The partition weight mu(J)|J|^r.
    pub fn weight(&self, r: f64) -> f64 {
        self.mass * self.diameter.powf(r)
    }
}

/// Family-specific walk state paired with a `CylinderRecord`.
#[derive(Debug, Clone)]
pub(crate) enum Cursor {
    SelfSimilar { affine: Affine },
    Carpet { x0: f64, y0: f64, wx: f64, wy: f64 },
    Markov { left: f64, width: f64, state: Option<usize> },
    Multiscale { left: f64, width: f64, depth: usize },
}

/// A validated measure with its fixed geometric realization.
#[derive(Debug, Clone)]
pub struct Measure {
    spec: MeasureSpec,
    id: String,
    root_box: BoundingBox,
    affines: Vec<Affine>,
    markov_layout: Option<MarkovLayout>,
    multiscale_layouts: Vec<Vec<(f64, f64, f64)>>,
    omega: Vec<usize>,
}

impl Measure {
    /// Validates the spec and fixes the realization. Construction is refused
    /// on any failed invariant.
    pub fn new(spec: MeasureSpec) -> Result<Measure, MeasureError> {
        spec.validate().into_result()?;
        let (root_box, id) = match &spec {
            MeasureSpec::SelfSimilar(s) => (
                s.bounding_box.clone(),
                format!("self-similar/{}", s.maps.len()),
            ),
            MeasureSpec::Carpet(s) => (
                BoundingBox::unit(2),
                format!("carpet/{}x{}/{}", s.n, s.m, s.digits.len()),
            ),
            MeasureSpec::Markov(s) => (
                BoundingBox::interval(0.0, 1.0),
                format!("markov/{}", s.states()),
            ),
            MeasureSpec::Multiscale(s) => (
                BoundingBox::interval(0.0, 1.0),
                format!("multiscale/{}", s.pattern_count()),
            ),
        };
        let affines = match &spec {
            MeasureSpec::SelfSimilar(s) => s.maps.iter().map(|m| m.affine()).collect(),
            _ => Vec::new(),
        };
        let markov_layout = match &spec {
            MeasureSpec::Markov(s) => Some(s.layout()),
            _ => None,
        };
        let (multiscale_layouts, omega) = match &spec {
            MeasureSpec::Multiscale(s) => (
                (0..s.pattern_count()).map(|p| s.pattern_layout(p)).collect(),
                s.omega_prefix(MAX_LEVELS),
            ),
            _ => (Vec::new(), Vec::new()),
        };
        Ok(Measure { spec, id, root_box, affines, markov_layout, multiscale_layouts, omega })
    }

    pub fn spec(&self) -> &MeasureSpec {
        &self.spec
    }

    pub fn family(&self) -> &'static str {
        self.spec.family()
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn dim(&self) -> usize {
        self.root_box.dim()
    }

    pub fn root_box(&self) -> &BoundingBox {
        &self.root_box
    }

    /// Pattern id (0-based) used at 1-based level `level` (multiscale only).
    pub fn pattern_at_level(&self, level: usize) -> Result<usize, MeasureError> {
        if level == 0 || level > self.omega.len() {
            return Err(MeasureError::DepthCapExceeded { depth: level, cap: self.omega.len() });
        }
        Ok(self.omega[level - 1])
    }

    /// Root cylinder: the whole support with mass 1.
    pub fn root(&self) -> CylinderRecord {
        CylinderRecord {
            word: Vec::new(),
            mass: 1.0,
            diameter: self.root_box.diameter(),
            region: self.root_box.clone(),
            anchor: self.root_box.min_corner(),
        }
    }

    pub(crate) fn root_cursor(&self) -> Cursor {
        match &self.spec {
            MeasureSpec::SelfSimilar(_) => Cursor::SelfSimilar { affine: Affine::identity(self.dim()) },
            MeasureSpec::Carpet(_) => Cursor::Carpet { x0: 0.0, y0: 0.0, wx: 1.0, wy: 1.0 },
            MeasureSpec::Markov(_) => Cursor::Markov { left: 0.0, width: 1.0, state: None },
            MeasureSpec::Multiscale(_) => Cursor::Multiscale { left: 0.0, width: 1.0, depth: 0 },
        }
    }

    /// Number of admissible children below the cursor.
    pub(crate) fn branching(&self, cursor: &Cursor) -> usize {
        match (&self.spec, cursor) {
            (MeasureSpec::SelfSimilar(s), _) => s.maps.len(),
            (MeasureSpec::Carpet(s), _) => s.digits.len(),
            (MeasureSpec::Markov(s), Cursor::Markov { state, .. }) => match state {
                None => s.states(),
                Some(i) => self.markov_layout.as_ref().unwrap().children[*i].len(),
            },
            (MeasureSpec::Multiscale(s), Cursor::Multiscale { depth, .. }) => {
                s.patterns[self.omega[*depth]].contractions.len()
            }
            _ => unreachable!("cursor family mismatch"),
        }
    }

    /// The k-th admissible child (ascending symbol order).
    pub(crate) fn child(
        &self,
        rec: &CylinderRecord,
        cursor: &Cursor,
        k: usize,
    ) -> (CylinderRecord, Cursor) {
        match (&self.spec, cursor) {
            (MeasureSpec::SelfSimilar(s), Cursor::SelfSimilar { affine }) => {
                let next = affine.compose(&self.affines[k]);
                let mut word = rec.word.clone();
                word.push(k as u32);
                let region = next.image_box(&self.root_box);
                let anchor = next.apply(&self.root_box.min_corner());
                let rec = CylinderRecord {
                    word,
                    mass: rec.mass * s.probs[k],
                    diameter: rec.diameter * s.maps[k].ratio,
                    region,
                    anchor,
                };
                (rec, Cursor::SelfSimilar { affine: next })
            }
            (MeasureSpec::Carpet(s), Cursor::Carpet { x0, y0, wx, wy }) => {
                let (i, j) = s.digits[k];
                let wx2 = wx / s.n as f64;
                let wy2 = wy / s.m as f64;
                let x = x0 + i as f64 * wx2;
                let y = y0 + j as f64 * wy2;
                let mut word = rec.word.clone();
                word.push(k as u32);
                let rec = CylinderRecord {
                    word,
                    mass: rec.mass * s.probs[k],
                    diameter: (wx2 * wx2 + wy2 * wy2).sqrt(),
                    region: BoundingBox::new(vec![x, y], vec![x + wx2, y + wy2]),
                    anchor: vec![x, y],
                };
                (rec, Cursor::Carpet { x0: x, y0: y, wx: wx2, wy: wy2 })
            }
            (MeasureSpec::Markov(s), Cursor::Markov { left, width, state }) => {
                let layout = self.markov_layout.as_ref().unwrap();
                match state {
                    None => {
                        let chi = s.initial[k];
                        let l = layout.anchors[k];
                        let w = layout.base_len;
                        let mut word = rec.word.clone();
                        word.push(k as u32);
                        let rec = CylinderRecord {
                            word,
                            mass: chi,
                            diameter: w,
                            region: BoundingBox::interval(l, l + w),
                            anchor: vec![l],
                        };
                        (rec, Cursor::Markov { left: l, width: w, state: Some(k) })
                    }
                    Some(i) => {
                        let child = &layout.children[*i][k];
                        let l = left + child.rel_offset * width;
                        let w = child.rel_width * width;
                        let mut word = rec.word.clone();
                        word.push(child.state as u32);
                        let rec = CylinderRecord {
                            word,
                            mass: rec.mass * child.prob,
                            diameter: rec.diameter * child.rel_width,
                            region: BoundingBox::interval(l, l + w),
                            anchor: vec![l],
                        };
                        (rec, Cursor::Markov { left: l, width: w, state: Some(child.state) })
                    }
                }
            }
            (MeasureSpec::Multiscale(_), Cursor::Multiscale { left, width, depth }) => {
                let layout = &self.multiscale_layouts[self.omega[*depth]];
                let (off, g, p) = layout[k];
                let l = left + off * width;
                let w = g * width;
                let mut word = rec.word.clone();
                word.push(k as u32);
                let rec = CylinderRecord {
                    word,
                    mass: rec.mass * p,
                    diameter: rec.diameter * g,
                    region: BoundingBox::interval(l, l + w),
                    anchor: vec![l],
                };
                (rec, Cursor::Multiscale { left: l, width: w, depth: depth + 1 })
            }
            _ => unreachable!("cursor family mismatch"),
        }
    }

    /// Step to the child carrying raw symbol `symbol`.
    pub(crate) fn step_symbol(
        &self,
        rec: &CylinderRecord,
        cursor: &Cursor,
        symbol: u32,
        position: usize,
    ) -> Result<(CylinderRecord, Cursor), MeasureError> {
        let k = match (&self.spec, cursor) {
            (MeasureSpec::Markov(s), Cursor::Markov { state, .. }) => match state {
                None => {
                    if (symbol as usize) < s.states() {
                        Some(symbol as usize)
                    } else {
                        None
                    }
                }
                Some(i) => self.markov_layout.as_ref().unwrap().children[*i]
                    .iter()
                    .position(|c| c.state == symbol as usize),
            },
            _ => {
                if (symbol as usize) < self.branching(cursor) {
                    Some(symbol as usize)
                } else {
                    None
                }
            }
        };
        match k {
            Some(k) => Ok(self.child(rec, cursor, k)),
            None => Err(MeasureError::InadmissibleWord { position }),
        }
    }

    /// Walk `word` from the root, checking admissibility.
    pub fn cylinder(&self, word: &[u32]) -> Result<CylinderRecord, MeasureError> {
        if matches!(self.spec, MeasureSpec::Multiscale(_)) && word.len() > self.omega.len() {
            return Err(MeasureError::DepthCapExceeded { depth: word.len(), cap: self.omega.len() });
        }
        let mut rec = self.root();
        let mut cur = self.root_cursor();
        for (pos, &s) in word.iter().enumerate() {
            let (r, c) = self.step_symbol(&rec, &cur, s, pos)?;
            rec = r;
            cur = c;
        }
        Ok(rec)
    }

    /// Representative point of `J_sigma`: the composed-map image of the root
    /// anchor (min corner / left endpoint). Within |J_sigma| of the true
    /// coding-map limit.
    pub fn coding_map(&self, word: &[u32]) -> Result<Vec<f64>, MeasureError> {
        Ok(self.cylinder(word)?.anchor)
    }

    /// Admissible children of a cylinder, ascending symbol order.
    pub fn children(&self, rec: &CylinderRecord) -> Result<Vec<CylinderRecord>, MeasureError> {
        let parent = self.cylinder(&rec.word)?;
        let mut cur = self.root_cursor();
        let mut walk = self.root();
        for (pos, &s) in rec.word.iter().enumerate() {
            let (r, c) = self.step_symbol(&walk, &cur, s, pos)?;
            walk = r;
            cur = c;
        }
        let n = self.branching(&cur);
        Ok((0..n).map(|k| self.child(&parent, &cur, k).0).collect())
    }

    /// Largest single-step contraction ratio, used for depth defaults.
    pub fn max_ratio(&self) -> f64 {
        match &self.spec {
            MeasureSpec::SelfSimilar(s) => s.maps.iter().map(|m| m.ratio).fold(0.0, f64::max),
            MeasureSpec::Carpet(s) => 1.0 / s.m as f64,
            MeasureSpec::Markov(s) => {
                let mut worst: f64 = 0.0;
                for i in 0..s.states() {
                    for j in 0..s.states() {
                        if s.transition[i][j] > 0.0 {
                            worst = worst.max(s.ratios[i][j]);
                        }
                    }
                }
                worst
            }
            MeasureSpec::Multiscale(s) => s
                .patterns
                .iter()
                .flat_map(|p| p.contractions.iter().cloned())
                .fold(0.0, f64::max),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub fn cantor() -> Measure {
        Measure::new(MeasureSpec::SelfSimilar(interval_self_similar(
            &[1.0 / 3.0, 1.0 / 3.0],
            &[0.0, 2.0 / 3.0],
            &[0.5, 0.5],
        )))
        .unwrap()
    }

    #[test]
    fn cantor_coding_map_fixed_points() {
        let mu = cantor();
        let left = mu.coding_map(&[0; 8]).unwrap();
        assert_eq!(left[0], 0.0);
        let right = mu.coding_map(&[1; 8]).unwrap();
        let expect = 1.0 - 3f64.powi(-8);
        assert!((right[0] - expect).abs() < 1e-12);
        assert!((right[0] - 1.0).abs() <= 3f64.powi(-8) + 1e-15);
    }

    #[test]
    fn carpet_first_cell() {
        let mu = Measure::new(MeasureSpec::Carpet(CarpetSpec::full_grid(2, 2))).unwrap();
        let rec = mu.cylinder(&[0]).unwrap();
        assert_eq!(rec.anchor, vec![0.0, 0.0]);
        assert_eq!(rec.region.lo, vec![0.0, 0.0]);
        assert_eq!(rec.region.hi, vec![0.5, 0.5]);
        assert!((rec.diameter - 0.5 * 2f64.sqrt()).abs() < 1e-15);
        assert!((rec.mass - 0.25).abs() < 1e-15);
    }

    #[test]
    fn markov_word_admissibility() {
        let spec = MarkovSpec {
            transition: vec![vec![0.5, 0.5, 0.0], vec![0.5, 0.0, 0.5], vec![0.0, 0.5, 0.5]],
            ratios: vec![vec![0.25; 3]; 3],
            initial: vec![1.0 / 3.0; 3],
            gap: 0.25,
        };
        let mu = Measure::new(MeasureSpec::Markov(spec)).unwrap();
        // 0 -> 1 admissible, 0 -> 2 not
        assert!(mu.cylinder(&[0, 1]).is_ok());
        let err = mu.cylinder(&[0, 2]).unwrap_err();
        assert!(matches!(err, MeasureError::InadmissibleWord { position: 1 }));
        // mass = chi_0 * p_{01}
        let rec = mu.cylinder(&[0, 1]).unwrap();
        assert!((rec.mass - (1.0 / 3.0) * 0.5).abs() < 1e-15);
    }

    #[test]
    fn children_masses_sum_to_parent() {
        let mu = cantor();
        let root = mu.root();
        let kids = mu.children(&root).unwrap();
        let total: f64 = kids.iter().map(|c| c.mass).sum();
        assert!((total - 1.0).abs() < 1e-12);
        let grand = mu.children(&kids[1]).unwrap();
        let total: f64 = grand.iter().map(|c| c.mass).sum();
        assert!((total - kids[1].mass).abs() < 1e-12);
    }

    #[test]
    fn diameter_product_law() {
        let mu = cantor();
        let rec = mu.cylinder(&[0, 1, 1, 0]).unwrap();
        assert!((rec.diameter - 3f64.powi(-4)).abs() < 1e-15);
    }
}
