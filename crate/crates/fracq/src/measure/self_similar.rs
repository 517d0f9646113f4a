//! Self-similar measures: `mu = sum_i p_i mu o S_i^{-1}` for contractive
//! similitudes `S_i` under a declared separation condition.

use super::similitude::Similitude;
use super::validate::{probability_vector_checks, Check, ValidationReport, GEOM_TOL};
use crate::error::MeasureError;
use crate::geom::BoundingBox;
use serde::{Deserialize, Serialize};

/// Declared separation. Strong separation requires pairwise disjoint images of
/// the bounding box; the open set condition is accepted only with an explicit
/// open-box witness, checked at depth one.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub enum Separation {
    Strong,
    OpenSet { witness: BoundingBox },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SelfSimilarSpec {
    pub maps: Vec<Similitude>,
    pub probs: Vec<f64>,
    pub separation: Separation,
    pub bounding_box: BoundingBox,
}

impl SelfSimilarSpec {
    pub fn dim(&self) -> usize {
        self.bounding_box.dim()
    }

    pub fn ratios(&self) -> Vec<f64> {
        self.maps.iter().map(|m| m.ratio).collect()
    }

    pub fn validate(&self) -> ValidationReport {
        let mut checks = Vec::new();

        checks.push(Check::gated(
            "map-count",
            self.maps.len() as f64 - 2.0,
            format!("{} maps", self.maps.len()),
            MeasureError::InvalidSpec("need at least 2 maps".into()),
        ));
        if self.probs.len() != self.maps.len() {
            checks.push(Check::fail(
                "prob-count",
                -1.0,
                format!("{} probs for {} maps", self.probs.len(), self.maps.len()),
                MeasureError::InvalidSpec("probability count differs from map count".into()),
            ));
            return ValidationReport { checks };
        }
        let q = self.dim();
        if self.maps.iter().any(|m| m.dim() != q) {
            checks.push(Check::fail(
                "dimension",
                -1.0,
                "map dimension differs from bounding box".to_string(),
                MeasureError::InvalidSpec("inconsistent dimensions".into()),
            ));
            return ValidationReport { checks };
        }

        checks.extend(probability_vector_checks("probs", &self.probs));

        let mut ratio_margin = f64::INFINITY;
        for m in &self.maps {
            ratio_margin = ratio_margin.min(m.ratio).min(1.0 - m.ratio);
        }
        checks.push(Check::gated(
            "ratios-in-range",
            ratio_margin - f64::MIN_POSITIVE,
            format!("min slack {ratio_margin}"),
            MeasureError::RatioOutOfRange {
                context: "self-similar maps".into(),
                value: self
                    .maps
                    .iter()
                    .map(|m| m.ratio)
                    .find(|c| !(0.0..1.0).contains(c) || *c == 0.0)
                    .unwrap_or(f64::NAN),
            },
        ));

        let defect = self
            .maps
            .iter()
            .map(|m| m.orthogonality_defect())
            .fold(0.0, f64::max);
        checks.push(Check::gated(
            "orthogonality",
            GEOM_TOL - defect,
            format!("worst defect {defect:.3e}"),
            MeasureError::InvalidSpec(format!("orthogonal part defect {defect:.3e} exceeds {GEOM_TOL}")),
        ));

        let images: Vec<BoundingBox> = self
            .maps
            .iter()
            .map(|m| m.affine().image_box(&self.bounding_box))
            .collect();
        let mut containment: f64 = f64::INFINITY;
        for img in &images {
            for i in 0..q {
                containment = containment
                    .min(img.lo[i] - self.bounding_box.lo[i])
                    .min(self.bounding_box.hi[i] - img.hi[i]);
            }
        }
        checks.push(Check::gated(
            "box-invariance",
            containment + GEOM_TOL,
            format!("worst slack {containment:.3e}"),
            MeasureError::InvalidSpec("bounding box is not forward invariant".into()),
        ));

        match &self.separation {
            Separation::Strong => {
                let mut gap = f64::INFINITY;
                for i in 0..images.len() {
                    for j in i + 1..images.len() {
                        gap = gap.min(images[i].distance(&images[j]));
                    }
                }
                checks.push(Check::gated(
                    "ssc-disjoint",
                    if gap > 0.0 { gap } else { -1.0 },
                    format!("min image gap {gap:.3e}"),
                    MeasureError::SeparationViolation {
                        context: "strong separation: depth-1 images intersect".into(),
                        margin: gap,
                    },
                ));
            }
            Separation::OpenSet { witness } => {
                let wimgs: Vec<BoundingBox> = self
                    .maps
                    .iter()
                    .map(|m| m.affine().image_box(witness))
                    .collect();
                let mut slack = f64::INFINITY;
                for img in &wimgs {
                    for i in 0..q {
                        slack = slack.min(img.lo[i] - witness.lo[i]).min(witness.hi[i] - img.hi[i]);
                    }
                }
                checks.push(Check::gated(
                    "osc-witness-contained",
                    slack + GEOM_TOL,
                    format!("worst containment slack {slack:.3e}"),
                    MeasureError::SeparationViolation {
                        context: "open set witness not forward invariant".into(),
                        margin: slack,
                    },
                ));
                // Open boxes are disjoint when some axis separates them.
                let mut sep = f64::INFINITY;
                for i in 0..wimgs.len() {
                    for j in i + 1..wimgs.len() {
                        let mut axis_gap = f64::NEG_INFINITY;
                        for d in 0..q {
                            axis_gap = axis_gap
                                .max(wimgs[j].lo[d] - wimgs[i].hi[d])
                                .max(wimgs[i].lo[d] - wimgs[j].hi[d]);
                        }
                        sep = sep.min(axis_gap);
                    }
                }
                checks.push(Check::gated(
                    "osc-witness-disjoint",
                    sep + GEOM_TOL,
                    format!("worst axis separation {sep:.3e}"),
                    MeasureError::SeparationViolation {
                        context: "open set witness images overlap".into(),
                        margin: sep,
                    },
                ));
            }
        }

        ValidationReport { checks }
    }
}

/// Standard Cantor-type spec on [0,1]: N homotheties with equal ratio laid out
/// by explicit translations.
pub fn interval_self_similar(
    ratios: &[f64],
    translations: &[f64],
    probs: &[f64],
) -> SelfSimilarSpec {
    let maps = ratios
        .iter()
        .zip(translations)
        .map(|(&c, &b)| Similitude::homothety(c, vec![b]))
        .collect();
    SelfSimilarSpec {
        maps,
        probs: probs.to_vec(),
        separation: Separation::Strong,
        bounding_box: BoundingBox::interval(0.0, 1.0),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cantor() -> SelfSimilarSpec {
        interval_self_similar(&[1.0 / 3.0, 1.0 / 3.0], &[0.0, 2.0 / 3.0], &[0.5, 0.5])
    }

    #[test]
    fn cantor_passes() {
        let report = cantor().validate();
        assert!(report.passed(), "{report:?}");
    }

    #[test]
    fn touching_images_fail_ssc() {
        let spec = interval_self_similar(&[0.5, 0.5], &[0.0, 0.5], &[0.5, 0.5]);
        let report = spec.validate();
        assert!(!report.passed());
        assert!(matches!(
            report.first_error(),
            Some(MeasureError::SeparationViolation { .. })
        ));
    }

    #[test]
    fn binary_maps_pass_with_osc_witness() {
        let mut spec = interval_self_similar(&[0.5, 0.5], &[0.0, 0.5], &[0.5, 0.5]);
        spec.separation = Separation::OpenSet { witness: BoundingBox::interval(0.0, 1.0) };
        assert!(spec.validate().passed());
    }

    #[test]
    fn dirac_like_probs_rejected() {
        let spec = interval_self_similar(&[1.0 / 3.0, 1.0 / 3.0], &[0.0, 2.0 / 3.0], &[1.0, 0.0]);
        let report = spec.validate();
        assert!(!report.passed());
        assert!(matches!(
            report.first_error(),
            Some(MeasureError::ProbabilityInvalid { .. })
        ));
    }
}
