//! Solvers for the implicit quantization-dimension equations of the four
//! families, plus the structural condition checkers that accompany them.

pub mod bisect;
pub mod carpet;
pub mod markov;
pub mod moran;
pub mod multiscale;
pub mod scc;
pub mod self_similar;
pub mod spectral;

pub use bisect::{bisect_decreasing, Bracket, RootResult};
pub use carpet::{carpet_conditions, solve_carpet, CarpetConditions, CarpetSolution};
pub use markov::{psi_at, solve_markov, MarkovSolution};
pub use moran::{levels_from_multiscale, moran_dkr_sequence, MoranLevel, MoranSequence};
pub use multiscale::{solve_multiscale, G0Verdict, MultiscaleSolution, SignPattern};
pub use scc::{strongly_connected_components, SccDecomposition};
pub use self_similar::{dimension_zero, solve_self_similar};
pub use spectral::{spectral_radius, Mat};

use serde::Serialize;

/// Components whose dimension value ties the global one within this
/// tolerance count as critical; also used for condition (A)/(B) equality.
pub const EQUALITY_TOL: f64 = 1e-9;

/// Solver output: the dimension value, the residual of its defining
/// equation, and family-specific extras (components, verdicts, sequences).
#[derive(Debug, Clone, Serialize)]
pub struct DimensionReport {
    pub family: String,
    pub r: f64,
    pub value: f64,
    pub residual: f64,
    pub iterations: usize,
    pub components: Vec<ComponentReport>,
    pub verdicts: VerdictSet,
    pub sequences: Vec<SequenceEntry>,
}

impl DimensionReport {
    pub fn plain(family: &str, r: f64, value: f64, residual: f64, iterations: usize) -> Self {
        DimensionReport {
            family: family.to_string(),
            r,
            value,
            residual,
            iterations,
            components: Vec::new(),
            verdicts: VerdictSet::default(),
            sequences: Vec::new(),
        }
    }
}

/// Per strongly-connected-component value for Markov-type measures.
#[derive(Debug, Clone, Serialize)]
pub struct ComponentReport {
    pub states: Vec<usize>,
    /// Dimension of the component sub-system; None when its spectral radius
    /// stays below 1 for every positive exponent.
    pub value: Option<f64>,
    pub residual: Option<f64>,
    /// Whether the component value ties the global dimension.
    pub critical: bool,
}

/// Structural verdicts; fields are None when they do not apply to the family.
#[derive(Debug, Clone, Serialize, Default)]
pub struct VerdictSet {
    pub statements: Vec<String>,
    pub condition_a: Option<bool>,
    pub condition_b: Option<bool>,
    pub critical_incomparable: Option<bool>,
    pub upper_coefficient_finite: Option<bool>,
    pub lower_coefficient_positive: Option<bool>,
    pub g0_membership: Option<String>,
    pub eventual_sign: Option<String>,
}

/// One entry of a per-level dimension sequence.
#[derive(Debug, Clone, Serialize)]
pub struct SequenceEntry {
    pub k: usize,
    pub value: f64,
    /// k * |value - limit|, the coefficient-convergence diagnostic.
    pub k_times_gap: f64,
}

/// Map the transformed root t = s/(s+r) back to the dimension s.
pub fn t_to_dimension(t: f64, r: f64) -> f64 {
    r * t / (1.0 - t)
}

/// Sorted powers p_i c_i^r; sorting makes every downstream evaluation
/// independent of the input order.
pub(crate) fn equation_terms(probs: &[f64], ratios: &[f64], r: f64) -> Vec<f64> {
    let mut terms: Vec<f64> = probs
        .iter()
        .zip(ratios)
        .map(|(&p, &c)| p * c.powf(r))
        .collect();
    terms.sort_by(|a, b| a.partial_cmp(b).unwrap());
    terms
}

/// Sum of x^t over the given term list.
pub(crate) fn power_sum(terms: &[f64], t: f64) -> f64 {
    terms.iter().map(|&x| x.powf(t)).sum()
}
