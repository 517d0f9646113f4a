//! Fractal measures, their quantization dimensions, and empirical optimal
//! codebook search.
//!
//! The crate builds four families of fractal probability measures
//! (self-similar, grid carpets, Markov-type graph-directed, multiscale
//! Moran), solves the implicit equations for their theoretical quantization
//! dimensions, and checks the predictions empirically through Lloyd-style
//! codebook optimization, partition-based error bounds, and
//! quantization-coefficient diagnostics.

pub mod analysis;
pub mod bounds;
pub mod config;
pub mod error;
pub mod geom;
pub mod measure;
pub mod quantize;
pub mod rng;
pub mod solve;

pub use error::{AnalysisError, MeasureError, QuantError, SolveError};
pub use geom::BoundingBox;
pub use measure::{
    CarpetSpec, CylinderRecord, MarkovSpec, Measure, MeasureSpec, MultiscaleSpec, Partition,
    Pattern, PatternSequence, SampleCloud, SelfSimilarSpec, Separation, Similitude,
    ValidationReport,
};
pub use solve::DimensionReport;
