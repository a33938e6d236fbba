//! Desk-scale continual learning with hyperspherical feature perturbation.
//!
//! The crate trains a small MLP with a cosine classifier on a sequence of
//! class-incremental tasks, replaying old data from a reservoir-sampled
//! memory buffer (or from stored class-mean features in the proxy setting).
//! Replayed representations can be perturbed on their hypersphere by one of
//! six variants — isotropic Gaussian, von Mises–Fisher, dropout-based (old or
//! new source), variation transfer, and weight-adversarial perturbation — to
//! counteract the representation collapse that a small buffer induces.
//!
//! Module map:
//! - [`geometry`]: sphere projection and the norm-preserving perturbation
//!   composition shared by every variant.
//! - [`randkit`]: splittable counter-based RNG, Gaussian vectors, exact vMF
//!   sampling and density.
//! - [`net`]: the MLP encoder, cosine classifier, manual backprop with
//!   feature-level gradient injection, weight deltas, SGD.
//! - [`perturb`]: the six perturbation variants plus fixed-angle projection.
//! - [`engine`]: task streams, memory buffer, proxy store, the offline /
//!   online / proxy training loops, evaluation.
//! - [`metrics`]: angle-deviation, gradient-spectrum, classifier-angle and
//!   angular-Fisher diagnostics, plus the large-margin inequality checker.
//! - [`dataio`]: synthetic benchmark generation, IDX parsing, result files.
//! - [`runcfg`]: experiment configuration, validation and provenance hashing.

pub mod dataio;
pub mod engine;
pub mod geometry;
pub mod metrics;
pub mod net;
pub mod perturb;
pub mod randkit;
pub mod runcfg;

pub use geometry::{FeatureVector, UnitVector};
