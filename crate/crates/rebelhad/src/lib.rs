//! Background feature enhancement for hyperspectral anomaly detection.
//!
//! The pipeline has two training stages followed by parameter-free detection:
//!
//! 1. A spectral enhancement network is trained by reverse distillation: a
//!    mostly-frozen encoder extracts multi-scale spectral features, a trainable
//!    decoder reconstructs them, and a spectral alignment head regularizes the
//!    encoder/decoder feature gap. The trained model is pruned down to a small
//!    spectral feature-enhancement network (the teacher).
//! 2. A spatial branch is trained to *diverge* from the frozen teacher via
//!    cross-covariance and cosine decorrelation losses, with a variance hinge
//!    against feature collapse and a reconstruction anchor so the learned
//!    spatial features stay meaningful.
//!
//! At inference both branches produce additive feature maps for the input
//! cube; the enhanced cube is scored by a global RX (Mahalanobis) detector,
//! either per branch with multiplicative score fusion or jointly with additive
//! feature fusion. Evaluation is ROC/AUC/mAUC, plus a PCA separability
//! diagnostic.
//!
//! Everything is self-contained: tensors, convolutions and their analytic
//! gradients, Adam, SSIM, the synthetic scene generator, and the evaluators
//! are all implemented here in double precision with deterministic seeding.
//!
//! See the `examples/` directory for one runnable program per capability, and
//! the `rebelhad` binary for the file-based command line interface.

pub mod cli;
pub mod detector;
pub mod error;
pub mod eval;
pub mod hsidata;
pub mod losses;
pub mod networks;
pub mod numerics;
pub mod rng;
pub mod trainer;

mod fsutil;

pub use error::{Error, Result};
pub use hsidata::{GroundTruthMask, HsiCube, SceneSpec};
pub use numerics::{AdamState, ParamTree, Tensor};
