//! Refinement of coarse binary change-detection masks.
//!
//! Each foreground window is filtered with a blend of a local guided filter
//! and a global minimum-spanning-tree filter whose graph spans the current
//! frame and matching windows from the previous few frames. The filtered gray
//! values are thresholded back into a mask.
//!
//! ```no_run
//! use maskfilter::{Enhancer, PipelineParams};
//! # fn frames() -> Vec<(maskfilter::RgbImage, maskfilter::BinaryMask)> { Vec::new() }
//! let mut enhancer = Enhancer::new(PipelineParams::default())?;
//! for (frame, coarse) in frames() {
//!     let refined = enhancer.process(frame, coarse)?.mask;
//!     # let _ = refined;
//! }
//! # Ok::<(), maskfilter::Error>(())
//! ```

pub mod config;
pub mod error;
pub mod guided;
pub mod imaging;
pub mod integrated;
pub mod io;
pub mod metrics;
pub mod pipeline;
pub mod synth;
pub mod tree;

pub use error::{Error, Result};
pub use guided::{guided_filter, GuidedParams};
pub use imaging::{BinaryMask, BoundingBox, GrayImage, Region, RgbImage};
pub use integrated::{binarize, integrated_filter, FilterParams};
pub use metrics::{confusion, roc_sweep, Confusion, GroundTruth, RocPoint};
pub use pipeline::{
    enhance_frame, Enhancement, Enhancer, FrameEntry, FrameHistory, PipelineParams,
};
pub use tree::{GuidanceVolume, TreeFilterParams, VolumeLayer};
