//! Weighted blend of the spatiotemporal tree filter (global) and the guided
//! filter (local), followed by thresholding.

use crate::error::{Error, Result};
use crate::guided::{guided_filter_unclamped, GuidedParams};
use crate::imaging::{BinaryMask, GrayImage};
use crate::tree::{spatiotemporal_tree_filter_unclamped, GuidanceVolume, TreeFilterParams};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FilterParams {
    /// Weight of the tree term; the guided term gets `1 - w1`.
    pub w1: f64,
    pub guided: GuidedParams,
    pub tree: TreeFilterParams,
    /// Maximum number of stacked frames, current included.
    pub k: usize,
    /// Binarization threshold on the `[0, 255]` output.
    pub threshold: f64,
}

impl Default for FilterParams {
    fn default() -> Self {
        Self {
            w1: 0.8,
            guided: GuidedParams::default(),
            tree: TreeFilterParams::default(),
            k: 4,
            threshold: 20.0,
        }
    }
}

impl FilterParams {
    pub fn w2(&self) -> f64 {
        1.0 - self.w1
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.w1) {
            return Err(Error::InvalidParameter(format!(
                "w1 must lie in [0, 1], got {}",
                self.w1
            )));
        }
        if self.k < 1 {
            return Err(Error::InvalidParameter("k must be >= 1".into()));
        }
        if !(0.0..=255.0).contains(&self.threshold) {
            return Err(Error::InvalidParameter(format!(
                "binarization threshold must lie in [0, 255], got {}",
                self.threshold
            )));
        }
        self.guided.validate()?;
        self.tree.validate()
    }
}

/// `w1 * tree(volume) + w2 * guided(current layer)`, clamped to `[0, 255]`.
///
/// A term whose weight is zero is skipped; the result is identical either way.
pub fn integrated_filter(volume: &GuidanceVolume, params: &FilterParams) -> Result<GrayImage> {
    params.validate()?;
    if volume.depth() > params.k {
        return Err(Error::InvalidParameter(format!(
            "volume has {} layers but k = {}",
            volume.depth(),
            params.k
        )));
    }
    let (w1, w2) = (params.w1, params.w2());
    let current = volume.current();
    let n = volume.width() * volume.height();

    let tree = if w1 > 0.0 {
        spatiotemporal_tree_filter_unclamped(volume, &params.tree)?
    } else {
        vec![0.0; n]
    };
    let guided = if w2 > 0.0 {
        guided_filter_unclamped(&current.guidance, &current.input, &params.guided)?
    } else {
        vec![0.0; n]
    };
    let blended = tree
        .iter()
        .zip(&guided)
        .map(|(t, g)| w1 * t + w2 * g)
        .collect();
    GrayImage::from_clamped(volume.width(), volume.height(), blended)
}

/// Foreground where the value reaches `threshold` (inclusive).
pub fn binarize(gray: &GrayImage, threshold: f64) -> BinaryMask {
    BinaryMask::from_bools(
        gray.width(),
        gray.height(),
        gray.data().iter().map(|&v| v >= threshold).collect(),
    )
    .expect("dimensions come from a valid image")
}
