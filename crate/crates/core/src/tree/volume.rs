use crate::error::{Error, Result};
use crate::imaging::{BoundingBox, GrayImage};

use super::filter::{tree_filter_fast, TreeFilterParams};
use super::graph::{build_spatial_graph, build_spatiotemporal_graph};
use super::mst::kruskal_mst;

/// One time slice of a volume: guidance intensities and the mask values to filter.
#[derive(Debug, Clone, PartialEq)]
pub struct VolumeLayer {
    pub guidance: GrayImage,
    pub input: GrayImage,
}

/// Center-aligned stack of equally sized layers, newest (the current frame) first.
#[derive(Debug, Clone, PartialEq)]
pub struct GuidanceVolume {
    layers: Vec<VolumeLayer>,
    current: BoundingBox,
}

impl GuidanceVolume {
    pub fn new(layers: Vec<VolumeLayer>) -> Result<Self> {
        let first = layers
            .first()
            .ok_or_else(|| Error::InvalidParameter("volume needs at least one layer".into()))?;
        let (w, h) = (first.guidance.width(), first.guidance.height());
        for (i, layer) in layers.iter().enumerate() {
            for img in [&layer.guidance, &layer.input] {
                if (img.width(), img.height()) != (w, h) {
                    return Err(Error::DimensionMismatch(format!(
                        "layer {i} is {}x{}, layer 0 is {w}x{h}",
                        img.width(),
                        img.height()
                    )));
                }
            }
        }
        Ok(Self {
            layers,
            current: BoundingBox::new(0, 0, w - 1, h - 1),
        })
    }

    /// Marks which part of layer 0 holds real (unpadded) pixels.
    pub fn with_current_window(mut self, window: BoundingBox) -> Result<Self> {
        if !window.fits_within(self.width(), self.height()) {
            return Err(Error::OutOfBounds {
                x0: window.x0,
                y0: window.y0,
                x1: window.x1,
                y1: window.y1,
                width: self.width(),
                height: self.height(),
            });
        }
        self.current = window;
        Ok(self)
    }

    pub fn layers(&self) -> &[VolumeLayer] {
        &self.layers
    }

    pub fn current(&self) -> &VolumeLayer {
        &self.layers[0]
    }

    /// Unpadded extent of the current frame within the canvas.
    pub fn current_window(&self) -> BoundingBox {
        self.current
    }

    /// Number of stacked layers.
    pub fn depth(&self) -> usize {
        self.layers.len()
    }

    pub fn width(&self) -> usize {
        self.layers[0].guidance.width()
    }

    pub fn height(&self) -> usize {
        self.layers[0].guidance.height()
    }
}

/// Tree-filters the whole volume and returns the current-layer slice, unclamped.
pub fn spatiotemporal_tree_filter_unclamped(
    volume: &GuidanceVolume,
    params: &TreeFilterParams,
) -> Result<Vec<f64>> {
    params.validate()?;
    let tree = kruskal_mst(&build_spatiotemporal_graph(volume))?;
    let input: Vec<f64> = volume
        .layers()
        .iter()
        .flat_map(|l| l.input.data().iter().copied())
        .collect();
    let mut out = tree_filter_fast(&tree, &input, params.sigma)?;
    out.truncate(volume.width() * volume.height());
    Ok(out)
}

/// Tree filter over the spatiotemporal volume; the current-frame slice.
pub fn spatiotemporal_tree_filter(
    volume: &GuidanceVolume,
    params: &TreeFilterParams,
) -> Result<GrayImage> {
    let out = spatiotemporal_tree_filter_unclamped(volume, params)?;
    GrayImage::from_clamped(volume.width(), volume.height(), out)
}

/// Single-image tree filter.
pub fn spatial_tree_filter(
    guidance: &GrayImage,
    input: &GrayImage,
    params: &TreeFilterParams,
) -> Result<GrayImage> {
    params.validate()?;
    if (guidance.width(), guidance.height()) != (input.width(), input.height()) {
        return Err(Error::DimensionMismatch(
            "guidance and input differ in size".into(),
        ));
    }
    let tree = kruskal_mst(&build_spatial_graph(guidance))?;
    let out = tree_filter_fast(&tree, input.data(), params.sigma)?;
    GrayImage::from_clamped(guidance.width(), guidance.height(), out)
}
