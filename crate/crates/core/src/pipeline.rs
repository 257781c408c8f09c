//! Per-frame enhancement workflow.
//!
//! For every incoming frame: label the coarse mask, drop small components,
//! grow and merge their boxes, clear everything outside the boxes, filter each
//! box with a volume built from matching regions in recent frames, and
//! threshold the filtered windows back into the mask.

use std::collections::VecDeque;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::imaging::{
    center_offset, connected_components, enlarge_and_merge, filter_by_area, region_in_box,
    to_grayscale, BinaryMask, BoundingBox, GrayImage, PadMode, Region, RgbImage,
};
use crate::integrated::{binarize, integrated_filter, FilterParams};
use crate::tree::{GuidanceVolume, VolumeLayer};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PipelineParams {
    /// Components need strictly more pixels than this to be kept.
    pub area_threshold: usize,
    /// Maximum centroid distance (pixels) for cross-frame matching.
    pub match_radius: f64,
    /// Box growth on each side, in pixels.
    pub margin: usize,
    pub filter: FilterParams,
}

impl Default for PipelineParams {
    fn default() -> Self {
        Self {
            area_threshold: 50,
            match_radius: 50.0,
            margin: 15,
            filter: FilterParams::default(),
        }
    }
}

impl PipelineParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.match_radius > 0.0 && self.match_radius.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "match radius must be positive, got {}",
                self.match_radius
            )));
        }
        self.filter.validate()
    }
}

/// A frame with its coarse mask and the per-frame analysis (steps i–iii).
#[derive(Debug, Clone)]
pub struct FrameEntry {
    pub frame: RgbImage,
    pub gray: GrayImage,
    pub coarse: BinaryMask,
    /// Coarse mask with everything outside `boxes` cleared.
    pub base: BinaryMask,
    /// Grown and merged windows, pairwise disjoint.
    pub boxes: Vec<BoundingBox>,
    /// Foreground statistics of `base` inside each box, aligned with `boxes`.
    pub regions: Vec<Region>,
}

impl FrameEntry {
    pub fn analyze(frame: RgbImage, coarse: BinaryMask, params: &PipelineParams) -> Result<Self> {
        let (w, h) = (frame.width(), frame.height());
        if (coarse.width(), coarse.height()) != (w, h) {
            return Err(Error::DimensionMismatch(format!(
                "frame is {w}x{h}, mask is {}x{}",
                coarse.width(),
                coarse.height()
            )));
        }
        let kept = filter_by_area(connected_components(&coarse), params.area_threshold);
        let component_boxes: Vec<_> = kept.iter().map(|r| r.bbox).collect();
        let boxes = enlarge_and_merge(&component_boxes, params.margin, w, h);
        let base = noise_removal(&coarse, &boxes);
        let regions = boxes
            .iter()
            .map(|b| region_in_box(&base, &frame, b).expect("merged box holds a kept component"))
            .collect();
        Ok(Self {
            gray: to_grayscale(&frame),
            frame,
            coarse,
            base,
            boxes,
            regions,
        })
    }

    pub fn width(&self) -> usize {
        self.frame.width()
    }

    pub fn height(&self) -> usize {
        self.frame.height()
    }
}

/// The last `capacity` analyzed frames, newest first.
#[derive(Debug, Clone)]
pub struct FrameHistory {
    capacity: usize,
    entries: VecDeque<FrameEntry>,
}

impl FrameHistory {
    pub fn new(capacity: usize) -> Self {
        assert!(capacity >= 1, "history capacity must be >= 1");
        Self {
            capacity,
            entries: VecDeque::with_capacity(capacity),
        }
    }

    pub fn push(&mut self, entry: FrameEntry) {
        self.entries.push_front(entry);
        self.entries.truncate(self.capacity);
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// The newest entry.
    pub fn current(&self) -> Option<&FrameEntry> {
        self.entries.front()
    }

    /// Entries before the current one, newest first.
    pub fn past(&self) -> impl Iterator<Item = &FrameEntry> {
        self.entries.iter().skip(1)
    }

    pub fn get(&self, age: usize) -> Option<&FrameEntry> {
        self.entries.get(age)
    }
}

/// Clears every foreground pixel outside the union of `boxes`.
pub fn noise_removal(mask: &BinaryMask, boxes: &[BoundingBox]) -> BinaryMask {
    BinaryMask::from_fn(mask.width(), mask.height(), |x, y| {
        mask.get(x, y) && boxes.iter().any(|b| b.contains(x, y))
    })
}

fn color_distance(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).powi(2))
        .sum::<f64>()
        .sqrt()
}

/// For each past frame (newest first), the index of the region matched to
/// `current`, if any.
///
/// Candidates have a centroid within `match_radius` (inclusive); among several
/// the one with the nearest mean color wins, the earlier index on ties.
pub fn match_region(
    current: &Region,
    history: &FrameHistory,
    match_radius: f64,
) -> Vec<Option<usize>> {
    let (cx, cy) = current.centroid;
    history
        .past()
        .map(|entry| {
            let mut best: Option<(usize, f64)> = None;
            for (idx, candidate) in entry.regions.iter().enumerate() {
                let (px, py) = candidate.centroid;
                if (px - cx).hypot(py - cy) > match_radius {
                    continue;
                }
                let d = color_distance(&current.mean_color, &candidate.mean_color);
                if best.is_none_or(|(_, bd)| d < bd) {
                    best = Some((idx, d));
                }
            }
            best.map(|(idx, _)| idx)
        })
        .collect()
}

/// Stacks the current window and its matches (at most `k - 1`) into a
/// center-aligned volume.
///
/// Guidance crops are padded by edge replication, mask crops with background.
pub fn build_volume(
    history: &FrameHistory,
    region_index: usize,
    matches: &[Option<usize>],
    k: usize,
) -> Result<GuidanceVolume> {
    let current = history
        .current()
        .ok_or_else(|| Error::InvalidParameter("empty frame history".into()))?;
    let current_box = current.boxes[region_index];

    let mut crops = vec![(
        current.gray.crop(&current_box)?,
        current.base.crop(&current_box)?,
    )];
    for (entry, idx) in history.past().zip(matches) {
        if crops.len() >= k {
            break;
        }
        if let Some(idx) = idx {
            let bbox = entry.boxes[*idx];
            crops.push((entry.gray.crop(&bbox)?, entry.coarse.crop(&bbox)?));
        }
    }

    let canvas_w = crops.iter().map(|(g, _)| g.width()).max().unwrap_or(1);
    let canvas_h = crops.iter().map(|(g, _)| g.height()).max().unwrap_or(1);
    let layers = crops
        .into_iter()
        .map(|(gray, mask)| {
            Ok(VolumeLayer {
                guidance: gray.pad_center(canvas_w, canvas_h, PadMode::Replicate)?,
                input: mask
                    .pad_center(canvas_w, canvas_h, PadMode::Zero)?
                    .to_gray(),
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let (ox, oy) = center_offset(
        current_box.width(),
        current_box.height(),
        canvas_w,
        canvas_h,
    );
    GuidanceVolume::new(layers)?.with_current_window(BoundingBox::new(
        ox,
        oy,
        ox + current_box.width() - 1,
        oy + current_box.height() - 1,
    ))
}

/// Filtered gray values for one merged box of the current frame.
#[derive(Debug, Clone, PartialEq)]
pub struct RegionOutput {
    pub bbox: BoundingBox,
    /// Box-sized filter output.
    pub gray: GrayImage,
    /// Number of stacked frames used.
    pub depth: usize,
}

/// Runs matching, volume construction and the integrated filter for box
/// `region_index` of the current frame.
pub fn filter_region(
    history: &FrameHistory,
    region_index: usize,
    params: &PipelineParams,
) -> Result<RegionOutput> {
    let current = history
        .current()
        .ok_or_else(|| Error::InvalidParameter("empty frame history".into()))?;
    let region = &current.regions[region_index];
    let matches = match_region(region, history, params.match_radius);
    let volume = build_volume(history, region_index, &matches, params.filter.k)?;
    let filtered = integrated_filter(&volume, &params.filter)?;
    Ok(RegionOutput {
        bbox: current.boxes[region_index],
        gray: filtered.crop(&volume.current_window())?,
        depth: volume.depth(),
    })
}

/// Gray composite of region outputs: filtered values inside boxes, zero
/// elsewhere. Overlaps keep the maximum, so binarizing it equals OR-ing the
/// binarized regions.
pub fn compose_gray(width: usize, height: usize, outputs: &[RegionOutput]) -> GrayImage {
    let mut data = vec![0.0f64; width * height];
    for out in outputs {
        let b = out.bbox;
        for y in b.y0..=b.y1 {
            for x in b.x0..=b.x1 {
                let v = out.gray.get(x - b.x0, y - b.y0);
                let slot = &mut data[y * width + x];
                *slot = slot.max(v);
            }
        }
    }
    GrayImage::new(width, height, data).expect("composite of valid gray windows")
}

/// Binary composite: each region is thresholded and OR-ed into an empty mask.
/// Pixels outside every box stay background.
pub fn compose_mask(
    width: usize,
    height: usize,
    outputs: &[RegionOutput],
    threshold: f64,
) -> BinaryMask {
    let mut mask = BinaryMask::zeros(width, height);
    for out in outputs {
        let b = out.bbox;
        let window = binarize(&out.gray, threshold);
        for y in b.y0..=b.y1 {
            for x in b.x0..=b.x1 {
                if window.get(x - b.x0, y - b.y0) {
                    mask.set(x, y, true);
                }
            }
        }
    }
    mask
}

/// Result of enhancing one frame.
#[derive(Debug, Clone)]
pub struct Enhancement {
    pub mask: BinaryMask,
    /// Pre-threshold composite (zero outside boxes).
    pub gray: GrayImage,
    pub regions: Vec<RegionOutput>,
}

/// Enhances the newest frame of `history`. Boxes are filtered in parallel;
/// composition is order-independent.
pub fn enhance_frame_detailed(
    history: &FrameHistory,
    params: &PipelineParams,
) -> Result<Enhancement> {
    params.validate()?;
    let current = history
        .current()
        .ok_or_else(|| Error::InvalidParameter("empty frame history".into()))?;
    let outputs = (0..current.boxes.len())
        .into_par_iter()
        .map(|i| filter_region(history, i, params))
        .collect::<Result<Vec<_>>>()?;
    let (w, h) = (current.width(), current.height());
    Ok(Enhancement {
        mask: compose_mask(w, h, &outputs, params.filter.threshold),
        gray: compose_gray(w, h, &outputs),
        regions: outputs,
    })
}

pub fn enhance_frame(history: &FrameHistory, params: &PipelineParams) -> Result<BinaryMask> {
    enhance_frame_detailed(history, params).map(|e| e.mask)
}

/// Stateful driver: feed frames in time order, get enhanced masks back.
#[derive(Debug, Clone)]
pub struct Enhancer {
    params: PipelineParams,
    history: FrameHistory,
}

impl Enhancer {
    pub fn new(params: PipelineParams) -> Result<Self> {
        params.validate()?;
        Ok(Self {
            history: FrameHistory::new(params.filter.k),
            params,
        })
    }

    pub fn params(&self) -> &PipelineParams {
        &self.params
    }

    pub fn history(&self) -> &FrameHistory {
        &self.history
    }

    pub fn process(&mut self, frame: RgbImage, coarse: BinaryMask) -> Result<Enhancement> {
        if let Some(prev) = self.history.current() {
            if (prev.width(), prev.height()) != (frame.width(), frame.height()) {
                return Err(Error::DimensionMismatch(format!(
                    "frame is {}x{}, sequence is {}x{}",
                    frame.width(),
                    frame.height(),
                    prev.width(),
                    prev.height()
                )));
            }
        }
        let entry = FrameEntry::analyze(frame, coarse, &self.params)?;
        self.history.push(entry);
        enhance_frame_detailed(&self.history, &self.params)
    }
}
