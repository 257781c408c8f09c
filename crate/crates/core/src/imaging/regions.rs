//! Foreground regions: 4-connected labelling, area filtering, and the
//! grow-then-merge step that turns component boxes into processing windows.

use super::raster::{BinaryMask, BoundingBox, RgbImage};

/// A connected set of foreground pixels (or the foreground inside a merged window).
#[derive(Debug, Clone, PartialEq)]
pub struct Region {
    pub bbox: BoundingBox,
    pub pixel_count: usize,
    /// Mean `(x, y)` of the member pixels.
    pub centroid: (f64, f64),
    /// Mean RGB of the member pixels; zero when no frame was supplied.
    pub mean_color: [f64; 3],
}

#[derive(Default)]
struct Accumulator {
    count: usize,
    sum_x: f64,
    sum_y: f64,
    sum_rgb: [f64; 3],
    x0: usize,
    y0: usize,
    x1: usize,
    y1: usize,
}

impl Accumulator {
    fn add(&mut self, x: usize, y: usize, frame: Option<&RgbImage>) {
        if self.count == 0 {
            (self.x0, self.y0, self.x1, self.y1) = (x, y, x, y);
        } else {
            self.x0 = self.x0.min(x);
            self.y0 = self.y0.min(y);
            self.x1 = self.x1.max(x);
            self.y1 = self.y1.max(y);
        }
        self.count += 1;
        self.sum_x += x as f64;
        self.sum_y += y as f64;
        if let Some(frame) = frame {
            let rgb = frame.get(x, y);
            for (acc, c) in self.sum_rgb.iter_mut().zip(rgb) {
                *acc += f64::from(c);
            }
        }
    }

    fn finish(self) -> Option<Region> {
        if self.count == 0 {
            return None;
        }
        let n = self.count as f64;
        Some(Region {
            bbox: BoundingBox::new(self.x0, self.y0, self.x1, self.y1),
            pixel_count: self.count,
            centroid: (self.sum_x / n, self.sum_y / n),
            mean_color: self.sum_rgb.map(|s| s / n),
        })
    }
}

/// Labels 4-connected foreground components in raster-scan order of their
/// first pixel.
pub fn connected_components(mask: &BinaryMask) -> Vec<Region> {
    label_components(mask, None)
}

/// As [`connected_components`], also averaging `frame` colors over each component.
pub fn connected_components_with_color(mask: &BinaryMask, frame: &RgbImage) -> Vec<Region> {
    assert_eq!(
        (mask.width(), mask.height()),
        (frame.width(), frame.height()),
        "mask and frame dimensions differ"
    );
    label_components(mask, Some(frame))
}

fn label_components(mask: &BinaryMask, frame: Option<&RgbImage>) -> Vec<Region> {
    let (w, h) = (mask.width(), mask.height());
    let bits = mask.bits();
    let mut visited = vec![false; w * h];
    let mut stack = Vec::new();
    let mut regions = Vec::new();

    for start in 0..w * h {
        if !bits[start] || visited[start] {
            continue;
        }
        let mut acc = Accumulator::default();
        visited[start] = true;
        stack.push(start);
        while let Some(idx) = stack.pop() {
            let (x, y) = (idx % w, idx / w);
            acc.add(x, y, frame);
            let mut visit = |n: usize| {
                if bits[n] && !visited[n] {
                    visited[n] = true;
                    stack.push(n);
                }
            };
            if x > 0 {
                visit(idx - 1);
            }
            if x + 1 < w {
                visit(idx + 1);
            }
            if y > 0 {
                visit(idx - w);
            }
            if y + 1 < h {
                visit(idx + w);
            }
        }
        regions.extend(acc.finish());
    }
    regions
}

/// Keeps regions with strictly more than `min_area` pixels.
pub fn filter_by_area(regions: Vec<Region>, min_area: usize) -> Vec<Region> {
    regions
        .into_iter()
        .filter(|r| r.pixel_count > min_area)
        .collect()
}

/// Grows each box by `margin` (clamped to the raster) and merges touching or
/// overlapping boxes into their union until no two boxes touch.
///
/// The result is sorted by `(y0, x0)` and is pairwise disjoint.
pub fn enlarge_and_merge(
    boxes: &[BoundingBox],
    margin: usize,
    width: usize,
    height: usize,
) -> Vec<BoundingBox> {
    let mut merged: Vec<BoundingBox> = boxes
        .iter()
        .map(|b| b.grow(margin, width, height))
        .collect();

    'outer: loop {
        for i in 0..merged.len() {
            for j in i + 1..merged.len() {
                if merged[i].touches(&merged[j]) {
                    let other = merged.swap_remove(j);
                    merged[i] = merged[i].union(&other);
                    continue 'outer;
                }
            }
        }
        break;
    }
    merged.sort_by_key(|b| (b.y0, b.x0, b.y1, b.x1));
    merged
}

/// Statistics of the foreground pixels of `mask` inside `bbox`, or `None`
/// if the window holds no foreground.
pub fn region_in_box(mask: &BinaryMask, frame: &RgbImage, bbox: &BoundingBox) -> Option<Region> {
    let mut acc = Accumulator::default();
    for y in bbox.y0..=bbox.y1 {
        for x in bbox.x0..=bbox.x1 {
            if mask.get(x, y) {
                acc.add(x, y, Some(frame));
            }
        }
    }
    acc.finish().map(|r| Region { bbox: *bbox, ..r })
}
