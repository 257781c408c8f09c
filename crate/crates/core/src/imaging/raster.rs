use crate::error::{Error, Result};

/// How `pad_center` fills the border around the source raster.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PadMode {
    /// Copy the nearest edge pixel outward.
    Replicate,
    /// Fill with zero (background for masks).
    Zero,
}

/// Inclusive pixel rectangle: `x0..=x1`, `y0..=y1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BoundingBox {
    pub x0: usize,
    pub y0: usize,
    pub x1: usize,
    pub y1: usize,
}

impl BoundingBox {
    /// Panics if the corners are not ordered.
    pub fn new(x0: usize, y0: usize, x1: usize, y1: usize) -> Self {
        assert!(x0 <= x1 && y0 <= y1, "unordered box corners");
        Self { x0, y0, x1, y1 }
    }

    pub fn width(&self) -> usize {
        self.x1 - self.x0 + 1
    }

    pub fn height(&self) -> usize {
        self.y1 - self.y0 + 1
    }

    pub fn area(&self) -> usize {
        self.width() * self.height()
    }

    pub fn contains(&self, x: usize, y: usize) -> bool {
        x >= self.x0 && x <= self.x1 && y >= self.y0 && y <= self.y1
    }

    pub fn fits_within(&self, width: usize, height: usize) -> bool {
        self.x1 < width && self.y1 < height
    }

    pub fn intersects(&self, other: &Self) -> bool {
        self.x0 <= other.x1 && other.x0 <= self.x1 && self.y0 <= other.y1 && other.y0 <= self.y1
    }

    /// True when the boxes share a pixel or are 8-adjacent.
    pub fn touches(&self, other: &Self) -> bool {
        self.x0 <= other.x1 + 1
            && other.x0 <= self.x1 + 1
            && self.y0 <= other.y1 + 1
            && other.y0 <= self.y1 + 1
    }

    pub fn union(&self, other: &Self) -> Self {
        Self {
            x0: self.x0.min(other.x0),
            y0: self.y0.min(other.y0),
            x1: self.x1.max(other.x1),
            y1: self.y1.max(other.y1),
        }
    }

    /// Grows the box by `margin` on every side, clamped to a `width`x`height` raster.
    pub fn grow(&self, margin: usize, width: usize, height: usize) -> Self {
        Self {
            x0: self.x0.saturating_sub(margin),
            y0: self.y0.saturating_sub(margin),
            x1: (self.x1 + margin).min(width - 1),
            y1: (self.y1 + margin).min(height - 1),
        }
    }

    pub fn center(&self) -> (f64, f64) {
        (
            (self.x0 + self.x1) as f64 / 2.0,
            (self.y0 + self.y1) as f64 / 2.0,
        )
    }

    fn check(&self, width: usize, height: usize) -> Result<()> {
        if self.fits_within(width, height) {
            Ok(())
        } else {
            Err(Error::OutOfBounds {
                x0: self.x0,
                y0: self.y0,
                x1: self.x1,
                y1: self.y1,
                width,
                height,
            })
        }
    }
}

fn check_dims(width: usize, height: usize, len: usize, per_pixel: usize) -> Result<()> {
    if width == 0 || height == 0 {
        return Err(Error::InvalidRaster(format!(
            "raster must be at least 1x1, got {width}x{height}"
        )));
    }
    if len != width * height * per_pixel {
        return Err(Error::InvalidRaster(format!(
            "expected {} samples for {width}x{height}, got {len}",
            width * height * per_pixel
        )));
    }
    Ok(())
}

fn crop_slice<T: Copy>(data: &[T], width: usize, bbox: &BoundingBox) -> Vec<T> {
    let mut out = Vec::with_capacity(bbox.area());
    for y in bbox.y0..=bbox.y1 {
        let row = y * width;
        out.extend_from_slice(&data[row + bbox.x0..=row + bbox.x1]);
    }
    out
}

/// Offsets of a `width`x`height` source centered on a `target_w`x`target_h`
/// canvas. Odd slack goes to the bottom/right.
pub(crate) fn center_offset(
    width: usize,
    height: usize,
    target_w: usize,
    target_h: usize,
) -> (usize, usize) {
    ((target_w - width) / 2, (target_h - height) / 2)
}

fn pad_slice<T: Copy>(
    data: &[T],
    width: usize,
    height: usize,
    target_w: usize,
    target_h: usize,
    zero: Option<T>,
) -> Vec<T> {
    let (ox, oy) = center_offset(width, height, target_w, target_h);
    let mut out = Vec::with_capacity(target_w * target_h);
    for ty in 0..target_h {
        let sy = ty.saturating_sub(oy).min(height - 1);
        let inside_y = ty >= oy && ty < oy + height;
        for tx in 0..target_w {
            let inside = inside_y && tx >= ox && tx < ox + width;
            let sample = match zero {
                Some(z) if !inside => z,
                _ => data[sy * width + tx.saturating_sub(ox).min(width - 1)],
            };
            out.push(sample);
        }
    }
    out
}

fn check_pad(width: usize, height: usize, target_w: usize, target_h: usize) -> Result<()> {
    if target_w < width || target_h < height {
        return Err(Error::InvalidParameter(format!(
            "cannot pad {width}x{height} down to {target_w}x{target_h}"
        )));
    }
    Ok(())
}

/// Grayscale raster with row-major samples in `[0, 255]`.
#[derive(Debug, Clone, PartialEq)]
pub struct GrayImage {
    width: usize,
    height: usize,
    data: Vec<f64>,
}

impl GrayImage {
    pub fn new(width: usize, height: usize, data: Vec<f64>) -> Result<Self> {
        check_dims(width, height, data.len(), 1)?;
        if let Some(bad) = data
            .iter()
            .find(|v| !(v.is_finite() && (0.0..=255.0).contains(*v)))
        {
            return Err(Error::InvalidRaster(format!(
                "gray sample {bad} outside [0, 255]"
            )));
        }
        Ok(Self {
            width,
            height,
            data,
        })
    }

    /// Builds an image from arbitrary finite samples, clamping them to `[0, 255]`.
    pub fn from_clamped(width: usize, height: usize, mut data: Vec<f64>) -> Result<Self> {
        check_dims(width, height, data.len(), 1)?;
        for v in data.iter_mut() {
            if v.is_nan() {
                return Err(Error::InvalidRaster("NaN gray sample".into()));
            }
            *v = v.clamp(0.0, 255.0);
        }
        Ok(Self {
            width,
            height,
            data,
        })
    }

    /// Panics if `value` is outside `[0, 255]` or the size is zero.
    pub fn filled(width: usize, height: usize, value: f64) -> Self {
        Self::new(width, height, vec![value; width * height]).expect("valid fill")
    }

    pub fn from_fn(
        width: usize,
        height: usize,
        mut f: impl FnMut(usize, usize) -> f64,
    ) -> Result<Self> {
        let mut data = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                data.push(f(x, y));
            }
        }
        Self::new(width, height, data)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn into_data(self) -> Vec<f64> {
        self.data
    }

    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.data[y * self.width + x]
    }

    pub fn crop(&self, bbox: &BoundingBox) -> Result<Self> {
        bbox.check(self.width, self.height)?;
        Ok(Self {
            width: bbox.width(),
            height: bbox.height(),
            data: crop_slice(&self.data, self.width, bbox),
        })
    }

    pub fn pad_center(&self, target_w: usize, target_h: usize, mode: PadMode) -> Result<Self> {
        check_pad(self.width, self.height, target_w, target_h)?;
        let zero = (mode == PadMode::Zero).then_some(0.0);
        Ok(Self {
            width: target_w,
            height: target_h,
            data: pad_slice(
                &self.data,
                self.width,
                self.height,
                target_w,
                target_h,
                zero,
            ),
        })
    }

    pub fn min_max(&self) -> (f64, f64) {
        self.data
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
                (lo.min(v), hi.max(v))
            })
    }
}

/// 8-bit RGB raster.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RgbImage {
    width: usize,
    height: usize,
    data: Vec<[u8; 3]>,
}

impl RgbImage {
    pub fn new(width: usize, height: usize, data: Vec<[u8; 3]>) -> Result<Self> {
        check_dims(width, height, data.len(), 1)?;
        Ok(Self {
            width,
            height,
            data,
        })
    }

    /// Builds from interleaved `r, g, b` bytes.
    pub fn from_interleaved(width: usize, height: usize, bytes: &[u8]) -> Result<Self> {
        check_dims(width, height, bytes.len(), 3)?;
        let data = bytes.chunks_exact(3).map(|c| [c[0], c[1], c[2]]).collect();
        Ok(Self {
            width,
            height,
            data,
        })
    }

    pub fn filled(width: usize, height: usize, rgb: [u8; 3]) -> Self {
        Self::new(width, height, vec![rgb; width * height]).expect("valid fill")
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn pixels(&self) -> &[[u8; 3]] {
        &self.data
    }

    pub fn get(&self, x: usize, y: usize) -> [u8; 3] {
        self.data[y * self.width + x]
    }

    pub fn set(&mut self, x: usize, y: usize, rgb: [u8; 3]) {
        self.data[y * self.width + x] = rgb;
    }

    pub fn to_interleaved(&self) -> Vec<u8> {
        self.data.iter().flatten().copied().collect()
    }
}

/// Two-level mask: foreground (255) or background (0).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BinaryMask {
    width: usize,
    height: usize,
    data: Vec<bool>,
}

impl BinaryMask {
    pub fn zeros(width: usize, height: usize) -> Self {
        assert!(width > 0 && height > 0, "mask must be at least 1x1");
        Self {
            width,
            height,
            data: vec![false; width * height],
        }
    }

    pub fn from_bools(width: usize, height: usize, data: Vec<bool>) -> Result<Self> {
        check_dims(width, height, data.len(), 1)?;
        Ok(Self {
            width,
            height,
            data,
        })
    }

    /// Strict constructor: every value must be exactly 0 or 255.
    pub fn from_values(width: usize, height: usize, values: &[u8]) -> Result<Self> {
        check_dims(width, height, values.len(), 1)?;
        let data = values
            .iter()
            .map(|&v| match v {
                0 => Ok(false),
                255 => Ok(true),
                other => Err(Error::InvalidRaster(format!(
                    "mask value {other} is not 0 or 255"
                ))),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            width,
            height,
            data,
        })
    }

    pub fn from_fn(width: usize, height: usize, mut f: impl FnMut(usize, usize) -> bool) -> Self {
        let mut mask = Self::zeros(width, height);
        for y in 0..height {
            for x in 0..width {
                mask.data[y * width + x] = f(x, y);
            }
        }
        mask
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn bits(&self) -> &[bool] {
        &self.data
    }

    pub fn get(&self, x: usize, y: usize) -> bool {
        self.data[y * self.width + x]
    }

    pub fn value(&self, x: usize, y: usize) -> u8 {
        if self.get(x, y) {
            255
        } else {
            0
        }
    }

    pub fn set(&mut self, x: usize, y: usize, foreground: bool) {
        self.data[y * self.width + x] = foreground;
    }

    pub fn count_foreground(&self) -> usize {
        self.data.iter().filter(|&&b| b).count()
    }

    pub fn to_values(&self) -> Vec<u8> {
        self.data.iter().map(|&b| if b { 255 } else { 0 }).collect()
    }

    pub fn to_gray(&self) -> GrayImage {
        GrayImage {
            width: self.width,
            height: self.height,
            data: self
                .data
                .iter()
                .map(|&b| if b { 255.0 } else { 0.0 })
                .collect(),
        }
    }

    pub fn crop(&self, bbox: &BoundingBox) -> Result<Self> {
        bbox.check(self.width, self.height)?;
        Ok(Self {
            width: bbox.width(),
            height: bbox.height(),
            data: crop_slice(&self.data, self.width, bbox),
        })
    }

    pub fn pad_center(&self, target_w: usize, target_h: usize, mode: PadMode) -> Result<Self> {
        check_pad(self.width, self.height, target_w, target_h)?;
        let zero = (mode == PadMode::Zero).then_some(false);
        Ok(Self {
            width: target_w,
            height: target_h,
            data: pad_slice(
                &self.data,
                self.width,
                self.height,
                target_w,
                target_h,
                zero,
            ),
        })
    }
}

/// Luma conversion with the (0.299, 0.587, 0.114) weights.
pub fn to_grayscale(frame: &RgbImage) -> GrayImage {
    let data = frame
        .data
        .iter()
        .map(|&[r, g, b]| {
            let y = 0.299 * f64::from(r) + 0.587 * f64::from(g) + 0.114 * f64::from(b);
            y.clamp(0.0, 255.0)
        })
        .collect();
    GrayImage {
        width: frame.width,
        height: frame.height,
        data,
    }
}
