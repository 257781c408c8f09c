//! Pixel confusion counts, F-measure, and ROC sweeps against CDnet-style
//! ground truth.

use std::ops::{Add, AddAssign};

use crate::error::{Error, Result};
use crate::imaging::{BinaryMask, GrayImage};

/// Ground-truth label in the CDnet convention.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GtLabel {
    Static,
    HardShadow,
    OutsideRoi,
    Unknown,
    Motion,
}

impl GtLabel {
    pub fn from_value(value: u8) -> Option<Self> {
        match value {
            0 => Some(Self::Static),
            50 => Some(Self::HardShadow),
            85 => Some(Self::OutsideRoi),
            170 => Some(Self::Unknown),
            255 => Some(Self::Motion),
            _ => None,
        }
    }

    /// `Some(true)` for foreground, `Some(false)` for background, `None` if excluded.
    pub fn truth(self) -> Option<bool> {
        match self {
            Self::Static | Self::HardShadow => Some(false),
            Self::Motion => Some(true),
            Self::OutsideRoi | Self::Unknown => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroundTruth {
    width: usize,
    height: usize,
    labels: Vec<GtLabel>,
}

impl GroundTruth {
    pub fn from_values(width: usize, height: usize, values: &[u8]) -> Result<Self> {
        if values.len() != width * height {
            return Err(Error::DimensionMismatch(format!(
                "{} ground-truth values for {width}x{height}",
                values.len()
            )));
        }
        let labels = values
            .iter()
            .map(|&v| {
                GtLabel::from_value(v).ok_or_else(|| {
                    Error::InvalidRaster(format!("ground-truth value {v} is not a known label"))
                })
            })
            .collect::<Result<_>>()?;
        Ok(Self {
            width,
            height,
            labels,
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn labels(&self) -> &[GtLabel] {
        &self.labels
    }
}

impl From<&BinaryMask> for GroundTruth {
    fn from(mask: &BinaryMask) -> Self {
        Self {
            width: mask.width(),
            height: mask.height(),
            labels: mask
                .bits()
                .iter()
                .map(|&b| if b { GtLabel::Motion } else { GtLabel::Static })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Confusion {
    pub tp: u64,
    pub fp: u64,
    pub tn: u64,
    pub fn_: u64,
}

impl Add for Confusion {
    type Output = Self;

    fn add(self, o: Self) -> Self {
        Self {
            tp: self.tp + o.tp,
            fp: self.fp + o.fp,
            tn: self.tn + o.tn,
            fn_: self.fn_ + o.fn_,
        }
    }
}

impl AddAssign for Confusion {
    fn add_assign(&mut self, o: Self) {
        *self = *self + o;
    }
}

fn ratio(num: u64, den: u64) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

impl Confusion {
    pub fn total(&self) -> u64 {
        self.tp + self.fp + self.tn + self.fn_
    }

    pub fn precision(&self) -> f64 {
        ratio(self.tp, self.tp + self.fp)
    }

    /// Also the true positive rate.
    pub fn recall(&self) -> f64 {
        ratio(self.tp, self.tp + self.fn_)
    }

    pub fn false_positive_rate(&self) -> f64 {
        ratio(self.fp, self.fp + self.tn)
    }

    /// Harmonic mean of precision and recall; zero when there are no true positives.
    pub fn f_measure(&self) -> f64 {
        if self.tp == 0 {
            return 0.0;
        }
        let (p, r) = (self.precision(), self.recall());
        2.0 * p * r / (p + r)
    }
}

pub fn f_measure(c: &Confusion) -> f64 {
    c.f_measure()
}

fn check_dims(w: usize, h: usize, gt: &GroundTruth) -> Result<()> {
    if (w, h) != (gt.width, gt.height) {
        return Err(Error::DimensionMismatch(format!(
            "prediction is {w}x{h}, ground truth is {}x{}",
            gt.width, gt.height
        )));
    }
    Ok(())
}

fn count(pred: impl Iterator<Item = bool>, gt: &GroundTruth) -> Confusion {
    let mut c = Confusion::default();
    for (p, label) in pred.zip(&gt.labels) {
        match (p, label.truth()) {
            (true, Some(true)) => c.tp += 1,
            (true, Some(false)) => c.fp += 1,
            (false, Some(false)) => c.tn += 1,
            (false, Some(true)) => c.fn_ += 1,
            (_, None) => {}
        }
    }
    c
}

/// Counts over evaluated pixels; outside-ROI and unknown labels are skipped.
pub fn confusion(pred: &BinaryMask, gt: &GroundTruth) -> Result<Confusion> {
    check_dims(pred.width(), pred.height(), gt)?;
    Ok(count(pred.bits().iter().copied(), gt))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RocPoint {
    pub threshold: f64,
    pub fpr: f64,
    pub tpr: f64,
}

/// Binarizes every output at each threshold (ascending), pools the counts over
/// all frames, and reports one `(fpr, tpr)` point per threshold.
pub fn roc_sweep(
    outputs: &[GrayImage],
    gts: &[GroundTruth],
    thresholds: &[f64],
) -> Result<Vec<RocPoint>> {
    if outputs.len() != gts.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} outputs but {} ground truths",
            outputs.len(),
            gts.len()
        )));
    }
    for (out, gt) in outputs.iter().zip(gts) {
        check_dims(out.width(), out.height(), gt)?;
    }
    let mut sorted = thresholds.to_vec();
    sorted.sort_by(f64::total_cmp);
    Ok(sorted
        .into_iter()
        .map(|threshold| {
            let pooled = outputs
                .iter()
                .zip(gts)
                .map(|(out, gt)| count(out.data().iter().map(|&v| v >= threshold), gt))
                .fold(Confusion::default(), Add::add);
            RocPoint {
                threshold,
                fpr: pooled.false_positive_rate(),
                tpr: pooled.recall(),
            }
        })
        .collect())
}
