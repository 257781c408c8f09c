//! Synthetic test scenes: checkerboard squares over a jittered "grass"
//! background, plus a coarse mask made by flipping ground-truth pixels at
//! random.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::imaging::{BinaryMask, RgbImage};

#[derive(Debug, Clone, PartialEq)]
pub struct CheckerSquare {
    /// Top-left corner.
    pub x: usize,
    pub y: usize,
    pub size: usize,
    pub colors: [[u8; 3]; 2],
    /// Side length of one checker cell.
    pub pitch: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SynthSpec {
    pub width: usize,
    pub height: usize,
    pub objects: Vec<CheckerSquare>,
    pub background: [u8; 3],
    /// Per-channel uniform jitter amplitude around `background`.
    pub jitter: u8,
    pub background_seed: u64,
    /// Probability of a foreground pixel being dropped from the coarse mask.
    pub p_fn: f64,
    /// Probability of a background pixel being set in the coarse mask.
    pub p_fp: f64,
    pub corruption_seed: u64,
}

impl Default for SynthSpec {
    fn default() -> Self {
        Self {
            width: 160,
            height: 120,
            objects: vec![CheckerSquare {
                x: 40,
                y: 28,
                size: 64,
                colors: [[235, 235, 235], [200, 0, 0]],
                pitch: 16,
            }],
            background: [50, 150, 40],
            jitter: 15,
            background_seed: 7,
            p_fn: 0.3,
            p_fp: 0.02,
            corruption_seed: 11,
        }
    }
}

impl SynthSpec {
    pub fn validate(&self) -> Result<()> {
        if self.width == 0 || self.height == 0 {
            return Err(Error::InvalidParameter(
                "synthetic canvas must be non-empty".into(),
            ));
        }
        for (name, p) in [("p_fn", self.p_fn), ("p_fp", self.p_fp)] {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::InvalidParameter(format!(
                    "{name} must lie in [0, 1], got {p}"
                )));
            }
        }
        for (i, sq) in self.objects.iter().enumerate() {
            if sq.size == 0 || sq.pitch == 0 {
                return Err(Error::InvalidParameter(format!(
                    "object {i} has zero size or pitch"
                )));
            }
            if sq.x + sq.size > self.width || sq.y + sq.size > self.height {
                return Err(Error::InvalidParameter(format!(
                    "object {i} at ({}, {}) size {} leaves the {}x{} canvas",
                    sq.x, sq.y, sq.size, self.width, self.height
                )));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SynthScene {
    pub frame: RgbImage,
    pub coarse: BinaryMask,
    pub gt: BinaryMask,
}

pub fn synth_scene(spec: &SynthSpec) -> Result<SynthScene> {
    spec.validate()?;
    let (w, h) = (spec.width, spec.height);

    let mut rng = ChaCha8Rng::seed_from_u64(spec.background_seed);
    let amp = i16::from(spec.jitter);
    let mut frame = RgbImage::filled(w, h, spec.background);
    for y in 0..h {
        for x in 0..w {
            let rgb = spec.background.map(|c| {
                let d = if amp > 0 {
                    rng.gen_range(-amp..=amp)
                } else {
                    0
                };
                (i16::from(c) + d).clamp(0, 255) as u8
            });
            frame.set(x, y, rgb);
        }
    }

    let mut gt = BinaryMask::zeros(w, h);
    for sq in &spec.objects {
        for y in sq.y..sq.y + sq.size {
            for x in sq.x..sq.x + sq.size {
                let cell = ((x - sq.x) / sq.pitch + (y - sq.y) / sq.pitch) % 2;
                frame.set(x, y, sq.colors[cell]);
                gt.set(x, y, true);
            }
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(spec.corruption_seed);
    let coarse = BinaryMask::from_fn(w, h, |x, y| {
        let u: f64 = rng.gen();
        if gt.get(x, y) {
            u >= spec.p_fn
        } else {
            u < spec.p_fp
        }
    });

    Ok(SynthScene { frame, coarse, gt })
}

/// `frames` scenes with every object moved by `step` pixels per frame.
///
/// The background is static; each frame draws fresh mask corruption.
pub fn synth_sequence(
    spec: &SynthSpec,
    frames: usize,
    step: (isize, isize),
) -> Result<Vec<SynthScene>> {
    (0..frames)
        .map(|t| {
            let shift = |pos: usize, d: isize| -> Result<usize> {
                pos.checked_add_signed(d * t as isize).ok_or_else(|| {
                    Error::InvalidParameter(format!("object leaves the canvas at frame {t}"))
                })
            };
            let objects = spec
                .objects
                .iter()
                .map(|sq| {
                    Ok(CheckerSquare {
                        x: shift(sq.x, step.0)?,
                        y: shift(sq.y, step.1)?,
                        ..sq.clone()
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            synth_scene(&SynthSpec {
                objects,
                corruption_seed: spec.corruption_seed.wrapping_add(t as u64),
                ..spec.clone()
            })
        })
        .collect()
}
