//! Image files and on-disk frame sequences.
//!
//! Frames, coarse masks and ground truth live in separate directories and are
//! aligned by the last run of digits in each file stem, so CDnet-style names
//! (`in000123.jpg`, `gt000123.png`) and plain ones (`000123.png`) both work.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use image::{GrayImage as Luma8, ImageBuffer, Luma, Rgb};

use crate::error::{Error, Result};
use crate::imaging::{BinaryMask, GrayImage, RgbImage};
use crate::metrics::GroundTruth;

const IMAGE_EXTENSIONS: &[&str] = &["png", "jpg", "jpeg", "bmp", "pgm", "ppm", "pnm", "pbm"];

fn image_error(path: &Path) -> impl FnOnce(image::ImageError) -> Error + '_ {
    move |source| Error::Image {
        path: path.to_path_buf(),
        source,
    }
}

pub fn read_rgb(path: &Path) -> Result<RgbImage> {
    let img = image::open(path).map_err(image_error(path))?.to_rgb8();
    let (w, h) = img.dimensions();
    RgbImage::from_interleaved(w as usize, h as usize, img.as_raw())
}

fn read_luma(path: &Path) -> Result<Luma8> {
    Ok(image::open(path).map_err(image_error(path))?.to_luma8())
}

/// Reads a single-channel mask; values `>= 128` become foreground.
pub fn read_mask(path: &Path) -> Result<BinaryMask> {
    let img = read_luma(path)?;
    let (w, h) = img.dimensions();
    BinaryMask::from_bools(
        w as usize,
        h as usize,
        img.as_raw().iter().map(|&v| v >= 128).collect(),
    )
}

pub fn read_ground_truth(path: &Path) -> Result<GroundTruth> {
    let img = read_luma(path)?;
    let (w, h) = img.dimensions();
    GroundTruth::from_values(w as usize, h as usize, img.as_raw())
}

/// Writes a mask as 8-bit gray with values `{0, 255}`; the format follows the
/// extension (PNG, PGM, ...).
pub fn write_mask(path: &Path, mask: &BinaryMask) -> Result<()> {
    let buf: Luma8 =
        ImageBuffer::from_raw(mask.width() as u32, mask.height() as u32, mask.to_values())
            .expect("buffer sized from mask");
    buf.save(path).map_err(image_error(path))
}

/// Writes gray values rounded to 8 bits.
pub fn write_gray(path: &Path, gray: &GrayImage) -> Result<()> {
    let bytes = gray.data().iter().map(|v| v.round() as u8).collect();
    let buf: ImageBuffer<Luma<u8>, Vec<u8>> =
        ImageBuffer::from_raw(gray.width() as u32, gray.height() as u32, bytes)
            .expect("buffer sized from image");
    buf.save(path).map_err(image_error(path))
}

pub fn write_rgb(path: &Path, frame: &RgbImage) -> Result<()> {
    let buf: ImageBuffer<Rgb<u8>, Vec<u8>> = ImageBuffer::from_raw(
        frame.width() as u32,
        frame.height() as u32,
        frame.to_interleaved(),
    )
    .expect("buffer sized from image");
    buf.save(path).map_err(image_error(path))
}

/// The last run of ASCII digits in the file stem.
pub fn frame_index(path: &Path) -> Option<u64> {
    let stem = path.file_stem()?.to_str()?;
    let end = stem.rfind(|c: char| c.is_ascii_digit())? + 1;
    let start = stem[..end]
        .rfind(|c: char| !c.is_ascii_digit())
        .map_or(0, |i| i + 1);
    stem[start..end].parse().ok()
}

/// Image files in `dir` keyed by frame index.
pub fn list_indexed(dir: &Path) -> Result<BTreeMap<u64, PathBuf>> {
    let mut files = BTreeMap::new();
    for entry in fs::read_dir(dir)? {
        let path = entry?.path();
        let is_image = path
            .extension()
            .and_then(|e| e.to_str())
            .is_some_and(|e| IMAGE_EXTENSIONS.contains(&e.to_ascii_lowercase().as_str()));
        if !is_image || !path.is_file() {
            continue;
        }
        if let Some(idx) = frame_index(&path) {
            if let Some(prev) = files.insert(idx, path.clone()) {
                return Err(Error::Sequence(format!(
                    "frame index {idx} appears twice in {}: {} and {}",
                    dir.display(),
                    prev.display(),
                    path.display()
                )));
            }
        }
    }
    Ok(files)
}

/// Directories holding an aligned frame sequence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SequenceSource {
    pub input_dir: PathBuf,
    pub mask_dir: PathBuf,
    pub gt_dir: Option<PathBuf>,
}

#[derive(Debug, Clone)]
pub struct SequenceFrame {
    pub index: u64,
    pub frame: RgbImage,
    pub mask: BinaryMask,
    pub gt: Option<GroundTruth>,
}

#[derive(Debug, Clone)]
struct FramePaths {
    index: u64,
    frame: PathBuf,
    mask: PathBuf,
    gt: Option<PathBuf>,
}

/// Lazily loads aligned frames in ascending index order.
#[derive(Debug)]
pub struct SequenceIter {
    pending: std::vec::IntoIter<FramePaths>,
    dims: Option<(usize, usize)>,
}

impl SequenceIter {
    pub fn len(&self) -> usize {
        self.pending.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pending.len() == 0
    }

    fn load(&mut self, paths: FramePaths) -> Result<SequenceFrame> {
        let frame = read_rgb(&paths.frame)?;
        let mask = read_mask(&paths.mask)?;
        let gt = paths.gt.as_deref().map(read_ground_truth).transpose()?;
        let dims = (frame.width(), frame.height());
        let mut sizes = vec![("mask", (mask.width(), mask.height()))];
        if let Some(gt) = &gt {
            sizes.push(("ground truth", (gt.width(), gt.height())));
        }
        let expected = *self.dims.get_or_insert(dims);
        if dims != expected {
            return Err(Error::DimensionMismatch(format!(
                "frame {} is {}x{}, sequence is {}x{}",
                paths.index, dims.0, dims.1, expected.0, expected.1
            )));
        }
        for (what, size) in sizes {
            if size != dims {
                return Err(Error::DimensionMismatch(format!(
                    "{what} for frame {} is {}x{}, frame is {}x{}",
                    paths.index, size.0, size.1, dims.0, dims.1
                )));
            }
        }
        Ok(SequenceFrame {
            index: paths.index,
            frame,
            mask,
            gt,
        })
    }
}

impl Iterator for SequenceIter {
    type Item = Result<SequenceFrame>;

    fn next(&mut self) -> Option<Self::Item> {
        let paths = self.pending.next()?;
        Some(self.load(paths))
    }
}

/// Checks that every frame has a mask (and ground truth, when a directory is
/// given) before anything is decoded.
pub fn load_sequence(src: &SequenceSource) -> Result<SequenceIter> {
    let frames = list_indexed(&src.input_dir)?;
    if frames.is_empty() {
        return Err(Error::Sequence(format!(
            "no frames in {}",
            src.input_dir.display()
        )));
    }
    let mut masks = list_indexed(&src.mask_dir)?;
    let mut gts = src.gt_dir.as_deref().map(list_indexed).transpose()?;

    let mut pending = Vec::with_capacity(frames.len());
    for (index, frame) in frames {
        let mask = masks.remove(&index).ok_or_else(|| {
            Error::Sequence(format!(
                "frame {index} has no mask in {}",
                src.mask_dir.display()
            ))
        })?;
        let gt = match gts.as_mut() {
            Some(gts) => Some(
                gts.remove(&index)
                    .ok_or_else(|| Error::Sequence(format!("frame {index} has no ground truth")))?,
            ),
            None => None,
        };
        pending.push(FramePaths {
            index,
            frame,
            mask,
            gt,
        });
    }
    Ok(SequenceIter {
        pending: pending.into_iter(),
        dims: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn indices_from_names() {
        assert_eq!(frame_index(Path::new("in000123.jpg")), Some(123));
        assert_eq!(frame_index(Path::new("dir/gt000007.png")), Some(7));
        assert_eq!(frame_index(Path::new("cam2_frame_0042.png")), Some(42));
        assert_eq!(frame_index(Path::new("42.png")), Some(42));
        assert_eq!(frame_index(Path::new("frame.png")), None);
    }

    #[test]
    fn empty_directory_has_no_frames() {
        let dir = tempfile::tempdir().unwrap();
        let src = SequenceSource {
            input_dir: dir.path().to_path_buf(),
            mask_dir: dir.path().to_path_buf(),
            gt_dir: None,
        };
        let err = load_sequence(&src).unwrap_err();
        assert!(err.to_string().contains("no frames"));
    }

    #[test]
    fn mask_coercion_threshold() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("m.png");
        let buf: Luma8 = ImageBuffer::from_raw(4, 1, vec![0, 127, 128, 200]).unwrap();
        buf.save(&path).unwrap();
        assert_eq!(read_mask(&path).unwrap().to_values(), vec![0, 0, 255, 255]);
    }

    #[test]
    fn mask_round_trip_png_and_pgm() {
        let dir = tempfile::tempdir().unwrap();
        let mask = BinaryMask::from_fn(7, 5, |x, y| (x * y) % 3 == 1);
        for name in ["m.png", "m.pgm"] {
            let path = dir.path().join(name);
            write_mask(&path, &mask).unwrap();
            assert_eq!(read_mask(&path).unwrap(), mask);
        }
    }
}
