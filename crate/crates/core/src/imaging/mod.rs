//! Rasters, color conversion, connected components, box algebra, and the
//! morphological baseline.

mod morphology;
mod raster;
mod regions;

pub use morphology::{dilate, erode, morphological_open_close};
pub(crate) use raster::center_offset;
pub use raster::{to_grayscale, BinaryMask, BoundingBox, GrayImage, PadMode, RgbImage};
pub use regions::{
    connected_components, connected_components_with_color, enlarge_and_merge, filter_by_area,
    region_in_box, Region,
};
