use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid raster: {0}")]
    InvalidRaster(String),

    #[error("box ({x0},{y0})-({x1},{y1}) lies outside a {width}x{height} raster")]
    OutOfBounds {
        x0: usize,
        y0: usize,
        x1: usize,
        y1: usize,
        width: usize,
        height: usize,
    },

    #[error("graph is disconnected: spanning tree reached {reached} of {nodes} nodes")]
    DisconnectedGraph { reached: usize, nodes: usize },

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("sequence error: {0}")]
    Sequence(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("failed to read or write image {path}: {source}")]
    Image {
        path: PathBuf,
        #[source]
        source: image::ImageError,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
