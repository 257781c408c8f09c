use crate::error::{Error, Result};
use crate::imaging::GrayImage;

use super::volume::GuidanceVolume;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub weight: f64,
    /// Insertion index; breaks weight ties in the spanning-tree build.
    pub seq: usize,
}

/// Undirected, weighted graph over nodes `0..node_count`.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedGraph {
    node_count: usize,
    edges: Vec<Edge>,
}

impl WeightedGraph {
    pub fn new(node_count: usize) -> Self {
        Self {
            node_count,
            edges: Vec::new(),
        }
    }

    /// Adds an edge after checking endpoints, weight, and duplicates.
    ///
    /// The duplicate check scans the edge list, so this is meant for small,
    /// hand-built graphs. Grid graphs go through the image builders.
    pub fn add_edge(&mut self, u: usize, v: usize, weight: f64) -> Result<()> {
        if u == v {
            return Err(Error::InvalidGraph(format!("self-loop on node {u}")));
        }
        if u >= self.node_count || v >= self.node_count {
            return Err(Error::InvalidGraph(format!(
                "edge ({u}, {v}) outside {} nodes",
                self.node_count
            )));
        }
        if !(weight.is_finite() && weight >= 0.0) {
            return Err(Error::InvalidGraph(format!(
                "edge weight {weight} is not finite and >= 0"
            )));
        }
        let key = (u.min(v), u.max(v));
        if self
            .edges
            .iter()
            .any(|e| (e.u.min(e.v), e.u.max(e.v)) == key)
        {
            return Err(Error::InvalidGraph(format!("duplicate edge ({u}, {v})")));
        }
        self.push(u, v, weight);
        Ok(())
    }

    fn push(&mut self, u: usize, v: usize, weight: f64) {
        let seq = self.edges.len();
        self.edges.push(Edge { u, v, weight, seq });
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    fn push_grid(&mut self, samples: &[f64], width: usize, height: usize, offset: usize) {
        for y in 0..height {
            for x in 0..width {
                let idx = y * width + x;
                if x + 1 < width {
                    self.push(
                        offset + idx,
                        offset + idx + 1,
                        (samples[idx] - samples[idx + 1]).abs(),
                    );
                }
                if y + 1 < height {
                    self.push(
                        offset + idx,
                        offset + idx + width,
                        (samples[idx] - samples[idx + width]).abs(),
                    );
                }
            }
        }
    }
}

/// 4-connected pixel graph weighted by absolute intensity difference.
///
/// Node ids are row-major pixel indices; edges are emitted row-major with the
/// right neighbor before the lower one.
pub fn build_spatial_graph(guidance: &GrayImage) -> WeightedGraph {
    let (w, h) = (guidance.width(), guidance.height());
    let mut graph = WeightedGraph::new(w * h);
    graph.edges.reserve(2 * w * h - w - h);
    graph.push_grid(guidance.data(), w, h, 0);
    graph
}

/// 6-connected graph over a stacked volume.
///
/// Layer `l` occupies node ids `l*W*H .. (l+1)*W*H`. All spatial edges come
/// first, layer by layer from the newest, then the temporal edges joining each
/// pixel to the same pixel one layer older.
pub fn build_spatiotemporal_graph(volume: &GuidanceVolume) -> WeightedGraph {
    let (w, h) = (volume.width(), volume.height());
    let plane = w * h;
    let k = volume.depth();
    let mut graph = WeightedGraph::new(k * plane);
    graph
        .edges
        .reserve(k * (2 * plane - w - h) + (k - 1) * plane);
    for (l, layer) in volume.layers().iter().enumerate() {
        graph.push_grid(layer.guidance.data(), w, h, l * plane);
    }
    for l in 1..k {
        let newer = volume.layers()[l - 1].guidance.data();
        let older = volume.layers()[l].guidance.data();
        for idx in 0..plane {
            graph.push(
                (l - 1) * plane + idx,
                l * plane + idx,
                (newer[idx] - older[idx]).abs(),
            );
        }
    }
    graph
}
