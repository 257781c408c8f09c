//! Reference implementations shared by the integration tests. None of these
//! go through the library's filtering or spanning-tree code paths.

#![allow(dead_code)]

use rand::Rng;

use maskfilter::imaging::GrayImage;

/// Minimal union-find for the brute-force oracles.
pub struct Dsu(Vec<usize>);

impl Dsu {
    pub fn new(n: usize) -> Self {
        Self((0..n).collect())
    }

    pub fn find(&mut self, x: usize) -> usize {
        if self.0[x] != x {
            let r = self.find(self.0[x]);
            self.0[x] = r;
        }
        self.0[x]
    }

    pub fn join(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        self.0[ra] = rb;
        ra != rb
    }
}

/// Minimum spanning-tree weight by enumerating every `(n-1)`-edge subset.
pub fn brute_force_mst_weight(n: usize, edges: &[(usize, usize, f64)]) -> f64 {
    fn rec(
        n: usize,
        edges: &[(usize, usize, f64)],
        start: usize,
        pick: &mut Vec<usize>,
        best: &mut f64,
    ) {
        if pick.len() == n - 1 {
            let mut dsu = Dsu::new(n);
            if pick.iter().all(|&i| dsu.join(edges[i].0, edges[i].1)) {
                *best = best.min(pick.iter().map(|&i| edges[i].2).sum());
            }
            return;
        }
        for i in start..edges.len() {
            pick.push(i);
            rec(n, edges, i + 1, pick, best);
            pick.pop();
        }
    }
    let mut best = f64::INFINITY;
    rec(n, edges, 0, &mut Vec::new(), &mut best);
    best
}

/// Random connected graph with integer weights in `0..=max_w`: a random
/// spanning tree plus extra random edges, shuffled.
pub fn random_connected_graph(
    rng: &mut impl Rng,
    n: usize,
    max_w: u32,
) -> Vec<(usize, usize, f64)> {
    let mut edges = Vec::new();
    let mut present = std::collections::HashSet::new();
    for v in 1..n {
        let u = rng.gen_range(0..v);
        present.insert((u, v));
        edges.push((u, v, f64::from(rng.gen_range(0..=max_w))));
    }
    let extra = rng.gen_range(0..=n * (n - 1) / 2 - (n - 1));
    for _ in 0..extra {
        let a = rng.gen_range(0..n);
        let b = rng.gen_range(0..n);
        let key = (a.min(b), a.max(b));
        if a != b && present.insert(key) {
            edges.push((key.0, key.1, f64::from(rng.gen_range(0..=max_w))));
        }
    }
    for i in (1..edges.len()).rev() {
        let j = rng.gen_range(0..=i);
        edges.swap(i, j);
    }
    edges
}

/// All-pairs path lengths on a tree given as an edge list (DFS per source).
pub fn tree_path_lengths(n: usize, edges: &[(usize, usize, f64)]) -> Vec<Vec<f64>> {
    let mut adj = vec![Vec::new(); n];
    for &(u, v, w) in edges {
        adj[u].push((v, w));
        adj[v].push((u, w));
    }
    (0..n)
        .map(|s| {
            let mut dist = vec![f64::NAN; n];
            dist[s] = 0.0;
            let mut stack = vec![s];
            while let Some(u) = stack.pop() {
                for &(v, w) in &adj[u] {
                    if dist[v].is_nan() {
                        dist[v] = dist[u] + w;
                        stack.push(v);
                    }
                }
            }
            dist
        })
        .collect()
}

/// Normalized similarity-weighted mean from explicit path lengths.
pub fn similarity_filter(lengths: &[Vec<f64>], input: &[f64], sigma: f64) -> Vec<f64> {
    lengths
        .iter()
        .map(|row| {
            let (mut num, mut den) = (0.0, 0.0);
            for (l, p) in row.iter().zip(input) {
                let s = (-l / sigma).exp();
                num += s * p;
                den += s;
            }
            num / den
        })
        .collect()
}

/// Clipped-window mean with radius `r`, by direct summation.
pub fn naive_box_mean(data: &[f64], w: usize, h: usize, r: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(w * h);
    for y in 0..h {
        for x in 0..w {
            let (mut sum, mut n) = (0.0, 0.0);
            for yy in y.saturating_sub(r)..=(y + r).min(h - 1) {
                for xx in x.saturating_sub(r)..=(x + r).min(w - 1) {
                    sum += data[yy * w + xx];
                    n += 1.0;
                }
            }
            out.push(sum / n);
        }
    }
    out
}

pub fn random_gray(rng: &mut impl Rng, w: usize, h: usize) -> GrayImage {
    GrayImage::new(
        w,
        h,
        (0..w * h).map(|_| rng.gen_range(0.0..=255.0)).collect(),
    )
    .unwrap()
}

/// Gray image with values drawn from a small palette, so that equal-weight
/// edges and flat regions are common.
pub fn random_blocky_gray(rng: &mut impl Rng, w: usize, h: usize) -> GrayImage {
    let palette = [0.0, 40.0, 41.0, 120.0, 200.0, 255.0];
    GrayImage::new(
        w,
        h,
        (0..w * h)
            .map(|_| palette[rng.gen_range(0..palette.len())])
            .collect(),
    )
    .unwrap()
}

pub fn relative_error(a: f64, b: f64) -> f64 {
    let scale = a.abs().max(b.abs());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).abs() / scale
    }
}

pub fn median(mut xs: Vec<f64>) -> f64 {
    xs.sort_by(f64::total_cmp);
    let n = xs.len();
    if n % 2 == 1 {
        xs[n / 2]
    } else {
        (xs[n / 2 - 1] + xs[n / 2]) / 2.0
    }
}
