use crate::error::{Error, Result};

use super::graph::{Edge, WeightedGraph};

/// Union-find with path halving and union by rank.
#[derive(Debug, Clone)]
pub struct DisjointSet {
    parent: Vec<usize>,
    rank: Vec<u8>,
}

impl DisjointSet {
    pub fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
            rank: vec![0; n],
        }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns `false` when `a` and `b` were already in the same set.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        match self.rank[ra].cmp(&self.rank[rb]) {
            std::cmp::Ordering::Less => self.parent[ra] = rb,
            std::cmp::Ordering::Greater => self.parent[rb] = ra,
            std::cmp::Ordering::Equal => {
                self.parent[rb] = ra;
                self.rank[ra] += 1;
            }
        }
        true
    }
}

/// A rooted spanning tree with parent links, children lists, and a root-first
/// breadth-first order.
#[derive(Debug, Clone, PartialEq)]
pub struct SpanningTree {
    root: usize,
    parent: Vec<usize>,
    parent_weight: Vec<f64>,
    depth: Vec<usize>,
    order: Vec<usize>,
    /// Position in `order` of the parent of `order[i]`.
    order_parent: Vec<usize>,
    child_range: Vec<(usize, usize)>,
    edges: Vec<Edge>,
}

impl SpanningTree {
    /// Roots the tree given by `edges` at `root`.
    ///
    /// Fails unless the edges form a single tree over `node_count` nodes.
    pub fn from_edges(node_count: usize, edges: Vec<Edge>, root: usize) -> Result<Self> {
        if node_count == 0 {
            return Err(Error::InvalidGraph("tree needs at least one node".into()));
        }
        if root >= node_count {
            return Err(Error::InvalidGraph(format!(
                "root {root} outside {node_count} nodes"
            )));
        }
        if edges.len() != node_count - 1 {
            return Err(Error::InvalidGraph(format!(
                "a tree over {node_count} nodes has {} edges, got {}",
                node_count - 1,
                edges.len()
            )));
        }

        // Adjacency in CSR form.
        let mut degree = vec![0usize; node_count + 1];
        for e in &edges {
            if e.u >= node_count || e.v >= node_count || e.u == e.v {
                return Err(Error::InvalidGraph(format!(
                    "bad tree edge ({}, {})",
                    e.u, e.v
                )));
            }
            degree[e.u + 1] += 1;
            degree[e.v + 1] += 1;
        }
        for i in 0..node_count {
            degree[i + 1] += degree[i];
        }
        let adj_start = degree;
        let mut fill = adj_start.clone();
        let mut adj = vec![(0usize, 0.0f64); 2 * edges.len()];
        for e in &edges {
            adj[fill[e.u]] = (e.v, e.weight);
            fill[e.u] += 1;
            adj[fill[e.v]] = (e.u, e.weight);
            fill[e.v] += 1;
        }

        let mut parent = vec![usize::MAX; node_count];
        let mut parent_weight = vec![0.0; node_count];
        let mut depth = vec![0usize; node_count];
        // Breadth-first order enqueues each node's children contiguously, so
        // children are stored as a range into `order`.
        let mut child_range = vec![(0usize, 0usize); node_count];
        let mut order = Vec::with_capacity(node_count);
        let mut order_parent = Vec::with_capacity(node_count);
        order.push(root);
        order_parent.push(0);
        parent[root] = root;
        let mut head = 0;
        while head < order.len() {
            let node = order[head];
            head += 1;
            let first = order.len();
            for &(next, w) in &adj[adj_start[node]..adj_start[node + 1]] {
                if parent[next] == usize::MAX {
                    parent[next] = node;
                    parent_weight[next] = w;
                    depth[next] = depth[node] + 1;
                    order.push(next);
                    order_parent.push(head - 1);
                }
            }
            child_range[node] = (first, order.len());
        }
        if order.len() != node_count {
            return Err(Error::DisconnectedGraph {
                reached: order.len(),
                nodes: node_count,
            });
        }

        Ok(Self {
            root,
            parent,
            parent_weight,
            depth,
            order,
            order_parent,
            child_range,
            edges,
        })
    }

    pub fn node_count(&self) -> usize {
        self.parent.len()
    }

    pub fn root(&self) -> usize {
        self.root
    }

    /// Parent of `node`; the root is its own parent.
    pub fn parent(&self, node: usize) -> usize {
        self.parent[node]
    }

    /// Weight of the edge to the parent; zero at the root.
    pub fn parent_weight(&self, node: usize) -> f64 {
        self.parent_weight[node]
    }

    pub fn children(&self, node: usize) -> &[usize] {
        let (start, end) = self.child_range[node];
        &self.order[start..end]
    }

    /// Nodes in breadth-first order from the root.
    pub fn order(&self) -> &[usize] {
        &self.order
    }

    /// For each position in [`order`](Self::order), the position of its parent.
    /// The root's entry is `0`.
    pub fn order_parents(&self) -> &[usize] {
        &self.order_parent
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn total_weight(&self) -> f64 {
        self.edges.iter().map(|e| e.weight).sum()
    }

    pub fn with_root(&self, root: usize) -> Result<Self> {
        Self::from_edges(self.node_count(), self.edges.clone(), root)
    }
}

/// Kruskal's minimum spanning tree, rooted at node 0.
///
/// Equal weights are taken in ascending insertion order, so the result is
/// deterministic.
pub fn kruskal_mst(graph: &WeightedGraph) -> Result<SpanningTree> {
    let n = graph.node_count();
    if n == 0 {
        return Err(Error::InvalidGraph("graph has no nodes".into()));
    }
    let edges = graph.edges();
    let mut by_weight: Vec<u32> = (0..edges.len() as u32).collect();
    by_weight.sort_unstable_by(|&a, &b| {
        let (ea, eb) = (&edges[a as usize], &edges[b as usize]);
        ea.weight.total_cmp(&eb.weight).then(ea.seq.cmp(&eb.seq))
    });

    let mut sets = DisjointSet::new(n);
    let mut accepted = Vec::with_capacity(n - 1);
    for idx in by_weight {
        if accepted.len() == n - 1 {
            break;
        }
        let e = edges[idx as usize];
        if sets.union(e.u, e.v) {
            accepted.push(e);
        }
    }
    if accepted.len() != n - 1 {
        return Err(Error::DisconnectedGraph {
            reached: accepted.len() + 1,
            nodes: n,
        });
    }
    SpanningTree::from_edges(n, accepted, 0)
}

/// Sum of edge weights along the tree path between `u` and `v`.
pub fn tree_distance(tree: &SpanningTree, mut u: usize, mut v: usize) -> f64 {
    let mut dist = 0.0;
    while tree.depth[u] > tree.depth[v] {
        dist += tree.parent_weight[u];
        u = tree.parent[u];
    }
    while tree.depth[v] > tree.depth[u] {
        dist += tree.parent_weight[v];
        v = tree.parent[v];
    }
    while u != v {
        dist += tree.parent_weight[u] + tree.parent_weight[v];
        u = tree.parent[u];
        v = tree.parent[v];
    }
    dist
}
