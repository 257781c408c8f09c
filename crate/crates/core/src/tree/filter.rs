use crate::error::{Error, Result};

use super::mst::SpanningTree;

/// Range parameter of the tree similarity `exp(-distance / sigma)`, on the
/// 0–255 intensity-difference scale.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TreeFilterParams {
    pub sigma: f64,
}

impl Default for TreeFilterParams {
    fn default() -> Self {
        Self { sigma: 15.0 }
    }
}

impl TreeFilterParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.sigma > 0.0 && self.sigma.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "tree sigma must be positive, got {}",
                self.sigma
            )));
        }
        Ok(())
    }
}

fn check(tree: &SpanningTree, input: &[f64], sigma: f64) -> Result<()> {
    TreeFilterParams { sigma }.validate()?;
    if input.len() != tree.node_count() {
        return Err(Error::DimensionMismatch(format!(
            "{} input values for a tree of {} nodes",
            input.len(),
            tree.node_count()
        )));
    }
    Ok(())
}

/// Direct evaluation: each output is the similarity-weighted mean of every
/// input, with path lengths found by a traversal from each node. `O(n²)`.
pub fn tree_filter_naive(tree: &SpanningTree, input: &[f64], sigma: f64) -> Result<Vec<f64>> {
    check(tree, input, sigma)?;
    let n = tree.node_count();
    let mut out = Vec::with_capacity(n);
    let mut stack: Vec<(usize, usize, f64)> = Vec::with_capacity(n);
    for source in 0..n {
        let (mut num, mut den) = (0.0, 0.0);
        stack.push((source, usize::MAX, 0.0));
        while let Some((node, from, dist)) = stack.pop() {
            let similarity = (-dist / sigma).exp();
            num += similarity * input[node];
            den += similarity;
            let parent = tree.parent(node);
            if node != tree.root() && parent != from {
                stack.push((parent, node, dist + tree.parent_weight(node)));
            }
            for &child in tree.children(node) {
                if child != from {
                    stack.push((child, node, dist + tree.parent_weight(child)));
                }
            }
        }
        out.push(num / den);
    }
    Ok(out)
}

/// Linear-time evaluation by one leaf-to-root and one root-to-leaf pass over
/// the tree, run for the weighted inputs and for a constant-one normalizer.
pub fn tree_filter_fast(tree: &SpanningTree, input: &[f64], sigma: f64) -> Result<Vec<f64>> {
    check(tree, input, sigma)?;
    let n = tree.node_count();
    // Both passes run over breadth-first positions, so memory is walked
    // linearly apart from the initial gather and final scatter.
    let order = tree.order();
    let parent = tree.order_parents();

    let decay: Vec<f64> = order
        .iter()
        .map(|&v| (-tree.parent_weight(v) / sigma).exp())
        .collect();

    // Upward: each node accumulates its whole subtree.
    let mut up_num: Vec<f64> = order.iter().map(|&v| input[v]).collect();
    let mut up_den = vec![1.0; n];
    for i in (1..n).rev() {
        let p = parent[i];
        up_num[p] += decay[i] * up_num[i];
        up_den[p] += decay[i] * up_den[i];
    }

    // Downward: add everything outside the subtree via the parent's total.
    let mut num = up_num.clone();
    let mut den = up_den.clone();
    for i in 1..n {
        let p = parent[i];
        let s = decay[i];
        num[i] = up_num[i] + s * (num[p] - s * up_num[i]);
        den[i] = up_den[i] + s * (den[p] - s * up_den[i]);
    }

    let mut out = vec![0.0; n];
    for (i, &v) in order.iter().enumerate() {
        out[v] = num[i] / den[i];
    }
    Ok(out)
}
