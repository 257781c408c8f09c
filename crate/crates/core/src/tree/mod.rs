//! Minimum-spanning-tree filtering over pixel graphs.
//!
//! A guidance image (or a stack of them) becomes a grid graph whose edges
//! weigh the absolute intensity difference between neighbours. Kruskal's
//! algorithm extracts the MST, and every node is then filtered with support
//! `exp(-L/sigma)` from every other node, `L` being the summed edge weight on
//! the tree path between them.

mod filter;
mod graph;
mod mst;
mod volume;

pub use filter::{tree_filter_fast, tree_filter_naive, TreeFilterParams};
pub use graph::{build_spatial_graph, build_spatiotemporal_graph, Edge, WeightedGraph};
pub use mst::{kruskal_mst, tree_distance, DisjointSet, SpanningTree};
pub use volume::{
    spatial_tree_filter, spatiotemporal_tree_filter, spatiotemporal_tree_filter_unclamped,
    GuidanceVolume, VolumeLayer,
};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::imaging::GrayImage;

    fn path_tree(weights: &[f64]) -> SpanningTree {
        let mut g = WeightedGraph::new(weights.len() + 1);
        for (i, &w) in weights.iter().enumerate() {
            g.add_edge(i, i + 1, w).unwrap();
        }
        kruskal_mst(&g).unwrap()
    }

    #[test]
    fn mst_of_small_cycle() {
        // [[0, 10], [0, 0]]: the only nonzero edges both touch the 10.
        let img = GrayImage::new(2, 2, vec![0.0, 10.0, 0.0, 0.0]).unwrap();
        let tree = kruskal_mst(&build_spatial_graph(&img)).unwrap();
        assert_eq!(tree.total_weight(), 10.0);
        assert_eq!(tree.edges().len(), 3);
    }

    #[test]
    fn path_graph_keeps_every_edge() {
        let tree = path_tree(&[3.0, 1.0, 4.0, 1.0]);
        assert_eq!(tree.edges().len(), 4);
        assert_eq!(tree.total_weight(), 9.0);
    }

    #[test]
    fn equal_weights_total() {
        let img = GrayImage::filled(5, 4, 9.0);
        let mut g = build_spatial_graph(&img);
        g = {
            let mut h = WeightedGraph::new(g.node_count());
            for e in g.edges() {
                h.add_edge(e.u, e.v, 2.5).unwrap();
            }
            h
        };
        assert_eq!(kruskal_mst(&g).unwrap().total_weight(), 19.0 * 2.5);
    }

    #[test]
    fn disconnected_graph_is_rejected() {
        let mut g = WeightedGraph::new(4);
        g.add_edge(0, 1, 1.0).unwrap();
        g.add_edge(2, 3, 1.0).unwrap();
        assert!(matches!(
            kruskal_mst(&g),
            Err(crate::Error::DisconnectedGraph { .. })
        ));
    }

    #[test]
    fn distances_along_path() {
        let tree = path_tree(&[0.0, 255.0]);
        assert_eq!(tree_distance(&tree, 1, 1), 0.0);
        assert_eq!(tree_distance(&tree, 0, 2), 255.0);
        assert_eq!(tree_distance(&tree, 2, 0), 255.0);
    }

    #[test]
    fn three_node_path_filter() {
        // Guidance {0, 0, 255} on a path: similarities from node 0 are {1, 1, e^-10.2}.
        let tree = path_tree(&[0.0, 255.0]);
        let input = [255.0, 0.0, 0.0];
        let tiny = (-255.0f64 / 25.0).exp();
        let expected = [
            255.0 / (2.0 + tiny),
            255.0 / (2.0 + tiny),
            255.0 * tiny / (1.0 + 2.0 * tiny),
        ];
        for q in [
            tree_filter_naive(&tree, &input, 25.0).unwrap(),
            tree_filter_fast(&tree, &input, 25.0).unwrap(),
        ] {
            for (a, b) in q.iter().zip(expected) {
                assert!((a - b).abs() < 1e-9, "{a} vs {b}");
            }
            assert!((q[0] - 127.4976).abs() < 1e-4);
            assert!((q[2] - 0.0095).abs() < 1e-4);
        }
    }

    #[test]
    fn constant_input_and_huge_sigma() {
        let tree = path_tree(&[5.0, 80.0, 0.0, 12.0]);
        let q = tree_filter_fast(&tree, &[42.0; 5], 7.0).unwrap();
        assert!(q.iter().all(|v| (v - 42.0).abs() < 1e-9));

        let input = [0.0, 10.0, 20.0, 30.0, 190.0];
        let q = tree_filter_naive(&tree, &input, 1e12).unwrap();
        assert!(q.iter().all(|v| (v - 50.0).abs() < 1e-6));
    }

    #[test]
    fn single_node_and_zero_weight_tree() {
        let g = WeightedGraph::new(1);
        let tree = kruskal_mst(&g).unwrap();
        assert_eq!(tree_filter_fast(&tree, &[77.0], 5.0).unwrap(), vec![77.0]);

        let tree = path_tree(&[0.0, 0.0, 0.0]);
        let q = tree_filter_fast(&tree, &[0.0, 0.0, 100.0, 200.0], 5.0).unwrap();
        assert!(q.iter().all(|v| (v - 75.0).abs() < 1e-9));
    }

    #[test]
    fn filter_rejects_bad_arguments() {
        let tree = path_tree(&[1.0]);
        assert!(tree_filter_fast(&tree, &[1.0], 5.0).is_err());
        assert!(tree_filter_fast(&tree, &[1.0, 2.0], 0.0).is_err());
        assert!(tree_filter_naive(&tree, &[1.0, 2.0], -1.0).is_err());
    }

    #[test]
    fn children_and_order_are_consistent() {
        let img = GrayImage::from_fn(6, 5, |x, y| ((x * 41 + y * 23) % 97) as f64).unwrap();
        let tree = kruskal_mst(&build_spatial_graph(&img)).unwrap();
        assert_eq!(tree.order()[0], 0);
        let mut seen = vec![false; tree.node_count()];
        for &v in tree.order() {
            seen[v] = true;
            for &c in tree.children(v) {
                assert_eq!(tree.parent(c), v);
                assert!(!seen[c], "child visited before parent");
            }
        }
        let child_total: usize = (0..tree.node_count()).map(|v| tree.children(v).len()).sum();
        assert_eq!(child_total, tree.node_count() - 1);
        let order = tree.order();
        for (i, &p) in tree.order_parents().iter().enumerate().skip(1) {
            assert!(p < i);
            assert_eq!(order[p], tree.parent(order[i]));
        }
    }

    #[test]
    fn single_layer_volume_matches_spatial_filter() {
        let guide = GrayImage::from_fn(7, 6, |x, y| ((x * 31 + y * 59) % 256) as f64).unwrap();
        let input =
            GrayImage::from_fn(7, 6, |x, y| if (x + y) % 3 == 0 { 255.0 } else { 0.0 }).unwrap();
        let params = TreeFilterParams { sigma: 12.0 };
        let vol = GuidanceVolume::new(vec![VolumeLayer {
            guidance: guide.clone(),
            input: input.clone(),
        }])
        .unwrap();
        assert_eq!(
            spatiotemporal_tree_filter(&vol, &params).unwrap(),
            spatial_tree_filter(&guide, &input, &params).unwrap()
        );
    }

    #[test]
    fn all_foreground_volume_stays_foreground() {
        let layers = (0..3)
            .map(|l| VolumeLayer {
                guidance: GrayImage::from_fn(5, 4, |x, y| ((x * 17 + y * 5 + l * 40) % 256) as f64)
                    .unwrap(),
                input: GrayImage::filled(5, 4, 255.0),
            })
            .collect();
        let vol = GuidanceVolume::new(layers).unwrap();
        let out = spatiotemporal_tree_filter(&vol, &TreeFilterParams { sigma: 5.0 }).unwrap();
        assert!(out.data().iter().all(|v| (v - 255.0).abs() < 1e-9));
    }

    #[test]
    fn volume_rejects_mismatched_layers() {
        let a = VolumeLayer {
            guidance: GrayImage::filled(3, 3, 0.0),
            input: GrayImage::filled(3, 3, 0.0),
        };
        let b = VolumeLayer {
            guidance: GrayImage::filled(4, 3, 0.0),
            input: GrayImage::filled(4, 3, 0.0),
        };
        assert!(GuidanceVolume::new(vec![a, b]).is_err());
        assert!(GuidanceVolume::new(Vec::new()).is_err());
    }
}
