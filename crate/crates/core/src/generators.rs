//! Fixed example families.

use crate::graph::{Sign, SignedGraph};

/// `G_n`: a circuit of length `2n` in which every other edge is doubled, one
/// copy of each pair negative. Vertex `i` is followed by `i + 1`.
pub fn gn(n: usize) -> SignedGraph {
    assert!(n >= 1, "G_n needs n >= 1");
    let m = 2 * n;
    let mut edges = Vec::with_capacity(3 * n);
    for i in 0..m {
        let j = (i + 1) % m;
        if i % 2 == 0 {
            edges.push((i, j, Sign::Positive));
            edges.push((i, j, Sign::Negative));
        } else {
            edges.push((i, j, Sign::Positive));
        }
    }
    SignedGraph::build_graph(m, &edges).expect("valid family")
}

/// The signed cube without a nowhere-zero 5-flow. Outer square `0..4`
/// (top-left, top-right, bottom-right, bottom-left), inner square `4..8` in the
/// same order, spokes `k -- k + 4`.
pub fn fig2() -> SignedGraph {
    use Sign::{Negative as N, Positive as P};
    let edges = [
        (0, 1, P),
        (1, 2, P),
        (2, 3, P),
        (3, 0, N),
        (4, 5, N),
        (5, 6, P),
        (6, 7, P),
        (7, 4, P),
        (0, 4, P),
        (1, 5, P),
        (2, 6, N),
        (3, 7, P),
    ];
    SignedGraph::build_graph(8, &edges).expect("valid figure")
}
