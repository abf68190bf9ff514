//! Seeded synthetic graphs with a planted hierarchy.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::WeightedGraph;

/// Three-level hierarchy along with the level of every node.
#[derive(Debug, Clone)]
pub struct Hierarchy {
    pub graph: WeightedGraph,
    /// 0 for roots, 1 for middle nodes, 2 for leaves.
    pub level: Vec<u8>,
}

/// Builds a hierarchy of `roots` mutually linked roots at capacity 3,
/// `roots * fanout` middle nodes each attached to one root at capacity 2,
/// and leaves attached to a middle node at capacity 1 until `n` nodes
/// exist. A few same-level capacity-1 links are sprinkled in.
pub fn planted_hierarchy(n: usize, roots: usize, fanout: usize, seed: u64) -> Result<Hierarchy> {
    let mids = roots * fanout;
    if roots == 0 || fanout == 0 || n <= roots + mids {
        return Err(Error::InvalidArgument(format!(
            "need n > roots + roots*fanout, got n={n}, roots={roots}, fanout={fanout}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut level = vec![2u8; n];
    let mut edges = Vec::new();
    for r in 0..roots {
        level[r] = 0;
        for s in r + 1..roots {
            edges.push((r, s, 3.0));
        }
    }
    let mid_range = roots..roots + mids;
    for m in mid_range.clone() {
        level[m] = 1;
        edges.push(((m - roots) / fanout, m, 2.0));
    }
    for leaf in roots + mids..n {
        edges.push((roots + (leaf - roots - mids) % mids, leaf, 1.0));
    }
    let mut mid_nodes: Vec<usize> = mid_range.collect();
    mid_nodes.shuffle(&mut rng);
    for w in mid_nodes.windows(2).step_by(2) {
        edges.push((w[0].min(w[1]), w[0].max(w[1]), 1.0));
    }
    let leaves = n - roots - mids;
    for _ in 0..leaves / 4 {
        let a = roots + mids + rng.gen_range(0..leaves);
        let b = roots + mids + rng.gen_range(0..leaves);
        if a != b && !edges.iter().any(|&(i, j, _)| (i, j) == (a.min(b), a.max(b))) {
            edges.push((a.min(b), a.max(b), 1.0));
        }
    }
    let graph = WeightedGraph::new(n, edges)?;
    Ok(Hierarchy { graph, level })
}
