//! Evaluation of learned embeddings: leader scores, rank correlation and
//! nearest-neighbour recall.

use crate::embedding::PairGeometry;
use crate::error::{Error, Result};
use crate::graph::WeightedGraph;

/// `δ_i = Σ_j d(x_i, x_j)` over every node, `j = i` included.
pub fn delta_scores<G: PairGeometry, C: AsRef<[f64]>>(geom: &G, points: &[C]) -> Vec<f64> {
    let n = points.len();
    let mut delta = vec![0.0; n];
    for i in 0..n {
        // self-dissimilarity is not always exactly zero on the manifold
        delta[i] += geom.dissimilarity(points[i].as_ref(), points[i].as_ref());
        for j in i + 1..n {
            let d = geom.dissimilarity(points[i].as_ref(), points[j].as_ref());
            delta[i] += d;
            delta[j] += d;
        }
    }
    delta
}

/// 1-based positions of `leaders` when nodes are ordered by `delta`
/// ascending (ties by index), sorted ascending.
pub fn leader_ranks(delta: &[f64], leaders: &[usize]) -> Result<Vec<usize>> {
    let mut order: Vec<usize> = (0..delta.len()).collect();
    order.sort_by(|&a, &b| delta[a].total_cmp(&delta[b]).then(a.cmp(&b)));
    let mut position = vec![0; delta.len()];
    for (rank, &node) in order.iter().enumerate() {
        position[node] = rank + 1;
    }
    let mut ranks = leaders
        .iter()
        .map(|&l| {
            position.get(l).copied().ok_or(Error::IndexOutOfRange {
                index: l,
                len: delta.len(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    ranks.sort_unstable();
    Ok(ranks)
}

/// Ranks starting at 1, tied values sharing their average rank.
pub fn average_ranks(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut ranks = vec![0.0; values.len()];
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && values[order[end]] == values[order[start]] {
            end += 1;
        }
        let avg = (start + end + 1) as f64 / 2.0;
        for &i in &order[start..end] {
            ranks[i] = avg;
        }
        start = end;
    }
    ranks
}

fn pearson(a: &[f64], b: &[f64]) -> Result<f64> {
    let n = a.len() as f64;
    let ma = a.iter().sum::<f64>() / n;
    let mb = b.iter().sum::<f64>() / n;
    let (mut sab, mut saa, mut sbb) = (0.0, 0.0, 0.0);
    for (x, y) in a.iter().zip(b) {
        sab += (x - ma) * (y - mb);
        saa += (x - ma) * (x - ma);
        sbb += (y - mb) * (y - mb);
    }
    if saa == 0.0 || sbb == 0.0 {
        return Err(Error::UndefinedCorrelation);
    }
    Ok(sab / (saa * sbb).sqrt())
}

/// Spearman's rank correlation with average ranks for ties.
pub fn spearman_rho(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch {
            expected: a.len(),
            found: b.len(),
        });
    }
    if a.len() < 2 {
        return Err(Error::UndefinedCorrelation);
    }
    pearson(&average_ranks(a), &average_ranks(b))
}

/// Correlation between the scores `s_i` and the centrality `-δ_i` over the
/// `k` nodes with the largest `s_i` (ties by index). Positive values mean
/// the heaviest nodes sit closest to everyone else.
pub fn spearman_top_k(scores: &[f64], delta: &[f64], k: usize) -> Result<f64> {
    if scores.len() != delta.len() {
        return Err(Error::DimensionMismatch {
            expected: scores.len(),
            found: delta.len(),
        });
    }
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]).then(a.cmp(&b)));
    order.truncate(k);
    let s: Vec<f64> = order.iter().map(|&i| scores[i]).collect();
    let d: Vec<f64> = order.iter().map(|&i| -delta[i]).collect();
    spearman_rho(&s, &d)
}

/// Fraction of nodes whose nearest other node (ties to the lowest index)
/// is a graph neighbour. Nodes without neighbours are skipped.
pub fn recall_at_1<G: PairGeometry, C: AsRef<[f64]>>(geom: &G, points: &[C], graph: &WeightedGraph) -> f64 {
    let n = points.len();
    let mut hits = 0usize;
    let mut counted = 0usize;
    for i in 0..n {
        if !(0..n).any(|j| j != i && graph.has_edge(i, j)) {
            continue;
        }
        counted += 1;
        let mut best = None;
        let mut best_d = f64::INFINITY;
        for j in (0..n).filter(|&j| j != i) {
            let d = geom.dissimilarity(points[i].as_ref(), points[j].as_ref());
            if d < best_d {
                best_d = d;
                best = Some(j);
            }
        }
        if best.is_some_and(|j| graph.has_edge(i, j)) {
            hits += 1;
        }
    }
    if counted == 0 {
        0.0
    } else {
        hits as f64 / counted as f64
    }
}
