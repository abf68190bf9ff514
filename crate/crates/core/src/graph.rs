//! Capacity-weighted undirected graphs, the edge-list text format, and the
//! "weaker pair" sets used by the ranking loss.
//!
//! Edge-list format: UTF-8, one entry per line as `i<TAB>j<TAB>capacity`
//! (any whitespace is accepted), `#` starts a comment. Optional header
//! lines: `n=<int>` fixes the node count, `directed=true` marks the
//! entries as a directed capacity matrix `C` that is symmetrized into
//! `S = C + Cᵀ`.

use std::collections::{HashMap, HashSet};
use std::fmt::Write as _;

use rand::seq::index::sample;
use rand::Rng;

use crate::error::{Error, Result};

/// An undirected pair, always stored with `i < j`.
pub type Pair = (usize, usize);

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub i: usize,
    pub j: usize,
    pub capacity: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct WeightedGraph {
    n: usize,
    edges: Vec<Edge>,
    index: HashMap<Pair, usize>,
}

#[inline]
fn ordered(i: usize, j: usize) -> Pair {
    if i < j {
        (i, j)
    } else {
        (j, i)
    }
}

impl WeightedGraph {
    /// Builds a graph from undirected edges. Rejects self-loops, repeated
    /// pairs, out-of-range indices and nonpositive capacities.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize, f64)>) -> Result<Self> {
        let mut g = Self {
            n,
            edges: Vec::new(),
            index: HashMap::new(),
        };
        for (k, (i, j, c)) in edges.into_iter().enumerate() {
            g.push(i, j, c).map_err(|e| match e {
                Error::InvalidArgument(message) => Error::Parse { line: k + 1, message },
                other => other,
            })?;
        }
        Ok(g)
    }

    fn push(&mut self, i: usize, j: usize, capacity: f64) -> Result<()> {
        if i == j {
            return Err(Error::InvalidArgument(format!("self-loop on node {i}")));
        }
        for v in [i, j] {
            if v >= self.n {
                return Err(Error::IndexOutOfRange { index: v, len: self.n });
            }
        }
        if !(capacity.is_finite() && capacity > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "capacity must be positive, got {capacity}"
            )));
        }
        let key = ordered(i, j);
        if self.index.contains_key(&key) {
            return Err(Error::InvalidArgument(format!(
                "duplicate pair ({}, {})",
                key.0, key.1
            )));
        }
        self.index.insert(key, self.edges.len());
        self.edges.push(Edge {
            i: key.0,
            j: key.1,
            capacity,
        });
        Ok(())
    }

    /// Symmetrizes a directed capacity matrix: `S = C + Cᵀ`, with an edge
    /// wherever `S_ij > 0`.
    pub fn from_capacity_matrix(c: &[Vec<f64>]) -> Result<Self> {
        let n = c.len();
        if let Some(row) = c.iter().find(|r| r.len() != n) {
            return Err(Error::DimensionMismatch { expected: n, found: row.len() });
        }
        let mut edges = Vec::new();
        for i in 0..n {
            if c[i][i] != 0.0 {
                return Err(Error::InvalidArgument(format!("self-loop on node {i}")));
            }
            for j in (i + 1)..n {
                if c[i][j] < 0.0 || c[j][i] < 0.0 {
                    return Err(Error::InvalidArgument(format!(
                        "negative capacity between {i} and {j}"
                    )));
                }
                let s = c[i][j] + c[j][i];
                if s > 0.0 {
                    edges.push((i, j, s));
                }
            }
        }
        Self::new(n, edges)
    }

    #[inline]
    pub fn node_count(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    #[inline]
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge_index(&self, i: usize, j: usize) -> Option<usize> {
        self.index.get(&ordered(i, j)).copied()
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.index.contains_key(&ordered(i, j))
    }

    pub fn capacity(&self, i: usize, j: usize) -> f64 {
        self.edge_index(i, j).map_or(0.0, |k| self.edges[k].capacity)
    }

    /// True when every edge has the same capacity.
    pub fn is_unweighted(&self) -> bool {
        self.edges.windows(2).all(|w| w[0].capacity == w[1].capacity)
    }

    /// Same topology with every capacity set to 1.
    pub fn unweighted(&self) -> Self {
        let mut g = self.clone();
        for e in &mut g.edges {
            e.capacity = 1.0;
        }
        g
    }

    /// Weighted degrees `s_i = Σ_j S_ij`.
    pub fn scores(&self) -> Vec<f64> {
        let mut s = vec![0.0; self.n];
        for e in &self.edges {
            s[e.i] += e.capacity;
            s[e.j] += e.capacity;
        }
        s
    }

    /// All unordered pairs without an edge, in lexicographic order.
    pub fn non_edges(&self) -> Vec<Pair> {
        let mut out = Vec::new();
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                if !self.has_edge(i, j) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    pub fn non_edge_count(&self) -> usize {
        self.n * self.n.saturating_sub(1) / 2 - self.edges.len()
    }

    /// Uniform sample without replacement of `count` non-edges (all of them
    /// when fewer exist), returned in lexicographic order.
    pub fn sample_non_edges<R: Rng + ?Sized>(&self, count: usize, rng: &mut R) -> Vec<Pair> {
        let total = self.non_edge_count();
        if count >= total {
            return self.non_edges();
        }
        // Rejection on the pair index space stays cheap for sparse graphs.
        let all_pairs = self.n * (self.n - 1) / 2;
        if total * 2 >= all_pairs {
            let mut chosen = HashSet::with_capacity(count);
            while chosen.len() < count {
                let a = rng.gen_range(0..self.n);
                let b = rng.gen_range(0..self.n);
                if a != b && !self.has_edge(a, b) {
                    chosen.insert(ordered(a, b));
                }
            }
            let mut v: Vec<Pair> = chosen.into_iter().collect();
            v.sort_unstable();
            v
        } else {
            let pool = self.non_edges();
            let mut idx = sample(rng, pool.len(), count).into_vec();
            idx.sort_unstable();
            idx.into_iter().map(|k| pool[k]).collect()
        }
    }

    /// Serializes to the edge-list text format.
    pub fn to_edge_list(&self) -> String {
        let mut s = format!("n={}\n", self.n);
        for e in &self.edges {
            let _ = writeln!(s, "{}\t{}\t{}", e.i, e.j, e.capacity);
        }
        s
    }
}

/// How the non-edge part of a weaker set is materialized.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WeakerSampling {
    /// Every non-adjacent pair.
    All,
    /// A seeded uniform sample of this many non-edges.
    Sampled { count: usize, seed: u64 },
}

/// `W(e_k)`: edges with capacity lower than `c_k` plus non-adjacent pairs.
pub fn weaker_set(graph: &WeightedGraph, k: usize, sampling: WeakerSampling) -> Result<Vec<Pair>> {
    let edge = graph.edges().get(k).ok_or(Error::IndexOutOfRange {
        index: k,
        len: graph.edge_count(),
    })?;
    let mut out: Vec<Pair> = graph
        .edges()
        .iter()
        .filter(|e| e.capacity < edge.capacity)
        .map(|e| (e.i, e.j))
        .collect();
    match sampling {
        WeakerSampling::All => out.extend(graph.non_edges()),
        WeakerSampling::Sampled { count, seed } => {
            use rand::SeedableRng;
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(k as u64 + 1);
            out.extend(graph.sample_non_edges(count, &mut rng));
        }
    }
    Ok(out)
}

/// Parses the edge-list format described in the module docs.
pub fn load_graph(source: &str) -> Result<WeightedGraph> {
    let mut declared_n: Option<usize> = None;
    let mut directed = false;
    let mut entries: Vec<(usize, usize, usize, f64)> = Vec::new();

    for (lineno, raw) in source.lines().enumerate() {
        let line_no = lineno + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some((key, value)) = line.split_once('=') {
            let value = value.trim();
            match key.trim() {
                "n" => {
                    declared_n = Some(value.parse().map_err(|_| Error::Parse {
                        line: line_no,
                        message: format!("invalid node count {value:?}"),
                    })?)
                }
                "directed" => {
                    directed = match value {
                        "true" | "1" => true,
                        "false" | "0" => false,
                        _ => {
                            return Err(Error::Parse {
                                line: line_no,
                                message: format!("invalid directed flag {value:?}"),
                            })
                        }
                    }
                }
                other => {
                    return Err(Error::Parse {
                        line: line_no,
                        message: format!("unknown header {other:?}"),
                    })
                }
            }
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 3 {
            return Err(Error::Parse {
                line: line_no,
                message: format!("expected 3 fields, found {}", fields.len()),
            });
        }
        let parse_node = |s: &str| {
            s.parse::<usize>().map_err(|_| Error::Parse {
                line: line_no,
                message: format!("invalid node index {s:?}"),
            })
        };
        let i = parse_node(fields[0])?;
        let j = parse_node(fields[1])?;
        let c: f64 = fields[2].parse().map_err(|_| Error::Parse {
            line: line_no,
            message: format!("invalid capacity {:?}", fields[2]),
        })?;
        if i == j {
            return Err(Error::Parse {
                line: line_no,
                message: format!("self-loop on node {i}"),
            });
        }
        if !(c.is_finite() && c > 0.0) {
            return Err(Error::Parse {
                line: line_no,
                message: format!("capacity must be positive, got {c}"),
            });
        }
        entries.push((line_no, i, j, c));
    }

    let max_index = entries.iter().map(|&(_, i, j, _)| i.max(j) + 1).max().unwrap_or(0);
    let n = match declared_n {
        Some(n) if n < max_index => {
            let (line, ..) = entries.iter().find(|&&(_, i, j, _)| i.max(j) >= n).unwrap();
            return Err(Error::Parse {
                line: *line,
                message: format!("node index exceeds declared n={n}"),
            });
        }
        Some(n) => n,
        None => max_index,
    };

    if directed {
        let mut seen = HashSet::new();
        let mut sym: HashMap<Pair, f64> = HashMap::new();
        for &(line, i, j, c) in &entries {
            if !seen.insert((i, j)) {
                return Err(Error::Parse {
                    line,
                    message: format!("duplicate directed entry ({i}, {j})"),
                });
            }
            *sym.entry(ordered(i, j)).or_insert(0.0) += c;
        }
        let mut edges: Vec<(usize, usize, f64)> = sym.into_iter().map(|((i, j), c)| (i, j, c)).collect();
        edges.sort_by_key(|&(i, j, _)| (i, j));
        return WeightedGraph::new(n, edges);
    }

    let mut g = WeightedGraph {
        n,
        edges: Vec::with_capacity(entries.len()),
        index: HashMap::with_capacity(entries.len()),
    };
    for &(line, i, j, c) in &entries {
        g.push(i, j, c).map_err(|e| Error::Parse {
            line,
            message: match e {
                Error::InvalidArgument(m) => m,
                other => other.to_string(),
            },
        })?;
    }
    Ok(g)
}

/// Zachary's karate club as a directed capacity matrix (34 nodes, 0-based).
pub const KARATE_CLUB_EDGE_LIST: &str = include_str!("../data/karate_capacity.tsv");

/// The karate club with symmetrized capacities `S = C + Cᵀ`.
pub fn karate_club() -> WeightedGraph {
    let g = load_graph(KARATE_CLUB_EDGE_LIST).expect("bundled karate fixture parses");
    assert_eq!(g.node_count(), 34);
    g
}
