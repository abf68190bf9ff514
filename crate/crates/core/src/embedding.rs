//! Node embeddings learned with the softmax ranking loss
//!
//! ```text
//! L = Σ_{e_k=(i,j) ∈ E} -log[ exp(-d(x_i,x_j)/τ) / Σ_{(a,b) ∈ W(e_k) ∪ {e_k}} exp(-d(x_a,x_b)/τ) ]
//! ```
//!
//! where `W(e_k)` holds the lower-capacity edges and the non-adjacent
//! pairs. The loss is evaluated once per pair rather than once per
//! (edge, weaker pair): all edges share the same non-edge pool, and the
//! lower-capacity edges of `e_k` form a prefix of the capacity-sorted edge
//! list, so every normalizer and every softmax weight falls out of running
//! log-sum-exp accumulators.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{normalize_to_manifold, AmbientVector, ManifoldPoint, Signature};
use crate::graph::{Pair, WeightedGraph};
use crate::maps::{dissimilarity_derivative, dissimilarity_from_inner};
use crate::optim::{
    optimize_via_phi_with_monitor, optimize_with_monitor, Control, ObjectiveEvaluation, OptimizerConfig,
    OptimizerMode, StopRule, TraceRecord,
};

/// Pairs closer than this to `<x,y>_q/β = 1` contribute no gradient.
pub const SINGULAR_BAND: f64 = 1e-9;

/// A space in which pairwise dissimilarities and their gradients can be
/// evaluated on raw coordinates.
pub trait PairGeometry: Sync {
    fn dim(&self) -> usize;

    fn dissimilarity(&self, a: &[f64], b: &[f64]) -> f64;

    /// Adds `weight · ∂d/∂a` to `grad_a` and `weight · ∂d/∂b` to `grad_b`.
    fn accumulate_gradient(&self, a: &[f64], b: &[f64], weight: f64, grad_a: &mut [f64], grad_b: &mut [f64]);
}

impl PairGeometry for Signature {
    fn dim(&self) -> usize {
        Signature::dim(self)
    }

    #[inline]
    fn dissimilarity(&self, a: &[f64], b: &[f64]) -> f64 {
        dissimilarity_from_inner(self.inner(a, b), self)
    }

    #[inline]
    fn accumulate_gradient(&self, a: &[f64], b: &[f64], weight: f64, grad_a: &mut [f64], grad_b: &mut [f64]) {
        let dd = dissimilarity_derivative(self.inner(a, b), self, SINGULAR_BAND);
        if dd == 0.0 {
            return;
        }
        // ∂<a,b>_q/∂a = G b
        let w = weight * dd;
        let t = self.time_dims();
        for k in 0..a.len() {
            let sign = if k < t { -w } else { w };
            grad_a[k] += sign * b[k];
            grad_b[k] += sign * a[k];
        }
    }
}

/// Flat space `R^dim` with the Euclidean distance; the baseline geometry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Euclidean {
    pub dim: usize,
}

impl PairGeometry for Euclidean {
    fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    fn dissimilarity(&self, a: &[f64], b: &[f64]) -> f64 {
        a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
    }

    #[inline]
    fn accumulate_gradient(&self, a: &[f64], b: &[f64], weight: f64, grad_a: &mut [f64], grad_b: &mut [f64]) {
        let d = self.dissimilarity(a, b);
        if d < 1e-12 {
            return;
        }
        for k in 0..a.len() {
            let g = weight * (a[k] - b[k]) / d;
            grad_a[k] += g;
            grad_b[k] -= g;
        }
    }
}

/// Materialized weaker sets for every edge: a non-edge pool shared by all
/// edges, plus edges grouped by increasing capacity.
#[derive(Debug, Clone)]
pub struct WeakerSets {
    non_edges: Vec<Pair>,
    /// Edge indices sorted by capacity, then index.
    order: Vec<usize>,
    /// `group_end[g]` is one past the last position of capacity group `g`
    /// in `order`.
    group_end: Vec<usize>,
}

impl WeakerSets {
    /// Every non-edge is a weaker pair of every edge.
    pub fn exact(graph: &WeightedGraph) -> Self {
        Self::with_pool(graph, graph.non_edges())
    }

    /// Non-edge pool replaced by a uniform sample of `count` non-edges.
    pub fn sampled<R: Rng + ?Sized>(graph: &WeightedGraph, count: usize, rng: &mut R) -> Self {
        Self::with_pool(graph, graph.sample_non_edges(count, rng))
    }

    pub fn with_pool(graph: &WeightedGraph, non_edges: Vec<Pair>) -> Self {
        let edges = graph.edges();
        let mut order: Vec<usize> = (0..edges.len()).collect();
        order.sort_by(|&a, &b| {
            edges[a]
                .capacity
                .partial_cmp(&edges[b].capacity)
                .expect("capacities are finite")
                .then(a.cmp(&b))
        });
        let mut group_end = Vec::new();
        for pos in 1..=order.len() {
            if pos == order.len() || edges[order[pos]].capacity != edges[order[pos - 1]].capacity {
                group_end.push(pos);
            }
        }
        Self {
            non_edges,
            order,
            group_end,
        }
    }

    pub fn non_edges(&self) -> &[Pair] {
        &self.non_edges
    }

    /// Explicit `W(e_k)` under this materialization.
    pub fn for_edge(&self, graph: &WeightedGraph, k: usize) -> Vec<Pair> {
        let c = graph.edges()[k].capacity;
        let mut out: Vec<Pair> = graph
            .edges()
            .iter()
            .filter(|e| e.capacity < c)
            .map(|e| (e.i, e.j))
            .collect();
        out.extend_from_slice(&self.non_edges);
        out
    }
}

#[inline]
fn lse2(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let m = a.max(b);
    m + ((a - m).exp() + (b - m).exp()).ln()
}

fn lse(values: impl Iterator<Item = f64> + Clone) -> f64 {
    let m = values.clone().fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return m;
    }
    m + values.map(|v| (v - m).exp()).sum::<f64>().ln()
}

/// Evaluates pair dissimilarities, splitting the work over `threads`
/// scoped workers. Output order matches `pairs`.
pub fn pair_dissimilarities<G: PairGeometry, C: AsRef<[f64]> + Sync>(
    geom: &G,
    points: &[C],
    pairs: &[Pair],
    threads: usize,
) -> Vec<f64> {
    let eval = |chunk: &[Pair], out: &mut [f64]| {
        for (o, &(a, b)) in out.iter_mut().zip(chunk) {
            *o = geom.dissimilarity(points[a].as_ref(), points[b].as_ref());
        }
    };
    let mut out = vec![0.0; pairs.len()];
    let threads = threads.max(1);
    if threads == 1 || pairs.len() < 4096 {
        eval(pairs, &mut out);
        return out;
    }
    let chunk = pairs.len().div_ceil(threads);
    std::thread::scope(|scope| {
        for (p, o) in pairs.chunks(chunk).zip(out.chunks_mut(chunk)) {
            scope.spawn(move || eval(p, o));
        }
    });
    out
}

/// Loss value and, optionally, Euclidean gradients for every node.
pub fn loss_and_gradients_with<G: PairGeometry, C: AsRef<[f64]> + Sync>(
    geom: &G,
    points: &[C],
    graph: &WeightedGraph,
    tau: f64,
    weaker: &WeakerSets,
    want_gradients: bool,
    threads: usize,
) -> Result<(f64, Option<Vec<AmbientVector>>)> {
    if points.len() != graph.node_count() {
        return Err(Error::DimensionMismatch {
            expected: graph.node_count(),
            found: points.len(),
        });
    }
    if !(tau.is_finite() && tau > 0.0) {
        return Err(Error::InvalidArgument(format!("temperature must be positive, got {tau}")));
    }
    let edges = graph.edges();
    let edge_pairs: Vec<Pair> = edges.iter().map(|e| (e.i, e.j)).collect();
    let d_edge = pair_dissimilarities(geom, points, &edge_pairs, threads);
    let d_non = pair_dissimilarities(geom, points, &weaker.non_edges, threads);
    if let Some(bad) = d_edge.iter().chain(&d_non).find(|d| !d.is_finite()) {
        return Err(Error::Numeric(format!("non-finite dissimilarity {bad}")));
    }

    let a_edge: Vec<f64> = d_edge.iter().map(|d| -d / tau).collect();
    let a_non: Vec<f64> = d_non.iter().map(|d| -d / tau).collect();
    let lse_non = lse(a_non.iter().copied());

    // log-normalizer of every edge, walking capacity groups upward
    let mut log_z = vec![0.0; edges.len()];
    let mut lse_lower = f64::NEG_INFINITY;
    let mut start = 0;
    for &end in &weaker.group_end {
        let base = lse2(lse_non, lse_lower);
        for &k in &weaker.order[start..end] {
            log_z[k] = lse2(base, a_edge[k]);
        }
        for &k in &weaker.order[start..end] {
            lse_lower = lse2(lse_lower, a_edge[k]);
        }
        start = end;
    }
    let value: f64 = (0..edges.len()).map(|k| log_z[k] - a_edge[k]).sum();
    if !value.is_finite() {
        return Err(Error::Numeric(format!("loss evaluated to {value}")));
    }
    if !want_gradients {
        return Ok((value, None));
    }

    // ∂L/∂d for every pair
    let mut w_edge: Vec<f64> = (0..edges.len())
        .map(|k| (1.0 - (a_edge[k] - log_z[k]).exp()) / tau)
        .collect();
    // edges with higher capacity than a group see it as weaker
    let mut lse_higher = f64::NEG_INFINITY;
    let mut end = edges.len();
    for g in (0..weaker.group_end.len()).rev() {
        let start = if g == 0 { 0 } else { weaker.group_end[g - 1] };
        for &k in &weaker.order[start..end] {
            if lse_higher > f64::NEG_INFINITY {
                w_edge[k] -= (a_edge[k] + lse_higher).exp() / tau;
            }
        }
        for &k in &weaker.order[start..end] {
            lse_higher = lse2(lse_higher, -log_z[k]);
        }
        end = start;
    }
    let lse_all = lse(log_z.iter().map(|z| -z));
    let dim = geom.dim();
    let mut grads = vec![vec![0.0; dim]; points.len()];
    let mut add = |a: usize, b: usize, w: f64| {
        if w == 0.0 {
            return;
        }
        let (ga, gb) = if a < b {
            let (lo, hi) = grads.split_at_mut(b);
            (&mut lo[a], &mut hi[0])
        } else {
            let (lo, hi) = grads.split_at_mut(a);
            (&mut hi[0], &mut lo[b])
        };
        geom.accumulate_gradient(points[a].as_ref(), points[b].as_ref(), w, ga, gb);
    };
    for (k, &(a, b)) in edge_pairs.iter().enumerate() {
        add(a, b, w_edge[k]);
    }
    if lse_all > f64::NEG_INFINITY {
        for (idx, &(a, b)) in weaker.non_edges.iter().enumerate() {
            add(a, b, -(a_non[idx] + lse_all).exp() / tau);
        }
    }
    if grads.iter().flatten().any(|g| !g.is_finite()) {
        return Err(Error::Numeric("non-finite gradient".into()));
    }
    Ok((value, Some(grads)))
}

/// Ranking loss of manifold embeddings under the total dissimilarity.
pub fn loss(points: &[ManifoldPoint], graph: &WeightedGraph, tau: f64, weaker: &WeakerSets) -> Result<f64> {
    let sig = common_signature(points)?;
    Ok(loss_and_gradients_with(&sig, points, graph, tau, weaker, false, 1)?.0)
}

/// Euclidean gradients `∂L/∂x_i` in ambient coordinates.
pub fn loss_gradients(
    points: &[ManifoldPoint],
    graph: &WeightedGraph,
    tau: f64,
    weaker: &WeakerSets,
) -> Result<Vec<AmbientVector>> {
    let sig = common_signature(points)?;
    Ok(loss_and_gradients_with(&sig, points, graph, tau, weaker, true, 1)?
        .1
        .expect("gradients requested"))
}

fn common_signature(points: &[ManifoldPoint]) -> Result<Signature> {
    let first = points
        .first()
        .ok_or_else(|| Error::InvalidArgument("no points".into()))?
        .signature();
    if points.iter().any(|p| p.signature() != first) {
        return Err(Error::InvalidArgument("points have mixed signatures".into()));
    }
    Ok(first)
}

/// Fraction of ordering constraints `d(e_k) < d(w)`, `w ∈ W(e_k)`, that
/// hold, using every non-edge. Returns 1 when there are no constraints.
pub fn constraint_satisfaction_with<G: PairGeometry, C: AsRef<[f64]> + Sync>(
    geom: &G,
    points: &[C],
    graph: &WeightedGraph,
) -> f64 {
    let edges = graph.edges();
    let edge_pairs: Vec<Pair> = edges.iter().map(|e| (e.i, e.j)).collect();
    let d_edge = pair_dissimilarities(geom, points, &edge_pairs, 1);
    let mut d_non = pair_dissimilarities(geom, points, &graph.non_edges(), 1);
    d_non.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));

    let mut satisfied = 0usize;
    let mut total = 0usize;
    for (k, e) in edges.iter().enumerate() {
        let dk = d_edge[k];
        satisfied += d_non.len() - d_non.partition_point(|&d| d <= dk);
        total += d_non.len();
        for (l, f) in edges.iter().enumerate() {
            if f.capacity < e.capacity {
                total += 1;
                if dk < d_edge[l] {
                    satisfied += 1;
                }
            }
        }
    }
    if total == 0 {
        1.0
    } else {
        satisfied as f64 / total as f64
    }
}

pub fn constraint_satisfaction(points: &[ManifoldPoint], graph: &WeightedGraph) -> f64 {
    match common_signature(points) {
        Ok(sig) => constraint_satisfaction_with(&sig, points, graph),
        Err(_) => 1.0,
    }
}

/// True when every edge is strictly closer than every non-edge. Only
/// meaningful as the full-satisfaction test for unweighted graphs.
fn unweighted_satisfied<G: PairGeometry, C: AsRef<[f64]> + Sync>(
    geom: &G,
    points: &[C],
    graph: &WeightedGraph,
    non_edges: &[Pair],
) -> bool {
    let far_edge = graph
        .edges()
        .iter()
        .map(|e| geom.dissimilarity(points[e.i].as_ref(), points[e.j].as_ref()))
        .fold(f64::NEG_INFINITY, f64::max);
    non_edges
        .iter()
        .all(|&(a, b)| geom.dissimilarity(points[a].as_ref(), points[b].as_ref()) > far_edge)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum NegativeSampling {
    /// Exact weaker sets.
    All,
    /// Per-iteration uniform sample of this many non-edges.
    Sampled(usize),
}

/// Graphs up to this size always use exact weaker sets.
pub const EXACT_MODE_MAX_NODES: usize = 200;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainingConfig {
    pub signature: Signature,
    pub temperature: f64,
    pub epsilon: f64,
    pub step_size: f64,
    pub max_iterations: usize,
    pub seed: u64,
    pub negatives: NegativeSampling,
    pub mode: OptimizerMode,
    /// Stop as soon as every constraint holds (unweighted graphs only).
    pub stop_when_satisfied: bool,
    pub threads: usize,
}

impl TrainingConfig {
    /// Defaults: `τ = 1e-2`, `ε = 0.1`, `η = 1e-6`, 10 000 iterations.
    pub fn new(signature: Signature) -> Self {
        Self {
            signature,
            temperature: 1e-2,
            epsilon: 0.1,
            step_size: 1e-6,
            max_iterations: 10_000,
            seed: 0,
            negatives: NegativeSampling::All,
            mode: OptimizerMode::PseudoRiemannian,
            stop_when_satisfied: true,
            threads: 1,
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.temperature.is_finite() && self.temperature > 0.0) {
            return Err(Error::InvalidArgument("temperature must be positive".into()));
        }
        if !(self.epsilon.is_finite() && self.epsilon > 0.0) {
            return Err(Error::InvalidArgument("epsilon must be positive".into()));
        }
        if self.epsilon >= self.signature.sqrt_abs_beta() {
            return Err(Error::InvalidArgument(
                "epsilon must be smaller than sqrt(|beta|)".into(),
            ));
        }
        if let NegativeSampling::Sampled(0) = self.negatives {
            return Err(Error::InvalidArgument("negative sample count must be positive".into()));
        }
        Ok(())
    }
}

/// Learned points plus the record of how they were obtained.
#[derive(Debug, Clone)]
pub struct EmbeddingSet {
    pub signature: Signature,
    pub points: Vec<ManifoldPoint>,
    pub trace: Vec<TraceRecord>,
    pub seed: u64,
    /// Number of loss evaluations recorded in the trace.
    pub iterations: usize,
    /// Loss of the returned points.
    pub final_loss: f64,
    /// True when the run stopped because every constraint held.
    pub converged: bool,
    pub renormalizations: usize,
    pub warnings: Vec<String>,
}

/// Points scattered around the positive pole: uniform noise in `[-ε, ε]`
/// per coordinate, redrawn until timelike, then scaled onto the manifold.
pub fn init_embeddings(n: usize, config: &TrainingConfig) -> Result<EmbeddingSet> {
    config.validate()?;
    let sig = config.signature;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let points = init_points(n, &sig, config.epsilon, &mut rng);
    Ok(EmbeddingSet {
        signature: sig,
        points,
        trace: Vec::new(),
        seed: config.seed,
        iterations: 0,
        final_loss: f64::NAN,
        converged: false,
        renormalizations: 0,
        warnings: Vec::new(),
    })
}

fn init_points(n: usize, sig: &Signature, epsilon: f64, rng: &mut ChaCha8Rng) -> Vec<ManifoldPoint> {
    let pole = sig.pole();
    (0..n)
        .map(|_| loop {
            let z: Vec<f64> = pole
                .coords()
                .iter()
                .map(|c| c + rng.gen_range(-epsilon..=epsilon))
                .collect();
            if let Ok(x) = normalize_to_manifold(&z, sig) {
                break x;
            }
        })
        .collect()
}

/// Tracks the soft progress guard: how long the violated-constraint count
/// has gone without a new minimum.
struct ProgressGuard {
    best: usize,
    since: usize,
    warned: bool,
}

const STALL_WINDOW: usize = 500;

fn unweighted_violations<G: PairGeometry, C: AsRef<[f64]> + Sync>(
    geom: &G,
    points: &[C],
    graph: &WeightedGraph,
    non_edges: &[Pair],
) -> usize {
    let mut d_non: Vec<f64> = pair_dissimilarities(geom, points, non_edges, 1);
    d_non.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    graph
        .edges()
        .iter()
        .map(|e| {
            let d = geom.dissimilarity(points[e.i].as_ref(), points[e.j].as_ref());
            d_non.partition_point(|&x| x <= d)
        })
        .sum()
}

/// Learns embeddings of `graph` on `config.signature`.
pub fn train(graph: &WeightedGraph, config: &TrainingConfig) -> Result<EmbeddingSet> {
    config.validate()?;
    let sig = config.signature;
    let n = graph.node_count();
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let initial = init_points(n, &sig, config.epsilon, &mut rng);
    let exact = matches!(config.negatives, NegativeSampling::All) || n <= EXACT_MODE_MAX_NODES;
    let exact_sets = WeakerSets::exact(graph);
    let mut sample_rng = ChaCha8Rng::seed_from_u64(config.seed);
    sample_rng.set_stream(1);
    let sample_count = match config.negatives {
        NegativeSampling::Sampled(c) => c,
        NegativeSampling::All => 0,
    };

    let tau = config.temperature;
    let threads = config.threads;
    let objective = |pts: &[ManifoldPoint]| -> Result<ObjectiveEvaluation> {
        let sampled;
        let sets = if exact {
            &exact_sets
        } else {
            sampled = WeakerSets::sampled(graph, sample_count, &mut sample_rng);
            &sampled
        };
        let (value, grads) = loss_and_gradients_with(&sig, pts, graph, tau, sets, true, threads)?;
        Ok(ObjectiveEvaluation {
            value,
            euclidean_gradients: grads.expect("gradients requested"),
        })
    };

    let stop_check = config.stop_when_satisfied && graph.is_unweighted() && graph.edge_count() > 0;
    let non_edges = graph.non_edges();
    let mut guard = ProgressGuard {
        best: usize::MAX,
        since: 0,
        warned: false,
    };
    let mut warnings = Vec::new();
    let monitor = |state: &crate::optim::IterationState<'_>| {
        if !stop_check {
            return Control::Continue;
        }
        if unweighted_satisfied(&sig, state.points, graph, &non_edges) {
            return Control::Stop;
        }
        let v = unweighted_violations(&sig, state.points, graph, &non_edges);
        if v < guard.best {
            guard.best = v;
            guard.since = 0;
        } else {
            guard.since += 1;
            if guard.since > STALL_WINDOW && !guard.warned {
                guard.warned = true;
                warnings.push(format!(
                    "no reduction of violated constraints for {STALL_WINDOW} iterations (at iteration {})",
                    state.iteration
                ));
            }
        }
        Control::Continue
    };

    let opt = OptimizerConfig {
        step_size: config.step_size,
        max_iterations: config.max_iterations.max(1),
        stop_rule: StopRule::Callback,
        seed: config.seed,
        mode: config.mode,
        line_search: false,
        renormalize_every: 100,
    };
    let (points, trace, converged, renormalizations) = match config.mode {
        OptimizerMode::PseudoRiemannian => {
            let r = optimize_with_monitor(objective, initial, &opt, monitor)?;
            (r.points, r.trace, r.converged, r.renormalizations)
        }
        OptimizerMode::EuclideanViaPhi => {
            let params = initial.into_iter().map(ManifoldPoint::into_coords).collect();
            let r = optimize_via_phi_with_monitor(objective, params, &sig, &opt, monitor)?;
            (r.points, r.trace, r.converged, 0)
        }
    };
    let final_loss = if converged {
        trace.last().map_or(f64::NAN, |t| t.loss)
    } else {
        loss_and_gradients_with(&sig, &points, graph, tau, &exact_sets, false, threads)?.0
    };
    Ok(EmbeddingSet {
        signature: sig,
        points,
        iterations: trace.len(),
        trace,
        seed: config.seed,
        final_loss,
        converged,
        renormalizations,
        warnings,
    })
}

/// Plain gradient-descent baseline in `R^dim` with the Euclidean distance,
/// trained on the same loss. Points start uniformly in `[-ε, ε]^dim`.
#[derive(Debug, Clone)]
pub struct EuclideanEmbedding {
    pub geometry: Euclidean,
    pub points: Vec<Vec<f64>>,
    pub trace: Vec<TraceRecord>,
}

pub fn train_euclidean(graph: &WeightedGraph, dim: usize, config: &TrainingConfig) -> Result<EuclideanEmbedding> {
    if dim == 0 {
        return Err(Error::InvalidArgument("dimension must be positive".into()));
    }
    let geom = Euclidean { dim };
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut points: Vec<Vec<f64>> = (0..graph.node_count())
        .map(|_| (0..dim).map(|_| rng.gen_range(-config.epsilon..=config.epsilon)).collect())
        .collect();
    let sets = WeakerSets::exact(graph);
    let stop_check = config.stop_when_satisfied && graph.is_unweighted() && graph.edge_count() > 0;
    let non_edges = graph.non_edges();
    let mut trace = Vec::with_capacity(config.max_iterations);
    for iteration in 0..config.max_iterations {
        let (value, grads) =
            loss_and_gradients_with(&geom, &points, graph, config.temperature, &sets, true, config.threads)?;
        let grads = grads.expect("gradients requested");
        trace.push(TraceRecord {
            iteration,
            loss: value,
            gradient_norm_sq: grads.iter().flatten().map(|g| g * g).sum(),
        });
        if stop_check && unweighted_satisfied(&geom, &points, graph, &non_edges) {
            break;
        }
        for (x, g) in points.iter_mut().zip(&grads) {
            for (xc, gc) in x.iter_mut().zip(g) {
                *xc -= config.step_size * gc;
            }
        }
    }
    Ok(EuclideanEmbedding {
        geometry: geom,
        points,
        trace,
    })
}
