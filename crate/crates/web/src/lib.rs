//! wasm-bindgen exports for the browser demo in `www/`.
//!
//! Geometry calls work on `Q^{2,1}_{-1}` with coordinates `(t0, t1, s0, s1)`
//! and base point at the pole `(1, 0, 0, 0)`.

use ultrahyperbolic::metrics::{delta_scores, leader_ranks};
use ultrahyperbolic::{
    constraint_satisfaction, dissimilarity, geodesic, karate_club, psi_inverse, train, GeodesicClass,
    ManifoldPoint, Signature, SphereCrossEuclidean, TangentVector, TrainingConfig,
};
use wasm_bindgen::prelude::*;

fn demo_signature() -> Signature {
    Signature::new(2, 1, -1.0).expect("valid demo signature")
}

fn js(e: ultrahyperbolic::Error) -> JsError {
    JsError::new(&e.to_string())
}

/// `"timelike"`, `"null"` or `"spacelike"` for the tangent vector
/// `(0, a, b, c)` at the pole.
#[wasm_bindgen]
pub fn geodesic_class(a: f64, b: f64, c: f64) -> String {
    match GeodesicClass::of(&[0.0, a, b, c], &demo_signature()) {
        GeodesicClass::TimeLike => "timelike",
        GeodesicClass::Null => "null",
        GeodesicClass::SpaceLike => "spacelike",
    }
    .to_string()
}

/// Samples `γ(t)` for `t` in `[-t_max, t_max]` from the pole along
/// `(0, a, b, c)`. Returns `steps` points flattened as 4 coordinates each.
#[wasm_bindgen]
pub fn geodesic_path(a: f64, b: f64, c: f64, t_max: f64, steps: usize) -> Result<Vec<f64>, JsError> {
    let sig = demo_signature();
    let pole = sig.pole();
    let xi = TangentVector::new(&pole, vec![0.0, a, b, c]).map_err(js)?;
    let steps = steps.max(2);
    let mut out = Vec::with_capacity(4 * steps);
    for k in 0..steps {
        let t = -t_max + 2.0 * t_max * k as f64 / (steps - 1) as f64;
        out.extend_from_slice(geodesic(&pole, &xi, t).map_err(js)?.coords());
    }
    Ok(out)
}

/// Point with time direction at angle `theta` and spatial part `(s0, s1)`.
fn point_at(theta: f64, s0: f64, s1: f64, sig: &Signature) -> Result<ManifoldPoint, JsError> {
    let z = SphereCrossEuclidean::new(vec![theta.cos(), theta.sin()], vec![s0, s1]).map_err(js)?;
    psi_inverse(&z, sig).map_err(js)
}

/// Dissimilarity from the pole to the points with time angle `theta` and
/// spatial part on a `size × size` grid over `[-radius, radius]²`,
/// row-major with `s1` decreasing down the rows.
#[wasm_bindgen]
pub fn dissimilarity_field(theta: f64, radius: f64, size: usize) -> Result<Vec<f64>, JsError> {
    let sig = demo_signature();
    let pole = sig.pole();
    let size = size.max(2);
    let coord = |k: usize| -radius + 2.0 * radius * k as f64 / (size - 1) as f64;
    let mut out = Vec::with_capacity(size * size);
    for row in 0..size {
        for col in 0..size {
            let y = point_at(theta, coord(col), coord(size - 1 - row), &sig)?;
            out.push(dissimilarity(&pole, &y).map_err(js)?);
        }
    }
    Ok(out)
}

/// Outcome of a short karate-club training run.
#[wasm_bindgen]
pub struct TrainingReport {
    final_loss: f64,
    satisfaction: f64,
    iterations: usize,
    leader_ranks: Vec<u32>,
    spatial: Vec<f64>,
    time_angle: Vec<f64>,
    scores: Vec<f64>,
    losses: Vec<f64>,
}

#[wasm_bindgen]
impl TrainingReport {
    #[wasm_bindgen(getter)]
    pub fn final_loss(&self) -> f64 {
        self.final_loss
    }

    #[wasm_bindgen(getter)]
    pub fn satisfaction(&self) -> f64 {
        self.satisfaction
    }

    #[wasm_bindgen(getter)]
    pub fn iterations(&self) -> usize {
        self.iterations
    }

    /// 1-based ranks of nodes 0 and 33 by `δ`, sorted.
    #[wasm_bindgen(getter)]
    pub fn leader_ranks(&self) -> Vec<u32> {
        self.leader_ranks.clone()
    }

    /// First two spatial coordinates of every node, flattened.
    #[wasm_bindgen(getter)]
    pub fn spatial(&self) -> Vec<f64> {
        self.spatial.clone()
    }

    /// Angle of the first two time coordinates of every node.
    #[wasm_bindgen(getter)]
    pub fn time_angle(&self) -> Vec<f64> {
        self.time_angle.clone()
    }

    /// Weighted degree of every node.
    #[wasm_bindgen(getter)]
    pub fn scores(&self) -> Vec<f64> {
        self.scores.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn losses(&self) -> Vec<f64> {
        self.losses.clone()
    }
}

/// Trains the weighted karate club on `Q^{p,q}_{-1}` (`p >= 2`).
#[wasm_bindgen]
pub fn train_karate(p: usize, q: usize, iterations: usize, eta: f64, seed: u64) -> Result<TrainingReport, JsError> {
    if p < 2 {
        return Err(JsError::new("the plot needs p >= 2 spatial coordinates"));
    }
    let sig = Signature::new(p, q, -1.0).map_err(js)?;
    let graph = karate_club();
    let config = TrainingConfig {
        step_size: eta,
        max_iterations: iterations,
        seed,
        ..TrainingConfig::new(sig)
    };
    let set = train(&graph, &config).map_err(js)?;
    let delta = delta_scores(&sig, &set.points);
    let time = sig.time_dims();
    let (mut spatial, mut time_angle) = (Vec::new(), Vec::new());
    for x in &set.points {
        let c = x.coords();
        spatial.extend_from_slice(&c[time..time + 2]);
        time_angle.push(if time > 1 { c[1].atan2(c[0]) } else { 0.0 });
    }
    Ok(TrainingReport {
        final_loss: set.final_loss,
        satisfaction: constraint_satisfaction(&set.points, &graph),
        iterations: set.iterations,
        leader_ranks: leader_ranks(&delta, &[0, 33])
            .map_err(js)?
            .into_iter()
            .map(|r| r as u32)
            .collect(),
        spatial,
        time_angle,
        scores: graph.scores(),
        losses: set.trace.iter().map(|t| t.loss).collect(),
    })
}
