//! First-order optimization over products of pseudo-hyperboloid points.
//!
//! Two routes are provided:
//!
//! * [`optimize`]: the pseudo-Riemannian descent loop. At every point the
//!   Euclidean gradient is mapped to the pseudo-Riemannian gradient
//!   `Df(x) = Π_x(G ∇f(x))`, preconditioned into the descent direction
//!   `χ = Π_x(G Df(x))`, and the point moves along `exp_x(-η χ)`.
//!   Since `<Df(x), χ>_q = ‖Df(x)‖² >= 0`, `-χ` is a descent direction even
//!   though the metric is indefinite; `-Df(x)` is not in general.
//! * [`optimize_via_phi`]: plain gradient descent on unconstrained ambient
//!   parameters `z`, mapped onto the manifold by `φ`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{
    l2_sq, normalize_to_manifold, project_raw, AmbientVector, ManifoldPoint, Signature, TangentVector,
    DEFAULT_TOLERANCE,
};
use crate::maps::{geodesic_raw, phi, phi_vjp};

/// Value and per-point Euclidean gradients of an objective.
#[derive(Debug, Clone, PartialEq)]
pub struct ObjectiveEvaluation {
    pub value: f64,
    pub euclidean_gradients: Vec<AmbientVector>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum OptimizerMode {
    PseudoRiemannian,
    EuclideanViaPhi,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum StopRule {
    /// Run exactly `max_iterations` steps.
    MaxIterations,
    /// Stop when the monitor returns [`Control::Stop`], or at `max_iterations`.
    Callback,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimizerConfig {
    pub step_size: f64,
    pub max_iterations: usize,
    pub stop_rule: StopRule,
    pub seed: u64,
    pub mode: OptimizerMode,
    /// Backtracking (halving) until the objective decreases. Off by default.
    pub line_search: bool,
    /// Iterates are checked for drift every this many iterations and put
    /// back on the manifold when they exceed the membership tolerance.
    pub renormalize_every: usize,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            step_size: 1e-6,
            max_iterations: 10_000,
            stop_rule: StopRule::MaxIterations,
            seed: 0,
            mode: OptimizerMode::PseudoRiemannian,
            line_search: false,
            renormalize_every: 100,
        }
    }
}

impl OptimizerConfig {
    fn validate(&self) -> Result<()> {
        if !(self.step_size.is_finite() && self.step_size > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "step size must be positive, got {}",
                self.step_size
            )));
        }
        if self.max_iterations == 0 {
            return Err(Error::InvalidArgument("max_iterations must be positive".into()));
        }
        Ok(())
    }
}

/// One row of the loss curve. `loss` is evaluated before the step.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TraceRecord {
    pub iteration: usize,
    pub loss: f64,
    pub gradient_norm_sq: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Control {
    Continue,
    Stop,
}

/// What a monitor sees before each step.
#[derive(Debug)]
pub struct IterationState<'a> {
    pub iteration: usize,
    pub loss: f64,
    pub points: &'a [ManifoldPoint],
}

#[derive(Debug, Clone)]
pub struct OptimizationResult {
    pub points: Vec<ManifoldPoint>,
    pub trace: Vec<TraceRecord>,
    /// Number of iterates pulled back onto the manifold by drift control.
    pub renormalizations: usize,
    /// True when the monitor requested the stop.
    pub converged: bool,
}

/// `Df(x) = Π_x(G ∇f(x))`.
pub fn pseudo_riemannian_gradient(x: &ManifoldPoint, grad_f: &[f64]) -> Result<TangentVector> {
    let sig = x.signature();
    sig.ambient().check_len(grad_f)?;
    Ok(TangentVector::trusted(riemannian_grad_raw(&sig, x.coords(), grad_f)))
}

#[inline]
fn riemannian_grad_raw(sig: &Signature, x: &[f64], grad_f: &[f64]) -> Vec<f64> {
    let mut g = grad_f.to_vec();
    sig.ambient().apply_metric_in_place(&mut g);
    project_raw(sig, x, &g)
}

#[inline]
fn descent_raw(sig: &Signature, x: &[f64], grad_f: &[f64]) -> Vec<f64> {
    let mut d = riemannian_grad_raw(sig, x, grad_f);
    sig.ambient().apply_metric_in_place(&mut d);
    project_raw(sig, x, &d)
}

/// `χ = Π_x(G Π_x(G ∇f(x)))`; satisfies `<Df(x), χ>_q = ‖Df(x)‖²`.
pub fn descent_direction(x: &ManifoldPoint, grad_f: &[f64]) -> Result<TangentVector> {
    let sig = x.signature();
    sig.ambient().check_len(grad_f)?;
    Ok(TangentVector::trusted(descent_raw(&sig, x.coords(), grad_f)))
}

/// `P_x v = G v - x (xᵀ v) / <x,x>_q`.
pub fn precondition(x: &ManifoldPoint, v: &[f64]) -> Result<AmbientVector> {
    let sig = x.signature();
    sig.ambient().check_len(v)?;
    let xs = x.coords();
    let c = crate::geometry::dot(xs, v) / sig.inner(xs, xs);
    let mut out = v.to_vec();
    sig.ambient().apply_metric_in_place(&mut out);
    for (o, xc) in out.iter_mut().zip(xs) {
        *o -= c * xc;
    }
    Ok(out)
}

/// One descent step `exp_x(-η χ)`.
pub fn step(x: &ManifoldPoint, grad_f: &[f64], eta: f64) -> Result<ManifoldPoint> {
    if !(eta.is_finite() && eta > 0.0) {
        return Err(Error::InvalidArgument(format!("step size must be positive, got {eta}")));
    }
    let sig = x.signature();
    sig.ambient().check_len(grad_f)?;
    let chi = descent_raw(&sig, x.coords(), grad_f);
    Ok(move_along(std::slice::from_ref(x), &[chi], eta, 0)?.remove(0))
}

fn evaluate<F>(objective: &mut F, points: &[ManifoldPoint], iteration: usize) -> Result<ObjectiveEvaluation>
where
    F: FnMut(&[ManifoldPoint]) -> Result<ObjectiveEvaluation>,
{
    let eval = objective(points)?;
    if !eval.value.is_finite() {
        return Err(Error::Divergence {
            iteration,
            reason: format!("objective value is {}", eval.value),
        });
    }
    if eval.euclidean_gradients.len() != points.len() {
        return Err(Error::DimensionMismatch {
            expected: points.len(),
            found: eval.euclidean_gradients.len(),
        });
    }
    for (g, x) in eval.euclidean_gradients.iter().zip(points) {
        x.signature().ambient().check_len(g)?;
        if !g.iter().all(|c| c.is_finite()) {
            return Err(Error::Divergence {
                iteration,
                reason: "non-finite gradient".into(),
            });
        }
    }
    Ok(eval)
}

/// Runs the pseudo-Riemannian descent loop for `config.max_iterations`.
pub fn optimize<F>(objective: F, initial: Vec<ManifoldPoint>, config: &OptimizerConfig) -> Result<OptimizationResult>
where
    F: FnMut(&[ManifoldPoint]) -> Result<ObjectiveEvaluation>,
{
    if config.stop_rule == StopRule::Callback {
        return Err(Error::InvalidArgument(
            "callback stop rule requires optimize_with_monitor".into(),
        ));
    }
    optimize_with_monitor(objective, initial, config, |_| Control::Continue)
}

/// As [`optimize`], consulting `monitor` before every step when the stop
/// rule is [`StopRule::Callback`].
pub fn optimize_with_monitor<F, M>(
    mut objective: F,
    initial: Vec<ManifoldPoint>,
    config: &OptimizerConfig,
    mut monitor: M,
) -> Result<OptimizationResult>
where
    F: FnMut(&[ManifoldPoint]) -> Result<ObjectiveEvaluation>,
    M: FnMut(&IterationState<'_>) -> Control,
{
    config.validate()?;
    let mut points = initial;
    let mut trace = Vec::with_capacity(config.max_iterations);
    let mut renormalizations = 0;
    let mut converged = false;

    for iteration in 0..config.max_iterations {
        let eval = evaluate(&mut objective, &points, iteration)?;
        let directions: Vec<Vec<f64>> = points
            .iter()
            .zip(&eval.euclidean_gradients)
            .map(|(x, g)| descent_raw(&x.signature(), x.coords(), g))
            .collect();
        let gradient_norm_sq = points
            .iter()
            .zip(&eval.euclidean_gradients)
            .map(|(x, g)| l2_sq(&riemannian_grad_raw(&x.signature(), x.coords(), g)))
            .sum();
        trace.push(TraceRecord {
            iteration,
            loss: eval.value,
            gradient_norm_sq,
        });
        if config.stop_rule == StopRule::Callback {
            let state = IterationState {
                iteration,
                loss: eval.value,
                points: &points,
            };
            if monitor(&state) == Control::Stop {
                converged = true;
                break;
            }
        }

        let mut eta = config.step_size;
        let mut next = move_along(&points, &directions, eta, iteration);
        if config.line_search {
            for _ in 0..60 {
                let improved = match &next {
                    Ok(candidate) => objective(candidate).is_ok_and(|c| c.value < eval.value),
                    Err(_) => false,
                };
                if improved {
                    break;
                }
                eta *= 0.5;
                next = move_along(&points, &directions, eta, iteration);
            }
        }
        points = next?;

        if config.renormalize_every > 0 && (iteration + 1) % config.renormalize_every == 0 {
            for x in points.iter_mut() {
                let sig = x.signature();
                if x.drift().abs() > sig.manifold_tolerance(DEFAULT_TOLERANCE) {
                    *x = normalize_to_manifold(x.coords(), &sig).map_err(|e| Error::Divergence {
                        iteration,
                        reason: format!("cannot renormalize iterate: {e}"),
                    })?;
                    renormalizations += 1;
                }
            }
        }
    }

    Ok(OptimizationResult {
        points,
        trace,
        renormalizations,
        converged,
    })
}

fn move_along(
    points: &[ManifoldPoint],
    directions: &[Vec<f64>],
    eta: f64,
    iteration: usize,
) -> Result<Vec<ManifoldPoint>> {
    points
        .iter()
        .zip(directions)
        .map(|(x, chi)| {
            let sig = x.signature();
            let y = geodesic_raw(&sig, x.coords(), chi, -eta);
            // the squared norm must stay finite for later scalar products
            if l2_sq(&y).is_finite() {
                Ok(ManifoldPoint::trusted(y, sig))
            } else {
                Err(Error::Divergence {
                    iteration,
                    reason: "geodesic step left the representable range".into(),
                })
            }
        })
        .collect()
}

/// Result of [`optimize_via_phi`]: the final manifold points, the raw
/// parameters they were mapped from, and the loss curve.
#[derive(Debug, Clone)]
pub struct PhiOptimizationResult {
    pub points: Vec<ManifoldPoint>,
    pub parameters: Vec<AmbientVector>,
    pub trace: Vec<TraceRecord>,
    pub converged: bool,
}

/// Euclidean gradient descent on parameters `z_i`, evaluated at `φ(z_i)`.
pub fn optimize_via_phi<F>(
    objective: F,
    initial_params: Vec<AmbientVector>,
    sig: &Signature,
    config: &OptimizerConfig,
) -> Result<PhiOptimizationResult>
where
    F: FnMut(&[ManifoldPoint]) -> Result<ObjectiveEvaluation>,
{
    if config.stop_rule == StopRule::Callback {
        return Err(Error::InvalidArgument(
            "callback stop rule requires optimize_via_phi_with_monitor".into(),
        ));
    }
    optimize_via_phi_with_monitor(objective, initial_params, sig, config, |_| Control::Continue)
}

pub fn optimize_via_phi_with_monitor<F, M>(
    mut objective: F,
    initial_params: Vec<AmbientVector>,
    sig: &Signature,
    config: &OptimizerConfig,
    mut monitor: M,
) -> Result<PhiOptimizationResult>
where
    F: FnMut(&[ManifoldPoint]) -> Result<ObjectiveEvaluation>,
    M: FnMut(&IterationState<'_>) -> Control,
{
    config.validate()?;
    let mut params = initial_params;
    for z in &params {
        sig.ambient().check_len(z)?;
    }
    let mut points = params.iter().map(|z| phi(z, sig)).collect::<Result<Vec<_>>>()?;
    let mut trace = Vec::with_capacity(config.max_iterations);
    let mut converged = false;

    for iteration in 0..config.max_iterations {
        let eval = evaluate(&mut objective, &points, iteration)?;
        let pulled = params
            .iter()
            .zip(&eval.euclidean_gradients)
            .map(|(z, g)| phi_vjp(z, g, sig))
            .collect::<Result<Vec<_>>>()?;
        trace.push(TraceRecord {
            iteration,
            loss: eval.value,
            gradient_norm_sq: pulled.iter().map(|g| l2_sq(g)).sum(),
        });
        if config.stop_rule == StopRule::Callback {
            let state = IterationState {
                iteration,
                loss: eval.value,
                points: &points,
            };
            if monitor(&state) == Control::Stop {
                converged = true;
                break;
            }
        }

        let mut eta = config.step_size;
        let mut next = descend(&params, &pulled, eta);
        let mut next_points = map_params(&next, sig)?;
        if config.line_search {
            for _ in 0..30 {
                let candidate = evaluate(&mut objective, &next_points, iteration)?;
                if candidate.value < eval.value {
                    break;
                }
                eta *= 0.5;
                next = descend(&params, &pulled, eta);
                next_points = map_params(&next, sig)?;
            }
        }
        params = next;
        points = next_points;
    }

    Ok(PhiOptimizationResult {
        points,
        parameters: params,
        trace,
        converged,
    })
}

fn descend(params: &[AmbientVector], grads: &[AmbientVector], eta: f64) -> Vec<AmbientVector> {
    params
        .iter()
        .zip(grads)
        .map(|(z, g)| z.iter().zip(g).map(|(a, b)| a - eta * b).collect())
        .collect()
}

fn map_params(params: &[AmbientVector], sig: &Signature) -> Result<Vec<ManifoldPoint>> {
    params.iter().map(|z| phi(z, sig)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::scalar_product;

    fn sig() -> Signature {
        Signature::new(2, 1, -1.0).unwrap()
    }

    fn pole() -> ManifoldPoint {
        sig().pole()
    }

    #[test]
    fn gradient_examples() {
        let x = pole();
        assert_eq!(pseudo_riemannian_gradient(&x, &[0., 0., 1., 0.]).unwrap().coords(), &[0., 0., 1., 0.]);
        assert_eq!(pseudo_riemannian_gradient(&x, &[0.; 4]).unwrap().coords(), &[0.; 4]);
        let g = pseudo_riemannian_gradient(&x, &[1., 0., 0., 0.]).unwrap();
        assert!(g.coords().iter().all(|c| *c == 0.0));
    }

    #[test]
    fn descent_direction_examples() {
        let x = pole();
        let chi = descent_direction(&x, &[0., 0., 1., 0.]).unwrap();
        assert_eq!(chi.coords(), &[0., 0., 1., 0.]);
        let df = pseudo_riemannian_gradient(&x, &[0., 0., 1., 0.]).unwrap();
        assert_eq!(scalar_product(df.coords(), chi.coords(), &sig()).unwrap(), 1.0);
        assert_eq!(descent_direction(&x, &[0.; 4]).unwrap().coords(), &[0.; 4]);
    }

    #[test]
    fn precondition_examples() {
        let x = pole();
        // G x = (-1,0,0,0) and xᵀx / <x,x>_q = -1, so P_x x = G x + x
        assert_eq!(precondition(&x, x.coords()).unwrap(), vec![0.; 4]);
        let y = ManifoldPoint::new(vec![1f64.cosh(), 0., 1f64.sinh(), 0.], sig()).unwrap();
        let g = [0.3, -1.2, 0.7, 2.0];
        let df = pseudo_riemannian_gradient(&y, &g).unwrap();
        let via_p = precondition(&y, df.coords()).unwrap();
        let chi = descent_direction(&y, &g).unwrap();
        for (a, b) in via_p.iter().zip(chi.coords()) {
            assert!((a - b).abs() <= 1e-12 * (1.0 + b.abs()));
        }
        assert_eq!(precondition(&x, &[0.; 4]).unwrap(), vec![0.; 4]);
    }

    #[test]
    fn step_examples() {
        let x = pole();
        assert_eq!(step(&x, &[0.; 4], 0.1).unwrap(), x);
        let y = step(&x, &[0., 0., 1., 0.], 1.0).unwrap();
        let expect = [1f64.cosh(), 0., -(1f64.sinh()), 0.];
        assert!(y.coords().iter().zip(&expect).all(|(a, b)| (a - b).abs() < 1e-15));
        assert!(step(&x, &[0.; 4], 0.0).is_err());
    }

    #[test]
    fn linear_objective_decreases_monotonically() {
        let c = [0., 0., 1., 0.];
        let cfg = OptimizerConfig {
            step_size: 1e-3,
            max_iterations: 100,
            ..Default::default()
        };
        let res = optimize(
            |pts: &[ManifoldPoint]| {
                Ok(ObjectiveEvaluation {
                    value: crate::geometry::dot(&c, pts[0].coords()),
                    euclidean_gradients: vec![c.to_vec()],
                })
            },
            vec![pole()],
            &cfg,
        )
        .unwrap();
        assert_eq!(res.trace.len(), 100);
        for w in res.trace.windows(2) {
            assert!(w[1].loss < w[0].loss);
        }
    }

    #[test]
    fn zero_gradient_objective_keeps_points() {
        let x = ManifoldPoint::new(vec![1f64.cosh(), 0., 1f64.sinh(), 0.], sig()).unwrap();
        let cfg = OptimizerConfig {
            max_iterations: 50,
            ..Default::default()
        };
        let res = optimize(
            |_: &[ManifoldPoint]| {
                Ok(ObjectiveEvaluation {
                    value: 3.0,
                    euclidean_gradients: vec![vec![0.; 4]],
                })
            },
            vec![x.clone()],
            &cfg,
        )
        .unwrap();
        assert_eq!(res.points[0], x);

        let phi_res = optimize_via_phi(
            |_: &[ManifoldPoint]| {
                Ok(ObjectiveEvaluation {
                    value: 3.0,
                    euclidean_gradients: vec![vec![0.; 4]],
                })
            },
            vec![x.coords().to_vec()],
            &sig(),
            &cfg,
        )
        .unwrap();
        assert_eq!(phi_res.parameters[0], x.coords().to_vec());
    }

    #[test]
    fn divergence_is_reported_with_iteration() {
        let cfg = OptimizerConfig {
            step_size: 1e-3,
            max_iterations: 10,
            ..Default::default()
        };
        let mut calls = 0;
        let err = optimize(
            |_: &[ManifoldPoint]| {
                calls += 1;
                let value = if calls > 3 { f64::NAN } else { 1.0 };
                Ok(ObjectiveEvaluation {
                    value,
                    euclidean_gradients: vec![vec![0., 0., 1., 0.]],
                })
            },
            vec![pole()],
            &cfg,
        )
        .unwrap_err();
        assert!(matches!(err, Error::Divergence { iteration: 3, .. }));
    }

    #[test]
    fn singular_phi_parameter_is_rejected() {
        let cfg = OptimizerConfig::default();
        let err = optimize_via_phi(
            |_: &[ManifoldPoint]| unreachable!(),
            vec![vec![0., 0., 1., 0.]],
            &sig(),
            &cfg,
        )
        .unwrap_err();
        assert_eq!(err, Error::SingularInput);
    }

    #[test]
    fn callback_stop_rule() {
        let cfg = OptimizerConfig {
            step_size: 1e-2,
            max_iterations: 1000,
            stop_rule: StopRule::Callback,
            ..Default::default()
        };
        let c = [0., 0., 1., 0.];
        let obj = |pts: &[ManifoldPoint]| {
            Ok(ObjectiveEvaluation {
                value: crate::geometry::dot(&c, pts[0].coords()),
                euclidean_gradients: vec![c.to_vec()],
            })
        };
        assert!(optimize(obj, vec![pole()], &cfg).is_err());
        let res = optimize_with_monitor(obj, vec![pole()], &cfg, |s| {
            if s.iteration == 7 {
                Control::Stop
            } else {
                Control::Continue
            }
        })
        .unwrap();
        assert!(res.converged);
        assert_eq!(res.trace.len(), 8);
    }

    #[test]
    fn line_search_only_accepts_decrease() {
        let c = [0., 0., 1., 0.];
        let cfg = OptimizerConfig {
            step_size: 50.0,
            max_iterations: 5,
            line_search: true,
            ..Default::default()
        };
        // f(x) = (c·x)^2 has its minimum on c·x = 0; a huge step overshoots.
        let res = optimize(
            |pts: &[ManifoldPoint]| {
                let v = crate::geometry::dot(&c, pts[0].coords());
                Ok(ObjectiveEvaluation {
                    value: v * v,
                    euclidean_gradients: vec![c.iter().map(|ci| 2.0 * v * ci).collect()],
                })
            },
            vec![ManifoldPoint::new(vec![1f64.cosh(), 0., 1f64.sinh(), 0.], sig()).unwrap()],
            &cfg,
        )
        .unwrap();
        for w in res.trace.windows(2) {
            assert!(w[1].loss < w[0].loss);
        }
    }
}
