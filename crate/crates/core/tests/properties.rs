//! Randomized invariants of the geometry, the maps and the optimizer.

use proptest::prelude::*;
use ultrahyperbolic::geometry::metric_apply;
use ultrahyperbolic::graph::{weaker_set, WeakerSampling};
use ultrahyperbolic::optim::{Control, ObjectiveEvaluation, OptimizerConfig};
use ultrahyperbolic::{
    anti_isometry, descent_direction, dissimilarity, exp_map, extrinsic_distance, geodesic, geodesic_distance,
    log_map, optimize_with_monitor, phi, phi_jvp, phi_vjp, precondition, project_to_tangent, psi, psi_inverse,
    pseudo_riemannian_gradient, scalar_product, step, AmbientSpace, ManifoldPoint, Signature,
    SphereCrossEuclidean, TangentVector, WeightedGraph,
};

const SIGNATURES: [(usize, usize); 4] = [(2, 1), (3, 1), (2, 2), (4, 2)];

fn norm_sq(v: &[f64]) -> f64 {
    v.iter().map(|c| c * c).sum()
}

fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

/// A point built from a direction on `S^q` and a space part, plus a raw
/// ambient vector used to draw tangent vectors.
#[derive(Debug, Clone)]
struct Sample {
    sig: Signature,
    x: ManifoldPoint,
    z: Vec<f64>,
}

fn point_from(sig: &Signature, raw_u: &[f64], v: &[f64]) -> Option<ManifoldPoint> {
    let n = norm_sq(raw_u).sqrt();
    if n < 1e-3 {
        return None;
    }
    let u = raw_u.iter().map(|c| c / n).collect();
    psi_inverse(&SphereCrossEuclidean::new(u, v.to_vec()).ok()?, sig).ok()
}

fn sample(space_scale: f64) -> impl Strategy<Value = Sample> {
    (0..SIGNATURES.len(), 0.25f64..4.0)
        .prop_flat_map(move |(k, b)| {
            let (p, q) = SIGNATURES[k];
            let sig = Signature::new(p, q, -b).unwrap();
            (
                Just(sig),
                prop::collection::vec(-1.0f64..1.0, q + 1),
                prop::collection::vec(-space_scale..space_scale, p),
                prop::collection::vec(-1.0f64..1.0, p + q + 1),
            )
        })
        .prop_filter_map("time part too small", |(sig, u, v, z)| {
            point_from(&sig, &u, &v).map(|x| Sample { sig, x, z })
        })
}

fn cfg(cases: u32) -> ProptestConfig {
    ProptestConfig {
        cases,
        ..ProptestConfig::default()
    }
}

proptest! {
    #![proptest_config(cfg(1000))]

    #[test]
    fn scalar_product_is_bilinear_and_symmetric(
        s in sample(1.0),
        b in prop::collection::vec(-2.0f64..2.0, 11),
        c in prop::collection::vec(-2.0f64..2.0, 11),
        alpha in -3.0f64..3.0,
        gamma in -3.0f64..3.0,
    ) {
        let d = s.sig.dim();
        let a = &s.z;
        let (b, c) = (&b[..d], &c[..d]);
        let mix: Vec<f64> = a.iter().zip(b).map(|(x, y)| alpha * x + gamma * y).collect();
        let lhs = scalar_product(&mix, c, &s.sig).unwrap();
        let rhs = alpha * scalar_product(a, c, &s.sig).unwrap() + gamma * scalar_product(b, c, &s.sig).unwrap();
        let scale = 1.0 + (norm_sq(&mix) * norm_sq(c)).sqrt() + 9.0 * (norm_sq(a) + norm_sq(b)) * norm_sq(c).sqrt();
        prop_assert!((lhs - rhs).abs() <= 1e-12 * scale);
        prop_assert_eq!(scalar_product(a, b, &s.sig).unwrap(), scalar_product(b, a, &s.sig).unwrap());
        let ga = metric_apply(b, &s.sig).unwrap();
        let via_dot: f64 = a.iter().zip(&ga).map(|(x, y)| x * y).sum();
        prop_assert!((via_dot - scalar_product(a, b, &s.sig).unwrap()).abs() <= 1e-14 * (1.0 + norm_sq(a) + norm_sq(b)));
    }

    #[test]
    fn projection_is_idempotent(s in sample(2.0)) {
        let once = project_to_tangent(&s.x, &s.z).unwrap();
        let twice = project_to_tangent(&s.x, once.coords()).unwrap();
        let scale = 1.0 + norm_sq(s.x.coords()) * norm_sq(&s.z).sqrt();
        prop_assert!(dist(once.coords(), twice.coords()) <= 1e-12 * scale);
    }

    #[test]
    fn geodesics_stay_on_the_manifold(s in sample(2.0), speed in 0.05f64..1.5) {
        let xi = project_to_tangent(&s.x, &s.z).unwrap();
        let n = norm_sq(xi.coords()).sqrt();
        prop_assume!(n > 1e-6);
        let xi = xi.scaled(speed / n);
        let g0 = geodesic(&s.x, &xi, 0.0).unwrap();
        prop_assert_eq!(g0.coords(), s.x.coords());
        for t in [-2.0, -1.0, -0.1, 0.0, 0.1, 1.0, 2.0] {
            let y = geodesic(&s.x, &xi, t).unwrap();
            let scale = norm_sq(y.coords()).max(1.0);
            prop_assert!(y.drift().abs() <= 1e-8 * scale, "drift {} at t={t}", y.drift());
        }
    }

    #[test]
    fn exp_inverts_log_on_the_normal_neighborhood(s in sample(1.5), w in prop::collection::vec(-1.0f64..1.0, 11)) {
        let d = s.sig.dim();
        let xi = project_to_tangent(&s.x, &w[..d]).unwrap();
        let y = exp_map(&s.x, &xi).unwrap();
        let margin = 1e-3;
        prop_assume!(scalar_product(s.x.coords(), y.coords(), &s.sig).unwrap() < s.sig.abs_beta() - margin);
        let back = exp_map(&s.x, &log_map(&s.x, &y).unwrap()).unwrap();
        let scale = 1.0 + norm_sq(y.coords());
        prop_assert!(dist(back.coords(), y.coords()) <= 1e-8 * scale);

        let l = log_map(&s.x, &y).unwrap();
        let radius = scalar_product(l.coords(), l.coords(), &s.sig).unwrap().abs().sqrt();
        let gd = geodesic_distance(&s.x, &y).unwrap();
        prop_assert!((radius - gd).abs() <= 1e-10 * (1.0 + gd) * scale);
    }

    #[test]
    fn dissimilarity_is_a_symmetric_premetric(a in sample(2.0), v in prop::collection::vec(-2.0f64..2.0, 5), u in prop::collection::vec(-1.0f64..1.0, 3)) {
        let sig = a.sig;
        let b = point_from(&sig, &u[..sig.time_dims()], &v[..sig.p()]);
        prop_assume!(b.is_some());
        let b = b.unwrap();
        let dab = dissimilarity(&a.x, &b).unwrap();
        prop_assert!(dab >= 0.0);
        prop_assert_eq!(dab, dissimilarity(&b, &a.x).unwrap());
        prop_assert!(dissimilarity(&a.x, &a.x).unwrap() <= 1e-12 * (1.0 + norm_sq(a.x.coords())).sqrt());
    }

    #[test]
    fn psi_round_trips(s in sample(3.0)) {
        let back = psi_inverse(&psi(&s.x), &s.sig).unwrap();
        prop_assert!(dist(back.coords(), s.x.coords()) <= 1e-9 * (1.0 + norm_sq(s.x.coords()).sqrt()));
        let img = psi(&s.x);
        prop_assert!((norm_sq(&img.u) - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn anti_isometry_negates_scalar_products(a in sample(2.0), b in sample(2.0)) {
        let sig = a.sig;
        let y = phi(&b.z.iter().chain(std::iter::repeat(&1.0)).take(sig.dim()).copied().collect::<Vec<_>>(), &sig);
        prop_assume!(y.is_ok());
        let y = y.unwrap();
        let (sx, target) = anti_isometry(a.x.coords(), &sig).unwrap();
        let (sy, _) = anti_isometry(y.coords(), &sig).unwrap();
        prop_assert_eq!(target, AmbientSpace::new(sig.q() + 1, sig.p() - 1));
        let lhs = scalar_product(a.x.coords(), y.coords(), &sig).unwrap();
        let rhs = target.scalar_product(&sx, &sy).unwrap();
        prop_assert!((lhs + rhs).abs() <= 1e-12 * (1.0 + norm_sq(&sx) + norm_sq(&sy)));
    }

    #[test]
    fn descent_identity_holds(s in sample(2.0), g in prop::collection::vec(-3.0f64..3.0, 7)) {
        let g = &g[..s.sig.dim()];
        let df = pseudo_riemannian_gradient(&s.x, g).unwrap();
        let chi = descent_direction(&s.x, g).unwrap();
        let lhs = scalar_product(df.coords(), chi.coords(), &s.sig).unwrap();
        let rhs = norm_sq(df.coords());
        prop_assert!((lhs - rhs).abs() <= 1e-10 * rhs.max(1e-300) + 1e-14 * norm_sq(g) * norm_sq(s.x.coords()).powi(2));
        let via_p = precondition(&s.x, df.coords()).unwrap();
        for (a, b) in via_p.iter().zip(chi.coords()) {
            prop_assert!((a - b).abs() <= 1e-12 * (1.0 + norm_sq(chi.coords()).sqrt()) * (1.0 + norm_sq(s.x.coords())));
        }
    }

    #[test]
    fn stationary_points_have_zero_direction(s in sample(2.0), c in -3.0f64..3.0) {
        // ∇f = c G x projects to a multiple of x, so Df = 0
        let g = metric_apply(s.x.coords(), &s.sig).unwrap().iter().map(|v| c * v).collect::<Vec<_>>();
        let df = pseudo_riemannian_gradient(&s.x, &g).unwrap();
        let chi = descent_direction(&s.x, &g).unwrap();
        let scale = (1.0 + c.abs()) * (1.0 + norm_sq(s.x.coords()));
        prop_assert!(norm_sq(df.coords()).sqrt() <= 1e-12 * scale);
        prop_assert!(norm_sq(chi.coords()).sqrt() <= 1e-12 * scale * (1.0 + norm_sq(s.x.coords())));
    }

    #[test]
    fn phi_derivatives_match_finite_differences(s in sample(1.0), dz in prop::collection::vec(-1.0f64..1.0, 7), g in prop::collection::vec(-1.0f64..1.0, 7)) {
        let d = s.sig.dim();
        let z: Vec<f64> = s.x.coords().iter().zip(&s.z).map(|(a, b)| a + 0.3 * b).collect();
        prop_assume!(norm_sq(&z[..s.sig.time_dims()]) > 0.05);
        let (dz, g) = (&dz[..d], &g[..d]);
        let h = 1e-6;
        let plus: Vec<f64> = z.iter().zip(dz).map(|(a, b)| a + h * b).collect();
        let minus: Vec<f64> = z.iter().zip(dz).map(|(a, b)| a - h * b).collect();
        let p1 = phi(&plus, &s.sig).unwrap();
        let p0 = phi(&minus, &s.sig).unwrap();
        let fd: Vec<f64> = p1.coords().iter().zip(p0.coords()).map(|(a, b)| (a - b) / (2.0 * h)).collect();
        let jvp = phi_jvp(&z, dz, &s.sig).unwrap();
        prop_assert!(dist(&fd, &jvp) <= 1e-5 * norm_sq(&jvp).sqrt().max(1.0));
        // adjoint pairing <J dz, g> = <dz, Jᵀ g>
        let vjp = phi_vjp(&z, g, &s.sig).unwrap();
        let lhs: f64 = jvp.iter().zip(g).map(|(a, b)| a * b).sum();
        let rhs: f64 = dz.iter().zip(&vjp).map(|(a, b)| a * b).sum();
        prop_assert!((lhs - rhs).abs() <= 1e-12 * (1.0 + lhs.abs()));
    }

    #[test]
    fn some_small_step_decreases_a_smooth_objective(s in sample(1.5), a in prop::collection::vec(-2.0f64..2.0, 7)) {
        let a = &a[..s.sig.dim()];
        // f(x) = ‖x - a‖²
        let f = |x: &[f64]| x.iter().zip(a).map(|(p, q)| (p - q) * (p - q)).sum::<f64>();
        let grad: Vec<f64> = s.x.coords().iter().zip(a).map(|(p, q)| 2.0 * (p - q)).collect();
        let df = pseudo_riemannian_gradient(&s.x, &grad).unwrap();
        prop_assume!(norm_sq(df.coords()) > 1e-8);
        let f0 = f(s.x.coords());
        let decreased = [1e-2, 1e-4, 1e-6]
            .iter()
            .any(|&eta| f(step(&s.x, &grad, eta).unwrap().coords()) < f0);
        prop_assert!(decreased);
    }
}

proptest! {
    #![proptest_config(cfg(1000))]

    #[test]
    fn riemannian_case_is_positive_definite(
        p in 1usize..6,
        v in prop::collection::vec(-3.0f64..3.0, 6),
        w in prop::collection::vec(-1.0f64..1.0, 7),
    ) {
        let sig = Signature::new(p, 0, -1.0).unwrap();
        let x = point_from(&sig, &[1.0], &v[..p]).unwrap();
        prop_assert!(x.coords()[0] > 0.0);
        let xi = project_to_tangent(&x, &w[..p + 1]).unwrap();
        prop_assume!(norm_sq(xi.coords()) > 1e-12);
        prop_assert!(scalar_product(xi.coords(), xi.coords(), &sig).unwrap() > 0.0);
    }

    #[test]
    fn negative_gradient_fails_when_it_is_timelike(s in sample(1.0), w in 0.0f64..0.3) {
        // rotating the first two time coordinates gives a timelike tangent
        // vector; ∇f = G ξ then yields Df = ξ
        let c = s.x.coords();
        let mut raw = vec![0.0; s.sig.dim()];
        raw[0] = -c[1];
        raw[1] = c[0];
        for (r, z) in raw.iter_mut().zip(&s.z) {
            *r += w * z;
        }
        let xi = project_to_tangent(&s.x, &raw).unwrap();
        let g = metric_apply(xi.coords(), &s.sig).unwrap();
        let g = &g[..];
        let df = pseudo_riemannian_gradient(&s.x, g).unwrap();
        let norm = scalar_product(df.coords(), df.coords(), &s.sig).unwrap();
        prop_assume!(norm < -1e-3 * norm_sq(df.coords()));
        // linear objective f(x) = gᵀx
        let f = |x: &[f64]| x.iter().zip(g).map(|(a, b)| a * b).sum::<f64>();
        let f0 = f(s.x.coords());
        for eta in [1e-3, 1e-4, 1e-5] {
            let naive = exp_map(&s.x, &df.scaled(-eta)).unwrap();
            prop_assert!(f(naive.coords()) > f0);
            prop_assert!(f(step(&s.x, g, eta).unwrap().coords()) < f0);
        }
    }
}

proptest! {
    #![proptest_config(cfg(200))]

    #[test]
    fn exact_weaker_sets_match_the_definition(
        n in 2usize..=8,
        mask in prop::collection::vec((any::<bool>(), 1u8..4), 28),
    ) {
        let mut edges = Vec::new();
        let mut idx = 0;
        for i in 0..n {
            for j in i + 1..n {
                if mask[idx].0 {
                    edges.push((i, j, mask[idx].1 as f64));
                }
                idx += 1;
            }
        }
        prop_assume!(!edges.is_empty());
        let g = WeightedGraph::new(n, edges.clone()).unwrap();
        for (k, e) in g.edges().iter().enumerate() {
            let mut got = weaker_set(&g, k, WeakerSampling::All).unwrap();
            got.sort_unstable();
            let mut want = Vec::new();
            for a in 0..n {
                for b in a + 1..n {
                    match edges.iter().find(|t| (t.0, t.1) == (a, b)) {
                        Some(t) if t.2 < e.capacity => want.push((a, b)),
                        None => want.push((a, b)),
                        _ => {}
                    }
                }
            }
            prop_assert!(!got.contains(&(e.i, e.j)));
            prop_assert_eq!(got, want);
        }
    }
}

#[test]
fn geodesic_velocity_and_acceleration() {
    let sig = Signature::new(3, 1, -1.5).unwrap();
    let x = point_from(&sig, &[0.6, -0.8], &[0.3, -0.2, 0.5]).unwrap();
    for raw in [[0.1, 0.4, 0.9, -0.3, 0.2], [0.9, -0.2, 0.1, 0.1, 0.0], [0.3, 0.2, 0.1, 0.0, -0.6]] {
        let xi = project_to_tangent(&x, &raw).unwrap();
        let err = |h: f64| {
            let a = geodesic(&x, &xi, h).unwrap();
            let b = geodesic(&x, &xi, -h).unwrap();
            let v: Vec<f64> = a.coords().iter().zip(b.coords()).map(|(p, q)| (p - q) / (2.0 * h)).collect();
            dist(&v, xi.coords())
        };
        let order = (err(1e-3) / err(1e-4)).log10();
        assert!(order >= 1.9, "observed order {order}");

        let n = scalar_product(xi.coords(), xi.coords(), &sig).unwrap();
        let h = 1e-4;
        for t in [-1.0, 0.3, 1.2] {
            let g = |s: f64| geodesic(&x, &xi, s).unwrap().into_coords();
            let (gm, g0, gp) = (g(t - h), g(t), g(t + h));
            let acc: Vec<f64> = (0..sig.dim()).map(|k| (gp[k] - 2.0 * g0[k] + gm[k]) / (h * h)).collect();
            let y = ManifoldPoint::new(g0.clone(), sig).unwrap();
            let tangential = project_to_tangent(&y, &acc).unwrap();
            let scale = norm_sq(&g0).sqrt().max(1.0);
            assert!(norm_sq(tangential.coords()).sqrt() <= 1e-5 * scale * (1.0 + n.abs()));
            let expected: Vec<f64> = g0.iter().map(|c| n / sig.abs_beta() * c).collect();
            assert!(dist(&acc, &expected) <= 1e-4 * norm_sq(&expected).sqrt().max(1e-2));
        }
    }
}

#[test]
fn zero_distance_is_not_transitive() {
    let sig = Signature::new(2, 1, -1.0).unwrap();
    let x = ManifoldPoint::new(vec![1., 0., 0., 0.], sig).unwrap();
    let y = ManifoldPoint::new(vec![1., 1., 1., 0.], sig).unwrap();
    let z = ManifoldPoint::new(vec![1., 1., 0., 1.], sig).unwrap();
    assert_eq!(dissimilarity(&x, &y).unwrap(), 0.0);
    assert_eq!(dissimilarity(&x, &z).unwrap(), 0.0);
    assert!((dissimilarity(&y, &z).unwrap() - 2f64.acosh()).abs() <= 1e-12);
}

/// Found by a seeded random search over `Q^{2,1}_{-1}`.
const QUADRUPLE: [[f64; 4]; 4] = [
    [-1.1761503617661688, -0.7106876034823055, -0.6768374088431095, 0.6559707807644011],
    [-1.2026957595594006, -1.1538508581927083, -0.8903615030571235, -0.9925247034145159],
    [0.7939899905117584, 0.8083065479285695, 0.36035993291077517, -0.3923267760548652],
    [-0.7683559951906614, 1.2177367591427934, 0.3793230318338494, -0.9640372334269056],
];

#[test]
fn geodesic_and_extrinsic_orderings_can_disagree() {
    let sig = Signature::new(2, 1, -1.0).unwrap();
    let [a, b, c, d] = QUADRUPLE.map(|p| ManifoldPoint::new(p.to_vec(), sig).unwrap());
    assert!(geodesic_distance(&a, &b).unwrap() < geodesic_distance(&c, &d).unwrap());
    assert!(extrinsic_distance(&a, &b).unwrap() > extrinsic_distance(&c, &d).unwrap());
}

#[test]
fn branch_switch_is_continuous() {
    let sig = Signature::new(2, 1, -2.0).unwrap();
    let x = sig.pole();
    let xi = TangentVector::new(&x, vec![0.0, 1.0, 0.0, 0.0]).unwrap();
    // along this timelike geodesic <x, γ(θ√2)>_q = β cos θ
    for delta in [-1e-7, -1e-9, 0.0, 1e-9, 1e-7] {
        let t = (std::f64::consts::FRAC_PI_2 + delta) * 2f64.sqrt();
        let y = geodesic(&x, &xi, t).unwrap();
        let s = scalar_product(x.coords(), y.coords(), &sig).unwrap();
        assert!(s.abs() <= 1e-6);
        let acos_branch = 2f64.sqrt() * (s / sig.beta()).acos();
        let linear_branch = 2f64.sqrt() * (std::f64::consts::FRAC_PI_2 + s / 2.0);
        assert!((acos_branch - linear_branch).abs() <= 1e-5);
        let d = dissimilarity(&x, &y).unwrap();
        assert!((d - acos_branch).abs() <= 1e-5 && (d - linear_branch).abs() <= 1e-5);
    }
}

#[test]
fn special_cases_reduce_to_known_distances() {
    let hyp = Signature::new(2, 0, -1.0).unwrap();
    let a = point_from(&hyp, &[1.0], &[0.3, -0.4]).unwrap();
    let b = point_from(&hyp, &[1.0], &[-1.2, 0.5]).unwrap();
    let s = scalar_product(a.coords(), b.coords(), &hyp).unwrap();
    assert!((geodesic_distance(&a, &b).unwrap() - (s / hyp.beta()).acosh()).abs() <= 1e-12);

    let sph = Signature::new(0, 2, -1.0).unwrap();
    let u = ManifoldPoint::new(vec![1.0, 0.0, 0.0], sph).unwrap();
    let v = ManifoldPoint::new(vec![0.6, 0.8, 0.0], sph).unwrap();
    assert!((geodesic_distance(&u, &v).unwrap() - 0.6f64.acos()).abs() <= 1e-12);
}

#[test]
fn iterates_stay_on_the_manifold_for_ten_thousand_steps() {
    let sig = Signature::new(3, 1, -1.0).unwrap();
    let start: Vec<ManifoldPoint> = [[0.2, 0.1, -0.3], [0.0, 0.5, 0.4], [-0.6, 0.2, 0.1]]
        .iter()
        .zip([[0.8, 0.6], [0.0, 1.0], [-0.6, 0.8]])
        .map(|(v, u)| point_from(&sig, &u, v).unwrap())
        .collect();
    let target = [1.0, 0.5, -0.2, 0.3, 0.1];
    let config = OptimizerConfig {
        step_size: 1e-3,
        max_iterations: 10_000,
        stop_rule: ultrahyperbolic::StopRule::Callback,
        ..Default::default()
    };
    let mut worst: f64 = 0.0;
    let res = optimize_with_monitor(
        |pts: &[ManifoldPoint]| {
            let mut value = 0.0;
            let mut grads = Vec::new();
            for x in pts {
                value += x.coords().iter().zip(&target).map(|(a, b)| (a - b) * (a - b)).sum::<f64>();
                grads.push(x.coords().iter().zip(&target).map(|(a, b)| 2.0 * (a - b)).collect());
            }
            Ok(ObjectiveEvaluation { value, euclidean_gradients: grads })
        },
        start,
        &config,
        |state| {
            for x in state.points {
                worst = worst.max(x.drift().abs() / norm_sq(x.coords()).max(1.0));
            }
            Control::Continue
        },
    )
    .unwrap();
    assert_eq!(res.trace.len(), 10_000);
    assert!(worst <= 1e-9, "worst relative drift {worst}");
    for x in &res.points {
        assert!(ManifoldPoint::new(x.coords().to_vec(), sig).is_ok());
    }
}
