//! Closed-form geodesics, exponential and logarithm maps, the geodesic
//! "distance", the total dissimilarity used for learning, the
//! diffeomorphism onto `S^q × R^p` and the coordinate-reversal
//! anti-isometry.

use std::f64::consts::FRAC_PI_2;

use crate::error::{Error, Result};
use crate::geometry::{dot, l2_sq, AmbientSpace, AmbientVector, ManifoldPoint, Signature, TangentVector};

/// Relative tolerance under which `<ξ,ξ>_q` counts as zero.
pub const CLASS_TOLERANCE: f64 = 1e-10;
/// Width of the band around `<x,y>_q / β = 1` handled by the middle branch
/// of the logarithm map.
pub const LOG_BOUNDARY_TOLERANCE: f64 = 1e-10;
/// Slack allowed when clamping arguments of `acosh` and `acos`.
pub const CLAMP_MARGIN: f64 = 1e-12;

/// Type of a geodesic, given by the sign of `<ξ,ξ>_q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GeodesicClass {
    TimeLike,
    Null,
    SpaceLike,
}

impl GeodesicClass {
    pub fn of(xi: &[f64], sig: &Signature) -> Self {
        classify(sig.inner(xi, xi), l2_sq(xi))
    }
}

#[inline]
fn classify(norm: f64, euclid_sq: f64) -> GeodesicClass {
    if norm.abs() <= CLASS_TOLERANCE * euclid_sq.max(1.0) {
        GeodesicClass::Null
    } else if norm < 0.0 {
        GeodesicClass::TimeLike
    } else {
        GeodesicClass::SpaceLike
    }
}

/// A point of `S^q × R^p`: a unit time direction `u` and a space part `v`.
#[derive(Debug, Clone, PartialEq)]
pub struct SphereCrossEuclidean {
    pub u: Vec<f64>,
    pub v: Vec<f64>,
}

impl SphereCrossEuclidean {
    pub fn new(u: Vec<f64>, v: Vec<f64>) -> Result<Self> {
        let n = l2_sq(&u).sqrt();
        if (n - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidArgument(format!(
                "sphere component must have unit norm, got {n}"
            )));
        }
        Ok(Self { u, v })
    }
}

/// Coefficients `(a, b)` with `γ(t) = a·x + b·ξ`.
#[inline]
fn geodesic_coefficients(norm: f64, euclid_sq: f64, t: f64, sqrt_abs_beta: f64) -> (f64, f64) {
    match classify(norm, euclid_sq) {
        GeodesicClass::Null => (1.0, t),
        class => {
            let speed = norm.abs().sqrt();
            let theta = t * speed / sqrt_abs_beta;
            let scale = sqrt_abs_beta / speed;
            if class == GeodesicClass::SpaceLike {
                (theta.cosh(), scale * theta.sinh())
            } else {
                (theta.cos(), scale * theta.sin())
            }
        }
    }
}

pub(crate) fn geodesic_raw(sig: &Signature, x: &[f64], xi: &[f64], t: f64) -> Vec<f64> {
    let (a, b) = geodesic_coefficients(sig.inner(xi, xi), l2_sq(xi), t, sig.sqrt_abs_beta());
    x.iter().zip(xi).map(|(xc, vc)| a * xc + b * vc).collect()
}

/// Evaluates the geodesic through `x` with initial velocity `ξ` at time `t`.
pub fn geodesic(x: &ManifoldPoint, xi: &TangentVector, t: f64) -> Result<ManifoldPoint> {
    let sig = x.signature();
    sig.ambient().check_len(xi.coords())?;
    if !t.is_finite() {
        return Err(Error::InvalidArgument("geodesic time must be finite".into()));
    }
    Ok(ManifoldPoint::trusted(geodesic_raw(&sig, x.coords(), xi.coords(), t), sig))
}

/// `exp_x(ξ) = γ_{x→ξ}(1)`.
pub fn exp_map(x: &ManifoldPoint, xi: &TangentVector) -> Result<ManifoldPoint> {
    geodesic(x, xi, 1.0)
}

/// Inverse of [`exp_map`] on the normal neighborhood `<x,y>_q < |β|`.
pub fn log_map(x: &ManifoldPoint, y: &ManifoldPoint) -> Result<TangentVector> {
    let sig = same_signature(x, y)?;
    let s = sig.inner(x.coords(), y.coords());
    if s >= sig.abs_beta() {
        return Err(Error::OutsideNormalNeighborhood {
            scalar_product: s,
            bound: sig.abs_beta(),
        });
    }
    let r = s / sig.beta();
    let xs = x.coords();
    let ys = y.coords();
    if (r - 1.0).abs() <= LOG_BOUNDARY_TOLERANCE {
        return Ok(TangentVector::trusted(ys.iter().zip(xs).map(|(a, b)| a - b).collect()));
    }
    let coef = if r > 1.0 {
        r.acosh() / (r * r - 1.0).sqrt()
    } else {
        r.acos() / (1.0 - r * r).sqrt()
    };
    Ok(TangentVector::trusted(
        ys.iter().zip(xs).map(|(a, b)| coef * (a - r * b)).collect(),
    ))
}

/// `√|2β - 2<a,b>_q|`.
pub fn extrinsic_distance(a: &ManifoldPoint, b: &ManifoldPoint) -> Result<f64> {
    let sig = same_signature(a, b)?;
    Ok((2.0 * sig.beta() - 2.0 * sig.inner(a.coords(), b.coords())).abs().sqrt())
}

/// Radius function `√|<log_x y, log_x y>_q|` in closed form.
pub fn geodesic_distance(x: &ManifoldPoint, y: &ManifoldPoint) -> Result<f64> {
    let sig = same_signature(x, y)?;
    let s = sig.inner(x.coords(), y.coords());
    if s >= sig.abs_beta() {
        return Err(Error::OutsideNormalNeighborhood {
            scalar_product: s,
            bound: sig.abs_beta(),
        });
    }
    Ok(distance_from_ratio(s / sig.beta(), sig.sqrt_abs_beta()))
}

/// Distance as a function of `r = <x,y>_q / β`, valid for `r > -1`.
#[inline]
fn distance_from_ratio(r: f64, sqrt_abs_beta: f64) -> f64 {
    if (r - 1.0).abs() <= CLAMP_MARGIN {
        0.0
    } else if r > 1.0 {
        sqrt_abs_beta * r.acosh()
    } else {
        sqrt_abs_beta * r.max(-1.0).acos()
    }
}

/// Total dissimilarity from the scalar product `s = <x,y>_q`.
#[inline]
pub(crate) fn dissimilarity_from_inner(s: f64, sig: &Signature) -> f64 {
    if s <= 0.0 {
        distance_from_ratio(s / sig.beta(), sig.sqrt_abs_beta())
    } else {
        sig.sqrt_abs_beta() * (FRAC_PI_2 + s / sig.abs_beta())
    }
}

/// Derivative of [`dissimilarity_from_inner`] with respect to `s`.
///
/// Pairs within `singular_band` of `<x,y>_q / β = 1` are treated as having a
/// zero derivative; the true derivative is unbounded there.
#[inline]
pub(crate) fn dissimilarity_derivative(s: f64, sig: &Signature, singular_band: f64) -> f64 {
    if s > 0.0 {
        return 1.0 / sig.sqrt_abs_beta();
    }
    let r = s / sig.beta();
    if (r - 1.0).abs() < singular_band {
        0.0
    } else if r > 1.0 {
        // d = √|β| acosh(r), dr/ds = 1/β
        sig.sqrt_abs_beta() / ((r * r - 1.0).sqrt() * sig.beta())
    } else {
        // d = √|β| acos(r)
        -sig.sqrt_abs_beta() / ((1.0 - r * r).sqrt() * sig.beta())
    }
}

/// The continuous dissimilarity defined on the whole manifold: the geodesic
/// "distance" when `<x,y>_q <= 0`, and `√|β| (π/2 + <x,y>_q/|β|)` otherwise.
pub fn dissimilarity(x: &ManifoldPoint, y: &ManifoldPoint) -> Result<f64> {
    let sig = same_signature(x, y)?;
    Ok(dissimilarity_from_inner(sig.inner(x.coords(), y.coords()), &sig))
}

/// `ψ(t, s) = (t/‖t‖, s/√|β|)`.
pub fn psi(x: &ManifoldPoint) -> SphereCrossEuclidean {
    let sig = x.signature();
    let (t, s) = x.coords().split_at(sig.time_dims());
    let tn = l2_sq(t).sqrt();
    let sb = sig.sqrt_abs_beta();
    SphereCrossEuclidean {
        u: t.iter().map(|c| c / tn).collect(),
        v: s.iter().map(|c| c / sb).collect(),
    }
}

/// `ψ⁻¹(u, v) = √|β| (√(1+‖v‖²) u, v)`.
pub fn psi_inverse(z: &SphereCrossEuclidean, sig: &Signature) -> Result<ManifoldPoint> {
    if z.u.len() != sig.time_dims() {
        return Err(Error::DimensionMismatch { expected: sig.time_dims(), found: z.u.len() });
    }
    if z.v.len() != sig.p() {
        return Err(Error::DimensionMismatch { expected: sig.p(), found: z.v.len() });
    }
    let un = l2_sq(&z.u).sqrt();
    if (un - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidArgument(format!(
            "sphere component must have unit norm, got {un}"
        )));
    }
    let sb = sig.sqrt_abs_beta();
    let a = sb * (1.0 + l2_sq(&z.v)).sqrt();
    let coords = z.u.iter().map(|c| a * c).chain(z.v.iter().map(|c| sb * c)).collect();
    Ok(ManifoldPoint::trusted(coords, *sig))
}

/// `φ = ψ⁻¹ ∘ ψ` extended to any vector with a nonzero time part:
/// `φ(t, s) = (√(|β| + ‖s‖²) t/‖t‖, s)`.
pub fn phi(z: &[f64], sig: &Signature) -> Result<ManifoldPoint> {
    sig.ambient().check_len(z)?;
    let (t, s) = z.split_at(sig.time_dims());
    let tn = l2_sq(t).sqrt();
    if tn == 0.0 || !tn.is_finite() {
        return Err(Error::SingularInput);
    }
    let a = (sig.abs_beta() + l2_sq(s)).sqrt();
    let coords = t.iter().map(|c| a * c / tn).chain(s.iter().copied()).collect();
    Ok(ManifoldPoint::trusted(coords, *sig))
}

/// Directional derivative of [`phi`] at `z` along `dz`.
pub fn phi_jvp(z: &[f64], dz: &[f64], sig: &Signature) -> Result<AmbientVector> {
    sig.ambient().check_len(z)?;
    sig.ambient().check_len(dz)?;
    let k = sig.time_dims();
    let (t, s) = z.split_at(k);
    let (dt, ds) = dz.split_at(k);
    let tn = l2_sq(t).sqrt();
    if tn == 0.0 {
        return Err(Error::SingularInput);
    }
    let a = (sig.abs_beta() + l2_sq(s)).sqrt();
    let da = dot(s, ds) / a;
    let u_dt = dot(t, dt) / tn;
    let mut out = Vec::with_capacity(z.len());
    for (tc, dtc) in t.iter().zip(dt) {
        let u = tc / tn;
        out.push(da * u + a * (dtc - u * u_dt) / tn);
    }
    out.extend_from_slice(ds);
    Ok(out)
}

/// Transpose action of the Jacobian of [`phi`] at `z`: pulls a gradient
/// with respect to `φ(z)` back to a gradient with respect to `z`.
pub fn phi_vjp(z: &[f64], g: &[f64], sig: &Signature) -> Result<AmbientVector> {
    sig.ambient().check_len(z)?;
    sig.ambient().check_len(g)?;
    let k = sig.time_dims();
    let (t, s) = z.split_at(k);
    let (gt, gs) = g.split_at(k);
    let tn = l2_sq(t).sqrt();
    if tn == 0.0 {
        return Err(Error::SingularInput);
    }
    let a = (sig.abs_beta() + l2_sq(s)).sqrt();
    let u_gt = dot(t, gt) / tn;
    let mut out = Vec::with_capacity(z.len());
    for (tc, gtc) in t.iter().zip(gt) {
        let u = tc / tn;
        out.push(a * (gtc - u * u_gt) / tn);
    }
    for (sc, gsc) in s.iter().zip(gs) {
        out.push(gsc + u_gt * sc / a);
    }
    Ok(out)
}

/// Coordinate reversal `σ(x) = (x_{p+q}, …, x_0)`, mapping `Q^{p,q}_β`
/// onto `Q^{q+1,p-1}_{-β}` and flipping the sign of the scalar product.
/// Returns the image together with the target ambient space.
pub fn anti_isometry(x: &[f64], sig: &Signature) -> Result<(AmbientVector, AmbientSpace)> {
    sig.ambient().check_len(x)?;
    if sig.p() == 0 {
        return Err(Error::UnsupportedSignature(
            "anti-isometry requires p >= 1".to_string(),
        ));
    }
    let mut out = x.to_vec();
    out.reverse();
    Ok((out, AmbientSpace::new(sig.q() + 1, sig.p() - 1)))
}

fn same_signature(a: &ManifoldPoint, b: &ManifoldPoint) -> Result<Signature> {
    let sa = a.signature();
    let sb = b.signature();
    if sa != sb {
        return Err(Error::InvalidArgument(format!(
            "points belong to different manifolds ({sa} vs {sb})"
        )));
    }
    Ok(sa)
}
