//! Pseudo-Euclidean ambient space `R^{p,q+1}` and the pseudo-hyperboloid
//! `Q^{p,q}_β = { x : <x,x>_q = β }` with `β < 0`.
//!
//! Coordinates are time-first: indices `0..=q` carry the `q+1` time
//! dimensions (negative sign in the scalar product), indices `q+1..=p+q`
//! carry the `p` space dimensions.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A coordinate vector of the ambient space. Points, tangent vectors and
/// Euclidean gradients all use this representation.
pub type AmbientVector = Vec<f64>;

/// Default relative tolerance used for manifold and tangent membership.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

/// The ambient space `R^{p,q+1}` without a curvature: `q+1` time and `p`
/// space dimensions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AmbientSpace {
    pub p: usize,
    pub q: usize,
}

impl AmbientSpace {
    pub fn new(p: usize, q: usize) -> Self {
        Self { p, q }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.p + self.q + 1
    }

    #[inline]
    pub fn time_dims(&self) -> usize {
        self.q + 1
    }

    /// Scalar product without length checks. Callers guarantee both slices
    /// have length `dim()`.
    #[inline]
    pub fn inner(&self, a: &[f64], b: &[f64]) -> f64 {
        debug_assert_eq!(a.len(), self.dim());
        debug_assert_eq!(b.len(), self.dim());
        let t = self.time_dims();
        let time: f64 = a[..t].iter().zip(&b[..t]).map(|(x, y)| x * y).sum();
        let space: f64 = a[t..].iter().zip(&b[t..]).map(|(x, y)| x * y).sum();
        space - time
    }

    pub fn check_len(&self, v: &[f64]) -> Result<()> {
        if v.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: v.len(),
            });
        }
        Ok(())
    }

    pub fn scalar_product(&self, a: &[f64], b: &[f64]) -> Result<f64> {
        self.check_len(a)?;
        self.check_len(b)?;
        Ok(self.inner(a, b))
    }

    /// Applies `G = I_{q+1,p}` in place.
    #[inline]
    pub fn apply_metric_in_place(&self, v: &mut [f64]) {
        for c in &mut v[..self.time_dims()] {
            *c = -*c;
        }
    }
}

/// The triple `(p, q, β)` fixing `Q^{p,q}_β`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Signature {
    p: usize,
    q: usize,
    beta: f64,
}

impl Signature {
    pub fn new(p: usize, q: usize, beta: f64) -> Result<Self> {
        if p + q < 1 {
            return Err(Error::InvalidSignature(
                "p + q must be at least 1".to_string(),
            ));
        }
        if !(beta.is_finite() && beta < 0.0) {
            return Err(Error::InvalidSignature(format!(
                "beta must be finite and strictly negative, got {beta}"
            )));
        }
        Ok(Self { p, q, beta })
    }

    #[inline]
    pub fn p(&self) -> usize {
        self.p
    }

    #[inline]
    pub fn q(&self) -> usize {
        self.q
    }

    #[inline]
    pub fn beta(&self) -> f64 {
        self.beta
    }

    #[inline]
    pub fn abs_beta(&self) -> f64 {
        self.beta.abs()
    }

    #[inline]
    pub fn sqrt_abs_beta(&self) -> f64 {
        self.beta.abs().sqrt()
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.p + self.q + 1
    }

    #[inline]
    pub fn time_dims(&self) -> usize {
        self.q + 1
    }

    #[inline]
    pub fn ambient(&self) -> AmbientSpace {
        AmbientSpace::new(self.p, self.q)
    }

    #[inline]
    pub(crate) fn inner(&self, a: &[f64], b: &[f64]) -> f64 {
        self.ambient().inner(a, b)
    }

    /// Absolute tolerance on `|<x,x>_q - β|` for manifold membership.
    pub fn manifold_tolerance(&self, rel: f64) -> f64 {
        rel * self.abs_beta().max(1.0)
    }

    /// The positive pole `(√|β|, 0, …, 0)`.
    pub fn pole(&self) -> ManifoldPoint {
        let mut coords = vec![0.0; self.dim()];
        coords[0] = self.sqrt_abs_beta();
        ManifoldPoint::trusted(coords, *self)
    }
}

impl std::fmt::Display for Signature {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Q^{{{},{}}}_{}", self.p, self.q, self.beta)
    }
}

fn check_finite(v: &[f64]) -> Result<()> {
    if v.iter().all(|c| c.is_finite()) {
        Ok(())
    } else {
        Err(Error::InvalidArgument("non-finite coordinate".to_string()))
    }
}

/// A point of `Q^{p,q}_β`.
#[derive(Debug, Clone, PartialEq)]
pub struct ManifoldPoint {
    sig: Signature,
    coords: Vec<f64>,
}

impl ManifoldPoint {
    /// Checks `|<x,x>_q - β| <= 1e-9 · max(1, |β|)`.
    pub fn new(coords: Vec<f64>, sig: Signature) -> Result<Self> {
        Self::with_tolerance(coords, sig, DEFAULT_TOLERANCE)
    }

    pub fn with_tolerance(coords: Vec<f64>, sig: Signature, rel_tol: f64) -> Result<Self> {
        sig.ambient().check_len(&coords)?;
        check_finite(&coords)?;
        let deviation = sig.inner(&coords, &coords) - sig.beta();
        if deviation.abs() > sig.manifold_tolerance(rel_tol) {
            return Err(Error::NotOnManifold { deviation });
        }
        Ok(Self { sig, coords })
    }

    /// Skips validation; used on the results of closed-form maps whose
    /// output lies on the manifold by construction.
    pub(crate) fn trusted(coords: Vec<f64>, sig: Signature) -> Self {
        debug_assert_eq!(coords.len(), sig.dim());
        debug_assert!(
            (sig.inner(&coords, &coords) - sig.beta()).abs()
                <= sig.manifold_tolerance(1e-6) * (1.0 + l2_sq(&coords)),
            "trusted point drifted off the manifold: {:?} drift {}",
            coords,
            sig.inner(&coords, &coords) - sig.beta()
        );
        Self { sig, coords }
    }

    #[inline]
    pub fn signature(&self) -> Signature {
        self.sig
    }

    #[inline]
    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<f64> {
        self.coords
    }

    /// `<x,x>_q - β`.
    pub fn drift(&self) -> f64 {
        self.sig.inner(&self.coords, &self.coords) - self.sig.beta()
    }
}

impl AsRef<[f64]> for ManifoldPoint {
    fn as_ref(&self) -> &[f64] {
        &self.coords
    }
}

/// A vector of `T_x Q^{p,q}_β`, i.e. `<x,ξ>_q = 0` for its base point `x`.
///
/// The base point is checked at construction but not stored; operations
/// that consume a tangent vector take the base point explicitly.
#[derive(Debug, Clone, PartialEq)]
pub struct TangentVector {
    coords: Vec<f64>,
}

impl TangentVector {
    pub fn new(base: &ManifoldPoint, coords: Vec<f64>) -> Result<Self> {
        Self::with_tolerance(base, coords, DEFAULT_TOLERANCE)
    }

    pub fn with_tolerance(base: &ManifoldPoint, coords: Vec<f64>, rel_tol: f64) -> Result<Self> {
        let sig = base.signature();
        sig.ambient().check_len(&coords)?;
        check_finite(&coords)?;
        let residual = sig.inner(base.coords(), &coords);
        let scale = (l2_sq(base.coords()) * l2_sq(&coords)).sqrt().max(1.0);
        if residual.abs() > rel_tol * scale {
            return Err(Error::NotTangent { residual });
        }
        Ok(Self { coords })
    }

    pub fn zero(dim: usize) -> Self {
        Self {
            coords: vec![0.0; dim],
        }
    }

    pub(crate) fn trusted(coords: Vec<f64>) -> Self {
        Self { coords }
    }

    #[inline]
    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<f64> {
        self.coords
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self {
            coords: self.coords.iter().map(|c| c * s).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }
}

impl AsRef<[f64]> for TangentVector {
    fn as_ref(&self) -> &[f64] {
        &self.coords
    }
}

#[inline]
pub(crate) fn l2_sq(v: &[f64]) -> f64 {
    v.iter().map(|c| c * c).sum()
}

#[inline]
pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// `<a,b>_q = -Σ_{i≤q} a_i b_i + Σ_{j>q} a_j b_j`.
pub fn scalar_product(a: &[f64], b: &[f64], sig: &Signature) -> Result<f64> {
    sig.ambient().scalar_product(a, b)
}

/// `<a,a>_q`; may be negative, zero or positive.
pub fn quadratic_norm(a: &[f64], sig: &Signature) -> Result<f64> {
    sig.ambient().scalar_product(a, a)
}

/// Orthogonal projection `z - (<z,x>_q / <x,x>_q) x` onto `T_x`.
pub fn project_to_tangent(x: &ManifoldPoint, z: &[f64]) -> Result<TangentVector> {
    let sig = x.signature();
    sig.ambient().check_len(z)?;
    Ok(TangentVector::trusted(project_raw(&sig, x.coords(), z)))
}

#[inline]
pub(crate) fn project_raw(sig: &Signature, x: &[f64], z: &[f64]) -> Vec<f64> {
    let c = sig.inner(z, x) / sig.inner(x, x);
    z.iter().zip(x).map(|(zi, xi)| zi - c * xi).collect()
}

/// Rescales a timelike vector onto the manifold: `√|β| z / √|<z,z>_q|`.
pub fn normalize_to_manifold(z: &[f64], sig: &Signature) -> Result<ManifoldPoint> {
    sig.ambient().check_len(z)?;
    check_finite(z)?;
    let norm = sig.inner(z, z);
    if norm >= 0.0 {
        return Err(Error::NonTimelike { norm });
    }
    let s = sig.sqrt_abs_beta() / norm.abs().sqrt();
    Ok(ManifoldPoint::trusted(z.iter().map(|c| c * s).collect(), *sig))
}

/// Applies the diagonal metric `G`: negates the `q+1` time coordinates.
pub fn metric_apply(a: &[f64], sig: &Signature) -> Result<AmbientVector> {
    sig.ambient().check_len(a)?;
    let mut out = a.to_vec();
    sig.ambient().apply_metric_in_place(&mut out);
    Ok(out)
}
