//! Gamma moment-matching of the four received-power variables and the CDF of
//! the ratio of two Gamma variables (the double-Gamma-ratio, DGR).
//!
//! A power variable with mean mu and variance sigma^2 is approximated by a
//! Gamma distribution with shape mu^2/sigma^2 and scale sigma^2/mu. The
//! cumulants come from Campbell's theorem applied to the PPP shot-noise sums;
//! the position integrals reduce to radial power-law integrals which are
//! cached per (region, pole, exponent, guard) since parameter sweeps reuse
//! them heavily.
//!
//! Two printed-formula compatibility variants are kept behind
//! [`AnalysisOptions`]: the destination-signal parameters and the
//! eavesdropper-signal shape as published use cumulants that do not match the
//! simulated channel (see the README notes on reproduction); the defaults use
//! the exact moments, which the Monte Carlo oracle validates.

use std::collections::HashMap;
use std::fmt;
use std::sync::{OnceLock, RwLock};

use crate::channel::SystemParams;
use crate::geometry::{self, GeometryError, Point, Region};
use crate::specfun::{hyp2f1, ln_gamma, GammaParams, SpecFunError};

#[derive(Debug, Clone, PartialEq)]
pub enum FitError {
    /// Moments do not define a valid Gamma fit (nonpositive mean or variance).
    Degenerate(String),
    /// Input outside the operation's domain.
    Domain(String),
    Geometry(GeometryError),
    SpecFun(SpecFunError),
}

impl fmt::Display for FitError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FitError::Degenerate(msg) => write!(f, "degenerate fit: {msg}"),
            FitError::Domain(msg) => write!(f, "domain error: {msg}"),
            FitError::Geometry(e) => write!(f, "{e}"),
            FitError::SpecFun(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for FitError {}

impl From<GeometryError> for FitError {
    fn from(e: GeometryError) -> Self {
        FitError::Geometry(e)
    }
}

impl From<SpecFunError> for FitError {
    fn from(e: SpecFunError) -> Self {
        FitError::SpecFun(e)
    }
}

/// First two moments of a power variable.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentPair {
    pub mean: f64,
    pub variance: f64,
}

/// Compatibility switches for the published parameter formulas.
#[derive(Debug, Clone, Copy, Default, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct AnalysisOptions {
    /// Evaluate the eavesdropper-signal shape with the published numerator
    /// (lambda_R Q_z(1)) instead of the moment-consistent lambda_R Q_z(1)^2.
    #[serde(default)]
    pub paper_nu_tz: bool,
    /// Evaluate the destination-signal parameters with the published
    /// closed forms instead of the exact cumulants.
    #[serde(default)]
    pub paper_ty: bool,
}

/// Moment-match a Gamma distribution: shape = mu^2/sigma^2, scale = sigma^2/mu.
/// The round trip is exact: shape*scale = mu and shape*scale^2 = sigma^2.
pub fn fit_gamma(m: MomentPair) -> Result<GammaParams, FitError> {
    if !(m.mean > 0.0 && m.mean.is_finite() && m.variance > 0.0 && m.variance.is_finite()) {
        return Err(FitError::Degenerate(format!(
            "need positive finite moments, got mean={}, variance={}",
            m.mean, m.variance
        )));
    }
    GammaParams::new(m.mean * m.mean / m.variance, m.variance / m.mean)
        .map_err(|e| FitError::Degenerate(e.to_string()))
}

type CacheKey = (u8, [u64; 7], u64, u64, u64);

fn cache() -> &'static RwLock<HashMap<CacheKey, f64>> {
    static CACHE: OnceLock<RwLock<HashMap<CacheKey, f64>>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

fn region_key(region: &Region) -> (u8, [u64; 7]) {
    match *region {
        Region::Disk { center, radius } => (
            0,
            [
                center.x.to_bits(),
                center.y.to_bits(),
                radius.to_bits(),
                0,
                0,
                0,
                0,
            ],
        ),
        Region::Annulus {
            center,
            inner,
            outer,
        } => (
            1,
            [
                center.x.to_bits(),
                center.y.to_bits(),
                inner.to_bits(),
                outer.to_bits(),
                0,
                0,
                0,
            ],
        ),
        Region::FlabellateAnnulus {
            center,
            inner,
            outer,
            angle_lo,
            angle_hi,
        } => (
            2,
            [
                center.x.to_bits(),
                center.y.to_bits(),
                inner.to_bits(),
                outer.to_bits(),
                angle_lo.to_bits(),
                angle_hi.to_bits(),
                0,
            ],
        ),
    }
}

/// Radial power-law integral with memoization.
pub fn cached_radial_integral(
    region: &Region,
    pole: Point,
    s: f64,
    guard: f64,
) -> Result<f64, GeometryError> {
    let (tag, fields) = region_key(region);
    let key = (
        tag,
        fields,
        (pole.x.to_bits() ^ pole.y.to_bits().rotate_left(32)),
        s.to_bits(),
        guard.to_bits(),
    );
    if let Some(v) = cache().read().expect("cache lock").get(&key) {
        return Ok(*v);
    }
    let v = geometry::radial_integral(region, pole, s, guard)?;
    cache().write().expect("cache lock").insert(key, v);
    Ok(v)
}

/// Position integral over the relay disk: Q(n) = int_disk |x - pole|^(-n*alpha) dx.
/// The pole must lie outside the disk (the kernel is then nonsingular and no
/// guard is applied). Fractional n is used by the exact cumulants.
pub fn q_moment(params: &SystemParams, pole: Point, n: f64) -> Result<f64, FitError> {
    let disk = params.relay_region();
    if disk.contains(pole) {
        return Err(FitError::Domain(format!(
            "q_moment pole ({}, {}) must lie outside the relay disk",
            pole.x, pole.y
        )));
    }
    Ok(cached_radial_integral(&disk, pole, n * params.alpha, 0.0)?)
}

/// Rayleigh amplitude moments: E[g^j] = Gamma(1 + j/2) for |g|^2 ~ exp(1).
fn rayleigh_moment(j: u32) -> f64 {
    ln_gamma(1.0 + j as f64 / 2.0).exp()
}

/// Gamma fit of the beamformed destination signal power T(y).
///
/// Default: exact first and second moments of the squared shot-noise sum,
/// via the cumulants kappa_j = lambda_R E[g^j] P_R^(j/2) Q(j/2) of the
/// amplitude sum S (T = S^2, E[T] = k2 + k1^2,
/// Var T = k4 + 4 k3 k1 + 2 k2^2 + 4 k2 k1^2).
///
/// With `paper_ty` set, the published closed forms are used instead:
/// mean 3 lambda_R P_R Q(1), variance 45 (lambda_R P_R Q(1))^2
/// + 9 lambda_R P_R^2 Q(2).
pub fn dest_signal_params(
    params: &SystemParams,
    opts: &AnalysisOptions,
) -> Result<GammaParams, FitError> {
    let lam_r = params.lambda_r();
    if lam_r <= 0.0 {
        return Err(FitError::Degenerate(
            "relay intensity is zero: T(y) is identically 0".into(),
        ));
    }
    let dest = params.dest();
    if opts.paper_ty {
        let q1 = q_moment(params, dest, 1.0)?;
        let q2 = q_moment(params, dest, 2.0)?;
        let mean = 3.0 * lam_r * params.p_r * q1;
        let var = 45.0 * (lam_r * params.p_r * q1).powi(2) + 9.0 * lam_r * params.p_r * params.p_r * q2;
        return fit_gamma(MomentPair {
            mean,
            variance: var,
        });
    }
    let k = |j: u32| -> Result<f64, FitError> {
        let q = q_moment(params, dest, j as f64 / 2.0)?;
        Ok(lam_r * rayleigh_moment(j) * params.p_r.powf(j as f64 / 2.0) * q)
    };
    let k1 = k(1)?;
    let k2 = k(2)?;
    let k3 = k(3)?;
    let k4 = k(4)?;
    let mean = k2 + k1 * k1;
    let variance = k4 + 4.0 * k3 * k1 + 2.0 * k2 * k2 + 4.0 * k2 * k1 * k1;
    fit_gamma(MomentPair { mean, variance })
}

/// Gamma fit of the aggregate jamming interference at `receiver`, integrating
/// the guarded kernels over the flabellate decomposition of the jammer region:
/// mean lambda_J P_j J(alpha), variance 2 lambda_J P_j^2 J(2 alpha).
pub fn interference_params(
    params: &SystemParams,
    receiver: Point,
) -> Result<GammaParams, FitError> {
    let lam_j = params.lambda_j();
    if lam_j <= 0.0 {
        return Err(FitError::Degenerate(
            "jammer intensity is zero: I is identically 0".into(),
        ));
    }
    let dbar = params.dbar()?;
    let mut j1 = 0.0;
    let mut j2 = 0.0;
    for piece in dbar.pieces() {
        j1 += cached_radial_integral(piece, receiver, params.alpha, params.guard)?;
        j2 += cached_radial_integral(piece, receiver, 2.0 * params.alpha, params.guard)?;
    }
    fit_gamma(MomentPair {
        mean: lam_j * params.p_j * j1,
        variance: 2.0 * lam_j * params.p_j * params.p_j * j2,
    })
}

/// Gamma fit of the eavesdropper signal power T(z), which is conditionally
/// exponential with mean P_R sum_i d_i^(-alpha) given the relay positions:
/// mean lambda_R P_R Q_z(1), variance (lambda_R P_R Q_z(1))^2
/// + 2 lambda_R P_R^2 Q_z(2).
///
/// With `paper_nu_tz` set, the shape uses the published numerator
/// lambda_R Q_z(1) verbatim (dimensionally inconsistent with the scale; kept
/// for comparison).
pub fn eve_signal_params(
    params: &SystemParams,
    eve: Point,
    opts: &AnalysisOptions,
) -> Result<GammaParams, FitError> {
    let lam_r = params.lambda_r();
    if lam_r <= 0.0 {
        return Err(FitError::Degenerate(
            "relay intensity is zero: T(z) is identically 0".into(),
        ));
    }
    let q1 = q_moment(params, eve, 1.0)?;
    let q2 = q_moment(params, eve, 2.0)?;
    let p_r = params.p_r;
    if opts.paper_nu_tz {
        let shape = lam_r * q1 / (lam_r * q1 * q1 + 2.0 * q2);
        let scale = p_r * (lam_r * q1 * q1 + 2.0 * q2) / q1;
        return GammaParams::new(shape, scale).map_err(FitError::from);
    }
    let mean = lam_r * p_r * q1;
    let variance = (lam_r * p_r * q1).powi(2) + 2.0 * lam_r * p_r * p_r * q2;
    fit_gamma(MomentPair { mean, variance })
}

/// P(T/I >= beta) for independent Gamma-distributed T and I:
/// q^shape_T Gamma(shape_T + shape_I)
/// / [shape_I (q+1)^(shape_T+shape_I) Gamma(shape_T) Gamma(shape_I)]
/// * 2F1(1, shape_T + shape_I; shape_I + 1; 1/(q+1)), with q = beta scale_I / scale_T.
///
/// Evaluated in log space; the hypergeometric argument stays in [0, 1).
pub fn dgr_survival(t: &GammaParams, i: &GammaParams, beta: f64) -> Result<f64, SpecFunError> {
    if beta < 0.0 || !beta.is_finite() && beta != f64::INFINITY {
        return Err(SpecFunError::Domain(format!(
            "threshold must be >= 0, got {beta}"
        )));
    }
    if beta == 0.0 {
        return Ok(1.0);
    }
    if beta == f64::INFINITY {
        return Ok(0.0);
    }
    let q = beta * i.scale / t.scale;
    let x = 1.0 / (q + 1.0);
    let f = hyp2f1(1.0, t.shape + i.shape, i.shape + 1.0, x)?;
    let ln_pre = t.shape * q.ln() + ln_gamma(t.shape + i.shape)
        - i.shape.ln()
        - (t.shape + i.shape) * q.ln_1p()
        - ln_gamma(t.shape)
        - ln_gamma(i.shape);
    Ok((ln_pre + f.ln()).exp().clamp(0.0, 1.0))
}

/// P(T/I < beta): the DGR cumulative distribution function.
pub fn dgr_cdf(t: &GammaParams, i: &GammaParams, beta: f64) -> Result<f64, SpecFunError> {
    Ok(1.0 - dgr_survival(t, i, beta)?)
}
