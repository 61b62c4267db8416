//! Special functions used by the closed-form outage expressions: log-Gamma,
//! the regularized incomplete Gamma function, the Gamma density, and the Gauss
//! hypergeometric function 2F1.
//!
//! Everything is double precision. The 2F1 evaluator only supports arguments
//! in [0, 1), which is all the outage closed forms require (their argument is
//! 1/(q+1) with q > 0).

use std::fmt;

/// Iteration cap for the incomplete-Gamma series / continued fraction.
const GAMMA_MAX_ITER: usize = 500;

/// Term cap for the 2F1 Gauss series.
const HYP2F1_MAX_TERMS: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq)]
pub enum SpecFunError {
    /// Argument outside the function's domain.
    Domain(String),
    /// An iterative evaluation failed to converge.
    NonConvergent(String),
}

impl fmt::Display for SpecFunError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpecFunError::Domain(msg) => write!(f, "domain error: {msg}"),
            SpecFunError::NonConvergent(msg) => write!(f, "failed to converge: {msg}"),
        }
    }
}

impl std::error::Error for SpecFunError {}

/// Shape/scale pair of a fitted Gamma distribution for a power variable.
///
/// `shape` is dimensionless, `scale` carries the power unit (milliwatts
/// throughout this crate).
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct GammaParams {
    pub shape: f64,
    pub scale: f64,
}

impl GammaParams {
    pub fn new(shape: f64, scale: f64) -> Result<Self, SpecFunError> {
        if !(shape > 0.0 && shape.is_finite() && scale > 0.0 && scale.is_finite()) {
            return Err(SpecFunError::Domain(format!(
                "Gamma parameters must be positive and finite, got shape={shape}, scale={scale}"
            )));
        }
        Ok(Self { shape, scale })
    }

    /// Mean of the distribution, shape * scale.
    pub fn mean(&self) -> f64 {
        self.shape * self.scale
    }

    /// Variance of the distribution, shape * scale^2.
    pub fn variance(&self) -> f64 {
        self.shape * self.scale * self.scale
    }
}

/// Natural log of the Gamma function for x > 0 (Lanczos, g = 7, n = 9).
///
/// Accurate to ~1e-13 relative over the range used here.
pub fn ln_gamma(x: f64) -> f64 {
    const COEFFS: [f64; 8] = [
        676.5203681218851,
        -1259.1392167224028,
        771.32342877765313,
        -176.61502916214059,
        12.507343278686905,
        -0.13857109526572012,
        9.9843695780195716e-6,
        1.5056327351493116e-7,
    ];
    debug_assert!(x > 0.0, "ln_gamma argument must be positive");
    if x < 0.5 {
        // reflection: Gamma(x) Gamma(1-x) = pi / sin(pi x)
        let pi = std::f64::consts::PI;
        return (pi / (pi * x).sin()).ln() - ln_gamma(1.0 - x);
    }
    let x = x - 1.0;
    let mut acc = 0.99999999999980993;
    for (i, c) in COEFFS.iter().enumerate() {
        acc += c / (x + (i as f64) + 1.0);
    }
    let t = x + 7.5;
    0.5 * (2.0 * std::f64::consts::PI).ln() + (x + 0.5) * t.ln() - t + acc.ln()
}

/// Gamma probability density at `x` for parameters `p`.
///
/// At x = 0 the density is 0 for shape > 1, 1/scale for shape = 1, and
/// diverges for shape < 1 (returned as +inf).
pub fn gamma_pdf(x: f64, p: &GammaParams) -> Result<f64, SpecFunError> {
    if x < 0.0 {
        return Err(SpecFunError::Domain(format!(
            "gamma_pdf requires x >= 0, got {x}"
        )));
    }
    if x == 0.0 {
        return Ok(if p.shape > 1.0 {
            0.0
        } else if p.shape == 1.0 {
            1.0 / p.scale
        } else {
            f64::INFINITY
        });
    }
    let log_pdf = (p.shape - 1.0) * x.ln() - x / p.scale - p.shape * p.scale.ln()
        - ln_gamma(p.shape);
    Ok(log_pdf.exp())
}

/// Regularized upper incomplete Gamma function Q(nu, x) = Gamma(nu, x) / Gamma(nu).
///
/// Series expansion for x < nu + 1, Lentz continued fraction otherwise; the
/// two branches avoid cancellation in whichever tail is small.
pub fn reg_upper_gamma(nu: f64, x: f64) -> Result<f64, SpecFunError> {
    let (_, q) = reg_gamma_pair(nu, x)?;
    Ok(q)
}

/// Regularized lower incomplete Gamma function P(nu, x) = 1 - Q(nu, x).
pub fn reg_lower_gamma(nu: f64, x: f64) -> Result<f64, SpecFunError> {
    let (p, _) = reg_gamma_pair(nu, x)?;
    Ok(p)
}

fn reg_gamma_pair(nu: f64, x: f64) -> Result<(f64, f64), SpecFunError> {
    if nu <= 0.0 || !nu.is_finite() {
        return Err(SpecFunError::Domain(format!(
            "incomplete gamma requires nu > 0, got {nu}"
        )));
    }
    if x < 0.0 {
        return Err(SpecFunError::Domain(format!(
            "incomplete gamma requires x >= 0, got {x}"
        )));
    }
    if x == 0.0 {
        return Ok((0.0, 1.0));
    }
    let log_prefactor = -x + nu * x.ln() - ln_gamma(nu);
    let prefactor = log_prefactor.exp();
    if x < nu + 1.0 {
        let p = lower_series(nu, x, prefactor)?;
        Ok((p, 1.0 - p))
    } else {
        let q = upper_cf(nu, x, prefactor)?;
        Ok((1.0 - q, q))
    }
}

/// P(nu, x) = prefactor * sum_{n>=0} x^n / (nu (nu+1) ... (nu+n))
fn lower_series(nu: f64, x: f64, prefactor: f64) -> Result<f64, SpecFunError> {
    let mut term = 1.0 / nu;
    let mut sum = term;
    let mut a = nu;
    for _ in 0..GAMMA_MAX_ITER {
        a += 1.0;
        term *= x / a;
        sum += term;
        if term.abs() < sum.abs() * f64::EPSILON {
            return Ok(prefactor * sum);
        }
    }
    Err(SpecFunError::NonConvergent(format!(
        "incomplete gamma series at nu={nu}, x={x}"
    )))
}

/// Q(nu, x) by the modified Lentz continued fraction (Thompson & Barnett).
fn upper_cf(nu: f64, x: f64, prefactor: f64) -> Result<f64, SpecFunError> {
    const TINY: f64 = 1e-300;
    let b0 = x + 1.0 - nu;
    let mut f = if b0.abs() < TINY { TINY } else { b0 };
    let mut c = f;
    let mut d = 0.0f64;
    for n in 1..=GAMMA_MAX_ITER {
        let nf = n as f64;
        let an = nf * (nu - nf);
        let bn = x + 2.0 * nf + 1.0 - nu;
        d = bn + an * d;
        if d.abs() < TINY {
            d = TINY;
        }
        d = 1.0 / d;
        c = bn + an / c;
        if c.abs() < TINY {
            c = TINY;
        }
        let delta = c * d;
        f *= delta;
        if (delta - 1.0).abs() < f64::EPSILON {
            return Ok(prefactor / f);
        }
    }
    Err(SpecFunError::NonConvergent(format!(
        "incomplete gamma continued fraction at nu={nu}, x={x}"
    )))
}

/// Gauss hypergeometric function 2F1(a, b; c; x) for 0 <= x < 1.
///
/// Direct Gauss series, switching to the Euler transformation
/// (1-x)^(c-a-b) 2F1(c-a, c-b; c; x) for x > 0.75 where the raw series
/// converges too slowly.
pub fn hyp2f1(a: f64, b: f64, c: f64, x: f64) -> Result<f64, SpecFunError> {
    if !(0.0..1.0).contains(&x) {
        return Err(SpecFunError::Domain(format!(
            "hyp2f1 requires 0 <= x < 1, got {x}"
        )));
    }
    if c <= 0.0 && c == c.floor() {
        return Err(SpecFunError::Domain(format!(
            "hyp2f1 pole: c is a nonpositive integer ({c})"
        )));
    }
    if x > 0.75 {
        let factor = (1.0 - x).powf(c - a - b);
        return Ok(factor * gauss_series(c - a, c - b, c, x)?);
    }
    gauss_series(a, b, c, x)
}

fn gauss_series(a: f64, b: f64, c: f64, x: f64) -> Result<f64, SpecFunError> {
    let mut term = 1.0f64;
    let mut sum = 1.0f64;
    for k in 0..HYP2F1_MAX_TERMS {
        let kf = k as f64;
        term *= (a + kf) * (b + kf) / ((c + kf) * (kf + 1.0)) * x;
        sum += term;
        if term.abs() <= 1e-15 * sum.abs() {
            return Ok(sum);
        }
    }
    Err(SpecFunError::NonConvergent(format!(
        "hyp2f1 series at a={a}, b={b}, c={c}, x={x}"
    )))
}
