//! One-realization synthesis of the second-phase received powers.
//!
//! The source sits at the origin and transmits through decode-and-forward
//! relays inside the disk of radius `l1`; friendly jammers occupy the annulus
//! [l1, l2] except for a protected disk of radius `lg` around the destination.
//! Relays beamform coherently toward the destination, so the destination sees
//! the squared sum of Rayleigh-faded amplitudes while an eavesdropper sees a
//! conditionally exponential power (the beamforming phases are mismatched at
//! any other location). Jamming interference is a shot-noise sum with unit-mean
//! exponential power fading. The network is interference limited: SIR only.

use std::fmt;

use rand::Rng;
use rand_distr::{Distribution, Exp1, StandardNormal};

use crate::geometry::{sample_ppp, DbarDecomposition, GeometryError, Point, Region};

/// Convert a dBm figure to linear milliwatts.
pub fn dbm_to_milliwatts(dbm: f64) -> f64 {
    10f64.powf(dbm / 10.0)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ParamError(pub String);

impl fmt::Display for ParamError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invalid parameters: {}", self.0)
    }
}

impl std::error::Error for ParamError {}

/// All scenario constants. Powers are linear milliwatts; distances meters;
/// densities nodes per square meter.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct SystemParams {
    /// Density of legitimate nodes (lambda).
    pub lambda: f64,
    /// Upper trust threshold: nodes with trust in [c1, 1] relay.
    pub c1: f64,
    /// Lower trust threshold: nodes with trust in [c2, c1] jam.
    pub c2: f64,
    /// Relay disk radius around the source.
    pub l1: f64,
    /// Outer radius of the jammer/eavesdropper annulus.
    pub l2: f64,
    /// Protected-zone radius around the destination.
    pub lg: f64,
    /// Source-to-destination distance.
    pub dest_distance: f64,
    /// Path-loss exponent, > 2.
    pub alpha: f64,
    /// Relay transmit power (mW).
    pub p_r: f64,
    /// Jammer transmit power (mW).
    pub p_j: f64,
    /// Eavesdropper density.
    pub lambda_e: f64,
    /// Singularity guard: distances below this are clamped in interference
    /// terms, identically in the simulator and the analysis integrals.
    pub guard: f64,
}

impl SystemParams {
    /// The reference scenario used throughout the experiments: alpha = 4,
    /// l1 = 6 m, l2 = 100 m, d = 60 m, lg = 5 m, lambda = 0.2, c1 = 0.8,
    /// c2 = 0.79, P_R = 10 dBm, P_j = 1 dBm, lambda_e = 5e-4.
    pub fn reference() -> Self {
        Self {
            lambda: 0.2,
            c1: 0.8,
            c2: 0.79,
            l1: 6.0,
            l2: 100.0,
            lg: 5.0,
            dest_distance: 60.0,
            alpha: 4.0,
            p_r: dbm_to_milliwatts(10.0),
            p_j: dbm_to_milliwatts(1.0),
            lambda_e: 0.0005,
            guard: 0.5,
        }
    }

    pub fn validate(&self) -> Result<(), ParamError> {
        let e = |msg: String| Err(ParamError(msg));
        if !(self.lambda >= 0.0 && self.lambda.is_finite()) {
            return e(format!("lambda must be >= 0, got {}", self.lambda));
        }
        if !(0.0 < self.c2 && self.c2 < self.c1 && self.c1 <= 1.0) {
            return e(format!(
                "trust thresholds must satisfy 0 < c2 < c1 <= 1, got c1={}, c2={}",
                self.c1, self.c2
            ));
        }
        if !(self.l1 > 0.0 && self.lg > 0.0) {
            return e(format!(
                "l1 and lg must be positive, got {}, {}",
                self.l1, self.lg
            ));
        }
        if !(self.l1 < self.dest_distance - self.lg) {
            return e(format!(
                "need l1 < d - lg, got l1={}, d={}, lg={}",
                self.l1, self.dest_distance, self.lg
            ));
        }
        if !(self.dest_distance + self.lg < self.l2) {
            return e(format!(
                "need d + lg < l2, got l2={}, d={}, lg={}",
                self.l2, self.dest_distance, self.lg
            ));
        }
        if !(self.alpha > 2.0) {
            return e(format!(
                "path-loss exponent must exceed 2, got {}",
                self.alpha
            ));
        }
        if !(self.p_r > 0.0 && self.p_j > 0.0) {
            return e(format!(
                "powers must be positive, got p_r={}, p_j={}",
                self.p_r, self.p_j
            ));
        }
        if !(self.lambda_e >= 0.0) {
            return e(format!("lambda_e must be >= 0, got {}", self.lambda_e));
        }
        if !(self.guard >= 0.0) {
            return e(format!("guard must be >= 0, got {}", self.guard));
        }
        Ok(())
    }

    /// Relay intensity (1 - c1) * lambda.
    pub fn lambda_r(&self) -> f64 {
        (1.0 - self.c1) * self.lambda
    }

    /// Jammer intensity (c1 - c2) * lambda.
    pub fn lambda_j(&self) -> f64 {
        (self.c1 - self.c2) * self.lambda
    }

    pub fn dest(&self) -> Point {
        Point::new(self.dest_distance, 0.0)
    }

    pub fn relay_region(&self) -> Region {
        Region::disk(Point::origin(), self.l1).expect("validated radius")
    }

    /// The annulus hosting jammers and eavesdroppers.
    pub fn ring(&self) -> Region {
        Region::annulus(Point::origin(), self.l1, self.l2).expect("validated radii")
    }

    /// Mean relay count: lambda_r * pi * l1^2.
    pub fn mean_relay_count(&self) -> f64 {
        self.lambda_r() * std::f64::consts::PI * self.l1 * self.l1
    }

    /// Flabellate decomposition of the jammer region.
    pub fn dbar(&self) -> Result<DbarDecomposition, GeometryError> {
        crate::geometry::dbar_decompose(self.l1, self.l2, self.dest_distance, self.lg)
    }
}

/// One realization of categorized node positions.
#[derive(Debug, Clone, Default)]
pub struct NodeSet {
    pub relays: Vec<Point>,
    pub jammers: Vec<Point>,
    pub eavesdroppers: Vec<Point>,
}

/// Draw one network realization by direct thinned-intensity sampling:
/// relays as a PPP of intensity (1-c1)*lambda on the relay disk, jammers as a
/// PPP of intensity (c1-c2)*lambda on the annulus with the protected zone
/// rejected afterwards, eavesdroppers as an independent PPP of lambda_e.
pub fn categorize<R: Rng + ?Sized>(params: &SystemParams, rng: &mut R) -> NodeSet {
    let relays = sample_ppp(&params.relay_region(), params.lambda_r(), rng);
    let mut jammers = sample_ppp(&params.ring(), params.lambda_j(), rng);
    let dest = params.dest();
    jammers.retain(|p| p.distance(dest) >= params.lg);
    let eavesdroppers = sample_ppp(&params.ring(), params.lambda_e, rng);
    NodeSet {
        relays,
        jammers,
        eavesdroppers,
    }
}

/// Equivalent categorization through per-node trust marks: sample the full
/// legitimate process at intensity lambda and threshold an independent
/// uniform trust degree per node. Distributionally identical to [`categorize`]
/// by the PPP marking theorem; kept as a cross-check.
pub fn categorize_by_trust<R: Rng + ?Sized>(params: &SystemParams, rng: &mut R) -> NodeSet {
    let mut relays = Vec::new();
    for p in sample_ppp(&params.relay_region(), params.lambda, rng) {
        let trust: f64 = rng.random();
        if trust >= params.c1 {
            relays.push(p);
        }
    }
    let dest = params.dest();
    let mut jammers = Vec::new();
    for p in sample_ppp(&params.ring(), params.lambda, rng) {
        let trust: f64 = rng.random();
        if trust >= params.c2 && trust < params.c1 && p.distance(dest) >= params.lg {
            jammers.push(p);
        }
    }
    let eavesdroppers = sample_ppp(&params.ring(), params.lambda_e, rng);
    NodeSet {
        relays,
        jammers,
        eavesdroppers,
    }
}

/// Beamformed signal power for explicit per-relay amplitude gains:
/// (sum_i sqrt(p_r) g_i d_i^(-alpha/2))^2.
pub fn beamformed_power(
    relays: &[Point],
    receiver: Point,
    p_r: f64,
    alpha: f64,
    gains: &[f64],
) -> f64 {
    debug_assert_eq!(relays.len(), gains.len());
    let amp: f64 = relays
        .iter()
        .zip(gains)
        .map(|(r, g)| p_r.sqrt() * g * r.distance(receiver).powf(-alpha / 2.0))
        .sum();
    amp * amp
}

/// Received signal power at the destination: coherent sum of Rayleigh-faded
/// amplitudes (each |H| has unit mean square), squared. Empty relay set gives 0.
pub fn signal_power_dest<R: Rng + ?Sized>(
    relays: &[Point],
    dest: Point,
    p_r: f64,
    alpha: f64,
    rng: &mut R,
) -> f64 {
    if relays.is_empty() {
        return 0.0;
    }
    let mut amp = 0.0;
    for r in relays {
        let power: f64 = Exp1.sample(rng); // |H|^2 ~ exp(1)
        amp += p_r.sqrt() * power.sqrt() * r.distance(dest).powf(-alpha / 2.0);
    }
    amp * amp
}

/// Received signal power at an eavesdropper: the beamforming phases do not
/// align there, so conditionally on the relay positions the power is
/// exponential with mean p_r * sum_i d_i^(-alpha). Empty relay set gives 0.
pub fn signal_power_eve<R: Rng + ?Sized>(
    relays: &[Point],
    eve: Point,
    p_r: f64,
    alpha: f64,
    rng: &mut R,
) -> f64 {
    if relays.is_empty() {
        return 0.0;
    }
    let mean: f64 = relays
        .iter()
        .map(|r| p_r * r.distance(eve).powf(-alpha))
        .sum();
    let e: f64 = Exp1.sample(rng);
    mean * e
}

/// Validation path for the eavesdropper signal: simulate the per-relay complex
/// phases explicitly instead of drawing from the conditional exponential.
/// Identical in distribution to [`signal_power_eve`].
pub fn signal_power_eve_phase<R: Rng + ?Sized>(
    relays: &[Point],
    eve: Point,
    p_r: f64,
    alpha: f64,
    rng: &mut R,
) -> f64 {
    if relays.is_empty() {
        return 0.0;
    }
    let (mut re, mut im) = (0.0f64, 0.0f64);
    for r in relays {
        let a = p_r.sqrt() * r.distance(eve).powf(-alpha / 2.0);
        let gr: f64 = StandardNormal.sample(rng);
        let gi: f64 = StandardNormal.sample(rng);
        // CN(0,1) coefficient: each quadrature has variance 1/2
        re += a * gr / std::f64::consts::SQRT_2;
        im += a * gi / std::f64::consts::SQRT_2;
    }
    re * re + im * im
}

/// Aggregate jamming interference: sum of p_j * h * max(d, guard)^(-alpha)
/// over jammers, with h ~ exp(1) independent per jammer.
pub fn interference_power<R: Rng + ?Sized>(
    jammers: &[Point],
    receiver: Point,
    p_j: f64,
    alpha: f64,
    guard: f64,
    rng: &mut R,
) -> f64 {
    let mut acc = 0.0;
    for j in jammers {
        let h: f64 = Exp1.sample(rng);
        acc += p_j * h * j.distance(receiver).max(guard).powf(-alpha);
    }
    acc
}

/// Signal-to-interference ratio with the interference-limited conventions:
/// 0/0 -> 0 (certain outage), T/0 -> +inf for T > 0.
pub fn sir(t: f64, i: f64) -> f64 {
    if i > 0.0 {
        t / i
    } else if t > 0.0 {
        f64::INFINITY
    } else {
        0.0
    }
}
