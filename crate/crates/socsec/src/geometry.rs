//! Planar regions, Poisson point process sampling, and radial quadrature.
//!
//! All analysis integrals in this crate have the form
//! `int_R k(|x - pole|) dx` for a region R that is a disk, an annulus, or a
//! flabellate annulus (annular sector). Writing the integral in polar
//! coordinates about the pole reduces it to one dimension,
//!
//! `int k(r) W(r) r dr`,
//!
//! where `W(r)` is the angular measure of the circle of radius `r` about the
//! pole that lies inside R. `W` is computed exactly from circle/circle and
//! circle/ray intersections; the radial integral is then evaluated piecewise
//! between the radii where the intersection structure changes, with adaptive
//! Gauss-Legendre panels under a cosine endpoint substitution (the arc
//! measure has square-root behavior at tangency radii).

use std::f64::consts::PI;
use std::fmt;
use std::sync::OnceLock;

use rand::Rng;
use rand_distr::{Distribution, Poisson};

/// Relative tolerance for the adaptive radial quadrature.
const QUAD_RTOL: f64 = 1e-6;

/// Panel-doubling cap per smooth piece (16-point rule per panel).
const QUAD_MAX_PANELS: usize = 4096;

#[derive(Debug, Clone, PartialEq)]
pub enum GeometryError {
    /// Region or decomposition parameters violate their invariants.
    Invalid(String),
    /// A quadrature did not reach its accuracy target, or the integral diverges.
    NonConvergent(String),
}

impl fmt::Display for GeometryError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GeometryError::Invalid(msg) => write!(f, "invalid geometry: {msg}"),
            GeometryError::NonConvergent(msg) => write!(f, "quadrature failure: {msg}"),
        }
    }
}

impl std::error::Error for GeometryError {}

/// A point in the plane, in meters.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn origin() -> Self {
        Self { x: 0.0, y: 0.0 }
    }

    pub fn distance(&self, other: Point) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }
}

/// A planar integration / sampling region.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Region {
    Disk {
        center: Point,
        radius: f64,
    },
    Annulus {
        center: Point,
        inner: f64,
        outer: f64,
    },
    /// Annular sector: radii in [inner, outer], polar angle about `center`
    /// in [angle_lo, angle_hi].
    FlabellateAnnulus {
        center: Point,
        inner: f64,
        outer: f64,
        angle_lo: f64,
        angle_hi: f64,
    },
}

impl Region {
    pub fn disk(center: Point, radius: f64) -> Result<Self, GeometryError> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(GeometryError::Invalid(format!(
                "disk radius must be positive, got {radius}"
            )));
        }
        Ok(Region::Disk { center, radius })
    }

    pub fn annulus(center: Point, inner: f64, outer: f64) -> Result<Self, GeometryError> {
        if !(inner >= 0.0 && inner < outer && outer.is_finite()) {
            return Err(GeometryError::Invalid(format!(
                "annulus radii must satisfy 0 <= inner < outer, got {inner}, {outer}"
            )));
        }
        Ok(Region::Annulus {
            center,
            inner,
            outer,
        })
    }

    pub fn flabellate(
        center: Point,
        inner: f64,
        outer: f64,
        angle_lo: f64,
        angle_hi: f64,
    ) -> Result<Self, GeometryError> {
        if !(inner >= 0.0 && inner < outer && outer.is_finite()) {
            return Err(GeometryError::Invalid(format!(
                "flabellate radii must satisfy 0 <= inner < outer, got {inner}, {outer}"
            )));
        }
        if !(angle_lo < angle_hi && angle_hi <= angle_lo + 2.0 * PI) {
            return Err(GeometryError::Invalid(format!(
                "flabellate angles must satisfy lo < hi <= lo + 2*pi, got {angle_lo}, {angle_hi}"
            )));
        }
        Ok(Region::FlabellateAnnulus {
            center,
            inner,
            outer,
            angle_lo,
            angle_hi,
        })
    }

    /// Exact area of the region.
    pub fn area(&self) -> f64 {
        match *self {
            Region::Disk { radius, .. } => PI * radius * radius,
            Region::Annulus { inner, outer, .. } => PI * (outer * outer - inner * inner),
            Region::FlabellateAnnulus {
                inner,
                outer,
                angle_lo,
                angle_hi,
                ..
            } => 0.5 * (angle_hi - angle_lo) * (outer * outer - inner * inner),
        }
    }

    /// Membership test (boundary counts as inside).
    pub fn contains(&self, p: Point) -> bool {
        match *self {
            Region::Disk { center, radius } => center.distance(p) <= radius,
            Region::Annulus {
                center,
                inner,
                outer,
            } => {
                let d = center.distance(p);
                inner <= d && d <= outer
            }
            Region::FlabellateAnnulus {
                center,
                inner,
                outer,
                angle_lo,
                angle_hi,
            } => {
                let d = center.distance(p);
                if d < inner || d > outer {
                    return false;
                }
                let a = (p.y - center.y).atan2(p.x - center.x);
                let span = angle_hi - angle_lo;
                (a - angle_lo).rem_euclid(2.0 * PI) <= span
            }
        }
    }

    fn center(&self) -> Point {
        match *self {
            Region::Disk { center, .. }
            | Region::Annulus { center, .. }
            | Region::FlabellateAnnulus { center, .. } => center,
        }
    }

    fn radii(&self) -> (f64, f64) {
        match *self {
            Region::Disk { radius, .. } => (0.0, radius),
            Region::Annulus { inner, outer, .. } => (inner, outer),
            Region::FlabellateAnnulus { inner, outer, .. } => (inner, outer),
        }
    }
}

/// Draw one realization of a homogeneous PPP of the given density on the
/// region: a Poisson count with mean `density * area`, then that many
/// independent uniform points.
pub fn sample_ppp<R: Rng + ?Sized>(region: &Region, density: f64, rng: &mut R) -> Vec<Point> {
    assert!(density >= 0.0, "PPP density must be nonnegative");
    let mean = density * region.area();
    if mean <= 0.0 {
        return Vec::new();
    }
    let count = Poisson::new(mean).expect("positive mean").sample(rng) as usize;
    let (inner, outer) = region.radii();
    let center = region.center();
    let (lo, hi) = match *region {
        Region::FlabellateAnnulus {
            angle_lo, angle_hi, ..
        } => (angle_lo, angle_hi),
        _ => (0.0, 2.0 * PI),
    };
    (0..count)
        .map(|_| {
            let u: f64 = rng.random();
            let r = (inner * inner + u * (outer * outer - inner * inner)).sqrt();
            let a = rng.random_range(lo..hi);
            Point::new(center.x + r * a.cos(), center.y + r * a.sin())
        })
        .collect()
}

/// Numerical value of `int_region max(|x - pole|, guard)^(-s) dx`.
///
/// Diverges (and errors) when the pole lies inside the region with guard = 0
/// and s >= 2.
pub fn radial_integral(
    region: &Region,
    pole: Point,
    s: f64,
    guard: f64,
) -> Result<f64, GeometryError> {
    assert!(s > 0.0, "radial_integral exponent must be positive");
    assert!(guard >= 0.0, "guard must be nonnegative");
    if guard == 0.0 && s >= 2.0 && region.contains(pole) {
        return Err(GeometryError::NonConvergent(format!(
            "kernel r^(-{s}) diverges: pole ({}, {}) lies inside the region with guard 0",
            pole.x, pole.y
        )));
    }
    let kernel = move |r: f64, out: &mut [f64]| {
        out[0] = r.max(guard).powf(-s);
    };
    let v = radial_kernel_integrals(region, pole, 1, kernel, &[guard])?;
    Ok(v[0])
}

/// Integrate several radially symmetric kernels about `pole` over the region
/// in one pass. `fill(r, out)` writes the kernel values at distance `r`;
/// `extra_breakpoints` are radii where a kernel is not smooth.
pub fn radial_kernel_integrals<F>(
    region: &Region,
    pole: Point,
    n_out: usize,
    fill: F,
    extra_breakpoints: &[f64],
) -> Result<Vec<f64>, GeometryError>
where
    F: Fn(f64, &mut [f64]),
{
    let center = region.center();
    let dist = center.distance(pole);
    let (inner, outer) = region.radii();

    let r_lo = (dist - outer).max(inner - dist).max(0.0);
    let r_hi = dist + outer;
    let mut totals = vec![0.0f64; n_out];
    if r_hi <= r_lo {
        return Ok(totals);
    }

    // radii where the circle/region intersection structure changes
    let mut cuts: Vec<f64> = Vec::with_capacity(16);
    for &rad in &[inner, outer] {
        if rad > 0.0 {
            cuts.push((dist - rad).abs());
            cuts.push(dist + rad);
        }
    }
    if let Region::FlabellateAnnulus {
        angle_lo, angle_hi, ..
    } = *region
    {
        cuts.push(dist); // distance to the sector apex
        for &a in &[angle_lo, angle_hi] {
            let e = (a.cos(), a.sin());
            let m = (center.x - pole.x, center.y - pole.y);
            let along = e.0 * m.0 + e.1 * m.1;
            // perpendicular foot of the pole on the boundary ray, if on the ray
            if -along >= 0.0 {
                let foot = (m.0 * m.0 + m.1 * m.1 - along * along).max(0.0).sqrt();
                cuts.push(foot);
            }
            // sector corner points
            for &rad in &[inner, outer] {
                let corner = Point::new(center.x + rad * e.0, center.y + rad * e.1);
                cuts.push(pole.distance(corner));
            }
        }
    }
    cuts.extend_from_slice(extra_breakpoints);
    cuts.retain(|&c| c > r_lo && c < r_hi && c.is_finite());
    cuts.push(r_lo);
    cuts.push(r_hi);
    cuts.sort_by(f64::total_cmp);
    cuts.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * r_hi);

    let mut buf = vec![0.0f64; n_out];
    let mut piece = vec![0.0f64; n_out];
    for w in cuts.windows(2) {
        let (a, b) = (w[0], w[1]);
        if b - a <= 1e-14 * r_hi {
            continue;
        }
        integrate_piece(
            region,
            pole,
            a,
            b,
            &fill,
            &mut buf,
            &mut piece,
        )?;
        for (t, p) in totals.iter_mut().zip(piece.iter()) {
            *t += *p;
        }
    }
    Ok(totals)
}

/// Adaptive composite Gauss-Legendre on one smooth piece [a, b] of the radial
/// integral, after the substitution r = m - h cos(u) that absorbs square-root
/// endpoint behavior of the arc measure.
fn integrate_piece<F>(
    region: &Region,
    pole: Point,
    a: f64,
    b: f64,
    fill: &F,
    buf: &mut [f64],
    out: &mut [f64],
) -> Result<(), GeometryError>
where
    F: Fn(f64, &mut [f64]),
{
    let (nodes, weights) = gauss_legendre_16();
    let m = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let n_out = out.len();
    let mut prev: Option<Vec<f64>> = None;

    let mut panels = 1usize;
    while panels <= QUAD_MAX_PANELS {
        let mut acc = vec![0.0f64; n_out];
        let du = PI / panels as f64;
        for p in 0..panels {
            let u0 = p as f64 * du;
            for (x, w) in nodes.iter().zip(weights.iter()) {
                // map GL node from [-1, 1] to [u0, u0 + du]
                let u = u0 + 0.5 * du * (x + 1.0);
                let r = m - h * u.cos();
                let jac = h * u.sin() * 0.5 * du;
                if jac == 0.0 || r <= 0.0 {
                    continue;
                }
                let arc = arc_measure(region, pole, r);
                if arc == 0.0 {
                    continue;
                }
                fill(r, buf);
                for (aj, kj) in acc.iter_mut().zip(buf.iter()) {
                    *aj += w * jac * arc * r * kj;
                }
            }
        }
        if let Some(prev_vals) = &prev {
            let converged = acc.iter().zip(prev_vals.iter()).all(|(v, pv)| {
                (v - pv).abs() <= QUAD_RTOL * v.abs().max(1e-280)
            });
            if converged {
                out.copy_from_slice(&acc);
                return Ok(());
            }
        }
        prev = Some(acc);
        panels *= 2;
    }
    Err(GeometryError::NonConvergent(format!(
        "radial quadrature on [{a}, {b}] did not reach {QUAD_RTOL} relative accuracy"
    )))
}

/// Angular measure (radians) of the circle of radius `r` about `pole` that
/// lies inside the region. Exact up to floating point: boundary crossing
/// angles are found analytically and each arc between crossings is classified
/// by a midpoint membership test.
pub fn arc_measure(region: &Region, pole: Point, r: f64) -> f64 {
    debug_assert!(r > 0.0);
    let mut events: Vec<f64> = Vec::with_capacity(8);
    let center = region.center();
    let dist = center.distance(pole);
    let (inner, outer) = region.radii();

    for &rad in &[inner, outer] {
        if rad <= 0.0 || dist <= 1e-14 * rad.max(r) {
            continue; // concentric or degenerate circle: no crossings
        }
        if (dist - rad).abs() < r && r < dist + rad {
            let cos_psi = ((r * r + dist * dist - rad * rad) / (2.0 * r * dist)).clamp(-1.0, 1.0);
            let psi = cos_psi.acos();
            let phi0 = (center.y - pole.y).atan2(center.x - pole.x);
            events.push((phi0 - psi).rem_euclid(2.0 * PI));
            events.push((phi0 + psi).rem_euclid(2.0 * PI));
        }
    }

    if let Region::FlabellateAnnulus {
        angle_lo, angle_hi, ..
    } = *region
    {
        for &a in &[angle_lo, angle_hi] {
            let e = (a.cos(), a.sin());
            let m = (center.x - pole.x, center.y - pole.y);
            let half_b = e.0 * m.0 + e.1 * m.1;
            let c0 = m.0 * m.0 + m.1 * m.1 - r * r;
            let disc = half_b * half_b - c0;
            if disc <= 0.0 {
                continue;
            }
            let sq = disc.sqrt();
            for &t in &[-half_b - sq, -half_b + sq] {
                if t >= 0.0 {
                    let vx = m.0 + t * e.0;
                    let vy = m.1 + t * e.1;
                    events.push(vy.atan2(vx).rem_euclid(2.0 * PI));
                }
            }
        }
    }

    if events.is_empty() {
        // no boundary crossings: the circle is wholly inside or wholly outside
        let probe = Point::new(pole.x + r * 0.123_456_7f64.cos(), pole.y + r * 0.123_456_7f64.sin());
        return if region.contains(probe) { 2.0 * PI } else { 0.0 };
    }

    events.sort_by(f64::total_cmp);
    let mut total = 0.0;
    let n = events.len();
    for i in 0..n {
        let lo = events[i];
        let hi = if i + 1 < n {
            events[i + 1]
        } else {
            events[0] + 2.0 * PI
        };
        let width = hi - lo;
        if width <= 0.0 {
            continue;
        }
        let mid = lo + 0.5 * width;
        let probe = Point::new(pole.x + r * mid.cos(), pole.y + r * mid.sin());
        if region.contains(probe) {
            total += width;
        }
    }
    total
}

/// The jammer region about the destination: annulus D(l1, l2) with the
/// protected disk around the destination removed, approximated by three
/// flabellate-annulus pieces. The sector subtending the protected zone has
/// half-angle asin(lg / d) about the source-destination axis; the first two
/// pieces are the sector portions radially before and after the protected
/// zone, the third is the annulus outside the sector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DbarDecomposition {
    pieces: [Region; 3],
    sector_half_angle: f64,
}

impl DbarDecomposition {
    pub fn pieces(&self) -> &[Region; 3] {
        &self.pieces
    }

    pub fn sector_half_angle(&self) -> f64 {
        self.sector_half_angle
    }

    /// Sum of the piece areas.
    pub fn area(&self) -> f64 {
        self.pieces.iter().map(Region::area).sum()
    }

    pub fn contains(&self, p: Point) -> bool {
        self.pieces.iter().any(|r| r.contains(p))
    }
}

/// Decompose the annulus [l1, l2] minus the protected disk of radius `lg`
/// around the destination at distance `d` on the positive x-axis.
pub fn dbar_decompose(
    l1: f64,
    l2: f64,
    dest_distance: f64,
    lg: f64,
) -> Result<DbarDecomposition, GeometryError> {
    if !(lg > 0.0) {
        return Err(GeometryError::Invalid(format!(
            "protected-zone radius must be positive, got {lg}"
        )));
    }
    if !(l1 < dest_distance - lg) {
        return Err(GeometryError::Invalid(format!(
            "protected zone touches the inner boundary: need l1 < d - lg, got l1={l1}, d={dest_distance}, lg={lg}"
        )));
    }
    if !(dest_distance + lg < l2) {
        return Err(GeometryError::Invalid(format!(
            "protected zone touches the outer boundary: need d + lg < l2, got l2={l2}, d={dest_distance}, lg={lg}"
        )));
    }
    let theta = (lg / dest_distance).asin();
    let o = Point::origin();
    let a1 = Region::flabellate(o, l1, dest_distance - lg, -theta, theta)?;
    let a2 = Region::flabellate(o, dest_distance + lg, l2, -theta, theta)?;
    let a3 = Region::flabellate(o, l1, l2, theta, 2.0 * PI - theta)?;
    Ok(DbarDecomposition {
        pieces: [a1, a2, a3],
        sector_half_angle: theta,
    })
}

/// 16-point Gauss-Legendre nodes and weights on [-1, 1], computed once by
/// Newton iteration on the Legendre polynomial.
fn gauss_legendre_16() -> &'static ([f64; 16], [f64; 16]) {
    static TABLE: OnceLock<([f64; 16], [f64; 16])> = OnceLock::new();
    TABLE.get_or_init(|| {
        const N: usize = 16;
        let mut nodes = [0.0f64; N];
        let mut weights = [0.0f64; N];
        for i in 0..N {
            // Chebyshev initial guess
            let mut x = (PI * (i as f64 + 0.75) / (N as f64 + 0.5)).cos();
            for _ in 0..100 {
                let (p, dp) = legendre_and_derivative(N, x);
                let dx = p / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, dp) = legendre_and_derivative(N, x);
            nodes[i] = x;
            weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
        }
        (nodes, weights)
    })
}

fn legendre_and_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0f64;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn o() -> Point {
        Point::origin()
    }

    #[test]
    fn area_closed_forms() {
        let disk = Region::disk(o(), 6.0).unwrap();
        assert!((disk.area() - 36.0 * PI).abs() < 1e-10);
        let ann = Region::annulus(o(), 6.0, 100.0).unwrap();
        assert!((ann.area() - PI * (100.0f64.powi(2) - 36.0)).abs() < 1e-8);
        let half = Region::flabellate(o(), 6.0, 100.0, 0.0, PI).unwrap();
        assert!((half.area() - 0.5 * ann.area()).abs() < 1e-8);
    }

    #[test]
    fn region_constructors_reject_bad_input() {
        assert!(Region::disk(o(), 0.0).is_err());
        assert!(Region::annulus(o(), 5.0, 5.0).is_err());
        assert!(Region::annulus(o(), 7.0, 5.0).is_err());
        assert!(Region::flabellate(o(), 1.0, 2.0, 1.0, 1.0).is_err());
        assert!(Region::flabellate(o(), 1.0, 2.0, 0.0, 7.0).is_err());
    }

    #[test]
    fn sample_ppp_zero_density_is_empty() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let disk = Region::disk(o(), 6.0).unwrap();
        assert!(sample_ppp(&disk, 0.0, &mut rng).is_empty());
    }

    #[test]
    fn sample_ppp_disk_mean_count() {
        // relay intensity at the reference parameters: mean count 0.04 * pi * 36
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let disk = Region::disk(o(), 6.0).unwrap();
        let draws = 100_000;
        let mut total = 0usize;
        for _ in 0..draws {
            total += sample_ppp(&disk, 0.04, &mut rng).len();
        }
        let mean = total as f64 / draws as f64;
        let expect = 0.04 * PI * 36.0; // 4.5239
        assert!((expect - 4.5239).abs() < 1e-3);
        assert!(
            (mean - expect).abs() / expect < 0.01,
            "mean={mean} expect={expect}"
        );
    }

    #[test]
    fn sample_ppp_annulus_equidispersion() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let ann = Region::annulus(o(), 6.0, 100.0).unwrap();
        let draws = 100_000;
        let counts: Vec<f64> = (0..draws)
            .map(|_| sample_ppp(&ann, 0.002, &mut rng).len() as f64)
            .collect();
        let mean = counts.iter().sum::<f64>() / draws as f64;
        let var = counts.iter().map(|c| (c - mean) * (c - mean)).sum::<f64>() / draws as f64;
        assert!(
            (var - mean).abs() / mean < 0.03,
            "mean={mean} var={var}"
        );
        let expect = 0.002 * PI * (10_000.0 - 36.0);
        assert!((mean - expect).abs() / expect < 0.01);
    }

    #[test]
    fn sample_ppp_points_land_in_region() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let fa = Region::flabellate(Point::new(3.0, -2.0), 2.0, 9.0, -0.4, 1.1).unwrap();
        for _ in 0..50 {
            for p in sample_ppp(&fa, 0.5, &mut rng) {
                assert!(fa.contains(p), "{p:?} outside region");
            }
        }
    }

    #[test]
    fn radial_integral_concentric_annulus_exact() {
        // int over annulus(1,2), pole at center, r^-4: 2*pi*int_1^2 r^-3 dr = 3*pi/4
        let ann = Region::annulus(o(), 1.0, 2.0).unwrap();
        let v = radial_integral(&ann, o(), 4.0, 0.0).unwrap();
        assert!((v - 0.75 * PI).abs() < 1e-8 * v, "v={v}");
    }

    #[test]
    fn radial_integral_matches_grid_oracle() {
        // brute-force midpoint Riemann sum on a 2000x2000 grid over the disk
        let disk = Region::disk(o(), 6.0).unwrap();
        let pole = Point::new(60.0, 0.0);
        let v = radial_integral(&disk, pole, 4.0, 0.0).unwrap();
        let n = 2000usize;
        let h = 12.0 / n as f64;
        let mut oracle = 0.0;
        for i in 0..n {
            let x = -6.0 + (i as f64 + 0.5) * h;
            for j in 0..n {
                let y = -6.0 + (j as f64 + 0.5) * h;
                if x * x + y * y <= 36.0 {
                    let d2 = (x - 60.0) * (x - 60.0) + y * y;
                    oracle += h * h / (d2 * d2);
                }
            }
        }
        assert!(
            (v - oracle).abs() / oracle < 1e-4,
            "v={v} oracle={oracle}"
        );
    }

    #[test]
    fn radial_integral_divergent_pole_inside() {
        let disk = Region::disk(o(), 6.0).unwrap();
        let err = radial_integral(&disk, Point::new(3.0, 0.0), 4.0, 0.0).unwrap_err();
        assert!(matches!(err, GeometryError::NonConvergent(_)));
    }

    #[test]
    fn radial_integral_guard_regularizes_interior_pole() {
        // with a guard the kernel is bounded; compare against the closed form
        // int_disk(pole-centered radius R) max(r,g)^-4 = pi g^-2 + 2 pi (g^-2 - R^-2)/2
        let big = Region::disk(o(), 50.0).unwrap();
        let g = 0.5;
        let v = radial_integral(&big, o(), 4.0, g).unwrap();
        let expect = PI * g.powi(-2) + PI * (g.powi(-2) - 50.0f64.powi(-2));
        assert!((v - expect).abs() < 1e-6 * expect, "v={v} expect={expect}");
    }

    #[test]
    fn radial_integral_monotone_in_exponent() {
        // region entirely outside the unit disk about the pole
        let disk = Region::disk(o(), 6.0).unwrap();
        let pole = Point::new(20.0, 5.0);
        let mut prev = f64::INFINITY;
        for &s in &[2.0, 3.0, 4.0, 6.0, 8.0] {
            let v = radial_integral(&disk, pole, s, 0.0).unwrap();
            assert!(v < prev, "s={s} v={v} prev={prev}");
            prev = v;
        }
    }

    #[test]
    fn radial_integral_far_field_limit() {
        // pole far from the disk: integral -> area * dist^-s
        let disk = Region::disk(o(), 6.0).unwrap();
        let pole = Point::new(60.0, 0.0); // 10 * L1
        let v = radial_integral(&disk, pole, 4.0, 0.0).unwrap();
        let farfield = disk.area() * 60.0f64.powi(-4);
        assert!((v - farfield).abs() / farfield < 0.01, "v={v} ff={farfield}");
    }

    #[test]
    fn dbar_sector_angle_and_area_additivity() {
        let d = dbar_decompose(6.0, 100.0, 60.0, 5.0).unwrap();
        let theta = d.sector_half_angle();
        assert!((theta - (5.0f64 / 60.0).asin()).abs() < 1e-15);
        assert!((theta - 0.08343).abs() < 1e-5);
        // A1 + A2 + A3 = annulus minus the sector band across the protected zone
        let total: f64 = d.area();
        let annulus_area = PI * (10_000.0 - 36.0);
        let band = theta * ((65.0f64).powi(2) - (55.0f64).powi(2));
        assert!((total - (annulus_area - band)).abs() < 1e-8 * total);
    }

    #[test]
    fn dbar_vanishing_protected_zone_recovers_annulus() {
        let d = dbar_decompose(6.0, 100.0, 60.0, 1e-9).unwrap();
        let annulus_area = PI * (10_000.0 - 36.0);
        assert!((d.area() - annulus_area).abs() / annulus_area < 1e-9);
    }

    #[test]
    fn dbar_rejects_touching_protected_zone() {
        assert!(dbar_decompose(56.0, 100.0, 60.0, 5.0).is_err());
        assert!(dbar_decompose(6.0, 64.0, 60.0, 5.0).is_err());
        assert!(dbar_decompose(6.0, 100.0, 60.0, 0.0).is_err());
    }

    #[test]
    fn dbar_pieces_disjoint_and_clear_of_protected_zone() {
        let d = dbar_decompose(6.0, 100.0, 60.0, 5.0).unwrap();
        let dest = Point::new(60.0, 0.0);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        // random points in the annulus: piece membership is mutually exclusive
        for _ in 0..20_000 {
            let u: f64 = rng.random();
            let r = (36.0 + u * (10_000.0 - 36.0)).sqrt();
            let a = rng.random_range(0.0..2.0 * PI);
            let p = Point::new(r * a.cos(), r * a.sin());
            let hits = d.pieces().iter().filter(|reg| reg.contains(p)).count();
            assert!(hits <= 1, "point {p:?} in {hits} pieces");
        }
        // no piece point inside the (slightly shrunk) protected zone
        for _ in 0..20_000 {
            let u: f64 = rng.random();
            let r = (5.0 - 1e-9) * u.sqrt();
            let a = rng.random_range(0.0..2.0 * PI);
            let p = Point::new(60.0 + r * a.cos(), r * a.sin());
            assert!(!d.contains(p), "piece intersects protected zone at {p:?}");
            let _ = dest;
        }
    }

    #[test]
    fn dbar_integral_matches_rejection_oracle_for_far_kernel() {
        // kernel concentrated far from the protected zone: decomposition vs a
        // rejection-sampled Monte Carlo integral over the exact punctured annulus
        let d = dbar_decompose(6.0, 100.0, 60.0, 5.0).unwrap();
        let pole = Point::new(0.0, 150.0);
        let s = 4.0;
        let pieces_sum: f64 = d
            .pieces()
            .iter()
            .map(|r| radial_integral(r, pole, s, 0.0).unwrap())
            .sum();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let n = 2_000_000usize;
        let area = PI * (10_000.0 - 36.0);
        let mut acc = 0.0;
        for _ in 0..n {
            let u: f64 = rng.random();
            let r = (36.0 + u * (10_000.0 - 36.0)).sqrt();
            let a = rng.random_range(0.0..2.0 * PI);
            let p = Point::new(r * a.cos(), r * a.sin());
            if p.distance(Point::new(60.0, 0.0)) >= 5.0 {
                acc += p.distance(pole).powf(-s);
            }
        }
        let oracle = acc / n as f64 * area;
        assert!(
            (pieces_sum - oracle).abs() / oracle < 0.01,
            "pieces={pieces_sum} oracle={oracle}"
        );
    }

    #[test]
    fn campbell_linear_statistic_three_regions() {
        // E[sum_x f(x)] = density * int f for each region shape
        let regions = [
            Region::disk(o(), 6.0).unwrap(),
            Region::annulus(o(), 6.0, 30.0).unwrap(),
            Region::flabellate(o(), 6.0, 30.0, 0.3, 2.0).unwrap(),
        ];
        let pole = Point::new(40.0, 10.0);
        let s = 2.0;
        let density = 0.01;
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for region in &regions {
            let int_f = radial_integral(region, pole, s, 0.0).unwrap();
            let int_f2 = radial_integral(region, pole, 2.0 * s, 0.0).unwrap();
            let draws = 10_000;
            let mut acc = 0.0;
            for _ in 0..draws {
                for p in sample_ppp(region, density, &mut rng) {
                    acc += p.distance(pole).powf(-s);
                }
            }
            let mean = acc / draws as f64;
            let expect = density * int_f;
            let se = (density * int_f2 / draws as f64).sqrt();
            assert!(
                (mean - expect).abs() < 3.0 * se,
                "{region:?}: mean={mean} expect={expect} se={se}"
            );
        }
    }

    #[test]
    fn arc_measure_full_circle_inside() {
        let ann = Region::annulus(o(), 1.0, 10.0).unwrap();
        let w = arc_measure(&ann, o(), 5.0);
        assert!((w - 2.0 * PI).abs() < 1e-12);
        assert_eq!(arc_measure(&ann, o(), 0.5), 0.0);
        assert_eq!(arc_measure(&ann, o(), 11.0), 0.0);
    }

    #[test]
    fn arc_measure_concentric_sector() {
        let fa = Region::flabellate(o(), 1.0, 10.0, 0.25, 1.75).unwrap();
        let w = arc_measure(&fa, o(), 5.0);
        assert!((w - 1.5).abs() < 1e-12, "w={w}");
    }

    #[test]
    fn arc_measure_offset_disk_half_plane_limit() {
        // circle through a disk's center: measure approaches the half-plane
        // angle as the disk grows
        let disk = Region::disk(Point::new(100.0, 0.0), 100.0).unwrap();
        let w = arc_measure(&disk, o(), 1.0);
        // tiny circle near the boundary point of a huge disk: half circle
        assert!((w - PI).abs() < 0.02, "w={w}");
    }
}
