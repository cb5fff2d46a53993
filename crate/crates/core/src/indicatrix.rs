//! The unit curve of the Finsler norm in a tangent plane of the manifold of
//! geodesics.
//!
//! A base point is labelled by its latitude coordinate `lat` (the rotational
//! momentum of the geodesic it represents is `c = sin(lat)`). The curve is
//! traced by the colatitude excursion `r` of that geodesic:
//!
//! ```text
//! v1(r) = ± sqrt(sin^2 r - c^2) / cos(lat)
//! v2(r) = cos r / cos^2(lat) - eps (sin^2 r - c^2) + eps c^2
//! ```
//!
//! and satisfies the implicit equation
//! `(1 - v1^2)/cos^2(lat) = (v2 + eps v1^2 cos^2(lat) - eps c^2)^2`.
//! Clearing denominators of the homogenized form gives a quartic
//! `A F^4 + B F^3 + C F^2 + D F + E = 0` whose unique positive root is the
//! norm; this module assembles those coefficients.

use crate::error::{Error, Result};
use crate::quad;
use crate::real::Real;

/// Margin by which `r` grids stay clear of the turning colatitudes, so the
/// `v1` radical stays well above the rounding floor.
pub const EDGE_MARGIN: f64 = 1e-7;

/// Margin to the chart boundary required of tangent-sample base points.
pub const CHART_MARGIN: f64 = 1e-3;

/// Tangent vector at a base point of the manifold of geodesics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TangentSample<T> {
    /// Latitude coordinate of the base point, inside the chart margin.
    pub lat: T,
    /// Rotation coordinate of the base point. The norm never depends on it.
    pub theta: T,
    pub v1: T,
    pub v2: T,
}

impl<T: Real> TangentSample<T> {
    pub fn new(lat: T, theta: T, v1: T, v2: T) -> Result<Self> {
        Self::with_margin(lat, theta, v1, v2, T::of(CHART_MARGIN))
    }

    pub fn with_margin(lat: T, theta: T, v1: T, v2: T, margin: T) -> Result<Self> {
        if !(lat.abs() <= T::FRAC_PI_2() - margin) {
            return Err(Error::domain(format!(
                "latitude {} outside the chart margin |R| <= pi/2 - {}",
                lat.as_f64(),
                margin.as_f64()
            )));
        }
        if v1 == T::zero() && v2 == T::zero() {
            return Err(Error::domain("zero tangent vector"));
        }
        Ok(TangentSample { lat, theta, v1, v2 })
    }

    /// Rotational momentum of the underlying geodesic, `c = sin(lat)`.
    pub fn c(&self) -> T {
        self.lat.sin()
    }

    /// Norm quartic coefficients at this sample.
    pub fn quartic(&self, eps: T) -> QuarticCoeffs<T> {
        quartic_coefficients(eps, self.lat, self.v1, self.v2)
    }
}

fn check_lat<T: Real>(lat: T) -> Result<()> {
    if !(lat.abs() < T::FRAC_PI_2()) {
        return Err(Error::domain(format!(
            "latitude {} outside (-pi/2, pi/2)",
            lat.as_f64()
        )));
    }
    Ok(())
}

fn check_eps<T: Real>(eps: T) -> Result<()> {
    if !(eps >= T::zero() && eps < T::half()) {
        return Err(Error::domain(format!(
            "deformation parameter {} outside [0, 1/2)",
            eps.as_f64()
        )));
    }
    Ok(())
}

/// Smallest colatitude reached by the geodesic with momentum `sin(lat)`;
/// the curve parameter `r` ranges over `[turning, pi - turning]`.
pub fn turning_colatitude<T: Real>(lat: T) -> T {
    lat.abs()
}

/// `sin^2 r - sin^2(lat)`, evaluated as `sin(r - |lat|) sin(r + |lat|)` to
/// avoid cancellation near the turning colatitude.
fn radicand<T: Real>(lat: T, r: T) -> T {
    let r_c = lat.abs();
    (r - r_c).sin() * (r + r_c).sin()
}

/// Second fiber coordinate of the curve in closed form.
pub fn v2_closed_form<T: Real>(eps: T, lat: T, r: T) -> Result<T> {
    check_eps(eps)?;
    check_lat(lat)?;
    let rad = radicand(lat, r);
    if rad < -T::of(1e-12) {
        return Err(Error::domain(format!(
            "colatitude {} not reachable from latitude {}",
            r.as_f64(),
            lat.as_f64()
        )));
    }
    let cos_lat = lat.cos();
    let c2 = lat.sin() * lat.sin();
    Ok(r.cos() / (cos_lat * cos_lat) - eps * rad.max(T::zero()) + eps * c2)
}

/// Which sign of `v1` to take.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    Plus,
    Minus,
}

impl Branch {
    fn sign<T: Real>(self) -> T {
        match self {
            Branch::Plus => T::one(),
            Branch::Minus => -T::one(),
        }
    }
}

/// Point of the unit curve at parameter `r`.
pub fn indicatrix_point<T: Real>(eps: T, lat: T, r: T, branch: Branch) -> Result<(T, T)> {
    let v2 = v2_closed_form(eps, lat, r)?;
    let rad = radicand(lat, r).max(T::zero());
    let v1 = branch.sign::<T>() * rad.sqrt() / lat.cos();
    Ok((v1, v2))
}

/// Residual of the implicit curve equation,
/// `(1 - v1^2)/cos^2(lat) - (v2 + eps v1^2 cos^2(lat) - eps c^2)^2`.
/// Zero exactly on the curve.
pub fn implicit_residual<T: Real>(eps: T, lat: T, v1: T, v2: T) -> T {
    let cos2 = lat.cos() * lat.cos();
    let c2 = lat.sin() * lat.sin();
    let lhs = (T::one() - v1 * v1) / cos2;
    let inner = v2 + eps * v1 * v1 * cos2 - eps * c2;
    lhs - inner * inner
}

/// Both evaluations of the curve integral
/// `int_{turning}^{r} (sin s / cos^2 s) (1 + 2 eps cos^3 s) / sqrt(sin^2 s - c^2) ds`.
#[derive(Debug, Clone, Copy)]
pub struct AppendixIdentity<T> {
    /// Antiderivative route:
    /// `[sqrt(sin^2 r - c^2)(1 + 2 eps cos^3 r)/cos r + 2 eps (sin^2 r - c^2)^(3/2)] / cos^2(lat)`.
    pub closed_form: T,
    /// Adaptive quadrature route (endpoint-substituted; see below).
    pub quadrature: T,
}

impl<T: Real> AppendixIdentity<T> {
    /// Disagreement normalized by the magnitude of the value (floor 1).
    pub fn gap(&self) -> T {
        (self.closed_form - self.quadrature).abs() / self.closed_form.abs().max(T::one())
    }
}

/// Evaluates the curve integral by its antiderivative and independently by
/// quadrature.
///
/// The integrand carries a `1/sqrt(s - turning)` singularity at the lower
/// endpoint, removed by the `s = turning + u^2` substitution. Past the
/// equator (`r > pi/2`) the raw integrand is no longer integrable
/// (`1/cos^2 s` crosses its pole), while the antiderivative continues
/// smoothly; there the quadrature route integrates by parts first, which
/// leaves the bounded integrand `6 eps sin s cos s sqrt(sin^2 s - c^2)`.
pub fn appendix_integral<T: Real>(eps: T, lat: T, r: T) -> Result<AppendixIdentity<T>> {
    check_eps(eps)?;
    check_lat(lat)?;
    let r_c = turning_colatitude(lat);
    if !(r >= r_c && r <= T::PI() - r_c) {
        return Err(Error::domain(format!(
            "colatitude {} outside the excursion [{}, {}]",
            r.as_f64(),
            r_c.as_f64(),
            (T::PI() - r_c).as_f64()
        )));
    }
    if r.cos().abs() < T::of(1e-10) {
        return Err(Error::domain(
            "integral representation is singular where the curve crosses the equator",
        ));
    }
    let cos2_lat = lat.cos() * lat.cos();
    let rad = radicand(lat, r).max(T::zero());
    let sqrt_rad = rad.sqrt();
    let cos_r = r.cos();
    let boundary = sqrt_rad * (T::one() + T::two() * eps * cos_r.powi(3)) / cos_r;
    let closed_form = (boundary + T::two() * eps * rad * sqrt_rad) / cos2_lat;

    let abs_tol = T::of(1e-12);
    let rel_tol = T::of(1e-12);
    // sin^2 s - c^2 = sin(s - r_c) sin(s + r_c); with the offset t = s - r_c
    // from the quadrature driver this stays accurate arbitrarily close to
    // the turning point.
    let weight = |t: T| (t.sin() * (t + T::two() * r_c).sin()).max(T::zero()).sqrt();
    let quadrature = if r < T::FRAC_PI_2() {
        let g = |t: T| {
            let s = r_c + t;
            let sin_s = s.sin();
            let cos_s = s.cos();
            (sin_s / (cos_s * cos_s)) * (T::one() + T::two() * eps * cos_s.powi(3)) / weight(t)
        };
        quad::integrate_sqrt_singular_lower(&g, r_c, r, abs_tol, rel_tol)?.value
    } else {
        let g = |t: T| {
            let s = r_c + t;
            s.sin() * s.cos() * weight(t)
        };
        let tail = quad::integrate_sqrt_singular_lower(&g, r_c, r, abs_tol, rel_tol)?.value;
        (boundary + T::of(6.0) * eps * tail) / cos2_lat
    };
    Ok(AppendixIdentity {
        closed_form,
        quadrature,
    })
}

/// `v2` recomputed through the integral representation (quadrature route of
/// [`appendix_integral`]); the closed form is the reference, this is the
/// cross-check.
pub fn v2_integral_path<T: Real>(eps: T, lat: T, r: T) -> Result<T> {
    let rad = radicand(lat, r).max(T::zero());
    let integral = appendix_integral(eps, lat, r)?.quadrature;
    let sin2 = r.sin() * r.sin();
    let cos_r = r.cos();
    Ok((T::one() + eps * sin2 * cos_r) / cos_r - rad.sqrt() * integral)
}

/// Coefficients of the norm quartic `A F^4 + B F^3 + C F^2 + D F + E`.
///
/// Homogeneity degrees in `(v1, v2)` are 0, 1, 2, 3, 4; for every admitted
/// deformation `A > 0`, `C < 0`, and `E < 0` whenever `v1 != 0`
/// (`E = 0` exactly on the `v1 = 0` stratum).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuarticCoeffs<T> {
    pub a: T,
    pub b: T,
    pub c: T,
    pub d: T,
    pub e: T,
}

impl<T: Real> QuarticCoeffs<T> {
    /// Value of the quartic at `f`.
    pub fn eval(&self, f: T) -> T {
        (((self.a * f + self.b) * f + self.c) * f + self.d) * f + self.e
    }

    /// `A + B + C + D + E`, the quartic at `F = 1`; vanishes exactly when
    /// `(v1, v2)` lies on the unit curve.
    pub fn sum(&self) -> T {
        self.a + self.b + self.c + self.d + self.e
    }

    pub fn as_tuple(&self) -> (T, T, T, T, T) {
        (self.a, self.b, self.c, self.d, self.e)
    }
}

/// Assembles the quartic coefficients at a tangent vector. With `m = sin^2(lat)`:
///
/// ```text
/// A = 1 - eps^2 (1 - m) m^2
/// B = 2 eps m (1 - m) v2
/// C = (2 eps^2 m^3 - 4 eps^2 m^2 + 2 eps^2 m - 1) v1^2 - (1 - m) v2^2
/// D = -2 eps (1 - m)^2 v1^2 v2
/// E = -eps^2 (1 - m)^3 v1^4
/// ```
pub fn quartic_coefficients<T: Real>(eps: T, lat: T, v1: T, v2: T) -> QuarticCoeffs<T> {
    let m = lat.sin() * lat.sin();
    let om = T::one() - m;
    let e2 = eps * eps;
    let v1sq = v1 * v1;
    QuarticCoeffs {
        a: T::one() - e2 * om * m * m,
        b: T::two() * eps * m * om * v2,
        c: (T::two() * e2 * m * m * m - T::of(4.0) * e2 * m * m + T::two() * e2 * m - T::one())
            * v1sq
            - om * v2 * v2,
        d: -T::two() * eps * om * om * v1sq * v2,
        e: -e2 * om * om * om * v1sq * v1sq,
    }
}

/// One sampled point of the unit curve.
#[derive(Debug, Clone, Copy)]
pub struct CurvePoint<T> {
    pub r: T,
    pub v1: T,
    pub v2: T,
}

/// Closed polyline tracing the full unit curve: the `+` branch from the
/// turning colatitude to its mirror, then the `-` branch back. The two
/// `v1 = 0` endpoints are included exactly once each.
#[derive(Debug, Clone)]
pub struct IndicatrixCurve<T> {
    pub eps: T,
    pub lat: T,
    pub points: Vec<CurvePoint<T>>,
}

/// Samples the closed unit curve with `2 * samples + 2` points.
pub fn indicatrix_curve<T: Real>(eps: T, lat: T, samples: usize) -> Result<IndicatrixCurve<T>> {
    check_eps(eps)?;
    check_lat(lat)?;
    if samples < 3 {
        return Err(Error::domain("need at least 3 samples per branch"));
    }
    let r_c = turning_colatitude(lat);
    let margin = T::of(EDGE_MARGIN);
    let lo = r_c + margin;
    let hi = T::PI() - r_c - margin;
    let mut points = Vec::with_capacity(2 * samples + 2);
    // top endpoint (v1 = 0 at r = turning)
    let (_, v2_top) = indicatrix_point(eps, lat, r_c, Branch::Plus)?;
    points.push(CurvePoint {
        r: r_c,
        v1: T::zero(),
        v2: v2_top,
    });
    let step = (hi - lo) / T::of((samples - 1) as f64);
    for i in 0..samples {
        let r = lo + step * T::of(i as f64);
        let (v1, v2) = indicatrix_point(eps, lat, r, Branch::Plus)?;
        points.push(CurvePoint { r, v1, v2 });
    }
    // bottom endpoint (v1 = 0 at r = pi - turning)
    let bottom_r = T::PI() - r_c;
    let (_, v2_bot) = indicatrix_point(eps, lat, bottom_r, Branch::Plus)?;
    points.push(CurvePoint {
        r: bottom_r,
        v1: T::zero(),
        v2: v2_bot,
    });
    for i in (0..samples).rev() {
        let r = lo + step * T::of(i as f64);
        let (v1, v2) = indicatrix_point(eps, lat, r, Branch::Minus)?;
        points.push(CurvePoint { r, v1, v2 });
    }
    Ok(IndicatrixCurve { eps, lat, points })
}

impl<T: Real> IndicatrixCurve<T> {
    /// Strict convexity of the polyline: every consecutive edge pair turns
    /// the same way. Returns the worst normalized cross product measured in
    /// the loop's own orientation (positive means uniformly convex) and the
    /// accumulated turning angle, `±2 pi` for a simple closed convex loop.
    pub fn convexity(&self) -> (T, T) {
        let n = self.points.len();
        let mut crosses = Vec::with_capacity(n);
        let mut turning = T::zero();
        for i in 0..n {
            let p0 = &self.points[i];
            let p1 = &self.points[(i + 1) % n];
            let p2 = &self.points[(i + 2) % n];
            let e1 = (p1.v1 - p0.v1, p1.v2 - p0.v2);
            let e2 = (p2.v1 - p1.v1, p2.v2 - p1.v2);
            let cross = e1.0 * e2.1 - e1.1 * e2.0;
            let dot = e1.0 * e2.0 + e1.1 * e2.1;
            let n1 = (e1.0 * e1.0 + e1.1 * e1.1).sqrt();
            let n2 = (e2.0 * e2.0 + e2.1 * e2.1).sqrt();
            crosses.push(cross / (n1 * n2));
            turning = turning + cross.atan2(dot);
        }
        let orient = if turning < T::zero() {
            -T::one()
        } else {
            T::one()
        };
        let min_cross = crosses
            .into_iter()
            .map(|c| c * orient)
            .fold(T::infinity(), T::min);
        (min_cross, turning)
    }

    /// Winding number of the polyline around the origin.
    pub fn winding_around_origin(&self) -> i32 {
        let n = self.points.len();
        let mut total = T::zero();
        for i in 0..n {
            let p = &self.points[i];
            let q = &self.points[(i + 1) % n];
            let cross = p.v1 * q.v2 - p.v2 * q.v1;
            let dot = p.v1 * q.v1 + p.v2 * q.v2;
            total = total + cross.atan2(dot);
        }
        (total / T::TAU()).round().as_f64() as i32
    }
}
