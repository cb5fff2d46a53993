//! Rotationally symmetric metrics on the 2-sphere of the form
//! `g = (1 + h(cos r))^2 dr^2 + sin^2(r) dtheta^2`, where `h` is odd with
//! `h(-1) = h(1) = 0`. For the admitted profile family every geodesic is a
//! simple closed curve of length `2 pi`; this module provides the metric,
//! its Gauss curvature, an admissibility report, and a fixed-step geodesic
//! integrator used to verify closure numerically.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::real::Real;

/// Profile function `h(x) = coeff * x * (1 - x^2)^n` on `[-1, 1]`.
///
/// The main deformation family is `n = 1` with `coeff = epsilon` in
/// `(0, 1/2)`; for `n >= 2` the coefficient is fixed to 1. Both choices keep
/// the Gauss curvature strictly positive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HParam<T> {
    coeff: T,
    exponent: u32,
}

impl<T: Real> HParam<T> {
    /// Degree-one profile `h(x) = epsilon * x (1 - x^2)`, `0 < epsilon < 1/2`.
    pub fn new(epsilon: T) -> Result<Self> {
        if !(epsilon > T::zero() && epsilon < T::half()) || !epsilon.is_finite() {
            return Err(Error::domain(format!(
                "epsilon must lie in (0, 1/2), got {}",
                epsilon.as_f64()
            )));
        }
        Ok(HParam {
            coeff: epsilon,
            exponent: 1,
        })
    }

    /// Higher-degree profile `h(x) = x (1 - x^2)^n`, `n >= 2`.
    pub fn family(n: u32) -> Result<Self> {
        if n < 2 {
            return Err(Error::domain("family exponent must be >= 2"));
        }
        Ok(HParam {
            coeff: T::one(),
            exponent: n,
        })
    }

    pub fn epsilon(&self) -> T {
        self.coeff
    }

    pub fn exponent(&self) -> u32 {
        self.exponent
    }

    /// `(h(x), h'(x))` for `x` in `[-1, 1]`.
    pub fn eval(&self, x: T) -> Result<(T, T)> {
        if !(x >= -T::one() && x <= T::one()) {
            return Err(Error::domain(format!(
                "profile argument {} outside [-1, 1]",
                x.as_f64()
            )));
        }
        Ok(self.eval_raw(x))
    }

    /// Evaluation without the domain check; callers pass `x = cos(...)`.
    #[inline]
    fn eval_raw(&self, x: T) -> (T, T) {
        let one_m_x2 = T::one() - x * x;
        let n = self.exponent;
        let pow_nm1 = one_m_x2.powi((n - 1) as i32);
        let pow_n = pow_nm1 * one_m_x2;
        let h = self.coeff * x * pow_n;
        // d/dx [x (1-x^2)^n] = (1-x^2)^(n-1) * (1 - (2n+1) x^2)
        let hp = self.coeff * pow_nm1 * (T::one() - T::of((2 * n + 1) as f64) * x * x);
        (h, hp)
    }
}

/// Gauss curvature from the metric itself:
/// `G = (1 + h - x h') / (1 + h)^3` at `x = cos r`.
pub fn gauss_curvature_general<T: Real>(h: &HParam<T>, x: T) -> Result<T> {
    let (hv, hp) = h.eval(x)?;
    let f = T::one() + hv;
    Ok((f - x * hp) / (f * f * f))
}

/// Closed rational form of the curvature for the degree-one family:
/// `G = (1 + 2 eps x^3) / (1 + eps x - eps x^3)^3`. Only defined for `n = 1`.
pub fn gauss_curvature_closed<T: Real>(h: &HParam<T>, x: T) -> Result<T> {
    if h.exponent != 1 {
        return Err(Error::domain(
            "closed-form curvature only applies to the degree-one profile",
        ));
    }
    if !(x >= -T::one() && x <= T::one()) {
        return Err(Error::domain(format!(
            "curvature argument {} outside [-1, 1]",
            x.as_f64()
        )));
    }
    let eps = h.coeff;
    let x3 = x * x * x;
    let num = T::one() + T::two() * eps * x3;
    let den = T::one() + eps * x - eps * x3;
    Ok(num / (den * den * den))
}

/// Gauss curvature at `x = cos r`; uses the closed rational form for the
/// degree-one family and the general route otherwise.
pub fn gauss_curvature<T: Real>(h: &HParam<T>, x: T) -> Result<T> {
    if h.exponent == 1 {
        gauss_curvature_closed(h, x)
    } else {
        gauss_curvature_general(h, x)
    }
}

/// One admissibility condition with its worst-case margin.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ConditionCheck {
    pub pass: bool,
    /// Positive margins mean headroom; for equality conditions this is the
    /// worst absolute deviation (0 when exact).
    pub margin: f64,
}

/// Grid report for the admissibility of `f = 1 + h`: oddness of `h`,
/// vanishing at the endpoints, `|h| < 1`, and `G > 0`.
#[derive(Debug, Clone, Serialize)]
pub struct DarbouxReport {
    pub oddness: ConditionCheck,
    pub endpoints: ConditionCheck,
    pub bounded: ConditionCheck,
    pub curvature_positive: ConditionCheck,
    pub grid_size: usize,
}

impl DarbouxReport {
    pub fn all_pass(&self) -> bool {
        self.oddness.pass
            && self.endpoints.pass
            && self.bounded.pass
            && self.curvature_positive.pass
    }
}

/// Checks the admissibility conditions on a symmetric grid of `grid_size`
/// points over `[-1, 1]` (`grid_size >= 3`).
pub fn darboux_check<T: Real>(h: &HParam<T>, grid_size: usize) -> Result<DarbouxReport> {
    if grid_size < 3 {
        return Err(Error::domain("grid_size must be at least 3"));
    }
    let mut odd_dev = T::zero();
    let mut max_abs_h = T::zero();
    let mut min_curv = T::infinity();
    for i in 0..grid_size {
        let x = -T::one() + T::two() * T::of(i as f64) / T::of((grid_size - 1) as f64);
        let x = x.min(T::one()).max(-T::one());
        let (hx, _) = h.eval(x)?;
        let (hmx, _) = h.eval(-x)?;
        odd_dev = odd_dev.max((hx + hmx).abs());
        max_abs_h = max_abs_h.max(hx.abs());
        min_curv = min_curv.min(gauss_curvature_general(h, x)?);
        if h.exponent == 1 {
            min_curv = min_curv.min(gauss_curvature_closed(h, x)?);
        }
    }
    let (h_at_1, _) = h.eval(T::one())?;
    let (h_at_m1, _) = h.eval(-T::one())?;
    let endpoint_dev = h_at_1.abs().max(h_at_m1.abs());
    Ok(DarbouxReport {
        oddness: ConditionCheck {
            pass: odd_dev == T::zero(),
            margin: odd_dev.as_f64(),
        },
        endpoints: ConditionCheck {
            pass: endpoint_dev == T::zero(),
            margin: endpoint_dev.as_f64(),
        },
        bounded: ConditionCheck {
            pass: max_abs_h < T::one(),
            margin: (T::one() - max_abs_h).as_f64(),
        },
        curvature_positive: ConditionCheck {
            pass: min_curv > T::zero(),
            margin: min_curv.as_f64(),
        },
        grid_size,
    })
}

/// The surface `(S^2, g)` for a fixed profile.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZollSurface<T> {
    pub h: HParam<T>,
}

impl<T: Real> ZollSurface<T> {
    pub fn new(h: HParam<T>) -> Self {
        ZollSurface { h }
    }

    /// Radial metric factor `f(r) = 1 + h(cos r)`.
    #[inline]
    pub fn metric_factor(&self, r: T) -> T {
        let (h, _) = self.h.eval_raw(r.cos());
        T::one() + h
    }

    /// `df/dr = -sin(r) h'(cos r)`.
    #[inline]
    pub fn metric_factor_deriv(&self, r: T) -> T {
        let (_, hp) = self.h.eval_raw(r.cos());
        -r.sin() * hp
    }
}

/// Phase-space point of the geodesic flow in chart coordinates, tagged with
/// the arclength at which it was reached.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GeodesicState<T> {
    pub r: T,
    pub theta: T,
    pub r_dot: T,
    pub theta_dot: T,
    pub arclength: T,
}

impl<T: Real> GeodesicState<T> {
    /// Unit-speed state at `(r, theta)` heading at angle `psi` measured from
    /// the radial direction (`psi = 0` is a meridian, `psi = pi/2` follows a
    /// parallel).
    pub fn from_direction(surface: &ZollSurface<T>, r: T, theta: T, psi: T) -> Result<Self> {
        let sin_r = r.sin();
        let sin_psi = psi.sin();
        if sin_r == T::zero() && sin_psi != T::zero() {
            return Err(Error::domain(
                "rotational component undefined at a pole; use psi = 0",
            ));
        }
        let theta_dot = if sin_psi == T::zero() {
            T::zero()
        } else {
            sin_psi / sin_r
        };
        Ok(GeodesicState {
            r,
            theta,
            r_dot: psi.cos() / surface.metric_factor(r),
            theta_dot,
            arclength: T::zero(),
        })
    }

    /// `f^2 r_dot^2 + sin^2(r) theta_dot^2`; equals 1 for unit-speed states.
    pub fn speed_sq(&self, surface: &ZollSurface<T>) -> T {
        let f = surface.metric_factor(self.r);
        let s = self.r.sin();
        f * f * self.r_dot * self.r_dot + s * s * self.theta_dot * self.theta_dot
    }

    /// Conserved rotational momentum `sin^2(r) theta_dot`.
    pub fn clairaut(&self) -> T {
        let s = self.r.sin();
        s * s * self.theta_dot
    }
}

/// Difference of two angles wrapped to `(-pi, pi]`.
pub fn wrap_angle<T: Real>(delta: T) -> T {
    let tau = T::TAU();
    let mut d = delta % tau;
    if d > T::PI() {
        d = d - tau;
    } else if d <= -T::PI() {
        d = d + tau;
    }
    d
}

/// Chart distance between two phase-space states, with `theta` compared on
/// the circle.
pub fn state_defect<T: Real>(a: &GeodesicState<T>, b: &GeodesicState<T>) -> T {
    let dr = b.r - a.r;
    let dth = wrap_angle(b.theta - a.theta);
    let drd = b.r_dot - a.r_dot;
    let dtd = b.theta_dot - a.theta_dot;
    (dr * dr + dth * dth + drd * drd + dtd * dtd).sqrt()
}

/// Chart distance between the first and last state of a trajectory.
pub fn closure_defect<T: Real>(traj: &[GeodesicState<T>]) -> T {
    match (traj.first(), traj.last()) {
        (Some(a), Some(b)) => state_defect(a, b),
        _ => T::zero(),
    }
}

const MAX_STEP: f64 = 1e-2;
const POLE_GUARD: f64 = 1e-9;

fn geodesic_rhs<T: Real>(surface: &ZollSurface<T>, y: [T; 4]) -> Result<[T; 4]> {
    let [r, _theta, r_dot, theta_dot] = y;
    let sin_r = r.sin();
    if sin_r.abs() < T::of(POLE_GUARD) {
        return Err(Error::domain(
            "trajectory reached a pole with nonzero rotation; meridians must start with theta_dot = 0",
        ));
    }
    let cos_r = r.cos();
    let f = surface.metric_factor(r);
    let fp = surface.metric_factor_deriv(r);
    Ok([
        r_dot,
        theta_dot,
        -(fp / f) * r_dot * r_dot + (sin_r * cos_r / (f * f)) * theta_dot * theta_dot,
        -T::two() * (cos_r / sin_r) * r_dot * theta_dot,
    ])
}

fn rk4_step<T: Real, F: Fn([T; 4]) -> Result<[T; 4]>>(f: &F, y: [T; 4], h: T) -> Result<[T; 4]> {
    let half = T::half();
    let k1 = f(y)?;
    let k2 = f(add(y, scale(k1, h * half)))?;
    let k3 = f(add(y, scale(k2, h * half)))?;
    let k4 = f(add(y, scale(k3, h)))?;
    let sixth = h / T::of(6.0);
    let mut out = y;
    for i in 0..4 {
        out[i] = y[i] + sixth * (k1[i] + T::two() * (k2[i] + k3[i]) + k4[i]);
    }
    Ok(out)
}

fn add<T: Real>(a: [T; 4], b: [T; 4]) -> [T; 4] {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3]]
}

fn scale<T: Real>(a: [T; 4], s: T) -> [T; 4] {
    [a[0] * s, a[1] * s, a[2] * s, a[3] * s]
}

/// Integrates the geodesic flow from `init` for the given arclength with a
/// fixed-step classical Runge–Kutta scheme, returning states at every step
/// (plus a final partial step so the trajectory ends exactly at `length`).
///
/// Initial data must be unit speed. Meridians (`theta_dot == 0`) pass
/// through the coordinate poles; they are integrated on the universal cover
/// of the radial line and folded back into the chart, which rotates `theta`
/// by `pi` at each pole crossing. Non-meridian trajectories stay away from
/// the poles (their rotational momentum bounds `sin r` from below).
pub fn integrate_geodesic<T: Real>(
    surface: &ZollSurface<T>,
    init: &GeodesicState<T>,
    length: T,
    step: T,
) -> Result<Vec<GeodesicState<T>>> {
    if !(step > T::zero() && step <= T::of(MAX_STEP)) {
        return Err(Error::domain(format!(
            "step must lie in (0, {MAX_STEP}], got {}",
            step.as_f64()
        )));
    }
    if !(length >= T::zero()) || !length.is_finite() {
        return Err(Error::domain("length must be finite and non-negative"));
    }
    let speed = init.speed_sq(surface);
    if (speed - T::one()).abs() > T::of(1e-6) {
        return Err(Error::domain(format!(
            "initial state is not unit speed (|v|^2 = {})",
            speed.as_f64()
        )));
    }
    if init.theta_dot == T::zero() {
        return integrate_meridian(surface, init, length, step);
    }

    let rhs = |y: [T; 4]| geodesic_rhs(surface, y);
    let mut y = [init.r, init.theta, init.r_dot, init.theta_dot];
    let mut s = T::zero();
    let mut out = Vec::with_capacity((length / step).as_f64() as usize + 2);
    out.push(GeodesicState {
        arclength: T::zero(),
        ..*init
    });
    while s < length {
        let h = step.min(length - s);
        if h <= T::zero() {
            break;
        }
        y = rk4_step(&rhs, y, h)?;
        s = s + h;
        out.push(GeodesicState {
            r: y[0],
            theta: y[1],
            r_dot: y[2],
            theta_dot: y[3],
            arclength: s,
        });
    }
    Ok(out)
}

/// Meridian flow on the universal cover: `rho` ranges over all of R with the
/// even extension of the metric factor, and the reported chart state folds
/// `rho` back into `[0, pi]`.
fn integrate_meridian<T: Real>(
    surface: &ZollSurface<T>,
    init: &GeodesicState<T>,
    length: T,
    step: T,
) -> Result<Vec<GeodesicState<T>>> {
    let rhs = |y: [T; 4]| -> Result<[T; 4]> {
        let f = surface.metric_factor(y[0]);
        let fp = surface.metric_factor_deriv(y[0]);
        Ok([y[1], -(fp / f) * y[1] * y[1], T::zero(), T::zero()])
    };
    let fold = |rho: T, rho_dot: T, s: T| -> GeodesicState<T> {
        let tau = T::TAU();
        let mut m = rho % tau;
        if m < T::zero() {
            m = m + tau;
        }
        let (r, theta, sign) = if m <= T::PI() {
            (m, init.theta, T::one())
        } else {
            (tau - m, wrap_positive(init.theta + T::PI()), -T::one())
        };
        GeodesicState {
            r,
            theta,
            r_dot: sign * rho_dot,
            theta_dot: T::zero(),
            arclength: s,
        }
    };
    let mut y = [init.r, init.r_dot, T::zero(), T::zero()];
    let mut s = T::zero();
    let mut out = vec![GeodesicState {
        arclength: T::zero(),
        ..*init
    }];
    while s < length {
        let h = step.min(length - s);
        if h <= T::zero() {
            break;
        }
        y = rk4_step(&rhs, y, h)?;
        s = s + h;
        out.push(fold(y[0], y[1], s));
    }
    Ok(out)
}

fn wrap_positive<T: Real>(theta: T) -> T {
    let tau = T::TAU();
    let mut t = theta % tau;
    if t < T::zero() {
        t = t + tau;
    }
    t
}

/// Locates the first arclength at which the trajectory returns to its
/// initial phase-space state, by scanning the closure defect along the flow
/// and refining the first captured minimum with a parabolic fit of the
/// squared defect. Returns `(length, defect at that length)`.
pub fn first_return_length<T: Real>(
    surface: &ZollSurface<T>,
    init: &GeodesicState<T>,
    step: T,
) -> Result<(T, T)> {
    let horizon = T::TAU() * T::of(1.1);
    let traj = integrate_geodesic(surface, init, horizon, step)?;
    let first = &traj[0];
    let defects: Vec<T> = traj.iter().map(|st| state_defect(first, st)).collect();
    let start = (T::one() / step).as_f64() as usize; // skip the trivial match at s = 0
    let capture = T::of(0.1);
    for i in start.max(1)..defects.len() - 1 {
        if defects[i] < capture && defects[i] <= defects[i - 1] && defects[i] <= defects[i + 1] {
            // vertex of the parabola through the squared defects
            let y1 = defects[i - 1] * defects[i - 1];
            let y2 = defects[i] * defects[i];
            let y3 = defects[i + 1] * defects[i + 1];
            let denom = y1 - T::two() * y2 + y3;
            let offset = if denom == T::zero() {
                T::zero()
            } else {
                T::half() * (y1 - y3) / denom
            };
            let length = traj[i].arclength + offset * step;
            let confirm = integrate_geodesic(surface, init, length, step)?;
            return Ok((length, closure_defect(&confirm)));
        }
    }
    Err(Error::domain(
        "no return to the initial state within 1.1 full periods",
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{PI, TAU};

    #[test]
    fn profile_values() {
        let h = HParam::new(0.25f64).unwrap();
        assert_eq!(h.eval(0.0).unwrap(), (0.0, 0.25));
        assert_eq!(h.eval(1.0).unwrap(), (0.0, -0.5));
        let h = HParam::new(0.1f64).unwrap();
        let (hv, hp) = h.eval(0.5).unwrap();
        assert!((hv - 0.0375).abs() < 1e-16);
        // h'(x) = eps (1 - 3 x^2)
        assert!((hp - 0.025).abs() < 1e-16);
    }

    #[test]
    fn profile_oddness_exact() {
        let h = HParam::new(0.3f64).unwrap();
        for &x in &[0.1, 0.33, 0.5, 0.77, 0.912, 1.0] {
            let (hp, _) = h.eval(x).unwrap();
            let (hm, _) = h.eval(-x).unwrap();
            assert_eq!(hp, -hm);
        }
    }

    #[test]
    fn profile_domain() {
        let h = HParam::new(0.2f64).unwrap();
        assert!(h.eval(1.0 + 1e-12).is_err());
        assert!(HParam::new(0.5f64).is_err());
        assert!(HParam::new(0.0f64).is_err());
        assert!(HParam::<f64>::family(1).is_err());
        assert!(HParam::<f64>::family(2).is_ok());
    }

    #[test]
    fn curvature_equator_is_one() {
        // At x = 0 the profile terms cancel: G = 1 for every epsilon.
        for &eps in &[0.05, 0.25, 0.45] {
            let h = HParam::new(eps as f64).unwrap();
            assert!((gauss_curvature(&h, 0.0).unwrap() - 1.0).abs() < 1e-15);
            assert!((gauss_curvature_general(&h, 0.0).unwrap() - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn curvature_at_pole() {
        // x = 1: numerator 1 + 2 eps, denominator (1 + eps - eps)^3 = 1.
        let h = HParam::new(0.25f64).unwrap();
        assert!((gauss_curvature(&h, 1.0).unwrap() - 1.5).abs() < 1e-15);
        assert!((gauss_curvature(&h, -1.0).unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn curvature_round_limit() {
        let h = HParam::new(1e-12f64).unwrap();
        for i in 0..10 {
            let x = -1.0 + 0.2 * i as f64;
            assert!((gauss_curvature(&h, x).unwrap() - 1.0).abs() < 1e-11);
        }
    }

    #[test]
    fn curvature_routes_agree() {
        for &eps in &[0.05, 0.25, 0.45, 0.499] {
            let h = HParam::new(eps as f64).unwrap();
            for i in 0..=200 {
                let x = -1.0 + i as f64 / 100.0;
                let a = gauss_curvature_closed(&h, x).unwrap();
                let b = gauss_curvature_general(&h, x).unwrap();
                assert!(
                    (a - b).abs() <= 1e-12 * a.abs().max(1.0),
                    "routes disagree at eps={eps}, x={x}: {a} vs {b}"
                );
            }
        }
    }

    #[test]
    fn darboux_reports() {
        let ok = darboux_check(&HParam::new(0.25f64).unwrap(), 101).unwrap();
        assert!(ok.all_pass(), "{ok:?}");
        assert!(ok.curvature_positive.margin > 0.0);
        let stress = darboux_check(&HParam::new(0.49f64).unwrap(), 101).unwrap();
        assert!(stress.all_pass(), "{stress:?}");
        let quartic_family = darboux_check(&HParam::<f64>::family(2).unwrap(), 101).unwrap();
        assert!(quartic_family.curvature_positive.pass, "{quartic_family:?}");
        assert!(darboux_check(&HParam::new(0.1f64).unwrap(), 2).is_err());
    }

    #[test]
    fn equator_closes_after_full_turn() {
        let surface = ZollSurface::new(HParam::new(0.25f64).unwrap());
        let init = GeodesicState::from_direction(&surface, PI / 2.0, 0.0, PI / 2.0).unwrap();
        let traj = integrate_geodesic(&surface, &init, TAU, 1e-3).unwrap();
        assert!(closure_defect(&traj) < 1e-6, "{}", closure_defect(&traj));
        let half = integrate_geodesic(&surface, &init, PI, 1e-3).unwrap();
        assert!((closure_defect(&half) - PI).abs() < 1e-6);
    }

    #[test]
    fn zero_length_trajectory() {
        let surface = ZollSurface::new(HParam::new(0.25f64).unwrap());
        let init = GeodesicState::from_direction(&surface, PI / 2.0, 0.3, PI / 2.0).unwrap();
        let traj = integrate_geodesic(&surface, &init, 0.0, 1e-3).unwrap();
        assert_eq!(traj.len(), 1);
        assert_eq!(closure_defect(&traj), 0.0);
    }

    #[test]
    fn meridian_passes_poles_and_closes() {
        let surface = ZollSurface::new(HParam::new(0.25f64).unwrap());
        let init = GeodesicState::from_direction(&surface, 1.0, 0.7, 0.0).unwrap();
        assert_eq!(init.theta_dot, 0.0);
        let traj = integrate_geodesic(&surface, &init, TAU, 1e-3).unwrap();
        assert!(
            closure_defect(&traj) < 1e-6,
            "meridian defect {}",
            closure_defect(&traj)
        );
        // mid-flight the trajectory must have visited the far side of the sphere
        let far = traj
            .iter()
            .any(|st| wrap_angle(st.theta - (init.theta + PI)).abs() < 1e-9);
        assert!(far, "meridian never crossed a pole");
    }

    #[test]
    fn invariant_drift_stays_small() {
        let surface = ZollSurface::new(HParam::new(0.4f64).unwrap());
        let init = GeodesicState::from_direction(&surface, 1.1, 0.2, 0.9).unwrap();
        let traj = integrate_geodesic(&surface, &init, TAU, 1e-3).unwrap();
        let c0 = init.clairaut();
        for st in &traj {
            assert!((st.speed_sq(&surface) - 1.0).abs() < 1e-9);
            assert!((st.clairaut() - c0).abs() < 1e-8);
        }
    }

    #[test]
    fn first_return_is_full_period() {
        let surface = ZollSurface::new(HParam::new(0.25f64).unwrap());
        let init = GeodesicState::from_direction(&surface, 1.2, 0.0, 0.8).unwrap();
        let (len, defect) = first_return_length(&surface, &init, 1e-3).unwrap();
        assert!((len - TAU).abs() < 1e-4, "first return at {len}");
        assert!(defect < 1e-5);
    }

    #[test]
    fn rejects_bad_integration_arguments() {
        let surface = ZollSurface::new(HParam::new(0.25f64).unwrap());
        let init = GeodesicState::from_direction(&surface, PI / 2.0, 0.0, PI / 2.0).unwrap();
        assert!(integrate_geodesic(&surface, &init, 1.0, 0.0).is_err());
        assert!(integrate_geodesic(&surface, &init, 1.0, 0.1).is_err());
        assert!(integrate_geodesic(&surface, &init, -1.0, 1e-3).is_err());
        let bad = GeodesicState {
            r_dot: 5.0,
            ..init
        };
        assert!(integrate_geodesic(&surface, &bad, 1.0, 1e-3).is_err());
    }
}
