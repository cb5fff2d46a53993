//! The Finsler norm on the manifold of geodesics, evaluated in closed
//! radicals, and numerical verification of the metric axioms.
//!
//! At a base latitude `lat` and fiber vector `(v1, v2)` the norm `F` is the
//! unique positive real root of the quartic assembled in
//! [`crate::indicatrix::quartic_coefficients`]. The evaluation path is the
//! radical one: depress the quartic, solve the resolvent cubic by Cardano,
//! and assemble `F = (±s1 ± s2 ± s3)/2 - B/(4A)` with the square-root
//! branches pinned by the `s1 s2 s3 = -beta` constraint. A Newton polish of
//! the same quartic serves as an independent oracle; its disagreement with
//! the radical value is reported as a trust signal.

use std::cell::RefCell;
use std::fmt;

use num_complex::Complex;

use crate::deriv;
use crate::error::{Error, Result};
use crate::indicatrix::{quartic_coefficients, QuarticCoeffs};
use crate::polyroots::{
    assemble_quartic_roots, polish_root, quartic_backward_error, solve_resolvent,
    DepressedQuartic, ResolventSolution,
};
use crate::real::Real;

/// Fiber vectors with `|v1| < RADIAL_DEGENERACY * |v|` are routed through the
/// exact quadratic factor `F^2 (A F^2 + B F + C)` instead of the radical
/// formula (there `D = E = 0` and the resolvent radicals degenerate to 0/0).
pub const RADIAL_DEGENERACY: f64 = 1e-10;

/// Relative backward-error budget for an accepted norm value.
pub const RESIDUAL_TOL: f64 = 1e-8;

/// Radical and Newton-polished values that differ by more than this
/// (relative) raise the distrust flag.
pub const POLISH_AGREEMENT: f64 = 1e-7;

/// Latitudes closer than this to the chart boundary are rejected by the
/// base-derivative stencils of the curvature computation.
pub const CURVATURE_LAT_MARGIN: f64 = 0.05;

/// Root multiset of the norm quartic.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RootSignature {
    /// Two real roots and a complex-conjugate pair.
    TwoRealTwoComplex { pos: usize, neg: usize, zero: usize },
    /// Four real roots.
    FourReal { pos: usize, neg: usize, zero: usize },
}

impl RootSignature {
    pub fn positive_count(&self) -> usize {
        match self {
            RootSignature::TwoRealTwoComplex { pos, .. } => *pos,
            RootSignature::FourReal { pos, .. } => *pos,
        }
    }
}

impl fmt::Display for RootSignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RootSignature::TwoRealTwoComplex { pos, neg, zero } => {
                write!(f, "two-real (+{pos} -{neg} 0:{zero}) + conjugate pair")
            }
            RootSignature::FourReal { pos, neg, zero } => {
                write!(f, "four-real (+{pos} -{neg} 0:{zero})")
            }
        }
    }
}

/// Result of one norm evaluation, with the intermediate radical data kept
/// for diagnostics.
#[derive(Debug, Clone)]
pub struct FinslerEval<T> {
    /// The norm value (positive).
    pub f: T,
    /// Backward error of `f` in the quartic, relative to the monomial scale.
    pub residual: T,
    /// Classification of the full root multiset.
    pub signature: RootSignature,
    pub depressed: DepressedQuartic<T>,
    pub resolvent: ResolventSolution<T>,
    /// `|radical - polished|`; infinite when the Newton oracle failed.
    pub polish_gap: T,
}

impl<T: Real> FinslerEval<T> {
    /// Whether the radical value and the Newton oracle agree.
    pub fn trusted(&self) -> bool {
        let tol = T::of(POLISH_AGREEMENT).max(T::epsilon() * T::of(2000.0));
        self.polish_gap <= tol * self.f.abs().max(T::one())
    }
}

fn check_inputs<T: Real>(eps: T, lat: T, v1: T, v2: T) -> Result<()> {
    if !(eps >= T::zero() && eps < T::half()) {
        return Err(Error::domain(format!(
            "deformation parameter {} outside [0, 1/2)",
            eps.as_f64()
        )));
    }
    if !(lat.abs() < T::FRAC_PI_2()) {
        return Err(Error::domain(format!(
            "latitude {} outside (-pi/2, pi/2)",
            lat.as_f64()
        )));
    }
    if ![v1, v2].iter().all(|x| x.is_finite()) {
        return Err(Error::domain("non-finite fiber vector"));
    }
    if v1 == T::zero() && v2 == T::zero() {
        return Err(Error::domain("norm undefined on the zero vector"));
    }
    Ok(())
}

fn classify_roots<T: Real>(roots: &[Complex<T>; 4]) -> RootSignature {
    let scale = roots
        .iter()
        .map(|z| z.norm())
        .fold(T::zero(), T::max)
        .max(T::one());
    let real_tol = T::of(1e-7) * scale;
    let zero_tol = T::of(1e-9) * scale;
    let (mut real, mut pos, mut neg, mut zero) = (0usize, 0usize, 0usize, 0usize);
    for z in roots {
        if z.im.abs() <= real_tol {
            real += 1;
            if z.re > zero_tol {
                pos += 1;
            } else if z.re < -zero_tol {
                neg += 1;
            } else {
                zero += 1;
            }
        }
    }
    if real >= 4 {
        RootSignature::FourReal { pos, neg, zero }
    } else {
        RootSignature::TwoRealTwoComplex { pos, neg, zero }
    }
}

/// Depresses the norm quartic (`A > 0` required).
pub fn depress<T: Real>(qc: &QuarticCoeffs<T>) -> Result<DepressedQuartic<T>> {
    if !(qc.a > T::zero()) {
        return Err(Error::domain("leading coefficient must be positive"));
    }
    DepressedQuartic::from_coeffs(qc.a, qc.b, qc.c, qc.d, qc.e)
}

/// Classifies the root multiset of a norm quartic.
pub fn root_classify<T: Real>(qc: &QuarticCoeffs<T>) -> Result<RootSignature> {
    let dq = depress(qc)?;
    let rs = solve_resolvent(dq.alpha, dq.beta, dq.gamma)?;
    Ok(classify_roots(&assemble_quartic_roots(&dq, &rs)))
}

/// Evaluates the norm at `(lat; v1, v2)` through the radical formula and
/// validates it against the Newton oracle.
pub fn f_eval<T: Real>(eps: T, lat: T, v1: T, v2: T) -> Result<FinslerEval<T>> {
    check_inputs(eps, lat, v1, v2)?;
    let qc = quartic_coefficients(eps, lat, v1, v2);
    let dq = depress(&qc)?;
    let rs = solve_resolvent(dq.alpha, dq.beta, dq.gamma)?;
    let roots = assemble_quartic_roots(&dq, &rs);
    let signature = classify_roots(&roots);

    let vnorm = v1.hypot(v2);
    let f = if v1.abs() < T::of(RADIAL_DEGENERACY) * vnorm
        || (qc.d == T::zero() && qc.e == T::zero())
    {
        // F^2 (A F^2 + B F + C): the positive root of the quadratic factor.
        // A > 0 and C < 0 make the discriminant positive.
        let disc = qc.b * qc.b - T::of(4.0) * qc.a * qc.c;
        (-qc.b + disc.sqrt()) / (T::two() * qc.a)
    } else {
        select_positive_root(&qc, &rs, &roots)?
    };

    let residual = quartic_backward_error(qc.a, qc.b, qc.c, qc.d, qc.e, f);
    let (polish_gap, polish_ok) = match polish_root(qc.a, qc.b, qc.c, qc.d, qc.e, f) {
        Ok(p) => ((p - f).abs(), true),
        Err(_) => (T::infinity(), false),
    };
    let residual_tol = T::of(RESIDUAL_TOL).max(T::epsilon() * T::of(200.0));
    if residual > residual_tol && !polish_ok {
        return Err(formula_branch(&qc, &rs, f, residual));
    }
    Ok(FinslerEval {
        f,
        residual,
        signature,
        depressed: dq,
        resolvent: rs,
        polish_gap,
    })
}

/// Picks the norm among the assembled roots: the largest positive real one.
///
/// In exact arithmetic the quartic has exactly one positive real root on
/// every nonzero fiber vector: the candidate small-root pair near the
/// `v1 = 0` stratum has discriminant `-4 eps^2 (1-m)^3 kappa v1^6 < 0`, so
/// it is a conjugate pair. In floating point that pair can sit below the
/// real/complex resolution threshold; taking the largest positive real
/// candidate is then still correct, because the spurious pair is smaller
/// than the norm by a factor `~ eps v1^2 / |v|^2`.
fn select_positive_root<T: Real>(
    qc: &QuarticCoeffs<T>,
    rs: &ResolventSolution<T>,
    roots: &[Complex<T>; 4],
) -> Result<T> {
    let scale = roots
        .iter()
        .map(|z| z.norm())
        .fold(T::zero(), T::max)
        .max(T::one());
    let real_tol = T::of(1e-7) * scale;
    let mut positive: Option<T> = None;
    for z in roots {
        if z.im.abs() <= real_tol && z.re > T::zero() && positive.is_none_or(|p| z.re > p) {
            positive = Some(z.re);
        }
    }
    positive.ok_or_else(|| formula_branch_msg(qc, rs, "no positive real root".into()))
}

fn formula_branch<T: Real>(
    qc: &QuarticCoeffs<T>,
    rs: &ResolventSolution<T>,
    f: T,
    residual: T,
) -> Error {
    formula_branch_msg(
        qc,
        rs,
        format!(
            "residual {:e} at F = {} exceeds tolerance after polishing",
            residual.as_f64(),
            f.as_f64()
        ),
    )
}

fn formula_branch_msg<T: Real>(
    qc: &QuarticCoeffs<T>,
    rs: &ResolventSolution<T>,
    msg: String,
) -> Error {
    Error::FormulaBranch {
        detail: format!(
            "{msg}; coefficients A={:e} B={:e} C={:e} D={:e} E={:e}; resolvent z1=({:e},{:e}) z2=({:e},{:e}) z3=({:e},{:e})",
            qc.a.as_f64(),
            qc.b.as_f64(),
            qc.c.as_f64(),
            qc.d.as_f64(),
            qc.e.as_f64(),
            rs.z1.re.as_f64(),
            rs.z1.im.as_f64(),
            rs.z2.re.as_f64(),
            rs.z2.im.as_f64(),
            rs.z3.re.as_f64(),
            rs.z3.im.as_f64(),
        ),
    }
}

/// Squared norm, the quantity differentiated by the metric tensor and the
/// curvature stencils.
pub fn norm_sq<T: Real>(eps: T, lat: T, v1: T, v2: T) -> Result<T> {
    let ev = f_eval(eps, lat, v1, v2)?;
    Ok(ev.f * ev.f)
}

/// Squared norm for difference stencils.
///
/// The raw radical value can carry square-root-of-cancellation noise near
/// the `beta = 0` strata (the first resolvent root is a difference of
/// nearly equal quantities there); the noise is tiny (~1e-9) but not smooth
/// in `v`, and second-derivative stencils divide it by `h^2`. Driving the
/// value to the Newton floor of the same quartic restores smoothness
/// without changing the function beyond the trust tolerance.
fn norm_sq_smooth<T: Real>(eps: T, lat: T, v1: T, v2: T) -> Result<T> {
    let ev = f_eval(eps, lat, v1, v2)?;
    let qc = quartic_coefficients(eps, lat, v1, v2);
    let f = newton_to_floor(&qc, ev.f);
    Ok(f * f)
}

/// Newton steps until the residual stops improving (at most 8).
fn newton_to_floor<T: Real>(qc: &QuarticCoeffs<T>, x0: T) -> T {
    let mut x = x0;
    let mut best = crate::polyroots::quartic_eval(qc.a, qc.b, qc.c, qc.d, qc.e, x)
        .0
        .abs();
    for _ in 0..8 {
        let (value, deriv, _) = crate::polyroots::quartic_eval(qc.a, qc.b, qc.c, qc.d, qc.e, x);
        if deriv == T::zero() || !deriv.is_finite() {
            break;
        }
        let next = x - value / deriv;
        let next_res = crate::polyroots::quartic_eval(qc.a, qc.b, qc.c, qc.d, qc.e, next)
            .0
            .abs();
        if !next.is_finite() || next_res >= best {
            break;
        }
        best = next_res;
        x = next;
    }
    x
}

/// Relative defect of positive 1-homogeneity,
/// `|F(lambda v) - lambda F(v)| / (lambda F(v))`.
pub fn homogeneity_defect<T: Real>(eps: T, lat: T, v1: T, v2: T, lambda: T) -> Result<T> {
    if !(lambda > T::zero()) {
        return Err(Error::domain("homogeneity factor must be positive"));
    }
    let base = f_eval(eps, lat, v1, v2)?.f;
    let scaled = f_eval(eps, lat, lambda * v1, lambda * v2)?.f;
    Ok((scaled - lambda * base).abs() / (lambda * base))
}

/// Symmetric 2x2 matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymMat2<T> {
    pub xx: T,
    pub xy: T,
    pub yy: T,
}

impl<T: Real> SymMat2<T> {
    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> (T, T) {
        let mean = (self.xx + self.yy) * T::half();
        let spread = ((self.xx - self.yy) * T::half()).hypot(self.xy);
        (mean - spread, mean + spread)
    }

    pub fn det(&self) -> T {
        self.xx * self.yy - self.xy * self.xy
    }
}

/// Captures the first error raised inside a finite-difference closure.
struct ErrCell(RefCell<Option<Error>>);

impl ErrCell {
    fn new() -> Self {
        ErrCell(RefCell::new(None))
    }

    fn wrap<T: Real>(&self, value: Result<T>) -> T {
        match value {
            Ok(v) => v,
            Err(e) => {
                self.0.borrow_mut().get_or_insert(e);
                T::nan()
            }
        }
    }

    fn take(&self) -> Option<Error> {
        self.0.borrow_mut().take()
    }
}

/// Fiber Hessian `(1/2) d^2 F^2 / dv_i dv_j` by Richardson-extrapolated
/// central differences with relative step `1e-4 |v|`; no definiteness check.
pub fn hessian_unchecked<T: Real>(eps: T, lat: T, v1: T, v2: T) -> Result<SymMat2<T>> {
    hessian_with_step(eps, lat, v1, v2, T::of(1e-4))
}

/// Fiber Hessian with a caller-chosen relative step.
pub fn hessian_with_step<T: Real>(
    eps: T,
    lat: T,
    v1: T,
    v2: T,
    rel_step: T,
) -> Result<SymMat2<T>> {
    check_inputs(eps, lat, v1, v2)?;
    let h = rel_step * v1.hypot(v2);
    let cell = ErrCell::new();
    let phi1 = |u: T| cell.wrap(norm_sq_smooth(eps, lat, u, v2));
    let xx = deriv::richardson_2nd(&phi1, v1, h);
    let phi2 = |u: T| cell.wrap(norm_sq_smooth(eps, lat, v1, u));
    let yy = deriv::richardson_2nd(&phi2, v2, h);
    let phi12 = |a: T, b: T| cell.wrap(norm_sq_smooth(eps, lat, a, b));
    let xy = deriv::richardson_mixed(&phi12, v1, v2, h, h);
    if let Some(e) = cell.take() {
        return Err(e);
    }
    let half = T::half();
    Ok(SymMat2 {
        xx: xx * half,
        xy: xy * half,
        yy: yy * half,
    })
}

/// Fiber Hessian with the strong-convexity check: a non-positive-definite
/// result is surfaced as an error carrying the eigenvalues.
pub fn hessian<T: Real>(eps: T, lat: T, v1: T, v2: T) -> Result<SymMat2<T>> {
    let g = hessian_unchecked(eps, lat, v1, v2)?;
    let (lo, hi) = g.eigenvalues();
    if !(lo > T::zero()) {
        return Err(Error::ConvexityViolation {
            lat: lat.as_f64(),
            v1: v1.as_f64(),
            v2: v2.as_f64(),
            eig_min: lo.as_f64(),
            eig_max: hi.as_f64(),
        });
    }
    Ok(g)
}

/// Step sizes of the curvature stencils. The inner steps differentiate the
/// squared norm; the outer steps differentiate the spray, whose own values
/// already carry inner-stencil noise, so they are taken larger. Latitude
/// steps additionally shrink with the metric scale `cos(lat)`.
///
/// With the default steps the measured accuracy of the curvature is a few
/// parts in 1e4 for `|lat| <= 1.1` over the full admitted deformation
/// range, degrading to ~1e-2 at the chart margin where the inverse metric
/// amplifies stencil noise.
#[derive(Debug, Clone, Copy)]
pub struct CurvatureScheme<T> {
    /// Base-coordinate step of the squared-norm stencils inside the spray.
    pub inner_base: T,
    /// Relative fiber step of the squared-norm stencils inside the spray.
    pub inner_fiber: T,
    /// Step of the first derivatives of the spray.
    pub outer_first: T,
    /// Step of the second derivatives of the spray.
    pub outer_second: T,
}

impl<T: Real> Default for CurvatureScheme<T> {
    fn default() -> Self {
        CurvatureScheme {
            inner_base: T::of(1e-3),
            inner_fiber: T::of(1e-3),
            outer_first: T::of(2e-3),
            outer_second: T::of(2e-2),
        }
    }
}

/// Geodesic spray coefficients `G^i = (1/4) g^{il} [ (F^2)_{v_l lat} v1 - delta_l^1 (F^2)_lat ]`
/// (the rotation coordinate never enters: the norm is rotationally
/// invariant, so all `theta` derivatives vanish).
fn spray<T: Real>(eps: T, lat: T, v1: T, v2: T, scheme: &CurvatureScheme<T>) -> Result<[T; 2]> {
    let g = hessian_with_step(eps, lat, v1, v2, scheme.inner_fiber)?;
    // latitude stencils shrink with the metric scale cos(lat) so that the
    // truncation error stays uniform up to the chart margin
    let hb = scheme.inner_base * lat.cos();
    let hf = scheme.inner_fiber * v1.hypot(v2);
    let cell = ErrCell::new();
    let phi_lat = |l: T| cell.wrap(norm_sq_smooth(eps, l, v1, v2));
    let phi_r = deriv::richardson_1st(&phi_lat, lat, hb);
    let phi_lv1 = |l: T, u: T| cell.wrap(norm_sq_smooth(eps, l, u, v2));
    let phi_v1r = deriv::richardson_mixed(&phi_lv1, lat, v1, hb, hf);
    let phi_lv2 = |l: T, u: T| cell.wrap(norm_sq_smooth(eps, l, v1, u));
    let phi_v2r = deriv::richardson_mixed(&phi_lv2, lat, v2, hb, hf);
    if let Some(e) = cell.take() {
        return Err(e);
    }
    let rhs1 = phi_v1r * v1 - phi_r;
    let rhs2 = phi_v2r * v1;
    // G^i = (1/4) g^{il} rhs_l with g the *metric* tensor (half the Hessian
    // of F^2), so in terms of that Hessian H the factor is (1/2) H^{-1}.
    // Round-sphere check: F^2 = v1^2 + v2^2 cos^2(lat) must give
    // G^1 = (1/2) sin(lat) cos(lat) v2^2, G^2 = -tan(lat) v1 v2.
    let det_h = g.det() * T::of(4.0);
    let half = T::half();
    let h11 = T::two() * g.xx;
    let h12 = T::two() * g.xy;
    let h22 = T::two() * g.yy;
    Ok([
        half * (h22 * rhs1 - h12 * rhs2) / det_h,
        half * (h11 * rhs2 - h12 * rhs1) / det_h,
    ])
}

/// Flag curvature at base point `(lat, theta)` in fiber direction `(v1, v2)`
/// by the spray-coefficient formula
/// `R^i_k = 2 dG^i/dx^k - v^j d2G^i/(dx^j dv^k) + 2 G^j d2G^i/(dv^j dv^k) - dG^i/dv^j dG^j/dv^k`,
/// `K = (R^1_1 + R^2_2) / F^2`. The rotation coordinate `theta` is accepted
/// for interface symmetry and never used.
pub fn flag_curvature<T: Real>(eps: T, lat: T, _theta: T, v1: T, v2: T) -> Result<T> {
    flag_curvature_with(eps, lat, v1, v2, &CurvatureScheme::default())
}

pub fn flag_curvature_with<T: Real>(
    eps: T,
    lat: T,
    v1: T,
    v2: T,
    scheme: &CurvatureScheme<T>,
) -> Result<T> {
    check_inputs(eps, lat, v1, v2)?;
    if lat.abs() > T::FRAC_PI_2() - T::of(CURVATURE_LAT_MARGIN) {
        return Err(Error::domain(
            "base point too close to the chart boundary for curvature stencils",
        ));
    }
    let vnorm = v1.hypot(v2);
    let lat_scale = lat.cos();
    let h1 = scheme.outer_first * lat_scale;
    let h1f = scheme.outer_first * vnorm;
    let h2 = scheme.outer_second * lat_scale;
    let h2f = scheme.outer_second * vnorm;

    let cell = RefCell::new(None::<Error>);
    let g_at = |l: T, a: T, b: T| -> [T; 2] {
        match spray(eps, l, a, b, scheme) {
            Ok(v) => v,
            Err(e) => {
                cell.borrow_mut().get_or_insert(e);
                [T::nan(), T::nan()]
            }
        }
    };

    let g0 = g_at(lat, v1, v2);

    // component-wise Richardson helpers over the spray
    let d1 = |f: &dyn Fn(T) -> [T; 2], x: T, h: T| -> [T; 2] {
        let coarse = [
            (f(x + h)[0] - f(x - h)[0]) / (T::two() * h),
            (f(x + h)[1] - f(x - h)[1]) / (T::two() * h),
        ];
        let hh = h * T::half();
        let fine = [
            (f(x + hh)[0] - f(x - hh)[0]) / (T::two() * hh),
            (f(x + hh)[1] - f(x - hh)[1]) / (T::two() * hh),
        ];
        [
            (T::of(4.0) * fine[0] - coarse[0]) / T::of(3.0),
            (T::of(4.0) * fine[1] - coarse[1]) / T::of(3.0),
        ]
    };
    let d2_raw = |f: &dyn Fn(T) -> [T; 2], x: T, h: T| -> [T; 2] {
        let c0 = f(x);
        [
            (f(x + h)[0] - T::two() * c0[0] + f(x - h)[0]) / (h * h),
            (f(x + h)[1] - T::two() * c0[1] + f(x - h)[1]) / (h * h),
        ]
    };
    let d2 = |f: &dyn Fn(T) -> [T; 2], x: T, h: T| -> [T; 2] {
        let coarse = d2_raw(f, x, h);
        let fine = d2_raw(f, x, h * T::half());
        [
            (T::of(4.0) * fine[0] - coarse[0]) / T::of(3.0),
            (T::of(4.0) * fine[1] - coarse[1]) / T::of(3.0),
        ]
    };
    let dmix_raw = |f: &dyn Fn(T, T) -> [T; 2], x: T, y: T, hx: T, hy: T| -> [T; 2] {
        let pp = f(x + hx, y + hy);
        let pm = f(x + hx, y - hy);
        let mp = f(x - hx, y + hy);
        let mm = f(x - hx, y - hy);
        let s = T::of(4.0) * hx * hy;
        [
            (pp[0] - pm[0] - mp[0] + mm[0]) / s,
            (pp[1] - pm[1] - mp[1] + mm[1]) / s,
        ]
    };
    let dmix = |f: &dyn Fn(T, T) -> [T; 2], x: T, y: T, hx: T, hy: T| -> [T; 2] {
        let coarse = dmix_raw(f, x, y, hx, hy);
        let fine = dmix_raw(f, x, y, hx * T::half(), hy * T::half());
        [
            (T::of(4.0) * fine[0] - coarse[0]) / T::of(3.0),
            (T::of(4.0) * fine[1] - coarse[1]) / T::of(3.0),
        ]
    };

    let over_lat = |l: T| g_at(l, v1, v2);
    let over_v1 = |u: T| g_at(lat, u, v2);
    let over_v2 = |u: T| g_at(lat, v1, u);
    let over_lat_v1 = |l: T, u: T| g_at(l, u, v2);
    let over_lat_v2 = |l: T, u: T| g_at(l, v1, u);
    let over_v1_v2 = |a: T, b: T| g_at(lat, a, b);

    let dg_dlat = d1(&over_lat, lat, h1);
    let dg_dv1 = d1(&over_v1, v1, h1f);
    let dg_dv2 = d1(&over_v2, v2, h1f);
    let d2g_lat_v1 = dmix(&over_lat_v1, lat, v1, h2, h2f);
    let d2g_lat_v2 = dmix(&over_lat_v2, lat, v2, h2, h2f);
    let d2g_v1v1 = d2(&over_v1, v1, h2f);
    let d2g_v2v2 = d2(&over_v2, v2, h2f);
    let d2g_v1v2 = dmix(&over_v1_v2, v1, v2, h2f, h2f);

    if let Some(e) = cell.borrow_mut().take() {
        return Err(e);
    }

    let term1 = T::two() * dg_dlat[0];
    let term2 = v1 * (d2g_lat_v1[0] + d2g_lat_v2[1]);
    let term3 = T::two()
        * (g0[0] * (d2g_v1v1[0] + d2g_v1v2[1]) + g0[1] * (d2g_v1v2[0] + d2g_v2v2[1]));
    let term4 = dg_dv1[0] * dg_dv1[0]
        + T::two() * dg_dv2[0] * dg_dv1[1]
        + dg_dv2[1] * dg_dv2[1];
    let trace = term1 - term2 + term3 - term4;
    let k = trace / norm_sq(eps, lat, v1, v2)?;
    if !k.is_finite() {
        return Err(Error::domain("curvature stencil produced a non-finite value"));
    }
    Ok(k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::indicatrix::{indicatrix_point, Branch};
    use crate::real::linspace;
    use std::f64::consts::PI;

    #[test]
    fn depress_requires_positive_leading() {
        let qc = QuarticCoeffs {
            a: -1.0,
            b: 0.0,
            c: 0.0,
            d: 0.0,
            e: 0.0,
        };
        assert!(depress(&qc).is_err());
    }

    #[test]
    fn depress_structural_parity() {
        // alpha even in (v1, v2), beta odd in v2 / even in v1, gamma even.
        let (eps, lat, v1, v2) = (0.3f64, 0.4, 0.8, -1.3);
        let d0 = depress(&quartic_coefficients(eps, lat, v1, v2)).unwrap();
        let dv1 = depress(&quartic_coefficients(eps, lat, -v1, v2)).unwrap();
        let dv2 = depress(&quartic_coefficients(eps, lat, v1, -v2)).unwrap();
        let close = |a: f64, b: f64| (a - b).abs() <= 1e-12 * b.abs().max(1e-12);
        assert!(close(dv1.alpha, d0.alpha) && close(dv2.alpha, d0.alpha));
        assert!(close(dv1.beta, d0.beta) && close(dv2.beta, -d0.beta));
        assert!(close(dv1.gamma, d0.gamma) && close(dv2.gamma, d0.gamma));
        // degrees 2, 3, 4 under scaling
        let lam = 3.0f64;
        let ds = depress(&quartic_coefficients(eps, lat, lam * v1, lam * v2)).unwrap();
        assert!(close(ds.alpha, lam.powi(2) * d0.alpha));
        assert!(close(ds.beta, lam.powi(3) * d0.beta));
        assert!(close(ds.gamma, lam.powi(4) * d0.gamma));
    }

    #[test]
    fn depress_reconstruction_on_geometric_coefficients() {
        let qc = quartic_coefficients(0.25f64, 0.3, 0.2, 0.9);
        let dq = depress(&qc).unwrap();
        let (b, c, d, e) = dq.reconstruct_monic();
        let close = |got: f64, want: f64| (got - want).abs() <= 1e-12 * want.abs().max(1.0);
        assert!(close(qc.a * b, qc.b));
        assert!(close(qc.a * c, qc.c));
        assert!(close(qc.a * d, qc.d));
        assert!(close(qc.a * e, qc.e));
    }

    #[test]
    fn norm_is_one_on_the_unit_curve() {
        for &eps in &[0.05f64, 0.25, 0.45] {
            for &lat in &[-1.1f64, -0.3, 0.0, 0.4, 1.2] {
                let r_c = lat.abs();
                for r in linspace(r_c + 1e-4, PI - r_c - 1e-4, 17) {
                    for branch in [Branch::Plus, Branch::Minus] {
                        let (v1, v2) = indicatrix_point(eps, lat, r, branch).unwrap();
                        let ev = f_eval(eps, lat, v1, v2).unwrap();
                        assert!(
                            (ev.f - 1.0).abs() < 1e-8,
                            "F = {} at eps={eps}, lat={lat}, r={r}",
                            ev.f
                        );
                        assert!(ev.residual < 1e-8);
                        assert!(ev.trusted());
                    }
                }
            }
        }
    }

    #[test]
    fn equatorial_circle_parametrization() {
        let eps = 0.25f64;
        for t in linspace(0.01f64, PI - 0.01, 40) {
            let v1 = t.sin();
            let v2 = t.cos() - eps * t.sin() * t.sin();
            let ev = f_eval(eps, 0.0, v1, v2).unwrap();
            assert!((ev.f - 1.0).abs() < 1e-10, "F = {} at t = {t}", ev.f);
        }
    }

    #[test]
    fn radial_stratum_uses_quadratic_factor() {
        let (eps, lat) = (0.25f64, 0.4);
        for &v2 in &[0.5f64, 1.0, 3.0] {
            let ev = f_eval(eps, lat, 0.0, v2).unwrap();
            let qc = quartic_coefficients(eps, lat, 0.0, v2);
            let want = (-qc.b + (qc.b * qc.b - 4.0 * qc.a * qc.c).sqrt()) / (2.0 * qc.a);
            assert_eq!(ev.f, want);
            assert!(ev.f > 0.0);
        }
        // the radical path converges to the same value as v1 -> 0
        let near = f_eval(eps, lat, 1e-7, 1.0).unwrap();
        let exact = f_eval(eps, lat, 0.0, 1.0).unwrap();
        assert!((near.f - exact.f).abs() < 1e-9);
    }

    #[test]
    fn round_sphere_limit_is_elliptic_norm() {
        let eps = 1e-9f64;
        for &lat in &[0.0f64, 0.5, -1.0] {
            for t in linspace(0.0f64, 6.2, 23) {
                let (v1, v2) = (1.7 * t.cos(), 1.7 * t.sin());
                if v1.abs() + v2.abs() < 1e-12 {
                    continue;
                }
                let ev = f_eval(eps, lat, v1, v2).unwrap();
                let want = (v1 * v1 + v2 * v2 * lat.cos() * lat.cos()).sqrt();
                assert!(
                    (ev.f - want).abs() < 1e-6,
                    "F = {} vs {} at lat={lat}, t={t}",
                    ev.f,
                    want
                );
            }
        }
    }

    #[test]
    fn negative_v2_half_plane() {
        // lower arc of the unit curve: beta > 0, the branch flip must engage
        let eps = 0.25f64;
        let t = 3.0 * PI / 4.0;
        let v1 = t.sin();
        let v2 = t.cos() - eps * t.sin() * t.sin();
        assert!(v2 < 0.0);
        let ev = f_eval(eps, 0.0, v1, v2).unwrap();
        assert!((ev.f - 1.0).abs() < 1e-10);
        let dq = &ev.depressed;
        assert!(dq.beta > 0.0, "expected the flipped-branch regime");
    }

    #[test]
    fn homogeneity() {
        let (eps, lat, v1, v2) = (0.3f64, -0.6, 0.7, -0.9);
        assert_eq!(homogeneity_defect(eps, lat, v1, v2, 1.0).unwrap(), 0.0);
        for &lam in &[1e-3f64, 0.5, 2.0, 1e3] {
            let d = homogeneity_defect(eps, lat, v1, v2, lam).unwrap();
            assert!(d < 1e-9, "defect {d:e} at lambda={lam}");
        }
        assert!(homogeneity_defect(eps, lat, v1, v2, 0.0).is_err());
    }

    #[test]
    fn rotational_invariance_is_bitwise() {
        let (eps, lat, v1, v2) = (0.25f64, 0.35, 0.4, 0.8);
        let a = flag_curvature(eps, lat, 0.0, v1, v2).unwrap();
        let b = flag_curvature(eps, lat, 2.5, v1, v2).unwrap();
        assert_eq!(a.to_bits(), b.to_bits());
    }

    #[test]
    fn hessian_round_limits() {
        // eps -> 0, lat = 0: F^2 = v1^2 + v2^2, Hessian of F^2/2 = identity
        let g = hessian(1e-9f64, 0.0, 0.6, -0.4).unwrap();
        assert!((g.xx - 1.0).abs() < 1e-6);
        assert!((g.yy - 1.0).abs() < 1e-6);
        assert!(g.xy.abs() < 1e-6);
        // general lat: diag(1, cos^2 lat)
        let lat = 0.8f64;
        let g = hessian(1e-9f64, lat, 0.3, 0.9).unwrap();
        assert!((g.xx - 1.0).abs() < 1e-5);
        assert!((g.yy - lat.cos() * lat.cos()).abs() < 1e-5);
        assert!(g.xy.abs() < 1e-5);
    }

    #[test]
    fn hessian_constant_along_rays_and_smooth_across_directions() {
        // entries of the metric tensor are 0-homogeneous: constant on rays
        let (eps, lat) = (0.3f64, 0.4);
        let g1 = hessian_unchecked(eps, lat, 0.6, 0.5).unwrap();
        let g2 = hessian_unchecked(eps, lat, 3.0, 2.5).unwrap();
        assert!((g1.xx - g2.xx).abs() < 1e-5);
        assert!((g1.xy - g2.xy).abs() < 1e-5);
        assert!((g1.yy - g2.yy).abs() < 1e-5);
        // across directions they vary with bounded difference quotient
        let dang = 1e-3f64;
        for k in 0..12 {
            let ang = 0.2 + k as f64 * std::f64::consts::TAU / 12.0;
            let ga = hessian_unchecked(eps, lat, ang.cos(), ang.sin()).unwrap();
            let gb =
                hessian_unchecked(eps, lat, (ang + dang).cos(), (ang + dang).sin()).unwrap();
            for (a, b) in [(ga.xx, gb.xx), (ga.xy, gb.xy), (ga.yy, gb.yy)] {
                assert!(((b - a) / dang).abs() < 10.0, "entry jump at ang={ang}");
            }
        }
    }

    #[test]
    fn generic_scalar_norm_in_single_precision() {
        // the radical pipeline is scalar-generic; f32 keeps ~5 digits
        let ev = f_eval(0.25f32, 0.0, 0.5f32, 0.62f32).unwrap();
        let ev64 = f_eval(0.25f64, 0.0, 0.5, 0.62).unwrap();
        assert!((ev.f as f64 - ev64.f).abs() < 1e-4, "{} vs {}", ev.f, ev64.f);
    }

    #[test]
    fn hessian_positive_definite_on_curve() {
        let (eps, lat) = (0.25f64, 0.3);
        for r in linspace(lat + 0.05, PI - lat - 0.05, 9) {
            let (v1, v2) = indicatrix_point(eps, lat, r, Branch::Plus).unwrap();
            let g = hessian(eps, lat, v1, v2).unwrap();
            let (lo, _) = g.eigenvalues();
            assert!(lo > 0.0, "eig {lo} at r={r}");
        }
    }

    #[test]
    fn root_census_on_random_fiber_vectors() {
        let mut state = 0xfeedface12345678u64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state >> 11) as f64 / (1u64 << 53) as f64
        };
        for _ in 0..2000 {
            let eps = 0.01 + 0.48 * next();
            let lat = -1.4 + 2.8 * next();
            let ang = next() * std::f64::consts::TAU;
            let len = 0.1 + 5.0 * next();
            let (v1, v2) = (len * ang.cos(), len * ang.sin());
            if v1.abs() < 0.05 * len {
                // near the radial stratum the conjugate small-root pair sits
                // below f64 real/complex resolution; census not meaningful
                continue;
            }
            let qc = quartic_coefficients(eps, lat, v1, v2);
            let sig = root_classify(&qc).unwrap();
            assert_eq!(
                sig.positive_count(),
                1,
                "positive-root census broken at eps={eps} lat={lat} v=({v1},{v2}): {sig}"
            );
            // product of roots E/A < 0 for v1 != 0
            assert!(qc.e / qc.a < 0.0);
        }
    }

    #[test]
    fn radial_stratum_signature() {
        let qc = quartic_coefficients(0.25f64, 0.2, 0.0, 1.0);
        let sig = root_classify(&qc).unwrap();
        match sig {
            RootSignature::FourReal { pos, neg, zero } => {
                assert_eq!((pos, neg, zero), (1, 1, 2), "{sig}");
            }
            other => panic!("expected double zero + real pair, got {other}"),
        }
    }

    #[test]
    fn second_radical_matches_conjugate_combination() {
        // where the resolvent has a conjugate pair, sqrt(-z2)+sqrt(-z3) must
        // equal the closed real combination
        let mut state = 0xabcdef0987654321u64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state >> 11) as f64 / (1u64 << 53) as f64
        };
        let mut seen = 0;
        for _ in 0..500 {
            let eps = 0.01 + 0.48 * next();
            let lat = -1.3 + 2.6 * next();
            let ang = next() * std::f64::consts::TAU;
            let (v1, v2) = (2.0 * ang.cos(), 2.0 * ang.sin());
            let ev = match f_eval(eps, lat, v1, v2) {
                Ok(ev) => ev,
                Err(_) => continue,
            };
            let rs = &ev.resolvent;
            if rs.cal_b <= 0.0 {
                continue; // all-real regime
            }
            seen += 1;
            let direct = ((-rs.z2).sqrt() + (-rs.z3).sqrt()).re;
            let combined =
                crate::polyroots::combine_conjugate_sqrts((-rs.z2).re, (-rs.z2).im);
            assert!(
                (direct - combined).abs() <= 1e-12 * combined.abs().max(1.0),
                "second radical {direct} vs combination {combined}"
            );
        }
        assert!(seen > 50, "conjugate-pair regime under-sampled: {seen}");
    }

    #[test]
    fn flag_curvature_round_limit() {
        let k = flag_curvature(1e-9f64, 0.3, 0.0, 0.5, 0.8).unwrap();
        assert!((k - 1.0).abs() < 1e-3, "K = {k}");
    }

    #[test]
    fn flag_curvature_is_one() {
        for &(eps, lat) in &[(0.25f64, 0.2f64), (0.4, -0.5)] {
            for &ang in &[0.3f64, 1.2, 2.1, 4.0, 5.5] {
                let (v1, v2) = (ang.cos(), ang.sin());
                let k = flag_curvature(eps, lat, 0.0, v1, v2).unwrap();
                assert!(
                    (k - 1.0).abs() < 1e-3,
                    "K = {k} at eps={eps}, lat={lat}, ang={ang}"
                );
            }
        }
    }

    #[test]
    fn curvature_rejects_chart_margin() {
        assert!(flag_curvature(0.25f64, 1.55, 0.0, 0.5, 0.5).is_err());
    }

    #[test]
    fn input_validation() {
        assert!(f_eval(0.5f64, 0.0, 1.0, 0.0).is_err());
        assert!(f_eval(-0.1f64, 0.0, 1.0, 0.0).is_err());
        assert!(f_eval(0.25f64, 1.6, 1.0, 0.0).is_err());
        assert!(f_eval(0.25f64, 0.0, 0.0, 0.0).is_err());
        assert!(f_eval(0.25f64, 0.0, f64::NAN, 1.0).is_err());
    }
}
