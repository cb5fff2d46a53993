//! Machine-checkable verification suite.
//!
//! Ten criteria cover the whole pipeline: curvature positivity and the
//! agreement of its two evaluation routes, the parametric/implicit curve
//! identity, the integral identity, correctness of the radical norm against
//! the Newton oracle, coefficient sign structure, the metric axioms
//! (homogeneity and strong convexity), constant flag curvature, geodesic
//! closure at the common length, the round-sphere limit, and the quartic
//! solver oracle. Every tolerance is pinned here; callers may only tighten
//! or loosen them explicitly by name.

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_PI_2, PI, TAU};

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::finsler::{
    f_eval, flag_curvature, hessian_unchecked, homogeneity_defect, root_classify,
};
use crate::indicatrix::{
    appendix_integral, implicit_residual, indicatrix_curve, indicatrix_point,
    quartic_coefficients, turning_colatitude, Branch, EDGE_MARGIN,
};
use crate::polyroots::{polish_root, quartic_backward_error, solve_quartic, solve_resolvent};
use crate::real::linspace;
use crate::zoll::{
    closure_defect, first_return_length, gauss_curvature_closed, gauss_curvature_general,
    integrate_geodesic, GeodesicState, HParam, ZollSurface,
};

/// Named tolerances with their pinned defaults.
#[derive(Debug, Clone)]
pub struct Tolerances {
    map: BTreeMap<String, f64>,
}

pub const TOLERANCE_DEFAULTS: &[(&str, f64)] = &[
    ("curvature_route_agreement", 1e-12),
    ("parametric_implicit", 1e-10),
    ("appendix_integral", 1e-8),
    ("f_backward", 1e-8),
    ("f_polish", 1e-7),
    ("f_indicatrix", 1e-8),
    ("resolvent_vieta", 1e-9),
    ("homogeneity", 1e-8),
    ("flag_curvature", 1e-3),
    ("closure", 1e-5),
    ("first_return", 1e-4),
    ("round_sphere", 1e-6),
    ("quartic_match", 1e-8),
    ("quartic_residual", 1e-8),
];

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            map: TOLERANCE_DEFAULTS
                .iter()
                .map(|&(k, v)| (k.to_string(), v))
                .collect(),
        }
    }
}

impl Tolerances {
    pub fn get(&self, name: &str) -> f64 {
        self.map[name]
    }

    /// Overrides one named tolerance; unknown names are rejected.
    pub fn set(&mut self, name: &str, value: f64) -> Result<()> {
        if !self.map.contains_key(name) {
            return Err(Error::Config(format!(
                "unknown tolerance '{name}' (known: {})",
                self.map
                    .keys()
                    .cloned()
                    .collect::<Vec<_>>()
                    .join(", ")
            )));
        }
        if !(value > 0.0) {
            return Err(Error::Config("tolerance must be positive".into()));
        }
        self.map.insert(name.to_string(), value);
        Ok(())
    }

    pub fn entries(&self) -> impl Iterator<Item = (&str, f64)> {
        self.map.iter().map(|(k, &v)| (k.as_str(), v))
    }
}

/// Outcome of one criterion.
#[derive(Debug, Clone, Serialize)]
pub struct CriterionReport {
    pub id: u32,
    pub name: String,
    pub pass: bool,
    /// Positive headroom when passing; how far past the threshold when not.
    pub margin: f64,
    pub detail: String,
}

impl CriterionReport {
    pub fn line(&self) -> String {
        format!(
            "{} [{:2}] {:<28} margin={:+.3e}  {}",
            if self.pass { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.margin,
            self.detail
        )
    }
}

/// Full suite outcome.
#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub seed: u64,
    pub criteria: Vec<CriterionReport>,
    pub all_pass: bool,
}

/// Runs all ten criteria.
pub fn run_suite(tol: &Tolerances, seed: u64) -> SuiteReport {
    let criteria: Vec<CriterionReport> = (1..=10).map(|id| run_criterion(id, tol, seed)).collect();
    let all_pass = criteria.iter().all(|c| c.pass);
    SuiteReport {
        seed,
        criteria,
        all_pass,
    }
}

/// Runs one criterion by number (1 through 10).
pub fn run_criterion(id: u32, tol: &Tolerances, seed: u64) -> CriterionReport {
    match id {
        1 => curvature_positivity(tol),
        2 => parametric_implicit(tol),
        3 => integral_identity(tol),
        4 => radical_correctness(tol, seed),
        5 => sign_structure(tol, seed),
        6 => metric_axioms(tol, seed),
        7 => constant_flag_curvature(tol, seed),
        8 => geodesic_closure(tol, seed),
        9 => round_sphere_limit(tol, seed),
        10 => quartic_oracle(tol, seed),
        _ => CriterionReport {
            id,
            name: "unknown".into(),
            pass: false,
            margin: f64::NEG_INFINITY,
            detail: format!("no criterion #{id}"),
        },
    }
}

const EPS_GRID_SMALL: [f64; 3] = [0.05, 0.25, 0.45];
const EPS_GRID_FULL: [f64; 5] = [0.05, 0.1, 0.25, 0.4, 0.45];
const EPS_GRID_DYNAMIC: [f64; 3] = [0.1, 0.25, 0.4];
const LAT_GRID_BOUND: f64 = FRAC_PI_2 - 0.05;

fn lat_grid(n: usize) -> Vec<f64> {
    linspace(-LAT_GRID_BOUND, LAT_GRID_BOUND, n)
}

fn r_grid(lat: f64, n: usize) -> Vec<f64> {
    let r_c = turning_colatitude(lat);
    linspace(r_c + EDGE_MARGIN, PI - r_c - EDGE_MARGIN, n)
}

/// 1. Gauss curvature positive on the whole sphere for admitted parameters,
///    rational closed form against the metric-derived route.
fn curvature_positivity(tol: &Tolerances) -> CriterionReport {
    let agree_tol = tol.get("curvature_route_agreement");
    let mut min_curv = f64::INFINITY;
    let mut max_gap = 0.0f64;
    for &eps in &EPS_GRID_SMALL {
        let h = HParam::new(eps).expect("admitted eps");
        for x in linspace(-1.0, 1.0, 10_000) {
            let closed = gauss_curvature_closed(&h, x).expect("domain");
            let general = gauss_curvature_general(&h, x).expect("domain");
            min_curv = min_curv.min(closed).min(general);
            max_gap = max_gap.max((closed - general).abs() / closed.abs().max(1.0));
        }
    }
    let pass = min_curv > 0.0 && max_gap < agree_tol;
    CriterionReport {
        id: 1,
        name: "curvature-positivity".into(),
        pass,
        margin: min_curv.min(agree_tol - max_gap),
        detail: format!("min G = {min_curv:.6}, worst route gap = {max_gap:.3e} (tol {agree_tol:.0e})"),
    }
}

/// 2. Parametric curve points satisfy the implicit equation.
fn parametric_implicit(tol: &Tolerances) -> CriterionReport {
    let t = tol.get("parametric_implicit");
    let mut worst = 0.0f64;
    for &eps in &EPS_GRID_FULL {
        for &lat in &lat_grid(20) {
            for &r in &r_grid(lat, 50) {
                for branch in [Branch::Plus, Branch::Minus] {
                    let (v1, v2) = match indicatrix_point(eps, lat, r, branch) {
                        Ok(p) => p,
                        Err(e) => return fail(2, "parametric-implicit", e),
                    };
                    worst = worst.max(implicit_residual(eps, lat, v1, v2).abs());
                }
            }
        }
    }
    CriterionReport {
        id: 2,
        name: "parametric-implicit".into(),
        pass: worst < t,
        margin: t - worst,
        detail: format!("max residual {worst:.3e} over 5x20x50 grid, both branches (tol {t:.0e})"),
    }
}

/// 3. Curve integral: antiderivative route against adaptive quadrature.
fn integral_identity(tol: &Tolerances) -> CriterionReport {
    let t = tol.get("appendix_integral");
    let mut worst = 0.0f64;
    let mut evaluated = 0usize;
    for &eps in &EPS_GRID_FULL {
        for &lat in &lat_grid(20) {
            for &r in &r_grid(lat, 50) {
                if r.cos().abs() < 1e-6 {
                    continue; // representation singular exactly at the equator
                }
                match appendix_integral(eps, lat, r) {
                    Ok(id) => {
                        worst = worst.max(id.gap());
                        evaluated += 1;
                    }
                    Err(e) => return fail(3, "integral-identity", e),
                }
            }
        }
    }
    CriterionReport {
        id: 3,
        name: "integral-identity".into(),
        pass: worst < t,
        margin: t - worst,
        detail: format!("max normalized gap {worst:.3e} over {evaluated} grid points (tol {t:.0e})"),
    }
}

fn sample_fiber(rng: &mut ChaCha8Rng) -> (f64, f64) {
    let ang: f64 = rng.gen_range(0.0..TAU);
    let mag = 10f64.powf(rng.gen_range(-1.0..1.0));
    (mag * ang.cos(), mag * ang.sin())
}

/// 4. Radical norm: backward error, Newton agreement, normalization on the
///    unit curve.
fn radical_correctness(tol: &Tolerances, seed: u64) -> CriterionReport {
    let t_back = tol.get("f_backward");
    let t_polish = tol.get("f_polish");
    let t_ind = tol.get("f_indicatrix");
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x04);
    let mut worst_res = 0.0f64;
    let mut worst_gap = 0.0f64;
    for _ in 0..10_000 {
        let eps = rng.gen_range(0.01..0.49);
        let lat = rng.gen_range(-1.45..1.45);
        let (v1, v2) = sample_fiber(&mut rng);
        match f_eval(eps, lat, v1, v2) {
            Ok(ev) => {
                worst_res = worst_res.max(ev.residual);
                worst_gap = worst_gap.max(ev.polish_gap / ev.f.abs().max(1.0));
            }
            Err(e) => return fail(4, "radical-correctness", e),
        }
    }
    let mut worst_unit = 0.0f64;
    for &eps in &EPS_GRID_FULL {
        for &lat in &lat_grid(20) {
            for &r in &r_grid(lat, 50) {
                let (v1, v2) = indicatrix_point(eps, lat, r, Branch::Plus).expect("grid");
                match f_eval(eps, lat, v1, v2) {
                    Ok(ev) => worst_unit = worst_unit.max((ev.f - 1.0).abs()),
                    Err(e) => return fail(4, "radical-correctness", e),
                }
            }
        }
    }
    let pass = worst_res < t_back && worst_gap < t_polish && worst_unit < t_ind;
    CriterionReport {
        id: 4,
        name: "radical-correctness".into(),
        pass,
        margin: (t_back - worst_res)
            .min(t_polish - worst_gap)
            .min(t_ind - worst_unit),
        detail: format!(
            "backward {worst_res:.3e} (tol {t_back:.0e}), newton gap {worst_gap:.3e} (tol {t_polish:.0e}), |F-1| on curve {worst_unit:.3e} (tol {t_ind:.0e})"
        ),
    }
}

/// 5. Coefficient signs, resolvent Vieta product, and the excluded
///    two-positive-one-negative resolvent pattern.
fn sign_structure(tol: &Tolerances, seed: u64) -> CriterionReport {
    let t_vieta = tol.get("resolvent_vieta");
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x05);
    let mut min_a = f64::INFINITY;
    let mut max_c = f64::NEG_INFINITY;
    let mut max_e = f64::NEG_INFINITY;
    let mut worst_vieta = 0.0f64;
    for _ in 0..10_000 {
        let eps = rng.gen_range(0.001..0.499);
        let lat = rng.gen_range(-1.45..1.45);
        let (mut v1, v2) = sample_fiber(&mut rng);
        let vn = v1.hypot(v2);
        if v1.abs() < 1e-3 * vn {
            v1 = 1e-3 * vn * v1.signum();
            if v1 == 0.0 {
                v1 = 1e-3 * vn;
            }
        }
        let qc = quartic_coefficients(eps, lat, v1, v2);
        min_a = min_a.min(qc.a);
        max_c = max_c.max(qc.c);
        max_e = max_e.max(qc.e);
        let dq = match crate::finsler::depress(&qc) {
            Ok(d) => d,
            Err(e) => return fail(5, "sign-structure", e),
        };
        let rs = match solve_resolvent(dq.alpha, dq.beta, dq.gamma) {
            Ok(r) => r,
            Err(e) => return fail(5, "sign-structure", e),
        };
        worst_vieta = worst_vieta.max(rs.vieta_residuals(dq.alpha, dq.beta, dq.gamma)[2]);
        if rs.all_real() {
            let zs = [rs.z1.re, rs.z2.re, rs.z3.re];
            let scale = zs.iter().fold(1.0f64, |a, z| a.max(z.abs()));
            let pos = zs.iter().filter(|&&z| z > 1e-9 * scale).count();
            let neg = zs.iter().filter(|&&z| z < -1e-9 * scale).count();
            // the product Vieta forbids exactly one pattern beyond all-non-
            // positive; seeing a strictly positive root at all would break
            // the radical assembly of the norm
            if pos > 0 {
                return CriterionReport {
                    id: 5,
                    name: "sign-structure".into(),
                    pass: false,
                    margin: f64::NEG_INFINITY,
                    detail: format!(
                        "all-real resolvent with {pos} positive / {neg} negative roots at eps={eps}, lat={lat}, v=({v1},{v2})"
                    ),
                };
            }
        }
    }
    let pass = min_a > 0.0 && max_c < 0.0 && max_e < 0.0 && worst_vieta < t_vieta;
    CriterionReport {
        id: 5,
        name: "sign-structure".into(),
        pass,
        margin: min_a.min(-max_c).min(-max_e).min(t_vieta - worst_vieta),
        detail: format!(
            "min A {min_a:.3e}, max C {max_c:.3e}, max E {max_e:.3e}, worst Vieta {worst_vieta:.3e} (tol {t_vieta:.0e})"
        ),
    }
}

/// 6. Positive 1-homogeneity and strong convexity of the fiber Hessian.
fn metric_axioms(tol: &Tolerances, seed: u64) -> CriterionReport {
    let t_hom = tol.get("homogeneity");
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x06);
    let mut worst_hom = 0.0f64;
    for _ in 0..1000 {
        let eps = rng.gen_range(0.01..0.49);
        let lat = rng.gen_range(-1.45..1.45);
        let (v1, v2) = sample_fiber(&mut rng);
        for &lam in &[1e-3, 0.5, 2.0, 1e3] {
            match homogeneity_defect(eps, lat, v1, v2, lam) {
                Ok(d) => worst_hom = worst_hom.max(d),
                Err(e) => return fail(6, "metric-axioms", e),
            }
        }
    }
    let mut min_eig = f64::INFINITY;
    for &eps in &EPS_GRID_SMALL {
        for &lat in &linspace(-1.2, 1.2, 10) {
            for k in 0..8 {
                let ang = 0.11 + k as f64 * TAU / 8.0;
                match hessian_unchecked(eps, lat, ang.cos(), ang.sin()) {
                    Ok(g) => min_eig = min_eig.min(g.eigenvalues().0),
                    Err(e) => return fail(6, "metric-axioms", e),
                }
            }
        }
    }
    let pass = worst_hom < t_hom && min_eig > 0.0;
    CriterionReport {
        id: 6,
        name: "metric-axioms".into(),
        pass,
        margin: (t_hom - worst_hom).min(min_eig),
        detail: format!(
            "homogeneity defect {worst_hom:.3e} (tol {t_hom:.0e}), min Hessian eigenvalue {min_eig:.6}"
        ),
    }
}

/// 7. Constant flag curvature K = 1.
fn constant_flag_curvature(tol: &Tolerances, seed: u64) -> CriterionReport {
    let t = tol.get("flag_curvature");
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x07);
    let mut worst = 0.0f64;
    let mut samples = 0usize;
    for &eps in &EPS_GRID_DYNAMIC {
        for _ in 0..70 {
            // the difference scheme is validated for |lat| <= 1.1
            let lat = rng.gen_range(-1.1..1.1);
            let theta = rng.gen_range(0.0..TAU);
            let ang: f64 = rng.gen_range(0.0..TAU);
            match flag_curvature(eps, lat, theta, ang.cos(), ang.sin()) {
                Ok(k) => {
                    worst = worst.max((k - 1.0).abs());
                    samples += 1;
                }
                Err(e) => return fail(7, "flag-curvature", e),
            }
        }
    }
    CriterionReport {
        id: 7,
        name: "flag-curvature".into(),
        pass: worst < t,
        margin: t - worst,
        detail: format!("max |K-1| = {worst:.3e} over {samples} samples (tol {t:.0e})"),
    }
}

/// 8. All geodesics close after arclength 2 pi.
fn geodesic_closure(tol: &Tolerances, seed: u64) -> CriterionReport {
    let t_close = tol.get("closure");
    let t_ret = tol.get("first_return");
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x08);
    let mut worst_defect = 0.0f64;
    let mut worst_return = 0.0f64;
    for &eps in &EPS_GRID_DYNAMIC {
        let surface = ZollSurface::new(HParam::new(eps).expect("admitted eps"));
        for _ in 0..20 {
            let r0 = rng.gen_range(0.45..PI - 0.45);
            let theta0 = rng.gen_range(0.0..TAU);
            // direction bounded away from the meridians
            let sign = if rng.gen_range(0..2) == 0 { 1.0 } else { -1.0 };
            let psi = sign * rng.gen_range(0.15..PI - 0.15);
            let init = match GeodesicState::from_direction(&surface, r0, theta0, psi) {
                Ok(s) => s,
                Err(e) => return fail(8, "geodesic-closure", e),
            };
            let traj = match integrate_geodesic(&surface, &init, TAU, 1e-3) {
                Ok(t) => t,
                Err(e) => return fail(8, "geodesic-closure", e),
            };
            worst_defect = worst_defect.max(closure_defect(&traj));
            match first_return_length(&surface, &init, 1e-3) {
                Ok((len, _)) => worst_return = worst_return.max((len - TAU).abs()),
                Err(e) => return fail(8, "geodesic-closure", e),
            }
        }
    }
    let pass = worst_defect < t_close && worst_return < t_ret;
    CriterionReport {
        id: 8,
        name: "geodesic-closure".into(),
        pass,
        margin: (t_close - worst_defect).min(t_ret - worst_return),
        detail: format!(
            "max closure defect {worst_defect:.3e} (tol {t_close:.0e}), max |first return - 2pi| {worst_return:.3e} (tol {t_ret:.0e})"
        ),
    }
}

/// 9. Round-sphere limit: the norm degenerates to the elliptic norm and the
///    unit curves to ellipses.
fn round_sphere_limit(tol: &Tolerances, seed: u64) -> CriterionReport {
    let t = tol.get("round_sphere");
    let eps = 1e-9f64;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x09);
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let lat = rng.gen_range(-1.45..1.45);
        let (v1, v2) = sample_fiber(&mut rng);
        match f_eval(eps, lat, v1, v2) {
            Ok(ev) => {
                let want = (v1 * v1 + v2 * v2 * lat.cos() * lat.cos()).sqrt();
                worst = worst.max((ev.f - want).abs());
            }
            Err(e) => return fail(9, "round-sphere-limit", e),
        }
    }
    let mut worst_ellipse = 0.0f64;
    for &lat in &[-1.0, -0.3, 0.0, 0.6, 1.2] {
        let curve = match indicatrix_curve(eps, lat, 200) {
            Ok(c) => c,
            Err(e) => return fail(9, "round-sphere-limit", e),
        };
        for p in &curve.points {
            let val = p.v1 * p.v1 + p.v2 * p.v2 * lat.cos() * lat.cos();
            worst_ellipse = worst_ellipse.max((val - 1.0).abs());
        }
    }
    let pass = worst < t && worst_ellipse < t;
    CriterionReport {
        id: 9,
        name: "round-sphere-limit".into(),
        pass,
        margin: (t - worst).min(t - worst_ellipse),
        detail: format!(
            "max |F - elliptic norm| {worst:.3e}, max ellipse residual {worst_ellipse:.3e} (tol {t:.0e})"
        ),
    }
}

/// 10. Quartic solver against constructed roots and the backward-error
///     property on fully random coefficients.
fn quartic_oracle(tol: &Tolerances, seed: u64) -> CriterionReport {
    let t_match = tol.get("quartic_match");
    let t_res = tol.get("quartic_residual");
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x0a);
    let mut worst_match = 0.0f64;
    for _ in 0..10_000 {
        // well-separated roots: at a near-double root no double-precision
        // method can reach 1e-8 forward accuracy (conditioning is 1/gap)
        let roots: [f64; 4] = loop {
            let cand: [f64; 4] = [
                rng.gen_range(-10.0..10.0),
                rng.gen_range(-10.0..10.0),
                rng.gen_range(-10.0..10.0),
                rng.gen_range(-10.0..10.0),
            ];
            let mut ok = true;
            for i in 0..4 {
                for j in i + 1..4 {
                    ok &= (cand[i] - cand[j]).abs() >= 0.05;
                }
            }
            if ok {
                break cand;
            }
        };
        let lead = rng.gen_range(0.5..2.0) * if rng.gen_range(0..2) == 0 { 1.0 } else { -1.0 };
        let e1: f64 = roots.iter().sum();
        let e2 = roots[0] * roots[1]
            + roots[0] * roots[2]
            + roots[0] * roots[3]
            + roots[1] * roots[2]
            + roots[1] * roots[3]
            + roots[2] * roots[3];
        let e3 = roots[0] * roots[1] * roots[2]
            + roots[0] * roots[1] * roots[3]
            + roots[0] * roots[2] * roots[3]
            + roots[1] * roots[2] * roots[3];
        let e4 = roots[0] * roots[1] * roots[2] * roots[3];
        let got = match solve_quartic(lead, -lead * e1, lead * e2, -lead * e3, lead * e4) {
            Ok(r) => r,
            Err(e) => return fail(10, "quartic-oracle", e),
        };
        let mut used = [false; 4];
        for want in roots {
            let mut best: Option<(usize, f64)> = None;
            for (i, g) in got.iter().enumerate() {
                if used[i] {
                    continue;
                }
                let d = ((g.re - want).powi(2) + g.im.powi(2)).sqrt();
                if best.is_none_or(|(_, bd)| d < bd) {
                    best = Some((i, d));
                }
            }
            let (i, d) = best.expect("four roots");
            used[i] = true;
            worst_match = worst_match.max(d / want.abs().max(1.0));
        }
    }
    let mut worst_res = 0.0f64;
    for _ in 0..10_000 {
        let c: [f64; 5] = [
            rng.gen_range(-1e3..1e3),
            rng.gen_range(-1e3..1e3),
            rng.gen_range(-1e3..1e3),
            rng.gen_range(-1e3..1e3),
            rng.gen_range(-1e3..1e3),
        ];
        if c[0].abs() < 1e-6 {
            continue;
        }
        let got = match solve_quartic(c[0], c[1], c[2], c[3], c[4]) {
            Ok(r) => r,
            Err(e) => return fail(10, "quartic-oracle", e),
        };
        for z in got {
            if z.im.abs() <= 1e-9 * (1.0 + z.re.abs()) {
                worst_res = worst_res.max(quartic_backward_error(c[0], c[1], c[2], c[3], c[4], z.re));
            }
        }
        // spot-check the Newton oracle on the real roots
        for z in got {
            if z.im.abs() <= 1e-12 * (1.0 + z.re.abs()) {
                let (_, deriv, scale) =
                    crate::polyroots::quartic_eval(c[0], c[1], c[2], c[3], c[4], z.re);
                if deriv.abs() > 1e-6 * scale.max(1.0) {
                    if let Ok(p) = polish_root(c[0], c[1], c[2], c[3], c[4], z.re) {
                        worst_match = worst_match.max((p - z.re).abs() / z.re.abs().max(1.0));
                    }
                }
            }
        }
    }
    let pass = worst_match < t_match && worst_res < t_res;
    CriterionReport {
        id: 10,
        name: "quartic-oracle".into(),
        pass,
        margin: (t_match - worst_match).min(t_res - worst_res),
        detail: format!(
            "constructed-root mismatch {worst_match:.3e} (tol {t_match:.0e}), random-coefficient residual {worst_res:.3e} (tol {t_res:.0e})"
        ),
    }
}

fn fail(id: u32, name: &str, err: Error) -> CriterionReport {
    CriterionReport {
        id,
        name: name.into(),
        pass: false,
        margin: f64::NEG_INFINITY,
        detail: format!("aborted: {err}"),
    }
}

/// Census used by diagnostics: number of positive real roots over a sample
/// grid away from the radial stratum. Expected to be exactly one everywhere.
pub fn positive_root_census(seed: u64, samples: usize) -> Result<(usize, usize)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x0b);
    let mut unique = 0usize;
    let mut total = 0usize;
    while total < samples {
        let eps = rng.gen_range(0.01..0.49);
        let lat = rng.gen_range(-1.45..1.45);
        let (v1, v2) = sample_fiber(&mut rng);
        if v1.abs() < 0.05 * v1.hypot(v2) {
            continue;
        }
        total += 1;
        let qc = quartic_coefficients(eps, lat, v1, v2);
        if root_classify(&qc)?.positive_count() == 1 {
            unique += 1;
        }
    }
    Ok((unique, total))
}
