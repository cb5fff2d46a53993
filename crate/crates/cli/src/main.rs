//! Command-line driver.
//!
//! Exit codes: 0 all checks pass, 1 a check failed, 2 usage or
//! configuration error.

// NaN-rejecting validation comparisons are deliberately negated.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod config;

use std::f64::consts::{PI, TAU};
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use config::{FileConfig, Format, Overrides, RunConfig};
use zoll_finsler::finsler::{f_eval, flag_curvature, hessian_unchecked};
use zoll_finsler::indicatrix::{implicit_residual, indicatrix_point, Branch, TangentSample};
use zoll_finsler::verify::run_suite;
use zoll_finsler::zoll::{
    closure_defect, first_return_length, gauss_curvature_closed, gauss_curvature_general,
    integrate_geodesic, GeodesicState, HParam, ZollSurface,
};

#[derive(Parser)]
#[command(
    name = "zoll-finsler",
    about = "Zoll metrics on the 2-sphere and the constant-flag-curvature Finsler norm on their manifold of geodesics",
    version
)]
struct Cli {
    /// JSON config file mirroring the flags; explicit flags win.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Deformation parameter, in (0, 1/2).
    #[arg(long, global = true)]
    epsilon: Option<f64>,

    /// Base-latitude grid min:max:count.
    #[arg(long = "grid-R", global = true, value_name = "MIN:MAX:N", allow_hyphen_values = true)]
    grid_lat: Option<String>,

    /// Colatitude grid min:max:count (clamped per latitude).
    #[arg(long = "grid-r", global = true, value_name = "MIN:MAX:N", allow_hyphen_values = true)]
    grid_r: Option<String>,

    /// Tolerance override, repeatable.
    #[arg(long = "tol", global = true, value_name = "NAME=VALUE")]
    tol: Vec<String>,

    /// Seed for the deterministic samplers.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Output directory for exported files.
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,

    /// Output format for tabular reports.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the norm and its diagnostics at one tangent vector.
    Eval {
        /// Base latitude.
        #[arg(long = "R", allow_hyphen_values = true)]
        lat: f64,
        #[arg(long, allow_hyphen_values = true)]
        v1: f64,
        #[arg(long, allow_hyphen_values = true)]
        v2: f64,
    },
    /// Export unit-curve samples, one CSV per latitude grid value.
    Indicatrix,
    /// Run the full verification suite.
    Verify,
    /// Integrate random non-meridian geodesics and report closure defects.
    Geodesics {
        #[arg(long, default_value_t = 20)]
        count: usize,
        /// Arclength to integrate (the common period is 2 pi).
        #[arg(long, default_value_t = TAU)]
        length: f64,
    },
    /// Tabulate the Gauss curvature profile and flag-curvature samples.
    CurvatureScan,
}

enum CmdError {
    Usage(String),
    Runtime(String),
}

type CmdResult = Result<i32, CmdError>;

fn usage(msg: impl Into<String>) -> CmdError {
    CmdError::Usage(msg.into())
}

fn io_err(path: &Path, err: impl std::fmt::Display) -> CmdError {
    CmdError::Runtime(format!("{}: {err}", path.display()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let file_cfg = match &cli.config {
        Some(path) => match fs::read_to_string(path) {
            Ok(text) => match serde_json::from_str::<FileConfig>(&text) {
                Ok(cfg) => cfg,
                Err(e) => {
                    eprintln!("error: config {}: {e}", path.display());
                    return ExitCode::from(2);
                }
            },
            Err(e) => {
                eprintln!("error: config {}: {e}", path.display());
                return ExitCode::from(2);
            }
        },
        None => FileConfig::default(),
    };
    let cfg = match RunConfig::resolve(
        file_cfg,
        Overrides {
            epsilon: cli.epsilon,
            grid_lat: cli.grid_lat,
            grid_r: cli.grid_r,
            tol: cli.tol,
            seed: cli.seed,
            out: cli.out,
            format: cli.format,
        },
    ) {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let result = match cli.cmd {
        Command::Eval { lat, v1, v2 } => cmd_eval(&cfg, lat, v1, v2),
        Command::Indicatrix => cmd_indicatrix(&cfg),
        Command::Verify => cmd_verify(&cfg),
        Command::Geodesics { count, length } => cmd_geodesics(&cfg, count, length),
        Command::CurvatureScan => cmd_curvature_scan(&cfg),
    };
    match result {
        Ok(code) => ExitCode::from(code as u8),
        Err(CmdError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CmdError::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

/// Curvature sampling stays inside the latitude band where the difference
/// scheme is validated.
const CURVATURE_LAT_CAP: f64 = 1.1;

fn cmd_eval(cfg: &RunConfig, lat: f64, v1: f64, v2: f64) -> CmdResult {
    let sample = TangentSample::new(lat, 0.0, v1, v2).map_err(|e| usage(e.to_string()))?;
    let ev =
        f_eval(cfg.epsilon, sample.lat, sample.v1, sample.v2).map_err(|e| usage(e.to_string()))?;
    let eigs = hessian_unchecked(cfg.epsilon, lat, v1, v2)
        .map(|g| g.eigenvalues())
        .ok();
    let k = if lat.abs() <= CURVATURE_LAT_CAP {
        flag_curvature(cfg.epsilon, lat, 0.0, v1, v2).ok()
    } else {
        None
    };
    let residual_pass = ev.residual < cfg.tol.get("f_backward");
    let report = json!({
        "epsilon": cfg.epsilon,
        "R": lat,
        "v1": v1,
        "v2": v2,
        "F": ev.f,
        "residual": ev.residual,
        "trusted": ev.trusted(),
        "root_signature": ev.signature.to_string(),
        "hessian_eigs": eigs.map(|(lo, hi)| vec![lo, hi]),
        "K": k,
    });
    match cfg.format {
        Format::Json => println!("{}", serde_json::to_string_pretty(&report).unwrap()),
        Format::Csv => {
            println!("epsilon,R,v1,v2,F,residual,trusted,K");
            println!(
                "{},{},{},{},{},{},{},{}",
                cfg.epsilon,
                lat,
                v1,
                v2,
                ev.f,
                ev.residual,
                ev.trusted(),
                k.map_or(String::from(""), |k| k.to_string())
            );
        }
    }
    Ok(if residual_pass && ev.trusted() { 0 } else { 1 })
}

fn write_file(path: &Path, contents: &str) -> Result<(), CmdError> {
    fs::write(path, contents).map_err(|e| io_err(path, e))
}

fn ensure_out(cfg: &RunConfig) -> Result<(), CmdError> {
    fs::create_dir_all(&cfg.out).map_err(|e| io_err(&cfg.out, e))
}

fn cmd_indicatrix(cfg: &RunConfig) -> CmdResult {
    ensure_out(cfg)?;
    let lats = cfg.grid_lat.points();
    let mut files = Vec::new();
    let mut max_implicit = 0.0f64;
    let mut max_f = 0.0f64;
    for (i, &lat) in lats.iter().enumerate() {
        let rs = cfg.r_points(lat);
        if rs.is_empty() {
            return Err(usage(format!(
                "colatitude grid {} has no points reachable from latitude {lat}",
                cfg.grid_r.display()
            )));
        }
        let mut csv = String::from("r,v1,v2,implicit_residual,F_residual\n");
        let mut rows = Vec::new();
        for &r in &rs {
            rows.push((r, Branch::Plus));
        }
        for &r in rs.iter().rev() {
            rows.push((r, Branch::Minus));
        }
        for (r, branch) in rows {
            let (v1, v2) = indicatrix_point(cfg.epsilon, lat, r, branch)
                .map_err(|e| usage(e.to_string()))?;
            let ires = implicit_residual(cfg.epsilon, lat, v1, v2).abs();
            let ev = f_eval(cfg.epsilon, lat, v1, v2)
                .map_err(|e| CmdError::Runtime(e.to_string()))?;
            let fres = (ev.f - 1.0).abs();
            max_implicit = max_implicit.max(ires);
            max_f = max_f.max(fres);
            csv.push_str(&format!("{r},{v1},{v2},{ires},{fres}\n"));
        }
        let name = format!("indicatrix_{i:02}.csv");
        write_file(&cfg.out.join(&name), &csv)?;
        files.push(name);
    }
    let implicit_tol = cfg.tol.get("parametric_implicit");
    let f_tol = cfg.tol.get("f_indicatrix");
    let pass = max_implicit < implicit_tol && max_f < f_tol;
    let summary = json!({
        "epsilon": cfg.epsilon,
        "grid_R": cfg.grid_lat.display(),
        "grid_r": cfg.grid_r.display(),
        "R_values": lats,
        "files": files,
        "max_implicit_residual": max_implicit,
        "max_F_residual": max_f,
        "pass": pass,
    });
    let path = cfg.out.join("indicatrix_summary.json");
    write_file(&path, &serde_json::to_string_pretty(&summary).unwrap())?;
    println!(
        "{} curves -> {}; max implicit residual {max_implicit:.3e} (tol {implicit_tol:.0e}), max |F-1| {max_f:.3e} (tol {f_tol:.0e})",
        lats.len(),
        cfg.out.display()
    );
    Ok(if pass { 0 } else { 1 })
}

fn cmd_verify(cfg: &RunConfig) -> CmdResult {
    let report = run_suite(&cfg.tol, cfg.seed);
    for c in &report.criteria {
        println!("{}", c.line());
    }
    ensure_out(cfg)?;
    let path = cfg.out.join("verify_report.json");
    write_file(&path, &serde_json::to_string_pretty(&report).unwrap())?;
    println!(
        "{}: {} of {} criteria pass (seed {}); report at {}",
        if report.all_pass { "OK" } else { "FAILED" },
        report.criteria.iter().filter(|c| c.pass).count(),
        report.criteria.len(),
        report.seed,
        path.display()
    );
    Ok(if report.all_pass { 0 } else { 1 })
}

fn cmd_geodesics(cfg: &RunConfig, count: usize, length: f64) -> CmdResult {
    if count == 0 {
        return Err(usage("count must be at least 1"));
    }
    if !(length > 0.0) || !length.is_finite() {
        return Err(usage("length must be positive and finite"));
    }
    ensure_out(cfg)?;
    let h = HParam::new(cfg.epsilon).map_err(|e| usage(e.to_string()))?;
    let surface = ZollSurface::new(h);
    let step = 1e-3;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let closure_tol = cfg.tol.get("closure");
    let near_full_period = (length - TAU).abs() < 1e-6;
    let mut rows = Vec::new();
    let mut worst_defect = 0.0f64;
    let mut failures = 0usize;
    for i in 0..count {
        let r0 = rng.gen_range(0.45..PI - 0.45);
        let theta0 = rng.gen_range(0.0..TAU);
        let sign = if rng.gen_range(0..2) == 0 { 1.0 } else { -1.0 };
        let psi = sign * rng.gen_range(0.15..PI - 0.15);
        let init = match GeodesicState::from_direction(&surface, r0, theta0, psi) {
            Ok(s) => s,
            Err(e) => {
                failures += 1;
                rows.push(json!({"index": i, "error": e.to_string()}));
                continue;
            }
        };
        match integrate_geodesic(&surface, &init, length, step) {
            Ok(traj) => {
                let defect = closure_defect(&traj);
                worst_defect = worst_defect.max(defect);
                let mut csv = String::from("s,r,theta,r_dot,theta_dot\n");
                for st in &traj {
                    csv.push_str(&format!(
                        "{},{},{},{},{}\n",
                        st.arclength, st.r, st.theta, st.r_dot, st.theta_dot
                    ));
                }
                let name = format!("geodesic_{i:03}.csv");
                write_file(&cfg.out.join(&name), &csv)?;
                let first_return = first_return_length(&surface, &init, step).ok();
                rows.push(json!({
                    "index": i,
                    "file": name,
                    "r0": r0,
                    "theta0": theta0,
                    "psi": psi,
                    "defect": defect,
                    "defect_exceeds_tolerance": defect > closure_tol,
                    "first_return_length": first_return.map(|(l, _)| l),
                    "first_return_defect": first_return.map(|(_, d)| d),
                }));
            }
            Err(e) => {
                failures += 1;
                rows.push(json!({"index": i, "error": e.to_string()}));
            }
        }
    }
    let pass = !near_full_period || (worst_defect < closure_tol && failures == 0);
    let report = json!({
        "epsilon": cfg.epsilon,
        "seed": cfg.seed,
        "count": count,
        "length": length,
        "step": step,
        "closure_tolerance": closure_tol,
        "informational": !near_full_period,
        "worst_defect": worst_defect,
        "integrator_failures": failures,
        "trajectories": rows,
    });
    let path = cfg.out.join(match cfg.format {
        Format::Json => "closure_report.json",
        Format::Csv => "closure_report.json", // table is also embedded in CSVs
    });
    write_file(&path, &serde_json::to_string_pretty(&report).unwrap())?;
    println!(
        "{count} geodesics of length {length} at epsilon {}: worst closure defect {worst_defect:.3e}{}",
        cfg.epsilon,
        if near_full_period {
            format!(" (tol {closure_tol:.0e})")
        } else {
            String::from(" (informational: length differs from the common period)")
        }
    );
    Ok(if pass { 0 } else { 1 })
}

fn cmd_curvature_scan(cfg: &RunConfig) -> CmdResult {
    ensure_out(cfg)?;
    let h = HParam::new(cfg.epsilon).map_err(|e| usage(e.to_string()))?;
    let mut csv = String::from("x,G_closed,G_general,rel_gap\n");
    let mut min_curv = f64::INFINITY;
    let mut max_gap = 0.0f64;
    let n = 10_001;
    for i in 0..n {
        let x = -1.0 + 2.0 * i as f64 / (n - 1) as f64;
        let closed = gauss_curvature_closed(&h, x).map_err(|e| CmdError::Runtime(e.to_string()))?;
        let general =
            gauss_curvature_general(&h, x).map_err(|e| CmdError::Runtime(e.to_string()))?;
        let gap = (closed - general).abs() / closed.abs().max(1.0);
        min_curv = min_curv.min(closed);
        max_gap = max_gap.max(gap);
        csv.push_str(&format!("{x},{closed},{general},{gap}\n"));
    }
    write_file(&cfg.out.join("curvature_profile.csv"), &csv)?;

    let mut kcsv = String::from("R,v1,v2,K,abs_err\n");
    let mut max_k_err = 0.0f64;
    for &lat in cfg
        .grid_lat
        .points()
        .iter()
        .filter(|l| l.abs() <= CURVATURE_LAT_CAP)
    {
        for k in 0..8 {
            let ang = 0.13 + k as f64 * TAU / 8.0;
            let (v1, v2) = (ang.cos(), ang.sin());
            let kval = flag_curvature(cfg.epsilon, lat, 0.0, v1, v2)
                .map_err(|e| CmdError::Runtime(e.to_string()))?;
            let err = (kval - 1.0).abs();
            max_k_err = max_k_err.max(err);
            kcsv.push_str(&format!("{lat},{v1},{v2},{kval},{err}\n"));
        }
    }
    write_file(&cfg.out.join("flag_curvature_samples.csv"), &kcsv)?;

    let gap_tol = cfg.tol.get("curvature_route_agreement");
    let k_tol = cfg.tol.get("flag_curvature");
    let pass = min_curv > 0.0 && max_gap < gap_tol && max_k_err < k_tol;
    let summary = json!({
        "epsilon": cfg.epsilon,
        "min_gauss_curvature": min_curv,
        "max_route_gap": max_gap,
        "max_flag_curvature_error": max_k_err,
        "pass": pass,
    });
    write_file(
        &cfg.out.join("curvature_summary.json"),
        &serde_json::to_string_pretty(&summary).unwrap(),
    )?;
    println!(
        "min G {min_curv:.6}, route gap {max_gap:.3e} (tol {gap_tol:.0e}), max |K-1| {max_k_err:.3e} (tol {k_tol:.0e})"
    );
    Ok(if pass { 0 } else { 1 })
}
