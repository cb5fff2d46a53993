//! Run configuration: defaults, optional JSON config file, flag overrides.

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_PI_2, PI};
use std::path::PathBuf;

use serde::Deserialize;
use zoll_finsler::real::linspace;
use zoll_finsler::verify::Tolerances;

/// Chart margin kept by latitude grids.
pub const LAT_MARGIN: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// `min:max:count` grid description.
#[derive(Debug, Clone, Copy)]
pub struct GridSpec {
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl GridSpec {
    pub fn parse(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(format!("grid '{s}' is not of the form min:max:count"));
        }
        let min: f64 = parts[0]
            .parse()
            .map_err(|e| format!("grid '{s}': bad min ({e})"))?;
        let max: f64 = parts[1]
            .parse()
            .map_err(|e| format!("grid '{s}': bad max ({e})"))?;
        let count: usize = parts[2]
            .parse()
            .map_err(|e| format!("grid '{s}': bad count ({e})"))?;
        if count == 0 {
            return Err(format!("grid '{s}' is empty"));
        }
        if !(min <= max) || !min.is_finite() || !max.is_finite() {
            return Err(format!("grid '{s}' has a reversed or non-finite range"));
        }
        Ok(GridSpec { min, max, count })
    }

    pub fn points(&self) -> Vec<f64> {
        linspace(self.min, self.max, self.count)
    }

    pub fn display(&self) -> String {
        format!("{}:{}:{}", self.min, self.max, self.count)
    }
}

/// Optional JSON config file; every field mirrors a flag and flags win.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub epsilon: Option<f64>,
    #[serde(rename = "grid_R")]
    pub grid_lat: Option<String>,
    pub grid_r: Option<String>,
    pub tol: Option<BTreeMap<String, f64>>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub format: Option<String>,
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub epsilon: f64,
    /// Base-latitude grid on the manifold of geodesics.
    pub grid_lat: GridSpec,
    /// Colatitude grid; clamped per latitude to the reachable excursion.
    pub grid_r: GridSpec,
    pub tol: Tolerances,
    pub seed: u64,
    pub out: PathBuf,
    pub format: Format,
}

pub struct Overrides {
    pub epsilon: Option<f64>,
    pub grid_lat: Option<String>,
    pub grid_r: Option<String>,
    pub tol: Vec<String>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
}

impl RunConfig {
    pub fn resolve(file: FileConfig, flags: Overrides) -> Result<Self, String> {
        let epsilon = flags.epsilon.or(file.epsilon).unwrap_or(0.25);
        if !(epsilon > 0.0 && epsilon < 0.5) {
            return Err(format!(
                "epsilon must lie strictly between 0 and 1/2, got {epsilon}"
            ));
        }
        let grid_lat = match flags.grid_lat.or(file.grid_lat) {
            Some(s) => GridSpec::parse(&s)?,
            None => GridSpec {
                min: -FRAC_PI_2 + 0.05,
                max: FRAC_PI_2 - 0.05,
                count: 20,
            },
        };
        if grid_lat.min < -FRAC_PI_2 + LAT_MARGIN || grid_lat.max > FRAC_PI_2 - LAT_MARGIN {
            return Err(format!(
                "latitude grid {} leaves the chart (need |R| <= {:.4})",
                grid_lat.display(),
                FRAC_PI_2 - LAT_MARGIN
            ));
        }
        let grid_r = match flags.grid_r.or(file.grid_r) {
            Some(s) => GridSpec::parse(&s)?,
            None => GridSpec {
                min: 0.0,
                max: PI,
                count: 50,
            },
        };
        if grid_r.min < 0.0 || grid_r.max > PI {
            return Err(format!(
                "colatitude grid {} leaves [0, pi]",
                grid_r.display()
            ));
        }
        let mut tol = Tolerances::default();
        for (name, value) in file.tol.unwrap_or_default() {
            tol.set(&name, value).map_err(|e| e.to_string())?;
        }
        for pair in &flags.tol {
            let (name, value) = pair
                .split_once('=')
                .ok_or_else(|| format!("--tol '{pair}' is not of the form name=value"))?;
            let value: f64 = value
                .parse()
                .map_err(|e| format!("--tol '{pair}': bad value ({e})"))?;
            tol.set(name, value).map_err(|e| e.to_string())?;
        }
        let format = match flags.format {
            Some(f) => f,
            None => match file.format.as_deref() {
                Some("csv") | None => Format::Csv,
                Some("json") => Format::Json,
                Some(other) => return Err(format!("unknown format '{other}' (csv or json)")),
            },
        };
        Ok(RunConfig {
            epsilon,
            grid_lat,
            grid_r,
            tol,
            seed: flags.seed.or(file.seed).unwrap_or(0),
            out: flags.out.or(file.out).unwrap_or_else(|| PathBuf::from("out")),
            format,
        })
    }

    /// Colatitude grid restricted to the excursion reachable from `lat`,
    /// with the turning points excluded by a small margin.
    pub fn r_points(&self, lat: f64) -> Vec<f64> {
        let r_c = lat.abs();
        let margin = zoll_finsler::indicatrix::EDGE_MARGIN;
        let lo = self.grid_r.min.max(r_c + margin);
        let hi = self.grid_r.max.min(PI - r_c - margin);
        if lo >= hi {
            return Vec::new();
        }
        linspace(lo, hi, self.grid_r.count)
    }
}
