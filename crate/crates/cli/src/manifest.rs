//! Run configuration: a JSON file merged under command-line flags.

use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use serde::Deserialize;

use halfplane_bvp::config::{Branch, Problem};
use halfplane_bvp::operators::LogGridSettings;
use halfplane_bvp::quadrature::SchemeSettings;
use halfplane_bvp::solver::{DirichletRoute, GridSpec, Preset};

use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
    Svg,
}

/// Flags shared by every subcommand. All optional: unset flags fall back to
/// the `--cfg` file, then to per-command defaults.
#[derive(Args, Debug, Default, Clone)]
pub struct Flags {
    /// dirichlet | neumann | regularity
    #[arg(long)]
    pub problem: Option<Problem>,
    #[arg(long, allow_negative_numbers = true)]
    pub k: Option<f64>,
    #[arg(long)]
    pub p: Option<f64>,
    /// h1 | lpinf
    #[arg(long)]
    pub branch: Option<Branch>,
    /// Comma-separated alpha values, e.g. --alpha-list=-1.5,0.4
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub alpha_list: Option<Vec<f64>>,
    #[arg(long)]
    pub t: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub x: Option<f64>,
    /// gaussian | bump | indicator | rational | hat
    #[arg(long)]
    pub preset: Option<Preset>,
    /// t0:t1:nt,x0:x1:nx
    #[arg(long, allow_hyphen_values = true)]
    pub grid: Option<String>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// JSON configuration file; flags take precedence over its entries.
    #[arg(long)]
    pub cfg: Option<PathBuf>,
    /// Run a single verification check.
    #[arg(long)]
    pub only: Option<String>,
    /// Seed for randomized test fields.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Symbol exponent for `spectrum`.
    #[arg(long)]
    pub gamma: Option<f64>,
    /// Include the (slow) energy-scaling checks in `verify`.
    #[arg(long)]
    pub with_energy: bool,
}

/// Configuration file contents.
#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FileConfig {
    pub problem: Option<Problem>,
    pub k: Option<f64>,
    pub p: Option<f64>,
    pub branch: Option<Branch>,
    pub alpha_list: Option<Vec<f64>>,
    pub t: Option<f64>,
    pub x: Option<f64>,
    pub preset: Option<Preset>,
    pub grid: Option<String>,
    pub format: Option<Format>,
    pub out: Option<PathBuf>,
    pub only: Option<String>,
    pub seed: Option<u64>,
    pub gamma: Option<f64>,
    pub include_energy: Option<bool>,
    /// `(k, p)` pairs for `verify`.
    pub sweep: Option<Vec<(f64, f64)>>,
    pub quadrature: Option<SchemeSettings>,
    pub log_grid: Option<LogGridSettings>,
    pub route: Option<DirichletRoute>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }
}

/// Flags over file, resolved once.
#[derive(Debug, Default)]
pub struct Settings {
    pub problem: Option<Problem>,
    pub k: Option<f64>,
    pub p: Option<f64>,
    pub branch: Option<Branch>,
    pub alpha_list: Option<Vec<f64>>,
    pub t: Option<f64>,
    pub x: Option<f64>,
    pub preset: Option<Preset>,
    pub grid: Option<String>,
    pub format: Option<Format>,
    pub out: Option<PathBuf>,
    pub only: Option<String>,
    pub seed: Option<u64>,
    pub gamma: Option<f64>,
    pub include_energy: bool,
    pub sweep: Option<Vec<(f64, f64)>>,
    pub quadrature: SchemeSettings,
    pub log_grid: LogGridSettings,
    pub route: DirichletRoute,
}

impl Settings {
    pub fn resolve(flags: Flags) -> Result<Self, CliError> {
        let file = match &flags.cfg {
            Some(path) => FileConfig::load(path)?,
            None => FileConfig::default(),
        };
        Ok(Self {
            problem: flags.problem.or(file.problem),
            k: flags.k.or(file.k),
            p: flags.p.or(file.p),
            branch: flags.branch.or(file.branch),
            alpha_list: flags.alpha_list.or(file.alpha_list),
            t: flags.t.or(file.t),
            x: flags.x.or(file.x),
            preset: flags.preset.or(file.preset),
            grid: flags.grid.or(file.grid),
            format: flags.format.or(file.format),
            out: flags.out.or(file.out),
            only: flags.only.or(file.only),
            seed: flags.seed.or(file.seed),
            gamma: flags.gamma.or(file.gamma),
            include_energy: flags.with_energy || file.include_energy.unwrap_or(false),
            sweep: file.sweep,
            quadrature: file.quadrature.unwrap_or_default(),
            log_grid: file.log_grid.unwrap_or_default(),
            route: file.route.unwrap_or_default(),
        })
    }
}

/// Parse `t0:t1:nt,x0:x1:nx`.
pub fn parse_grid(s: &str) -> Result<GridSpec<f64>, CliError> {
    let bad = || CliError::Config(format!("grid `{s}` is not of the form t0:t1:nt,x0:x1:nx"));
    let (ts, xs) = s.split_once(',').ok_or_else(bad)?;
    let axis = |a: &str| -> Result<(f64, f64, usize), CliError> {
        let parts: Vec<&str> = a.split(':').collect();
        if parts.len() != 3 {
            return Err(bad());
        }
        let lo = parts[0].trim().parse().map_err(|_| bad())?;
        let hi = parts[1].trim().parse().map_err(|_| bad())?;
        let n = parts[2].trim().parse().map_err(|_| bad())?;
        Ok((lo, hi, n))
    };
    let (t0, t1, nt) = axis(ts)?;
    let (x0, x1, nx) = axis(xs)?;
    Ok(GridSpec::uniform(t0, t1, nt, x0, x1, nx)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_parsing() {
        let g = parse_grid("0.1:1:10,-2:2:8").unwrap();
        assert_eq!(g.t.len(), 10);
        assert_eq!(g.x.len(), 8);
        assert!(g.x.iter().all(|&x| x != 0.0));
        assert!(parse_grid("0.1:1,-2:2:8").is_err());
        assert!(parse_grid("a:1:3,-2:2:8").is_err());
    }

    #[test]
    fn flags_win_over_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cfg.json");
        std::fs::write(&path, r#"{"k": 0.5, "p": 3, "branch": "h1"}"#).unwrap();
        let flags = Flags {
            k: Some(2.0),
            cfg: Some(path),
            ..Default::default()
        };
        let s = Settings::resolve(flags).unwrap();
        assert_eq!(s.k, Some(2.0));
        assert_eq!(s.p, Some(3.0));
        assert_eq!(s.branch, Some(Branch::H1Branch));
    }
}
