use std::fmt;
use std::fs;
use std::io::Read;
use std::path::Path;

use anyhow::{Context, Result};
use dwmec::{Point, SiteSet};
use serde::Deserialize;

/// Malformed input: unreadable file, bad JSON or a missing field.
#[derive(Debug)]
pub struct ParseError(pub String);

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub sites: Vec<[f64; 2]>,
    #[serde(default)]
    pub p: Option<[f64; 2]>,
    #[serde(default, rename = "C")]
    pub c: Option<f64>,
    /// Seed for the randomized boundary construction.
    #[serde(default)]
    pub seed: Option<u64>,
    /// Snap tolerance in normalized units; `--tolerance` wins over this.
    #[serde(default)]
    pub tolerance: Option<f64>,
}

impl ProblemFile {
    pub fn site_set(&self, tolerance: Option<f64>) -> dwmec::Result<SiteSet> {
        let pts: Vec<Point> = self.sites.iter().map(|&[x, y]| Point::new(x, y)).collect();
        let tol = tolerance.or(self.tolerance).unwrap_or(dwmec::DISTANCE_TOL);
        SiteSet::with_tolerance(&pts, tol)
    }

    pub fn weight_point(&self) -> Result<Point> {
        let [x, y] = self.p.ok_or_else(|| ParseError("input has no weight point \"p\"".into()))?;
        Ok(Point::new(x, y))
    }

    pub fn budget(&self) -> Result<f64> {
        Ok(self.c.ok_or_else(|| ParseError("input has no budget \"C\"".into()))?)
    }
}

fn read_source(path: &Path) -> Result<String> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(|e| ParseError(format!("reading stdin: {e}")))?;
        return Ok(s);
    }
    fs::read_to_string(path).map_err(|e| ParseError(format!("reading {}: {e}", path.display())).into())
}

pub fn read_problem(path: &Path) -> Result<ProblemFile> {
    let text = read_source(path)?;
    serde_json::from_str(&text)
        .map_err(|e| ParseError(format!("{}: {e}", path.display())))
        .context("parsing problem file")
}

/// A batch file is a JSON array of `[x, y]` weight points.
pub fn read_batch(path: &Path) -> Result<Vec<Point>> {
    let text = read_source(path)?;
    let pts: Vec<[f64; 2]> = serde_json::from_str(&text).map_err(|e| ParseError(format!("{}: {e}", path.display())))?;
    Ok(pts.into_iter().map(|[x, y]| Point::new(x, y)).collect())
}
