//! Fan, bundle and polynomial files.
//!
//! Fans and bundles are JSON. Projectivized fans carry a
//! `projective_bundle` sidecar with the base fan and divisors so they can
//! be read back as bundles.

use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::bundle::{projectivize, ProjectivizedFan, RayLabel};
use crate::divisor::TorusInvariantDivisor;
use crate::fan::Fan;
use crate::poly::{parse_polynomial, QPolynomial, VariableNames};

/// A diagnostic pointing into an input file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FileError {
    pub path: String,
    /// `line N, column M` or a field path such as `rays[2]`.
    pub location: Option<String>,
    pub message: String,
}

impl fmt::Display for FileError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.location {
            Some(loc) => write!(f, "{}: {}: {}", self.path, loc, self.message),
            None => write!(f, "{}: {}", self.path, self.message),
        }
    }
}

impl std::error::Error for FileError {}

impl FileError {
    fn new(path: &str, location: Option<String>, message: impl Into<String>) -> Self {
        FileError { path: path.to_string(), location, message: message.into() }
    }

    fn at(path: &str, field: impl Into<String>, message: impl Into<String>) -> Self {
        Self::new(path, Some(field.into()), message)
    }

    fn json(path: &str, e: serde_json::Error) -> Self {
        let msg = e.to_string();
        // serde_json appends " at line L column C"; move it to the front.
        let msg = match msg.rfind(" at line ") {
            Some(k) if e.line() > 0 => msg[..k].to_string(),
            _ => msg,
        };
        let loc = (e.line() > 0).then(|| format!("line {}, column {}", e.line(), e.column()));
        Self::new(path, loc, msg)
    }
}

type FileResult<T> = std::result::Result<T, FileError>;

fn read(path: &Path) -> FileResult<String> {
    std::fs::read_to_string(path).map_err(|e| FileError::new(&path.display().to_string(), None, e.to_string()))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FanFile {
    pub rank: usize,
    pub rays: Vec<Vec<i64>>,
    pub max_cones: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<RayLabel>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub projective_bundle: Option<BundleSidecar>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BaseFan {
    pub rank: usize,
    pub rays: Vec<Vec<i64>>,
    pub max_cones: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BundleSidecar {
    pub base: BaseFan,
    pub divisors: Vec<Vec<i64>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BundleFile {
    pub divisors: Vec<Vec<i64>>,
}

/// Structural checks that serde cannot express: lengths and indices.
fn check_shape(path: &str, prefix: &str, rank: usize, rays: &[Vec<i64>], cones: &[Vec<usize>]) -> FileResult<()> {
    for (i, r) in rays.iter().enumerate() {
        if r.len() != rank {
            return Err(FileError::at(
                path,
                format!("{prefix}rays[{i}]"),
                format!("expected {rank} coordinates, found {}", r.len()),
            ));
        }
    }
    for (c, cone) in cones.iter().enumerate() {
        for (k, &idx) in cone.iter().enumerate() {
            if idx >= rays.len() {
                return Err(FileError::at(
                    path,
                    format!("{prefix}max_cones[{c}][{k}]"),
                    format!("ray index {idx} out of range (fan has {} rays)", rays.len()),
                ));
            }
        }
    }
    Ok(())
}

fn check_divisors(path: &str, field: &str, divisors: &[Vec<i64>], l: usize) -> FileResult<()> {
    if divisors.len() < 2 {
        return Err(FileError::at(path, field, format!("need at least two line bundles, found {}", divisors.len())));
    }
    for (j, d) in divisors.iter().enumerate() {
        if d.len() != l {
            return Err(FileError::at(
                path,
                format!("{field}[{j}]"),
                format!("expected {l} coefficients (one per ray), found {}", d.len()),
            ));
        }
    }
    Ok(())
}

impl FanFile {
    pub fn parse(path: &str, text: &str) -> FileResult<FanFile> {
        let f: FanFile = serde_json::from_str(text).map_err(|e| FileError::json(path, e))?;
        check_shape(path, "", f.rank, &f.rays, &f.max_cones)?;
        if let Some(labels) = &f.labels {
            if labels.len() != f.rays.len() {
                return Err(FileError::at(
                    path,
                    "labels",
                    format!("expected {} labels, found {}", f.rays.len(), labels.len()),
                ));
            }
        }
        if let Some(side) = &f.projective_bundle {
            let b = &side.base;
            check_shape(path, "projective_bundle.base.", b.rank, &b.rays, &b.max_cones)?;
            check_divisors(path, "projective_bundle.divisors", &side.divisors, b.rays.len())?;
        }
        Ok(f)
    }

    pub fn load(path: &Path) -> FileResult<FanFile> {
        Self::parse(&path.display().to_string(), &read(path)?)
    }

    pub fn fan(&self) -> Fan {
        Fan::unchecked(self.rank, self.rays.clone(), self.max_cones.clone())
    }

    pub fn from_fan(fan: &Fan) -> FanFile {
        FanFile {
            rank: fan.rank(),
            rays: fan.rays().to_vec(),
            max_cones: fan.max_cones().to_vec(),
            labels: None,
            projective_bundle: None,
        }
    }

    pub fn from_projectivized(p: &ProjectivizedFan) -> FanFile {
        let base = p.base();
        FanFile {
            labels: Some(p.labels()),
            projective_bundle: Some(BundleSidecar {
                base: BaseFan { rank: base.rank(), rays: base.rays().to_vec(), max_cones: base.max_cones().to_vec() },
                divisors: p.bundle().divisors().iter().map(|d| d.coeffs.clone()).collect(),
            }),
            ..Self::from_fan(p.fan())
        }
    }

    /// Rebuilds the projectivization from the sidecar and checks that it
    /// reproduces the stored fan.
    pub fn projectivized(&self, path: &str) -> FileResult<Option<ProjectivizedFan>> {
        let Some(side) = &self.projective_bundle else {
            return Ok(None);
        };
        let base = Fan::unchecked(side.base.rank, side.base.rays.clone(), side.base.max_cones.clone());
        let divisors = side.divisors.iter().cloned().map(TorusInvariantDivisor::new).collect();
        let p = projectivize(&base, divisors).map_err(|e| FileError::at(path, "projective_bundle", e.to_string()))?;
        if p.fan() != &self.fan() {
            return Err(FileError::at(
                path,
                "projective_bundle",
                "rays and cones do not match the projectivization of the stored base and divisors",
            ));
        }
        Ok(Some(p))
    }

    /// Canonical text: pretty JSON with sorted keys and a trailing newline.
    pub fn to_json(&self) -> String {
        to_canonical_json(self)
    }
}

impl BundleFile {
    pub fn parse(path: &str, text: &str, num_rays: usize) -> FileResult<BundleFile> {
        let b: BundleFile = serde_json::from_str(text).map_err(|e| FileError::json(path, e))?;
        check_divisors(path, "divisors", &b.divisors, num_rays)?;
        Ok(b)
    }

    pub fn load(path: &Path, num_rays: usize) -> FileResult<BundleFile> {
        Self::parse(&path.display().to_string(), &read(path)?, num_rays)
    }

    pub fn divisors(&self) -> Vec<TorusInvariantDivisor> {
        self.divisors.iter().cloned().map(TorusInvariantDivisor::new).collect()
    }
}

/// One polynomial per line; blank lines and `#` comments are skipped.
pub fn parse_polyfile(path: &str, text: &str, names: &VariableNames) -> FileResult<Vec<QPolynomial>> {
    let mut out = Vec::new();
    for (k, line) in text.lines().enumerate() {
        let body = line.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let p =
            parse_polynomial(body, names).map_err(|e| FileError::at(path, format!("line {}", k + 1), e.to_string()))?;
        out.push(p);
    }
    Ok(out)
}

pub fn load_polyfile(path: &Path, names: &VariableNames) -> FileResult<Vec<QPolynomial>> {
    parse_polyfile(&path.display().to_string(), &read(path)?, names)
}

/// Pretty JSON with object keys sorted, ending in a newline.
pub fn to_canonical_json<T: Serialize>(value: &T) -> String {
    // serde_json::Value keeps object keys in a BTreeMap.
    let v = serde_json::to_value(value).expect("report types serialize to JSON");
    let mut s = serde_json::to_string_pretty(&v).expect("JSON values print");
    s.push('\n');
    s
}
