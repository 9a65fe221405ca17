//! Sweep specification: the JSON contract for grid runs, its validation,
//! and the resolution of user-facing parameter spellings (degree-suffixed
//! names, the Schmidt number K) into the radians-only internal parameters.

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::f64::consts::PI;
use thiserror::Error;

use biphoton_core::biphoton::{alpha_from_schmidt, SchmidtBranch};

/// Largest number of variable axes a sweep may have.
pub const MAX_AXES: usize = 2;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("sweep spec is not valid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unknown parameter '{name}' (expected eta, theta_i, alpha, beta, or K, optionally *_deg)")]
    UnknownParameter { name: String },
    #[error("parameter '{name}' appears more than once (axes and fixed values share one namespace; '{name}_deg' and '{name}' are the same parameter)")]
    DuplicateParameter { name: String },
    #[error("K and alpha are two spellings of the same degree of freedom; give exactly one")]
    ConflictingParameters,
    #[error("{count} variable axes requested, but a sweep has at most {MAX_AXES}")]
    TooManyAxes { count: usize },
    #[error("axis '{name}': {reason}")]
    BadAxis { name: String, reason: String },
    #[error("output '{output}' produces a table per parameter point and cannot be swept; remove the axes and give fixed values only")]
    UnexpectedAxes { output: String },
    #[error("output '{output}' needs parameter '{name}', which is neither an axis nor fixed")]
    MissingParameter { output: String, name: String },
    #[error("parameter '{name}' is not used by output '{output}'")]
    UnusedParameter { output: String, name: String },
    #[error("field '{name}' is only meaningful here {context}")]
    MisplacedField { name: String, context: String },
    #[error("invalid value for '{name}': {reason}")]
    BadValue { name: String, reason: String },
}

/// The quantity a sweep evaluates at every grid point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Quantity {
    GPhi,
    GProj,
    PAa,
    PAbSq,
    Schmidt,
    Spectrum,
    Trajectory,
}

impl Quantity {
    pub fn as_str(self) -> &'static str {
        match self {
            Quantity::GPhi => "g_phi",
            Quantity::GProj => "g_proj",
            Quantity::PAa => "p_aa",
            Quantity::PAbSq => "p_ab_sq",
            Quantity::Schmidt => "schmidt",
            Quantity::Spectrum => "spectrum",
            Quantity::Trajectory => "trajectory",
        }
    }

    /// Canonical parameters the quantity consumes.
    fn required(self) -> &'static [&'static str] {
        match self {
            Quantity::PAa | Quantity::PAbSq | Quantity::Trajectory => &["eta", "theta_i"],
            Quantity::GPhi | Quantity::GProj => &["eta", "theta_i", "alpha", "beta"],
            Quantity::Schmidt => &["alpha"],
            Quantity::Spectrum => &["alpha", "beta", "theta_i"],
        }
    }

    /// Whether the quantity is a table (one dataset per parameter point)
    /// rather than a scalar per grid point.
    pub fn is_table(self) -> bool {
        matches!(self, Quantity::Spectrum | Quantity::Trajectory)
    }

    fn uses_samples(self) -> bool {
        !matches!(self, Quantity::Schmidt | Quantity::Spectrum)
    }
}

/// One variable axis of a sweep grid.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Axis {
    pub name: String,
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl Axis {
    /// The axis's grid values in sweep order.
    pub fn values(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.min];
        }
        (0..self.count)
            .map(|k| self.min + (self.max - self.min) * k as f64 / (self.count - 1) as f64)
            .collect()
    }
}

/// A sweep request: up to [`MAX_AXES`] variable axes, fixed values for the
/// remaining parameters, and the quantity to evaluate.
///
/// Parameter names are `eta`, `theta_i`, `alpha`, `beta`, and `K`; the
/// angles also accept a `_deg` suffix (values in degrees). `K` is mapped
/// to `alpha` through the Schmidt-number inversion on the branch named by
/// `schmidt_branch` (default `lower`); giving both `K` and `alpha` is an
/// error. `window` applies to spectrum output, `samples` to anything that
/// simulates a transit.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    #[serde(default)]
    pub axes: Vec<Axis>,
    #[serde(default)]
    pub fixed: BTreeMap<String, f64>,
    pub output: Quantity,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schmidt_branch: Option<SchmidtBranch>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
}

/// A user-facing parameter spelling reduced to its canonical name plus the
/// factor that converts the given value to radians.
fn canonicalize(name: &str) -> Result<(&'static str, f64), ConfigError> {
    const ANGLES: [&str; 4] = ["eta", "theta_i", "alpha", "beta"];
    if name == "K" {
        return Ok(("K", 1.0));
    }
    for angle in ANGLES {
        if name == angle {
            return Ok((angle, 1.0));
        }
        if let Some(stem) = name.strip_suffix("_deg") {
            if stem == angle {
                return Ok((angle, PI / 180.0));
            }
        }
    }
    Err(ConfigError::UnknownParameter { name: name.to_string() })
}

/// One grid point resolved to canonical radians-only parameters.
#[derive(Debug, Clone, Copy, Default)]
pub struct Point {
    pub eta: Option<f64>,
    pub theta_i: Option<f64>,
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
}

impl Point {
    fn set(&mut self, canonical: &str, value: f64) {
        match canonical {
            "eta" => self.eta = Some(value),
            "theta_i" => self.theta_i = Some(value),
            "alpha" => self.alpha = Some(value),
            "beta" => self.beta = Some(value),
            other => unreachable!("canonicalize() only passes known names, got {other}"),
        }
    }

    pub fn get(&self, canonical: &str) -> Option<f64> {
        match canonical {
            "eta" => self.eta,
            "theta_i" => self.theta_i,
            "alpha" => self.alpha,
            "beta" => self.beta,
            _ => None,
        }
    }
}

/// The fully validated form of a sweep: grid axes in canonical units plus
/// the resolved fixed parameters.
#[derive(Debug, Clone)]
pub struct ResolvedSweep {
    pub spec: SweepSpec,
    /// Raw axis values (user units) in sweep order, one list per axis.
    pub axis_values: Vec<Vec<f64>>,
    /// Per-axis conversion to canonical units applied after K-mapping.
    canonical_axes: Vec<(&'static str, f64)>,
    fixed_point: Point,
    branch: SchmidtBranch,
    pub window: u32,
    pub samples: usize,
}

impl ResolvedSweep {
    /// Number of grid points (row-major over the axes).
    pub fn len(&self) -> usize {
        self.axis_values.iter().map(Vec::len).product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Raw axis values of grid point `index` in row-major order.
    pub fn raw_axes_at(&self, index: usize) -> Vec<f64> {
        let mut rest = index;
        let mut out = vec![0.0; self.axis_values.len()];
        for (slot, values) in out.iter_mut().zip(&self.axis_values).rev() {
            *slot = values[rest % values.len()];
            rest /= values.len();
        }
        out
    }

    /// Canonical parameters of grid point `index`, with K inverted to α.
    pub fn point_at(&self, index: usize) -> Result<Point, ConfigError> {
        let mut point = self.fixed_point;
        let mut k_value = None;
        for (raw, (name, scale)) in self.raw_axes_at(index).iter().zip(&self.canonical_axes) {
            if *name == "K" {
                k_value = Some(*raw);
            } else {
                point.set(name, raw * scale);
            }
        }
        if let Some(k) = k_value {
            point.alpha = Some(map_schmidt(k, self.branch)?);
        }
        Ok(point)
    }
}

fn map_schmidt(k: f64, branch: SchmidtBranch) -> Result<f64, ConfigError> {
    alpha_from_schmidt(k, branch).map_err(|e| ConfigError::BadValue {
        name: "K".to_string(),
        reason: e.to_string(),
    })
}

/// Validate a parsed spec and resolve every parameter spelling.
pub fn resolve(spec: SweepSpec) -> Result<ResolvedSweep, ConfigError> {
    if spec.axes.len() > MAX_AXES {
        return Err(ConfigError::TooManyAxes { count: spec.axes.len() });
    }
    let output = spec.output;
    if output.is_table() && !spec.axes.is_empty() {
        return Err(ConfigError::UnexpectedAxes { output: output.as_str().to_string() });
    }

    // Canonicalize every mentioned parameter once, rejecting duplicates.
    let mut seen: Vec<&'static str> = Vec::new();
    let mut note = |canonical: &'static str| -> Result<(), ConfigError> {
        if seen.contains(&canonical) {
            return Err(ConfigError::DuplicateParameter { name: canonical.to_string() });
        }
        seen.push(canonical);
        Ok(())
    };

    let mut canonical_axes = Vec::new();
    for axis in &spec.axes {
        let (canonical, scale) = canonicalize(&axis.name)?;
        note(canonical)?;
        if axis.count == 0 {
            return Err(ConfigError::BadAxis {
                name: axis.name.clone(),
                reason: "count must be at least 1".to_string(),
            });
        }
        if !(axis.min.is_finite() && axis.max.is_finite()) {
            return Err(ConfigError::BadAxis {
                name: axis.name.clone(),
                reason: "min and max must be finite".to_string(),
            });
        }
        canonical_axes.push((canonical, scale));
    }

    let mut fixed_point = Point::default();
    let mut fixed_k = None;
    for (name, value) in &spec.fixed {
        let (canonical, scale) = canonicalize(name)?;
        note(canonical)?;
        if !value.is_finite() {
            return Err(ConfigError::BadValue {
                name: name.clone(),
                reason: "value must be finite".to_string(),
            });
        }
        if canonical == "K" {
            fixed_k = Some(*value);
        } else {
            fixed_point.set(canonical, value * scale);
        }
    }

    if seen.contains(&"K") && seen.contains(&"alpha") {
        return Err(ConfigError::ConflictingParameters);
    }
    if spec.schmidt_branch.is_some() && !seen.contains(&"K") {
        return Err(ConfigError::MisplacedField {
            name: "schmidt_branch".to_string(),
            context: "when K is a parameter".to_string(),
        });
    }
    let branch = spec.schmidt_branch.unwrap_or(SchmidtBranch::Lower);
    if let Some(k) = fixed_k {
        fixed_point.alpha = Some(map_schmidt(k, branch)?);
    }

    // The output must see exactly the parameters it consumes.
    for &name in output.required() {
        let provided = seen.contains(&name) || (name == "alpha" && seen.contains(&"K"));
        if !provided {
            return Err(ConfigError::MissingParameter {
                output: output.as_str().to_string(),
                name: name.to_string(),
            });
        }
    }
    for &name in &seen {
        let used = output.required().contains(&name)
            || (name == "K" && output.required().contains(&"alpha"));
        if !used {
            return Err(ConfigError::UnusedParameter {
                output: output.as_str().to_string(),
                name: name.to_string(),
            });
        }
    }

    if spec.window.is_some() && output != Quantity::Spectrum {
        return Err(ConfigError::MisplacedField {
            name: "window".to_string(),
            context: "for spectrum output".to_string(),
        });
    }
    let window = spec.window.unwrap_or(biphoton_core::pump::DEFAULT_WINDOW);
    if !(1..=biphoton_core::pump::MAX_WINDOW).contains(&window) {
        return Err(ConfigError::BadValue {
            name: "window".to_string(),
            reason: format!("must lie in 1..={}", biphoton_core::pump::MAX_WINDOW),
        });
    }

    if spec.samples.is_some() && !output.uses_samples() {
        return Err(ConfigError::MisplacedField {
            name: "samples".to_string(),
            context: "for outputs that simulate a transit".to_string(),
        });
    }
    let samples = spec.samples.unwrap_or(biphoton_core::circuit::DEFAULT_LENS_SAMPLES);
    if samples < 2 {
        return Err(ConfigError::BadValue {
            name: "samples".to_string(),
            reason: "at least 2 samples per lens are required".to_string(),
        });
    }

    let axis_values = spec.axes.iter().map(Axis::values).collect();
    Ok(ResolvedSweep { spec, axis_values, canonical_axes, fixed_point, branch, window, samples })
}
