//! Run configuration: a flat `key = value` text format, one pair per
//! line, `#` comments. Trivially parseable from any language and
//! diff-friendly; `dump` re-serializes losslessly.

use num_complex::Complex64 as C64;

use crate::error::{EitError, Result};
use crate::lambda_system::{AtomicParams, NoiseModel};
use crate::output::{fmt_float, OutputFormat};

/// Everything one CLI invocation needs.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub params: AtomicParams,
    pub omega_min: f64,
    pub omega_max: f64,
    pub omega_points: usize,
    pub squeezing_r: f64,
    /// Probe envelope used by the consistency check and verify.
    pub probe: C64,
    pub model: NoiseModel,
    pub format: OutputFormat,
    pub output_path: Option<String>,
}

/// Key order is fixed: it defines both the dump layout and which
/// missing key an error names first.
const REQUIRED_KEYS: &[&str] = &[
    "g",
    "density",
    "omega_c_re",
    "omega_c_im",
    "gamma_b",
    "gamma_c",
    "gamma_ba",
    "gamma_ac",
    "gamma_bc_prime",
    "gamma_bc_popexch",
    "gamma_total",
    "length",
    "c_light",
    "omega_min",
    "omega_max",
    "omega_points",
    "squeezing_r",
    "probe_re",
    "probe_im",
    "model",
    "format",
];

impl RunConfig {
    /// Parses the flat key = value format.
    pub fn parse(text: &str) -> Result<Self> {
        let mut pairs = std::collections::HashMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                EitError::InvalidParams(format!("line {}: expected `key = value`", lineno + 1))
            })?;
            let key = key.trim().to_string();
            if !REQUIRED_KEYS.contains(&key.as_str()) && key != "output_path" {
                return Err(EitError::InvalidParams(format!("unknown key `{key}`")));
            }
            if pairs.insert(key.clone(), value.trim().to_string()).is_some() {
                return Err(EitError::InvalidParams(format!("duplicate key `{key}`")));
            }
        }

        for key in REQUIRED_KEYS {
            if !pairs.contains_key(*key) {
                return Err(EitError::InvalidParams(format!("missing key `{key}`")));
            }
        }

        let num = |key: &str| -> Result<f64> {
            pairs[key]
                .parse::<f64>()
                .map_err(|_| EitError::InvalidParams(format!("key `{key}`: not a number: {}", pairs[key])))
        };

        let params = AtomicParams {
            g: num("g")?,
            density: num("density")?,
            omega_c: C64::new(num("omega_c_re")?, num("omega_c_im")?),
            gamma_b: num("gamma_b")?,
            gamma_c: num("gamma_c")?,
            gamma_ba: num("gamma_ba")?,
            gamma_ac: num("gamma_ac")?,
            gamma_bc_prime: num("gamma_bc_prime")?,
            gamma_bc_popexch: num("gamma_bc_popexch")?,
            gamma_total: num("gamma_total")?,
            length: num("length")?,
            c_light: num("c_light")?,
        };
        let omega_points = num("omega_points")? as usize;
        let model = match pairs["model"].as_str() {
            "offdiag" => NoiseModel::OffDiagonal,
            "popexch" => NoiseModel::PopulationExchange,
            other => {
                return Err(EitError::InvalidParams(format!(
                    "key `model`: expected offdiag or popexch, got {other}"
                )))
            }
        };
        let format = OutputFormat::parse(&pairs["format"]).ok_or_else(|| {
            EitError::InvalidParams(format!(
                "key `format`: expected csv or jsonl, got {}",
                pairs["format"]
            ))
        })?;

        let config = Self {
            params,
            omega_min: num("omega_min")?,
            omega_max: num("omega_max")?,
            omega_points,
            squeezing_r: num("squeezing_r")?,
            probe: C64::new(num("probe_re")?, num("probe_im")?),
            model,
            format,
            output_path: pairs.get("output_path").cloned(),
        };
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        self.params.validate()?;
        if self.omega_points < 2 {
            return Err(EitError::InvalidParams(format!(
                "omega_points must be >= 2, got {}",
                self.omega_points
            )));
        }
        if !(self.omega_min < self.omega_max) {
            return Err(EitError::InvalidParams(format!(
                "omega_min ({}) must be below omega_max ({})",
                self.omega_min, self.omega_max
            )));
        }
        if self.squeezing_r < 0.0 {
            return Err(EitError::InvalidParams(format!(
                "squeezing_r must be nonnegative, got {}",
                self.squeezing_r
            )));
        }
        Ok(())
    }

    /// The sideband frequency grid.
    pub fn omega_grid(&self) -> Vec<f64> {
        let n = self.omega_points;
        let step = (self.omega_max - self.omega_min) / (n - 1) as f64;
        (0..n).map(|i| self.omega_min + i as f64 * step).collect()
    }

    /// Serializes in the fixed key order; `parse(dump())` is identity.
    pub fn dump(&self) -> String {
        let p = &self.params;
        let mut out = String::new();
        let mut kv = |key: &str, value: String| {
            out.push_str(key);
            out.push_str(" = ");
            out.push_str(&value);
            out.push('\n');
        };
        kv("g", fmt_float(p.g));
        kv("density", fmt_float(p.density));
        kv("omega_c_re", fmt_float(p.omega_c.re));
        kv("omega_c_im", fmt_float(p.omega_c.im));
        kv("gamma_b", fmt_float(p.gamma_b));
        kv("gamma_c", fmt_float(p.gamma_c));
        kv("gamma_ba", fmt_float(p.gamma_ba));
        kv("gamma_ac", fmt_float(p.gamma_ac));
        kv("gamma_bc_prime", fmt_float(p.gamma_bc_prime));
        kv("gamma_bc_popexch", fmt_float(p.gamma_bc_popexch));
        kv("gamma_total", fmt_float(p.gamma_total));
        kv("length", fmt_float(p.length));
        kv("c_light", fmt_float(p.c_light));
        kv("omega_min", fmt_float(self.omega_min));
        kv("omega_max", fmt_float(self.omega_max));
        kv("omega_points", self.omega_points.to_string());
        kv("squeezing_r", fmt_float(self.squeezing_r));
        kv("probe_re", fmt_float(self.probe.re));
        kv("probe_im", fmt_float(self.probe.im));
        kv(
            "model",
            match self.model {
                NoiseModel::OffDiagonal => "offdiag".to_string(),
                NoiseModel::PopulationExchange => "popexch".to_string(),
            },
        );
        kv("format", self.format.name().to_string());
        if let Some(path) = &self.output_path {
            kv("output_path", path.clone());
        }
        out
    }
}
