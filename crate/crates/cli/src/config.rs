//! JSON run configuration.

use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use thiserror::Error;
use zollspec_core::polysphere::{AmbientPolynomial, MonomialSpec};
use zollspec_core::pseudospec::{Resolution, Window};

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("config is not valid: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("lmax below potential degree: lmax = {lmax}, degree = {degree}")]
    LmaxBelowDegree { lmax: usize, degree: usize },
    #[error("field `{field}`: {message}")]
    Invalid {
        field: &'static str,
        message: String,
    },
    #[error("cannot read config {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

fn default_window() -> Window {
    Window {
        re_min: 0.0,
        re_max: 30.0,
        im_min: -3.0,
        im_max: 3.0,
    }
}

fn default_resolution() -> Resolution {
    Resolution { nx: 64, ny: 48 }
}

fn default_eps() -> Vec<f64> {
    vec![1e-1, 1e-2, 1e-3]
}

fn default_k_list() -> Vec<usize> {
    vec![5, 10]
}

fn default_samples() -> usize {
    2000
}

fn default_output_dir() -> PathBuf {
    PathBuf::from(".")
}

fn default_angles() -> usize {
    360
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// Potential `V` as a list of monomials `(re + i im) x^px y^py z^pz`.
    pub potential: Vec<MonomialSpec>,
    pub lmax: usize,
    #[serde(default = "default_window")]
    pub window: Window,
    #[serde(default = "default_resolution")]
    pub resolution: Resolution,
    #[serde(default = "default_eps")]
    pub eps_list: Vec<f64>,
    #[serde(default = "default_k_list")]
    pub k_list: Vec<usize>,
    #[serde(default = "default_samples")]
    pub samples: usize,
    #[serde(default = "default_output_dir")]
    pub output_dir: PathBuf,
    #[serde(default)]
    pub seed: u64,
    /// Normal of the geodesic used by the quasimode command; by default the
    /// lattice point with the most negative bracket.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub geodesic: Option<[f64; 3]>,
    #[serde(default = "default_angles")]
    pub n_angles: usize,
}

impl RunConfig {
    pub fn potential(&self) -> AmbientPolynomial {
        AmbientPolynomial::from_monomials(&self.potential)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        for (i, m) in self.potential.iter().enumerate() {
            if !m.re.is_finite() || !m.im.is_finite() {
                return Err(ConfigError::Invalid {
                    field: "potential",
                    message: format!("entry {i} has a non-finite coefficient"),
                });
            }
        }
        let degree = self.potential().degree_or_zero();
        if self.lmax < degree {
            return Err(ConfigError::LmaxBelowDegree {
                lmax: self.lmax,
                degree,
            });
        }
        let w = &self.window;
        if ![w.re_min, w.re_max, w.im_min, w.im_max]
            .iter()
            .all(|v| v.is_finite())
            || !w.is_nonempty()
        {
            return Err(ConfigError::Invalid {
                field: "window",
                message: "must be finite with re_min < re_max and im_min < im_max".into(),
            });
        }
        if self.resolution.nx < 2 || self.resolution.ny < 2 {
            return Err(ConfigError::Invalid {
                field: "resolution",
                message: "nx and ny must be at least 2".into(),
            });
        }
        if let Some(e) = self.eps_list.iter().find(|e| !(**e > 0.0 && e.is_finite())) {
            return Err(ConfigError::Invalid {
                field: "eps_list",
                message: format!("eps must be strictly positive, got {e}"),
            });
        }
        if self.samples < 100 {
            return Err(ConfigError::Invalid {
                field: "samples",
                message: format!("need at least 100, got {}", self.samples),
            });
        }
        if self.n_angles < 8 {
            return Err(ConfigError::Invalid {
                field: "n_angles",
                message: format!("need at least 8, got {}", self.n_angles),
            });
        }
        if let Some(g) = self.geodesic {
            let norm = g.iter().map(|v| v * v).sum::<f64>().sqrt();
            if !norm.is_finite() || norm == 0.0 {
                return Err(ConfigError::Invalid {
                    field: "geodesic",
                    message: "normal must be a nonzero finite vector".into(),
                });
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }
}

/// Parses and validates a JSON configuration; unknown keys are rejected by
/// name and syntax errors carry line and column.
pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    let cfg: RunConfig = serde_json::from_str(text)?;
    cfg.validate()?;
    Ok(cfg)
}

pub fn load_config(path: &std::path::Path) -> Result<RunConfig, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_config(&text)
}
