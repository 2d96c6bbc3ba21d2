use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::atomic::OptimizerConfig;
use crate::channel::SignalParams;
use crate::discrimination::AscentConfig;
use crate::error::{Error, Result};
use crate::tolerances::Tolerances;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SignalKind {
    /// `alpha_1 = -alpha_2`.
    Bpsk,
    /// `alpha_1 = 0`.
    Ook,
}

/// `steps` equally spaced values from `start` to `stop` inclusive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SigmaGrid {
    pub start: f64,
    pub stop: f64,
    pub steps: usize,
}

impl SigmaGrid {
    pub fn points(&self) -> Vec<f64> {
        if self.steps <= 1 {
            return vec![self.start];
        }
        let span = self.stop - self.start;
        let last = (self.steps - 1) as f64;
        (0..self.steps)
            .map(|i| if i + 1 == self.steps { self.stop } else { self.start + span * i as f64 / last })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum DisplacementMode {
    /// `beta = alpha_1`.
    #[default]
    NullFirst,
    /// Chosen per grid point, separately for each figure of merit.
    Optimized,
    Fixed(f64),
}

fn default_visibility() -> f64 {
    0.998
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum ReceiverSpec {
    Helstrom,
    Accinfo,
    Atomic,
    Pnr {
        resolution: usize,
        #[serde(default = "default_visibility")]
        visibility: f64,
        #[serde(default)]
        displacement: DisplacementMode,
        /// Column suffix; `m<resolution>` when absent.
        #[serde(default)]
        label: Option<String>,
    },
}

fn default_priors() -> [f64; 2] {
    [0.5, 0.5]
}

fn default_quadrature() -> usize {
    64
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub signal: SignalKind,
    pub mean_photons: f64,
    #[serde(default = "default_priors")]
    pub priors: [f64; 2],
    pub sigma_grid: SigmaGrid,
    #[serde(default)]
    pub fock_cutoff: Option<usize>,
    pub receivers: Vec<ReceiverSpec>,
    #[serde(default)]
    pub output: Option<PathBuf>,
    #[serde(default)]
    pub json_output: Option<PathBuf>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub optimizer: OptimizerConfig,
    #[serde(default)]
    pub ascent: AscentConfig,
    #[serde(default = "default_quadrature")]
    pub quadrature_points: usize,
}

impl SweepConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Config(msg));
        if !(self.mean_photons.is_finite() && self.mean_photons > 0.0) {
            return bad(format!("mean_photons must be positive, got {}", self.mean_photons));
        }
        let [q1, q2] = self.priors;
        if !(q1 >= 0.0 && q2 >= 0.0 && (q1 + q2 - 1.0).abs() <= Tolerances::DEFAULT.prior_sum) {
            return bad(format!("priors ({q1}, {q2}) are not a distribution"));
        }
        if self.signal == SignalKind::Ook && q2 == 0.0 {
            return bad("OOK needs q2 > 0".into());
        }
        let g = &self.sigma_grid;
        if !(g.start.is_finite() && g.stop.is_finite() && g.start >= 0.0 && g.stop >= g.start) {
            return bad(format!("sigma grid [{}, {}] invalid", g.start, g.stop));
        }
        if g.steps == 0 {
            return bad("sigma grid needs at least one point".into());
        }
        if self.receivers.is_empty() {
            return bad("no receivers configured".into());
        }
        if let Some(c) = self.fock_cutoff {
            if c < 1 {
                return bad("fock_cutoff must be >= 1".into());
            }
        }
        if self.quadrature_points < 16 {
            return bad("quadrature_points must be >= 16".into());
        }
        if self.optimizer.starts == 0 {
            return bad("optimizer.starts must be >= 1".into());
        }
        if !(self.ascent.lambda > 0.0) {
            return bad("ascent.lambda must be positive".into());
        }
        let mut labels = Vec::new();
        for r in &self.receivers {
            if let ReceiverSpec::Pnr { resolution, visibility, displacement, .. } = r {
                if *resolution < 1 {
                    return bad("pnr resolution must be >= 1".into());
                }
                if !(0.0..=1.0).contains(visibility) {
                    return bad(format!("pnr visibility {visibility} outside [0, 1]"));
                }
                if let DisplacementMode::Fixed(b) = displacement {
                    if !b.is_finite() {
                        return bad("pnr displacement must be finite".into());
                    }
                }
                let label = pnr_label(r).unwrap_or_default();
                if labels.contains(&label) {
                    return bad(format!("duplicate pnr label {label}"));
                }
                labels.push(label);
            }
        }
        Ok(())
    }

    /// `[alpha_1, alpha_2]` at the configured mean photon number.
    pub fn amplitudes(&self) -> [f64; 2] {
        match self.signal {
            SignalKind::Bpsk => {
                // q1 a^2 + q2 a^2 = nbar
                let a = self.mean_photons.sqrt();
                [a, -a]
            }
            SignalKind::Ook => [0.0, (self.mean_photons / self.priors[1]).sqrt()],
        }
    }

    pub fn signal_params(&self, sigma: f64) -> Result<SignalParams> {
        SignalParams::new(self.priors, self.amplitudes(), sigma)
    }

    pub fn has(&self, wanted: &ReceiverSpec) -> bool {
        self.receivers.iter().any(|r| std::mem::discriminant(r) == std::mem::discriminant(wanted))
    }
}

pub(crate) fn pnr_label(r: &ReceiverSpec) -> Option<String> {
    match r {
        ReceiverSpec::Pnr { resolution, label, .. } => Some(label.clone().unwrap_or_else(|| format!("m{resolution}"))),
        _ => None,
    }
}
