//! Sweeps of every figure of merit over a grid of phase-diffusion strengths.

mod config;
mod crossing;
mod output;

pub use config::{DisplacementMode, ReceiverSpec, SigmaGrid, SignalKind, SweepConfig};
pub use crossing::find_crossing;
pub use output::{format_float, read_csv_columns, write_csv, write_json, write_outputs};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::atomic::{self, kraus_operators, AtomicParams, Objective, OptimizerConfig, SeriesConfig};
use crate::discrimination::{accessible_information_from, helstrom_bound, AscentConfig, BinaryPovm};
use crate::error::{Error, Result};
use crate::fock::FockDim;
use crate::pnr::{self, PnrConfig, PnrObjective};

/// One photon-counting receiver at one grid point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PnrResult {
    pub label: String,
    pub resolution: usize,
    pub p_error: f64,
    pub i_mutual: f64,
    /// Displacement used for `p_error`.
    pub beta_error: f64,
    /// Displacement used for `i_mutual`.
    pub beta_information: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
pub struct Diagnostics {
    pub cutoff: usize,
    pub ascent_residual: Option<f64>,
    pub ascent_converged: Option<bool>,
    pub ascent_iterations: Option<usize>,
    pub ascent_restart_spread: Option<f64>,
    pub ascent_restart_values: Vec<f64>,
    pub atomic_start_spread: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub sigma: f64,
    pub p_helstrom: Option<f64>,
    pub p_atomic_opt: Option<f64>,
    /// Receiver parameters at the error optimum.
    pub atomic_params: Option<AtomicParams>,
    pub i_atomic_opt: Option<f64>,
    /// Receiver parameters at the information optimum.
    pub atomic_info_params: Option<AtomicParams>,
    pub pnr: Vec<PnrResult>,
    pub i_accessible: Option<f64>,
    pub diagnostics: Diagnostics,
}

const ERROR_SLACK: f64 = 1e-9;
const INFORMATION_SLACK: f64 = 1e-4;

impl SweepResult {
    /// Optimality relations that every row must satisfy: no receiver beats
    /// the Helstrom bound or the accessible information.
    pub fn envelope_violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        if let Some(hel) = self.p_helstrom {
            if let Some(p) = self.p_atomic_opt {
                if hel > p + ERROR_SLACK {
                    out.push(format!("sigma {}: atomic error {p} below Helstrom {hel}", self.sigma));
                }
            }
            for r in &self.pnr {
                if hel > r.p_error + ERROR_SLACK {
                    out.push(format!("sigma {}: pnr {} error {} below Helstrom {hel}", self.sigma, r.label, r.p_error));
                }
            }
        }
        if let Some(acc) = self.i_accessible {
            if let Some(i) = self.i_atomic_opt {
                if i > acc + INFORMATION_SLACK {
                    out.push(format!("sigma {}: atomic information {i} above accessible {acc}", self.sigma));
                }
            }
            for r in &self.pnr {
                if r.i_mutual > acc + INFORMATION_SLACK {
                    out.push(format!(
                        "sigma {}: pnr {} information {} above accessible {acc}",
                        self.sigma, r.label, r.i_mutual
                    ));
                }
            }
        }
        out
    }

    pub fn pnr(&self, label: &str) -> Option<&PnrResult> {
        self.pnr.iter().find(|r| r.label == label)
    }
}

/// splitmix64 finalizer.
fn mix_seed(seed: u64, sigma: f64) -> u64 {
    let mut z = seed ^ sigma.to_bits();
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Every configured figure of merit at one value of sigma. The random
/// streams depend only on the seed and sigma, so a single point reproduces
/// the corresponding sweep row.
pub fn run_point(cfg: &SweepConfig, sigma: f64) -> Result<SweepResult> {
    evaluate(cfg, sigma).map_err(|e| Error::AtSigma {
        sigma,
        source: Box::new(e),
    })
}

fn evaluate(cfg: &SweepConfig, sigma: f64) -> Result<SweepResult> {
    let sig = cfg.signal_params(sigma)?;
    let dim = match cfg.fock_cutoff {
        Some(c) => FockDim::new(c)?,
        None => sig.fock_dim(),
    };
    let tol = crate::tolerances::Tolerances::DEFAULT;
    for a in sig.alphas {
        dim.check_amplitude(a, &tol)?;
    }
    let series = SeriesConfig::for_dim(dim);
    let seed = mix_seed(cfg.seed, sigma);
    let needs_states = cfg.has(&ReceiverSpec::Helstrom) || cfg.has(&ReceiverSpec::Accinfo);
    let ens = if needs_states { Some(sig.ensemble(dim)?) } else { None };

    let mut result = SweepResult {
        sigma,
        p_helstrom: None,
        p_atomic_opt: None,
        atomic_params: None,
        i_atomic_opt: None,
        atomic_info_params: None,
        pnr: Vec::new(),
        i_accessible: None,
        diagnostics: Diagnostics {
            cutoff: dim.cutoff(),
            ..Diagnostics::default()
        },
    };

    if let (true, Some(ens)) = (cfg.has(&ReceiverSpec::Helstrom), &ens) {
        result.p_helstrom = Some(helstrom_bound(ens)?);
    }

    if cfg.has(&ReceiverSpec::Atomic) {
        let opt_cfg = OptimizerConfig { seed, ..cfg.optimizer };
        let err = atomic::optimize(Objective::MinError, &sig, series, &opt_cfg)?;
        let info = atomic::optimize(Objective::MaxInformation, &sig, series, &opt_cfg)?;
        result.p_atomic_opt = Some(err.value);
        result.atomic_params = Some(err.params);
        result.i_atomic_opt = Some(info.value);
        result.atomic_info_params = Some(info.params);
        result.diagnostics.atomic_start_spread = Some(err.start_spread());
    }

    if let (true, Some(ens)) = (cfg.has(&ReceiverSpec::Accinfo), &ens) {
        // the information-optimal atomic measurement is one more ascent start
        let mut extra = Vec::new();
        if let Some(p) = result.atomic_info_params {
            let (k1, k2) = kraus_operators(&p, dim);
            extra.push(BinaryPovm::from_kraus(&k1, &k2)?);
        }
        let asc_cfg = AscentConfig { seed, ..cfg.ascent };
        let report = accessible_information_from(ens, &asc_cfg, &extra)?;
        result.i_accessible = Some(report.mutual_information);
        result.diagnostics.ascent_residual = Some(report.stationarity_residual);
        result.diagnostics.ascent_converged = Some(report.converged);
        result.diagnostics.ascent_iterations = Some(report.iterations);
        result.diagnostics.ascent_restart_spread = Some(report.restart_spread());
        result.diagnostics.ascent_restart_values = report.restart_values.clone();
    }

    for spec in &cfg.receivers {
        let ReceiverSpec::Pnr { resolution, visibility, displacement, .. } = spec else {
            continue;
        };
        let base = PnrConfig {
            resolution: *resolution,
            visibility: *visibility,
            displacement: sig.alphas[0],
            quadrature_points: cfg.quadrature_points,
        };
        let ((beta_error, p_error), (beta_information, i_mutual)) = match displacement {
            DisplacementMode::NullFirst | DisplacementMode::Fixed(_) => {
                let beta = match displacement {
                    DisplacementMode::Fixed(b) => *b,
                    _ => sig.alphas[0],
                };
                let c = base.with_displacement(beta);
                (
                    (beta, pnr::map_error_probability(&sig, &c)?),
                    (beta, pnr::map_mutual_information(&sig, &c)?),
                )
            }
            DisplacementMode::Optimized => (
                pnr::optimize_displacement(&sig, &base, PnrObjective::MinError)?,
                pnr::optimize_displacement(&sig, &base, PnrObjective::MaxInformation)?,
            ),
        };
        result.pnr.push(PnrResult {
            label: config::pnr_label(spec).unwrap_or_default(),
            resolution: *resolution,
            p_error,
            i_mutual,
            beta_error,
            beta_information,
        });
    }
    Ok(result)
}

/// One row per grid point, in grid order.
pub fn run_sweep(cfg: &SweepConfig) -> Result<Vec<SweepResult>> {
    cfg.validate()?;
    cfg.sigma_grid
        .points()
        .par_iter()
        .map(|&sigma| run_point(cfg, sigma))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(text: &str) -> SweepConfig {
        SweepConfig::from_json(text).unwrap()
    }

    #[test]
    fn single_point_noiseless() {
        let cfg = config(
            r#"{"signal":"bpsk","mean_photons":0.5,"sigma_grid":{"start":0,"stop":0,"steps":1},
                "receivers":[{"kind":"helstrom"},{"kind":"pnr","resolution":1,"visibility":1.0}]}"#,
        );
        let rows = run_sweep(&cfg).unwrap();
        assert_eq!(rows.len(), 1);
        let hel = rows[0].p_helstrom.unwrap();
        assert!((hel - 0.5 * (1.0 - (1.0 - (-2.0f64).exp()).sqrt())).abs() < 1e-12);
        // Kennedy receiver: 1/2 e^{-4 nbar}
        assert!((rows[0].pnr[0].p_error - 0.5 * (-2.0f64).exp()).abs() < 1e-14);
        assert!(rows[0].p_atomic_opt.is_none());
        assert!(rows[0].envelope_violations().is_empty());
    }

    #[test]
    fn rows_follow_grid_order() {
        let cfg = config(
            r#"{"signal":"ook","mean_photons":0.5,"sigma_grid":{"start":0,"stop":1.2,"steps":7},
                "receivers":[{"kind":"helstrom"}]}"#,
        );
        let rows = run_sweep(&cfg).unwrap();
        let sig: Vec<f64> = rows.iter().map(|r| r.sigma).collect();
        assert_eq!(sig, cfg.sigma_grid.points());
    }

    #[test]
    fn point_reproduces_sweep_row() {
        let cfg = config(
            r#"{"signal":"bpsk","mean_photons":0.75,"sigma_grid":{"start":0,"stop":0.6,"steps":3},"seed":9,
                "optimizer":{"starts":4},"ascent":{"restarts":1},
                "receivers":[{"kind":"atomic"},{"kind":"accinfo"}]}"#,
        );
        let rows = run_sweep(&cfg).unwrap();
        let single = run_point(&cfg, 0.3).unwrap();
        assert_eq!(rows[1], single);
    }

    #[test]
    fn tail_violation_reports_sigma() {
        let cfg = config(
            r#"{"signal":"bpsk","mean_photons":1.0,"fock_cutoff":4,"sigma_grid":{"start":0.5,"stop":0.5,"steps":1},
                "receivers":[{"kind":"helstrom"}]}"#,
        );
        match run_sweep(&cfg) {
            Err(Error::AtSigma { sigma, source }) => {
                assert_eq!(sigma, 0.5);
                assert!(matches!(*source, Error::TailTooHeavy { .. }));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn envelope_check_flags_violations() {
        let mut row = SweepResult {
            sigma: 0.1,
            p_helstrom: Some(0.1),
            p_atomic_opt: Some(0.09),
            atomic_params: None,
            i_atomic_opt: Some(0.5),
            atomic_info_params: None,
            pnr: vec![],
            i_accessible: Some(0.45),
            diagnostics: Diagnostics::default(),
        };
        assert_eq!(row.envelope_violations().len(), 2);
        row.p_atomic_opt = Some(0.1 - 5e-10);
        row.i_atomic_opt = Some(0.45 + 5e-5);
        assert!(row.envelope_violations().is_empty());
    }
}
