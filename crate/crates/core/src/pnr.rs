//! Displaced photon-number-resolving receiver with a maximum-a-posteriori
//! decision.
//!
//! The received amplitude `alpha e^{i phi}` interferes with a local
//! displacement `beta` at visibility `v`, leaving a Poissonian count with mean
//! `alpha^2 + beta^2 - 2 v alpha beta cos(phi)`. The detector resolves counts
//! `0..m-1` and lumps everything from `m` upward into one outcome. The random
//! phase is averaged with Gauss-Hermite quadrature.

use serde::{Deserialize, Serialize};

use crate::channel::SignalParams;
use crate::error::{Error, Result};
use crate::information::mutual_information_from_joint;
use crate::quadrature::GaussHermite;
use crate::tolerances::Tolerances;

const MAX_QUADRATURE_ORDER: usize = 1024;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PnrConfig {
    /// Number of separately resolved counts `m`.
    pub resolution: usize,
    pub visibility: f64,
    pub displacement: f64,
    pub quadrature_points: usize,
}

impl PnrConfig {
    pub fn new(resolution: usize, visibility: f64, displacement: f64) -> Result<Self> {
        let cfg = Self {
            resolution,
            visibility,
            displacement,
            quadrature_points: 64,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.resolution < 1 {
            return Err(Error::InvalidParameter("photon-number resolution must be >= 1".into()));
        }
        if !(0.0..=1.0).contains(&self.visibility) {
            return Err(Error::InvalidParameter(format!("visibility {}", self.visibility)));
        }
        if !self.displacement.is_finite() {
            return Err(Error::InvalidParameter(format!("displacement {}", self.displacement)));
        }
        if self.quadrature_points < 16 {
            return Err(Error::InvalidParameter(format!(
                "quadrature order {} below 16",
                self.quadrature_points
            )));
        }
        Ok(())
    }

    pub fn with_displacement(&self, displacement: f64) -> Self {
        Self { displacement, ..*self }
    }
}

/// Count statistics `[P(0), ..., P(m-1), P(>= m)]` for a fixed mean.
fn binned_poisson(mean: f64, resolution: usize, out: &mut [f64]) {
    let mut term = (-mean).exp();
    let mut resolved = 0.0;
    for (k, slot) in out.iter_mut().take(resolution).enumerate() {
        if k > 0 {
            term *= mean / k as f64;
        }
        *slot = term;
        resolved += term;
    }
    out[resolution] = (1.0 - resolved).max(0.0);
}

fn distribution_at_order(alpha: f64, sigma: f64, cfg: &PnrConfig, rule: Option<&GaussHermite>) -> Vec<f64> {
    let m = cfg.resolution;
    let (b, v) = (cfg.displacement, cfg.visibility);
    let mean = |phi: f64| (alpha * alpha + b * b - 2.0 * v * alpha * b * phi.cos()).max(0.0);
    let mut out = vec![0.0; m + 1];
    let mut scratch = vec![0.0; m + 1];
    match rule {
        None => binned_poisson(mean(0.0), m, &mut out),
        Some(rule) => {
            let scale = std::f64::consts::SQRT_2 * sigma;
            let norm = std::f64::consts::PI.sqrt();
            for (x, w) in rule.nodes.iter().zip(&rule.weights) {
                binned_poisson(mean(scale * x), m, &mut scratch);
                for (o, s) in out.iter_mut().zip(&scratch) {
                    *o += w * s / norm;
                }
            }
        }
    }
    out
}

/// Outcome distribution of length `m + 1`. The quadrature order is doubled
/// until the result moves by less than `quadrature_doubling`.
pub fn outcome_distribution(alpha: f64, sigma: f64, cfg: &PnrConfig) -> Result<Vec<f64>> {
    cfg.validate()?;
    if !sigma.is_finite() || sigma < 0.0 {
        return Err(Error::InvalidParameter(format!("phase diffusion sigma {sigma}")));
    }
    if sigma == 0.0 {
        return Ok(distribution_at_order(alpha, sigma, cfg, None));
    }
    let tol = Tolerances::DEFAULT;
    let mut order = cfg.quadrature_points;
    let mut current = distribution_at_order(alpha, sigma, cfg, Some(&*GaussHermite::cached(order)?));
    loop {
        let doubled = order * 2;
        let refined = distribution_at_order(alpha, sigma, cfg, Some(&*GaussHermite::cached(doubled)?));
        let change = current
            .iter()
            .zip(&refined)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        if change < tol.quadrature_doubling {
            return Ok(refined);
        }
        if doubled >= MAX_QUADRATURE_ORDER {
            return Err(Error::QuadratureNotConverged { order: doubled, change });
        }
        order = doubled;
        current = refined;
    }
}

/// Joint table `q_x P(k|x)`, rows indexed by the input.
pub fn joint_table(sig: &SignalParams, cfg: &PnrConfig) -> Result<[Vec<f64>; 2]> {
    sig.validate()?;
    let mut rows = [Vec::new(), Vec::new()];
    for x in 0..2 {
        let dist = outcome_distribution(sig.alphas[x], sig.sigma, cfg)?;
        rows[x] = dist.into_iter().map(|p| sig.priors[x] * p).collect();
    }
    Ok(rows)
}

/// `1 - sum_k max_x q_x P(k|x)`.
pub fn map_error_probability(sig: &SignalParams, cfg: &PnrConfig) -> Result<f64> {
    let rows = joint_table(sig, cfg)?;
    let correct: f64 = rows[0].iter().zip(&rows[1]).map(|(a, b)| a.max(*b)).sum();
    Ok((1.0 - correct).max(0.0))
}

/// MAP decision per outcome; ties go to the first hypothesis.
pub fn map_decisions(sig: &SignalParams, cfg: &PnrConfig) -> Result<Vec<usize>> {
    let rows = joint_table(sig, cfg)?;
    Ok(rows[0]
        .iter()
        .zip(&rows[1])
        .map(|(a, b)| if a >= b { 0 } else { 1 })
        .collect())
}

/// Mutual information of the full `(m + 1)`-outcome count statistics.
pub fn map_mutual_information(sig: &SignalParams, cfg: &PnrConfig) -> Result<f64> {
    Ok(mutual_information_from_joint(&joint_table(sig, cfg)?))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PnrObjective {
    MinError,
    MaxInformation,
}

/// Displacement chosen by a coarse scan over `[-B, B]`, `B = 2 max|alpha| + 1`,
/// refined by golden-section search around the best grid point. The nulling
/// choices `beta = alpha_1, alpha_2` are always among the candidates.
pub fn optimize_displacement(sig: &SignalParams, base: &PnrConfig, objective: PnrObjective) -> Result<(f64, f64)> {
    let sign = match objective {
        PnrObjective::MinError => 1.0,
        PnrObjective::MaxInformation => -1.0,
    };
    let cost = |beta: f64| -> Result<f64> {
        let cfg = base.with_displacement(beta);
        Ok(sign
            * match objective {
                PnrObjective::MinError => map_error_probability(sig, &cfg)?,
                PnrObjective::MaxInformation => map_mutual_information(sig, &cfg)?,
            })
    };
    let bound = 2.0 * sig.alphas[0].abs().max(sig.alphas[1].abs()) + 1.0;
    const GRID: usize = 120;
    let step = 2.0 * bound / GRID as f64;
    let mut best = (sig.alphas[0], cost(sig.alphas[0])?);
    let c2 = cost(sig.alphas[1])?;
    if c2 < best.1 {
        best = (sig.alphas[1], c2);
    }
    let mut grid_best = (0usize, f64::INFINITY);
    for i in 0..=GRID {
        let beta = -bound + step * i as f64;
        let c = cost(beta)?;
        if c < grid_best.1 {
            grid_best = (i, c);
        }
    }
    let centre = -bound + step * grid_best.0 as f64;
    let (mut lo, mut hi) = (centre - step, centre + step);
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    let mut a = hi - ratio * (hi - lo);
    let mut b = lo + ratio * (hi - lo);
    let (mut fa, mut fb) = (cost(a)?, cost(b)?);
    while hi - lo > 1e-9 {
        if fa <= fb {
            hi = b;
            b = a;
            fb = fa;
            a = hi - ratio * (hi - lo);
            fa = cost(a)?;
        } else {
            lo = a;
            a = b;
            fa = fb;
            b = lo + ratio * (hi - lo);
            fb = cost(b)?;
        }
    }
    for (beta, c) in [(centre, grid_best.1), (a, fa), (b, fb)] {
        if c < best.1 {
            best = (beta, c);
        }
    }
    Ok((best.0, sign * best.1))
}
