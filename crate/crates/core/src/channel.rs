//! Gaussian phase diffusion `rho -> E_phi[U(phi) rho U(phi)^†]` with
//! `U(phi) = exp(i phi a^† a)` and `phi ~ N(0, sigma^2)`.
//!
//! In the number basis the channel multiplies `<n|rho|m>` by
//! `exp(-sigma^2 (n - m)^2 / 2)`, so it is applied entrywise in closed form.

use serde::{Deserialize, Serialize};

use crate::discrimination::BinaryEnsemble;
use crate::error::{Error, Result};
use crate::fock::{coherent_amplitudes, number_operator, ComplexMatrix, DensityOperator, FockDim, HermitianOperator};
use crate::tolerances::Tolerances;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseDiffusion {
    sigma: f64,
}

impl PhaseDiffusion {
    pub fn new(sigma: f64) -> Result<Self> {
        if !sigma.is_finite() || sigma < 0.0 {
            return Err(Error::InvalidParameter(format!("phase diffusion sigma {sigma}")));
        }
        Ok(Self { sigma })
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    /// Attenuation of the `|n - m| = distance` coherences.
    pub fn kernel(&self, distance: usize) -> f64 {
        let d = distance as f64;
        (-0.5 * self.sigma * self.sigma * d * d).exp()
    }

    pub fn apply(&self, rho: &DensityOperator) -> DensityOperator {
        let size = rho.size();
        let kernel: Vec<f64> = (0..size).map(|d| self.kernel(d)).collect();
        let m = ComplexMatrix::from_fn(size, size, |n, k| rho.matrix()[(n, k)] * kernel[n.abs_diff(k)]);
        DensityOperator::trusted(HermitianOperator::symmetrized(&m))
    }

    /// Closed-form `N_sigma(|alpha><alpha|)`.
    pub fn coherent(&self, alpha: f64, dim: FockDim) -> Result<DensityOperator> {
        dim.check_amplitude(alpha, &Tolerances::DEFAULT)?;
        let amps = coherent_amplitudes(alpha, dim.size());
        let kernel: Vec<f64> = (0..dim.size()).map(|d| self.kernel(d)).collect();
        let m = ComplexMatrix::from_fn(dim.size(), dim.size(), |n, k| {
            (amps[n] * amps[k] * kernel[n.abs_diff(k)]).into()
        });
        Ok(DensityOperator::trusted(HermitianOperator::symmetrized(&m)))
    }
}

/// `<n|tau|m> = e^{-a^2} e^{-sigma^2 (n-m)^2 / 2} a^{n+m} / sqrt(n! m!)`.
pub fn phase_diffused_coherent(alpha: f64, sigma: f64, dim: FockDim) -> Result<DensityOperator> {
    PhaseDiffusion::new(sigma)?.coherent(alpha, dim)
}

pub fn dephase(rho: &DensityOperator, sigma: f64) -> Result<DensityOperator> {
    Ok(PhaseDiffusion::new(sigma)?.apply(rho))
}

/// `sum_x q_x Tr(tau_x a^† a)`.
pub fn mean_photon_number(ens: &BinaryEnsemble) -> f64 {
    let dim = ens.states()[0].size();
    let num = number_operator(FockDim::new(dim - 1).expect("ensemble dimension >= 2"));
    ens.priors()
        .iter()
        .zip(ens.states())
        .map(|(q, tau)| q * tau.expectation(num.matrix()))
        .sum()
}

/// Two real coherent amplitudes with priors, sent through phase diffusion.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SignalParams {
    pub priors: [f64; 2],
    pub alphas: [f64; 2],
    pub sigma: f64,
}

impl SignalParams {
    pub fn new(priors: [f64; 2], alphas: [f64; 2], sigma: f64) -> Result<Self> {
        let p = Self { priors, alphas, sigma };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let [q1, q2] = self.priors;
        if !(q1 >= 0.0 && q2 >= 0.0 && (q1 + q2 - 1.0).abs() <= Tolerances::DEFAULT.prior_sum) {
            return Err(Error::InvalidPriors(q1, q2));
        }
        if self.alphas.iter().any(|a| !a.is_finite()) {
            return Err(Error::InvalidParameter(format!("amplitudes {:?}", self.alphas)));
        }
        PhaseDiffusion::new(self.sigma)?;
        Ok(())
    }

    /// `q1 a1^2 + q2 a2^2`.
    pub fn mean_photons(&self) -> f64 {
        self.priors[0] * self.alphas[0].powi(2) + self.priors[1] * self.alphas[1].powi(2)
    }

    pub fn with_sigma(&self, sigma: f64) -> Self {
        Self { sigma, ..*self }
    }

    /// Default cutoff for these amplitudes.
    pub fn fock_dim(&self) -> FockDim {
        FockDim::for_amplitudes(&self.alphas, &Tolerances::DEFAULT)
    }

    pub fn ensemble(&self, dim: FockDim) -> Result<BinaryEnsemble> {
        let channel = PhaseDiffusion::new(self.sigma)?;
        let states = [channel.coherent(self.alphas[0], dim)?, channel.coherent(self.alphas[1], dim)?];
        BinaryEnsemble::new(self.priors, states)
    }
}
