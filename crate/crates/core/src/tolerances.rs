//! Numerical tolerances shared by every module.
//!
//! Validating constructors take a `&Tolerances`; the convenience entry
//! points use [`Tolerances::DEFAULT`].

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Tolerances {
    /// Max entrywise |A - A^†| accepted for a Hermitian operator.
    pub hermiticity: f64,
    /// Most negative eigenvalue accepted for a positive operator.
    pub psd_floor: f64,
    /// Allowed excess of a density operator trace above 1.
    pub trace_excess: f64,
    /// Poisson mass allowed beyond the Fock cutoff.
    pub tail: f64,
    /// Smallest cutoff the automatic policy will choose.
    pub min_cutoff: usize,
    /// |q1 + q2 - 1| allowed for priors.
    pub prior_sum: f64,
    /// Entrywise |M1 + M2 - I| allowed for a POVM.
    pub completeness: f64,
    /// Eigenvalues below this fraction of the largest are dropped by the
    /// pseudo-inverse square root.
    pub pinv_relative: f64,
    /// Eigenvalues of the average state below this fraction of the largest
    /// are treated as outside the ensemble support.
    pub support_relative: f64,
    /// Joint probabilities below this contribute nothing to information sums.
    pub probability_floor: f64,
    /// Largest allowed ratio of the last retained series envelope term to the
    /// partial sum.
    pub series_tail: f64,
    /// Allowed deviation of the Gauss-Hermite weight sum from sqrt(pi).
    pub quadrature_norm: f64,
    /// Allowed change of a quadrature result when its order is doubled.
    pub quadrature_doubling: f64,
    /// Iteration cap handed to the eigensolver.
    pub eig_max_iter: usize,
}

impl Tolerances {
    pub const DEFAULT: Tolerances = Tolerances {
        hermiticity: 1e-12,
        psd_floor: 1e-10,
        trace_excess: 1e-12,
        tail: 1e-12,
        min_cutoff: 30,
        prior_sum: 1e-12,
        completeness: 1e-9,
        pinv_relative: 1e-10,
        support_relative: 1e-13,
        probability_floor: 1e-15,
        series_tail: 1e-14,
        quadrature_norm: 1e-8,
        quadrature_doubling: 1e-8,
        eig_max_iter: 100_000,
    };
}

impl Default for Tolerances {
    fn default() -> Self {
        Self::DEFAULT
    }
}
