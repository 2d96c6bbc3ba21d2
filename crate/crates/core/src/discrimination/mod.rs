//! Figures of merit for discriminating two quantum states.

mod ascent;

pub use ascent::{
    accessible_information, accessible_information_from, accessible_information_outcomes, AscentConfig, AscentReport,
    OutcomeAscentReport,
};

use crate::error::{Error, Result};
use crate::fock::{trace_norm, trace_product, ComplexMatrix, DensityOperator, HermitianOperator};
use crate::information::mutual_information_from_joint;
use crate::tolerances::Tolerances;

/// Priors `(q1, q2)` and states `(tau1, tau2)` on a common space.
#[derive(Debug, Clone)]
pub struct BinaryEnsemble {
    priors: [f64; 2],
    states: [DensityOperator; 2],
}

impl BinaryEnsemble {
    pub fn new(priors: [f64; 2], states: [DensityOperator; 2]) -> Result<Self> {
        let [q1, q2] = priors;
        if !(q1 >= 0.0 && q2 >= 0.0 && (q1 + q2 - 1.0).abs() <= Tolerances::DEFAULT.prior_sum) {
            return Err(Error::InvalidPriors(q1, q2));
        }
        if states[0].size() != states[1].size() {
            return Err(Error::DimensionMismatch {
                expected: states[0].size(),
                found: states[1].size(),
            });
        }
        Ok(Self { priors, states })
    }

    pub fn priors(&self) -> [f64; 2] {
        self.priors
    }

    pub fn states(&self) -> &[DensityOperator; 2] {
        &self.states
    }

    pub fn size(&self) -> usize {
        self.states[0].size()
    }

    /// `q1 tau1 - q2 tau2`.
    pub fn helstrom_operator(&self) -> HermitianOperator {
        self.states[0]
            .operator()
            .combine(self.priors[0], self.states[1].operator(), -self.priors[1])
    }

    /// `q1 tau1 + q2 tau2`.
    pub fn average_state(&self) -> HermitianOperator {
        self.states[0]
            .operator()
            .combine(self.priors[0], self.states[1].operator(), self.priors[1])
    }
}

/// Two-outcome measurement `{M1, M2}`, `M_y >= 0`, `M1 + M2 = I`.
#[derive(Debug, Clone)]
pub struct BinaryPovm {
    elements: [HermitianOperator; 2],
}

impl BinaryPovm {
    pub fn new(m1: HermitianOperator, m2: HermitianOperator) -> Result<Self> {
        Self::with_tolerances(m1, m2, &Tolerances::DEFAULT)
    }

    pub fn with_tolerances(m1: HermitianOperator, m2: HermitianOperator, tol: &Tolerances) -> Result<Self> {
        if m1.size() != m2.size() {
            return Err(Error::DimensionMismatch {
                expected: m1.size(),
                found: m2.size(),
            });
        }
        check_povm(m1.matrix(), m2.matrix(), tol)?;
        for (y, m) in [&m1, &m2].into_iter().enumerate() {
            if !m.is_positive(tol) {
                return Err(Error::InvalidPovm(format!(
                    "element {} has eigenvalue {:.3e}",
                    y + 1,
                    m.min_eigenvalue(tol)?
                )));
            }
        }
        Ok(Self { elements: [m1, m2] })
    }

    /// POVM `{K1^† K1, K2^† K2}` of a two-outcome instrument.
    pub fn from_kraus(k1: &ComplexMatrix, k2: &ComplexMatrix) -> Result<Self> {
        Self::new(
            HermitianOperator::symmetrized(&(k1.adjoint() * k1)),
            HermitianOperator::symmetrized(&(k2.adjoint() * k2)),
        )
    }

    /// The trivial measurement that always answers `outcome`.
    pub fn constant(outcome: usize, size: usize) -> Self {
        let (id, zero) = (HermitianOperator::identity(size), HermitianOperator::zeros(size));
        let elements = if outcome == 0 { [id, zero] } else { [zero, id] };
        Self { elements }
    }

    pub fn elements(&self) -> &[HermitianOperator; 2] {
        &self.elements
    }

    pub fn size(&self) -> usize {
        self.elements[0].size()
    }
}

pub(crate) fn check_povm(m1: &ComplexMatrix, m2: &ComplexMatrix, tol: &Tolerances) -> Result<()> {
    let n = m1.nrows();
    let off = (m1 + m2 - ComplexMatrix::identity(n, n))
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max);
    if off > tol.completeness {
        return Err(Error::InvalidPovm(format!("|M1 + M2 - I| = {off:.3e}")));
    }
    Ok(())
}

fn check_dims(ens: &BinaryEnsemble, povm: &BinaryPovm) -> Result<()> {
    if ens.size() != povm.size() {
        return Err(Error::DimensionMismatch {
            expected: ens.size(),
            found: povm.size(),
        });
    }
    Ok(())
}

/// `Pr(x, y) = q_x Tr(tau_x M_y)`, rows indexed by the input `x`.
pub fn joint_probabilities(ens: &BinaryEnsemble, povm: &BinaryPovm) -> Result<[[f64; 2]; 2]> {
    check_dims(ens, povm)?;
    let mut table = [[0.0; 2]; 2];
    for x in 0..2 {
        for y in 0..2 {
            table[x][y] = ens.priors[x] * trace_product(ens.states[x].matrix(), povm.elements[y].matrix()).re;
        }
    }
    Ok(table)
}

/// `1 - sum_x q_x Tr(tau_x M_x)`.
pub fn error_probability(ens: &BinaryEnsemble, povm: &BinaryPovm) -> Result<f64> {
    let joint = joint_probabilities(ens, povm)?;
    Ok(1.0 - joint[0][0] - joint[1][1])
}

/// Shannon mutual information between input and outcome, in bits.
pub fn mutual_information(ens: &BinaryEnsemble, povm: &BinaryPovm) -> Result<f64> {
    Ok(mutual_information_from_joint(&joint_probabilities(ens, povm)?))
}

/// The minimum-error measurement and its error.
#[derive(Debug, Clone)]
pub struct HelstromMeasurement {
    pub error: f64,
    /// `M1` projects onto the positive eigenspace of `q1 tau1 - q2 tau2`.
    pub povm: BinaryPovm,
}

/// `1/2 - 1/2 ||q1 tau1 - q2 tau2||_1`.
pub fn helstrom_bound(ens: &BinaryEnsemble) -> Result<f64> {
    Ok(0.5 - 0.5 * trace_norm(&ens.helstrom_operator())?)
}

pub fn helstrom_measurement(ens: &BinaryEnsemble) -> Result<HelstromMeasurement> {
    let eig = ens.helstrom_operator().eig(&Tolerances::DEFAULT)?;
    let norm: f64 = eig.values.iter().map(|l| l.abs()).sum();
    let m1 = eig.map(|l| if l > 0.0 { 1.0 } else { 0.0 });
    let m2 = eig.map(|l| if l > 0.0 { 0.0 } else { 1.0 });
    Ok(HelstromMeasurement {
        error: 0.5 - 0.5 * norm,
        povm: BinaryPovm::new(m1, m2)?,
    })
}
