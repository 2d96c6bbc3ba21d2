//! Accessible information by steepest ascent over two-outcome POVMs.
//!
//! Each iteration forms
//! `R_y = sum_x q_x tau_x log2(Pr(x, y) / (q_x Pr(y)))`,
//! `G_y = I + lambda (R_y - sum_z R_z M_z)`, `M~_y = G_y^† M_y G_y` and
//! renormalizes `M_y <- S^{-1/2} M~_y S^{-1/2}` with `S = sum_z M~_z`.
//!
//! The iteration runs on the support of `q1 tau1 + q2 tau2`: every `R_y`
//! vanishes on its complement, so the complement never influences the
//! statistics and is assigned to outcome 1 when the POVM is lifted back.
//!
//! The update rule does not care how many outcomes there are.
//! [`accessible_information`] works with two, as the rest of the crate does;
//! [`accessible_information_outcomes`] allows more. For mixed states more
//! outcomes can carry strictly more information.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{helstrom_measurement, mutual_information, BinaryEnsemble, BinaryPovm};
use crate::error::{Error, Result};
use crate::fock::{sqrt_inv_with, trace_product, ComplexMatrix, HermitianOperator};
use crate::information::mutual_information_from_joint;
use crate::tolerances::Tolerances;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct AscentConfig {
    /// Initial step size; halved whenever a step loses information.
    pub lambda: f64,

    /// Stop once the per-iteration gain (bits) falls below this...
    pub tol: f64,
    /// ...and the stationarity residual is below this.
    pub residual_tol: f64,
    pub max_iter: usize,
    /// Randomly perturbed starts in addition to the Helstrom start.
    pub restarts: usize,
    /// Weight of `I/2` mixed into each starting element.
    pub init_mix: f64,
    /// Largest information loss accepted from a single step.
    pub decrease_slack: f64,
    pub seed: u64,
    /// Attempt a projective polish every this many iterations; 0 disables.
    /// Only used with two outcomes.
    pub polish_every: usize,
}

impl Default for AscentConfig {
    fn default() -> Self {
        Self {
            lambda: 0.05,
            tol: 1e-10,
            residual_tol: 1e-6,
            max_iter: 50_000,
            restarts: 5,
            init_mix: 1e-3,
            decrease_slack: 1e-9,
            seed: 0,
            polish_every: 50,
        }
    }
}

#[derive(Debug, Clone)]
pub struct AscentReport {
    pub povm: BinaryPovm,
    /// Best mutual information found (bits).
    pub mutual_information: f64,
    pub iterations: usize,
    /// `max_y ||M_y Gamma - M_y R_y||_max`, `Gamma = sum_y R_y M_y`.
    pub stationarity_residual: f64,
    pub converged: bool,
    /// Whether the best run ended on a polished projective measurement.
    pub polished: bool,
    /// Final information of every start, in start order.
    pub restart_values: Vec<f64>,
}

impl AscentReport {
    pub fn restart_spread(&self) -> f64 {
        let max = self.restart_values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let min = self.restart_values.iter().copied().fold(f64::INFINITY, f64::min);
        max - min
    }
}

pub fn accessible_information(ens: &BinaryEnsemble, cfg: &AscentConfig) -> Result<AscentReport> {
    accessible_information_from(ens, cfg, &[])
}

/// As [`accessible_information`], with caller-supplied measurements used as
/// additional starting points.
pub fn accessible_information_from(
    ens: &BinaryEnsemble,
    cfg: &AscentConfig,
    extra_starts: &[BinaryPovm],
) -> Result<AscentReport> {
    check_config(cfg)?;
    let tol = Tolerances::DEFAULT;
    let space = Support::new(ens, &tol)?;
    let helstrom = helstrom_measurement(ens)?;

    let mut starts = vec![space.compress(helstrom.povm.elements())];
    if cfg.restarts > 0 {
        let eig = ens.helstrom_operator().eig(&tol)?;
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        for _ in 0..cfg.restarts {
            let t = rng.gen_range(0.05..0.5);
            let weights: Vec<f64> = eig
                .values
                .iter()
                .map(|&l| {
                    let h = if l > 0.0 { 1.0 } else { 0.0 };
                    (1.0 - t) * h + t * rng.gen::<f64>()
                })
                .collect();
            let m1 = reweight(&eig.vectors, &weights);
            let m2 = HermitianOperator::identity(m1.size()).combine(1.0, &m1, -1.0);
            starts.push(space.compress(BinaryPovm::new(m1, m2)?.elements()));
        }
    }
    for p in extra_starts {
        if p.size() != ens.size() {
            return Err(Error::DimensionMismatch {
                expected: ens.size(),
                found: p.size(),
            });
        }
        starts.push(space.compress(p.elements()));
    }

    let (runs, lifted) = space.run_all(starts, cfg, &tol)?;
    let lifted: Vec<(BinaryPovm, f64)> = lifted
        .into_iter()
        .map(|elements| {
            let [m1, m2]: [HermitianOperator; 2] = elements.try_into().expect("two outcomes");
            let povm = BinaryPovm::new(m1, m2)?;
            let info = mutual_information(ens, &povm)?;
            Ok((povm, info))
        })
        .collect::<Result<_>>()?;

    let best = best_index(lifted.iter().map(|(_, i)| *i));
    let run = &runs[best];
    Ok(AscentReport {
        povm: lifted[best].0.clone(),
        mutual_information: lifted[best].1,
        iterations: run.iterations,
        stationarity_residual: run.residual,
        converged: run.residual <= cfg.residual_tol,
        polished: run.polished,
        restart_values: lifted.iter().map(|(_, i)| *i).collect(),
    })
}

#[derive(Debug, Clone)]
pub struct OutcomeAscentReport {
    /// POVM elements on the full space, one per outcome.
    pub elements: Vec<HermitianOperator>,
    pub mutual_information: f64,
    pub iterations: usize,
    pub stationarity_residual: f64,
    pub converged: bool,
    pub restart_values: Vec<f64>,
}

/// Steepest ascent over POVMs with `outcomes` elements. Starts from the
/// Helstrom measurement padded with empty outcomes and from `cfg.restarts`
/// random measurements; all are mixed with `I / outcomes` first.
pub fn accessible_information_outcomes(
    ens: &BinaryEnsemble,
    cfg: &AscentConfig,
    outcomes: usize,
) -> Result<OutcomeAscentReport> {
    check_config(cfg)?;
    if outcomes < 2 {
        return Err(Error::InvalidParameter(format!("{outcomes} outcomes")));
    }
    let tol = Tolerances::DEFAULT;
    let space = Support::new(ens, &tol)?;
    let r = space.rank();
    let helstrom = helstrom_measurement(ens)?;
    let mut first = space.compress(helstrom.povm.elements());
    first.resize(outcomes, ComplexMatrix::zeros(r, r));
    let mut starts = vec![first];
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    for _ in 0..cfg.restarts {
        let raw: Vec<ComplexMatrix> = (0..outcomes)
            .map(|_| {
                let x = ComplexMatrix::from_fn(r, r, |_, _| rng.gen_range(-1.0..1.0f64).into());
                &x * x.adjoint()
            })
            .collect();
        let total = raw.iter().fold(ComplexMatrix::zeros(r, r), |acc, a| acc + a);
        let s_inv = sqrt_inv_with(&HermitianOperator::symmetrized(&total), &tol)?;
        let s_inv = s_inv.matrix();
        starts.push(raw.iter().map(|a| hermitian(&(s_inv * a * s_inv))).collect());
    }

    let (runs, lifted) = space.run_all(starts, cfg, &tol)?;
    let values: Vec<f64> = lifted.iter().map(|e| space.information_full(ens, e)).collect();
    let best = best_index(values.iter().copied());
    let run = &runs[best];
    Ok(OutcomeAscentReport {
        elements: lifted[best].clone(),
        mutual_information: values[best],
        iterations: run.iterations,
        stationarity_residual: run.residual,
        converged: run.residual <= cfg.residual_tol,
        restart_values: values,
    })
}

fn check_config(cfg: &AscentConfig) -> Result<()> {
    if !(cfg.lambda > 0.0) {
        return Err(Error::InvalidParameter(format!("ascent step {}", cfg.lambda)));
    }
    Ok(())
}

/// First index of the largest value.
fn best_index(values: impl Iterator<Item = f64>) -> usize {
    let mut best = (0, f64::NEG_INFINITY);
    for (i, v) in values.enumerate() {
        if v > best.1 {
            best = (i, v);
        }
    }
    best.0
}

/// `V diag(w) V^†`.
fn reweight(vectors: &ComplexMatrix, weights: &[f64]) -> HermitianOperator {
    let n = vectors.nrows();
    let mut scaled = vectors.clone();
    for (j, w) in weights.iter().enumerate() {
        for i in 0..n {
            scaled[(i, j)] *= *w;
        }
    }
    HermitianOperator::symmetrized(&(scaled * vectors.adjoint()))
}

fn mix(m: Vec<ComplexMatrix>, weight: f64) -> Vec<ComplexMatrix> {
    let n = m[0].nrows();
    let share = ComplexMatrix::identity(n, n).scale(weight / m.len() as f64);
    m.into_iter().map(|e| e.scale(1.0 - weight) + &share).collect()
}

fn hermitian(m: &ComplexMatrix) -> ComplexMatrix {
    (m + m.adjoint()).scale(0.5)
}

struct Run {
    povm: Vec<ComplexMatrix>,
    iterations: usize,
    residual: f64,
    polished: bool,
}

const POLISH_STEPS: usize = 100;

/// Orthonormal basis `V` (columns) of the ensemble support, with the states
/// compressed to `V^† tau_x V`.
struct Support {
    basis: ComplexMatrix,
    states: [ComplexMatrix; 2],
    priors: [f64; 2],
}

impl Support {
    fn new(ens: &BinaryEnsemble, tol: &Tolerances) -> Result<Self> {
        let eig = ens.average_state().eig(tol)?;
        let lmax = eig.values.last().copied().unwrap_or(0.0);
        let keep: Vec<usize> = (0..eig.values.len())
            .filter(|&i| eig.values[i] > tol.support_relative * lmax)
            .collect();
        let n = ens.size();
        let basis = DMatrix::from_fn(n, keep.len(), |r, c| eig.vectors[(r, keep[c])]);
        let states = ens.states().clone().map(|s| hermitian(&(basis.adjoint() * s.matrix() * &basis)));
        Ok(Self {
            basis,
            states,
            priors: ens.priors(),
        })
    }

    fn rank(&self) -> usize {
        self.basis.ncols()
    }

    fn compress(&self, elements: &[HermitianOperator]) -> Vec<ComplexMatrix> {
        elements
            .iter()
            .map(|m| hermitian(&(self.basis.adjoint() * m.matrix() * &self.basis)))
            .collect()
    }

    fn lift(&self, m: &[ComplexMatrix]) -> Vec<HermitianOperator> {
        let n = self.basis.nrows();
        let v = &self.basis;
        let complement = ComplexMatrix::identity(n, n) - v * v.adjoint();
        m.iter()
            .enumerate()
            .map(|(y, e)| {
                let full = v * e * v.adjoint();
                let full = if y == 0 { full + &complement } else { full };
                HermitianOperator::symmetrized(&full)
            })
            .collect()
    }

    /// Ascends every start and lifts the results; invalid lifts are errors.
    fn run_all(
        &self,
        starts: Vec<Vec<ComplexMatrix>>,
        cfg: &AscentConfig,
        tol: &Tolerances,
    ) -> Result<(Vec<Run>, Vec<Vec<HermitianOperator>>)> {
        let runs: Vec<Run> = starts
            .into_par_iter()
            .map(|s| self.ascend(mix(s, cfg.init_mix), cfg, tol))
            .collect::<Result<_>>()?;
        let lifted = runs
            .iter()
            .map(|r| {
                let elements = self.lift(&r.povm);
                check_elements(&elements.iter().map(|e| e.matrix().clone()).collect::<Vec<_>>(), tol)?;
                Ok(elements)
            })
            .collect::<Result<_>>()?;
        Ok((runs, lifted))
    }

    /// Mutual information of full-space elements against the original states.
    fn information_full(&self, ens: &BinaryEnsemble, elements: &[HermitianOperator]) -> f64 {
        let table: [Vec<f64>; 2] = std::array::from_fn(|x| {
            elements
                .iter()
                .map(|m| self.priors[x] * trace_product(ens.states()[x].matrix(), m.matrix()).re)
                .collect()
        });
        mutual_information_from_joint(&table)
    }

    fn joint(&self, m: &[ComplexMatrix]) -> [Vec<f64>; 2] {
        std::array::from_fn(|x| {
            m.iter()
                .map(|e| self.priors[x] * trace_product(&self.states[x], e).re)
                .collect()
        })
    }

    fn r_operators(&self, joint: &[Vec<f64>; 2], tol: &Tolerances) -> Vec<ComplexMatrix> {
        let r = self.rank();
        (0..joint[0].len())
            .map(|y| {
                let py = joint[0][y] + joint[1][y];
                let mut acc = ComplexMatrix::zeros(r, r);
                for x in 0..2 {
                    let p = joint[x][y];
                    if p < tol.probability_floor {
                        continue;
                    }
                    let w = self.priors[x] * (p / (self.priors[x] * py)).log2();
                    acc += self.states[x].scale(w);
                }
                acc
            })
            .collect()
    }

    fn gamma(r: &[ComplexMatrix], m: &[ComplexMatrix]) -> ComplexMatrix {
        r.iter().zip(m).map(|(r, m)| r * m).reduce(|a, b| a + b).expect("at least one outcome")
    }

    /// Stationarity residual measured in the full space.
    fn residual(&self, m: &[ComplexMatrix], r: &[ComplexMatrix]) -> f64 {
        let gamma = Self::gamma(r, m);
        m.iter()
            .zip(r)
            .map(|(m, r)| {
                let x = m * (&gamma - r);
                let full = &self.basis * x * self.basis.adjoint();
                full.iter().map(|z| z.norm()).fold(0.0, f64::max)
            })
            .fold(0.0, f64::max)
    }

    /// Fixed-point iteration `M_1 <- P_+(R_1 - R_2)` for two outcomes. The
    /// information is convex in `M_1`, so replacing `M_1` by the maximizer of
    /// its linearization never loses information; a fixed point commutes
    /// with `R_1 - R_2` and has zero stationarity residual.
    fn polish(&self, m: &[ComplexMatrix], info: f64, tol: &Tolerances) -> Result<(Vec<ComplexMatrix>, f64)> {
        let r = self.rank();
        let identity = ComplexMatrix::identity(r, r);
        let mut cur = m.to_vec();
        let mut cur_info = info;
        for _ in 0..POLISH_STEPS {
            let rops = self.r_operators(&self.joint(&cur), tol);
            let d = HermitianOperator::symmetrized(&(&rops[0] - &rops[1]));
            let p = d.eig(tol)?.map(|l| if l >= 0.0 { 1.0 } else { 0.0 }).into_matrix();
            let next = vec![p.clone(), &identity - p];
            let next_info = mutual_information_from_joint(&self.joint(&next));
            if next_info < cur_info {
                break;
            }
            let moved = (&next[0] - &cur[0]).iter().map(|z| z.norm()).fold(0.0, f64::max);
            cur = next;
            cur_info = next_info;
            if moved < 1e-13 {
                break;
            }
        }
        Ok((cur, cur_info))
    }

    /// The polished measurement when it is at least as informative and
    /// stationary to `residual_tol`.
    fn try_polish(
        &self,
        m: &[ComplexMatrix],
        info: f64,
        cfg: &AscentConfig,
        tol: &Tolerances,
    ) -> Result<Option<(Vec<ComplexMatrix>, f64, f64)>> {
        let (pm, pinfo) = self.polish(m, info, tol)?;
        let presid = self.residual(&pm, &self.r_operators(&self.joint(&pm), tol));
        if pinfo >= info && presid <= cfg.residual_tol {
            check_elements(&pm, tol)?;
            Ok(Some((pm, pinfo, presid)))
        } else {
            Ok(None)
        }
    }

    fn ascend(&self, start: Vec<ComplexMatrix>, cfg: &AscentConfig, tol: &Tolerances) -> Result<Run> {
        let r = self.rank();
        let identity = ComplexMatrix::identity(r, r);
        let polish_every = if start.len() == 2 { cfg.polish_every } else { 0 };
        let mut m = start;
        check_elements(&m, tol)?;
        let mut joint = self.joint(&m);
        let mut info = mutual_information_from_joint(&joint);
        let mut lambda = cfg.lambda;
        let mut residual = self.residual(&m, &self.r_operators(&joint, tol));
        let mut iterations = 0;
        let mut polished = false;

        while iterations < cfg.max_iter {
            iterations += 1;
            let rops = self.r_operators(&joint, tol);
            let gamma = Self::gamma(&rops, &m);
            let tilde: Vec<ComplexMatrix> = m
                .iter()
                .zip(&rops)
                .map(|(my, ry)| {
                    let g = &identity + (ry - &gamma).scale(lambda);
                    hermitian(&(g.adjoint() * my * g))
                })
                .collect();
            let total = tilde.iter().fold(ComplexMatrix::zeros(r, r), |acc, t| acc + t);
            let s_inv = sqrt_inv_with(&HermitianOperator::symmetrized(&total), tol)?;
            let s_inv = s_inv.matrix();
            let next: Vec<ComplexMatrix> = tilde.iter().map(|t| hermitian(&(s_inv * t * s_inv))).collect();
            check_elements(&next, tol)?;

            let next_joint = self.joint(&next);
            let next_info = mutual_information_from_joint(&next_joint);
            if next_info < info - cfg.decrease_slack {
                lambda *= 0.5;
                if lambda < 1e-14 {
                    break;
                }
                continue;
            }
            let gain = next_info - info;
            m = next;
            joint = next_joint;
            info = next_info;
            if gain < cfg.tol {
                residual = self.residual(&m, &self.r_operators(&joint, tol));
                if residual <= cfg.residual_tol {
                    break;
                }
            }
            if polish_every > 0 && iterations % polish_every == 0 {
                if let Some((pm, pinfo, presid)) = self.try_polish(&m, info, cfg, tol)? {
                    (m, info, residual, polished) = (pm, pinfo, presid, true);
                    break;
                }
            }
        }
        if !polished {
            residual = self.residual(&m, &self.r_operators(&joint, tol));
            if polish_every > 0 {
                if let Some((pm, _, presid)) = self.try_polish(&m, info, cfg, tol)? {
                    (m, residual, polished) = (pm, presid, true);
                }
            }
        }
        Ok(Run {
            povm: m,
            iterations,
            residual,
            polished,
        })
    }
}

/// Every iterate must be a POVM: complete within `tol.completeness` and
/// positive up to `tol.psd_floor`.
fn check_elements(m: &[ComplexMatrix], tol: &Tolerances) -> Result<()> {
    let n = m[0].nrows();
    let total = m.iter().fold(ComplexMatrix::zeros(n, n), |acc, e| acc + e);
    let off = (total - ComplexMatrix::identity(n, n)).iter().map(|z| z.norm()).fold(0.0, f64::max);
    if off > tol.completeness {
        return Err(Error::InvalidPovm(format!("|sum M - I| = {off:.3e}")));
    }
    for (y, e) in m.iter().enumerate() {
        if !HermitianOperator::symmetrized(e).is_positive(tol) {
            return Err(Error::InvalidPovm(format!("ascent iterate element {} not positive", y + 1)));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::SignalParams;
    use crate::discrimination::{helstrom_bound, BinaryEnsemble};
    use crate::fock::{FockDim, KetVector};
    use crate::information::binary_entropy;
    use approx::assert_abs_diff_eq;

    fn bpsk(nbar: f64, sigma: f64) -> BinaryEnsemble {
        let a = nbar.sqrt();
        SignalParams::new([0.5, 0.5], [a, -a], sigma)
            .unwrap()
            .ensemble(FockDim::new(30).unwrap())
            .unwrap()
    }

    #[test]
    fn orthogonal_states_one_bit() {
        let d = FockDim::new(4).unwrap();
        let ens = BinaryEnsemble::new(
            [0.5, 0.5],
            [KetVector::basis(1, d).unwrap().projector(), KetVector::basis(3, d).unwrap().projector()],
        )
        .unwrap();
        let rep = accessible_information(&ens, &AscentConfig::default()).unwrap();
        assert_abs_diff_eq!(rep.mutual_information, 1.0, epsilon = 1e-6);
        assert!(rep.stationarity_residual < 1e-6);
    }

    #[test]
    fn pure_bpsk_matches_helstrom_entropy() {
        for nbar in [0.25, 0.5, 1.0] {
            let ens = bpsk(nbar, 0.0);
            let pe = helstrom_bound(&ens).unwrap();
            let rep = accessible_information(&ens, &AscentConfig::default()).unwrap();
            assert_abs_diff_eq!(rep.mutual_information, 1.0 - binary_entropy(pe), epsilon = 1e-4);
            assert!(rep.converged, "residual {}", rep.stationarity_residual);
        }
    }

    #[test]
    fn never_below_helstrom_povm() {
        for sigma in [0.3, 0.8, 1.2] {
            let ens = bpsk(0.75, sigma);
            let hm = helstrom_measurement(&ens).unwrap();
            let base = mutual_information(&ens, &hm.povm).unwrap();
            let rep = accessible_information(&ens, &AscentConfig::default()).unwrap();
            assert!(rep.mutual_information >= base - 1e-6);
            assert!(rep.mutual_information <= 1.0);
            assert_eq!(rep.restart_values.len(), 6);
        }
    }

    #[test]
    fn information_never_drops_between_accepted_steps() {
        let ens = bpsk(0.5, 0.6);
        let tol = Tolerances::DEFAULT;
        let space = Support::new(&ens, &tol).unwrap();
        let hm = helstrom_measurement(&ens).unwrap();
        let start = mix(space.compress(hm.povm.elements()), 0.3);
        let mut last = mutual_information_from_joint(&space.joint(&start));
        let mut m = start;
        for _ in 0..200 {
            let cfg = AscentConfig {
                max_iter: 1,
                tol: -1.0,
                polish_every: 0,
                ..AscentConfig::default()
            };
            m = space.ascend(m, &cfg, &tol).unwrap().povm;
            let now = mutual_information_from_joint(&space.joint(&m));
            assert!(now >= last - 1e-9);
            last = now;
        }
    }

    #[test]
    fn more_outcomes_never_lose_information() {
        let ens = bpsk(0.5, 0.9);
        let cfg = AscentConfig {
            restarts: 2,
            max_iter: 3000,
            ..AscentConfig::default()
        };
        let two = accessible_information(&ens, &cfg).unwrap();
        let four = accessible_information_outcomes(&ens, &cfg, 4).unwrap();
        assert_eq!(four.elements.len(), 4);
        let sum = four.elements.iter().fold(HermitianOperator::zeros(ens.size()), |a, e| a.combine(1.0, e, 1.0));
        assert!((sum.matrix() - ComplexMatrix::identity(ens.size(), ens.size())).norm() < 1e-8);
        // mixed states: extra outcomes help strictly
        assert!(four.mutual_information > two.mutual_information + 1e-3);
        assert!(four.mutual_information <= 1.0);
    }

    #[test]
    fn two_outcome_paths_agree_on_pure_states() {
        let ens = bpsk(0.5, 0.0);
        let cfg = AscentConfig {
            restarts: 1,
            ..AscentConfig::default()
        };
        let a = accessible_information(&ens, &cfg).unwrap();
        let b = accessible_information_outcomes(&ens, &cfg, 3).unwrap();
        assert_abs_diff_eq!(a.mutual_information, b.mutual_information, epsilon = 1e-4);
    }

    #[test]
    fn rejects_non_positive_step() {
        let ens = bpsk(0.5, 0.0);
        let cfg = AscentConfig {
            lambda: 0.0,
            ..AscentConfig::default()
        };
        assert!(accessible_information(&ens, &cfg).is_err());
    }
}
