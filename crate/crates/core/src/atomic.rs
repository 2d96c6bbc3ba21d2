//! Atomic indirect measurement: the light mode couples to a ground-state
//! two-level atom through `U = exp(-i Phi (a s+ + a^† s-))`, after which the
//! atom is measured projectively in
//! `|pi1> = cos(theta)|g> + e^{i xi} sin(theta)|e>`,
//! `|pi2> = sin(theta)|g> - e^{i xi} cos(theta)|e>`.
//!
//! On the light mode this is the instrument with Kraus operators
//!
//! ```text
//! K1 = cos(theta) C - i e^{-i xi} sin(theta) S
//! K2 = sin(theta) C + i e^{-i xi} cos(theta) S
//! ```
//!
//! where `C = cos(Phi sqrt(a^† a))` is diagonal and `S` has the single
//! superdiagonal `<n-1|S|n> = sin(Phi sqrt(n))`.
//!
//! For real amplitudes the outcome probabilities reduce to three series per
//! amplitude,
//!
//! ```text
//! A = sum_n a^{2n}/n! cos^2(Phi sqrt n)
//! B = sum_n a^{2n}/n! sin^2(Phi sqrt n)
//! X = sum_n a^{2n+1}/sqrt(n!(n+1)!) cos(Phi sqrt n) sin(Phi sqrt(n+1))
//! ```
//!
//! with `Pr(1|a) = e^{-a^2} [cos^2(theta) A + sin^2(theta) B - sin(2 theta) sin(xi) e^{-sigma^2/2} X]`
//! and `Pr(2|a) = e^{-a^2} A + e^{-a^2} B - Pr(1|a)`. Phase diffusion enters
//! only through the `e^{-sigma^2/2}` damping of the cross term.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channel::SignalParams;
use crate::error::{Error, Result};
use crate::fock::{ComplexMatrix, FockDim};
use crate::information::mutual_information_from_joint;
use crate::simplex::{nelder_mead, SimplexOptions};
use crate::tolerances::Tolerances;

/// Measurement phase `xi`, angle `theta` and pulse area `Phi`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AtomicParams {
    pub xi: f64,
    pub theta: f64,
    pub phi_pulse: f64,
}

impl AtomicParams {
    pub fn new(xi: f64, theta: f64, phi_pulse: f64) -> Self {
        Self { xi, theta, phi_pulse }
    }

    /// An equivalent parameter triple (same POVM) with `xi` in `[0, 2 pi)`,
    /// `theta` in `[0, pi/2]` and `Phi >= 0`.
    ///
    /// Uses `Phi -> -Phi ~ xi + pi`, `theta -> theta + pi ~ identity` and
    /// `theta -> pi - theta ~ xi + pi`; each flips at most the overall sign of
    /// a Kraus operator.
    pub fn canonical(&self) -> Self {
        let mut xi = self.xi;
        let mut theta = self.theta;
        let mut phi = self.phi_pulse;
        if phi < 0.0 {
            phi = -phi;
            xi += PI;
        }
        theta = theta.rem_euclid(PI);
        if theta > FRAC_PI_2 {
            theta = PI - theta;
            xi += PI;
        }
        xi = xi.rem_euclid(TAU);
        if xi >= TAU {
            xi = 0.0;
        }
        Self::new(xi, theta, phi)
    }

    fn as_array(&self) -> [f64; 3] {
        [self.xi, self.theta, self.phi_pulse]
    }
}

/// Kraus pair built entrywise in the number basis.
pub fn kraus_operators(p: &AtomicParams, dim: FockDim) -> (ComplexMatrix, ComplexMatrix) {
    let size = dim.size();
    let (s, c) = p.theta.sin_cos();
    // -i e^{-i xi}
    let phase = Complex64::new(0.0, -1.0) * Complex64::from_polar(1.0, -p.xi);
    let mut k1 = DMatrix::zeros(size, size);
    let mut k2 = DMatrix::zeros(size, size);
    for n in 0..size {
        let (sn, cn) = (p.phi_pulse * (n as f64).sqrt()).sin_cos();
        k1[(n, n)] = Complex64::new(c * cn, 0.0);
        k2[(n, n)] = Complex64::new(s * cn, 0.0);
        if n > 0 {
            k1[(n - 1, n)] = phase * (s * sn);
            k2[(n - 1, n)] = -phase * (c * sn);
        }
    }
    (k1, k2)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesConfig {
    /// Highest photon number retained in the series.
    pub n_terms: usize,
}

impl SeriesConfig {
    pub fn for_dim(dim: FockDim) -> Self {
        Self { n_terms: dim.cutoff() }
    }
}

/// The three series `A`, `B`, `X` of one real amplitude (see module docs).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AmplitudeSums {
    pub diagonal_cos: f64,
    pub diagonal_sin: f64,
    pub cross: f64,
}

/// Sums over photon numbers `0..=n_terms`; identical to the matrix
/// evaluation at cutoff `n_terms`.
pub fn amplitude_sums(alpha: f64, phi_pulse: f64, cfg: SeriesConfig) -> Result<AmplitudeSums> {
    let tol = Tolerances::DEFAULT;
    let mut sums = AmplitudeSums {
        diagonal_cos: 0.0,
        diagonal_sin: 0.0,
        cross: 0.0,
    };
    // r_n = alpha^n / sqrt(n!)
    let mut r = 1.0;
    let mut envelope = 0.0;
    let mut last = 0.0;
    for n in 0..=cfg.n_terms {
        if n > 0 {
            r *= alpha / (n as f64).sqrt();
        }
        let e = r * r;
        let (sn, cn) = (phi_pulse * (n as f64).sqrt()).sin_cos();
        sums.diagonal_cos += e * cn * cn;
        sums.diagonal_sin += e * sn * sn;
        if n < cfg.n_terms {
            let r_next = r * alpha / ((n + 1) as f64).sqrt();
            let s_next = (phi_pulse * ((n + 1) as f64).sqrt()).sin();
            sums.cross += r * r_next * cn * s_next;
        }
        envelope += e;
        last = e;
    }
    let ratio = if envelope > 0.0 { last / envelope } else { 0.0 };
    if cfg.n_terms > 0 && alpha != 0.0 && ratio > tol.series_tail {
        return Err(Error::SeriesTruncation {
            n_terms: cfg.n_terms,
            ratio,
        });
    }
    Ok(sums)
}

/// `[Pr(1|alpha), Pr(2|alpha)]` after phase diffusion of strength `sigma`.
pub fn outcome_probabilities(alpha: f64, sigma: f64, p: &AtomicParams, cfg: SeriesConfig) -> Result<[f64; 2]> {
    let sums = amplitude_sums(alpha, p.phi_pulse, cfg)?;
    let weight = (-alpha * alpha).exp();
    let (s, c) = p.theta.sin_cos();
    let cross = (2.0 * p.theta).sin() * p.xi.sin() * (-0.5 * sigma * sigma).exp() * sums.cross;
    let first = weight * (c * c * sums.diagonal_cos + s * s * sums.diagonal_sin - cross);
    let second = weight * (s * s * sums.diagonal_cos + c * c * sums.diagonal_sin + cross);
    Ok([first, second])
}

/// `Pr(x, y)` with rows indexed by the input.
pub fn joint_probabilities_series(sig: &SignalParams, p: &AtomicParams, cfg: SeriesConfig) -> Result<[[f64; 2]; 2]> {
    let mut table = [[0.0; 2]; 2];
    for x in 0..2 {
        let cond = outcome_probabilities(sig.alphas[x], sig.sigma, p, cfg)?;
        table[x] = [sig.priors[x] * cond[0], sig.priors[x] * cond[1]];
    }
    Ok(table)
}

pub fn error_probability_series(sig: &SignalParams, p: &AtomicParams, cfg: SeriesConfig) -> Result<f64> {
    let j = joint_probabilities_series(sig, p, cfg)?;
    Ok(1.0 - j[0][0] - j[1][1])
}

pub fn mutual_information_series(sig: &SignalParams, p: &AtomicParams, cfg: SeriesConfig) -> Result<f64> {
    Ok(mutual_information_from_joint(&joint_probabilities_series(sig, p, cfg)?))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Objective {
    MinError,
    MaxInformation,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct OptimizerConfig {
    /// Number of local searches; starts come in Latin-hypercube blocks of 16.
    pub starts: usize,
    pub diameter_tol: f64,
    pub max_evals: usize,
    pub seed: u64,
    /// Upper bound of `Phi`; `pi sqrt(N)` when absent.
    pub phi_max: Option<f64>,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            starts: 16,
            diameter_tol: 1e-8,
            max_evals: 20_000,
            seed: 0,
            phi_max: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Optimum {
    pub params: AtomicParams,
    /// Error probability or mutual information, depending on the objective.
    pub value: f64,
    pub start_values: Vec<f64>,
}

impl Optimum {
    pub fn start_spread(&self) -> f64 {
        let max = self.start_values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let min = self.start_values.iter().copied().fold(f64::INFINITY, f64::min);
        max - min
    }
}

const LHS_BLOCK: usize = 16;

/// Starting points: Latin-hypercube blocks over the box, one RNG stream per
/// block so that a longer start list extends a shorter one.
pub fn start_points(count: usize, seed: u64, phi_max: f64) -> Vec<AtomicParams> {
    let widths = [TAU, FRAC_PI_2, phi_max];
    let mut out = Vec::with_capacity(count);
    let mut block = 0u64;
    while out.len() < count {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(block);
        let strata: Vec<Vec<usize>> = (0..3)
            .map(|_| {
                let mut s: Vec<usize> = (0..LHS_BLOCK).collect();
                s.shuffle(&mut rng);
                s
            })
            .collect();
        for j in 0..LHS_BLOCK {
            let coord: Vec<f64> = (0..3)
                .map(|d| (strata[d][j] as f64 + rng.gen::<f64>()) / LHS_BLOCK as f64 * widths[d])
                .collect();
            out.push(AtomicParams::new(coord[0], coord[1], coord[2]));
        }
        block += 1;
    }
    out.truncate(count);
    out
}

fn lexicographic(a: &AtomicParams, b: &AtomicParams) -> std::cmp::Ordering {
    a.as_array()
        .iter()
        .zip(b.as_array().iter())
        .map(|(x, y)| x.total_cmp(y))
        .find(|o| o.is_ne())
        .unwrap_or(std::cmp::Ordering::Equal)
}

/// Multi-start simplex search over `(xi, theta, Phi)`.
///
/// `Phi` is confined to `[0, phi_max]`; `xi` and `theta` move freely since
/// the objective is periodic in both, and results are reported canonically.
pub fn optimize(
    objective: Objective,
    sig: &SignalParams,
    series: SeriesConfig,
    cfg: &OptimizerConfig,
) -> Result<Optimum> {
    sig.validate()?;
    if cfg.starts == 0 {
        return Err(Error::InvalidParameter("optimizer needs at least one start".into()));
    }
    // surface truncation problems before the search swallows them
    error_probability_series(sig, &AtomicParams::new(0.0, 0.0, 0.0), series)?;
    let phi_max = cfg.phi_max.unwrap_or(PI * (series.n_terms as f64).sqrt());
    let sign = match objective {
        Objective::MinError => 1.0,
        Objective::MaxInformation => -1.0,
    };
    let cost = |x: &[f64]| -> f64 {
        let p = AtomicParams::new(x[0], x[1], x[2]);
        let v = match objective {
            Objective::MinError => error_probability_series(sig, &p, series),
            Objective::MaxInformation => mutual_information_series(sig, &p, series),
        };
        v.map(|v| sign * v).unwrap_or(f64::INFINITY)
    };
    let opts = SimplexOptions {
        initial_step: vec![TAU / LHS_BLOCK as f64, FRAC_PI_2 / LHS_BLOCK as f64, phi_max / LHS_BLOCK as f64],
        diameter_tol: cfg.diameter_tol,
        max_evals: cfg.max_evals,
    };
    let project = |x: &mut [f64]| x[2] = x[2].clamp(0.0, phi_max);

    let results: Vec<(AtomicParams, f64)> = start_points(cfg.starts, cfg.seed, phi_max)
        .par_iter()
        .map(|s| {
            let r = nelder_mead(cost, project, &s.as_array(), &opts);
            let params = AtomicParams::new(r.x[0], r.x[1], r.x[2]).canonical();
            (params, sign * r.value)
        })
        .collect();

    let better = |a: &(AtomicParams, f64), b: &(AtomicParams, f64)| {
        let (va, vb) = (sign * a.1, sign * b.1);
        va < vb || (va == vb && lexicographic(&a.0, &b.0).is_lt())
    };
    let mut best = &results[0];
    for r in &results[1..] {
        if better(r, best) {
            best = r;
        }
    }
    Ok(Optimum {
        params: best.0,
        value: best.1,
        start_values: results.iter().map(|r| r.1).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::SignalParams;
    use crate::discrimination::{self, helstrom_bound, BinaryPovm};
    use approx::assert_abs_diff_eq;
    use proptest::prelude::{prop_assert, proptest};

    fn dim() -> FockDim {
        FockDim::new(30).unwrap()
    }

    fn series() -> SeriesConfig {
        SeriesConfig::for_dim(dim())
    }

    fn max_abs(m: &ComplexMatrix) -> f64 {
        m.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    fn bpsk(nbar: f64, sigma: f64) -> SignalParams {
        let a = nbar.sqrt();
        SignalParams::new([0.5, 0.5], [a, -a], sigma).unwrap()
    }

    #[test]
    fn kraus_trivial_settings() {
        let id = ComplexMatrix::identity(31, 31);
        let (k1, k2) = kraus_operators(&AtomicParams::new(0.0, 0.0, 0.0), dim());
        assert_eq!(k1, id);
        assert_eq!(max_abs(&k2), 0.0);

        let (th, xi) = (0.7, 2.1);
        let (k1, k2) = kraus_operators(&AtomicParams::new(xi, th, 0.0), dim());
        assert!(max_abs(&(k1 - id.scale(th.cos()))) < 1e-15);
        assert!(max_abs(&(k2 - id.scale(th.sin()))) < 1e-15);
    }

    /// Oracle: act with the Jaynes-Cummings propagator on each |n, g> in the
    /// two-dimensional block {|n, g>, |n-1, e>} and project onto <pi_y|.
    fn kraus_from_two_level_blocks(p: &AtomicParams, size: usize) -> (ComplexMatrix, ComplexMatrix) {
        let i = Complex64::new(0.0, 1.0);
        let pi1 = [Complex64::new(p.theta.cos(), 0.0), Complex64::from_polar(p.theta.sin(), p.xi)];
        let pi2 = [Complex64::new(p.theta.sin(), 0.0), -Complex64::from_polar(p.theta.cos(), p.xi)];
        let mut k = [DMatrix::zeros(size, size), DMatrix::zeros(size, size)];
        for n in 0..size {
            // U|n,g> = cos(Phi sqrt n)|n,g> - i sin(Phi sqrt n)|n-1,e>
            let w = p.phi_pulse * (n as f64).sqrt();
            let g_amp = Complex64::new(w.cos(), 0.0);
            let e_amp = -i * w.sin();
            for (y, pi) in [pi1, pi2].iter().enumerate() {
                k[y][(n, n)] += pi[0].conj() * g_amp;
                if n > 0 {
                    k[y][(n - 1, n)] += pi[1].conj() * e_amp;
                }
            }
        }
        let [a, b] = k;
        (a, b)
    }

    #[test]
    fn kraus_matches_interaction_picture() {
        for p in [AtomicParams::new(0.3, 0.9, 1.7), AtomicParams::new(4.0, 0.2, 5.3)] {
            let (k1, k2) = kraus_operators(&p, dim());
            let (o1, o2) = kraus_from_two_level_blocks(&p, 31);
            assert!(max_abs(&(k1 - o1)) < 1e-14);
            assert!(max_abs(&(k2 - o2)) < 1e-14);
        }
    }

    #[test]
    fn kraus_completeness_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let id = ComplexMatrix::identity(31, 31);
        for _ in 0..50 {
            let p = AtomicParams::new(rng.gen_range(0.0..TAU), rng.gen_range(0.0..FRAC_PI_2), rng.gen_range(0.0..17.0));
            let (k1, k2) = kraus_operators(&p, dim());
            let sum = k1.adjoint() * &k1 + k2.adjoint() * &k2;
            // the number-basis construction is complete on the whole truncated space
            assert!(max_abs(&(sum - &id)) <= 1e-9);
        }
    }

    fn matrix_joint(sig: &SignalParams, p: &AtomicParams) -> [[f64; 2]; 2] {
        let ens = sig.ensemble(dim()).unwrap();
        let (k1, k2) = kraus_operators(p, dim());
        discrimination::joint_probabilities(&ens, &BinaryPovm::from_kraus(&k1, &k2).unwrap()).unwrap()
    }

    #[test]
    fn trivial_receiver_always_answers_one() {
        let sig = SignalParams::new([0.4, 0.6], [0.8, -0.3], 0.5).unwrap();
        let p = AtomicParams::new(0.0, 0.0, 0.0);
        assert_abs_diff_eq!(error_probability_series(&sig, &p, series()).unwrap(), 0.6, epsilon = 1e-14);
        let j = joint_probabilities_series(&sig, &p, series()).unwrap();
        assert_abs_diff_eq!(j[0][1], 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(j[1][1], 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(mutual_information_series(&sig, &p, series()).unwrap(), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn series_matches_matrix_path() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..30 {
            let sig = SignalParams::new(
                [0.5, 0.5],
                [rng.gen_range(0.0..1.5), -rng.gen_range(0.0..1.5)],
                rng.gen_range(0.0..1.2),
            )
            .unwrap();
            let p = AtomicParams::new(rng.gen_range(0.0..TAU), rng.gen_range(0.0..FRAC_PI_2), rng.gen_range(0.0..10.0));
            let js = joint_probabilities_series(&sig, &p, series()).unwrap();
            let jm = matrix_joint(&sig, &p);
            for x in 0..2 {
                for y in 0..2 {
                    assert!((js[x][y] - jm[x][y]).abs() <= 1e-8);
                }
                assert_abs_diff_eq!(js[x][0] + js[x][1], sig.priors[x], epsilon = 1e-9);
            }
        }
    }

    #[test]
    fn noiseless_series_matches_pure_state_overlaps() {
        // sigma = 0: Pr(y|a) = ||K_y |a>||^2 computed directly from the ket
        let sig = bpsk(0.5, 0.0);
        let p = AtomicParams::new(1.1, 0.6, 2.4);
        let (k1, _) = kraus_operators(&p, dim());
        let ket = crate::fock::coherent_ket(sig.alphas[0], dim()).unwrap();
        let direct = (&k1 * ket.amplitudes()).norm_squared();
        let cond = outcome_probabilities(sig.alphas[0], 0.0, &p, series()).unwrap();
        assert_abs_diff_eq!(cond[0], direct, epsilon = 1e-13);
    }

    #[test]
    fn truncation_guard() {
        let err = amplitude_sums(2.5, 1.0, SeriesConfig { n_terms: 10 }).unwrap_err();
        assert!(matches!(err, Error::SeriesTruncation { n_terms: 10, .. }));
        assert!(amplitude_sums(0.0, 1.0, SeriesConfig { n_terms: 1 }).is_ok());
    }

    #[test]
    fn cross_term_scales_with_gaussian_factor() {
        let p = AtomicParams::new(1.3, 0.5, 3.1);
        let alpha = 0.9;
        for sigma in [0.2, 0.7, 1.2] {
            let at0 = outcome_probabilities(alpha, 0.0, &p, series()).unwrap();
            let sums = amplitude_sums(alpha, p.phi_pulse, series()).unwrap();
            let w = (-alpha * alpha as f64).exp();
            let (s, c) = p.theta.sin_cos();
            let diag = w * (c * c * sums.diagonal_cos + s * s * sums.diagonal_sin);
            let cross0 = diag - at0[0];
            let at = outcome_probabilities(alpha, sigma, &p, series()).unwrap();
            let rebuilt = diag - cross0 * (-0.5 * sigma * sigma as f64).exp();
            assert!((at[0] - rebuilt).abs() <= 1e-12);
        }
    }

    #[test]
    fn canonical_preserves_povm() {
        let raw = [
            AtomicParams::new(-7.0, 2.5, -3.0),
            AtomicParams::new(9.0, -0.4, 1.0),
            AtomicParams::new(0.5, 1.9, 2.0),
        ];
        for p in raw {
            let c = p.canonical();
            assert!((0.0..TAU).contains(&c.xi));
            assert!((0.0..=FRAC_PI_2).contains(&c.theta));
            assert!(c.phi_pulse >= 0.0);
            let (a1, a2) = kraus_operators(&p, dim());
            let (b1, b2) = kraus_operators(&c, dim());
            assert!(max_abs(&(a1.adjoint() * &a1 - b1.adjoint() * &b1)) < 1e-12);
            assert!(max_abs(&(a2.adjoint() * &a2 - b2.adjoint() * &b2)) < 1e-12);
        }
    }

    #[test]
    fn start_points_extend() {
        let a = start_points(16, 4, 10.0);
        let b = start_points(40, 4, 10.0);
        assert_eq!(a[..], b[..16]);
        assert_ne!(start_points(16, 5, 10.0), a);
        // one point per stratum in each coordinate
        let mut strata: Vec<usize> = a.iter().map(|p| (p.phi_pulse / 10.0 * 16.0) as usize).collect();
        strata.sort();
        assert_eq!(strata, (0..16).collect::<Vec<_>>());
    }

    #[test]
    fn identical_states_no_gain() {
        let sig = SignalParams::new([0.3, 0.7], [0.6, 0.6], 0.4).unwrap();
        let opt = optimize(Objective::MinError, &sig, series(), &OptimizerConfig::default()).unwrap();
        assert_abs_diff_eq!(opt.value, 0.3, epsilon = 1e-9);
    }

    #[test]
    fn optimum_respects_helstrom() {
        for sigma in [0.0, 0.6] {
            let sig = bpsk(0.5, sigma);
            let opt = optimize(Objective::MinError, &sig, series(), &OptimizerConfig::default()).unwrap();
            let hel = helstrom_bound(&sig.ensemble(dim()).unwrap()).unwrap();
            assert!(opt.value >= hel - 1e-9);
            assert_abs_diff_eq!(
                error_probability_series(&sig, &opt.params, series()).unwrap(),
                opt.value,
                epsilon = 1e-15
            );
            assert_eq!(opt.start_values.len(), 16);
        }
    }

    #[test]
    fn more_starts_never_worse() {
        let sig = bpsk(0.75, 0.5);
        let few = optimize(Objective::MinError, &sig, series(), &OptimizerConfig { starts: 8, ..Default::default() }).unwrap();
        let many = optimize(Objective::MinError, &sig, series(), &OptimizerConfig { starts: 32, ..Default::default() }).unwrap();
        assert!(many.value <= few.value);
        let few = optimize(Objective::MaxInformation, &sig, series(), &OptimizerConfig { starts: 8, ..Default::default() }).unwrap();
        let many = optimize(Objective::MaxInformation, &sig, series(), &OptimizerConfig { starts: 32, ..Default::default() }).unwrap();
        assert!(many.value >= few.value);
    }

    #[test]
    fn optimizer_is_deterministic() {
        let sig = bpsk(0.5, 0.3);
        let cfg = OptimizerConfig { seed: 42, ..Default::default() };
        let a = optimize(Objective::MaxInformation, &sig, series(), &cfg).unwrap();
        let b = optimize(Objective::MaxInformation, &sig, series(), &cfg).unwrap();
        assert_eq!(a, b);
    }

    proptest! {
        #[test]
        fn depends_on_xi_only_through_sin(
            xi in 0.0f64..TAU, theta in 0.0f64..FRAC_PI_2, phi in 0.0f64..17.0,
            a1 in 0.0f64..1.5, a2 in -1.5f64..0.0, sigma in 0.0f64..1.2,
        ) {
            let sig = SignalParams::new([0.5, 0.5], [a1, a2], sigma).unwrap();
            let p = AtomicParams::new(xi, theta, phi);
            let mirrored = AtomicParams::new(PI - xi, theta, phi);
            let ja = joint_probabilities_series(&sig, &p, series()).unwrap();
            let jb = joint_probabilities_series(&sig, &mirrored, series()).unwrap();
            for x in 0..2 {
                for y in 0..2 {
                    prop_assert!((ja[x][y] - jb[x][y]).abs() <= 1e-12);
                }
            }
        }

        #[test]
        fn joint_table_is_a_distribution(
            xi in 0.0f64..TAU, theta in 0.0f64..FRAC_PI_2, phi in 0.0f64..17.0,
            a1 in -1.5f64..1.5, a2 in -1.5f64..1.5, sigma in 0.0f64..1.2, q1 in 0.0f64..1.0,
        ) {
            let sig = SignalParams::new([q1, 1.0 - q1], [a1, a2], sigma).unwrap();
            let j = joint_probabilities_series(&sig, &AtomicParams::new(xi, theta, phi), series()).unwrap();
            for x in 0..2 {
                prop_assert!(j[x][0] >= -1e-12 && j[x][1] >= -1e-12);
                prop_assert!((j[x][0] + j[x][1] - sig.priors[x]).abs() <= 1e-9);
            }
        }
    }
}
