//! Gauss-Hermite rules for `int f(x) e^{-x^2} dx`.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};
use crate::tolerances::Tolerances;

#[derive(Debug, Clone)]
pub struct GaussHermite {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussHermite {
    /// Nodes from the Jacobi matrix, polished by Newton iteration on the
    /// orthonormal Hermite recurrence. Fails if
    /// the weights do not sum to `sqrt(pi)` within `tol.quadrature_norm`.
    pub fn new(order: usize, tol: &Tolerances) -> Result<Self> {
        if order == 0 {
            return Err(Error::InvalidParameter("quadrature order 0".into()));
        }
        const PI_M4: f64 = 0.751_125_544_464_942_5; // pi^{-1/4}
        let n = order;
        let nf = n as f64;
        // Jacobi matrix eigenvalues as starting points, then Newton polish
        let jacobi = DMatrix::from_fn(n, n, |i, j| {
            if i + 1 == j || j + 1 == i {
                (i.max(j) as f64 / 2.0).sqrt()
            } else {
                0.0
            }
        });
        let mut guesses: Vec<f64> = SymmetricEigen::new(jacobi).eigenvalues.iter().copied().collect();
        guesses.sort_by(|a, b| b.total_cmp(a));
        let mut x = vec![0.0; n];
        let mut w = vec![0.0; n];
        for i in 0..n.div_ceil(2) {
            let mut z = guesses[i];
            let mut pp = 0.0;
            // the recurrence overflows far out; rescale and keep the count
            let mut rescales = 0;
            for _ in 0..20 {
                let mut p1 = PI_M4;
                let mut p2 = 0.0;
                rescales = 0;
                for j in 0..n {
                    let p3 = p2;
                    p2 = p1;
                    let jf = j as f64;
                    p1 = z * (2.0 / (jf + 1.0)).sqrt() * p2 - (jf / (jf + 1.0)).sqrt() * p3;
                    if p1.abs() > 1e100 {
                        p1 *= 1e-100;
                        p2 *= 1e-100;
                        rescales += 1;
                    }
                }
                pp = (2.0 * nf).sqrt() * p2;
                let z1 = z;
                z = z1 - p1 / pp;
                if (z - z1).abs() <= 1e-15 * z.abs().max(1.0) {
                    break;
                }
            }
            x[i] = z;
            x[n - 1 - i] = -z;
            w[i] = 2.0 / (pp * pp) * 1e-200f64.powi(rescales);
            w[n - 1 - i] = w[i];
        }
        if n % 2 == 1 {
            x[n / 2] = 0.0;
        }
        let deviation = (w.iter().sum::<f64>() / std::f64::consts::PI.sqrt() - 1.0).abs();
        if !(deviation <= tol.quadrature_norm) {
            return Err(Error::QuadratureUnderflow { order, deviation });
        }
        Ok(Self { nodes: x, weights: w })
    }

    /// Shared rule at default tolerances, built once per order.
    pub fn cached(order: usize) -> Result<Arc<Self>> {
        static RULES: OnceLock<Mutex<HashMap<usize, Arc<GaussHermite>>>> = OnceLock::new();
        let rules = RULES.get_or_init(Default::default);
        if let Some(r) = rules.lock().unwrap_or_else(|e| e.into_inner()).get(&order) {
            return Ok(r.clone());
        }
        let rule = Arc::new(Self::new(order, &Tolerances::DEFAULT)?);
        rules
            .lock()
            .unwrap_or_else(|e| e.into_inner())
            .insert(order, rule.clone());
        Ok(rule)
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    /// `E[f(phi)]` for `phi ~ N(0, sigma^2)`.
    pub fn gaussian_mean<F: FnMut(f64) -> f64>(&self, sigma: f64, mut f: F) -> f64 {
        let scale = std::f64::consts::SQRT_2 * sigma;
        let norm = std::f64::consts::PI.sqrt();
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(x, w)| w * f(scale * x))
            .sum::<f64>()
            / norm
    }
}
