//! Nelder-Mead downhill simplex with a caller-supplied projection onto the
//! feasible set.

#[derive(Debug, Clone)]
pub struct SimplexOptions {
    /// Offset of each initial vertex from the start point, per coordinate.
    pub initial_step: Vec<f64>,
    /// Stop when every vertex lies within this sup-distance of the best.
    pub diameter_tol: f64,
    pub max_evals: usize,
}

#[derive(Debug, Clone)]
pub struct SimplexResult {
    pub x: Vec<f64>,
    pub value: f64,
    pub evals: usize,
    pub converged: bool,
}

const REFLECT: f64 = 1.0;
const EXPAND: f64 = 2.0;
const CONTRACT: f64 = 0.5;
const SHRINK: f64 = 0.5;

/// Minimizes `f`. Every trial point is passed through `project` before it is
/// evaluated and stored, so vertices never leave the feasible set.
pub fn nelder_mead<F, P>(mut f: F, project: P, x0: &[f64], opts: &SimplexOptions) -> SimplexResult
where
    F: FnMut(&[f64]) -> f64,
    P: Fn(&mut [f64]),
{
    let dim = x0.len();
    assert_eq!(opts.initial_step.len(), dim);
    let mut evals = 0usize;
    let mut eval = |x: &mut Vec<f64>, evals: &mut usize| {
        project(x);
        *evals += 1;
        let v = f(x);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    };

    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(dim + 1);
    let mut start = x0.to_vec();
    let v = eval(&mut start, &mut evals);
    simplex.push((start.clone(), v));
    for i in 0..dim {
        let mut x = start.clone();
        x[i] += opts.initial_step[i];
        let mut v = eval(&mut x, &mut evals);
        if x == start {
            // projected back onto the start; step the other way
            x = start.clone();
            x[i] -= opts.initial_step[i];
            v = eval(&mut x, &mut evals);
        }
        simplex.push((x, v));
    }

    let mut converged = false;
    loop {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let best = simplex[0].0.clone();
        let diameter = simplex[1..]
            .iter()
            .flat_map(|(x, _)| x.iter().zip(&best).map(|(a, b)| (a - b).abs()))
            .fold(0.0, f64::max);
        if diameter < opts.diameter_tol {
            converged = true;
            break;
        }
        if evals >= opts.max_evals {
            break;
        }

        let mut centroid = vec![0.0; dim];
        for (x, _) in &simplex[..dim] {
            for (c, xi) in centroid.iter_mut().zip(x) {
                *c += xi / dim as f64;
            }
        }
        let worst = simplex[dim].clone();
        let along = |t: f64| -> Vec<f64> {
            centroid
                .iter()
                .zip(&worst.0)
                .map(|(c, w)| c + t * (c - w))
                .collect()
        };

        let mut xr = along(REFLECT);
        let fr = eval(&mut xr, &mut evals);
        if fr < simplex[0].1 {
            let mut xe = along(REFLECT * EXPAND);
            let fe = eval(&mut xe, &mut evals);
            simplex[dim] = if fe < fr { (xe, fe) } else { (xr, fr) };
            continue;
        }
        if fr < simplex[dim - 1].1 {
            simplex[dim] = (xr, fr);
            continue;
        }
        let (mut xc, threshold) = if fr < worst.1 {
            (along(REFLECT * CONTRACT), fr)
        } else {
            (along(-CONTRACT), worst.1)
        };
        let fc = eval(&mut xc, &mut evals);
        if fc < threshold {
            simplex[dim] = (xc, fc);
            continue;
        }
        for k in 1..=dim {
            let mut x: Vec<f64> = best
                .iter()
                .zip(&simplex[k].0)
                .map(|(b, xi)| b + SHRINK * (xi - b))
                .collect();
            let v = eval(&mut x, &mut evals);
            simplex[k] = (x, v);
        }
    }

    simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
    let (x, value) = simplex.swap_remove(0);
    SimplexResult {
        x,
        value,
        evals,
        converged,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn opts(dim: usize) -> SimplexOptions {
        SimplexOptions {
            initial_step: vec![0.5; dim],
            diameter_tol: 1e-10,
            max_evals: 20_000,
        }
    }

    #[test]
    fn rosenbrock() {
        let f = |x: &[f64]| (1.0 - x[0]).powi(2) + 100.0 * (x[1] - x[0] * x[0]).powi(2);
        let r = nelder_mead(f, |_| {}, &[-1.2, 1.0], &opts(2));
        assert!(r.converged);
        assert_abs_diff_eq!(r.x[0], 1.0, epsilon = 1e-6);
        assert_abs_diff_eq!(r.x[1], 1.0, epsilon = 1e-6);
    }

    #[test]
    fn projection_keeps_vertices_feasible() {
        // unconstrained minimum at x = -2, feasible set x >= 0
        let f = |x: &[f64]| (x[0] + 2.0).powi(2) + (x[1] - 1.0).powi(2);
        let r = nelder_mead(f, |x| x[0] = x[0].max(0.0), &[3.0, 3.0], &opts(2));
        assert_eq!(r.x[0], 0.0);
        assert_abs_diff_eq!(r.x[1], 1.0, epsilon = 1e-6);
        assert_abs_diff_eq!(r.value, 4.0, epsilon = 1e-10);
    }

    #[test]
    fn eval_budget_respected() {
        let f = |x: &[f64]| x.iter().map(|v| v.sin()).sum::<f64>();
        let o = SimplexOptions {
            max_evals: 50,
            ..opts(3)
        };
        let r = nelder_mead(f, |_| {}, &[0.1, 0.2, 0.3], &o);
        assert!(r.evals <= 50 + 4);
        assert!(!r.converged);
    }
}
