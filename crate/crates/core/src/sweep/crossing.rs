use crate::error::{Error, Result};

/// First grid value where `a - b` changes sign, by linear interpolation
/// between the bracketing points. A point where the curves touch exactly
/// counts only if the sign differs on both sides of it. NaN entries are
/// skipped.
pub fn find_crossing(grid: &[f64], a: &[f64], b: &[f64]) -> Result<Option<f64>> {
    if a.len() != grid.len() || b.len() != grid.len() {
        return Err(Error::GridMismatch {
            grid: grid.len(),
            series: if a.len() != grid.len() { a.len() } else { b.len() },
        });
    }
    let pts: Vec<(f64, f64)> = grid
        .iter()
        .zip(a.iter().zip(b))
        .map(|(&x, (&a, &b))| (x, a - b))
        .filter(|(x, d)| x.is_finite() && d.is_finite())
        .collect();
    // sign of the last nonzero difference seen
    let mut last: Option<(f64, f64)> = None;
    for (i, &(x, d)) in pts.iter().enumerate() {
        if d == 0.0 {
            let next = pts[i + 1..].iter().find(|(_, d)| *d != 0.0);
            if let (Some((_, dp)), Some((_, dn))) = (last, next) {
                if dp.signum() != dn.signum() {
                    return Ok(Some(x));
                }
            }
            continue;
        }
        if let Some((xp, dp)) = last {
            if dp.signum() != d.signum() {
                return Ok(Some(xp + (x - xp) * dp / (dp - d)));
            }
        }
        last = Some((x, d));
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn linear_crossing_is_exact() {
        let grid: Vec<f64> = (0..11).map(|i| i as f64 * 0.1).collect();
        let a: Vec<f64> = grid.iter().map(|x| 2.0 * x).collect();
        let b: Vec<f64> = grid.iter().map(|x| 0.77 - 0.5 * x).collect();
        let x = find_crossing(&grid, &a, &b).unwrap().unwrap();
        assert_abs_diff_eq!(x, 0.77 / 2.5, epsilon = 1e-14);
    }

    #[test]
    fn touching_without_crossing() {
        let grid = [0.0, 1.0, 2.0];
        assert_eq!(find_crossing(&grid, &[1.0, 0.0, 1.0], &[0.0; 3]).unwrap(), None);
        assert_eq!(find_crossing(&grid, &[1.0, 0.0, -1.0], &[0.0; 3]).unwrap(), Some(1.0));
    }

    #[test]
    fn no_crossing_and_mismatch() {
        assert_eq!(find_crossing(&[0.0, 1.0], &[1.0, 2.0], &[0.0, 0.0]).unwrap(), None);
        assert!(matches!(
            find_crossing(&[0.0, 1.0], &[1.0], &[0.0, 0.0]),
            Err(Error::GridMismatch { grid: 2, series: 1 })
        ));
    }

    #[test]
    fn first_of_several() {
        let grid = [0.0, 1.0, 2.0, 3.0];
        let a = [1.0, -1.0, 1.0, -1.0];
        assert_eq!(find_crossing(&grid, &a, &[0.0; 4]).unwrap(), Some(0.5));
    }
}
