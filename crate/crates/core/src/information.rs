//! Shannon quantities over discrete joint distributions, in bits.

use crate::tolerances::Tolerances;

/// `h2(p) = -p log2 p - (1 - p) log2 (1 - p)`.
pub fn binary_entropy(p: f64) -> f64 {
    let term = |x: f64| if x > 0.0 { -x * x.log2() } else { 0.0 };
    term(p) + term(1.0 - p)
}

/// Mutual information of a joint table `Pr(x, y)` (rows are inputs).
///
/// Input marginals are the row sums. Entries below
/// `Tolerances::DEFAULT.probability_floor` contribute zero.
pub fn mutual_information_from_joint<R: AsRef<[f64]>>(joint: &[R]) -> f64 {
    let floor = Tolerances::DEFAULT.probability_floor;
    let cols = joint.iter().map(|r| r.as_ref().len()).max().unwrap_or(0);
    let mut col_sums = vec![0.0; cols];
    for row in joint {
        for (y, &p) in row.as_ref().iter().enumerate() {
            col_sums[y] += p.max(0.0);
        }
    }
    let mut info = 0.0;
    for row in joint {
        let row = row.as_ref();
        let qx: f64 = row.iter().map(|p| p.max(0.0)).sum();
        for (y, &p) in row.iter().enumerate() {
            if p < floor {
                continue;
            }
            info += p * (p / (qx * col_sums[y])).log2();
        }
    }
    info.max(0.0)
}
