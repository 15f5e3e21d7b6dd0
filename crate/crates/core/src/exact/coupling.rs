use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::rng::RngStream;

/// Largest entry of `|Q(i, j) - Q(M i, M j)|` for the mirror `M i = s - 1 - i`.
pub fn mirror_defect(q: &DMatrix<f64>) -> f64 {
    let s = q.nrows();
    let mut worst: f64 = 0.0;
    for i in 0..s {
        for j in 0..s {
            worst = worst.max((q[(i, j)] - q[(s - 1 - i, s - 1 - j)]).abs());
        }
    }
    worst
}

fn inverse_cdf(row: impl Iterator<Item = f64>, u: f64) -> usize {
    let mut acc = 0.0;
    let mut last = 0;
    for (j, p) in row.enumerate() {
        if p <= 0.0 {
            continue;
        }
        acc += p;
        last = j;
        if u <= acc {
            return j;
        }
    }
    last
}

/// Coupling time of two copies of a mirror-symmetric folded chain started at
/// opposite ends.
///
/// Both copies read the same uniform `U`, one through `U` and the other
/// through `1 - U`. For a chain with `Q(i, j) = Q(M i, M j)` this keeps the
/// second copy at the mirror image of the first, so they meet exactly when
/// the first reaches the middle state. Each copy is marginally a `Q` chain.
pub fn reflection_coupling(q: &DMatrix<f64>, rng: &mut RngStream, max_t: usize) -> Result<usize> {
    let s = q.nrows();
    if s != q.ncols() || s.is_multiple_of(2) {
        return Err(Error::InvalidSpec("coupling needs a square matrix of odd size".into()));
    }
    if mirror_defect(q) > 1e-12 {
        return Err(Error::InvalidSpec("folded chain is not mirror symmetric".into()));
    }
    let (mut y, mut y2) = (0usize, s - 1);
    for t in 1..=max_t {
        let u = rng.uniform();
        y = inverse_cdf(q.row(y).iter().copied(), u);
        y2 = inverse_cdf(q.row(y2).iter().copied(), 1.0 - u);
        if y == y2 {
            return Ok(t);
        }
    }
    Err(Error::Timeout { max_t })
}
