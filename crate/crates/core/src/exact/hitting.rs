use std::collections::VecDeque;

use nalgebra::{DMatrix, DVector};

use super::matrix::{TransitionMatrix, DENSE_CAP};
use crate::error::{Error, Result};

/// Expected number of steps to reach `targets` from every state.
///
/// Solves `(I - Q) h = 1` on the non-target states, where `Q` is the
/// restriction of `P` to them. Entries for target states are zero.
pub fn expected_hitting_times(p: &TransitionMatrix, targets: &[usize]) -> Result<Vec<f64>> {
    let n = p.n();
    let mut is_target = vec![false; n];
    for &t in targets {
        if t >= n {
            return Err(Error::DimensionMismatch { expected: n, found: t + 1 });
        }
        is_target[t] = true;
    }
    // Backward search: which states can reach the target set at all.
    let mut reverse: Vec<Vec<usize>> = vec![Vec::new(); n];
    for x in 0..n {
        let (c, v) = p.row(x);
        for (y, pv) in c.iter().zip(v) {
            if *pv > 0.0 {
                reverse[*y].push(x);
            }
        }
    }
    let mut reach = is_target.clone();
    let mut queue: VecDeque<usize> = targets.iter().copied().collect();
    while let Some(y) = queue.pop_front() {
        for &x in &reverse[y] {
            if !reach[x] {
                reach[x] = true;
                queue.push_back(x);
            }
        }
    }
    if let Some(bad) = (0..n).find(|x| !reach[*x]) {
        return Err(Error::Unreachable(bad));
    }
    let free: Vec<usize> = (0..n).filter(|x| !is_target[*x]).collect();
    if free.len() > DENSE_CAP {
        return Err(Error::SpaceTooLarge { states: free.len(), cap: DENSE_CAP });
    }
    let mut pos = vec![usize::MAX; n];
    for (k, &s) in free.iter().enumerate() {
        pos[s] = k;
    }
    let m = free.len();
    let mut a = DMatrix::<f64>::identity(m, m);
    for (k, &s) in free.iter().enumerate() {
        let (c, v) = p.row(s);
        for (y, pv) in c.iter().zip(v) {
            if pos[*y] != usize::MAX {
                a[(k, pos[*y])] -= pv;
            }
        }
    }
    let h = a.lu().solve(&DVector::from_element(m, 1.0)).ok_or(Error::SingularSystem)?;
    let mut out = vec![0.0; n];
    for (k, &s) in free.iter().enumerate() {
        out[s] = h[k];
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lazy_walk_on_a_path() {
        // Simple walk on {0..4} reflecting at 0: hitting 4 from k takes 16 - k².
        let n = 5;
        let rows = (0..n)
            .map(|i| match i {
                0 => vec![(1, 1.0)],
                4 => vec![(4, 1.0)],
                _ => vec![(i - 1, 0.5), (i + 1, 0.5)],
            })
            .collect();
        let p = TransitionMatrix::from_rows(rows).unwrap();
        let h = expected_hitting_times(&p, &[4]).unwrap();
        for (k, v) in h.iter().enumerate() {
            assert!((v - (16 - k * k) as f64).abs() < 1e-10);
        }
    }

    #[test]
    fn unreachable_target() {
        let p = TransitionMatrix::identity(3);
        assert_eq!(expected_hitting_times(&p, &[2]), Err(Error::Unreachable(0)));
    }
}
