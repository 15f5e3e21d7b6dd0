use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Maps between a filament path and its folded chain.
///
/// The filament has `N = (n - 1) d + 1` states listed as
/// `V1, E1 interior, V2, E2 interior, .., V_{d+1}`, where each edge interior
/// holds `n - 2` states. The folded space has `2d + 1` states: one per vertex
/// and one per edge. `gamma` (`(2d+1) × N`) averages over each edge, and
/// `omega` (`N × (2d+1)`) sends every filament state to its folded class.
#[derive(Debug, Clone, PartialEq)]
pub struct FoldingMaps {
    pub d: usize,
    pub n: usize,
    pub gamma: DMatrix<f64>,
    pub omega: DMatrix<f64>,
}

impl FoldingMaps {
    pub fn filament_len(&self) -> usize {
        (self.n - 1) * self.d + 1
    }

    pub fn folded_len(&self) -> usize {
        2 * self.d + 1
    }

    /// Folded class of filament position `z`.
    pub fn class_of(&self, z: usize) -> usize {
        let block = z / (self.n - 1);
        let offset = z % (self.n - 1);
        if offset == 0 {
            2 * block
        } else {
            2 * block + 1
        }
    }
}

/// Build the mapping matrices for a `d`-edge filament with `n` states per edge.
pub fn build_folding_maps(d: usize, n: usize) -> Result<FoldingMaps> {
    if d == 0 || n < 3 {
        return Err(Error::InvalidSpec(format!("folding needs d ≥ 1 and n ≥ 3, got d = {d}, n = {n}")));
    }
    let big = (n - 1) * d + 1;
    let small = 2 * d + 1;
    let mut maps = FoldingMaps { d, n, gamma: DMatrix::zeros(small, big), omega: DMatrix::zeros(big, small) };
    for z in 0..big {
        let y = maps.class_of(z);
        maps.omega[(z, y)] = 1.0;
        maps.gamma[(y, z)] = if y.is_multiple_of(2) { 1.0 } else { 1.0 / (n - 2) as f64 };
    }
    Ok(maps)
}

/// Fold a filament transition matrix: returns `Q = Γ P Ω` and the lifted
/// matrix `P̄ = Ω Q Γ`.
pub fn fold_unfold(p: &DMatrix<f64>, maps: &FoldingMaps) -> Result<(DMatrix<f64>, DMatrix<f64>)> {
    let big = maps.filament_len();
    if p.nrows() != big || p.ncols() != big {
        return Err(Error::DimensionMismatch { expected: big, found: p.nrows() });
    }
    let q = &maps.gamma * p * &maps.omega;
    let lifted = &maps.omega * &q * &maps.gamma;
    Ok((q, lifted))
}
