//! Finite product spaces and targets on them.

use crate::error::{Error, Result};

/// A product of finite coordinate sets `{0, .., radix_i - 1}`.
///
/// States are flattened in mixed radix with coordinate 0 varying fastest.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiscreteSpace {
    radices: Vec<usize>,
    strides: Vec<usize>,
    total: usize,
}

impl DiscreteSpace {
    pub fn new(radices: Vec<usize>) -> Result<Self> {
        if radices.is_empty() || radices.contains(&0) {
            return Err(Error::InvalidSpec("every coordinate needs at least one value".into()));
        }
        let mut strides = Vec::with_capacity(radices.len());
        let mut total: usize = 1;
        for &m in &radices {
            strides.push(total);
            total = total
                .checked_mul(m)
                .ok_or_else(|| Error::InvalidSpec("state count overflows usize".into()))?;
        }
        Ok(Self { radices, strides, total })
    }

    /// `m^d` states.
    pub fn cube(m: usize, d: usize) -> Result<Self> {
        Self::new(vec![m; d])
    }

    pub fn dim(&self) -> usize {
        self.radices.len()
    }

    pub fn radix(&self, coord: usize) -> usize {
        self.radices[coord]
    }

    pub fn total_states(&self) -> usize {
        self.total
    }

    pub fn encode(&self, coords: &[usize]) -> usize {
        debug_assert_eq!(coords.len(), self.dim());
        coords.iter().zip(&self.strides).map(|(c, s)| c * s).sum()
    }

    pub fn decode(&self, index: usize) -> Vec<usize> {
        let mut out = vec![0; self.dim()];
        self.decode_into(index, &mut out);
        out
    }

    pub fn decode_into(&self, mut index: usize, out: &mut [usize]) {
        for (c, &m) in out.iter_mut().zip(&self.radices) {
            *c = index % m;
            index /= m;
        }
    }

    pub fn coord(&self, index: usize, coord: usize) -> usize {
        (index / self.strides[coord]) % self.radices[coord]
    }

    /// The state obtained by setting coordinate `coord` of `index` to `value`.
    pub fn with_coord(&self, index: usize, coord: usize, value: usize) -> usize {
        let s = self.strides[coord];
        index - self.coord(index, coord) * s + value * s
    }
}

/// A normalized probability mass function on a [`DiscreteSpace`].
///
/// Only states of positive mass are stored, so targets supported on a thin
/// subset of a huge space stay cheap.
#[derive(Debug, Clone)]
pub struct DiscreteTarget {
    space: DiscreteSpace,
    support: Vec<usize>,
    masses: Vec<f64>,
    dense: bool,
    filament: Vec<usize>,
}

impl DiscreteTarget {
    /// Build from unnormalized masses listed for every state.
    pub fn from_dense(space: DiscreteSpace, raw: Vec<f64>) -> Result<Self> {
        if raw.len() != space.total_states() {
            return Err(Error::DimensionMismatch { expected: space.total_states(), found: raw.len() });
        }
        let pairs = raw.into_iter().enumerate().collect();
        Self::from_pairs(space, pairs)
    }

    /// Build from `(state, unnormalized mass)` pairs; unlisted states get zero.
    pub fn from_pairs(space: DiscreteSpace, mut pairs: Vec<(usize, f64)>) -> Result<Self> {
        if pairs.iter().any(|(_, m)| !m.is_finite() || *m < 0.0) {
            return Err(Error::NonFinite("target masses"));
        }
        if pairs.iter().any(|(s, _)| *s >= space.total_states()) {
            return Err(Error::InvalidSpec("state index out of range".into()));
        }
        pairs.retain(|(_, m)| *m > 0.0);
        pairs.sort_by_key(|(s, _)| *s);
        pairs.dedup_by_key(|(s, _)| *s);
        let total: f64 = pairs.iter().map(|(_, m)| m).sum();
        if total <= 0.0 {
            return Err(Error::AllZero);
        }
        let dense = pairs.len() == space.total_states();
        let (support, masses): (Vec<_>, Vec<_>) = pairs.into_iter().map(|(s, m)| (s, m / total)).unzip();
        Ok(Self { space, support, masses, dense, filament: Vec::new() })
    }

    /// Attach a distinguished subset of states (sorted on entry).
    pub fn with_filament(mut self, mut states: Vec<usize>) -> Self {
        states.sort_unstable();
        states.dedup();
        self.filament = states;
        self
    }

    pub fn space(&self) -> &DiscreteSpace {
        &self.space
    }

    /// States of positive mass, ascending.
    pub fn support(&self) -> &[usize] {
        &self.support
    }

    /// Masses aligned with [`Self::support`].
    pub fn support_masses(&self) -> &[f64] {
        &self.masses
    }

    /// Position of `state` in the support, if it has positive mass.
    pub fn support_position(&self, state: usize) -> Option<usize> {
        if self.dense {
            (state < self.masses.len()).then_some(state)
        } else {
            self.support.binary_search(&state).ok()
        }
    }

    pub fn prob(&self, state: usize) -> f64 {
        self.support_position(state).map_or(0.0, |k| self.masses[k])
    }

    pub fn log_prob(&self, state: usize) -> f64 {
        self.prob(state).ln()
    }

    pub fn filament(&self) -> &[usize] {
        &self.filament
    }

    pub fn in_filament(&self, state: usize) -> bool {
        self.filament.binary_search(&state).is_ok()
    }
}
