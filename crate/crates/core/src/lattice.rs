//! Finite boxes `{α : 0 <= α <= bounds}` in `Z^n_+` with a row-major
//! (last coordinate fastest) enumeration, which is also lexicographic order.

use thiserror::Error;

use crate::polytuple::MultiIndex;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WindowError {
    #[error("window has no coordinates")]
    EmptyWindow,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeWindow {
    bounds: MultiIndex,
    strides: Vec<usize>,
    len: usize,
}

impl LatticeWindow {
    pub fn new(bounds: MultiIndex) -> Result<Self, WindowError> {
        if bounds.dim() == 0 {
            return Err(WindowError::EmptyWindow);
        }
        let n = bounds.dim();
        let mut strides = vec![1usize; n];
        for k in (0..n - 1).rev() {
            strides[k] = strides[k + 1] * (bounds.0[k + 1] as usize + 1);
        }
        let len = strides[0] * (bounds.0[0] as usize + 1);
        Ok(LatticeWindow {
            bounds,
            strides,
            len,
        })
    }

    /// The cube `[0, b]^n`.
    pub fn cube(n: usize, b: u32) -> Result<Self, WindowError> {
        Self::new(MultiIndex(vec![b; n]))
    }

    pub fn bounds(&self) -> &MultiIndex {
        &self.bounds
    }

    pub fn dim(&self) -> usize {
        self.bounds.dim()
    }

    /// `N = ∏ (b_j + 1)`.
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn strides(&self) -> &[usize] {
        &self.strides
    }

    pub fn contains(&self, alpha: &MultiIndex) -> bool {
        alpha.dim() == self.dim() && alpha.dominated_by(&self.bounds)
    }

    pub fn index_of(&self, alpha: &MultiIndex) -> Option<usize> {
        if !self.contains(alpha) {
            return None;
        }
        Some(
            alpha
                .0
                .iter()
                .zip(&self.strides)
                .map(|(&a, &s)| a as usize * s)
                .sum(),
        )
    }

    pub fn alpha_at(&self, mut idx: usize) -> MultiIndex {
        let mut v = vec![0u32; self.dim()];
        for (k, &s) in self.strides.iter().enumerate() {
            v[k] = (idx / s) as u32;
            idx %= s;
        }
        MultiIndex(v)
    }

    pub fn iter(&self) -> impl Iterator<Item = MultiIndex> + '_ {
        (0..self.len).map(move |i| self.alpha_at(i))
    }

    /// `α` is interior for shift `δ` when `α + δ` stays in the window.
    pub fn is_interior(&self, alpha: &MultiIndex, delta: &MultiIndex) -> bool {
        self.contains(&alpha.add(delta))
    }

    /// The window enlarged by `delta` in every coordinate.
    pub fn grown(&self, delta: u32) -> LatticeWindow {
        LatticeWindow::new(MultiIndex(self.bounds.0.iter().map(|b| b + delta).collect()))
            .expect("nonempty")
    }
}
