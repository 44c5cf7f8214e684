//! Fixed-capacity circular sample store shared by both line kinds.

use crate::{Error, Result, Sample};

/// A circular buffer of `B` samples. The length is fixed after
/// construction and every access wraps; an index can never fall
/// outside the store.
#[derive(Debug, Clone)]
pub struct DelayBuffer {
    cells: Vec<Sample>,
}

impl DelayBuffer {
    /// Minimum capacity: the quadratic interpolators need a few cells
    /// of guard around the pointers.
    pub const MIN_LEN: usize = 4;

    pub fn new(len: usize) -> Result<Self> {
        if len < Self::MIN_LEN {
            return Err(Error::OutOfRange {
                what: "buffer length",
                value: len as f64,
                min: Self::MIN_LEN as f64,
                max: f64::INFINITY,
            });
        }
        Ok(Self {
            cells: vec![0.0; len],
        })
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.cells.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        false // length is at least MIN_LEN by construction
    }

    /// Wrap any signed index into `[0, len)`.
    #[inline]
    pub fn wrap(&self, index: i64) -> usize {
        index.rem_euclid(self.cells.len() as i64) as usize
    }

    #[inline]
    pub fn get(&self, index: i64) -> Sample {
        self.cells[self.wrap(index)]
    }

    #[inline]
    pub fn set(&mut self, index: i64, value: Sample) {
        let i = self.wrap(index);
        self.cells[i] = value;
    }

    /// Unwrapped read for hot paths where the caller already reduced
    /// the index.
    #[inline]
    pub fn get_at(&self, index: usize) -> Sample {
        self.cells[index]
    }

    #[inline]
    pub fn set_at(&mut self, index: usize, value: Sample) {
        self.cells[index] = value;
    }

    pub fn clear(&mut self) {
        self.cells.fill(0.0);
    }

    pub fn as_slice(&self) -> &[Sample] {
        &self.cells
    }

    pub fn as_mut_slice(&mut self) -> &mut [Sample] {
        &mut self.cells
    }
}
