//! Latent state: frames x grid cells x embedding dimension, 64-bit floats.

use ndarray::Array3;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Latent {
    pub values: Array3<f64>,
}

impl Latent {
    pub fn zeros(frames: usize, cells: usize, dim: usize) -> Latent {
        Latent {
            values: Array3::zeros((frames, cells, dim)),
        }
    }

    pub fn from_values(values: Array3<f64>) -> Latent {
        Latent { values }
    }

    pub fn frames(&self) -> usize {
        self.values.shape()[0]
    }

    pub fn cells(&self) -> usize {
        self.values.shape()[1]
    }

    pub fn dim(&self) -> usize {
        self.values.shape()[2]
    }

    pub fn shape(&self) -> (usize, usize, usize) {
        let s = self.values.shape();
        (s[0], s[1], s[2])
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }

    pub fn ensure_finite(&self, what: &str) -> Result<()> {
        if self.is_finite() {
            Ok(())
        } else {
            Err(Error::domain(format!("{what} contains non-finite entries")))
        }
    }

    pub fn same_shape(&self, other: &Latent) -> bool {
        self.shape() == other.shape()
    }
}
