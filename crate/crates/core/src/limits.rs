use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Caps on exhaustive enumeration. Operations beyond a cap fail with
/// [`Error::TooLarge`] instead of approximating.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Limits {
    /// Subset sweeps are allowed while `n <= max_subsets_log2`.
    pub max_subsets_log2: u32,
    /// Per-subset tables are materialized only while `n <= max_table_log2`.
    pub max_table_log2: u32,
    /// Vector enumeration of a space needs `q^dim <= 2^max_vectors_log2`.
    pub max_vectors_log2: u32,
    /// Largest Hilbert-space dimension `p^n` the density-matrix oracle accepts.
    pub max_oracle_dim: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { max_subsets_log2: 24, max_table_log2: 16, max_vectors_log2: 20, max_oracle_dim: 4096 }
    }
}

impl Limits {
    pub fn check_subsets(&self, n: usize, what: &str) -> Result<()> {
        if n as u32 > self.max_subsets_log2 {
            return Err(Error::TooLarge {
                what: what.to_string(),
                needed: format!("2^{n} subsets"),
                limit: format!("2^{}", self.max_subsets_log2),
            });
        }
        Ok(())
    }

    pub fn check_vectors(&self, q: u32, dim: usize, what: &str) -> Result<()> {
        let bits = (q as f64).log2() * dim as f64;
        if bits > self.max_vectors_log2 as f64 + 1e-9 {
            return Err(Error::TooLarge {
                what: what.to_string(),
                needed: format!("{q}^{dim} vectors"),
                limit: format!("2^{}", self.max_vectors_log2),
            });
        }
        Ok(())
    }
}
