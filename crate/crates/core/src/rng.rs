//! Seeded random streams.
//!
//! Every random draw in the crate goes through [`stream`], a ChaCha8 generator
//! keyed by `(seed, stream id)`. ChaCha is counter based, so distinct stream ids
//! give independent sequences and a given `(seed, id)` pair always reproduces the
//! same values regardless of what other streams were consumed.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::operator::{Matrix, Vector};

pub fn stream(seed: u64, id: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(id);
    rng
}

/// Vector with entries drawn from `uniform(-1, 1)`.
pub fn uniform_vector<R: Rng>(rng: &mut R, dim: usize) -> Vector {
    Vector::from_fn(dim, |_, _| rng.random_range(-1.0..1.0))
}

/// Matrix with entries drawn row-major from `uniform(-1, 1)`.
pub fn uniform_matrix<R: Rng>(rng: &mut R, rows: usize, cols: usize) -> Matrix {
    let data: Vec<f64> = (0..rows * cols)
        .map(|_| rng.random_range(-1.0..1.0))
        .collect();
    Matrix::from_row_slice(rows, cols, &data)
}
