//! Inputs shared by the benchmarks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use vkf_core::deleted_product::{swap_quotient, triangulated_deleted_product};
use vkf_core::{BitMatrix, BitVector, QuotientComplex, SimplicialComplex, StandardComplex};

/// A seeded random `rows x cols` matrix with density one half.
pub fn random_matrix(rows: usize, cols: usize, seed: u64) -> BitMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rows = (0..rows)
        .map(|_| BitVector::from_bools((0..cols).map(|_| rng.gen::<bool>())))
        .collect();
    BitMatrix::from_rows(cols, rows).expect("rows have the stated width")
}

pub fn complex(c: StandardComplex) -> SimplicialComplex {
    c.build().expect("built-in complexes are valid")
}

/// The complete graph on five vertices.
pub fn k5() -> SimplicialComplex {
    complex(StandardComplex::Simplex(4)).skeleton(1)
}

pub fn quotient(k: &SimplicialComplex) -> QuotientComplex {
    swap_quotient(&triangulated_deleted_product(k)).expect("deleted products are free")
}
