//! Exact linear algebra over `Q` and over word-sized prime fields.

pub mod dense;
pub mod exact;
pub mod field;
pub mod matrix;
pub mod modular;

pub use dense::{charpoly_hessenberg, echelonize as echelonize_in, kernel_basis as kernel_basis_in, rref, sparse_rref, Echelon};
pub use exact::{
    bareiss_echelon, charpoly, charpoly_berkowitz, charpoly_integer, charpoly_multimodular, echelonize,
    hadamard_charpoly_bound, kernel_basis, multimodular_charpoly, rank, CharPoly,
};
pub use field::{Field, PrimeField, Rationals};
pub use matrix::{Matrix, SparseMatrix};
pub use modular::{crt_pair, prime_at, rational_reconstruction, reconstruction_bound, word_primes, CrtVector};
