//! Word-sized modular arithmetic over NTT-friendly primes and the negacyclic
//! number-theoretic transform on `Z_q[x]/(x^n + 1)`.
//!
//! Everything in this module is a pure function over immutable tables;
//! [`NttTables`] can be shared freely across threads once built.

mod modulus;
mod ntt;
mod prime;

pub use modulus::{barrett_reduce, Modulus};
pub use ntt::{
    negacyclic_mul_schoolbook, ntt_butterfly_count, ntt_forward, ntt_inverse,
    reset_ntt_butterfly_count, NttTables,
};
pub use prime::{find_primitive_2n_root, generate_ntt_prime, is_prime_u64, mod_inv, mod_pow};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModArithError {
    /// The modulus has no primitive 2n-th root of unity (it is not 1 mod 2n).
    #[error("modulus {modulus} has no primitive {order}-th root of unity")]
    NoRoot { modulus: u64, order: u64 },
    /// Prime search space exhausted.
    #[error("no {bits}-bit prime congruent to 1 mod {congruence} exists")]
    NoPrimeFound { bits: u32, congruence: u64 },
    /// Vector length does not match the transform size.
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
}
