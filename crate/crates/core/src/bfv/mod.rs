//! Leveled BFV: packing encoder, symmetric encryption, the homomorphic
//! operators (`he_add`, plaintext multiply, slot rotation with
//! decomposition-based key switching), and an exact noise-budget meter.
//!
//! Ciphertexts default to the evaluation representation; conversion to the
//! coefficient domain happens only where an operation demands it (digit
//! decomposition inside a rotation, decryption).
//!
//! # Slot structure and rotations
//!
//! The `n` slots of a packed polynomial form a 2 x (n/2) matrix: slot `j`
//! sits at row `j / (n/2)`, column `j % (n/2)`. A rotation step `k` in
//! `[0, n/2)` cyclically rotates both rows right by `k` columns
//! (automorphism `x -> x^(3^k mod 2n)` up to inverse); steps in `[n/2, n)`
//! additionally swap the two rows (automorphism index times `2n - 1`) and
//! still cost a single key switch. Step `n/2` is the pure row swap. The
//! rotation period within a row is `n/2`, so rotating by `k` and then by
//! `n/2 - k` restores the original slots.

mod cipher;
mod encoder;
mod keys;
mod params;
mod serialize;

pub use cipher::{
    decrypt, encrypt, encrypt_zero, measured_noise_inf, noise_report, Ciphertext, CtRepr,
    NoiseReport, SecretKey,
};
pub use encoder::{decode, decode_signed, encode, PlainRepr, Plaintext};
pub use keys::{galois_element_for_step, keygen, GaloisKey, GaloisKeySet};
pub use params::HeParams;
pub use serialize::{
    read_ciphertext, read_galois_keys, read_params, read_plaintext, read_secret_key,
    write_ciphertext, write_galois_keys, write_params, write_plaintext, write_secret_key,
};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum BfvError {
    #[error("operands were created under different parameter sets")]
    ParamMismatch,
    #[error("operands are in different representations")]
    ReprMismatch,
    #[error("no Galois key for rotation step {step}")]
    MissingGaloisKey { step: usize },
    #[error("expected {expected} decomposition digits, got {got}")]
    DigitCountMismatch { expected: usize, got: usize },
    #[error("slot value {value} is not below the plaintext modulus {modulus}")]
    ValueOutOfRange { value: u64, modulus: u64 },
    #[error("too many values for {n} slots: {got}")]
    TooManyValues { n: usize, got: usize },
    #[error(transparent)]
    ModArith(#[from] crate::modarith::ModArithError),
    #[error("malformed serialized object: {0}")]
    Serialize(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

mod ops;
pub use ops::{
    compose_digits, decompose_plaintext, decompose_poly, he_add, he_mult_plain,
    he_mult_plain_decomposed, he_rotate,
};
