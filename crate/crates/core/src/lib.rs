//! Server-side homomorphic inference stack at desk scale.
//!
//! The crate is organized around a leveled BFV engine and the layers that
//! drive it:
//!
//! - [`modarith`]: Barrett-reduced modular arithmetic and the negacyclic NTT.
//! - [`bfv`]: packing encoder, symmetric encryption, the homomorphic
//!   operators (add, plain multiply, slot rotation with decomposition-based
//!   key switching), and an exact noise-budget meter.
//! - [`ptune`]: closed-form per-layer performance and noise models with the
//!   decryption-failure machinery.
//! - [`tuner`]: per-layer parameter design-space exploration.
//! - [`scheduler`]: packed layouts and the partial-aligned / input-aligned
//!   dot-product schedules executing CNN and FC layers on the engine.
//! - [`accelsim`]: analytical accelerator cost model with design-space
//!   exploration and Pareto selection.
//! - [`netdesc`]: canned network layer tables and a file parser.
//! - [`reference`]: brute-force plaintext oracles used for validation.
//! - [`validation`]: the invariant battery behind `validate`.

pub mod accelsim;
pub mod bfv;
pub mod modarith;
pub mod netdesc;
pub mod ptune;
pub mod reference;
pub mod scheduler;
pub mod tuner;
pub mod validation;

pub use bfv::{Ciphertext, GaloisKeySet, HeParams, NoiseReport, Plaintext, SecretKey};
