//! Slot packing: the batching encoder over `R_t`.
//!
//! `t = 1 mod 2n` guarantees `x^n + 1` splits into linear factors over
//! `Z_t`, so a plaintext polynomial evaluates to `n` independent slot
//! values. Slot `j` (row `j / (n/2)`, column `j % (n/2)`) is tied to the
//! evaluation point `psi^(3^col * (2n-1)^row mod 2n)`; with that ordering
//! the Galois automorphisms act as row rotations and row swaps.

use std::sync::{Arc, OnceLock};

use crate::modarith::{mod_pow, ntt_forward, ntt_inverse};

use super::params::HeParams;
use super::BfvError;

/// Mapping between slot indices and NTT bucket positions.
#[derive(Debug)]
pub struct SlotMap {
    n: usize,
    /// Exponent of psi evaluated at NTT bucket `u`: `2 * bitrev(u) + 1`.
    bucket_exp: Vec<u64>,
    /// NTT bucket holding slot `j`.
    slot_to_bucket: Vec<usize>,
    /// Inverse of `slot_to_bucket`.
    bucket_to_slot: Vec<usize>,
}

impl SlotMap {
    pub fn new(n: usize) -> Self {
        let log_n = n.trailing_zeros();
        let m = 2 * n as u64;
        let bucket_of_exp = |e: u64| -> usize {
            let idx = ((e - 1) / 2) as usize;
            idx.reverse_bits() >> (usize::BITS - log_n)
        };
        let mut bucket_exp = vec![0u64; n];
        for (u, be) in bucket_exp.iter_mut().enumerate() {
            let idx = u.reverse_bits() >> (usize::BITS - log_n);
            *be = 2 * idx as u64 + 1;
        }
        let half = n / 2;
        let mut slot_to_bucket = vec![0usize; n];
        let mut g = 1u64;
        for c in 0..half {
            slot_to_bucket[c] = bucket_of_exp(g);
            // Row 1 pairs with the -1 coset: exponent (2n - 1) * g.
            slot_to_bucket[half + c] = bucket_of_exp((m - 1) * g % m);
            g = g * 3 % m;
        }
        let mut bucket_to_slot = vec![0usize; n];
        for (j, &u) in slot_to_bucket.iter().enumerate() {
            bucket_to_slot[u] = j;
        }
        SlotMap {
            n,
            bucket_exp,
            slot_to_bucket,
            bucket_to_slot,
        }
    }

    /// Bucket permutation realizing the automorphism `x -> x^g` on
    /// evaluation-form polynomials: `new[u] = old[perm[u]]`.
    pub fn automorphism_perm(&self, g: u64) -> Vec<u32> {
        let m = 2 * self.n as u64;
        let log_n = self.n.trailing_zeros();
        let bucket_of_exp = |e: u64| -> usize {
            let idx = ((e - 1) / 2) as usize;
            idx.reverse_bits() >> (usize::BITS - log_n)
        };
        (0..self.n)
            .map(|u| {
                let e = self.bucket_exp[u];
                bucket_of_exp(e * g % m) as u32
            })
            .collect()
    }

    #[inline]
    pub fn slot_to_bucket(&self) -> &[usize] {
        &self.slot_to_bucket
    }
    #[inline]
    pub fn bucket_to_slot(&self) -> &[usize] {
        &self.bucket_to_slot
    }
}

/// Representation of a plaintext polynomial.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlainRepr {
    /// Coefficients of the polynomial in `R_t`.
    Coefficient,
    /// Slot values (evaluations over `Z_t`).
    Slots,
}

/// A packed plaintext in `R_t`.
#[derive(Debug)]
pub struct Plaintext {
    pub(crate) params: Arc<HeParams>,
    pub(crate) poly: Vec<u64>,
    pub(crate) repr: PlainRepr,
    /// Centered lift to `Z_q` in evaluation form, built on first use by
    /// `he_mult_plain` so repeated multiplications skip the NTT.
    pub(crate) mult_operand: OnceLock<Vec<u64>>,
}

impl Clone for Plaintext {
    fn clone(&self) -> Self {
        Plaintext {
            params: self.params.clone(),
            poly: self.poly.clone(),
            repr: self.repr,
            mult_operand: OnceLock::new(),
        }
    }
}

impl Plaintext {
    pub fn params(&self) -> &Arc<HeParams> {
        &self.params
    }

    pub fn repr(&self) -> PlainRepr {
        self.repr
    }

    /// Coefficient view; converts if currently in slot form.
    pub fn coefficients(&self) -> Vec<u64> {
        match self.repr {
            PlainRepr::Coefficient => self.poly.clone(),
            PlainRepr::Slots => slots_to_coeffs(&self.poly, &self.params),
        }
    }

    pub(crate) fn from_coefficients(params: Arc<HeParams>, poly: Vec<u64>) -> Self {
        Plaintext {
            params,
            poly,
            repr: PlainRepr::Coefficient,
            mult_operand: OnceLock::new(),
        }
    }

    /// The all-zero plaintext.
    pub fn zero(params: &Arc<HeParams>) -> Self {
        Plaintext::from_coefficients(params.clone(), vec![0u64; params.n()])
    }

    pub fn is_zero(&self) -> bool {
        self.poly.iter().all(|&x| x == 0)
    }

    /// Evaluation-form centered lift into `Z_q`, cached.
    pub(crate) fn operand(&self) -> &[u64] {
        self.mult_operand.get_or_init(|| {
            let coeffs = self.coefficients();
            let t = self.params.t().value();
            let q = self.params.q().value();
            let mut lifted: Vec<u64> = coeffs
                .iter()
                .map(|&c| if c > t / 2 { q - (t - c) } else { c })
                .collect();
            ntt_forward(&mut lifted, self.params.ntt_q()).expect("length fixed by params");
            lifted
        })
    }
}

fn slots_to_coeffs(slots: &[u64], params: &HeParams) -> Vec<u64> {
    let map = params.slot_map();
    let mut evals = vec![0u64; params.n()];
    for (j, &v) in slots.iter().enumerate() {
        evals[map.slot_to_bucket()[j]] = v;
    }
    ntt_inverse(&mut evals, params.ntt_t()).expect("length fixed by params");
    evals
}

/// Packs up to `n` slot values (each `< t`) into a plaintext polynomial.
pub fn encode(values: &[u64], params: &Arc<HeParams>) -> Result<Plaintext, BfvError> {
    if values.len() > params.n() {
        return Err(BfvError::TooManyValues {
            n: params.n(),
            got: values.len(),
        });
    }
    let t = params.t().value();
    for &v in values {
        if v >= t {
            return Err(BfvError::ValueOutOfRange {
                value: v,
                modulus: t,
            });
        }
    }
    let mut slots = vec![0u64; params.n()];
    slots[..values.len()].copy_from_slice(values);
    let poly = slots_to_coeffs(&slots, params);
    Ok(Plaintext::from_coefficients(params.clone(), poly))
}

/// Recovers the `n` slot values of a plaintext.
pub fn decode(pt: &Plaintext) -> Vec<u64> {
    let params = &pt.params;
    match pt.repr {
        PlainRepr::Slots => pt.poly.clone(),
        PlainRepr::Coefficient => {
            let mut evals = pt.poly.clone();
            ntt_forward(&mut evals, params.ntt_t()).expect("length fixed by params");
            let map = params.slot_map();
            (0..params.n()).map(|j| evals[map.slot_to_bucket()[j]]).collect()
        }
    }
}

/// Slot values as centered representatives in `(-t/2, t/2]`.
pub fn decode_signed(pt: &Plaintext) -> Vec<i64> {
    let t = pt.params.t().value();
    decode(pt)
        .into_iter()
        .map(|v| {
            if v > t / 2 {
                v as i64 - t as i64
            } else {
                v as i64
            }
        })
        .collect()
}
