//! Ciphertexts, symmetric-key encryption, decryption, and the noise meter.

use std::sync::Arc;

use rand::Rng;
use rand_distr::{Distribution, Normal};

use crate::modarith::{ntt_forward, ntt_inverse};

use super::encoder::Plaintext;
use super::params::HeParams;
use super::BfvError;

/// Representation of the ciphertext polynomials.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CtRepr {
    Coefficient,
    Evaluation,
}

/// A BFV ciphertext `(c0, c1)` with `c0 + c1*s = Delta*m + e`.
#[derive(Debug, Clone)]
pub struct Ciphertext {
    pub(crate) params: Arc<HeParams>,
    pub(crate) c0: Vec<u64>,
    pub(crate) c1: Vec<u64>,
    pub(crate) repr: CtRepr,
}

impl Ciphertext {
    pub fn params(&self) -> &Arc<HeParams> {
        &self.params
    }

    pub fn repr(&self) -> CtRepr {
        self.repr
    }

    /// Converts both polynomials to the coefficient domain.
    pub fn to_coefficient(&self) -> Ciphertext {
        match self.repr {
            CtRepr::Coefficient => self.clone(),
            CtRepr::Evaluation => {
                let mut out = self.clone();
                ntt_inverse(&mut out.c0, self.params.ntt_q()).expect("sized by params");
                ntt_inverse(&mut out.c1, self.params.ntt_q()).expect("sized by params");
                out.repr = CtRepr::Coefficient;
                out
            }
        }
    }

    /// Converts both polynomials to the evaluation domain.
    pub fn to_evaluation(&self) -> Ciphertext {
        match self.repr {
            CtRepr::Coefficient => {
                let mut out = self.clone();
                ntt_forward(&mut out.c0, self.params.ntt_q()).expect("sized by params");
                ntt_forward(&mut out.c1, self.params.ntt_q()).expect("sized by params");
                out.repr = CtRepr::Evaluation;
                out
            }
            CtRepr::Evaluation => self.clone(),
        }
    }
}

/// Ternary secret key, stored in evaluation form for fast inner products.
#[derive(Debug, Clone)]
pub struct SecretKey {
    pub(crate) params: Arc<HeParams>,
    /// Coefficient-form entries in {-1, 0, 1}.
    pub(crate) ternary: Vec<i8>,
    pub(crate) s_eval: Vec<u64>,
}

impl SecretKey {
    pub fn params(&self) -> &Arc<HeParams> {
        &self.params
    }

    /// Coefficient-form ternary entries.
    pub fn ternary(&self) -> &[i8] {
        &self.ternary
    }

    pub(crate) fn from_ternary(params: Arc<HeParams>, ternary: Vec<i8>) -> Self {
        let q = params.q().value();
        let mut s_eval: Vec<u64> = ternary
            .iter()
            .map(|&c| match c {
                1 => 1u64,
                0 => 0,
                -1 => q - 1,
                _ => unreachable!("ternary entries are -1, 0, or 1"),
            })
            .collect();
        ntt_forward(&mut s_eval, params.ntt_q()).expect("sized by params");
        SecretKey {
            params,
            ternary,
            s_eval,
        }
    }
}

/// Samples a clamped discrete Gaussian error polynomial in coefficient form,
/// centered-lifted into `Z_q`.
pub(crate) fn sample_error(params: &HeParams, rng: &mut impl Rng) -> Vec<u64> {
    let q = params.q().value();
    let bound = (6.0 * params.sigma()).floor() as i64;
    let normal = Normal::new(0.0, params.sigma()).expect("sigma > 0");
    (0..params.n())
        .map(|_| {
            let e = normal.sample(rng).round() as i64;
            let e = e.clamp(-bound, bound);
            if e < 0 {
                q - (-e) as u64
            } else {
                e as u64
            }
        })
        .collect()
}

pub(crate) fn sample_uniform_poly(params: &HeParams, rng: &mut impl Rng) -> Vec<u64> {
    let q = params.q().value();
    (0..params.n()).map(|_| rng.gen_range(0..q)).collect()
}

/// Symmetric-key encryption: `c1` uniform, `c0 = round(q*m/t) + e - c1*s`.
///
/// The message is scaled by the exact rational `q/t` (rounded per
/// coefficient) rather than `floor(q/t)`, so no `(q mod t) * m` term leaks
/// into the noise.
pub fn encrypt(pt: &Plaintext, sk: &SecretKey, rng: &mut impl Rng) -> Ciphertext {
    let params = &sk.params;
    let q = params.q();
    let t = params.t().value();

    let msg = pt.coefficients();
    let mut body = sample_error(params, rng);
    for (b, &m) in body.iter_mut().zip(&msg) {
        let dm = ((q.value() as u128 * m as u128 + t as u128 / 2) / t as u128
            % q.value() as u128) as u64;
        *b = q.add(*b, dm);
    }
    ntt_forward(&mut body, params.ntt_q()).expect("sized by params");

    let c1 = sample_uniform_poly(params, rng);
    let c0: Vec<u64> = body
        .iter()
        .zip(&c1)
        .zip(&sk.s_eval)
        .map(|((&b, &a), &s)| q.sub(b, q.mul(a, s)))
        .collect();

    Ciphertext {
        params: params.clone(),
        c0,
        c1,
        repr: CtRepr::Evaluation,
    }
}

/// Encrypts the all-zero plaintext.
pub fn encrypt_zero(sk: &SecretKey, rng: &mut impl Rng) -> Ciphertext {
    encrypt(&Plaintext::zero(&sk.params), sk, rng)
}

fn raw_phase(ct: &Ciphertext, sk: &SecretKey) -> Vec<u64> {
    // c0 + c1*s in coefficient form.
    let ct = ct.to_evaluation();
    let q = ct.params.q();
    let mut v: Vec<u64> = ct
        .c0
        .iter()
        .zip(&ct.c1)
        .zip(&sk.s_eval)
        .map(|((&c0, &c1), &s)| q.add(c0, q.mul(c1, s)))
        .collect();
    ntt_inverse(&mut v, ct.params.ntt_q()).expect("sized by params");
    v
}

/// Decryption: `m = round(t * (c0 + c1*s) / q) mod t`.
pub fn decrypt(ct: &Ciphertext, sk: &SecretKey) -> Plaintext {
    let params = &ct.params;
    let t = params.t().value();
    let q = params.q().value();
    let v = raw_phase(ct, sk);
    let coeffs: Vec<u64> = v
        .iter()
        .map(|&vi| {
            let num = t as u128 * vi as u128 + q as u128 / 2;
            ((num / q as u128) % t as u128) as u64
        })
        .collect();
    Plaintext::from_coefficients(params.clone(), coeffs)
}

/// Remaining noise budget of a ciphertext, measured with the secret key.
#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct NoiseReport {
    /// `log2(q/2) - log2(||t*(c0 + c1*s) mod q||_inf + 1)`; equivalently the
    /// headroom between `q/(2t)` and the invariant noise.
    pub budget_bits: f64,
    pub failed: bool,
}

/// Saturation threshold for the meter: the centered norm cannot exceed
/// `q/2`, so a wrapped (undecryptable) ciphertext reads as a budget of
/// roughly zero rather than a negative value. Budgets below this epsilon
/// are reported as failed.
pub const METER_FAILURE_THRESHOLD_BITS: f64 = 0.05;

/// Measures the invariant noise of `ct`.
///
/// The scaled phase `t*(c0 + c1*s) mod q`, centered, is the invariant noise
/// times `t`: its infinity norm must stay below `q/2` for decryption to
/// round correctly, which matches dividing `q/(2t)` by the invariant noise
/// and taking the log.
pub fn noise_report(ct: &Ciphertext, sk: &SecretKey) -> NoiseReport {
    let params = &ct.params;
    let q = params.q().value();
    let t = params.t().value();
    let v = raw_phase(ct, sk);
    let mut max_scaled: u128 = 0;
    for &vi in &v {
        let scaled = (t as u128 * vi as u128) % q as u128;
        let centered = scaled.min(q as u128 - scaled);
        max_scaled = max_scaled.max(centered);
    }
    let budget_bits = (q as f64 / 2.0).log2() - ((max_scaled + 1) as f64).log2();
    NoiseReport {
        budget_bits,
        failed: budget_bits < METER_FAILURE_THRESHOLD_BITS,
    }
}

/// Infinity norm of the invariant noise in integer units (scaled phase
/// divided by `t`); used by model-versus-measurement comparisons.
pub fn measured_noise_inf(ct: &Ciphertext, sk: &SecretKey) -> f64 {
    let params = &ct.params;
    let q = params.q().value();
    let t = params.t().value();
    let v = raw_phase(ct, sk);
    let mut max_scaled: u128 = 0;
    for &vi in &v {
        let scaled = (t as u128 * vi as u128) % q as u128;
        let centered = scaled.min(q as u128 - scaled);
        max_scaled = max_scaled.max(centered);
    }
    max_scaled as f64 / t as f64
}
