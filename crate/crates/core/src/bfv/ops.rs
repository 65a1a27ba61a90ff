//! The three homomorphic operators and polynomial digit decomposition.

use crate::modarith::{ntt_forward, ntt_inverse};

use super::cipher::{Ciphertext, CtRepr};
use super::encoder::{decode, encode, Plaintext};
use super::keys::GaloisKeySet;
use super::BfvError;

fn check_pair(a: &Ciphertext, b: &Ciphertext) -> Result<(), BfvError> {
    if a.params != b.params {
        return Err(BfvError::ParamMismatch);
    }
    if a.repr != b.repr {
        return Err(BfvError::ReprMismatch);
    }
    Ok(())
}

/// Slot-wise homomorphic addition.
pub fn he_add(ct0: &Ciphertext, ct1: &Ciphertext) -> Result<Ciphertext, BfvError> {
    check_pair(ct0, ct1)?;
    let q = ct0.params.q();
    let c0 = ct0.c0.iter().zip(&ct1.c0).map(|(&a, &b)| q.add(a, b)).collect();
    let c1 = ct0.c1.iter().zip(&ct1.c1).map(|(&a, &b)| q.add(a, b)).collect();
    Ok(Ciphertext {
        params: ct0.params.clone(),
        c0,
        c1,
        repr: ct0.repr,
    })
}

/// Slot-wise plaintext-ciphertext multiplication: two element-wise modular
/// polynomial products (`c0 * pt`, `c1 * pt`), `2n` modular multiplications.
pub fn he_mult_plain(ct: &Ciphertext, pt: &Plaintext) -> Result<Ciphertext, BfvError> {
    if ct.params != *pt.params() {
        return Err(BfvError::ParamMismatch);
    }
    if ct.repr != CtRepr::Evaluation {
        return Err(BfvError::ReprMismatch);
    }
    let q = ct.params.q();
    let w = pt.operand();
    let c0 = ct.c0.iter().zip(w).map(|(&a, &b)| q.mul(a, b)).collect();
    let c1 = ct.c1.iter().zip(w).map(|(&a, &b)| q.mul(a, b)).collect();
    Ok(Ciphertext {
        params: ct.params.clone(),
        c0,
        c1,
        repr: CtRepr::Evaluation,
    })
}

/// Digit-decomposed plaintext multiplication.
///
/// `ct_digits[i]` must encrypt the activation pre-scaled by `W_dcmp^i`
/// (client-side scaling convention); `pt_digits[i]` holds the matching
/// base-`W_dcmp` weight digits. The sum of the per-digit products decrypts
/// to the full-precision slot-wise product.
pub fn he_mult_plain_decomposed(
    ct_digits: &[Ciphertext],
    pt_digits: &[Plaintext],
) -> Result<Ciphertext, BfvError> {
    if ct_digits.is_empty() || ct_digits.len() != pt_digits.len() {
        return Err(BfvError::DigitCountMismatch {
            expected: ct_digits.len().max(1),
            got: pt_digits.len(),
        });
    }
    let mut acc = he_mult_plain(&ct_digits[0], &pt_digits[0])?;
    for (ct, pt) in ct_digits.iter().zip(pt_digits).skip(1) {
        acc = he_add(&acc, &he_mult_plain(ct, pt)?)?;
    }
    Ok(acc)
}

/// Slot rotation by `step` (see the module docs for the step encoding).
///
/// Pipeline: apply the Galois automorphism (a bucket permutation in the
/// evaluation domain), convert the key-switch input to coefficients,
/// decompose into `l_ct` base-`A_dcmp` digits, transform each digit back,
/// and inner-product with the key-switch key. Step 0 is the identity and
/// performs no key switch.
pub fn he_rotate(
    ct: &Ciphertext,
    step: usize,
    keys: &GaloisKeySet,
) -> Result<Ciphertext, BfvError> {
    if ct.params != *keys.params() {
        return Err(BfvError::ParamMismatch);
    }
    let n = ct.params.n();
    let step = step % n;
    if step == 0 {
        return Ok(ct.to_evaluation());
    }
    let key = keys
        .get(step)
        .ok_or(BfvError::MissingGaloisKey { step })?;

    let ct = ct.to_evaluation();
    let q = ct.params.q();

    let rotated0: Vec<u64> = key.perm.iter().map(|&u| ct.c0[u as usize]).collect();
    let rotated1: Vec<u64> = key.perm.iter().map(|&u| ct.c1[u as usize]).collect();

    let mut c1_coeff = rotated1;
    ntt_inverse(&mut c1_coeff, ct.params.ntt_q()).expect("sized by params");
    let digits = decompose_poly(&c1_coeff, ct.params.a_dcmp(), ct.params.q().value());

    let mut acc0 = rotated0;
    let mut acc1 = vec![0u64; n];
    for (mut digit, (k0, k1)) in digits.into_iter().zip(&key.ksk) {
        ntt_forward(&mut digit, ct.params.ntt_q()).expect("sized by params");
        for j in 0..n {
            acc0[j] = q.add(acc0[j], q.mul(digit[j], k0[j]));
            acc1[j] = q.add(acc1[j], q.mul(digit[j], k1[j]));
        }
    }
    Ok(Ciphertext {
        params: ct.params.clone(),
        c0: acc0,
        c1: acc1,
        repr: CtRepr::Evaluation,
    })
}

/// Splits a polynomial over `Z_modulus` into base-`base` digit polynomials
/// (little-endian); every digit coefficient is below `base`.
pub fn decompose_poly(poly: &[u64], base: u64, modulus: u64) -> Vec<Vec<u64>> {
    assert!(base.is_power_of_two());
    let log_b = base.trailing_zeros();
    let mask = base - 1;
    let mut l = 0usize;
    let mut acc: u128 = 1;
    while acc < modulus as u128 {
        acc <<= log_b;
        l += 1;
    }
    let l = l.max(1);
    let mut digits = vec![vec![0u64; poly.len()]; l];
    for (j, &c) in poly.iter().enumerate() {
        let mut rest = c;
        for digit in digits.iter_mut() {
            digit[j] = rest & mask;
            rest >>= log_b;
        }
    }
    digits
}

/// Inverse of [`decompose_poly`].
pub fn compose_digits(digits: &[Vec<u64>], base: u64, modulus: u64) -> Vec<u64> {
    assert!(base.is_power_of_two());
    let n = digits[0].len();
    let mut out = vec![0u64; n];
    for j in 0..n {
        let mut acc: u128 = 0;
        let mut factor: u128 = 1;
        for digit in digits {
            acc += digit[j] as u128 * factor;
            factor <<= base.trailing_zeros();
        }
        out[j] = (acc % modulus as u128) as u64;
    }
    out
}

/// Slot-wise base-`base` digit split of a plaintext: digit `i` encodes the
/// i-th digits of the slot values, so `sum_i W^i * digit_i = pt` slot-wise.
pub fn decompose_plaintext(pt: &Plaintext, base: u64) -> Vec<Plaintext> {
    assert!(base.is_power_of_two());
    let params = pt.params().clone();
    let t = params.t().value();
    let slots = decode(pt);
    let raw = decompose_poly(&slots, base, t);
    raw.into_iter()
        .map(|digit| encode(&digit, &params).expect("digits are below t"))
        .collect()
}
