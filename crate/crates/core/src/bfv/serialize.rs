//! Self-describing binary container for parameters, keys, and ciphertexts.
//!
//! Layout (all integers little-endian):
//!
//! ```text
//! magic   4 bytes  b"HESB"
//! version u16      currently 1
//! kind    u8       0 params, 1 secret key, 2 galois keys, 3 ciphertext, 4 plaintext
//! body             kind-specific; vectors are length-prefixed (u64 count,
//!                  then count u64 words)
//! ```
//!
//! Every object embeds its parameter header so readers can validate
//! compatibility. The layout is stable within a minor version.

use std::io::{Read, Write};
use std::sync::Arc;

use super::cipher::{Ciphertext, CtRepr, SecretKey};
use super::encoder::Plaintext;
use super::keys::{GaloisKey, GaloisKeySet};
use super::params::HeParams;
use super::BfvError;
use crate::modarith::Modulus;

const MAGIC: &[u8; 4] = b"HESB";
const VERSION: u16 = 1;

const KIND_PARAMS: u8 = 0;
const KIND_SECRET_KEY: u8 = 1;
const KIND_GALOIS_KEYS: u8 = 2;
const KIND_CIPHERTEXT: u8 = 3;
const KIND_PLAINTEXT: u8 = 4;

fn put_u64(w: &mut impl Write, v: u64) -> Result<(), BfvError> {
    w.write_all(&v.to_le_bytes())?;
    Ok(())
}

fn get_u64(r: &mut impl Read) -> Result<u64, BfvError> {
    let mut buf = [0u8; 8];
    r.read_exact(&mut buf)?;
    Ok(u64::from_le_bytes(buf))
}

fn put_vec(w: &mut impl Write, v: &[u64]) -> Result<(), BfvError> {
    put_u64(w, v.len() as u64)?;
    for &x in v {
        put_u64(w, x)?;
    }
    Ok(())
}

fn get_vec(r: &mut impl Read) -> Result<Vec<u64>, BfvError> {
    let len = get_u64(r)? as usize;
    if len > (1 << 24) {
        return Err(BfvError::Serialize(format!("vector length {len} too large")));
    }
    let mut v = Vec::with_capacity(len);
    for _ in 0..len {
        v.push(get_u64(r)?);
    }
    Ok(v)
}

fn write_header(w: &mut impl Write, kind: u8) -> Result<(), BfvError> {
    w.write_all(MAGIC)?;
    w.write_all(&VERSION.to_le_bytes())?;
    w.write_all(&[kind])?;
    Ok(())
}

fn read_header(r: &mut impl Read, expect_kind: u8) -> Result<(), BfvError> {
    let mut magic = [0u8; 4];
    r.read_exact(&mut magic)?;
    if &magic != MAGIC {
        return Err(BfvError::Serialize("bad magic".into()));
    }
    let mut ver = [0u8; 2];
    r.read_exact(&mut ver)?;
    if u16::from_le_bytes(ver) != VERSION {
        return Err(BfvError::Serialize(format!(
            "unsupported version {}",
            u16::from_le_bytes(ver)
        )));
    }
    let mut kind = [0u8; 1];
    r.read_exact(&mut kind)?;
    if kind[0] != expect_kind {
        return Err(BfvError::Serialize(format!(
            "expected kind {expect_kind}, found {}",
            kind[0]
        )));
    }
    Ok(())
}

fn write_params_body(w: &mut impl Write, p: &HeParams) -> Result<(), BfvError> {
    put_u64(w, p.n() as u64)?;
    put_u64(w, p.t().value())?;
    put_u64(w, p.q().value())?;
    put_u64(w, p.w_dcmp())?;
    put_u64(w, p.a_dcmp())?;
    put_u64(w, p.sigma().to_bits())?;
    Ok(())
}

fn read_params_body(r: &mut impl Read) -> Result<Arc<HeParams>, BfvError> {
    let n = get_u64(r)? as usize;
    let t = get_u64(r)?;
    let q = get_u64(r)?;
    let w_dcmp = get_u64(r)?;
    let a_dcmp = get_u64(r)?;
    let sigma = f64::from_bits(get_u64(r)?);
    if !n.is_power_of_two() || n < 8 || n > (1 << 20) {
        return Err(BfvError::Serialize(format!("bad polynomial degree {n}")));
    }
    HeParams::new(n, Modulus::new(t), Modulus::new(q), w_dcmp, a_dcmp, sigma)
}

pub fn write_params(w: &mut impl Write, p: &HeParams) -> Result<(), BfvError> {
    write_header(w, KIND_PARAMS)?;
    write_params_body(w, p)
}

pub fn read_params(r: &mut impl Read) -> Result<Arc<HeParams>, BfvError> {
    read_header(r, KIND_PARAMS)?;
    read_params_body(r)
}

pub fn write_secret_key(w: &mut impl Write, sk: &SecretKey) -> Result<(), BfvError> {
    write_header(w, KIND_SECRET_KEY)?;
    write_params_body(w, sk.params())?;
    let lifted: Vec<u64> = sk.ternary.iter().map(|&c| (c as i64 + 1) as u64).collect();
    put_vec(w, &lifted)
}

pub fn read_secret_key(r: &mut impl Read) -> Result<SecretKey, BfvError> {
    read_header(r, KIND_SECRET_KEY)?;
    let params = read_params_body(r)?;
    let lifted = get_vec(r)?;
    if lifted.len() != params.n() {
        return Err(BfvError::Serialize("secret key length mismatch".into()));
    }
    let ternary: Result<Vec<i8>, BfvError> = lifted
        .iter()
        .map(|&x| match x {
            0 => Ok(-1i8),
            1 => Ok(0),
            2 => Ok(1),
            _ => Err(BfvError::Serialize("non-ternary secret entry".into())),
        })
        .collect();
    Ok(SecretKey::from_ternary(params, ternary?))
}

pub fn write_ciphertext(w: &mut impl Write, ct: &Ciphertext) -> Result<(), BfvError> {
    write_header(w, KIND_CIPHERTEXT)?;
    write_params_body(w, ct.params())?;
    put_u64(
        w,
        match ct.repr {
            CtRepr::Coefficient => 0,
            CtRepr::Evaluation => 1,
        },
    )?;
    put_vec(w, &ct.c0)?;
    put_vec(w, &ct.c1)
}

pub fn read_ciphertext(r: &mut impl Read) -> Result<Ciphertext, BfvError> {
    read_header(r, KIND_CIPHERTEXT)?;
    let params = read_params_body(r)?;
    let repr = match get_u64(r)? {
        0 => CtRepr::Coefficient,
        1 => CtRepr::Evaluation,
        other => return Err(BfvError::Serialize(format!("bad representation tag {other}"))),
    };
    let c0 = get_vec(r)?;
    let c1 = get_vec(r)?;
    if c0.len() != params.n() || c1.len() != params.n() {
        return Err(BfvError::Serialize("ciphertext length mismatch".into()));
    }
    let q = params.q().value();
    if c0.iter().chain(&c1).any(|&x| x >= q) {
        return Err(BfvError::Serialize("ciphertext entry out of range".into()));
    }
    Ok(Ciphertext {
        params,
        c0,
        c1,
        repr,
    })
}

pub fn write_plaintext(w: &mut impl Write, pt: &Plaintext) -> Result<(), BfvError> {
    write_header(w, KIND_PLAINTEXT)?;
    write_params_body(w, pt.params())?;
    put_vec(w, &pt.coefficients())
}

pub fn read_plaintext(r: &mut impl Read) -> Result<Plaintext, BfvError> {
    read_header(r, KIND_PLAINTEXT)?;
    let params = read_params_body(r)?;
    let poly = get_vec(r)?;
    if poly.len() != params.n() {
        return Err(BfvError::Serialize("plaintext length mismatch".into()));
    }
    let t = params.t().value();
    if poly.iter().any(|&x| x >= t) {
        return Err(BfvError::Serialize("plaintext entry out of range".into()));
    }
    Ok(Plaintext::from_coefficients(params, poly))
}

pub fn write_galois_keys(w: &mut impl Write, keys: &GaloisKeySet) -> Result<(), BfvError> {
    write_header(w, KIND_GALOIS_KEYS)?;
    write_params_body(w, keys.params())?;
    put_u64(w, keys.keys.len() as u64)?;
    for key in keys.keys.values() {
        put_u64(w, key.step as u64)?;
        put_u64(w, key.ksk.len() as u64)?;
        for (k0, k1) in &key.ksk {
            put_vec(w, k0)?;
            put_vec(w, k1)?;
        }
    }
    Ok(())
}

pub fn read_galois_keys(r: &mut impl Read) -> Result<GaloisKeySet, BfvError> {
    read_header(r, KIND_GALOIS_KEYS)?;
    let params = read_params_body(r)?;
    let count = get_u64(r)? as usize;
    let mut keys = std::collections::BTreeMap::new();
    for _ in 0..count {
        let step = get_u64(r)? as usize;
        if step == 0 || step >= params.n() {
            return Err(BfvError::Serialize(format!("bad rotation step {step}")));
        }
        let l = get_u64(r)? as usize;
        if l != params.l_ct() {
            return Err(BfvError::Serialize("digit count mismatch".into()));
        }
        let mut ksk = Vec::with_capacity(l);
        for _ in 0..l {
            let k0 = get_vec(r)?;
            let k1 = get_vec(r)?;
            if k0.len() != params.n() || k1.len() != params.n() {
                return Err(BfvError::Serialize("key polynomial length mismatch".into()));
            }
            ksk.push((k0, k1));
        }
        let galois = super::keys::galois_element_for_step(params.n(), step);
        let perm = params.slot_map().automorphism_perm(galois);
        keys.insert(
            step,
            GaloisKey {
                step,
                galois,
                perm,
                ksk,
            },
        );
    }
    Ok(GaloisKeySet { params, keys })
}
