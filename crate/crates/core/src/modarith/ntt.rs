//! Negacyclic NTT over `Z_q[x]/(x^n + 1)` with Harvey-style lazy butterflies.
//!
//! Powers of the primitive 2n-th root psi are folded into the butterfly
//! tables in bit-reversed order, so the transform needs no separate twisting
//! pass and no materialized permutation: the forward transform is
//! decimation-in-time, the inverse decimation-in-frequency. Butterfly values
//! are kept in `[0, 4q)` (forward) / `[0, 2q)` (inverse) and normalized in a
//! final pass. Each butterfly costs 3 integer multiplications.
//!
//! Output ordering: position `u` of the forward transform holds the
//! evaluation at `psi^(2*bitrev(u)+1)` (verified against direct evaluation
//! in the tests); the slot encoder builds on this.

use std::cell::Cell;

use super::modulus::mul_shoup_lazy;
use super::{find_primitive_2n_root, ModArithError, Modulus};

thread_local! {
    static BUTTERFLIES: Cell<u64> = const { Cell::new(0) };
}

/// Butterflies executed on this thread since the last reset (forward and
/// inverse combined).
pub fn ntt_butterfly_count() -> u64 {
    BUTTERFLIES.with(|c| c.get())
}

pub fn reset_ntt_butterfly_count() {
    BUTTERFLIES.with(|c| c.set(0));
}

/// Precomputed tables for one transform size and modulus.
#[derive(Debug, Clone)]
pub struct NttTables {
    n: usize,
    log_n: u32,
    modulus: Modulus,
    psi: u64,
    /// psi^bitrev(i), with Shoup companions.
    fwd: Vec<u64>,
    fwd_shoup: Vec<u64>,
    /// psi^-bitrev(i), with Shoup companions.
    inv: Vec<u64>,
    inv_shoup: Vec<u64>,
    n_inv: u64,
    n_inv_shoup: u64,
}

impl NttTables {
    /// Builds tables for length `n` (a power of two) over `modulus`,
    /// which must satisfy `modulus = 1 mod 2n`.
    pub fn new(n: usize, modulus: Modulus) -> Result<Self, ModArithError> {
        assert!(n.is_power_of_two() && n >= 2);
        let log_n = n.trailing_zeros();
        let psi = find_primitive_2n_root(n, &modulus)?;
        let psi_inv = modulus.inv(psi);

        let build = |base: u64| -> (Vec<u64>, Vec<u64>) {
            let mut pow = vec![0u64; n];
            let mut acc = 1u64;
            for p in pow.iter_mut() {
                *p = acc;
                acc = modulus.mul(acc, base);
            }
            let mut tbl = vec![0u64; n];
            let mut shoup = vec![0u64; n];
            for i in 0..n {
                let w = pow[bitrev(i, log_n)];
                tbl[i] = w;
                shoup[i] = modulus.shoup(w);
            }
            (tbl, shoup)
        };
        let (fwd, fwd_shoup) = build(psi);
        let (inv, inv_shoup) = build(psi_inv);
        let n_inv = modulus.inv(n as u64);
        let n_inv_shoup = modulus.shoup(n_inv);

        Ok(NttTables {
            n,
            log_n,
            modulus,
            psi,
            fwd,
            fwd_shoup,
            inv,
            inv_shoup,
            n_inv,
            n_inv_shoup,
        })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn modulus(&self) -> &Modulus {
        &self.modulus
    }

    /// The primitive 2n-th root the tables were built from.
    #[inline]
    pub fn psi(&self) -> u64 {
        self.psi
    }

    #[inline]
    pub fn n_inverse(&self) -> u64 {
        self.n_inv
    }

    fn check_len(&self, len: usize) -> Result<(), ModArithError> {
        if len != self.n {
            return Err(ModArithError::LengthMismatch {
                expected: self.n,
                got: len,
            });
        }
        Ok(())
    }
}

#[inline]
fn bitrev(x: usize, bits: u32) -> usize {
    x.reverse_bits() >> (usize::BITS - bits)
}

/// In-place forward negacyclic NTT (coefficients -> evaluations).
pub fn ntt_forward(values: &mut [u64], tables: &NttTables) -> Result<(), ModArithError> {
    tables.check_len(values.len())?;
    let q = tables.modulus.value();
    let two_q = 2 * q;
    let n = tables.n;
    let mut executed = 0u64;

    let mut t = n / 2;
    let mut m = 1;
    while m < n {
        for i in 0..m {
            let w = tables.fwd[m + i];
            let ws = tables.fwd_shoup[m + i];
            let j1 = 2 * i * t;
            for j in j1..j1 + t {
                let x = values[j];
                let x = if x >= two_q { x - two_q } else { x };
                let v = mul_shoup_lazy(values[j + t], w, ws, q);
                values[j] = x + v;
                values[j + t] = x + two_q - v;
                executed += 1;
            }
        }
        m <<= 1;
        t >>= 1;
    }
    for v in values.iter_mut() {
        if *v >= two_q {
            *v -= two_q;
        }
        if *v >= q {
            *v -= q;
        }
    }
    BUTTERFLIES.with(|c| c.set(c.get() + executed));
    Ok(())
}

/// In-place inverse negacyclic NTT (evaluations -> coefficients), including
/// the final scaling by `n^-1`.
pub fn ntt_inverse(values: &mut [u64], tables: &NttTables) -> Result<(), ModArithError> {
    tables.check_len(values.len())?;
    let q = tables.modulus.value();
    let two_q = 2 * q;
    let n = tables.n;
    let mut executed = 0u64;

    let mut t = 1;
    let mut m = n;
    while m > 1 {
        let h = m / 2;
        for i in 0..h {
            let w = tables.inv[h + i];
            let ws = tables.inv_shoup[h + i];
            let j1 = 2 * i * t;
            for j in j1..j1 + t {
                let x = values[j];
                let y = values[j + t];
                let s = x + y;
                values[j] = if s >= two_q { s - two_q } else { s };
                values[j + t] = mul_shoup_lazy(x + two_q - y, w, ws, q);
                executed += 1;
            }
        }
        t *= 2;
        m = h;
    }
    // The per-stage halving is deferred entirely to this n^-1 pass.
    for v in values.iter_mut() {
        let r = mul_shoup_lazy(*v, tables.n_inv, tables.n_inv_shoup, q);
        *v = if r >= q { r - q } else { r };
    }
    BUTTERFLIES.with(|c| c.set(c.get() + executed));
    Ok(())
}

/// O(n^2) schoolbook negacyclic product, the reference oracle for the
/// convolution theorem.
pub fn negacyclic_mul_schoolbook(a: &[u64], b: &[u64], m: &Modulus) -> Vec<u64> {
    let n = a.len();
    assert_eq!(n, b.len());
    let mut out = vec![0u64; n];
    for i in 0..n {
        if a[i] == 0 {
            continue;
        }
        for j in 0..n {
            let prod = m.mul(a[i], b[j]);
            let k = i + j;
            if k < n {
                out[k] = m.add(out[k], prod);
            } else {
                // x^n = -1
                out[k - n] = m.sub(out[k - n], prod);
            }
        }
    }
    out
}
