//! Prime generation and root finding for NTT-friendly moduli.

use super::{ModArithError, Modulus};

/// `a^e mod m` by square-and-multiply; `m` need not be a [`Modulus`].
pub fn mod_pow(mut a: u64, mut e: u64, m: u64) -> u64 {
    debug_assert!(m >= 2);
    a %= m;
    let mut acc: u64 = 1 % m;
    while e > 0 {
        if e & 1 == 1 {
            acc = (acc as u128 * a as u128 % m as u128) as u64;
        }
        a = (a as u128 * a as u128 % m as u128) as u64;
        e >>= 1;
    }
    acc
}

/// Inverse of `a` modulo a prime `m` via Fermat's little theorem.
pub fn mod_inv(a: u64, m: u64) -> u64 {
    debug_assert!(a % m != 0, "zero has no inverse");
    mod_pow(a, m - 2, m)
}

/// Deterministic Miller-Rabin for u64 (the fixed witness set is exact for
/// all 64-bit integers).
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut r = 0u32;
    while d & 1 == 0 {
        d >>= 1;
        r += 1;
    }
    'witness: for &a in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = mod_pow(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..r {
            x = (x as u128 * x as u128 % n as u128) as u64;
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Finds the largest prime `p` with bit length `bits` and `p = 1 mod 2n`.
///
/// The search walks downward from `2^bits - 1` in steps of `2n`, so the
/// result is deterministic for a given `(bits, n)`.
pub fn generate_ntt_prime(bits: u32, n: usize) -> Result<Modulus, ModArithError> {
    assert!(n.is_power_of_two(), "n must be a power of two");
    assert!((2..=60).contains(&bits), "bits must be in 2..=60");
    let step = 2 * n as u64;
    let hi = (1u64 << bits) - 1;
    let lo = 1u64 << (bits - 1);
    // Largest candidate <= hi with candidate = 1 mod 2n.
    let mut cand = hi - ((hi - 1) % step);
    while cand >= lo && cand > 1 {
        if is_prime_u64(cand) {
            return Ok(Modulus::new(cand));
        }
        if cand < step + 1 {
            break;
        }
        cand -= step;
    }
    Err(ModArithError::NoPrimeFound {
        bits,
        congruence: step,
    })
}

/// Finds an element of multiplicative order exactly `2n` modulo `m`.
///
/// Requires `m = 1 mod 2n`. Candidates `g = 2, 3, ...` are raised to
/// `(m-1)/2n`; the first lift whose n-th power is `-1` is taken, so the
/// result is deterministic.
pub fn find_primitive_2n_root(n: usize, m: &Modulus) -> Result<u64, ModArithError> {
    assert!(n.is_power_of_two());
    let order = 2 * n as u64;
    if (m.value() - 1) % order != 0 {
        return Err(ModArithError::NoRoot {
            modulus: m.value(),
            order,
        });
    }
    let exp = (m.value() - 1) / order;
    for g in 2..m.value() {
        let psi = m.pow(g, exp);
        // Order divides 2n = 2^k; it is exactly 2n iff psi^n = -1.
        if m.pow(psi, n as u64) == m.value() - 1 {
            return Ok(psi);
        }
    }
    Err(ModArithError::NoRoot {
        modulus: m.value(),
        order,
    })
}
