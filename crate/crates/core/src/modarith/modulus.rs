//! Prime moduli with precomputed Barrett constants.
//!
//! All moduli are capped at 60 bits so that a product of two reduced values
//! fits in a double-width (128-bit) intermediate with headroom for the
//! Barrett correction steps.

/// Largest supported modulus bit width.
pub const MAX_MODULUS_BITS: u32 = 60;

/// A prime modulus below 2^60 together with its Barrett factor
/// `floor(2^128 / value)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Modulus {
    value: u64,
    barrett: u128,
}

impl Modulus {
    /// Wraps a prime `value < 2^60`.
    ///
    /// Primality is the caller's responsibility (checked in debug builds);
    /// use [`super::generate_ntt_prime`] to produce suitable primes.
    pub fn new(value: u64) -> Self {
        assert!(value >= 2, "modulus must be at least 2");
        assert!(
            value.leading_zeros() >= 64 - MAX_MODULUS_BITS,
            "modulus must fit in {MAX_MODULUS_BITS} bits"
        );
        debug_assert!(super::is_prime_u64(value), "modulus {value} is not prime");
        let barrett = u128::MAX / value as u128;
        Modulus { value, barrett }
    }

    #[inline]
    pub fn value(&self) -> u64 {
        self.value
    }

    /// Bit length of the modulus.
    #[inline]
    pub fn bits(&self) -> u32 {
        64 - self.value.leading_zeros()
    }

    #[inline]
    pub fn reduce(&self, x: u128) -> u64 {
        barrett_reduce(x, self)
    }

    /// `a * b mod m` for `a, b < m`.
    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        debug_assert!(a < self.value && b < self.value);
        barrett_reduce(a as u128 * b as u128, self)
    }

    /// `a + b mod m` for `a, b < m`.
    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        debug_assert!(a < self.value && b < self.value);
        let s = a + b;
        if s >= self.value {
            s - self.value
        } else {
            s
        }
    }

    /// `a - b mod m` for `a, b < m`.
    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        debug_assert!(a < self.value && b < self.value);
        if a >= b {
            a - b
        } else {
            a + self.value - b
        }
    }

    /// `-a mod m` for `a < m`.
    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        debug_assert!(a < self.value);
        if a == 0 {
            0
        } else {
            self.value - a
        }
    }

    /// `a^e mod m`.
    pub fn pow(&self, a: u64, e: u64) -> u64 {
        super::mod_pow(a, e, self.value)
    }

    /// Multiplicative inverse (the modulus is prime).
    pub fn inv(&self, a: u64) -> u64 {
        super::mod_inv(a, self.value)
    }

    /// Shoup precomputation `floor(w * 2^64 / m)` for repeated
    /// multiplications by a fixed `w < m`.
    #[inline]
    pub fn shoup(&self, w: u64) -> u64 {
        debug_assert!(w < self.value);
        (((w as u128) << 64) / self.value as u128) as u64
    }

    /// Shoup multiplication: `x * w mod m` given `ws = shoup(w)`.
    /// Result is fully reduced; `x` may be any u64.
    #[inline]
    pub fn mul_shoup(&self, x: u64, w: u64, ws: u64) -> u64 {
        let r = mul_shoup_lazy(x, w, ws, self.value);
        if r >= self.value {
            r - self.value
        } else {
            r
        }
    }
}

/// Lazy Shoup product in `[0, 2m)`. Valid for any `x` when `w < m < 2^63`.
#[inline(always)]
pub(crate) fn mul_shoup_lazy(x: u64, w: u64, ws: u64, m: u64) -> u64 {
    let hi = ((x as u128 * ws as u128) >> 64) as u64;
    w.wrapping_mul(x).wrapping_sub(hi.wrapping_mul(m))
}

/// Barrett reduction of a double-width integer: `x mod m` for `x < m^2`.
#[inline]
pub fn barrett_reduce(x: u128, m: &Modulus) -> u64 {
    debug_assert!(x < m.value as u128 * m.value as u128);
    let q = mul_hi_u128(x, m.barrett);
    let mut r = (x - q * m.value as u128) as u64;
    while r >= m.value {
        r -= m.value;
    }
    r
}

/// High 128 bits of a 128x128-bit product.
#[inline(always)]
fn mul_hi_u128(a: u128, b: u128) -> u128 {
    const LO: u128 = u64::MAX as u128;
    let (a_lo, a_hi) = (a & LO, a >> 64);
    let (b_lo, b_hi) = (b & LO, b >> 64);
    let ll = a_lo * b_lo;
    let lh = a_lo * b_hi;
    let hl = a_hi * b_lo;
    let hh = a_hi * b_hi;
    let mid = (ll >> 64) + (lh & LO) + (hl & LO);
    hh + (lh >> 64) + (hl >> 64) + (mid >> 64)
}
