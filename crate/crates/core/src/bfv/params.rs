//! The BFV parameter tuple and everything derived from it.

use std::sync::Arc;

use crate::modarith::{generate_ntt_prime, Modulus, NttTables};

use super::encoder::SlotMap;
use super::BfvError;

/// Default standard deviation of the encryption noise. The scheme fixes
/// sigma rather than exposing it to tuning; 3.2 is the common RLWE choice.
pub const DEFAULT_SIGMA: f64 = 3.2;

/// The BFV tuple `(n, t, q, W_dcmp, A_dcmp, sigma)` plus derived tables.
///
/// Invariants enforced at construction: `t` and `q` are primes congruent to
/// 1 mod 2n with `q > t`; the decomposition bases are powers of two with
/// `W_dcmp <= 2^t.bits()` and `A_dcmp <= 2^q.bits()` so the derived digit
/// counts `l_pt`, `l_ct` are at least 1.
#[derive(Debug, Clone)]
pub struct HeParams {
    n: usize,
    t: Modulus,
    q: Modulus,
    w_dcmp: u64,
    a_dcmp: u64,
    sigma: f64,
    l_pt: usize,
    l_ct: usize,
    delta: u64,
    ntt_q: Arc<NttTables>,
    ntt_t: Arc<NttTables>,
    slots: Arc<SlotMap>,
}

impl PartialEq for HeParams {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n
            && self.t.value() == other.t.value()
            && self.q.value() == other.q.value()
            && self.w_dcmp == other.w_dcmp
            && self.a_dcmp == other.a_dcmp
            && self.sigma == other.sigma
    }
}

fn digits_to_cover(base: u64, modulus: u64) -> usize {
    // Smallest l with base^l >= modulus.
    let mut l = 0usize;
    let mut acc: u128 = 1;
    while acc < modulus as u128 {
        acc *= base as u128;
        l += 1;
    }
    l.max(1)
}

impl HeParams {
    pub fn new(
        n: usize,
        t: Modulus,
        q: Modulus,
        w_dcmp: u64,
        a_dcmp: u64,
        sigma: f64,
    ) -> Result<Arc<Self>, BfvError> {
        assert!(n.is_power_of_two() && n >= 8, "n must be a power of two >= 8");
        assert!(q.value() > t.value(), "q must exceed t");
        assert!(w_dcmp.is_power_of_two() && a_dcmp.is_power_of_two());
        assert!(
            w_dcmp <= 1u64 << t.bits(),
            "plaintext decomposition base exceeds one-digit coverage of t"
        );
        assert!(a_dcmp <= 1u64 << q.bits());
        assert!(sigma > 0.0);
        let ntt_t = Arc::new(NttTables::new(n, t)?);
        let ntt_q = Arc::new(NttTables::new(n, q)?);
        let slots = Arc::new(SlotMap::new(n));
        Ok(Arc::new(HeParams {
            n,
            t,
            q,
            w_dcmp,
            a_dcmp,
            sigma,
            l_pt: digits_to_cover(w_dcmp, t.value()),
            l_ct: digits_to_cover(a_dcmp, q.value()),
            delta: q.value() / t.value(),
            ntt_q,
            ntt_t,
            slots,
        }))
    }

    /// Generates parameters from bit widths: `t` and `q` become the largest
    /// NTT-friendly primes of the requested lengths, and the decomposition
    /// bases are `2^w_bits`, `2^a_bits`.
    pub fn generate(
        n: usize,
        t_bits: u32,
        q_bits: u32,
        w_bits: u32,
        a_bits: u32,
        sigma: f64,
    ) -> Result<Arc<Self>, BfvError> {
        let t = generate_ntt_prime(t_bits, n)?;
        let q = generate_ntt_prime(q_bits, n)?;
        HeParams::new(n, t, q, 1u64 << w_bits, 1u64 << a_bits, sigma)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }
    #[inline]
    pub fn t(&self) -> &Modulus {
        &self.t
    }
    #[inline]
    pub fn q(&self) -> &Modulus {
        &self.q
    }
    #[inline]
    pub fn w_dcmp(&self) -> u64 {
        self.w_dcmp
    }
    #[inline]
    pub fn a_dcmp(&self) -> u64 {
        self.a_dcmp
    }
    #[inline]
    pub fn sigma(&self) -> f64 {
        self.sigma
    }
    /// Number of plaintext decomposition digits, `ceil(log_W t)`.
    #[inline]
    pub fn l_pt(&self) -> usize {
        self.l_pt
    }
    /// Number of ciphertext decomposition digits, `ceil(log_A q)`.
    #[inline]
    pub fn l_ct(&self) -> usize {
        self.l_ct
    }
    /// `floor(q / t)`, the plaintext scaling factor.
    #[inline]
    pub fn delta(&self) -> u64 {
        self.delta
    }
    /// Noise bound `B = 6 sigma` used by the worst-case models.
    #[inline]
    pub fn noise_bound(&self) -> f64 {
        6.0 * self.sigma
    }
    /// Columns per slot row; also the rotation period.
    #[inline]
    pub fn slot_cols(&self) -> usize {
        self.n / 2
    }
    #[inline]
    pub(crate) fn ntt_q(&self) -> &NttTables {
        &self.ntt_q
    }
    #[inline]
    pub(crate) fn ntt_t(&self) -> &NttTables {
        &self.ntt_t
    }
    #[inline]
    pub(crate) fn slot_map(&self) -> &SlotMap {
        &self.slots
    }

    /// `log2(q / 2t)`, the total budget of a noiseless ciphertext.
    pub fn max_budget_bits(&self) -> f64 {
        (self.q.value() as f64 / (2.0 * self.t.value() as f64)).log2()
    }
}
