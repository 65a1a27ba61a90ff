//! Key generation: secret keys and Galois (rotation) key-switching keys.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

use crate::modarith::{mod_pow, ntt_forward};

use super::cipher::{sample_error, sample_uniform_poly, SecretKey};
use super::params::HeParams;

/// Galois element realizing rotation step `k` (see module docs): row shift
/// by `k mod n/2` via `3^(n/2 - shift)`, with a row swap factor `2n - 1`
/// for steps `>= n/2`.
pub fn galois_element_for_step(n: usize, step: usize) -> u64 {
    let half = (n / 2) as u64;
    let m = 2 * n as u64;
    let shift = (step as u64) % half;
    let flip = (step as u64) / half % 2 == 1;
    let mut g = mod_pow(3, (half - shift) % half, m);
    if flip {
        g = g * (m - 1) % m;
    }
    g
}

/// Key-switching key for one rotation step: `l_ct` pairs, one per
/// decomposition digit, stored in evaluation form.
#[derive(Debug, Clone)]
pub struct GaloisKey {
    pub(crate) step: usize,
    pub(crate) galois: u64,
    /// Evaluation-form bucket permutation of the automorphism.
    pub(crate) perm: Vec<u32>,
    /// `(k0_i, k1_i)` with `k0_i = A^i * sigma(s) + e_i - k1_i * s`.
    pub(crate) ksk: Vec<(Vec<u64>, Vec<u64>)>,
}

impl GaloisKey {
    pub fn step(&self) -> usize {
        self.step
    }
    pub fn galois_element(&self) -> u64 {
        self.galois
    }
}

/// The set of rotation keys generated for a schedule.
#[derive(Debug, Clone)]
pub struct GaloisKeySet {
    pub(crate) params: Arc<HeParams>,
    pub(crate) keys: BTreeMap<usize, GaloisKey>,
}

impl GaloisKeySet {
    pub fn params(&self) -> &Arc<HeParams> {
        &self.params
    }

    pub fn get(&self, step: usize) -> Option<&GaloisKey> {
        self.keys.get(&step)
    }

    pub fn steps(&self) -> impl Iterator<Item = usize> + '_ {
        self.keys.keys().copied()
    }

    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }
}

fn make_galois_key(
    params: &Arc<HeParams>,
    sk: &SecretKey,
    step: usize,
    rng: &mut impl Rng,
) -> GaloisKey {
    let n = params.n();
    let q = params.q();
    let galois = galois_element_for_step(n, step);
    let perm = params.slot_map().automorphism_perm(galois);

    // sigma(s) in evaluation form is just the bucket permutation of s.
    let s_rot: Vec<u64> = perm.iter().map(|&u| sk.s_eval[u as usize]).collect();

    let l_ct = params.l_ct();
    let a = params.a_dcmp();
    let mut ksk = Vec::with_capacity(l_ct);
    let mut factor: u64 = 1; // A^i mod q
    for _ in 0..l_ct {
        let k1 = sample_uniform_poly(params, rng);
        let mut e = sample_error(params, rng);
        ntt_forward(&mut e, params.ntt_q()).expect("sized by params");
        let k0: Vec<u64> = s_rot
            .iter()
            .zip(&e)
            .zip(&k1)
            .zip(&sk.s_eval)
            .map(|(((&sr, &ei), &k1i), &si)| {
                let term = q.add(q.mul(factor, sr), ei);
                q.sub(term, q.mul(k1i, si))
            })
            .collect();
        ksk.push((k0, k1));
        factor = q.mul(factor, a % q.value());
    }
    GaloisKey {
        step,
        galois,
        perm,
        ksk,
    }
}

/// Deterministically generates a secret key and Galois keys covering exactly
/// the requested rotation steps.
pub fn keygen(
    params: &Arc<HeParams>,
    rotation_steps: &BTreeSet<usize>,
    seed: u64,
) -> (SecretKey, GaloisKeySet) {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let ternary: Vec<i8> = (0..params.n()).map(|_| rng.gen_range(-1i8..=1)).collect();
    let sk = SecretKey::from_ternary(params.clone(), ternary);

    let mut keys = BTreeMap::new();
    for &step in rotation_steps {
        let step = step % params.n();
        if step == 0 {
            // Step 0 is the identity; no key material needed.
            continue;
        }
        keys.insert(step, make_galois_key(params, &sk, step, &mut rng));
    }
    (
        sk,
        GaloisKeySet {
            params: params.clone(),
            keys,
        },
    )
}
