//! End-to-end behavior of the BFV engine: round trips, operator semantics,
//! rotation step encoding, and the noise meter.

use std::collections::BTreeSet;
use std::sync::Arc;

use hestack_core::bfv::{
    self, decode, decompose_plaintext, encode, encrypt, he_add, he_mult_plain,
    he_mult_plain_decomposed, he_rotate, keygen, noise_report, BfvError, HeParams,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

/// Round-trip-grade parameters (19-bit t).
fn params_2048() -> Arc<HeParams> {
    HeParams::generate(2048, 19, 58, 19, 22, 3.2).unwrap()
}

/// Multiplication-grade parameters: a 16-bit t leaves enough budget for a
/// plain multiply by full-range weights.
fn params_mult() -> Arc<HeParams> {
    HeParams::generate(2048, 16, 58, 16, 22, 3.2).unwrap()
}

fn params_small() -> Arc<HeParams> {
    HeParams::generate(64, 13, 45, 13, 15, 3.2).unwrap()
}

fn random_slots(params: &HeParams, rng: &mut impl Rng) -> Vec<u64> {
    (0..params.n())
        .map(|_| rng.gen_range(0..params.t().value()))
        .collect()
}

/// Expected slot permutation of a rotation: content of slot (r, c) moves to
/// (r ^ flip, (c + shift) mod n/2).
fn rotate_slots_expected(vals: &[u64], step: usize) -> Vec<u64> {
    let n = vals.len();
    let half = n / 2;
    let shift = step % half;
    let flip = (step / half) % 2 == 1;
    let mut out = vec![0u64; n];
    for (j, &v) in vals.iter().enumerate() {
        let (r, c) = (j / half, j % half);
        let dest_r = if flip { 1 - r } else { r };
        let dest_c = (c + shift) % half;
        out[dest_r * half + dest_c] = v;
    }
    out
}

#[test]
fn keygen_is_deterministic_and_exact() {
    let params = params_small();
    let steps: BTreeSet<usize> = [1usize, 5, 32].into_iter().collect();
    let (sk_a, keys_a) = keygen(&params, &steps, 99);
    let (sk_b, keys_b) = keygen(&params, &steps, 99);
    assert_eq!(sk_a.ternary(), sk_b.ternary());
    assert_eq!(keys_a.len(), 3);
    for step in keys_a.steps() {
        let ka = keys_a.get(step).unwrap();
        let kb = keys_b.get(step).unwrap();
        assert_eq!(ka.galois_element(), kb.galois_element());
    }

    let (_, empty) = keygen(&params, &BTreeSet::new(), 7);
    assert!(empty.is_empty());
}

#[test]
fn encrypt_decrypt_round_trip() {
    let params = params_2048();
    let (sk, _) = keygen(&params, &BTreeSet::new(), 1);
    let mut rng = ChaCha20Rng::seed_from_u64(2);
    for _ in 0..5 {
        let vals = random_slots(&params, &mut rng);
        let pt = encode(&vals, &params).unwrap();
        let ct = encrypt(&pt, &sk, &mut rng);
        assert_eq!(decode(&bfv::decrypt(&ct, &sk)), vals);
    }
}

#[test]
fn fresh_ciphertext_has_positive_budget_below_cap() {
    let params = params_2048();
    let (sk, _) = keygen(&params, &BTreeSet::new(), 3);
    let mut rng = ChaCha20Rng::seed_from_u64(4);
    let pt = encode(&vec![0u64; params.n()], &params).unwrap();
    let ct = encrypt(&pt, &sk, &mut rng);
    let report = noise_report(&ct, &sk);
    assert!(!report.failed);
    assert!(report.budget_bits > 0.0);
    assert!(report.budget_bits < params.max_budget_bits());
    // Fresh noise stays below the worst-case model bound 2nB^2.
    let b = params.noise_bound();
    let model = 2.0 * params.n() as f64 * b * b;
    let measured = params.max_budget_bits() - report.budget_bits;
    assert!(measured < model.log2());
}

#[test]
fn encryption_is_randomized_but_consistent() {
    let params = params_small();
    let (sk, _) = keygen(&params, &BTreeSet::new(), 5);
    let mut rng = ChaCha20Rng::seed_from_u64(6);
    let vals = random_slots(&params, &mut rng);
    let pt = encode(&vals, &params).unwrap();
    let ct_a = encrypt(&pt, &sk, &mut rng);
    let ct_b = encrypt(&pt, &sk, &mut rng);
    let mut bytes_a = Vec::new();
    let mut bytes_b = Vec::new();
    bfv::write_ciphertext(&mut bytes_a, &ct_a).unwrap();
    bfv::write_ciphertext(&mut bytes_b, &ct_b).unwrap();
    assert_ne!(bytes_a, bytes_b);
    assert_eq!(decode(&bfv::decrypt(&ct_a, &sk)), decode(&bfv::decrypt(&ct_b, &sk)));
}

#[test]
fn he_add_matches_plain_sum() {
    let params = params_small();
    let (sk, _) = keygen(&params, &BTreeSet::new(), 8);
    let mut rng = ChaCha20Rng::seed_from_u64(9);
    let t = params.t().value();
    for _ in 0..20 {
        let a = random_slots(&params, &mut rng);
        let b = random_slots(&params, &mut rng);
        let ct_a = encrypt(&encode(&a, &params).unwrap(), &sk, &mut rng);
        let ct_b = encrypt(&encode(&b, &params).unwrap(), &sk, &mut rng);
        let sum = he_add(&ct_a, &ct_b).unwrap();
        let expect: Vec<u64> = a.iter().zip(&b).map(|(&x, &y)| (x + y) % t).collect();
        assert_eq!(decode(&bfv::decrypt(&sum, &sk)), expect);
    }
}

#[test]
fn he_add_zero_is_identity_and_assoc() {
    let params = params_small();
    let (sk, _) = keygen(&params, &BTreeSet::new(), 10);
    let mut rng = ChaCha20Rng::seed_from_u64(11);
    let vals = random_slots(&params, &mut rng);
    let ct = encrypt(&encode(&vals, &params).unwrap(), &sk, &mut rng);
    let zero = encrypt(&encode(&[], &params).unwrap(), &sk, &mut rng);
    assert_eq!(decode(&bfv::decrypt(&he_add(&ct, &zero).unwrap(), &sk)), vals);

    let a = encrypt(&encode(&random_slots(&params, &mut rng), &params).unwrap(), &sk, &mut rng);
    let b = encrypt(&encode(&random_slots(&params, &mut rng), &params).unwrap(), &sk, &mut rng);
    let c = encrypt(&encode(&random_slots(&params, &mut rng), &params).unwrap(), &sk, &mut rng);
    let left = he_add(&he_add(&a, &b).unwrap(), &c).unwrap();
    let right = he_add(&a, &he_add(&b, &c).unwrap()).unwrap();
    assert_eq!(
        decode(&bfv::decrypt(&left, &sk)),
        decode(&bfv::decrypt(&right, &sk))
    );
}

#[test]
fn he_mult_plain_matches_slotwise_product() {
    let params = params_mult();
    let (sk, _) = keygen(&params, &BTreeSet::new(), 12);
    let mut rng = ChaCha20Rng::seed_from_u64(13);
    let t = params.t().value();

    let a = random_slots(&params, &mut rng);
    let ct = encrypt(&encode(&a, &params).unwrap(), &sk, &mut rng);

    // All-ones plaintext leaves the ciphertext unchanged.
    let ones = encode(&vec![1u64; params.n()], &params).unwrap();
    let same = he_mult_plain(&ct, &ones).unwrap();
    assert_eq!(decode(&bfv::decrypt(&same, &sk)), a);

    let w = random_slots(&params, &mut rng);
    let prod = he_mult_plain(&ct, &encode(&w, &params).unwrap()).unwrap();
    let expect: Vec<u64> = a
        .iter()
        .zip(&w)
        .map(|(&x, &y)| (x as u128 * y as u128 % t as u128) as u64)
        .collect();
    assert_eq!(decode(&bfv::decrypt(&prod, &sk)), expect);

    // Measured noise growth stays below the model factor n*l_pt*W/2.
    let before = bfv::measured_noise_inf(&ct, &sk).max(1.0);
    let after = bfv::measured_noise_inf(&prod, &sk);
    let eta_m = params.n() as f64 * params.l_pt() as f64 * params.w_dcmp() as f64 / 2.0;
    assert!(after <= eta_m * before, "after={after} eta_m*before={}", eta_m * before);
}

#[test]
fn decomposed_mult_full_precision_and_lower_noise() {
    // t 16-bit, W = 2^8 -> l_pt = 2.
    let params = HeParams::generate(2048, 16, 58, 8, 22, 3.2).unwrap();
    assert_eq!(params.l_pt(), 2);
    let (sk, _) = keygen(&params, &BTreeSet::new(), 14);
    let mut rng = ChaCha20Rng::seed_from_u64(15);
    let t = params.t().value();
    let w_base = params.w_dcmp();

    let a = random_slots(&params, &mut rng);
    // Weights near t exercise the high digit.
    let weights: Vec<u64> = (0..params.n()).map(|_| rng.gen_range(t / 2..t)).collect();

    // Client-side scaling convention: digit i multiplies an encryption of
    // W^i * a.
    let ct_digits: Vec<_> = (0..params.l_pt())
        .map(|i| {
            let factor = w_base.pow(i as u32) % t;
            let scaled: Vec<u64> =
                a.iter().map(|&x| (x as u128 * factor as u128 % t as u128) as u64).collect();
            encrypt(&encode(&scaled, &params).unwrap(), &sk, &mut rng)
        })
        .collect();
    let pt = encode(&weights, &params).unwrap();
    let pt_digits = decompose_plaintext(&pt, w_base);
    assert_eq!(pt_digits.len(), 2);

    let prod = he_mult_plain_decomposed(&ct_digits, &pt_digits).unwrap();
    let expect: Vec<u64> = a
        .iter()
        .zip(&weights)
        .map(|(&x, &y)| (x as u128 * y as u128 % t as u128) as u64)
        .collect();
    assert_eq!(decode(&bfv::decrypt(&prod, &sk)), expect);

    // Same product without decomposition consumes more budget.
    let plain_ct = encrypt(&encode(&a, &params).unwrap(), &sk, &mut rng);
    let undecomposed = he_mult_plain(&plain_ct, &pt).unwrap();
    let budget_dec = noise_report(&prod, &sk).budget_bits;
    let budget_plain = noise_report(&undecomposed, &sk).budget_bits;
    assert!(
        budget_dec > budget_plain,
        "decomposed budget {budget_dec} <= undecomposed {budget_plain}"
    );

    // Degenerate decomposition (single digit) equals plain multiplication.
    let params1 = params_mult();
    let (sk1, _) = keygen(&params1, &BTreeSet::new(), 16);
    let a1 = random_slots(&params1, &mut rng);
    let w1 = random_slots(&params1, &mut rng);
    let ct1 = encrypt(&encode(&a1, &params1).unwrap(), &sk1, &mut rng);
    let pt1 = encode(&w1, &params1).unwrap();
    let digits1 = decompose_plaintext(&pt1, params1.w_dcmp());
    assert_eq!(digits1.len(), 1);
    let via_decomposed = he_mult_plain_decomposed(std::slice::from_ref(&ct1), &digits1).unwrap();
    let via_plain = he_mult_plain(&ct1, &pt1).unwrap();
    assert_eq!(
        decode(&bfv::decrypt(&via_decomposed, &sk1)),
        decode(&bfv::decrypt(&via_plain, &sk1))
    );
}

#[test]
fn rotation_permutes_slots_as_documented() {
    let params = params_small();
    let n = params.n();
    let half = n / 2;
    let steps: BTreeSet<usize> = [1usize, 3, half - 1, half, half + 2, n - 1]
        .into_iter()
        .collect();
    let (sk, keys) = keygen(&params, &steps, 17);
    let mut rng = ChaCha20Rng::seed_from_u64(18);
    let vals = random_slots(&params, &mut rng);
    let ct = encrypt(&encode(&vals, &params).unwrap(), &sk, &mut rng);

    // Step 0: identity.
    let same = he_rotate(&ct, 0, &keys).unwrap();
    assert_eq!(decode(&bfv::decrypt(&same, &sk)), vals);

    for &step in &steps {
        let rot = he_rotate(&ct, step, &keys).unwrap();
        assert_eq!(
            decode(&bfv::decrypt(&rot, &sk)),
            rotate_slots_expected(&vals, step),
            "step {step}"
        );
    }

    // Rotate by k then by n_slots - k restores the original vector.
    let k = 3usize;
    let steps2: BTreeSet<usize> = [k, half - k].into_iter().collect();
    let (sk2, keys2) = keygen(&params, &steps2, 19);
    let ct2 = encrypt(&encode(&vals, &params).unwrap(), &sk2, &mut rng);
    let back = he_rotate(&he_rotate(&ct2, k, &keys2).unwrap(), half - k, &keys2).unwrap();
    assert_eq!(decode(&bfv::decrypt(&back, &sk2)), vals);

    // A missing step is an error, not a silent fallback.
    assert!(matches!(
        he_rotate(&ct, 7, &keys),
        Err(BfvError::MissingGaloisKey { step: 7 })
    ));
}

#[test]
fn rotation_noise_is_additive_and_input_independent() {
    let params = params_mult();
    let steps: BTreeSet<usize> = [5usize].into_iter().collect();
    let (sk, keys) = keygen(&params, &steps, 20);
    let mut rng = ChaCha20Rng::seed_from_u64(21);

    let fresh = encrypt(
        &encode(&random_slots(&params, &mut rng), &params).unwrap(),
        &sk,
        &mut rng,
    );
    // A used input: a multiplication by small weights amplifies the noise
    // well above fresh but keeps it below the key-switch addition.
    let small_weights: Vec<u64> = (0..params.n()).map(|i| (i as u64 % 63) + 1).collect();
    let used = he_mult_plain(
        &encrypt(&encode(&random_slots(&params, &mut rng), &params).unwrap(), &sk, &mut rng),
        &encode(&small_weights, &params).unwrap(),
    )
    .unwrap();

    let mut added_bits = Vec::new();
    for ct in [&fresh, &used] {
        let before = bfv::measured_noise_inf(ct, &sk);
        let after = bfv::measured_noise_inf(&he_rotate(ct, 5, &keys).unwrap(), &sk);
        assert!(after >= before, "rotation may not reduce noise");
        added_bits.push((after - before).max(1.0).log2());
    }
    // The added amount does not depend on the input's existing noise.
    assert!(
        (added_bits[0] - added_bits[1]).abs() < 1.0,
        "added noise differs: {added_bits:?}"
    );

    // Model bound: the addition stays below l_ct * A * B * n / 2.
    let eta_a = params.l_ct() as f64 * params.a_dcmp() as f64 * params.noise_bound()
        * params.n() as f64
        / 2.0;
    assert!(added_bits[0] < eta_a.log2());
}

#[test]
fn budget_never_increases_under_operators() {
    let params = params_small();
    let steps: BTreeSet<usize> = [2usize].into_iter().collect();
    let (sk, keys) = keygen(&params, &steps, 22);
    let mut rng = ChaCha20Rng::seed_from_u64(23);
    let ct = encrypt(
        &encode(&random_slots(&params, &mut rng), &params).unwrap(),
        &sk,
        &mut rng,
    );
    let other = encrypt(
        &encode(&random_slots(&params, &mut rng), &params).unwrap(),
        &sk,
        &mut rng,
    );
    let before = noise_report(&ct, &sk).budget_bits;
    let slack = 0.1; // meter quantization on coincidental cancellation

    let after_add = noise_report(&he_add(&ct, &other).unwrap(), &sk).budget_bits;
    assert!(after_add <= before.max(noise_report(&other, &sk).budget_bits) + slack);

    let w = encode(&random_slots(&params, &mut rng), &params).unwrap();
    let after_mult = noise_report(&he_mult_plain(&ct, &w).unwrap(), &sk).budget_bits;
    assert!(after_mult <= before + slack);

    let after_rot = noise_report(&he_rotate(&ct, 2, &keys).unwrap(), &sk).budget_bits;
    assert!(after_rot <= before + slack);
}

#[test]
fn adding_fresh_zero_costs_at_most_one_bit() {
    let params = params_2048();
    let (sk, _) = keygen(&params, &BTreeSet::new(), 24);
    let mut rng = ChaCha20Rng::seed_from_u64(25);
    let ct = encrypt(
        &encode(&random_slots(&params, &mut rng), &params).unwrap(),
        &sk,
        &mut rng,
    );
    let zero = encrypt(&encode(&[], &params).unwrap(), &sk, &mut rng);
    let before = noise_report(&ct, &sk).budget_bits;
    let after = noise_report(&he_add(&ct, &zero).unwrap(), &sk).budget_bits;
    assert!(before - after <= 1.0, "lost {} bits", before - after);
}

#[test]
fn forced_overflow_is_detected_and_decryption_mismatches() {
    let params = params_small();
    let (sk, _) = keygen(&params, &BTreeSet::new(), 26);
    let mut rng = ChaCha20Rng::seed_from_u64(27);
    let t = params.t().value();
    let vals = random_slots(&params, &mut rng);
    let mut ct = encrypt(&encode(&vals, &params).unwrap(), &sk, &mut rng);
    let mut expect = vals.clone();

    let heavy: Vec<u64> = (0..params.n()).map(|_| t - 1 - (rng.gen_range(0..8))).collect();
    let pt = encode(&heavy, &params).unwrap();
    let mut failed = false;
    for _ in 0..8 {
        ct = he_mult_plain(&ct, &pt).unwrap();
        expect = expect
            .iter()
            .zip(&heavy)
            .map(|(&x, &y)| (x as u128 * y as u128 % t as u128) as u64)
            .collect();
        let report = noise_report(&ct, &sk);
        if report.failed {
            failed = true;
            assert_ne!(
                decode(&bfv::decrypt(&ct, &sk)),
                expect,
                "meter reported failure but decryption still matches"
            );
            break;
        }
        assert_eq!(decode(&bfv::decrypt(&ct, &sk)), expect);
    }
    assert!(failed, "noise never overflowed; weaken the parameters");
}

#[test]
fn representation_round_trip_preserves_noise() {
    let params = params_small();
    let (sk, _) = keygen(&params, &BTreeSet::new(), 28);
    let mut rng = ChaCha20Rng::seed_from_u64(29);
    let ct = encrypt(
        &encode(&random_slots(&params, &mut rng), &params).unwrap(),
        &sk,
        &mut rng,
    );
    let round = ct.to_coefficient().to_evaluation();
    assert_eq!(ct.repr(), round.repr());
    let before = noise_report(&ct, &sk).budget_bits;
    let after = noise_report(&round, &sk).budget_bits;
    assert!((before - after).abs() < 1e-9);
    assert_eq!(
        decode(&bfv::decrypt(&ct, &sk)),
        decode(&bfv::decrypt(&round, &sk))
    );
}
