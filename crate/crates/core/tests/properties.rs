//! Property-based checks over randomly drawn parameter sets and keys.

use eqsat::model::{Clause, Literal, LiteralSpectrum, PrivateKey};
use eqsat::rng::seeded_rng;
use eqsat::{cipher, codec, keygen, Mode, Params};
use proptest::prelude::*;

/// Parameter sets small enough to generate keys for in microseconds but
/// varied enough to cover both clause shapes.
fn small_params() -> impl Strategy<Value = Params> {
    let undivided = (2u32..=4, 1u32..=6, prop::bool::ANY).prop_map(|(k, m, m3)| {
        let n = 4 * k; // keeps k | mn for every m
        if m3 {
            let m = m.max(2);
            let b = 31 - m.leading_zeros(); // floor(log2 m), so 2^b <= m
            Params::new(Mode::M3, k, n, m, b, m * n / k / 2, 5).unwrap()
        } else {
            Params::new(Mode::M2, k, n, m, 1, (m * n / k / 2).max(1), 5).unwrap()
        }
    });
    let divided = (2u32..=3, 1u32..=4).prop_map(|(k, m)| {
        // Pick n so each group holds at least 2^b clauses with b = 2.
        let width = 2 * k + 1;
        let n = width * 8;
        Params::new(Mode::M4, k, n, m, 2, 4, 5).unwrap()
    });
    prop_oneof![2 => undivided, 1 => divided]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// Generated keys always verify, and their spectra measure k·e (or the
    /// divided-key equivalent) under the planted assignment.
    #[test]
    fn generated_keys_verify(params in small_params(), seed in any::<u64>()) {
        let mut rng = seeded_rng(seed);
        let (pk, sk) = keygen::generate_keypair(&params, &mut rng).unwrap();
        prop_assert!(keygen::verify_keypair(&pk, &sk).passed);

        // Any e-subset of the undivided key measures exactly k·e.
        if params.mode != Mode::M4 {
            let e = params.e as usize;
            let spectrum =
                LiteralSpectrum::build(pk.clauses().iter().take(e), pk.n()).unwrap();
            prop_assert_eq!(
                spectrum.measure(&sk).unwrap(),
                u64::from(params.k) * u64::from(params.e)
            );
        }
    }

    /// Messages of every length round-trip, under the planted key and —
    /// for undivided modes — under its complement.
    #[test]
    fn round_trip_any_length(
        params in small_params(),
        seed in any::<u64>(),
        msg in prop::collection::vec(any::<u8>(), 0..48),
    ) {
        let mut rng = seeded_rng(seed);
        let (pk, sk) = keygen::generate_keypair(&params, &mut rng).unwrap();
        let ct = cipher::encrypt_message(&pk, &params, &msg, &mut rng).unwrap();
        prop_assert_eq!(cipher::decrypt_message(&ct, &sk).unwrap(), msg.clone());
        if params.mode != Mode::M4 {
            prop_assert_eq!(cipher::decrypt_message(&ct, &sk.complement()).unwrap(), msg);
        }
    }

    /// Swapping a pair is an involution, and the measure moves by exactly
    /// the pair difference.
    #[test]
    fn swap_moves_measure_by_difference(
        counts in prop::collection::vec((0u32..40, 0u32..40), 1..40),
        assignment in prop::collection::vec(any::<bool>(), 1..40),
        j in 1u32..40,
    ) {
        let n = counts.len().min(assignment.len());
        let counts = counts[..n].to_vec();
        let spectrum = LiteralSpectrum::from_counts(counts.clone());
        let sk = PrivateKey::new(assignment[..n].to_vec()).unwrap();
        let j = (j - 1) % n as u32 + 1;

        let swapped = spectrum.swap_pair(j).unwrap();
        let double_swapped = swapped.swap_pair(j).unwrap();
        prop_assert_eq!(double_swapped.counts(), spectrum.counts());

        let (a, b) = spectrum.pair(j).unwrap();
        let before = spectrum.measure(&sk).unwrap() as i64;
        let after = swapped.measure(&sk).unwrap() as i64;
        prop_assert_eq!((after - before).unsigned_abs(), u64::from(a.abs_diff(b)));
    }

    /// Key and ciphertext containers round-trip bit-exactly.
    #[test]
    fn codec_round_trips(params in small_params(), seed in any::<u64>()) {
        let mut rng = seeded_rng(seed);
        let (pk, sk) = keygen::generate_keypair(&params, &mut rng).unwrap();

        let sk_bytes = codec::serialize_private_key(&sk, &params).unwrap();
        let (sk2, params2) = codec::deserialize_private_key(&sk_bytes).unwrap();
        prop_assert_eq!(sk2.assignment(), sk.assignment());
        prop_assert_eq!(params2, params);
        prop_assert_eq!(codec::serialize_private_key(&sk2, &params2).unwrap(), sk_bytes);

        let pk_bytes = codec::serialize_public_key(&pk);
        let pk2 = codec::deserialize_public_key(&pk_bytes).unwrap();
        prop_assert_eq!(pk2.clauses(), pk.clauses());
        prop_assert_eq!(codec::serialize_public_key(&pk2), pk_bytes);

        let ct = cipher::encrypt_message(&pk, &params, b"roundtrip", &mut rng).unwrap();
        let ct_bytes = codec::serialize_ciphertext(&ct).unwrap();
        let ct2 = codec::deserialize_ciphertext(&ct_bytes).unwrap();
        prop_assert_eq!(ct2.message_bit_length, ct.message_bit_length);
        prop_assert_eq!(codec::serialize_ciphertext(&ct2).unwrap(), ct_bytes);
        prop_assert_eq!(cipher::decrypt_message(&ct2, &sk).unwrap(), b"roundtrip");
    }

    /// Deserializers return structured errors on arbitrary input — never
    /// panic — and flipping any single byte of a valid container never
    /// yields a different accepted object with the same serialization.
    #[test]
    fn deserializers_never_panic(bytes in prop::collection::vec(any::<u8>(), 0..256)) {
        let _ = codec::deserialize_private_key(&bytes);
        let _ = codec::deserialize_public_key(&bytes);
        let _ = codec::deserialize_ciphertext(&bytes);
    }

    /// A clause rejects duplicate variables no matter the polarity mix.
    #[test]
    fn clauses_reject_duplicate_variables(var in 1u32..100, negated in any::<bool>()) {
        let lits = vec![
            Literal { variable: var, negated },
            Literal { variable: var, negated: !negated },
        ];
        prop_assert!(Clause::new(lits).is_err());
    }
}

/// Block independence: permuting ciphertext blocks permutes the decoded
/// segments the same way. Checked on whole-block-sized messages so segment
/// boundaries align with bytes.
#[test]
fn block_permutation_commutes() {
    let params = Params::new(Mode::M3, 2, 8, 4, 2, 8, 5).unwrap();
    assert_eq!(params.bits_per_block(), 2);
    let mut rng = seeded_rng(99);
    let (pk, sk) = keygen::generate_keypair(&params, &mut rng).unwrap();

    let msg = [0b00_01_10_11u8, 0b11_01_00_10];
    let mut ct = cipher::encrypt_message(&pk, &params, &msg, &mut rng).unwrap();
    assert_eq!(ct.blocks.len(), 8);

    // Reverse the first four blocks: the first byte's 2-bit segments
    // reverse, the second byte is untouched.
    ct.blocks[..4].reverse();
    let permuted = cipher::decrypt_message(&ct, &sk).unwrap();
    assert_eq!(permuted, [0b11_10_01_00u8, 0b11_01_00_10]);
}
