//! Desk-scale verification tooling: brute-force key recovery on tiny keys,
//! wrong-key bit-error experiments, search-space arithmetic, spectrum
//! statistics, and a benchmark harness with CSV output.

use std::time::Instant;

use rand::seq::index;
use rand::Rng;

use crate::cipher::{decrypt_bit_m2, decrypt_message, encrypt_bit_m2, encrypt_message};
use crate::codec::{
    ciphertext_block_bytes, literal_field_width, serialize_ciphertext, serialize_private_key,
    serialize_public_key, CT_HEADER_LEN, KEY_HEADER_LEN,
};
use crate::combin::log2_binomial;
use crate::error::{Error, Result};
use crate::keygen::generate_keypair;
use crate::model::{LiteralSpectrum, PrivateKey, PublicKey};
use crate::params::{Mode, Params};

/// Largest `n` accepted by [`brute_force_keys`]: the enumeration walks all
/// `2^n` assignments.
pub const BRUTE_FORCE_MAX_N: u32 = 24;

/// Exhaustively recovers every assignment satisfying the key's equilibrium
/// condition: exactly `k` TRUE literals in every clause (respecting group
/// labels for divided keys). The planted key and — for undivided keys — its
/// complement are always among the results.
pub fn brute_force_keys(pk: &PublicKey) -> Result<Vec<PrivateKey>> {
    let params = pk.params();
    let n = params.n;
    if n > BRUTE_FORCE_MAX_N {
        return Err(Error::InvalidParams(format!(
            "n={n} exceeds the brute-force enumeration bound {BRUTE_FORCE_MAX_N}"
        )));
    }
    let group = params.group_clause_count() as usize;
    let mut found = Vec::new();
    'assignments: for mask in 0u64..(1u64 << n) {
        for (i, clause) in pk.clauses().iter().enumerate() {
            let expected = match params.mode {
                Mode::M2 | Mode::M3 => params.k,
                Mode::M4 => {
                    if i < group {
                        params.k
                    } else {
                        params.k + 1
                    }
                }
            };
            let mut count = 0;
            for lit in clause.literals() {
                let value = (mask >> (lit.variable - 1)) & 1 == 1;
                if value != lit.negated {
                    count += 1;
                }
            }
            if count != expected {
                continue 'assignments;
            }
        }
        found.push(PrivateKey::new(
            (0..n).map(|j| (mask >> j) & 1 == 1).collect(),
        )?);
    }
    Ok(found)
}

/// Which key decrypts during a [`random_key_ber`] experiment.
#[derive(Debug, Clone, Copy)]
pub enum DecryptKey<'a> {
    /// A fresh uniformly random key for every trial.
    FreshRandom,
    /// One fixed key for all trials (e.g. the true key, or a tampered one).
    Fixed(&'a PrivateKey),
}

/// Encrypts `trials` random bits with method 2 and reports the fraction
/// decrypted incorrectly by the chosen key. With the true key this is
/// exactly 0; with fresh random keys it sits near 1/2 (the wrong-key output
/// carries no information about the bit).
pub fn random_key_ber<R: Rng + ?Sized>(
    pk: &PublicKey,
    params: &Params,
    decrypt_with: DecryptKey<'_>,
    trials: u32,
    rng: &mut R,
) -> Result<f64> {
    if trials == 0 {
        return Err(Error::InvalidParams("trials must be positive".into()));
    }
    if params.mode != Mode::M2 {
        return Err(Error::InvalidParams(format!(
            "the bit-error experiment uses method 2, got {}",
            params.mode
        )));
    }
    let mut errors = 0u64;
    for _ in 0..trials {
        let bit: bool = rng.random();
        let block = encrypt_bit_m2(pk, params, bit, rng)?;
        let fresh;
        let key = match decrypt_with {
            DecryptKey::Fixed(key) => key,
            DecryptKey::FreshRandom => {
                fresh = PrivateKey::random(params.n, rng)?;
                &fresh
            }
        };
        if decrypt_bit_m2(&block, key, params)? != bit {
            errors += 1;
        }
    }
    Ok(errors as f64 / f64::from(trials))
}

/// `log2 C(c, e)`: the exponent of the extraction search space an attacker
/// without the private key faces.
pub fn search_space_bits(params: &Params) -> Result<f64> {
    params.validate()?;
    Ok(log2_binomial(params.clause_count(), u64::from(params.e)))
}

/// Summary of repeated random extractions; quantifies how often counts
/// exceed the `q`-bit serialization cap.
#[derive(Debug, Clone)]
pub struct SpectrumStats {
    pub trials: u32,
    /// Largest single count observed across all trials.
    pub max_count: u32,
    /// Fraction of extractions with at least one count above `2^q - 1`.
    pub overflow_fraction: f64,
    /// Mean of `|a_j - b_j|` over all variables and trials.
    pub mean_abs_difference: f64,
    /// `difference_histogram[d]` = number of (variable, trial) pairs with
    /// `|a_j - b_j| = d`.
    pub difference_histogram: Vec<u64>,
}

/// Extracts `e` clauses `trials` times and aggregates count statistics.
pub fn spectrum_stats<R: Rng + ?Sized>(
    pk: &PublicKey,
    e: u32,
    q: u32,
    trials: u32,
    rng: &mut R,
) -> Result<SpectrumStats> {
    if trials == 0 {
        return Err(Error::InvalidParams("trials must be positive".into()));
    }
    if !(1..=32).contains(&q) {
        return Err(Error::InvalidParams(format!("q={q} outside 1..=32")));
    }
    let clauses = pk.clauses();
    if u64::from(e) > clauses.len() as u64 {
        return Err(Error::InvalidParams(format!(
            "e={e} exceeds the key's {} clauses",
            clauses.len()
        )));
    }
    let cap = if q >= 32 { u32::MAX } else { (1u32 << q) - 1 };

    let mut max_count = 0u32;
    let mut overflowing_trials = 0u64;
    let mut histogram = vec![0u64; pk.params().m as usize + 1];
    let mut diff_sum = 0u128;

    for _ in 0..trials {
        let picks = index::sample(rng, clauses.len(), e as usize);
        let spectrum =
            LiteralSpectrum::build(picks.into_iter().map(|i| &clauses[i]), pk.n())?;
        let trial_max = spectrum.max_count();
        max_count = max_count.max(trial_max);
        if trial_max > cap {
            overflowing_trials += 1;
        }
        for d in spectrum.pair_differences() {
            histogram[d as usize] += 1;
            diff_sum += u128::from(d);
        }
    }

    let samples = u128::from(trials) * u128::from(pk.n());
    Ok(SpectrumStats {
        trials,
        max_count,
        overflow_fraction: overflowing_trials as f64 / f64::from(trials),
        mean_abs_difference: diff_sum as f64 / samples as f64,
        difference_histogram: histogram,
    })
}

/// One benchmark observation.
#[derive(Debug, Clone)]
pub struct BenchRow {
    pub mode: String,
    pub params: String,
    pub metric: String,
    pub value: f64,
}

/// Benchmark results; renders to CSV with a header row.
#[derive(Debug, Clone, Default)]
pub struct BenchReport {
    pub rows: Vec<BenchRow>,
}

impl BenchReport {
    /// Looks up a single value by parameter label and metric name.
    pub fn value(&self, params_label: &str, metric: &str) -> Option<f64> {
        self.rows
            .iter()
            .find(|r| r.params == params_label && r.metric == metric)
            .map(|r| r.value)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("mode,params,metric,value\n");
        for row in &self.rows {
            let value = if row.value.fract() == 0.0 && row.value.abs() < 1e15 {
                format!("{:.0}", row.value)
            } else {
                format!("{:.6}", row.value)
            };
            out.push_str(&format!("{},{},{},{}\n", row.mode, row.params, row.metric, value));
        }
        out
    }
}

fn median_ms(mut samples: Vec<f64>) -> f64 {
    samples.sort_by(|a, b| a.partial_cmp(b).expect("durations are finite"));
    let mid = samples.len() / 2;
    if samples.len() % 2 == 1 {
        samples[mid]
    } else {
        (samples[mid - 1] + samples[mid]) / 2.0
    }
}

/// Times key generation and 256-bit encrypt/decrypt for each parameter set
/// (median over `repetitions` runs) and tabulates serialized payload sizes
/// next to their closed-form expressions. `repetitions = 0` yields an empty
/// report.
pub fn run_bench<R: Rng + ?Sized>(
    param_sets: &[Params],
    repetitions: u32,
    rng: &mut R,
) -> Result<BenchReport> {
    let mut report = BenchReport::default();
    if repetitions == 0 {
        return Ok(report);
    }

    for params in param_sets {
        params.validate()?;
        let label = params.label();
        let mode = params.mode.to_string();
        let mut push = |metric: &str, value: f64| {
            report.rows.push(BenchRow {
                mode: mode.clone(),
                params: label.clone(),
                metric: metric.to_string(),
                value,
            });
        };

        let mut keygen_ms = Vec::with_capacity(repetitions as usize);
        let mut encrypt_ms = Vec::with_capacity(repetitions as usize);
        let mut decrypt_ms = Vec::with_capacity(repetitions as usize);
        let mut keypair = None;
        for _ in 0..repetitions {
            let start = Instant::now();
            let pair = generate_keypair(params, rng)?;
            keygen_ms.push(start.elapsed().as_secs_f64() * 1e3);
            keypair = Some(pair);
        }
        let (pk, sk) = keypair.expect("repetitions > 0 generated at least one keypair");

        let mut message = [0u8; 32];
        for _ in 0..repetitions {
            rng.fill_bytes(&mut message);
            let start = Instant::now();
            let ct = encrypt_message(&pk, params, &message, rng)?;
            encrypt_ms.push(start.elapsed().as_secs_f64() * 1e3);

            let start = Instant::now();
            let recovered = decrypt_message(&ct, &sk)?;
            decrypt_ms.push(start.elapsed().as_secs_f64() * 1e3);
            debug_assert_eq!(recovered, message);
        }

        push("keygen_ms_median", median_ms(keygen_ms));
        push("encrypt_256bit_ms_median", median_ms(encrypt_ms));
        push("decrypt_256bit_ms_median", median_ms(decrypt_ms));

        // Measured payload sizes (headers excluded).
        let sk_payload = (serialize_private_key(&sk, params)?.len() - KEY_HEADER_LEN) as f64;
        let pk_payload = (serialize_public_key(&pk).len() - KEY_HEADER_LEN) as f64;
        let mut sample_rng = crate::rng::seeded_rng(0x6272_6e63);
        let ct = encrypt_message(&pk, params, &message, &mut sample_rng)?;
        let ct_payload = (serialize_ciphertext(&ct)?.len() - CT_HEADER_LEN) as f64;
        push("sk_payload_bytes", sk_payload);
        push("pk_payload_bytes", pk_payload);
        push("ct_block_payload_bytes", ct_payload / ct.blocks.len() as f64);
        push("ct_256bit_payload_bytes", ct_payload);

        // Closed-form sizes: n bits for the private key, 2mn·(⌈log2 n⌉+1)
        // bits for an undivided public key, 2qn bits per ciphertext block.
        let n = u64::from(params.n);
        let m = u64::from(params.m);
        let width = u64::from(literal_field_width(params.n));
        push("sk_formula_bytes", n.div_ceil(8) as f64);
        push("pk_formula_bytes", (2 * m * n * width).div_ceil(8) as f64);
        push(
            "ct_block_formula_bytes",
            (2 * u64::from(params.q) * n).div_ceil(8) as f64,
        );
        push(
            "ct_256bit_formula_bytes",
            (params.block_count(256) * ciphertext_block_bytes(params)) as f64,
        );
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::seeded_rng;

    #[test]
    fn brute_force_finds_exactly_the_planted_key_and_complement() {
        let params = Params::new(Mode::M2, 2, 8, 2, 1, 3, 4).unwrap();
        let (pk, sk) = generate_keypair(&params, &mut seeded_rng(20)).unwrap();
        let keys = brute_force_keys(&pk).unwrap();
        assert!(keys.contains(&sk), "planted key must be recovered");
        assert!(keys.contains(&sk.complement()), "complement must be recovered");
    }

    #[test]
    fn brute_force_respects_group_labels_for_divided_keys() {
        let params = Params::new(Mode::M4, 2, 10, 1, 1, 2, 4).unwrap();
        let (pk, sk) = generate_keypair(&params, &mut seeded_rng(21)).unwrap();
        let keys = brute_force_keys(&pk).unwrap();
        assert!(keys.contains(&sk));
        // Group labels break the complement symmetry.
        assert!(!keys.contains(&sk.complement()));
    }

    #[test]
    fn brute_force_refuses_large_n() {
        let params = Params::new(Mode::M2, 2, 32, 2, 1, 3, 4).unwrap();
        let (pk, _) = generate_keypair(&params, &mut seeded_rng(22)).unwrap();
        assert!(matches!(brute_force_keys(&pk), Err(Error::InvalidParams(_))));
    }

    #[test]
    fn true_key_ber_is_zero_and_trials_must_be_positive() {
        let params = Params::new(Mode::M2, 2, 16, 4, 1, 8, 4).unwrap();
        let mut rng = seeded_rng(23);
        let (pk, sk) = generate_keypair(&params, &mut rng).unwrap();
        let ber =
            random_key_ber(&pk, &params, DecryptKey::Fixed(&sk), 200, &mut rng).unwrap();
        assert_eq!(ber, 0.0);
        assert!(random_key_ber(&pk, &params, DecryptKey::Fixed(&sk), 0, &mut rng).is_err());
    }

    #[test]
    fn flipped_key_ber_is_positive() {
        let params = Params::new(Mode::M2, 4, 64, 8, 1, 96, 4).unwrap();
        let mut rng = seeded_rng(24);
        let (pk, sk) = generate_keypair(&params, &mut rng).unwrap();
        let mut flipped = sk.assignment().to_vec();
        flipped[0] = !flipped[0];
        let flipped = PrivateKey::new(flipped).unwrap();
        let ber =
            random_key_ber(&pk, &params, DecryptKey::Fixed(&flipped), 300, &mut rng).unwrap();
        assert!(ber > 0.0, "a one-bit-wrong key must make errors, got {ber}");
    }

    #[test]
    fn search_space_bits_matches_the_log_gamma_oracle() {
        let params = Params::new(Mode::M2, 4, 512, 20, 1, 768, 4).unwrap();
        let bits = search_space_bits(&params).unwrap();
        assert!(
            (bits - 2250.2435826325845).abs() / 2250.2435826325845 < 1e-9,
            "got {bits}"
        );
    }

    #[test]
    fn search_space_bits_is_monotone_up_to_half() {
        let mut previous = -1.0;
        for e in [1u32, 2, 3, 4] {
            let params = Params::new(Mode::M2, 2, 8, 2, 1, e, 4).unwrap();
            let bits = search_space_bits(&params).unwrap();
            assert!(bits > previous, "e={e}: {bits} <= {previous}");
            previous = bits;
        }
    }

    #[test]
    fn full_extraction_spectrum_is_exactly_m_everywhere() {
        let params = Params::new(Mode::M2, 2, 16, 4, 1, 8, 4).unwrap();
        let mut rng = seeded_rng(25);
        let (pk, _) = generate_keypair(&params, &mut rng).unwrap();
        let stats =
            spectrum_stats(&pk, params.clause_count() as u32, 4, 5, &mut rng).unwrap();
        assert_eq!(stats.max_count, params.m);
        assert_eq!(stats.overflow_fraction, 0.0);
        // Full extraction is balanced at every variable: a_j = b_j = m.
        assert_eq!(stats.mean_abs_difference, 0.0);
        assert_eq!(stats.difference_histogram[0], 5 * 16);
    }

    #[test]
    fn zero_extraction_spectrum_is_all_zeros() {
        let params = Params::new(Mode::M2, 2, 16, 4, 1, 8, 4).unwrap();
        let mut rng = seeded_rng(26);
        let (pk, _) = generate_keypair(&params, &mut rng).unwrap();
        let stats = spectrum_stats(&pk, 0, 4, 3, &mut rng).unwrap();
        assert_eq!(stats.max_count, 0);
        assert_eq!(stats.mean_abs_difference, 0.0);
    }

    #[test]
    fn bench_report_shape_and_formula_agreement() {
        let params = Params::new(Mode::M2, 2, 16, 4, 1, 8, 4).unwrap();
        let mut rng = seeded_rng(27);
        let report = run_bench(&[params], 3, &mut rng).unwrap();
        let label = params.label();
        // Undivided keys: measured payloads equal the closed forms exactly.
        assert_eq!(
            report.value(&label, "sk_payload_bytes"),
            report.value(&label, "sk_formula_bytes")
        );
        assert_eq!(
            report.value(&label, "pk_payload_bytes"),
            report.value(&label, "pk_formula_bytes")
        );
        assert!(report.value(&label, "keygen_ms_median").unwrap() >= 0.0);

        let csv = report.to_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("mode,params,metric,value"));
        assert_eq!(csv.lines().count(), report.rows.len() + 1);
        assert!(csv.contains("m2,"));
    }

    #[test]
    fn empty_bench_report_for_zero_repetitions() {
        let params = Params::new(Mode::M2, 2, 16, 4, 1, 8, 4).unwrap();
        let report = run_bench(&[params], 0, &mut seeded_rng(28)).unwrap();
        assert!(report.rows.is_empty());
        assert_eq!(report.to_csv(), "mode,params,metric,value\n");
    }
}
