//! Encryption and decryption for all three methods.
//!
//! Every ciphertext block is a literal spectrum over `e` clauses extracted
//! from the public key. The private key recovers the block value from the
//! satisfiability measure `t`:
//!
//! * `m2` — one bit. A balanced pair (`a_j = b_j`) is swapped for bit 1
//!   (leaving `t = k·e`), an unbalanced pair for bit 0 (shifting `t`).
//! * `m3` — `b` bits. A pair with `|a_j - b_j| = p` is swapped; the value is
//!   recovered as `p = |t - k·e|`.
//! * `m4` — `b` bits over a divided key, no swap. `p` clauses come from the
//!   k-TRUE group and `e - p` from the (k+1)-TRUE group, so
//!   `p = (k+1)·e - t`.
//!
//! Extraction is rejection-sampled so that no serialized count exceeds the
//! `q`-bit cap. For `m3`, blind rejection alone cannot reach rare large
//! differences in reasonable time, so after a few uniform attempts the
//! sampler switches to a targeted construction: it picks a pivot variable,
//! samples that variable's pair `(a_j, b_j)` from the exact conditional
//! occurrence distribution given `a_j - b_j = ±p`, assembles an extraction
//! consistent with that pair, and then swaps a uniformly chosen qualifying
//! pair (the pivot or any other variable that happens to match).

use rand::seq::index;
use rand::Rng;

use crate::bits::{BitReader, BitWriter};
use crate::combin::{ln_binomial, sample_ln_weights};
use crate::error::{Error, Result};
use crate::model::{Literal, LiteralSpectrum, PrivateKey, PublicKey};
use crate::params::{Mode, Params};
use crate::rng::{block_rng, draw_session_seed};

/// Extractions attempted per `m2` block before giving up.
pub const M2_EXTRACTION_BUDGET: u32 = 64;
/// Extractions attempted per `m3` block (uniform + targeted combined).
pub const M3_EXTRACTION_BUDGET: u32 = 4096;
/// Uniform rejection attempts before `m3` switches to targeted sampling.
const M3_UNIFORM_ATTEMPTS: u32 = 4;
/// Extractions attempted per `m4` block before giving up.
pub const M4_EXTRACTION_BUDGET: u32 = 4096;

/// One encrypted block: a (possibly pair-swapped) literal spectrum.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CiphertextBlock {
    pub spectrum: LiteralSpectrum,
}

/// A full message ciphertext: the parameters it was produced under, the
/// exact plaintext bit length, and one block per plaintext chunk.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ciphertext {
    pub params: Params,
    pub message_bit_length: u64,
    pub blocks: Vec<CiphertextBlock>,
}

/// Operation counters from one `m2` block encryption, for side-channel
/// shape assertions: both bit values must perform identical work kinds.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct EncryptTrace {
    /// Spectra extracted (including rejected ones).
    pub extractions: u32,
    /// Pair swaps executed (always exactly one on success).
    pub swaps: u32,
}

/// Checks that `params` is valid, matches the key's geometry, and that the
/// key kind (divided or not) suits the requested mode.
fn check_encrypt_inputs(pk: &PublicKey, params: &Params) -> Result<()> {
    params.validate()?;
    let kp = pk.params();
    if (params.n, params.k, params.m) != (kp.n, kp.k, kp.m) {
        return Err(Error::ShapeMismatch(format!(
            "cipher parameters (n={}, k={}, m={}) do not match key (n={}, k={}, m={})",
            params.n, params.k, params.m, kp.n, kp.k, kp.m
        )));
    }
    if params.mode.is_divided() != kp.mode.is_divided() {
        return Err(Error::ShapeMismatch(format!(
            "mode {} requires a {} key, but the key is {}",
            params.mode,
            if params.mode.is_divided() { "divided" } else { "undivided" },
            if kp.mode.is_divided() { "divided" } else { "undivided" },
        )));
    }
    Ok(())
}

/// Uniformly extracts `e` distinct clauses and tallies their spectrum.
fn extract_spectrum<R: Rng + ?Sized>(
    pk: &PublicKey,
    e: u32,
    rng: &mut R,
) -> Result<LiteralSpectrum> {
    let clauses = pk.clauses();
    let picks = index::sample(rng, clauses.len(), e as usize);
    LiteralSpectrum::build(picks.into_iter().map(|i| &clauses[i]), pk.n())
}

/// Encrypts one bit with method 2.
pub fn encrypt_bit_m2<R: Rng + ?Sized>(
    pk: &PublicKey,
    params: &Params,
    bit: bool,
    rng: &mut R,
) -> Result<CiphertextBlock> {
    encrypt_bit_m2_traced(pk, params, bit, rng).map(|(block, _)| block)
}

/// Encrypts one bit with method 2, returning operation counters.
///
/// Both bit values follow the same code path: extract, scan for candidate
/// pairs (balanced pairs for 1, unbalanced for 0), swap exactly one.
pub fn encrypt_bit_m2_traced<R: Rng + ?Sized>(
    pk: &PublicKey,
    params: &Params,
    bit: bool,
    rng: &mut R,
) -> Result<(CiphertextBlock, EncryptTrace)> {
    check_encrypt_inputs(pk, params)?;
    if params.mode != Mode::M2 {
        return Err(Error::InvalidParams(format!(
            "encrypt_bit_m2 requires mode m2 parameters, got {}",
            params.mode
        )));
    }
    let cap = params.count_cap();
    let mut trace = EncryptTrace::default();
    let mut candidates = Vec::new();

    while trace.extractions < M2_EXTRACTION_BUDGET {
        let mut spectrum = extract_spectrum(pk, params.e, rng)?;
        trace.extractions += 1;
        if spectrum.max_count() > cap {
            continue;
        }
        candidates.clear();
        candidates.extend(
            spectrum
                .counts()
                .iter()
                .enumerate()
                .filter(|(_, &(a, b))| (a == b) == bit)
                .map(|(i, _)| i as u32 + 1),
        );
        let Some(&variable) = pick_uniform(&candidates, rng) else {
            continue;
        };
        spectrum.swap_pair_in_place(variable)?;
        trace.swaps += 1;
        return Ok((CiphertextBlock { spectrum }, trace));
    }

    Err(Error::EncryptionFailure(format!(
        "no extraction offered a {} pair within {M2_EXTRACTION_BUDGET} attempts",
        if bit { "balanced" } else { "unbalanced" }
    )))
}

/// Decrypts one `m2` block: the measure stays at `k·e` exactly when the
/// swapped pair was balanced.
pub fn decrypt_bit_m2(
    block: &CiphertextBlock,
    sk: &PrivateKey,
    params: &Params,
) -> Result<bool> {
    let t = block.spectrum.measure(sk)?;
    Ok(t == u64::from(params.k) * u64::from(params.e))
}

/// Encrypts a `b`-bit value with method 3.
pub fn encrypt_block_m3<R: Rng + ?Sized>(
    pk: &PublicKey,
    params: &Params,
    value: u32,
    rng: &mut R,
) -> Result<CiphertextBlock> {
    check_encrypt_inputs(pk, params)?;
    if params.mode != Mode::M3 {
        return Err(Error::InvalidParams(format!(
            "encrypt_block_m3 requires mode m3 parameters, got {}",
            params.mode
        )));
    }
    if u64::from(value) >= params.block_values() {
        return Err(Error::EncryptionFailure(format!(
            "block value {value} does not fit in b={} bits",
            params.b
        )));
    }
    let cap = params.count_cap();
    let mut attempts = 0u32;
    let mut scratch = Vec::new();

    // Phase 1: blind rejection. Cheap, and for common (small) differences it
    // almost always succeeds immediately.
    while attempts < M3_UNIFORM_ATTEMPTS {
        attempts += 1;
        let spectrum = extract_spectrum(pk, params.e, rng)?;
        if spectrum.max_count() > cap {
            continue;
        }
        if let Some(block) = swap_matching_pair(spectrum, value, &mut scratch, rng) {
            return Ok(block);
        }
    }

    // Phase 2: targeted construction around a pivot variable.
    let occurrences = OccurrenceIndex::build(pk);
    let conditional = ConditionalPairSampler::new(params, value)?;
    while attempts < M3_EXTRACTION_BUDGET {
        attempts += 1;
        let spectrum = conditional.extract(pk, &occurrences, rng)?;
        if spectrum.max_count() > cap {
            continue;
        }
        if let Some(block) = swap_matching_pair(spectrum, value, &mut scratch, rng) {
            return Ok(block);
        }
    }

    Err(Error::EncryptionFailure(format!(
        "no extraction offered a pair with difference {value} within \
         {M3_EXTRACTION_BUDGET} attempts"
    )))
}

/// Decrypts one `m3` block: `p = |t - k·e|`.
pub fn decrypt_block_m3(
    block: &CiphertextBlock,
    sk: &PrivateKey,
    params: &Params,
) -> Result<u32> {
    let t = block.spectrum.measure(sk)?;
    let p = t.abs_diff(u64::from(params.k) * u64::from(params.e));
    if p >= params.block_values() {
        return Err(Error::CorruptCiphertext(format!(
            "decoded difference {p} does not fit in b={} bits",
            params.b
        )));
    }
    Ok(p as u32)
}

/// Encrypts a `b`-bit value with method 4: `value` clauses from the k-TRUE
/// group, the remaining `e - value` from the (k+1)-TRUE group, no swap.
pub fn encrypt_block_m4<R: Rng + ?Sized>(
    pk: &PublicKey,
    params: &Params,
    value: u32,
    rng: &mut R,
) -> Result<CiphertextBlock> {
    check_encrypt_inputs(pk, params)?;
    if params.mode != Mode::M4 {
        return Err(Error::InvalidParams(format!(
            "encrypt_block_m4 requires mode m4 parameters, got {}",
            params.mode
        )));
    }
    if u64::from(value) >= params.block_values() {
        return Err(Error::EncryptionFailure(format!(
            "block value {value} does not fit in b={} bits",
            params.b
        )));
    }
    let k_true = pk.k_true_clauses();
    let k_plus1 = pk.k_plus1_true_clauses();
    let from_k_true = value as usize;
    let from_k_plus1 = params.e as usize - from_k_true;
    let cap = params.count_cap();

    for _ in 0..M4_EXTRACTION_BUDGET {
        let first = index::sample(rng, k_true.len(), from_k_true);
        let second = index::sample(rng, k_plus1.len(), from_k_plus1);
        let chosen = first
            .into_iter()
            .map(|i| &k_true[i])
            .chain(second.into_iter().map(|i| &k_plus1[i]));
        let spectrum = LiteralSpectrum::build(chosen, pk.n())?;
        if spectrum.max_count() > cap {
            continue;
        }
        return Ok(CiphertextBlock { spectrum });
    }

    Err(Error::EncryptionFailure(format!(
        "every extraction overflowed the q={} count cap within \
         {M4_EXTRACTION_BUDGET} attempts",
        params.q
    )))
}

/// Decrypts one `m4` block: `p = (k+1)·e - t`.
pub fn decrypt_block_m4(
    block: &CiphertextBlock,
    sk: &PrivateKey,
    params: &Params,
) -> Result<u32> {
    let t = block.spectrum.measure(sk)?;
    let top = u64::from(params.k + 1) * u64::from(params.e);
    if t > top {
        return Err(Error::CorruptCiphertext(format!(
            "measure {t} exceeds the maximum {top} for these parameters"
        )));
    }
    let p = top - t;
    if p >= params.block_values() {
        return Err(Error::CorruptCiphertext(format!(
            "decoded group count {p} does not fit in b={} bits",
            params.b
        )));
    }
    Ok(p as u32)
}

/// Encrypts a byte string. The plaintext is chunked MSB-first into
/// `bits_per_block()`-bit values (the final chunk zero-padded), and each
/// block is encrypted under its own deterministic substream of a session
/// seed drawn from `rng`.
pub fn encrypt_message<R: Rng + ?Sized>(
    pk: &PublicKey,
    params: &Params,
    plaintext: &[u8],
    rng: &mut R,
) -> Result<Ciphertext> {
    check_encrypt_inputs(pk, params)?;
    let bit_len = plaintext.len() as u64 * 8;
    let width = params.bits_per_block();
    let block_count = params.block_count(bit_len);
    let session_seed = draw_session_seed(rng);

    let mut reader = BitReader::new(plaintext);
    let mut blocks = Vec::with_capacity(block_count as usize);
    for index in 0..block_count {
        let value = reader.read_padded(width) as u32;
        let mut rng = block_rng(&session_seed, index);
        let block = match params.mode {
            Mode::M2 => encrypt_bit_m2(pk, params, value == 1, &mut rng)?,
            Mode::M3 => encrypt_block_m3(pk, params, value, &mut rng)?,
            Mode::M4 => encrypt_block_m4(pk, params, value, &mut rng)?,
        };
        blocks.push(block);
    }
    Ok(Ciphertext { params: *params, message_bit_length: bit_len, blocks })
}

/// Decrypts a full message back to bytes.
pub fn decrypt_message(ct: &Ciphertext, sk: &PrivateKey) -> Result<Vec<u8>> {
    let params = ct.params;
    params.validate()?;
    if sk.n() != params.n {
        return Err(Error::ShapeMismatch(format!(
            "private key covers {} variables, ciphertext expects n={}",
            sk.n(),
            params.n
        )));
    }
    let width = params.bits_per_block();
    let expected_blocks = params.block_count(ct.message_bit_length);
    if ct.blocks.len() as u64 != expected_blocks {
        return Err(Error::CorruptCiphertext(format!(
            "{} blocks present, {} bits require {expected_blocks}",
            ct.blocks.len(),
            ct.message_bit_length
        )));
    }

    let mut writer = BitWriter::with_capacity_bits(expected_blocks * u64::from(width));
    for (i, block) in ct.blocks.iter().enumerate() {
        let value = match params.mode {
            Mode::M2 => decrypt_bit_m2(block, sk, &params).map(u32::from),
            Mode::M3 => decrypt_block_m3(block, sk, &params),
            Mode::M4 => decrypt_block_m4(block, sk, &params),
        }
        .map_err(|e| annotate_block(i, e))?;
        writer.write(u64::from(value), width);
    }

    let mut bytes = writer.finish();
    bytes.truncate(ct.message_bit_length.div_ceil(8) as usize);
    // Bits past the declared message length are padding; clear them so the
    // output depends only on the message.
    let tail_bits = (ct.message_bit_length % 8) as u32;
    if tail_bits != 0 {
        if let Some(last) = bytes.last_mut() {
            *last &= 0xFFu8 << (8 - tail_bits);
        }
    }
    Ok(bytes)
}

fn annotate_block(index: usize, e: Error) -> Error {
    match e {
        Error::CorruptCiphertext(msg) => {
            Error::CorruptCiphertext(format!("block {index}: {msg}"))
        }
        other => other,
    }
}

fn pick_uniform<'a, T, R: Rng + ?Sized>(items: &'a [T], rng: &mut R) -> Option<&'a T> {
    if items.is_empty() {
        None
    } else {
        Some(&items[rng.random_range(0..items.len())])
    }
}

/// If any pair has `|a_j - b_j| = p`, swaps one chosen uniformly and returns
/// the finished block.
fn swap_matching_pair<R: Rng + ?Sized>(
    mut spectrum: LiteralSpectrum,
    p: u32,
    scratch: &mut Vec<u32>,
    rng: &mut R,
) -> Option<CiphertextBlock> {
    scratch.clear();
    scratch.extend(
        spectrum
            .counts()
            .iter()
            .enumerate()
            .filter(|(_, &(a, b))| a.abs_diff(b) == p)
            .map(|(i, _)| i as u32 + 1),
    );
    let &variable = pick_uniform(scratch, rng)?;
    spectrum
        .swap_pair_in_place(variable)
        .expect("candidate variables come from the spectrum itself");
    Some(CiphertextBlock { spectrum })
}

/// Clause positions per literal code; each list has exactly `m` entries for
/// undivided keys.
struct OccurrenceIndex {
    by_code: Vec<Vec<u32>>,
}

impl OccurrenceIndex {
    fn build(pk: &PublicKey) -> OccurrenceIndex {
        let mut by_code = vec![Vec::new(); pk.n() as usize * 2];
        for (i, clause) in pk.clauses().iter().enumerate() {
            for lit in clause.literals() {
                by_code[lit.code() as usize].push(i as u32);
            }
        }
        OccurrenceIndex { by_code }
    }
}

/// Samples extractions conditioned on a pivot variable having pair
/// difference exactly `p`.
///
/// For a uniform `e`-subset of the `c` clauses, a fixed variable's pair
/// `(a, b)` follows a multivariate hypergeometric law: the subset picks `a`
/// of its `m` positive occurrences, `b` of its `m` negative ones, and
/// `e - a - b` of the `c - 2m` clauses that avoid the variable. Conditioning
/// on `a - b = ±p` just restricts to the feasible `(a, b)` diagonal, whose
/// relative weights are `C(m,a)·C(m,b)·C(c-2m, e-a-b)`. Pairs that would
/// overflow the `q` cap at the pivot are excluded up front.
struct ConditionalPairSampler {
    pairs: Vec<(u32, u32)>,
    ln_weights: Vec<f64>,
    p: u32,
    e: u32,
}

impl ConditionalPairSampler {
    fn new(params: &Params, p: u32) -> Result<ConditionalPairSampler> {
        let m = u64::from(params.m);
        let c = params.clause_count();
        let e = u64::from(params.e);
        let others = c - 2 * m;
        let side_cap = params.m.min(params.count_cap());

        let mut pairs = Vec::new();
        let mut ln_weights = Vec::new();
        for a in p..=side_cap {
            let b = a - p;
            let picked = u64::from(a) + u64::from(b);
            if picked > e || e - picked > others {
                continue;
            }
            pairs.push((a, b));
            ln_weights.push(
                ln_binomial(m, u64::from(a))
                    + ln_binomial(m, u64::from(b))
                    + ln_binomial(others, e - picked),
            );
        }
        if pairs.is_empty() {
            return Err(Error::EncryptionFailure(format!(
                "difference {p} is unreachable with m={}, e={}, q={}",
                params.m, params.e, params.q
            )));
        }
        Ok(ConditionalPairSampler { pairs, ln_weights, p, e: params.e })
    }

    fn extract<R: Rng + ?Sized>(
        &self,
        pk: &PublicKey,
        occurrences: &OccurrenceIndex,
        rng: &mut R,
    ) -> Result<LiteralSpectrum> {
        let idx = sample_ln_weights(&self.ln_weights, rng)
            .expect("constructor guarantees at least one feasible pair");
        let (mut pos_count, mut neg_count) = self.pairs[idx];
        // The conditional law is symmetric in the two literals of the pivot,
        // so orient the difference by a fair coin.
        if self.p > 0 && rng.random::<bool>() {
            std::mem::swap(&mut pos_count, &mut neg_count);
        }

        let pivot = rng.random_range(1..=pk.n());
        let pos_clauses = &occurrences.by_code[Literal::positive(pivot).code() as usize];
        let neg_clauses = &occurrences.by_code[Literal::negative(pivot).code() as usize];

        let mut chosen: Vec<u32> = Vec::with_capacity(self.e as usize);
        chosen.extend(
            index::sample(rng, pos_clauses.len(), pos_count as usize)
                .into_iter()
                .map(|i| pos_clauses[i]),
        );
        chosen.extend(
            index::sample(rng, neg_clauses.len(), neg_count as usize)
                .into_iter()
                .map(|i| neg_clauses[i]),
        );

        // Fill the remainder from clauses that avoid the pivot entirely.
        let mut avoids_pivot = vec![true; pk.clauses().len()];
        for &i in pos_clauses.iter().chain(neg_clauses) {
            avoids_pivot[i as usize] = false;
        }
        let rest: Vec<u32> = (0..pk.clauses().len() as u32)
            .filter(|&i| avoids_pivot[i as usize])
            .collect();
        let need = self.e as usize - chosen.len();
        chosen.extend(index::sample(rng, rest.len(), need).into_iter().map(|i| rest[i]));

        let clauses = pk.clauses();
        LiteralSpectrum::build(chosen.iter().map(|&i| &clauses[i as usize]), pk.n())
    }
}
