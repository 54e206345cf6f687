//! Binary wire formats and DIMACS export.
//!
//! Every serialized object starts with a fixed header: a 4-byte magic tag
//! (`EQPK` public key, `EQSK` private key, `EQCT` ciphertext), a 1-byte
//! format version, a 1-byte mode, and the six parameters `k, m, n, b, e, q`
//! as little-endian `u32`. Ciphertexts append the message bit length as a
//! little-endian `u64`. Payloads use MSB-first bit packing and zero padding
//! to the next byte; all padding must decode as zero (the formats are
//! canonical: every object has exactly one encoding).
//!
//! Payload layouts:
//! * private key — one bit per variable in ascending order, MSB-first.
//! * public key — every clause in order, each literal as a
//!   `⌈log2 n⌉ + 1`-bit field holding [`Literal::code`]; divided keys
//!   prepend the two group sizes as little-endian `u32` (k-TRUE group
//!   first).
//! * ciphertext — per block, the `2n` counts `a_1, b_1, …, a_n, b_n` as
//!   `q`-bit fields; each block starts on a byte boundary.

use crate::bits::{BitReader, BitWriter};
use crate::cipher::{Ciphertext, CiphertextBlock};
use crate::error::{Error, Result};
use crate::model::{Clause, Literal, LiteralSpectrum, PrivateKey, PublicKey};
use crate::params::{Mode, Params};

pub const MAGIC_PUBLIC_KEY: [u8; 4] = *b"EQPK";
pub const MAGIC_PRIVATE_KEY: [u8; 4] = *b"EQSK";
pub const MAGIC_CIPHERTEXT: [u8; 4] = *b"EQCT";
pub const FORMAT_VERSION: u8 = 1;

/// Header length for keys: magic + version + mode + six u32 parameters.
pub const KEY_HEADER_LEN: usize = 4 + 1 + 1 + 6 * 4;
/// Header length for ciphertexts: the key header plus the u64 bit length.
pub const CT_HEADER_LEN: usize = KEY_HEADER_LEN + 8;

/// `⌈log2 n⌉`, with `ceil_log2(1) = 0`.
fn ceil_log2(n: u32) -> u32 {
    if n <= 1 {
        0
    } else {
        32 - (n - 1).leading_zeros()
    }
}

/// Width in bits of one serialized literal field: enough for codes up to
/// `2n - 1`.
pub fn literal_field_width(n: u32) -> u32 {
    ceil_log2(n) + 1
}

/// Private-key payload size in bytes (header excluded): `⌈n/8⌉`.
pub fn private_key_payload_bytes(params: &Params) -> u64 {
    u64::from(params.n).div_ceil(8)
}

/// Public-key payload size in bytes (header excluded). For undivided keys
/// this equals Table-style `2mn·(⌈log2 n⌉+1)` bits rounded up to bytes;
/// divided keys store fewer literal fields plus the 8-byte group-size
/// prefix.
pub fn public_key_payload_bytes(params: &Params) -> u64 {
    let fields = params.clause_count() * u64::from(params.clause_width());
    let body = (fields * u64::from(literal_field_width(params.n))).div_ceil(8);
    match params.mode {
        Mode::M2 | Mode::M3 => body,
        Mode::M4 => 8 + body,
    }
}

/// Serialized size of one ciphertext block: `2nq` bits rounded up to bytes.
pub fn ciphertext_block_bytes(params: &Params) -> u64 {
    (2 * u64::from(params.n) * u64::from(params.q)).div_ceil(8)
}

/// Ciphertext payload size (header excluded) for a message of `bit_len`
/// plaintext bits.
pub fn ciphertext_payload_bytes(params: &Params, bit_len: u64) -> u64 {
    params.block_count(bit_len) * ciphertext_block_bytes(params)
}

fn write_header(out: &mut Vec<u8>, magic: [u8; 4], params: &Params) {
    out.extend_from_slice(&magic);
    out.push(FORMAT_VERSION);
    out.push(params.mode.code());
    for field in [params.k, params.m, params.n, params.b, params.e, params.q] {
        out.extend_from_slice(&field.to_le_bytes());
    }
}

/// Parses and validates a header, returning the parameters and the payload
/// that follows.
fn read_header(data: &[u8], magic: [u8; 4]) -> Result<(Params, &[u8])> {
    if data.len() >= 4 && data[..4] != magic {
        let mut found = [0u8; 4];
        found.copy_from_slice(&data[..4]);
        return Err(Error::BadMagic { expected: magic, found });
    }
    if data.len() < KEY_HEADER_LEN {
        return Err(Error::Truncated { expected: KEY_HEADER_LEN as u64, got: data.len() as u64 });
    }
    if data[4] != FORMAT_VERSION {
        return Err(Error::UnsupportedVersion(data[4]));
    }
    let mode = Mode::from_code(data[5])
        .ok_or_else(|| Error::InvalidEncoding(format!("unknown mode byte {}", data[5])))?;
    let mut fields = [0u32; 6];
    for (i, field) in fields.iter_mut().enumerate() {
        let at = 6 + 4 * i;
        *field = u32::from_le_bytes(data[at..at + 4].try_into().expect("4-byte slice"));
    }
    let [k, m, n, b, e, q] = fields;
    let params = Params { k, m, n, b, e, q, mode };
    params.validate()?;
    Ok((params, &data[KEY_HEADER_LEN..]))
}

/// Fails unless the payload is exactly as long as the header promised.
fn check_payload_len(total_expected: u128, actual_total: usize) -> Result<()> {
    match (actual_total as u128).cmp(&total_expected) {
        std::cmp::Ordering::Less => Err(Error::Truncated {
            expected: total_expected.min(u128::from(u64::MAX)) as u64,
            got: actual_total as u64,
        }),
        std::cmp::Ordering::Greater => Err(Error::InvalidEncoding(format!(
            "{} trailing bytes after the payload",
            actual_total as u128 - total_expected
        ))),
        std::cmp::Ordering::Equal => Ok(()),
    }
}

fn check_zero_padding(reader: &mut BitReader) -> Result<()> {
    let tail = reader.remaining_bits();
    debug_assert!(tail < 8);
    if tail > 0 && reader.read(tail as u32) != Some(0) {
        return Err(Error::InvalidEncoding("padding bits are not zero".into()));
    }
    Ok(())
}

/// Serializes a private key under the given parameters.
pub fn serialize_private_key(sk: &PrivateKey, params: &Params) -> Result<Vec<u8>> {
    params.validate()?;
    if sk.n() != params.n {
        return Err(Error::ShapeMismatch(format!(
            "private key covers {} variables, parameters say n={}",
            sk.n(),
            params.n
        )));
    }
    let mut out = Vec::with_capacity(KEY_HEADER_LEN + private_key_payload_bytes(params) as usize);
    write_header(&mut out, MAGIC_PRIVATE_KEY, params);
    let mut bits = BitWriter::with_capacity_bits(u64::from(params.n));
    for &value in sk.assignment() {
        bits.write(u64::from(value), 1);
    }
    out.extend_from_slice(&bits.finish());
    Ok(out)
}

/// Parses a private key, returning it with the parameter set it was saved
/// under.
pub fn deserialize_private_key(data: &[u8]) -> Result<(PrivateKey, Params)> {
    let (params, payload) = read_header(data, MAGIC_PRIVATE_KEY)?;
    check_payload_len(
        KEY_HEADER_LEN as u128 + u128::from(private_key_payload_bytes(&params)),
        data.len(),
    )?;
    let mut reader = BitReader::new(payload);
    let assignment: Vec<bool> = (0..params.n)
        .map(|_| reader.read(1).expect("length was checked") == 1)
        .collect();
    check_zero_padding(&mut reader)?;
    Ok((PrivateKey::new(assignment)?, params))
}

/// Serializes a public key (parameters embedded).
pub fn serialize_public_key(pk: &PublicKey) -> Vec<u8> {
    let params = pk.params();
    let mut out =
        Vec::with_capacity(KEY_HEADER_LEN + public_key_payload_bytes(params) as usize);
    write_header(&mut out, MAGIC_PUBLIC_KEY, params);
    if params.mode == Mode::M4 {
        out.extend_from_slice(&(pk.k_true_clauses().len() as u32).to_le_bytes());
        out.extend_from_slice(&(pk.k_plus1_true_clauses().len() as u32).to_le_bytes());
    }
    let width = literal_field_width(params.n);
    let field_count = params.clause_count() * u64::from(params.clause_width());
    let mut bits = BitWriter::with_capacity_bits(field_count * u64::from(width));
    for clause in pk.clauses() {
        for lit in clause.literals() {
            bits.write(lit.code(), width);
        }
    }
    out.extend_from_slice(&bits.finish());
    out
}

/// Parses a public key, re-validating every structural invariant.
pub fn deserialize_public_key(data: &[u8]) -> Result<PublicKey> {
    let (params, payload) = read_header(data, MAGIC_PUBLIC_KEY)?;
    check_payload_len(
        KEY_HEADER_LEN as u128 + u128::from(public_key_payload_bytes(&params)),
        data.len(),
    )?;

    let mut payload = payload;
    if params.mode == Mode::M4 {
        let group = params.group_clause_count() as u32;
        let first = u32::from_le_bytes(payload[0..4].try_into().expect("4-byte slice"));
        let second = u32::from_le_bytes(payload[4..8].try_into().expect("4-byte slice"));
        if (first, second) != (group, group) {
            return Err(Error::InvalidEncoding(format!(
                "group sizes ({first}, {second}) do not match the parameters ({group}, {group})"
            )));
        }
        payload = &payload[8..];
    }

    let width = literal_field_width(params.n);
    let mut reader = BitReader::new(payload);
    let clause_width = params.clause_width() as usize;
    let mut clauses = Vec::with_capacity(params.clause_count() as usize);
    for _ in 0..params.clause_count() {
        let mut literals = Vec::with_capacity(clause_width);
        let mut previous_code = None;
        for _ in 0..clause_width {
            let code = reader.read(width).expect("length was checked");
            if code >= 2 * u64::from(params.n) {
                return Err(Error::InvalidEncoding(format!(
                    "literal field {code} exceeds the maximum code {} for n={}",
                    2 * params.n - 1,
                    params.n
                )));
            }
            if previous_code.is_some_and(|prev| code <= prev) {
                return Err(Error::InvalidEncoding(
                    "clause literals are not in canonical ascending order".into(),
                ));
            }
            previous_code = Some(code);
            literals.push(Literal::from_code(code));
        }
        clauses.push(Clause::new(literals)?);
    }
    check_zero_padding(&mut reader)?;
    PublicKey::new(params, clauses)
}

/// Serializes a ciphertext. Fails if any count exceeds the `q`-bit cap the
/// cipher was required to enforce, or if the block structure is
/// inconsistent.
pub fn serialize_ciphertext(ct: &Ciphertext) -> Result<Vec<u8>> {
    let params = &ct.params;
    params.validate()?;
    if ct.blocks.len() as u64 != params.block_count(ct.message_bit_length) {
        return Err(Error::CorruptCiphertext(format!(
            "{} blocks present, {} bits require {}",
            ct.blocks.len(),
            ct.message_bit_length,
            params.block_count(ct.message_bit_length)
        )));
    }
    let cap = params.count_cap();
    let mut out = Vec::with_capacity(
        CT_HEADER_LEN + ciphertext_payload_bytes(params, ct.message_bit_length) as usize,
    );
    write_header(&mut out, MAGIC_CIPHERTEXT, params);
    out.extend_from_slice(&ct.message_bit_length.to_le_bytes());
    for (i, block) in ct.blocks.iter().enumerate() {
        if block.spectrum.n() != params.n {
            return Err(Error::ShapeMismatch(format!(
                "block {i} covers {} variables, parameters say n={}",
                block.spectrum.n(),
                params.n
            )));
        }
        let mut bits = BitWriter::with_capacity_bits(2 * u64::from(params.n) * u64::from(params.q));
        for &(a, b) in block.spectrum.counts() {
            if a > cap || b > cap {
                return Err(Error::InvalidEncoding(format!(
                    "block {i} holds a count of {} which does not fit in q={} bits",
                    a.max(b),
                    params.q
                )));
            }
            bits.write(u64::from(a), params.q);
            bits.write(u64::from(b), params.q);
        }
        out.extend_from_slice(&bits.finish());
    }
    Ok(out)
}

/// Parses a ciphertext.
pub fn deserialize_ciphertext(data: &[u8]) -> Result<Ciphertext> {
    let (params, payload) = read_header(data, MAGIC_CIPHERTEXT)?;
    if payload.len() < 8 {
        return Err(Error::Truncated {
            expected: CT_HEADER_LEN as u64,
            got: data.len() as u64,
        });
    }
    let bit_len = u64::from_le_bytes(payload[..8].try_into().expect("8-byte slice"));
    // Length check happens before any allocation sized from the header.
    let block_count = params.block_count(bit_len);
    let expected = CT_HEADER_LEN as u128
        + u128::from(block_count) * u128::from(ciphertext_block_bytes(&params));
    check_payload_len(expected, data.len())?;

    let block_bytes = ciphertext_block_bytes(&params) as usize;
    let mut blocks = Vec::with_capacity(block_count as usize);
    let mut rest = &payload[8..];
    for _ in 0..block_count {
        let (raw, tail) = rest.split_at(block_bytes);
        rest = tail;
        let mut reader = BitReader::new(raw);
        let counts: Vec<(u32, u32)> = (0..params.n)
            .map(|_| {
                let a = reader.read(params.q).expect("length was checked") as u32;
                let b = reader.read(params.q).expect("length was checked") as u32;
                (a, b)
            })
            .collect();
        check_zero_padding(&mut reader)?;
        blocks.push(CiphertextBlock { spectrum: LiteralSpectrum::from_counts(counts) });
    }
    Ok(Ciphertext { params, message_bit_length: bit_len, blocks })
}

/// Renders a public key as DIMACS CNF text.
///
/// Comment lines carry the parameter set and a reminder that the exactly-k
/// cardinality side condition is not itself encoded as CNF. For divided
/// keys each clause line is preceded by a comment naming its group.
pub fn export_dimacs(pk: &PublicKey) -> Result<String> {
    let params = pk.params();
    if pk.clauses().is_empty() {
        return Err(Error::InvalidParams("cannot export an empty public key".into()));
    }
    let mut out = String::new();
    out.push_str("c eqsat equilibrium-SAT public key\n");
    out.push_str(&format!(
        "c eqsat mode={} k={} m={} n={} b={} e={} q={}\n",
        params.mode, params.k, params.m, params.n, params.b, params.e, params.q
    ));
    match params.mode {
        Mode::M2 | Mode::M3 => out.push_str(&format!(
            "c eqsat every clause has exactly k={} TRUE literals under the private assignment\n",
            params.k
        )),
        Mode::M4 => out.push_str(&format!(
            "c eqsat clauses 1..{} have k={} TRUE literals, clauses {}..{} have {}\n",
            params.group_clause_count(),
            params.k,
            params.group_clause_count() + 1,
            params.clause_count(),
            params.k + 1
        )),
    }
    out.push_str("c eqsat the exactly-k cardinality constraint is not encoded in CNF\n");
    out.push_str(&format!("p cnf {} {}\n", params.n, pk.clauses().len()));

    let group = params.group_clause_count() as usize;
    for (i, clause) in pk.clauses().iter().enumerate() {
        if params.mode == Mode::M4 {
            if i < group {
                out.push_str(&format!("c group k-true ({})\n", params.k));
            } else {
                out.push_str(&format!("c group (k+1)-true ({})\n", params.k + 1));
            }
        }
        for lit in clause.literals() {
            out.push_str(&format!("{} ", lit.dimacs()));
        }
        out.push_str("0\n");
    }
    Ok(out)
}
