//! C ABI for the `eqsat` crate.
//!
//! Everything that crosses the boundary is either a plain value
//! ([`EqsatParams`], [`EqsatStatus`]) or an opaque handle allocated and
//! freed by this library. Fallible calls return [`EqsatStatus`] and write
//! their results through out-pointers only on [`EqsatStatus::Ok`]. Byte
//! buffers returned here must be released with [`eqsat_bytes_free`],
//! handles with their matching `*_free` function; all free functions
//! accept null as a no-op.
//!
//! The generated header lives in `include/eqsat.h`.

use std::os::raw::c_char;
use std::ptr;

use eqsat::{cipher, codec, keygen, rng, Ciphertext, Mode, Params, PrivateKey, PublicKey};

/// Outcome of a call. Anything other than `Ok` means the out-pointers were
/// left untouched.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EqsatStatus {
    /// The call succeeded.
    Ok = 0,
    /// A required pointer argument was null.
    NullArgument = 1,
    /// The parameter set is inconsistent or out of range.
    InvalidParams = 2,
    /// Key generation exhausted its retry budget.
    GenerationFailed = 3,
    /// Encryption exhausted its resample budget.
    EncryptionFailed = 4,
    /// The ciphertext decodes to an out-of-range value.
    CorruptCiphertext = 5,
    /// Serialized bytes are malformed, truncated, or non-canonical.
    InvalidEncoding = 6,
    /// Object dimensions disagree (e.g. key length vs. ciphertext width).
    ShapeMismatch = 7,
}

fn status_of(err: &eqsat::Error) -> EqsatStatus {
    use eqsat::Error::*;
    match err {
        InvalidParams(_) => EqsatStatus::InvalidParams,
        GenerationFailure(_) => EqsatStatus::GenerationFailed,
        EncryptionFailure(_) => EqsatStatus::EncryptionFailed,
        CorruptCiphertext(_) => EqsatStatus::CorruptCiphertext,
        ShapeMismatch(_) => EqsatStatus::ShapeMismatch,
        MalformedClause(_) | BadMagic { .. } | UnsupportedVersion(_) | Truncated { .. }
        | InvalidEncoding(_) | Io(_) => EqsatStatus::InvalidEncoding,
    }
}

/// Cryptosystem parameters in C layout. `mode` is the numeric method tag:
/// 2, 3, or 4.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct EqsatParams {
    pub mode: u8,
    pub k: u32,
    pub n: u32,
    pub m: u32,
    pub b: u32,
    pub e: u32,
    pub q: u32,
}

impl EqsatParams {
    fn to_params(self) -> Result<Params, EqsatStatus> {
        let mode = Mode::from_code(self.mode).ok_or(EqsatStatus::InvalidParams)?;
        Params::new(mode, self.k, self.n, self.m, self.b, self.e, self.q)
            .map_err(|e| status_of(&e))
    }

    fn from_params(p: &Params) -> EqsatParams {
        EqsatParams { mode: p.mode.code(), k: p.k, n: p.n, m: p.m, b: p.b, e: p.e, q: p.q }
    }
}

/// Opaque public key handle.
pub struct EqsatPublicKey {
    inner: PublicKey,
}

/// Opaque private key handle. Carries the parameter set it was generated
/// under so it can be serialized on its own.
pub struct EqsatPrivateKey {
    inner: PrivateKey,
    params: Params,
}

/// Opaque ciphertext handle.
pub struct EqsatCiphertext {
    inner: Ciphertext,
}

unsafe fn write_out<T>(out: *mut T, value: T) {
    unsafe { ptr::write(out, value) };
}

unsafe fn export_bytes(bytes: Vec<u8>, out: *mut *mut u8, len_out: *mut usize) -> EqsatStatus {
    let boxed = bytes.into_boxed_slice();
    let len = boxed.len();
    unsafe {
        write_out(out, Box::into_raw(boxed).cast::<u8>());
        write_out(len_out, len);
    }
    EqsatStatus::Ok
}

/// Reads a caller-supplied buffer. Null is accepted when `len` is zero so
/// that empty messages need no allocation on the C side.
unsafe fn input_slice<'a>(data: *const u8, len: usize) -> Result<&'a [u8], EqsatStatus> {
    if len == 0 {
        return Ok(&[]);
    }
    if data.is_null() {
        return Err(EqsatStatus::NullArgument);
    }
    Ok(unsafe { std::slice::from_raw_parts(data, len) })
}

fn keygen_impl(
    params: *const EqsatParams,
    pk_out: *mut *mut EqsatPublicKey,
    sk_out: *mut *mut EqsatPrivateKey,
    rng: &mut dyn rand::RngCore,
) -> EqsatStatus {
    if params.is_null() || pk_out.is_null() || sk_out.is_null() {
        return EqsatStatus::NullArgument;
    }
    let params = match unsafe { *params }.to_params() {
        Ok(p) => p,
        Err(status) => return status,
    };
    match keygen::generate_keypair(&params, rng) {
        Ok((pk, sk)) => unsafe {
            write_out(pk_out, Box::into_raw(Box::new(EqsatPublicKey { inner: pk })));
            write_out(sk_out, Box::into_raw(Box::new(EqsatPrivateKey { inner: sk, params })));
            EqsatStatus::Ok
        },
        Err(e) => status_of(&e),
    }
}

/// Generates a fresh key pair from the operating-system entropy source.
///
/// # Safety
/// `params` must point to a valid [`EqsatParams`]; `pk_out` and `sk_out`
/// must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn eqsat_keygen(
    params: *const EqsatParams,
    pk_out: *mut *mut EqsatPublicKey,
    sk_out: *mut *mut EqsatPrivateKey,
) -> EqsatStatus {
    keygen_impl(params, pk_out, sk_out, &mut rng::secure_rng())
}

/// Generates a key pair from a fixed seed. Deterministic; intended for
/// tests and reproducible fixtures, not for production keys.
///
/// # Safety
/// Same contract as [`eqsat_keygen`].
#[no_mangle]
pub unsafe extern "C" fn eqsat_keygen_seeded(
    params: *const EqsatParams,
    seed: u64,
    pk_out: *mut *mut EqsatPublicKey,
    sk_out: *mut *mut EqsatPrivateKey,
) -> EqsatStatus {
    keygen_impl(params, pk_out, sk_out, &mut rng::seeded_rng(seed))
}

/// Checks that `sk` actually satisfies the equilibrium structure of `pk`.
/// Writes `true` to `ok_out` when every clause checks out.
///
/// # Safety
/// All three pointers must be valid; the handles must have come from this
/// library.
#[no_mangle]
pub unsafe extern "C" fn eqsat_keypair_verify(
    pk: *const EqsatPublicKey,
    sk: *const EqsatPrivateKey,
    ok_out: *mut bool,
) -> EqsatStatus {
    if pk.is_null() || sk.is_null() || ok_out.is_null() {
        return EqsatStatus::NullArgument;
    }
    let report = keygen::verify_keypair(unsafe { &(*pk).inner }, unsafe { &(*sk).inner });
    unsafe { write_out(ok_out, report.passed) };
    EqsatStatus::Ok
}

/// Copies the parameter set embedded in a public key.
///
/// # Safety
/// `pk` must be a live handle from this library; `params_out` must be
/// valid for writes.
#[no_mangle]
pub unsafe extern "C" fn eqsat_public_key_params(
    pk: *const EqsatPublicKey,
    params_out: *mut EqsatParams,
) -> EqsatStatus {
    if pk.is_null() || params_out.is_null() {
        return EqsatStatus::NullArgument;
    }
    let params = EqsatParams::from_params(unsafe { (*pk).inner.params() });
    unsafe { write_out(params_out, params) };
    EqsatStatus::Ok
}

fn encrypt_impl(
    pk: *const EqsatPublicKey,
    params: *const EqsatParams,
    msg: *const u8,
    msg_len: usize,
    ct_out: *mut *mut EqsatCiphertext,
    rng: &mut dyn rand::RngCore,
) -> EqsatStatus {
    if pk.is_null() || ct_out.is_null() {
        return EqsatStatus::NullArgument;
    }
    let pk = unsafe { &(*pk).inner };
    let params = if params.is_null() {
        *pk.params()
    } else {
        match unsafe { *params }.to_params() {
            Ok(p) => p,
            Err(status) => return status,
        }
    };
    let plaintext = match unsafe { input_slice(msg, msg_len) } {
        Ok(s) => s,
        Err(status) => return status,
    };
    match cipher::encrypt_message(pk, &params, plaintext, rng) {
        Ok(ct) => unsafe {
            write_out(ct_out, Box::into_raw(Box::new(EqsatCiphertext { inner: ct })));
            EqsatStatus::Ok
        },
        Err(e) => status_of(&e),
    }
}

/// Encrypts a byte string under `pk`. Pass null for `params` to use the
/// parameter set embedded in the key; pass an override to encrypt under a
/// different method or extraction size (the key material permitting).
/// `msg` may be null when `msg_len` is zero.
///
/// # Safety
/// `pk` must be a live handle; `msg` must point to `msg_len` readable
/// bytes (or be null with `msg_len == 0`); `ct_out` must be valid for
/// writes.
#[no_mangle]
pub unsafe extern "C" fn eqsat_encrypt(
    pk: *const EqsatPublicKey,
    params: *const EqsatParams,
    msg: *const u8,
    msg_len: usize,
    ct_out: *mut *mut EqsatCiphertext,
) -> EqsatStatus {
    encrypt_impl(pk, params, msg, msg_len, ct_out, &mut rng::secure_rng())
}

/// Deterministic variant of [`eqsat_encrypt`] for tests and fixtures.
///
/// # Safety
/// Same contract as [`eqsat_encrypt`].
#[no_mangle]
pub unsafe extern "C" fn eqsat_encrypt_seeded(
    pk: *const EqsatPublicKey,
    params: *const EqsatParams,
    msg: *const u8,
    msg_len: usize,
    seed: u64,
    ct_out: *mut *mut EqsatCiphertext,
) -> EqsatStatus {
    encrypt_impl(pk, params, msg, msg_len, ct_out, &mut rng::seeded_rng(seed))
}

/// Decrypts a ciphertext. On success `msg_out` receives a buffer of
/// exactly `msg_len_out` bytes; release it with [`eqsat_bytes_free`].
///
/// # Safety
/// `sk` and `ct` must be live handles; `msg_out` and `msg_len_out` must be
/// valid for writes.
#[no_mangle]
pub unsafe extern "C" fn eqsat_decrypt(
    sk: *const EqsatPrivateKey,
    ct: *const EqsatCiphertext,
    msg_out: *mut *mut u8,
    msg_len_out: *mut usize,
) -> EqsatStatus {
    if sk.is_null() || ct.is_null() || msg_out.is_null() || msg_len_out.is_null() {
        return EqsatStatus::NullArgument;
    }
    match cipher::decrypt_message(unsafe { &(*ct).inner }, unsafe { &(*sk).inner }) {
        Ok(plaintext) => unsafe { export_bytes(plaintext, msg_out, msg_len_out) },
        Err(e) => status_of(&e),
    }
}

/// Serializes a public key into the container format.
///
/// # Safety
/// `pk` must be a live handle; `out` and `len_out` must be valid for
/// writes.
#[no_mangle]
pub unsafe extern "C" fn eqsat_public_key_to_bytes(
    pk: *const EqsatPublicKey,
    out: *mut *mut u8,
    len_out: *mut usize,
) -> EqsatStatus {
    if pk.is_null() || out.is_null() || len_out.is_null() {
        return EqsatStatus::NullArgument;
    }
    let bytes = codec::serialize_public_key(unsafe { &(*pk).inner });
    unsafe { export_bytes(bytes, out, len_out) }
}

/// Parses a public key from the container format. Validation is strict:
/// non-canonical encodings are rejected, not repaired.
///
/// # Safety
/// `data` must point to `len` readable bytes; `out` must be valid for
/// writes.
#[no_mangle]
pub unsafe extern "C" fn eqsat_public_key_from_bytes(
    data: *const u8,
    len: usize,
    out: *mut *mut EqsatPublicKey,
) -> EqsatStatus {
    if out.is_null() {
        return EqsatStatus::NullArgument;
    }
    let bytes = match unsafe { input_slice(data, len) } {
        Ok(s) => s,
        Err(status) => return status,
    };
    match codec::deserialize_public_key(bytes) {
        Ok(pk) => unsafe {
            write_out(out, Box::into_raw(Box::new(EqsatPublicKey { inner: pk })));
            EqsatStatus::Ok
        },
        Err(e) => status_of(&e),
    }
}

/// Serializes a private key into the container format.
///
/// # Safety
/// Same contract as [`eqsat_public_key_to_bytes`].
#[no_mangle]
pub unsafe extern "C" fn eqsat_private_key_to_bytes(
    sk: *const EqsatPrivateKey,
    out: *mut *mut u8,
    len_out: *mut usize,
) -> EqsatStatus {
    if sk.is_null() || out.is_null() || len_out.is_null() {
        return EqsatStatus::NullArgument;
    }
    let sk = unsafe { &*sk };
    match codec::serialize_private_key(&sk.inner, &sk.params) {
        Ok(bytes) => unsafe { export_bytes(bytes, out, len_out) },
        Err(e) => status_of(&e),
    }
}

/// Parses a private key from the container format.
///
/// # Safety
/// Same contract as [`eqsat_public_key_from_bytes`].
#[no_mangle]
pub unsafe extern "C" fn eqsat_private_key_from_bytes(
    data: *const u8,
    len: usize,
    out: *mut *mut EqsatPrivateKey,
) -> EqsatStatus {
    if out.is_null() {
        return EqsatStatus::NullArgument;
    }
    let bytes = match unsafe { input_slice(data, len) } {
        Ok(s) => s,
        Err(status) => return status,
    };
    match codec::deserialize_private_key(bytes) {
        Ok((key, params)) => unsafe {
            write_out(out, Box::into_raw(Box::new(EqsatPrivateKey { inner: key, params })));
            EqsatStatus::Ok
        },
        Err(e) => status_of(&e),
    }
}

/// Serializes a ciphertext into the container format.
///
/// # Safety
/// Same contract as [`eqsat_public_key_to_bytes`].
#[no_mangle]
pub unsafe extern "C" fn eqsat_ciphertext_to_bytes(
    ct: *const EqsatCiphertext,
    out: *mut *mut u8,
    len_out: *mut usize,
) -> EqsatStatus {
    if ct.is_null() || out.is_null() || len_out.is_null() {
        return EqsatStatus::NullArgument;
    }
    match codec::serialize_ciphertext(unsafe { &(*ct).inner }) {
        Ok(bytes) => unsafe { export_bytes(bytes, out, len_out) },
        Err(e) => status_of(&e),
    }
}

/// Parses a ciphertext from the container format.
///
/// # Safety
/// Same contract as [`eqsat_public_key_from_bytes`].
#[no_mangle]
pub unsafe extern "C" fn eqsat_ciphertext_from_bytes(
    data: *const u8,
    len: usize,
    out: *mut *mut EqsatCiphertext,
) -> EqsatStatus {
    if out.is_null() {
        return EqsatStatus::NullArgument;
    }
    let bytes = match unsafe { input_slice(data, len) } {
        Ok(s) => s,
        Err(status) => return status,
    };
    match codec::deserialize_ciphertext(bytes) {
        Ok(ct) => unsafe {
            write_out(out, Box::into_raw(Box::new(EqsatCiphertext { inner: ct })));
            EqsatStatus::Ok
        },
        Err(e) => status_of(&e),
    }
}

/// Renders a public key as DIMACS CNF text. The buffer is UTF-8 and not
/// NUL-terminated; release it with [`eqsat_bytes_free`].
///
/// # Safety
/// Same contract as [`eqsat_public_key_to_bytes`].
#[no_mangle]
pub unsafe extern "C" fn eqsat_public_key_to_dimacs(
    pk: *const EqsatPublicKey,
    out: *mut *mut u8,
    len_out: *mut usize,
) -> EqsatStatus {
    if pk.is_null() || out.is_null() || len_out.is_null() {
        return EqsatStatus::NullArgument;
    }
    match codec::export_dimacs(unsafe { &(*pk).inner }) {
        Ok(text) => unsafe { export_bytes(text.into_bytes(), out, len_out) },
        Err(e) => status_of(&e),
    }
}

/// Releases a public key handle. Null is a no-op.
///
/// # Safety
/// `pk` must be null or a handle returned by this library that has not
/// already been freed.
#[no_mangle]
pub unsafe extern "C" fn eqsat_public_key_free(pk: *mut EqsatPublicKey) {
    if !pk.is_null() {
        drop(unsafe { Box::from_raw(pk) });
    }
}

/// Releases a private key handle. Null is a no-op.
///
/// # Safety
/// Same contract as [`eqsat_public_key_free`].
#[no_mangle]
pub unsafe extern "C" fn eqsat_private_key_free(sk: *mut EqsatPrivateKey) {
    if !sk.is_null() {
        drop(unsafe { Box::from_raw(sk) });
    }
}

/// Releases a ciphertext handle. Null is a no-op.
///
/// # Safety
/// Same contract as [`eqsat_public_key_free`].
#[no_mangle]
pub unsafe extern "C" fn eqsat_ciphertext_free(ct: *mut EqsatCiphertext) {
    if !ct.is_null() {
        drop(unsafe { Box::from_raw(ct) });
    }
}

/// Releases a byte buffer produced by this library. `len` must be the
/// length that was written alongside the pointer. Null is a no-op.
///
/// # Safety
/// `(ptr, len)` must be exactly a pair returned by one of the `*_to_bytes`,
/// `eqsat_decrypt`, or `eqsat_public_key_to_dimacs` calls, unfreed.
#[no_mangle]
pub unsafe extern "C" fn eqsat_bytes_free(ptr: *mut u8, len: usize) {
    if !ptr.is_null() {
        drop(unsafe { Box::from_raw(ptr::slice_from_raw_parts_mut(ptr, len)) });
    }
}

/// Returns a static, NUL-terminated name for a status code.
#[no_mangle]
pub extern "C" fn eqsat_status_name(status: EqsatStatus) -> *const c_char {
    let name: &'static [u8] = match status {
        EqsatStatus::Ok => b"ok\0",
        EqsatStatus::NullArgument => b"null argument\0",
        EqsatStatus::InvalidParams => b"invalid parameters\0",
        EqsatStatus::GenerationFailed => b"key generation failed\0",
        EqsatStatus::EncryptionFailed => b"encryption failed\0",
        EqsatStatus::CorruptCiphertext => b"corrupt ciphertext\0",
        EqsatStatus::InvalidEncoding => b"invalid encoding\0",
        EqsatStatus::ShapeMismatch => b"shape mismatch\0",
    };
    name.as_ptr().cast()
}
