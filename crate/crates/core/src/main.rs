//! Command-line front end.
//!
//! Exit codes: 0 success (including `--help`/`--version`), 1 usage error,
//! 2 cryptographic or parameter error, 3 I/O error. Diagnostics go to
//! stderr; data goes to files or stdout. Output files are written via a
//! temporary file and an atomic rename, so a failing run never leaves a
//! partial file behind.

use std::collections::HashMap;
use std::fmt;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use rand_chacha::ChaCha20Rng;

use eqsat::analysis::{self, DecryptKey};
use eqsat::{cipher, codec, keygen, rng, Error, Mode, Params, PrivateKey, PublicKey};

#[derive(Parser)]
#[command(
    name = "eqsat",
    version,
    about = "Equilibrium-SAT public-key cryptosystem",
    subcommand_required = true,
    arg_required_else_help = true
)]
struct Cli {
    /// Fixed 64-bit seed: deterministic output, NOT secure
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Parameter file (`key = value` lines, `#` comments); its values
    /// override individual flags
    #[arg(long, global = true, value_name = "FILE")]
    params: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a keypair and write the public and private key files
    Keygen(KeygenArgs),
    /// Encrypt a file under a public key
    Encrypt(EncryptArgs),
    /// Decrypt a ciphertext file with a private key
    Decrypt(DecryptArgs),
    /// Export a public key as DIMACS CNF text
    ExportDimacs(ExportDimacsArgs),
    /// Statistical and combinatorial analyses (CSV on stdout)
    Analyze(AnalyzeArgs),
    /// Benchmark keygen/encrypt/decrypt and tabulate sizes (CSV)
    Bench(BenchArgs),
}

/// The raw parameter flags shared by `keygen`, `encrypt`, and `bench`.
#[derive(Args, Default, Clone)]
struct ParamFlags {
    /// Encryption method: m2, m3, or m4
    #[arg(long)]
    mode: Option<String>,
    /// TRUE literals per clause under the private key
    #[arg(long)]
    k: Option<u32>,
    /// Number of variables
    #[arg(long)]
    n: Option<u32>,
    /// Occurrences of each literal across the key
    #[arg(long)]
    m: Option<u32>,
    /// Plaintext bits per block (m2 fixes b = 1)
    #[arg(long)]
    b: Option<u32>,
    /// Clauses extracted per block
    #[arg(long)]
    e: Option<u32>,
    /// Serialized bits per spectrum count
    #[arg(long)]
    q: Option<u32>,
}

#[derive(Args)]
struct KeygenArgs {
    #[command(flatten)]
    params: ParamFlags,
    /// Output path for the public key
    #[arg(long, value_name = "FILE")]
    out_pk: PathBuf,
    /// Output path for the private key
    #[arg(long, value_name = "FILE")]
    out_sk: PathBuf,
}

#[derive(Args)]
struct EncryptArgs {
    /// Public key file
    #[arg(long, value_name = "FILE")]
    pk: PathBuf,
    #[command(flatten)]
    params: ParamFlags,
    /// Plaintext input file
    #[arg(long = "in", value_name = "FILE")]
    input: PathBuf,
    /// Ciphertext output file
    #[arg(long, value_name = "FILE")]
    out: PathBuf,
}

#[derive(Args)]
struct DecryptArgs {
    /// Private key file
    #[arg(long, value_name = "FILE")]
    sk: PathBuf,
    /// Ciphertext input file
    #[arg(long = "in", value_name = "FILE")]
    input: PathBuf,
    /// Plaintext output file
    #[arg(long, value_name = "FILE")]
    out: PathBuf,
}

#[derive(Args)]
struct ExportDimacsArgs {
    /// Public key file
    #[arg(long, value_name = "FILE")]
    pk: PathBuf,
    /// Output file (stdout when omitted)
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct AnalyzeArgs {
    #[command(subcommand)]
    what: AnalyzeCommand,
}

#[derive(Subcommand)]
enum AnalyzeCommand {
    /// Bit-error rate of method-2 decryption under a chosen key
    Ber {
        /// Public key file
        #[arg(long, value_name = "FILE")]
        pk: PathBuf,
        /// Private key file (required for `true` and `flipped`)
        #[arg(long, value_name = "FILE")]
        sk: Option<PathBuf>,
        /// Which key decrypts each trial
        #[arg(long, value_enum, default_value_t = DecryptWith::Random)]
        decrypt_with: DecryptWith,
        /// Number of encrypted bits
        #[arg(long, default_value_t = 2000)]
        trials: u32,
        /// Clauses per extraction (defaults to the key's e)
        #[arg(long)]
        e: Option<u32>,
        /// Count cap bits (defaults to the key's q)
        #[arg(long)]
        q: Option<u32>,
    },
    /// Extraction count statistics and q-overflow frequency
    Spectrum {
        /// Public key file
        #[arg(long, value_name = "FILE")]
        pk: PathBuf,
        /// Clauses per extraction (defaults to the key's e)
        #[arg(long)]
        e: Option<u32>,
        /// Count cap bits (defaults to the key's q)
        #[arg(long)]
        q: Option<u32>,
        /// Number of extractions
        #[arg(long, default_value_t = 1000)]
        trials: u32,
    },
    /// log2 of the extraction search space C(c, e)
    Space {
        /// Public key file
        #[arg(long, value_name = "FILE")]
        pk: PathBuf,
        /// Clauses per extraction (defaults to the key's e)
        #[arg(long)]
        e: Option<u32>,
    },
    /// Brute-force recovery of all equilibrium-consistent keys (tiny n)
    Oracle {
        /// Public key file
        #[arg(long, value_name = "FILE")]
        pk: PathBuf,
        /// Private key file; reports whether it (and its complement) were
        /// recovered
        #[arg(long, value_name = "FILE")]
        sk: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum DecryptWith {
    /// A fresh uniformly random key per trial
    Random,
    /// The true private key
    True,
    /// The true key with variable x1 flipped
    Flipped,
}

#[derive(Args)]
struct BenchArgs {
    /// Benchmark one parameter set from the flags instead of the default
    /// suite
    #[command(flatten)]
    params: ParamFlags,
    /// Repetitions per measurement (median is reported)
    #[arg(long, default_value_t = 31)]
    reps: u32,
    /// CSV output file (stdout when omitted)
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

/// Process-level error with its exit code.
enum CliError {
    Usage(String),
    Crypto(Error),
    Io(std::io::Error, String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Crypto(_) => 2,
            CliError::Io(..) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(msg) => write!(f, "{msg}"),
            CliError::Crypto(e) => write!(f, "{e}"),
            CliError::Io(e, context) => write!(f, "{context}: {e}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> CliError {
        match e {
            Error::Io(io) => CliError::Io(io, "i/o error".into()),
            other => CliError::Crypto(other),
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            // Help/version go to stdout, usage errors to stderr.
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let file_params = cli.params.as_deref().map(load_param_file).transpose()?;
    let mut rand = make_rng(cli.seed);
    match cli.command {
        Command::Keygen(args) => keygen_cmd(args, file_params.as_ref(), &mut rand),
        Command::Encrypt(args) => encrypt_cmd(args, file_params.as_ref(), &mut rand),
        Command::Decrypt(args) => decrypt_cmd(args),
        Command::ExportDimacs(args) => export_dimacs_cmd(args),
        Command::Analyze(args) => analyze_cmd(args, &mut rand),
        Command::Bench(args) => bench_cmd(args, file_params.as_ref(), &mut rand),
    }
}

fn make_rng(seed: Option<u64>) -> ChaCha20Rng {
    match seed {
        Some(seed) => {
            eprintln!(
                "warning: --seed makes all output deterministic; do not use for real keys"
            );
            rng::seeded_rng(seed)
        }
        None => rng::secure_rng(),
    }
}

// ---------------------------------------------------------------------------
// Parameter resolution
// ---------------------------------------------------------------------------

/// Parses a `key = value` parameter file. `#` starts a comment.
fn load_param_file(path: &Path) -> Result<HashMap<String, String>, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Io(e, format!("cannot read parameter file {}", path.display())))?;
    let mut map = HashMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(CliError::Usage(format!(
                "{}:{}: expected `key = value`, got {raw:?}",
                path.display(),
                lineno + 1
            )));
        };
        let key = key.trim().to_string();
        if !matches!(key.as_str(), "mode" | "k" | "n" | "m" | "b" | "e" | "q") {
            return Err(CliError::Usage(format!(
                "{}:{}: unknown parameter {key:?}",
                path.display(),
                lineno + 1
            )));
        }
        map.insert(key, value.trim().to_string());
    }
    Ok(map)
}

fn parse_field<T: FromStr>(map: &HashMap<String, String>, key: &str) -> Result<Option<T>, CliError>
where
    T::Err: fmt::Display,
{
    map.get(key)
        .map(|raw| {
            raw.parse::<T>()
                .map_err(|e| CliError::Usage(format!("parameter {key} = {raw:?}: {e}")))
        })
        .transpose()
}

/// One partially specified parameter set: flags merged with the parameter
/// file (file wins), optionally backed by a base set (e.g. the public key's
/// stored parameters).
struct ResolvedFlags {
    mode: Option<Mode>,
    k: Option<u32>,
    n: Option<u32>,
    m: Option<u32>,
    b: Option<u32>,
    e: Option<u32>,
    q: Option<u32>,
}

fn merge_flags(
    flags: &ParamFlags,
    file: Option<&HashMap<String, String>>,
) -> Result<ResolvedFlags, CliError> {
    let mode_text = match file.and_then(|f| f.get("mode")) {
        Some(text) => Some(text.clone()),
        None => flags.mode.clone(),
    };
    let mode = mode_text
        .map(|text| Mode::from_str(&text).map_err(|e| CliError::Usage(e.to_string())))
        .transpose()?;
    let empty = HashMap::new();
    let file = file.unwrap_or(&empty);
    Ok(ResolvedFlags {
        mode,
        k: parse_field(file, "k")?.or(flags.k),
        n: parse_field(file, "n")?.or(flags.n),
        m: parse_field(file, "m")?.or(flags.m),
        b: parse_field(file, "b")?.or(flags.b),
        e: parse_field(file, "e")?.or(flags.e),
        q: parse_field(file, "q")?.or(flags.q),
    })
}

/// Builds the keygen parameter set: `mode`, `k`, `n`, `m` are required;
/// `b`, `e`, `q` get documented defaults.
fn keygen_params(
    flags: &ParamFlags,
    file: Option<&HashMap<String, String>>,
) -> Result<Params, CliError> {
    let f = merge_flags(flags, file)?;
    let mode = f.mode.ok_or_else(|| CliError::Usage("--mode is required".into()))?;
    let k = f.k.ok_or_else(|| CliError::Usage("--k is required".into()))?;
    let n = f.n.ok_or_else(|| CliError::Usage("--n is required".into()))?;
    let m = f.m.ok_or_else(|| CliError::Usage("--m is required".into()))?;
    let q = f.q.unwrap_or(4);

    let (b, e) = match mode {
        Mode::M2 => {
            // One bit per block; default e is 30% of the clause count.
            let c = u64::from(m) * u64::from(n) / u64::from(k.max(1));
            (f.b.unwrap_or(1), f.e.unwrap_or(default_extraction(c)))
        }
        Mode::M3 => {
            // Default b is the largest value with 2^b <= m.
            let c = u64::from(m) * u64::from(n) / u64::from(k.max(1));
            let b = f.b.unwrap_or_else(|| 31 - m.max(1).leading_zeros().min(31));
            (b, f.e.unwrap_or(default_extraction(c)))
        }
        Mode::M4 => {
            // e must equal 2^b; derive whichever of the two is missing.
            let g = u64::from(m) * u64::from(n) / u64::from(2 * k + 1);
            match (f.b, f.e) {
                (Some(b), Some(e)) => (b, e),
                (Some(b), None) if b < 32 => (b, 1u32 << b),
                (Some(b), None) => (b, u32::MAX),
                (None, Some(e)) => (e.trailing_zeros(), e),
                (None, None) => {
                    if g == 0 {
                        return Err(CliError::Usage(
                            "m4 needs m*n >= 2k+1 to hold at least one clause per group".into(),
                        ));
                    }
                    let b = 63 - g.leading_zeros().min(63);
                    (b, 1u32 << b)
                }
            }
        }
    };
    Ok(Params::new(mode, k, n, m, b, e, q)?)
}

fn default_extraction(c: u64) -> u32 {
    (c * 3 / 10).clamp(1, u64::from(u32::MAX)) as u32
}

/// Builds the cipher parameter set for `encrypt`: the key's stored
/// parameters, with any explicitly given flag or file value overriding.
fn cipher_params(
    base: &Params,
    flags: &ParamFlags,
    file: Option<&HashMap<String, String>>,
) -> Result<Params, CliError> {
    let f = merge_flags(flags, file)?;
    let mode = f.mode.unwrap_or(base.mode);
    Ok(Params::new(
        mode,
        f.k.unwrap_or(base.k),
        f.n.unwrap_or(base.n),
        f.m.unwrap_or(base.m),
        f.b.unwrap_or(if mode == Mode::M2 { 1 } else { base.b }),
        f.e.unwrap_or(base.e),
        f.q.unwrap_or(base.q),
    )?)
}

// ---------------------------------------------------------------------------
// File helpers
// ---------------------------------------------------------------------------

fn read_file(path: &Path) -> Result<Vec<u8>, CliError> {
    std::fs::read(path)
        .map_err(|e| CliError::Io(e, format!("cannot read {}", path.display())))
}

/// Writes via a temporary file in the target directory plus an atomic
/// rename; interrupted or failing runs never leave partial output.
fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    let context = |e: std::io::Error| CliError::Io(e, format!("cannot write {}", path.display()));
    let dir = match path.parent() {
        Some(parent) if !parent.as_os_str().is_empty() => parent,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(context)?;
    tmp.write_all(bytes).map_err(context)?;
    tmp.persist(path).map_err(|e| context(e.error))?;
    Ok(())
}

fn load_public_key(path: &Path) -> Result<PublicKey, CliError> {
    Ok(codec::deserialize_public_key(&read_file(path)?)?)
}

fn load_private_key(path: &Path) -> Result<(PrivateKey, Params), CliError> {
    Ok(codec::deserialize_private_key(&read_file(path)?)?)
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(path) => write_atomic(path, text.as_bytes()),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

// ---------------------------------------------------------------------------
// Subcommands
// ---------------------------------------------------------------------------

fn keygen_cmd(
    args: KeygenArgs,
    file_params: Option<&HashMap<String, String>>,
    rand: &mut ChaCha20Rng,
) -> Result<(), CliError> {
    let params = keygen_params(&args.params, file_params)?;
    let (pk, sk) = keygen::generate_keypair(&params, rand)?;
    let pk_bytes = codec::serialize_public_key(&pk);
    let sk_bytes = codec::serialize_private_key(&sk, &params)?;
    write_atomic(&args.out_pk, &pk_bytes)?;
    write_atomic(&args.out_sk, &sk_bytes)?;
    eprintln!(
        "wrote {} ({} bytes) and {} ({} bytes) [{}]",
        args.out_pk.display(),
        pk_bytes.len(),
        args.out_sk.display(),
        sk_bytes.len(),
        params
    );
    Ok(())
}

fn encrypt_cmd(
    args: EncryptArgs,
    file_params: Option<&HashMap<String, String>>,
    rand: &mut ChaCha20Rng,
) -> Result<(), CliError> {
    let pk = load_public_key(&args.pk)?;
    let params = cipher_params(pk.params(), &args.params, file_params)?;
    let plaintext = read_file(&args.input)?;
    let ct = cipher::encrypt_message(&pk, &params, &plaintext, rand)?;
    let bytes = codec::serialize_ciphertext(&ct)?;
    write_atomic(&args.out, &bytes)?;
    eprintln!(
        "wrote {} ({} bytes, {} blocks) [{}]",
        args.out.display(),
        bytes.len(),
        ct.blocks.len(),
        params
    );
    Ok(())
}

fn decrypt_cmd(args: DecryptArgs) -> Result<(), CliError> {
    let (sk, _) = load_private_key(&args.sk)?;
    let ct = codec::deserialize_ciphertext(&read_file(&args.input)?)?;
    let plaintext = cipher::decrypt_message(&ct, &sk)?;
    write_atomic(&args.out, &plaintext)?;
    eprintln!("wrote {} ({} bytes)", args.out.display(), plaintext.len());
    Ok(())
}

fn export_dimacs_cmd(args: ExportDimacsArgs) -> Result<(), CliError> {
    let pk = load_public_key(&args.pk)?;
    emit(args.out.as_deref(), &codec::export_dimacs(&pk)?)
}

fn analyze_cmd(args: AnalyzeArgs, rand: &mut ChaCha20Rng) -> Result<(), CliError> {
    let mut csv = String::from("metric,value\n");
    match args.what {
        AnalyzeCommand::Ber { pk, sk, decrypt_with, trials, e, q } => {
            let pk = load_public_key(&pk)?;
            let base = *pk.params();
            let params = Params::new(
                Mode::M2,
                base.k,
                base.n,
                base.m,
                1,
                e.unwrap_or(base.e),
                q.unwrap_or(base.q),
            )?;
            let stored;
            let flipped;
            let key = match decrypt_with {
                DecryptWith::Random => DecryptKey::FreshRandom,
                DecryptWith::True | DecryptWith::Flipped => {
                    let path = sk.as_deref().ok_or_else(|| {
                        CliError::Usage("--sk is required for --decrypt-with true|flipped".into())
                    })?;
                    stored = load_private_key(path)?.0;
                    if decrypt_with == DecryptWith::Flipped {
                        let mut bits = stored.assignment().to_vec();
                        bits[0] = !bits[0];
                        flipped = PrivateKey::new(bits)?;
                        DecryptKey::Fixed(&flipped)
                    } else {
                        DecryptKey::Fixed(&stored)
                    }
                }
            };
            let ber = analysis::random_key_ber(&pk, &params, key, trials, rand)?;
            csv.push_str(&format!("trials,{trials}\nber,{ber}\n"));
        }
        AnalyzeCommand::Spectrum { pk, e, q, trials } => {
            let pk = load_public_key(&pk)?;
            let e = e.unwrap_or(pk.params().e);
            let q = q.unwrap_or(pk.params().q);
            let stats = analysis::spectrum_stats(&pk, e, q, trials, rand)?;
            csv.push_str(&format!(
                "trials,{}\nmax_count,{}\noverflow_fraction,{}\nmean_abs_difference,{}\n",
                stats.trials, stats.max_count, stats.overflow_fraction, stats.mean_abs_difference
            ));
            for (d, count) in stats.difference_histogram.iter().enumerate() {
                csv.push_str(&format!("diff_{d},{count}\n"));
            }
        }
        AnalyzeCommand::Space { pk, e } => {
            let pk = load_public_key(&pk)?;
            let mut params = *pk.params();
            if let Some(e) = e {
                params.e = e;
            }
            let bits = analysis::search_space_bits(&params)?;
            csv.push_str(&format!(
                "clause_count,{}\ne,{}\nsearch_space_bits,{bits}\n",
                params.clause_count(),
                params.e
            ));
        }
        AnalyzeCommand::Oracle { pk, sk } => {
            let pk = load_public_key(&pk)?;
            let keys = analysis::brute_force_keys(&pk)?;
            csv.push_str(&format!("keys_found,{}\n", keys.len()));
            if let Some(path) = sk {
                let (planted, _) = load_private_key(&path)?;
                csv.push_str(&format!(
                    "planted_recovered,{}\ncomplement_recovered,{}\n",
                    keys.contains(&planted),
                    keys.contains(&planted.complement())
                ));
            }
            for (i, key) in keys.iter().enumerate() {
                let bits: String = key
                    .assignment()
                    .iter()
                    .map(|&v| if v { '1' } else { '0' })
                    .collect();
                csv.push_str(&format!("key_{i},{bits}\n"));
            }
        }
    }
    print!("{csv}");
    Ok(())
}

fn bench_cmd(
    args: BenchArgs,
    file_params: Option<&HashMap<String, String>>,
    rand: &mut ChaCha20Rng,
) -> Result<(), CliError> {
    let sets = if args.params.mode.is_some()
        || file_params.is_some_and(|f| f.contains_key("mode"))
    {
        vec![keygen_params(&args.params, file_params)?]
    } else {
        vec![
            Params::new(Mode::M2, 4, 512, 20, 1, 768, 4)?,
            Params::new(Mode::M2, 4, 1024, 20, 1, 768, 4)?,
            Params::new(Mode::M3, 4, 512, 20, 4, 768, 4)?,
        ]
    };
    let report = analysis::run_bench(&sets, args.reps, rand)?;
    emit(args.out.as_deref(), &report.to_csv())
}
