//! End-to-end tests of the `eqsat` binary: the documented round trip, the
//! exit-status contract, determinism under `--seed`, and parameter-file
//! precedence.

use std::path::Path;
use std::process::{Command, Output};

use tempfile::tempdir;

const BIN: &str = env!("CARGO_BIN_EXE_eqsat");

fn run(dir: &Path, args: &[&str]) -> Output {
    Command::new(BIN)
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("no signal")
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn keygen_encrypt_decrypt_round_trip() {
    let dir = tempdir().unwrap();
    let dir = dir.path();

    let out = run(
        dir,
        &[
            "keygen", "--mode", "m2", "--n", "512", "--m", "20", "--k", "4", "--seed", "7",
            "--out-pk", "pk.eqpk", "--out-sk", "sk.eqsk",
        ],
    );
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert!(stderr(&out).contains("deterministic"), "seed warning expected");
    assert_eq!(std::fs::metadata(dir.join("pk.eqpk")).unwrap().len(), 25_630);
    assert_eq!(std::fs::metadata(dir.join("sk.eqsk")).unwrap().len(), 94);

    let msg: Vec<u8> = (0u16..300).map(|i| (i % 251) as u8).collect();
    std::fs::write(dir.join("msg.bin"), &msg).unwrap();

    // The M2 key carries M3 traffic when the encryption flags say so.
    let out = run(
        dir,
        &[
            "encrypt", "--pk", "pk.eqpk", "--mode", "m3", "--b", "4", "--e", "768", "--q", "4",
            "--seed", "8", "--in", "msg.bin", "--out", "ct.eqct",
        ],
    );
    assert_eq!(code(&out), 0, "{}", stderr(&out));

    let out = run(dir, &["decrypt", "--sk", "sk.eqsk", "--in", "ct.eqct", "--out", "msg2.bin"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert_eq!(std::fs::read(dir.join("msg2.bin")).unwrap(), msg);
}

#[test]
fn exit_status_contract() {
    let dir = tempdir().unwrap();
    let dir = dir.path();

    // 0: success, including help and version.
    assert_eq!(code(&run(dir, &["--help"])), 0);
    assert_eq!(code(&run(dir, &["--version"])), 0);

    // 1: usage errors — unknown flags, unknown subcommands, missing
    // required flags, malformed parameter files.
    assert_eq!(code(&run(dir, &["keygen", "--bogus"])), 1);
    assert_eq!(code(&run(dir, &["frobnicate"])), 1);
    assert_eq!(code(&run(dir, &["keygen", "--mode", "m2", "--out-pk", "a", "--out-sk", "b"])), 1);
    std::fs::write(dir.join("bad.params"), "mode m2\n").unwrap();
    let out = run(dir, &["keygen", "--params", "bad.params", "--out-pk", "a", "--out-sk", "b"]);
    assert_eq!(code(&out), 1);

    // 2: crypto/parameter errors — infeasible parameter sets.
    let out = run(
        dir,
        &[
            "keygen", "--mode", "m2", "--n", "4", "--k", "4", "--m", "2",
            "--out-pk", "a", "--out-sk", "b",
        ],
    );
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("error"), "diagnostic goes to stderr");

    // 3: I/O errors — missing input files.
    assert_eq!(code(&run(dir, &["decrypt", "--sk", "no.eqsk", "--in", "no.eqct", "--out", "x"])), 3);
    assert_eq!(code(&run(dir, &["export-dimacs", "--pk", "no.eqpk", "--out", "x.cnf"])), 3);
}

#[test]
fn same_seed_same_bytes() {
    let dir = tempdir().unwrap();
    let dir = dir.path();
    let keygen = |pk: &str, sk: &str| {
        let out = run(
            dir,
            &[
                "keygen", "--mode", "m3", "--n", "64", "--m", "8", "--k", "4", "--b", "3",
                "--seed", "99", "--out-pk", pk, "--out-sk", sk,
            ],
        );
        assert_eq!(code(&out), 0, "{}", stderr(&out));
    };
    keygen("a.eqpk", "a.eqsk");
    keygen("b.eqpk", "b.eqsk");
    assert_eq!(
        std::fs::read(dir.join("a.eqpk")).unwrap(),
        std::fs::read(dir.join("b.eqpk")).unwrap()
    );
    assert_eq!(
        std::fs::read(dir.join("a.eqsk")).unwrap(),
        std::fs::read(dir.join("b.eqsk")).unwrap()
    );

    std::fs::write(dir.join("m.bin"), b"determinism check").unwrap();
    let encrypt = |ct: &str| {
        let out = run(
            dir,
            &["encrypt", "--pk", "a.eqpk", "--seed", "5", "--in", "m.bin", "--out", ct],
        );
        assert_eq!(code(&out), 0, "{}", stderr(&out));
    };
    encrypt("a.eqct");
    encrypt("b.eqct");
    assert_eq!(
        std::fs::read(dir.join("a.eqct")).unwrap(),
        std::fs::read(dir.join("b.eqct")).unwrap()
    );
}

#[test]
fn params_file_overrides_flags() {
    let dir = tempdir().unwrap();
    let dir = dir.path();
    std::fs::write(
        dir.join("gen.params"),
        "# generation profile\nmode = m2\nn = 64\nm = 8\nk = 4\n",
    )
    .unwrap();

    // Flags contradict the file; the file wins, so the result must match a
    // run driven by the file alone.
    let out = run(
        dir,
        &[
            "keygen", "--params", "gen.params", "--n", "32", "--m", "4", "--seed", "1",
            "--out-pk", "flagged.eqpk", "--out-sk", "flagged.eqsk",
        ],
    );
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let out = run(
        dir,
        &[
            "keygen", "--params", "gen.params", "--seed", "1",
            "--out-pk", "plain.eqpk", "--out-sk", "plain.eqsk",
        ],
    );
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert_eq!(
        std::fs::read(dir.join("flagged.eqpk")).unwrap(),
        std::fs::read(dir.join("plain.eqpk")).unwrap()
    );

    let out = run(dir, &["export-dimacs", "--pk", "plain.eqpk", "--out", "key.cnf"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let cnf = std::fs::read_to_string(dir.join("key.cnf")).unwrap();
    assert!(cnf.contains("p cnf 64 128"), "file-driven dimensions expected");
}

#[test]
fn failed_commands_leave_no_partial_output() {
    let dir = tempdir().unwrap();
    let dir = dir.path();

    let out = run(
        dir,
        &[
            "keygen", "--mode", "m2", "--n", "64", "--m", "8", "--k", "4", "--seed", "3",
            "--out-pk", "pk.eqpk", "--out-sk", "sk.eqsk",
        ],
    );
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let out = run(
        dir,
        &[
            "keygen", "--mode", "m2", "--n", "128", "--m", "8", "--k", "4", "--seed", "4",
            "--out-pk", "other.eqpk", "--out-sk", "other.eqsk",
        ],
    );
    assert_eq!(code(&out), 0, "{}", stderr(&out));

    std::fs::write(dir.join("m.bin"), b"payload").unwrap();
    let out = run(
        dir,
        &["encrypt", "--pk", "pk.eqpk", "--seed", "5", "--in", "m.bin", "--out", "ct.eqct"],
    );
    assert_eq!(code(&out), 0, "{}", stderr(&out));

    // Decrypting with a key for the wrong variable count fails cleanly and
    // must not leave a partial plaintext behind.
    let out = run(dir, &["decrypt", "--sk", "other.eqsk", "--in", "ct.eqct", "--out", "bad.bin"]);
    assert_eq!(code(&out), 2, "{}", stderr(&out));
    assert!(!dir.join("bad.bin").exists());
}

#[test]
fn analyze_reports_are_csv() {
    let dir = tempdir().unwrap();
    let dir = dir.path();
    let out = run(
        dir,
        &[
            "keygen", "--mode", "m2", "--n", "64", "--m", "8", "--k", "4", "--seed", "3",
            "--out-pk", "pk.eqpk", "--out-sk", "sk.eqsk",
        ],
    );
    assert_eq!(code(&out), 0, "{}", stderr(&out));

    let out = run(dir, &["analyze", "space", "--pk", "pk.eqpk"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let csv = String::from_utf8(out.stdout).unwrap();
    assert!(csv.starts_with("metric,value\n"));
    assert!(csv.contains("search_space_bits,"));

    let out = run(
        dir,
        &["analyze", "ber", "--pk", "pk.eqpk", "--trials", "64", "--seed", "2"],
    );
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert!(String::from_utf8(out.stdout).unwrap().contains("ber,"));

    let out = run(
        dir,
        &["analyze", "oracle", "--pk", "pk.eqpk", "--sk", "sk.eqsk"],
    );
    // n=64 is far past the brute-force bound; the CLI refuses rather than
    // looping for years.
    assert_eq!(code(&out), 2);

    let out = run(
        dir,
        &["bench", "--mode", "m2", "--n", "64", "--m", "8", "--k", "4", "--reps", "3", "--seed", "1"],
    );
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let csv = String::from_utf8(out.stdout).unwrap();
    assert!(csv.starts_with("mode,params,metric,value\n"));
    assert!(csv.contains("keygen_ms_median"));
}
