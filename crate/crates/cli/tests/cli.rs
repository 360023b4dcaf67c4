use std::io::Write;
use std::path::Path;
use std::process::{Command, Output, Stdio};

use plc_cli::Document;
use plc_core::classify::Classification;
use plc_core::tm::DecompositionChain;
use plc_core::witness::{BruteForceMin, Verification};
use plc_core::PlcCertificate;

fn plc(args: &[&str], dir: &Path, stdin: Option<&str>) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_plc"))
        .args(args)
        .current_dir(dir)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    let mut pipe = child.stdin.take().unwrap();
    pipe.write_all(stdin.unwrap_or("").as_bytes()).unwrap();
    drop(pipe);
    child.wait_with_output().unwrap()
}

fn doc(out: &Output) -> Document {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout.clone()).unwrap();
    let doc: Document = serde_json::from_str(&text).unwrap();
    assert_eq!(doc.render(), text, "document does not round-trip byte for byte");
    doc
}

fn tmp() -> tempfile::TempDir {
    tempfile::tempdir().unwrap()
}

#[test]
fn gen_thue_morse_from_file() {
    let dir = tmp();
    std::fs::write(dir.path().join("tm.mrf"), "0->01\n1->10\n").unwrap();
    let d = doc(&plc(&["gen", "--morphism", "tm.mrf", "--start", "0", "--length", "16"], dir.path(), None));
    assert_eq!(d.schema_version, 1);
    assert_eq!(d.command, "gen");
    assert_eq!(d.result["word"], "0110100110010110");
    assert_eq!(d.config["length"], 16);
}

#[test]
fn gen_with_coding() {
    let dir = tmp();
    let d = doc(&plc(
        &["gen", "--rules", "a->ab;b->ba", "--start", "a", "--coding", "a->1;b->0", "--length", "8"],
        dir.path(),
        None,
    ));
    assert_eq!(d.result["word"], "10010110");
}

#[test]
fn seeded_output_is_byte_identical() {
    let dir = tmp();
    let args = ["gen", "--random", "--p", "3", "--length", "200", "--seed", "17"];
    let a = plc(&args, dir.path(), None);
    let b = plc(&args, dir.path(), None);
    assert_eq!(a.stdout, b.stdout);
    let other = plc(&["gen", "--random", "--p", "3", "--length", "200", "--seed", "18"], dir.path(), None);
    assert_ne!(doc(&a).result["word"], doc(&other).result["word"]);
    let word = doc(&a).result["word"].as_str().unwrap().to_string();
    assert!(word.bytes().all(|c| (b'0'..=b'2').contains(&c)));
}

#[test]
fn cert_verify_round_trip() {
    let dir = tmp();
    let digits = "1101101101101100101";
    std::fs::write(dir.path().join("d.txt"), digits).unwrap();
    let out = plc(&["cert", "--digits", "d.txt", "--p", "2", "--target-s", "1", "--out", "c.json"], dir.path(), None);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(dir.path().join("c.json")).unwrap();
    let d: Document = serde_json::from_str(&text).unwrap();
    let certs: Vec<PlcCertificate> = serde_json::from_value(d.result["certificates"].clone()).unwrap();
    assert!(!certs.is_empty());
    assert_eq!(d.config["depth"], digits.len());
    assert_eq!(serde_json::to_value(&certs).unwrap(), d.result["certificates"]);

    let v = doc(&plc(&["verify", "--digits", "d.txt", "--cert", "c.json"], dir.path(), None));
    assert_eq!(v.result["all_ok"], true);
    let checks: Vec<Verification> = serde_json::from_value(v.result["verifications"].clone()).unwrap();
    assert_eq!(checks.len(), certs.len());

    std::fs::write(dir.path().join("one.json"), serde_json::to_string(&certs[0]).unwrap()).unwrap();
    let v = doc(&plc(&["verify", "--digits", "-", "--cert", "one.json"], dir.path(), Some(digits)));
    let check: Verification = serde_json::from_value(v.result).unwrap();
    assert!(check.combinatorial_ok);
    assert_eq!(check.guaranteed_bound, Some(certs[0].bound.clone()));
}

#[test]
fn verify_rejects_a_broken_window() {
    let dir = tmp();
    let out = plc(&["cert", "--word", "0101010", "--target-s", "3"], dir.path(), None);
    std::fs::write(dir.path().join("c.json"), &out.stdout).unwrap();
    let v = doc(&plc(&["verify", "--word", "0101011", "--cert", "c.json"], dir.path(), None));
    assert_eq!(v.result["all_ok"], false);
    let short = plc(&["verify", "--word", "0101", "--cert", "c.json"], dir.path(), None);
    assert_eq!(short.status.code(), Some(2));
    std::fs::write(dir.path().join("none.json"), "[]").unwrap();
    let v = doc(&plc(&["verify", "--word", "0110", "--cert", "none.json"], dir.path(), None));
    assert_eq!(v.result["all_ok"], true);
    assert_eq!(v.result["verifications"], serde_json::json!([]));
}

#[test]
fn cert_from_morphism_stream() {
    let dir = tmp();
    let d = doc(&plc(
        &["cert", "--rules", "0->001;1->1", "--depth", "64", "--p", "2", "--target-s", "4"],
        dir.path(),
        None,
    ));
    let certs: Vec<PlcCertificate> = serde_json::from_value(d.result["certificates"].clone()).unwrap();
    assert!(certs.iter().all(|c| c.s >= 4));
    let missing = plc(&["cert", "--rules", "0->01;1->10", "--p", "2"], dir.path(), None);
    assert_eq!(missing.status.code(), Some(2));
}

#[test]
fn bruteforce_one_third() {
    let dir = tmp();
    let d = doc(&plc(&["bruteforce", "--word", "0101010101", "--Q", "3", "--K", "0"], dir.path(), None));
    let b: BruteForceMin = serde_json::from_value(d.result).unwrap();
    assert_eq!(b.q, 3u32.into());
    assert!(b.value_interval.lo <= b.value_interval.hi);
    assert_eq!(d.config["Q"], 3);
}

#[test]
fn cf_and_orbit() {
    let dir = tmp();
    let d = doc(&plc(&["cf", "--x", "7/5"], dir.path(), None));
    assert_eq!(d.result["display"], "[1; 2, 2]");
    assert_eq!(d.result["quotients"], serde_json::json!(["2", "2"]));
    let d = doc(&plc(&["cf", "--x", "2/5", "--sandwich"], dir.path(), None));
    assert_eq!(d.result["sandwich"]["holds"], true);
    let d = doc(&plc(&["orbit", "--x", "1/3", "--p", "2", "--K", "3"], dir.path(), None));
    let ks: std::collections::BTreeSet<u64> =
        d.result["rows"].as_array().unwrap().iter().map(|r| r["k"].as_u64().unwrap()).collect();
    assert_eq!(ks.into_iter().collect::<Vec<_>>(), [0, 1, 2, 3]);
}

#[test]
fn decompose_and_classify() {
    let dir = tmp();
    let d = doc(&plc(&["decompose", "--word", "0110100110010110"], dir.path(), None));
    let chain: DecompositionChain = serde_json::from_value(d.result["chain"].clone()).unwrap();
    assert!(chain.verify(b"0110100110010110"));
    let bad = plc(&["decompose", "--word", "000"], dir.path(), None);
    assert_eq!(bad.status.code(), Some(2));

    let d = doc(&plc(&["classify", "--rules", "0->010;1->1", "--depth", "256"], dir.path(), None));
    let c: Classification = serde_json::from_value(d.result["classification"].clone()).unwrap();
    assert_eq!(c.tag(), "P3");
    assert_eq!(d.result["growth"]["0"], "growing");
    let d = doc(&plc(&["classify", "--rules", "0->01;1->10"], dir.path(), None));
    assert_eq!(d.result["classification"]["tag"], "P1");
}

#[test]
fn tm_suite() {
    let dir = tmp();
    let d = doc(&plc(&["tm", "--n", "3", "--length", "32", "--a", "0", "--b", "1"], dir.path(), None));
    assert_eq!(d.result["all_pass"], true);
    assert_eq!(d.result["digits"], "01101001100101101001011001101001");
}

#[test]
fn detect_lists_all_three_kinds() {
    let dir = tmp();
    let d = doc(&plc(&["detect", "--word", "0100101101", "--p", "2"], dir.path(), None));
    for key in ["overlaps", "fractional_squares", "complement_squares"] {
        assert!(d.result[key].is_array(), "{key}");
    }
    let d = doc(&plc(&["detect", "--digits", "-"], dir.path(), Some("")));
    assert_eq!(d.result["length"], 0);
}

#[test]
fn exit_codes() {
    let dir = tmp();
    let code = |args: &[&str]| plc(args, dir.path(), None).status.code();
    assert_eq!(code(&["nonsense"]), Some(2));
    assert_eq!(code(&["detect", "--word", "2"]), Some(2));
    assert_eq!(code(&["detect", "--word", "0x1"]), Some(2));
    assert_eq!(code(&["gen", "--rules", "0->0x;", "--length", "4"]), Some(2));
    assert_eq!(code(&["gen", "--rules", "0->01;1->10", "--length", "999999999"]), Some(2));
    assert_eq!(code(&["bruteforce", "--word", "01", "--Q", "0"]), Some(2));
    assert_eq!(code(&["classify", "--rules", "0->012;1->1;2->2"]), Some(2));
    assert_eq!(code(&["detect", "--digits", "missing.txt"]), Some(2));
    assert_eq!(code(&["gen", "--rules", "0->01;1->10", "--length", "4"]), Some(0));
}
