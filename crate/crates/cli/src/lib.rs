//! The `plc` command line: one JSON document per run.

use std::fs;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use plc_core::arithmetic::{check_base, check_digits, format_rational, parse_rational};
use plc_core::cf::{cf_expand, orbit_max_quotient, orbit_table, sandwich_check};
use plc_core::classify::{classify_binary, growth_classes};
use plc_core::repetitions::{find_complement_squares, find_fractional_squares, find_overlaps, Squares};
use plc_core::tm::{decompose, extract_tm_prefix, tm_coding_prefix, tm_constant, tm_identity_suite};
use plc_core::witness::{brute_force_min, certify_prefix, scan_and_certify, verify_certificate};
use plc_core::words::{parse_morphism, Coding};
use plc_core::{Morphism, PlcCertificate, Word, WordStream};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

mod digits;

pub use digits::{digits_io, parse_digits, read_input};

pub const SCHEMA_VERSION: u32 = 1;

const MAX_LEN: usize = 1 << 24;
const MAX_Q: u64 = 1 << 24;
const MAX_K: usize = 1 << 16;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Validation(String),
    #[error("internal error: {0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Validation(_) => 2,
            CliError::Internal(_) => 1,
        }
    }
}

impl From<plc_core::Error> for CliError {
    fn from(e: plc_core::Error) -> Self {
        match e {
            plc_core::Error::Internal(msg) => CliError::Internal(msg),
            other => CliError::Validation(other.to_string()),
        }
    }
}

#[derive(Debug, Parser, Serialize)]
#[command(name = "plc", version, about = "Exact tools for base-p expansions and p-adic Littlewood certificates")]
pub struct Cli {
    /// Write the JSON document to this file instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Seed for randomized generation.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[command(subcommand)]
    #[serde(flatten)]
    pub command: Command,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(untagged)]
pub enum Command {
    /// Prefix of a morphic word, or a seeded random digit word.
    Gen(GenArgs),
    /// Overlaps, fractional squares and complement squares in a digit word.
    Detect(DetectArgs),
    /// Scan a prefix for certificates scoring at least `--target-s`.
    Cert(CertArgs),
    /// Check certificates against a digit prefix.
    Verify(VerifyArgs),
    /// Exact minimum of q·‖q p^k x‖ over q ≤ Q, k ≤ K.
    Bruteforce(BruteforceArgs),
    /// Continued fraction of a rational, with the optional sandwich check.
    Cf(CfArgs),
    /// Partial quotients along the orbit p^k x mod 1.
    Orbit(OrbitArgs),
    /// Thue–Morse decomposition chain of an overlap-free binary word.
    Decompose(DecomposeArgs),
    /// Thue–Morse constant identities and codings.
    Tm(TmArgs),
    /// Classify the fixed point of a binary morphism.
    Classify(ClassifyArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Gen(_) => "gen",
            Command::Detect(_) => "detect",
            Command::Cert(_) => "cert",
            Command::Verify(_) => "verify",
            Command::Bruteforce(_) => "bruteforce",
            Command::Cf(_) => "cf",
            Command::Orbit(_) => "orbit",
            Command::Decompose(_) => "decompose",
            Command::Tm(_) => "tm",
            Command::Classify(_) => "classify",
        }
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct MorphismSource {
    /// Morphism rule file, one `a->w` rule per line or `;`-separated.
    #[arg(long, conflicts_with = "rules")]
    pub morphism: Option<PathBuf>,
    /// Inline morphism rules, e.g. "0->01;1->10".
    #[arg(long)]
    pub rules: Option<String>,
    /// Start letter of the fixed point.
    #[arg(long, default_value_t = '0')]
    pub start: char,
    /// Letter-to-letter coding applied to the fixed point, e.g. "a->0;b->1".
    #[arg(long)]
    pub coding: Option<String>,
}

impl MorphismSource {
    fn given(&self) -> bool {
        self.morphism.is_some() || self.rules.is_some()
    }

    fn morphism(&self) -> Result<Morphism, CliError> {
        let text = match (&self.morphism, &self.rules) {
            (Some(path), _) => read_input(path)?,
            (None, Some(rules)) => rules.clone(),
            (None, None) => return Err(CliError::Validation("need --morphism or --rules".into())),
        };
        Ok(parse_morphism(&text)?)
    }

    fn start(&self) -> Result<u8, CliError> {
        u8::try_from(self.start)
            .ok()
            .filter(u8::is_ascii_graphic)
            .ok_or_else(|| CliError::Validation(format!("start letter {:?} is not printable ASCII", self.start)))
    }

    fn stream(&self) -> Result<WordStream, CliError> {
        let stream = WordStream::fixed_point(self.morphism()?, self.start()?)?;
        Ok(match &self.coding {
            Some(text) => stream.coded(Coding::parse(text)?),
            None => stream,
        })
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct DigitSource {
    /// Digit file; `-` reads stdin. Whitespace is ignored.
    #[arg(long, conflicts_with = "word")]
    pub digits: Option<PathBuf>,
    /// Inline digit word.
    #[arg(long)]
    pub word: Option<String>,
}

impl DigitSource {
    fn given(&self) -> bool {
        self.digits.is_some() || self.word.is_some()
    }

    fn read(&self, p: u32) -> Result<Word, CliError> {
        match (&self.digits, &self.word) {
            (Some(path), _) => digits_io(path, p),
            (None, Some(word)) => parse_digits(word, p),
            (None, None) => Err(CliError::Validation("need --digits or --word".into())),
        }
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct GenArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub source: MorphismSource,
    /// Number of letters to generate.
    #[arg(long)]
    pub length: usize,
    /// Uniform random digits over base `--p`, drawn from `--seed`.
    #[arg(long, conflicts_with_all = ["morphism", "rules", "coding"])]
    pub random: bool,
    #[arg(long, default_value_t = 2)]
    pub p: u32,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct DetectArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub input: DigitSource,
    #[arg(long, default_value_t = 2)]
    pub p: u32,
    /// Smallest tail length reported for fractional and complement squares.
    #[arg(long, default_value_t = 1)]
    pub min_frac: usize,
    /// Whole copies required: 2 for squares-plus, 3 for cubes-plus.
    #[arg(long, default_value_t = 2)]
    pub squares: u32,
    /// Stop after this many overlaps.
    #[arg(long)]
    pub limit: Option<usize>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct CertArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub input: DigitSource,
    #[command(flatten)]
    #[serde(flatten)]
    pub source: MorphismSource,
    #[arg(long, default_value_t = 2)]
    pub p: u32,
    /// Prefix length to scan; defaults to the whole digit input.
    #[arg(long)]
    pub depth: Option<usize>,
    /// Keep certificates with score s at least this.
    #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
    pub target_s: i64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct VerifyArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub input: DigitSource,
    /// A certificate, a list of them, or a `cert` output document.
    #[arg(long)]
    pub cert: PathBuf,
    /// Base of the digits; defaults to the base recorded in the certificate.
    #[arg(long)]
    pub p: Option<u32>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct BruteforceArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub input: DigitSource,
    #[arg(long, default_value_t = 2)]
    pub p: u32,
    /// Largest q searched.
    #[arg(long = "Q")]
    #[serde(rename = "Q")]
    pub q_max: u64,
    /// Largest shift k searched.
    #[arg(long = "K", default_value_t = 0)]
    #[serde(rename = "K")]
    pub k_max: usize,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct CfArgs {
    /// Rational as `a/b` or an integer.
    #[arg(long, allow_hyphen_values = true)]
    pub x: String,
    /// Also run the finite sandwich check over 1 ≤ q < b.
    #[arg(long)]
    pub sandwich: bool,
    /// Let the sandwich scan include q = b.
    #[arg(long, requires = "sandwich")]
    pub include_exact: bool,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct OrbitArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub x: String,
    #[arg(long, default_value_t = 2)]
    pub p: u32,
    /// Largest shift k.
    #[arg(long = "K")]
    #[serde(rename = "K")]
    pub k_max: usize,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct DecomposeArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub input: DigitSource,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct TmArgs {
    /// Base of the Thue–Morse constants.
    #[arg(long)]
    pub n: u32,
    /// Digits compared per identity.
    #[arg(long, default_value_t = 64)]
    pub length: usize,
    /// Digit coding 0 -> a, 1 -> b for an explicit constant.
    #[arg(long, requires = "b")]
    pub a: Option<u32>,
    #[arg(long, requires = "a")]
    pub b: Option<u32>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ClassifyArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub source: MorphismSource,
    /// Prefix length used to confirm the classification.
    #[arg(long, default_value_t = 4096)]
    pub depth: usize,
}

/// One run: schema version, resolved configuration and result.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Document {
    pub schema_version: u32,
    pub command: String,
    pub config: Value,
    pub result: Value,
}

impl Document {
    pub fn render(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("JSON values serialize");
        s.push('\n');
        s
    }
}

fn limit(name: &str, value: usize, max: usize) -> Result<(), CliError> {
    if value > max {
        return Err(CliError::Validation(format!("limit overflow: {name} {value} exceeds {max}")));
    }
    Ok(())
}

fn positive(name: &str, value: usize) -> Result<(), CliError> {
    if value == 0 {
        return Err(CliError::Validation(format!("{name} must be at least 1")));
    }
    Ok(())
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("result types serialize")
}

/// Runs the command and builds its document without writing it anywhere.
pub fn run(cli: &Cli) -> Result<Document, CliError> {
    let mut config = to_value(cli);
    let result = match &cli.command {
        Command::Gen(a) => gen(a, cli.seed)?,
        Command::Detect(a) => detect(a)?,
        Command::Cert(a) => {
            let (result, depth) = cert(a)?;
            config["depth"] = json!(depth);
            result
        }
        Command::Verify(a) => verify(a)?,
        Command::Bruteforce(a) => bruteforce(a)?,
        Command::Cf(a) => cf(a)?,
        Command::Orbit(a) => orbit(a)?,
        Command::Decompose(a) => decompose_cmd(a)?,
        Command::Tm(a) => tm(a)?,
        Command::Classify(a) => classify(a)?,
    };
    Ok(Document {
        schema_version: SCHEMA_VERSION,
        command: cli.command.name().to_string(),
        config,
        result,
    })
}

/// Runs and writes the document to `--out` or stdout.
pub fn execute(cli: &Cli) -> Result<(), CliError> {
    let text = run(cli)?.render();
    match &cli.out {
        Some(path) => {
            fs::write(path, text).map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn gen(a: &GenArgs, seed: u64) -> Result<Value, CliError> {
    limit("--length", a.length, MAX_LEN)?;
    let word = if a.random {
        check_base(a.p)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Word::from_bytes((0..a.length).map(|_| b'0' + rng.gen_range(0..a.p) as u8).collect())?
    } else {
        a.source.stream()?.try_prefix(a.length)?
    };
    Ok(json!({ "word": word, "length": word.len() }))
}

fn detect(a: &DetectArgs) -> Result<Value, CliError> {
    let w = a.input.read(a.p)?;
    let squares = Squares::from_count(a.squares)?;
    let overlaps = find_overlaps(&w, a.limit.unwrap_or(usize::MAX));
    let fractional = find_fractional_squares(&w, a.min_frac, squares)?;
    let complement = find_complement_squares(&w, a.p, a.min_frac)?;
    Ok(json!({
        "length": w.len(),
        "overlaps": overlaps,
        "fractional_squares": fractional,
        "complement_squares": complement,
    }))
}

fn cert(a: &CertArgs) -> Result<(Value, usize), CliError> {
    check_base(a.p)?;
    let (prefix, certs) = match (a.input.given(), a.source.given()) {
        (true, true) => return Err(CliError::Validation("give either digits or a morphism, not both".into())),
        (true, false) => {
            let w = a.input.read(a.p)?;
            let depth = a.depth.unwrap_or(w.len());
            if depth > w.len() {
                return Err(plc_core::Error::PrefixTooShort { need: depth, have: w.len() }.into());
            }
            let prefix = w.slice(0, depth);
            let certs = certify_prefix(&prefix, a.p, a.target_s)?;
            (prefix, certs)
        }
        (false, _) => {
            let depth = a
                .depth
                .ok_or_else(|| CliError::Validation("--depth is required for a morphism source".into()))?;
            limit("--depth", depth, MAX_LEN)?;
            let stream = a.source.stream()?;
            let prefix = stream.try_prefix(depth)?;
            check_digits(&prefix, a.p)?;
            let certs = scan_and_certify(&stream, a.p, depth, a.target_s)?;
            (prefix, certs)
        }
    };
    for c in &certs {
        if !verify_certificate(&prefix, c, a.p)?.combinatorial_ok {
            return Err(CliError::Internal(format!("emitted certificate fails verification: {c:?}")));
        }
    }
    let result = json!({ "count": certs.len(), "certificates": certs });
    Ok((result, prefix.len()))
}

fn load_certificates(path: &std::path::Path) -> Result<(Vec<PlcCertificate>, bool), CliError> {
    let text = read_input(path)?;
    let value: Value =
        serde_json::from_str(&text).map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))?;
    let list = match value {
        Value::Array(items) => Value::Array(items),
        Value::Object(ref map) if map.contains_key("result") => value["result"]["certificates"].clone(),
        Value::Object(ref map) if map.contains_key("certificates") => value["certificates"].clone(),
        single @ Value::Object(_) => {
            let cert = serde_json::from_value(single)
                .map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))?;
            return Ok((vec![cert], true));
        }
        _ => return Err(CliError::Validation(format!("{}: expected certificate JSON", path.display()))),
    };
    let certs =
        serde_json::from_value(list).map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))?;
    Ok((certs, false))
}

fn verify(a: &VerifyArgs) -> Result<Value, CliError> {
    let (certs, single) = load_certificates(&a.cert)?;
    let p = a.p.or(certs.first().map(|c| c.p)).unwrap_or(2);
    let prefix = a.input.read(p)?;
    let checks = certs
        .iter()
        .map(|c| verify_certificate(&prefix, c, p))
        .collect::<Result<Vec<_>, _>>()?;
    if single {
        return Ok(to_value(&checks[0]));
    }
    Ok(json!({
        "all_ok": checks.iter().all(|v| v.combinatorial_ok),
        "verifications": checks,
    }))
}

fn bruteforce(a: &BruteforceArgs) -> Result<Value, CliError> {
    positive("--Q", a.q_max as usize)?;
    if a.q_max > MAX_Q {
        return Err(CliError::Validation(format!("limit overflow: --Q {} exceeds {MAX_Q}", a.q_max)));
    }
    limit("--K", a.k_max, MAX_K)?;
    let w = a.input.read(a.p)?;
    Ok(to_value(&brute_force_min(&w, a.p, a.q_max, a.k_max)?))
}

fn cf(a: &CfArgs) -> Result<Value, CliError> {
    let x = parse_rational(&a.x)?;
    let expansion = cf_expand(&x);
    let mut result = json!({
        "x": format_rational(&x),
        "a0": expansion.a0.to_string(),
        "quotients": expansion.quotients.iter().map(|q| q.to_string()).collect::<Vec<_>>(),
        "display": expansion.to_string(),
        "convergents": expansion.convergents().iter().map(format_rational).collect::<Vec<_>>(),
    });
    if a.sandwich {
        result["sandwich"] = to_value(&sandwich_check(&x, !a.include_exact)?);
    }
    Ok(result)
}

fn orbit(a: &OrbitArgs) -> Result<Value, CliError> {
    check_base(a.p)?;
    limit("--K", a.k_max, MAX_K)?;
    let x = parse_rational(&a.x)?;
    Ok(json!({
        "rows": orbit_table(&x, a.p, a.k_max),
        "max": orbit_max_quotient(&x, a.p, a.k_max),
    }))
}

fn decompose_cmd(a: &DecomposeArgs) -> Result<Value, CliError> {
    let w = a.input.read(2)?;
    let first = decompose(&w)?;
    let chain = extract_tm_prefix(&w)?;
    if !chain.verify(&w) {
        return Err(CliError::Internal("decomposition chain does not reassemble".into()));
    }
    Ok(json!({ "decomposition": first, "chain": chain }))
}

fn tm(a: &TmArgs) -> Result<Value, CliError> {
    positive("--length", a.length)?;
    limit("--length", a.length, MAX_LEN)?;
    let checks = tm_identity_suite(a.n, a.length)?;
    let mut result = json!({
        "all_pass": checks.iter().all(|c| c.pass),
        "identities": checks,
    });
    if let (Some(da), Some(db)) = (a.a, a.b) {
        result["digits"] = json!(tm_coding_prefix(da, db, a.n, a.length)?);
        result["constant"] = json!(format_rational(&tm_constant(da, db, a.n, a.length)?));
    }
    Ok(result)
}

fn classify(a: &ClassifyArgs) -> Result<Value, CliError> {
    positive("--depth", a.depth)?;
    limit("--depth", a.depth, MAX_LEN)?;
    let m = a.source.morphism()?;
    let start = a.source.start()?;
    let classification = classify_binary(&m, start, a.depth)?;
    let growth: serde_json::Map<String, Value> = growth_classes(&m)
        .into_iter()
        .map(|(c, g)| ((c as char).to_string(), to_value(&g)))
        .collect();
    Ok(json!({
        "morphism": m.to_string(),
        "classification": classification,
        "growth": growth,
    }))
}
