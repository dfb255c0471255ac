#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::Command;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::seq::SliceRandom;
use rand::Rng;
use ultrapic::{LaurentSeries, PrimeContext, SingularityClassification};

pub const PRIMES: [u64; 3] = [2, 3, 5];

pub fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

pub fn int(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

pub fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures")
}

pub fn prime<R: Rng>(rng: &mut R) -> PrimeContext {
    PrimeContext::new(*PRIMES.choose(rng).unwrap()).unwrap()
}

fn prime_to(rng: &mut impl Rng, p: i64, lo: i64, hi: i64) -> i64 {
    loop {
        let x = rng.gen_range(lo..=hi);
        if x != 0 && x % p != 0 {
            return x;
        }
    }
}

/// A rational of valuation zero.
pub fn unit<R: Rng>(rng: &mut R, ctx: &PrimeContext) -> BigRational {
    let p = ctx.p() as i64;
    let num = prime_to(rng, p, -40, 40);
    let den = prime_to(rng, p, 1, 12);
    q(num, den)
}

/// An integer of valuation zero.
pub fn int_unit<R: Rng>(rng: &mut R, ctx: &PrimeContext) -> BigInt {
    BigInt::from(prime_to(rng, ctx.p() as i64, -40, 40))
}

/// `u * p^k` with `u` a unit.
pub fn with_valuation<R: Rng>(rng: &mut R, ctx: &PrimeContext, k: i64) -> BigRational {
    unit(rng, ctx) * ctx.rational_pow(k)
}

/// Laurent polynomial with exponents inside a window of width `span`
/// starting in `[-6, 0]`, coefficient valuations in `[-4, 4]`.
pub fn laurent_poly<R: Rng>(rng: &mut R, ctx: &PrimeContext, span: i64) -> LaurentSeries {
    let start = rng.gen_range(-6..=0);
    polynomial_in(rng, ctx, start, start + span)
}

/// Nonzero polynomial with exponents in `[lo, hi]`.
pub fn polynomial_in<R: Rng>(rng: &mut R, ctx: &PrimeContext, lo: i64, hi: i64) -> LaurentSeries {
    loop {
        let mut terms = Vec::new();
        for n in lo..=hi {
            if rng.gen_bool(0.6) {
                let k = rng.gen_range(-4..=4);
                terms.push((n, with_valuation(rng, ctx, k)));
            }
        }
        if !terms.is_empty() {
            return LaurentSeries::finite(*ctx, terms).unwrap();
        }
    }
}

/// `k/den` with `den` in `{1, 2, 3, 4, 6}` and `|k/den| <= bound`.
pub fn small_rational<R: Rng>(rng: &mut R, bound: i64) -> BigRational {
    let den = *[1i64, 2, 3, 4, 6].choose(rng).unwrap();
    q(rng.gen_range(-bound * den..=bound * den), den)
}

/// `ceil(x)` for a rational.
pub fn ceil(x: &BigRational) -> i64 {
    x.ceil().to_integer().try_into().unwrap()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    Extended(SingularityClassification),
    HypothesisViolated(BigRational),
    Contradiction,
    WindowInsufficient,
}

pub struct PicardCase {
    pub name: String,
    pub series: LaurentSeries,
    pub radius_val: BigRational,
    pub expected: Outcome,
}

fn parse_outcome(s: &str) -> Outcome {
    let mut words = s.split_whitespace();
    match (words.next(), words.next()) {
        (Some("removable"), None) => Outcome::Extended(SingularityClassification::RemovableAnalytic),
        (Some("pole"), Some(m)) => Outcome::Extended(SingularityClassification::Pole(m.parse().unwrap())),
        (Some("hypothesis_violated"), Some(s0)) => {
            Outcome::HypothesisViolated(ultrapic::cli::format::parse_rational(s0).unwrap())
        }
        (Some("contradiction"), None) => Outcome::Contradiction,
        (Some("window_insufficient"), None) => Outcome::WindowInsufficient,
        _ => panic!("bad outcome `{s}`"),
    }
}

pub fn picard_cases() -> Vec<PicardCase> {
    let dir = fixtures().join("picard");
    let manifest = std::fs::read_to_string(dir.join("cases.tsv")).unwrap();
    manifest
        .lines()
        .filter(|l| !l.starts_with('#') && !l.trim().is_empty())
        .map(|line| {
            let cols: Vec<&str> = line.split('\t').collect();
            let text = std::fs::read_to_string(dir.join(format!("{}.series", cols[0]))).unwrap();
            PicardCase {
                name: format!("{}@{}", cols[0], cols[1]),
                series: ultrapic::cli::parse_series_file(&text).unwrap().to_series().unwrap(),
                radius_val: ultrapic::cli::format::parse_rational(cols[1]).unwrap(),
                expected: parse_outcome(cols[2]),
            }
        })
        .collect()
}

pub fn observed_outcome(f: &LaurentSeries, s_r: &BigRational) -> Result<Outcome, ultrapic::Error> {
    use ultrapic::Error;
    match ultrapic::extend_across_puncture(f, &ultrapic::RadiusVal::new(s_r.clone())) {
        Ok(c) => Ok(Outcome::Extended(c)),
        Err(Error::HypothesisViolated { corner }) => Ok(Outcome::HypothesisViolated(corner)),
        Err(Error::ContradictionDetected) => Ok(Outcome::Contradiction),
        Err(Error::WindowInsufficient(_)) => Ok(Outcome::WindowInsufficient),
        Err(e) => Err(e),
    }
}

pub struct CliCase {
    pub name: String,
    pub exit: i32,
    pub args: Vec<String>,
}

pub fn cli_cases() -> Vec<CliCase> {
    let manifest = std::fs::read_to_string(fixtures().join("cli/cases.tsv")).unwrap();
    manifest
        .lines()
        .filter(|l| !l.starts_with('#') && !l.trim().is_empty())
        .map(|line| {
            let cols: Vec<&str> = line.split('\t').collect();
            CliCase {
                name: cols[0].into(),
                exit: cols[1].parse().unwrap(),
                args: cols[2..].iter().map(|s| s.to_string()).collect(),
            }
        })
        .collect()
}

pub struct CliRun {
    pub exit: i32,
    pub stdout: Vec<u8>,
    pub stderr: Vec<u8>,
}

/// Run the binary from the CLI fixture directory.
pub fn run_binary(args: &[String]) -> CliRun {
    let out = Command::new(env!("CARGO_BIN_EXE_ultrapic"))
        .args(args)
        .current_dir(fixtures().join("cli"))
        .env_remove("ULTRAPIC_MAX_PRECISION")
        .output()
        .expect("binary runs");
    CliRun {
        exit: out.status.code().unwrap_or(-1),
        stdout: out.stdout,
        stderr: out.stderr,
    }
}

/// Compare a case against its golden files; with `ULTRAPIC_BLESS` set the
/// goldens are rewritten instead. Returns a description of each mismatch.
pub fn check_cli_case(case: &CliCase) -> Vec<String> {
    let golden = fixtures().join("cli/golden");
    let run = run_binary(&case.args);
    let stdout_path = golden.join(format!("{}.stdout", case.name));
    let stderr_path = golden.join(format!("{}.stderr", case.name));
    if std::env::var_os("ULTRAPIC_BLESS").is_some() {
        std::fs::write(&stdout_path, &run.stdout).unwrap();
        std::fs::write(&stderr_path, &run.stderr).unwrap();
    }
    let mut problems = Vec::new();
    if run.exit != case.exit {
        problems.push(format!("{}: exit {} (expected {})", case.name, run.exit, case.exit));
    }
    for (path, got, label) in [(&stdout_path, &run.stdout, "stdout"), (&stderr_path, &run.stderr, "stderr")] {
        match std::fs::read(path) {
            Ok(want) if &want == got => {}
            Ok(_) => problems.push(format!("{}: {label} differs from golden", case.name)),
            Err(_) => problems.push(format!("{}: missing golden {label}", case.name)),
        }
    }
    let again = run_binary(&case.args);
    if again.stdout != run.stdout || again.stderr != run.stderr || again.exit != run.exit {
        problems.push(format!("{}: output differs between runs", case.name));
    }
    problems
}
