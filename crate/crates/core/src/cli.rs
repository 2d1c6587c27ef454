//! The `sshecke` command line.
//!
//! Exit codes: 0 success, 1 a checked invariant failed, 2 usage error,
//! 3 a modular polynomial database is missing.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use num_traits::{Signed, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::arith::{is_prime, make_fp2, DEFAULT_SEED, MAX_CHARACTERISTIC};
use crate::brandt::{hecke_apply, sigma1, sigma_p, BrandtCache, Divisor, IntMatrix};
use crate::equidist::{check_commuting, error_sup, fit_power_law, theorem_bound_holds, theta_star, Measure, TestFunction};
use crate::modforms::{
    cusp_residual, deligne_ratio, has_expected_denominator, ratio_to_f64, row_residual_sum, EisensteinData,
};
use crate::modpoly::{builtin_phi, infer_level, ModPolyError, PhiLibrary};
use crate::ssgraph::{brute_force_locus, enumerate_locus, SupersingularLocus};
use crate::velu::oracle_brandt;
use crate::{Error, Rational};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVARIANT: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_MISSING_DATA: i32 = 3;

/// Largest p for which `verify` also runs the brute-force exhaustiveness scan.
const BRUTE_FORCE_LIMIT: u64 = 200;

#[derive(Debug, Parser)]
#[command(name = "sshecke", version, about = "Supersingular loci, Brandt matrices and Hecke equidistribution")]
pub struct Cli {
    /// The characteristic, a prime 5 <= p < 2^31.
    #[arg(long = "p", global = true)]
    pub p: Option<u64>,
    /// Worker threads for sweeps; output does not depend on this.
    #[arg(long, global = true, default_value_t = 1)]
    pub threads: usize,
    /// Seed for randomized root finding and random test functions.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// A modular polynomial database file, as `PATH` (level read from the file) or `L=PATH`.
    #[arg(long = "phi-file", global = true, value_name = "[L=]PATH")]
    pub phi_files: Vec<String>,
    /// A directory of `phi_j_<l>.txt` database files.
    #[arg(long = "phi-dir", global = true, value_name = "DIR")]
    pub phi_dirs: Vec<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List the supersingular j-invariants with their weights and check the mass formula.
    Locus,
    /// Print the Brandt matrix B(m).
    Brandt {
        #[arg(long)]
        m: u64,
        /// Cross-check B(2) and B(3) against explicit Velu isogenies.
        #[arg(long)]
        oracle: bool,
    },
    /// CSV sweep of the equidistribution error of the orbit of class i.
    Equidist {
        /// 1-based class index.
        #[arg(long)]
        i: usize,
        #[arg(long = "m-max")]
        m_max: u64,
        /// Use only prime m (fails if a needed database is missing).
        #[arg(long = "primes-only")]
        primes_only: bool,
    },
    /// Run the invariant suite and print a JSON report.
    Verify {
        #[arg(long = "m-max", default_value_t = 200)]
        m_max: u64,
    },
    /// CSV of the cusp residuals c_m(i, j) and their Deligne ratios.
    Residuals {
        #[arg(long)]
        i: usize,
        #[arg(long)]
        j: usize,
        #[arg(long = "m-max")]
        m_max: u64,
    },
    /// CSV of the Eisenstein coefficients a_m, b_m and f0.
    Eisenstein {
        #[arg(long = "m-max")]
        m_max: u64,
    },
    /// Check whether a permutation of the locus commutes with T_q.
    Commute {
        #[arg(long)]
        q: u64,
        /// `frobenius`, `identity`, or a 1-based image list such as `2,1`.
        #[arg(long, default_value = "frobenius")]
        tau: String,
    },
}

/// Failure of a command, carrying its exit code.
#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Self { code: EXIT_USAGE, message: message.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::ModPoly(ModPolyError::Missing(_) | ModPolyError::Io { .. }) => EXIT_MISSING_DATA,
            Error::ModPoly(_) | Error::InvalidArgument(_) => EXIT_USAGE,
            _ => EXIT_INVARIANT,
        };
        let message = match e.missing_level() {
            Some(ell) => format!(
                "modular polynomial database required for l = {ell}; supply it with --phi-file {ell}=PATH or --phi-dir"
            ),
            None => e.to_string(),
        };
        Self { code, message }
    }
}

impl From<ModPolyError> for Failure {
    fn from(e: ModPolyError) -> Self {
        Error::from(e).into()
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Self { code: EXIT_INVARIANT, message: format!("output error: {e}") }
    }
}

type CmdResult = std::result::Result<i32, Failure>;

/// Parses `args` (including the program name), runs the command, and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            let _ = if code == EXIT_OK { out.write_all(rendered.as_bytes()) } else { err.write_all(rendered.as_bytes()) };
            return code;
        }
    };
    match execute(&cli, out) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn execute(cli: &Cli, out: &mut dyn Write) -> CmdResult {
    let p = check_p(cli.p)?;
    if cli.threads == 0 {
        return Err(Failure::usage("--threads must be at least 1"));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.threads)
        .build()
        .map_err(|e| Failure::usage(format!("cannot start {} threads: {e}", cli.threads)))?;
    let phis = Arc::new(phi_library(cli, p)?);
    // commands write into a buffer so that the work can run inside the pool
    let mut buf = Vec::new();
    let result = pool.install(|| {
        let out: &mut dyn Write = &mut buf;
        let field = make_fp2(p).map_err(Error::from)?;
        let locus = Arc::new(enumerate_locus(&field, &builtin_phi(2, p)?)?);
        let cache = BrandtCache::new(locus, phis);
        match &cli.command {
            Command::Locus => cmd_locus(cli, &cache, out),
            Command::Brandt { m, oracle } => cmd_brandt(cli, &cache, *m, *oracle, out),
            Command::Equidist { i, m_max, primes_only } => cmd_equidist(&cache, *i, *m_max, *primes_only, out),
            Command::Verify { m_max } => cmd_verify(cli, &cache, *m_max, out),
            Command::Residuals { i, j, m_max } => cmd_residuals(&cache, *i, *j, *m_max, out),
            Command::Eisenstein { m_max } => cmd_eisenstein(p, *m_max, out),
            Command::Commute { q, tau } => cmd_commute(cli, &cache, *q, tau, out),
        }
    });
    out.write_all(&buf)?;
    result
}

fn check_p(p: Option<u64>) -> std::result::Result<u64, Failure> {
    let p = p.ok_or_else(|| Failure::usage("--p is required"))?;
    if p < 5 || !is_prime(p) {
        return Err(Failure::usage("p must be a prime ≥ 5"));
    }
    if p >= MAX_CHARACTERISTIC {
        return Err(Failure::usage("p must be below 2^31"));
    }
    Ok(p)
}

fn phi_library(cli: &Cli, p: u64) -> std::result::Result<PhiLibrary, Failure> {
    let mut lib = PhiLibrary::new(p);
    for dir in &cli.phi_dirs {
        lib.add_directory(dir)?;
    }
    for spec in &cli.phi_files {
        let (ell, path) = match spec.split_once('=') {
            Some((l, path)) if !l.is_empty() && l.bytes().all(|b| b.is_ascii_digit()) => {
                let ell = l.parse::<u64>().map_err(|_| Failure::usage(format!("bad level in --phi-file {spec}")))?;
                (ell, PathBuf::from(path))
            }
            _ => (infer_level(Path::new(spec))?, PathBuf::from(spec)),
        };
        if !is_prime(ell) {
            return Err(Failure::usage(format!("--phi-file level {ell} is not prime")));
        }
        lib.add_file(ell, path);
    }
    Ok(lib)
}

fn frac(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

fn class_index(i: usize, n: usize, flag: &str) -> std::result::Result<usize, Failure> {
    if i == 0 || i > n {
        return Err(Failure::usage(format!("--{flag} must be between 1 and {n}")));
    }
    Ok(i - 1)
}

fn write_json(out: &mut dyn Write, v: &Value) -> std::io::Result<()> {
    writeln!(out, "{}", serde_json::to_string_pretty(v).expect("serializable"))
}

fn cmd_locus(cli: &Cli, cache: &BrandtCache, out: &mut dyn Write) -> CmdResult {
    let locus = cache.locus();
    let p = locus.p();
    let mass = locus.mass();
    let ok = mass == num_rational::Ratio::new(p as i64 - 1, 12);
    match cli.format {
        Format::Json => write_json(
            out,
            &json!({
                "p": p,
                "n": locus.n(),
                "classes": (0..locus.n()).map(|i| json!({
                    "index": i + 1, "j": locus.j(i).to_string(), "w": locus.weight(i)
                })).collect::<Vec<_>>(),
                "mass": mass.to_string(),
                "mass_ok": ok,
            }),
        )?,
        Format::Csv => {
            writeln!(out, "index,j,w")?;
            for i in 0..locus.n() {
                writeln!(out, "{},{},{}", i + 1, locus.j(i), locus.weight(i))?;
            }
        }
        Format::Text => {
            writeln!(out, "p = {p}, n = {}", locus.n())?;
            writeln!(out, "index  j  w")?;
            for i in 0..locus.n() {
                writeln!(out, "{}  {}  {}", i + 1, locus.j(i), locus.weight(i))?;
            }
            writeln!(out, "mass {mass} = {}/12 {}", p - 1, if ok { "OK" } else { "FAIL" })?;
        }
    }
    Ok(if ok { EXIT_OK } else { EXIT_INVARIANT })
}

fn oracle_levels(m: u64) -> Vec<u64> {
    if m == 2 || m == 3 {
        vec![m]
    } else {
        vec![2, 3]
    }
}

fn cmd_brandt(cli: &Cli, cache: &BrandtCache, m: u64, oracle: bool, out: &mut dyn Write) -> CmdResult {
    if m == 0 {
        return Err(Failure::usage("--m must be at least 1"));
    }
    let b = cache.brandt(m)?;
    let locus = cache.locus();
    let degree = sigma_p(m, cache.p());
    let sums_ok = b.has_degree_row_sums();
    let symmetric = b.is_weighted_symmetric(locus.weights());
    let mut oracle_result = None;
    if oracle {
        let mut mismatches = Vec::new();
        for ell in oracle_levels(m).into_iter().filter(|&l| l != cache.p()) {
            let o = oracle_brandt(locus, ell, cli.seed)?;
            if o.entries() != cache.brandt(ell)?.entries() {
                mismatches.push(ell);
            }
        }
        oracle_result = Some(mismatches);
    }
    let oracle_text = oracle_result.as_ref().map(|mm| {
        if mm.is_empty() {
            "MATCH".to_string()
        } else {
            format!("MISMATCH at l = {mm:?}")
        }
    });
    match cli.format {
        Format::Json => write_json(
            out,
            &json!({
                "p": cache.p(),
                "m": m,
                "matrix": b.entries().to_rows(),
                "row_sums": b.row_sums(),
                "degree": degree,
                "row_sums_ok": sums_ok,
                "weighted_symmetric": symmetric,
                "oracle": oracle_text,
            }),
        )?,
        Format::Csv => {
            let header: Vec<String> = (1..=locus.n()).map(|j| format!("c{j}")).collect();
            writeln!(out, "row,{},row_sum", header.join(","))?;
            for (i, row) in b.entries().rows().enumerate() {
                let cells: Vec<String> = row.iter().map(u64::to_string).collect();
                writeln!(out, "{},{},{}", i + 1, cells.join(","), row.iter().sum::<u64>())?;
            }
        }
        Format::Text => {
            writeln!(out, "B({m}) = {}", b.entries())?;
            for (i, row) in b.entries().rows().enumerate() {
                let cells: Vec<String> = row.iter().map(u64::to_string).collect();
                writeln!(out, "  {}: {} | {}", i + 1, cells.join(" "), row.iter().sum::<u64>())?;
            }
            writeln!(out, "row sums = sigma({m})_{} = {degree}: {}", cache.p(), ok_str(sums_ok))?;
            writeln!(out, "weighted symmetry: {}", ok_str(symmetric))?;
            if let Some(t) = &oracle_text {
                writeln!(out, "oracle: {t}")?;
            }
        }
    }
    let oracle_ok = oracle_result.is_none_or(|mm| mm.is_empty());
    Ok(if sums_ok && symmetric && oracle_ok { EXIT_OK } else { EXIT_INVARIANT })
}

fn ok_str(b: bool) -> &'static str {
    if b {
        "OK"
    } else {
        "FAIL"
    }
}

fn primes_up_to(n: u64) -> Vec<u64> {
    (2..=n).filter(|&q| is_prime(q)).collect()
}

fn cmd_equidist(cache: &BrandtCache, i: usize, m_max: u64, primes_only: bool, out: &mut dyn Write) -> CmdResult {
    let i = class_index(i, cache.locus().n(), "i")?;
    let p = cache.p();
    let (ms, skipped): (Vec<u64>, usize) = if primes_only {
        let ms: Vec<u64> = primes_up_to(m_max).into_iter().filter(|&q| q != p).collect();
        if let Some(&q) = ms.iter().find(|&&q| !cache.phi_source().has(q)) {
            return Err(Error::ModPoly(ModPolyError::Missing(q)).into());
        }
        (ms, 0)
    } else {
        let all: Vec<u64> = (1..=m_max).collect();
        let ms: Vec<u64> = all.iter().copied().filter(|&m| cache.is_computable(m)).collect();
        let skipped = all.len() - ms.len();
        (ms, skipped)
    };
    let rows = crate::equidist::error_sweep(cache, i, &ms)?;
    writeln!(out, "m,error_sup,error_sup_decimal,sigma_p")?;
    for (m, e) in &rows {
        writeln!(out, "{m},{},{},{}", frac(e), ratio_to_f64(e), sigma_p(*m, p))?;
    }
    let fit_points: Vec<(u64, Rational)> = rows.iter().filter(|(m, _)| m % p != 0).cloned().collect();
    if rows.iter().all(|(_, e)| e.is_zero()) {
        writeln!(out, "# exact equidistribution: error_sup = 0 for all {} values of m", rows.len())?;
    } else {
        match fit_power_law(&fit_points) {
            Ok(fit) => writeln!(
                out,
                "# fit log(error_sup) ~ slope*log(m) + intercept: slope={:.6}, intercept={:.6}, rms={:.6}, used={}, excluded_zero={}",
                fit.slope, fit.intercept, fit.rms, fit.used, fit.excluded_zero
            )?,
            Err(Error::InsufficientData { usable, zeros }) => writeln!(
                out,
                "# insufficient data for a rate fit: {usable} usable points, {zeros} exact zeros excluded"
            )?,
            Err(e) => return Err(e.into()),
        }
    }
    if skipped > 0 {
        writeln!(out, "# skipped {skipped} values of m lacking a modular polynomial database")?;
    }
    Ok(EXIT_OK)
}

fn cmd_residuals(cache: &BrandtCache, i: usize, j: usize, m_max: u64, out: &mut dyn Write) -> CmdResult {
    let n = cache.locus().n();
    let (i, j) = (class_index(i, n, "i")?, class_index(j, n, "j")?);
    writeln!(out, "m,c_m,c_m_decimal,deligne_ratio")?;
    let mut skipped = 0;
    for m in 1..=m_max {
        if !cache.is_computable(m) {
            skipped += 1;
            continue;
        }
        let c = cusp_residual(cache, i, j, m)?;
        let ratio = if m % cache.p() == 0 { String::new() } else { deligne_ratio(cache, i, j, m)?.to_string() };
        writeln!(out, "{m},{},{},{ratio}", frac(&c), ratio_to_f64(&c))?;
    }
    if skipped > 0 {
        writeln!(out, "# skipped {skipped} values of m lacking a modular polynomial database")?;
    }
    Ok(EXIT_OK)
}

fn cmd_eisenstein(p: u64, m_max: u64, out: &mut dyn Write) -> CmdResult {
    let e = EisensteinData::new(p);
    writeln!(out, "m,a_m,b_m,f0")?;
    writeln!(out, "0,,,{}", frac(&e.f0_coeff(0)?))?;
    for m in 1..=m_max {
        writeln!(out, "{m},{},{},{}", e.coeff_a(m)?, e.coeff_b(m)?, frac(&e.f0_coeff(m)?))?;
    }
    Ok(EXIT_OK)
}

fn parse_tau(spec: &str, locus: &SupersingularLocus) -> std::result::Result<Vec<usize>, Failure> {
    match spec {
        "frobenius" => Ok(locus.frobenius_permutation()?),
        "identity" => Ok((0..locus.n()).collect()),
        list => list
            .split(',')
            .map(|s| match s.trim().parse::<usize>() {
                Ok(k) if k >= 1 => Ok(k - 1),
                _ => Err(Failure::usage(format!("bad --tau entry {s:?}"))),
            })
            .collect(),
    }
}

fn cmd_commute(cli: &Cli, cache: &BrandtCache, q: u64, tau: &str, out: &mut dyn Write) -> CmdResult {
    let tau = parse_tau(tau, cache.locus())?;
    let r = check_commuting(cache, &tau, q)?;
    let violation = r.first_violation.map(|(a, b)| [a + 1, b + 1]);
    match cli.format {
        Format::Json => write_json(
            out,
            &json!({
                "p": cache.p(),
                "q": q,
                "tau": tau.iter().map(|t| t + 1).collect::<Vec<_>>(),
                "commutes": r.commutes,
                "first_violation": violation,
                "weights_preserved": r.weights_preserved,
                "theta_preserved": r.theta_preserved,
            }),
        )?,
        _ => {
            let shown: Vec<String> = tau.iter().map(|t| (t + 1).to_string()).collect();
            writeln!(out, "tau = [{}]", shown.join(","))?;
            match violation {
                None => writeln!(out, "commutes with T_{q}: yes")?,
                Some([a, b]) => writeln!(out, "commutes with T_{q}: no, first differing entry ({a},{b})")?,
            }
            writeln!(out, "weights preserved: {}", yes_no(r.weights_preserved))?;
            writeln!(out, "Theta preserved: {}", yes_no(r.theta_preserved))?;
        }
    }
    Ok(if r.is_consistent() { EXIT_OK } else { EXIT_INVARIANT })
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

/// One line of the verification report.
struct Check {
    name: String,
    pass: bool,
    detail: String,
}

fn check(name: &str, pass: bool, detail: impl Into<String>) -> Check {
    Check { name: name.into(), pass, detail: detail.into() }
}

fn first_failure<T: std::fmt::Display>(items: impl IntoIterator<Item = (T, bool)>) -> Option<T> {
    items.into_iter().find(|(_, ok)| !ok).map(|(t, _)| t)
}

fn cmd_verify(cli: &Cli, cache: &BrandtCache, m_max: u64, out: &mut dyn Write) -> CmdResult {
    let checks = verify_checks(cache, m_max, cli.seed)?;
    let all_pass = checks.iter().all(|c| c.pass);
    write_json(
        out,
        &json!({
            "p": cache.p(),
            "checks": checks.iter().map(|c| json!({
                "name": c.name,
                "status": if c.pass { "pass" } else { "fail" },
                "detail": c.detail,
            })).collect::<Vec<_>>(),
        }),
    )?;
    if all_pass {
        Ok(EXIT_OK)
    } else {
        let failed: Vec<&str> = checks.iter().filter(|c| !c.pass).map(|c| c.name.as_str()).collect();
        Err(Failure { code: EXIT_INVARIANT, message: format!("failed invariants: {}", failed.join(", ")) })
    }
}

fn verify_checks(cache: &BrandtCache, m_max: u64, seed: u64) -> crate::Result<Vec<Check>> {
    let locus = cache.locus().clone();
    let p = cache.p();
    let n = locus.n();
    let mut checks = Vec::new();
    let ms: Vec<u64> = (1..=m_max).filter(|&m| cache.is_computable(m)).collect();
    let coprime: Vec<u64> = ms.iter().copied().filter(|&m| m % p != 0).collect();
    let skipped = m_max as usize - ms.len();
    let budget = format!("{} values of m <= {m_max} ({skipped} skipped for lack of a database)", ms.len());

    let mass = locus.mass();
    checks.push(check(
        "mass formula",
        mass == num_rational::Ratio::new(p as i64 - 1, 12),
        format!("sum 1/w_i = {mass}, (p-1)/12 = {}", num_rational::Ratio::new(p as i64 - 1, 12)),
    ));
    if p <= BRUTE_FORCE_LIMIT {
        let brute = brute_force_locus(locus.field());
        checks.push(check(
            "locus exhaustive",
            brute == locus.js(),
            format!("brute-force Hasse scan of F_p^2 finds {} classes, search finds {n}", brute.len()),
        ));
    }
    let tau = locus.frobenius_permutation()?;
    checks.push(check("Frobenius stability", true, "j^p lies in the locus for every class"));

    let b1 = cache.brandt(1)?;
    checks.push(check("B(1) = I", *b1.entries() == IntMatrix::identity(n), ""));

    let mut bad_degree = None;
    let mut bad_symmetry = None;
    let mut bad_eisenstein = None;
    let mut bad_theta = None;
    let e = Divisor::eisenstein(&locus);
    let theta = theta_star(&locus);
    for &m in &ms {
        let b = cache.brandt(m)?;
        if bad_degree.is_none() && !b.has_degree_row_sums() {
            bad_degree = Some(m);
        }
        if bad_symmetry.is_none() && !b.is_weighted_symmetric(locus.weights()) {
            bad_symmetry = Some(m);
        }
        let te = hecke_apply(&b, &e)?;
        if bad_eisenstein.is_none() && te != e.scale(Rational::from_integer(i128::from(sigma_p(m, p)))) {
            bad_eisenstein = Some(m);
        }
        if bad_theta.is_none() && Measure::from_divisor(&te)? != theta {
            bad_theta = Some(m);
        }
    }
    let verdict = |bad: Option<u64>| match bad {
        None => (true, format!("checked {budget}")),
        Some(m) => (false, format!("fails at m = {m}")),
    };
    for (name, bad) in [
        ("degree law", bad_degree),
        ("weighted symmetry", bad_symmetry),
        ("Eisenstein eigenvector", bad_eisenstein),
        ("Theta Hecke-invariant", bad_theta),
    ] {
        let (pass, detail) = verdict(bad);
        checks.push(check(name, pass, detail));
    }

    let frob = cache.brandt(p)?;
    let frob_sq = frob.entries().checked_mul(frob.entries())?;
    checks.push(check("B(p)^2 = I", frob_sq == IntMatrix::identity(n), format!("B(p) = {}", frob.entries())));
    let mut frob_commutes = true;
    for ell in [2, 3] {
        let b = cache.brandt(ell)?;
        frob_commutes &= frob.entries().checked_mul(b.entries())? == b.entries().checked_mul(frob.entries())?;
    }
    checks.push(check("B(p) commutes with B(2), B(3)", frob_commutes, ""));
    let weights_ok = (0..n).all(|i| locus.weight(i) == locus.weight(tau[i]));
    checks.push(check("Frobenius preserves weights", weights_ok, ""));

    let primes: Vec<u64> = primes_up_to(m_max).into_iter().filter(|&q| q != p && cache.is_computable(q)).collect();
    let mut commuting_fail = None;
    for (k, &a) in primes.iter().enumerate() {
        for &b in &primes[k + 1..] {
            let (ba, bb) = (cache.brandt(a)?, cache.brandt(b)?);
            if ba.entries().checked_mul(bb.entries())? != bb.entries().checked_mul(ba.entries())? {
                commuting_fail.get_or_insert((a, b));
            }
        }
    }
    checks.push(check(
        "Hecke operators commute",
        commuting_fail.is_none(),
        match commuting_fail {
            None => format!("primes {primes:?}"),
            Some((a, b)) => format!("B({a}) B({b}) != B({b}) B({a})"),
        },
    ));

    for ell in [2u64, 3] {
        let o = oracle_brandt(&locus, ell, seed)?;
        checks.push(check(
            &format!("Velu oracle matches B({ell})"),
            o.entries() == cache.brandt(ell)?.entries(),
            format!("oracle {}", o.entries()),
        ));
    }

    let mut formula_fail = None;
    let mut denominator_fail = None;
    let mut row_fail = None;
    let mut error_fail = None;
    for &m in &ms {
        for i in 0..n {
            let mut max_c = Rational::zero();
            for j in 0..n {
                // cusp_residual itself rejects disagreement between the two formulas
                let c = match cusp_residual(cache, i, j, m) {
                    Ok(c) => c,
                    Err(Error::Consistency(msg)) => {
                        formula_fail.get_or_insert(msg);
                        continue;
                    }
                    Err(e) => return Err(e),
                };
                if !has_expected_denominator(&c, locus.weight(j), p) {
                    denominator_fail.get_or_insert(m);
                }
                max_c = max_c.max(c.abs());
            }
            if m % p != 0 {
                if !row_residual_sum(cache, i, m)?.is_zero() {
                    row_fail.get_or_insert(m);
                }
                if error_sup(cache, i, m)? != max_c / Rational::from_integer(i128::from(sigma1(m))) {
                    error_fail.get_or_insert(m);
                }
            }
        }
    }
    checks.push(check(
        "cusp residual formulas agree",
        formula_fail.is_none(),
        formula_fail.unwrap_or_else(|| format!("checked {budget}")),
    ));
    for (name, bad) in [
        ("residual denominators divide w_j(p^2-1)", denominator_fail),
        ("residual row sums vanish", row_fail),
        ("error_sup = max |c_m| / sigma_1(m)", error_fail),
    ] {
        let (pass, detail) = verdict(bad);
        checks.push(check(name, pass, detail));
    }

    if n == 1 {
        let bad = first_failure(
            ms.iter().map(|&m| Ok::<_, Error>((m, cusp_residual(cache, 0, 0, m)?.is_zero()))).collect::<crate::Result<Vec<_>>>()?,
        );
        let (pass, detail) = verdict(bad);
        checks.push(check("cusp residuals identically zero", pass, detail));
    }
    if n == 2 {
        // the cusp space is one-dimensional, so c_m(i, j) = lambda_m c_1(i, j)
        let c1: Vec<Rational> = pairs(n).map(|(i, j)| cusp_residual(cache, i, j, 1)).collect::<crate::Result<_>>()?;
        let mut bad = None;
        for &m in &ms {
            let cm: Vec<Rational> = pairs(n).map(|(i, j)| cusp_residual(cache, i, j, m)).collect::<crate::Result<_>>()?;
            let lambda = cm[0] / c1[0];
            if cm.iter().zip(&c1).any(|(a, b)| *a != lambda * b) {
                bad.get_or_insert(m);
            }
        }
        let (pass, detail) = verdict(bad);
        checks.push(check("cusp residuals proportional to c_1", pass, detail));
    }
    if p == 11 && cache.is_computable(2) {
        let ok = pairs(n).all(|(i, j)| {
            matches!((cusp_residual(cache, i, j, 1), cusp_residual(cache, i, j, 2)),
                (Ok(c1), Ok(c2)) if c2 == c1 * Rational::from_integer(-2))
        });
        checks.push(check("c_2 = -2 c_1", ok, "all pairs (i, j)"));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sample: Vec<u64> = coprime.iter().copied().take(20).collect();
    let mut bound_fail = None;
    for _ in 0..100 {
        let f = TestFunction::random(n, &mut rng);
        for &m in &sample {
            for i in 0..n {
                if !theorem_bound_holds(cache, i, m, &f)? {
                    bound_fail.get_or_insert(m);
                }
            }
        }
    }
    let (pass, _) = verdict(bound_fail);
    checks.push(check(
        "orbit integrals within n ||f|| error_sup",
        pass,
        format!("100 random f, {} values of m", sample.len()),
    ));

    let mut insensitive_fail = None;
    for &m in coprime.iter().filter(|&&m| m.saturating_mul(p * p) <= m_max.max(p * p)) {
        for i in 0..n {
            if error_sup(cache, i, p * p * m)? != error_sup(cache, i, m)?
                || error_sup(cache, i, p * m)? != error_sup(cache, tau[i], m)?
            {
                insensitive_fail.get_or_insert(m);
            }
        }
    }
    let (pass, detail) = verdict(insensitive_fail);
    checks.push(check("p-power insensitivity of error_sup", pass, detail));

    Ok(checks)
}

fn pairs(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..n).flat_map(move |i| (0..n).map(move |j| (i, j)))
}
