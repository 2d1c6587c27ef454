//! Classical modular polynomials `Phi_l(X, Y)` reduced modulo `p`.
//!
//! Database files use one coefficient per line, `[a,b] c`, meaning `c X^a Y^b`
//! (and by symmetry `c X^b Y^a`). Coefficients are arbitrarily long signed
//! decimal integers; they are reduced mod `p` digit by digit as they are read.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::io::BufRead;
use std::path::{Path, PathBuf};
use std::sync::{Arc, RwLock};

use thiserror::Error;

use crate::arith::{is_prime, FiniteField, Poly, PolyRing};

#[derive(Debug, Error)]
pub enum ModPolyError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("invalid modular polynomial: {0}")]
    Validation(String),
    #[error("no built-in modular polynomial for level {0}")]
    Unsupported(u64),
    #[error("modular polynomial database required for l = {0}")]
    Missing(u64),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
}

/// `Phi_l` with coefficients reduced mod `p`, stored densely.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhiPoly {
    ell: u64,
    p: u64,
    coeffs: Vec<u64>,
}

const PHI2: &[(usize, usize, &str)] = &[
    (3, 0, "1"),
    (2, 2, "-1"),
    (2, 1, "1488"),
    (2, 0, "-162000"),
    (1, 1, "40773375"),
    (1, 0, "8748000000"),
    (0, 0, "-157464000000000"),
];

const PHI3: &[(usize, usize, &str)] = &[
    (4, 0, "1"),
    (3, 3, "-1"),
    (3, 2, "2232"),
    (3, 1, "-1069956"),
    (3, 0, "36864000"),
    (2, 2, "2587918086"),
    (2, 1, "8900222976000"),
    (2, 0, "452984832000000"),
    (1, 1, "-770845966336000000"),
    (1, 0, "1855425871872000000000"),
];

/// Reduces a signed decimal string mod `p` without materializing the integer.
///
/// Returns `None` if the string is not an optional `-` followed by at least one digit.
pub fn reduce_decimal(s: &str, p: u64) -> Option<u64> {
    let (neg, digits) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s),
    };
    if digits.is_empty() {
        return None;
    }
    let mut acc = 0u64;
    for b in digits.bytes() {
        if !b.is_ascii_digit() {
            return None;
        }
        acc = (acc * 10 + u64::from(b - b'0')) % p;
    }
    Some(if neg { (p - acc) % p } else { acc })
}

impl PhiPoly {
    fn empty(ell: u64, p: u64) -> Self {
        let top = ell as usize + 2;
        Self { ell, p, coeffs: vec![0; top * top] }
    }

    fn from_table(ell: u64, p: u64, table: &[(usize, usize, &str)]) -> Self {
        let mut phi = Self::empty(ell, p);
        for &(a, b, c) in table {
            let v = reduce_decimal(c, p).expect("valid built-in constant");
            phi.set(a, b, v);
        }
        phi
    }

    pub fn ell(&self) -> u64 {
        self.ell
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    fn top(&self) -> usize {
        self.ell as usize + 1
    }

    fn set(&mut self, a: usize, b: usize, v: u64) {
        let w = self.top() + 1;
        self.coeffs[a * w + b] = v;
        self.coeffs[b * w + a] = v;
    }

    /// Coefficient of `X^a Y^b` as a residue mod `p`; zero out of range.
    pub fn coeff(&self, a: usize, b: usize) -> u64 {
        let w = self.top() + 1;
        if a < w && b < w {
            self.coeffs[a * w + b]
        } else {
            0
        }
    }

    /// Nonzero coefficients `(a, b, c)` with `a >= b`, highest `a` first.
    pub fn entries(&self) -> Vec<(usize, usize, u64)> {
        let top = self.top();
        let mut out = Vec::new();
        for a in (0..=top).rev() {
            for b in (0..=a).rev() {
                let c = self.coeff(a, b);
                if c != 0 {
                    out.push((a, b, c));
                }
            }
        }
        out
    }

    /// `Phi_l(j, Y)` as a polynomial in `Y`; monic of degree `l + 1`.
    pub fn row<F: FiniteField>(&self, field: &F, j: &F::Elem) -> Poly<F::Elem> {
        debug_assert_eq!(field.characteristic(), self.p);
        let top = self.top();
        let mut powers = Vec::with_capacity(top + 1);
        powers.push(field.one());
        for a in 1..=top {
            powers.push(field.mul(&powers[a - 1], j));
        }
        let coeffs = (0..=top)
            .map(|b| {
                (0..=top).fold(field.zero(), |acc, a| match self.coeff(a, b) {
                    0 => acc,
                    c => field.add(&acc, &field.mul(&powers[a], &field.from_u64(c))),
                })
            })
            .collect();
        PolyRing::new(field).from_coeffs(coeffs)
    }

    /// Checks `Phi_p(X, Y) = (X^p - Y)(X - Y^p) mod p`; only meaningful when `l = p`.
    pub fn satisfies_kronecker_congruence(&self) -> bool {
        if self.ell != self.p {
            return false;
        }
        let top = self.top();
        let l = self.ell as usize;
        let minus_one = self.p - 1;
        (0..=top).all(|a| {
            (0..=top).all(|b| {
                let expected = match (a, b) {
                    _ if (a, b) == (top, 0) || (a, b) == (0, top) => 1,
                    _ if (a, b) == (l, l) || (a, b) == (1, 1) => minus_one,
                    _ => 0,
                };
                self.coeff(a, b) == expected
            })
        })
    }

    /// Serializes in the database format (residues, `a >= b`).
    pub fn to_database_string(&self) -> String {
        let mut s = format!("# Phi_{} reduced mod {}\n", self.ell, self.p);
        for (a, b, c) in self.entries() {
            writeln!(s, "[{a},{b}] {c}").expect("writing to a String");
        }
        s
    }

    fn validate(&self) -> Result<(), ModPolyError> {
        let top = self.top();
        if self.coeff(top, 0) != 1 % self.p {
            return Err(ModPolyError::Validation(format!("leading term [{top},0] must be 1")));
        }
        if let Some(b) = (1..=top).find(|&b| self.coeff(top, b) != 0) {
            return Err(ModPolyError::Validation(format!(
                "X^{top} must have constant coefficient, found term [{top},{b}]"
            )));
        }
        Ok(())
    }
}

/// Parses a modular polynomial database text for level `ell`, reducing mod `p`.
pub fn parse_phi<R: BufRead>(reader: R, ell: u64, p: u64) -> Result<PhiPoly, ModPolyError> {
    if !is_prime(ell) {
        return Err(ModPolyError::Validation(format!("level {ell} is not prime")));
    }
    if p < 5 || !is_prime(p) {
        return Err(ModPolyError::Validation(format!("{p} is not a prime >= 5")));
    }
    let top = ell as usize + 1;
    let mut phi = PhiPoly::empty(ell, p);
    let mut seen: HashMap<(usize, usize), u64> = HashMap::new();
    let mut has_leading = false;
    for (idx, line) in reader.lines().enumerate() {
        let lineno = idx + 1;
        let line = line.map_err(|e| ModPolyError::Parse { line: lineno, msg: e.to_string() })?;
        let line = line.trim_end_matches('\r');
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let err = |msg: &str| ModPolyError::Parse { line: lineno, msg: msg.to_string() };
        let rest = line.strip_prefix('[').ok_or_else(|| err("expected '['"))?;
        let (exps, value) = rest.split_once(']').ok_or_else(|| err("expected ']'"))?;
        let (a, b) = exps.split_once(',').ok_or_else(|| err("expected ','"))?;
        let parse_nat = |s: &str| -> Result<usize, ModPolyError> {
            if s.is_empty() || !s.bytes().all(|c| c.is_ascii_digit()) {
                return Err(err(&format!("bad exponent {s:?}")));
            }
            s.parse::<usize>().map_err(|_| err(&format!("bad exponent {s:?}")))
        };
        let (a, b) = (parse_nat(a)?, parse_nat(b)?);
        if a > top || b > top {
            return Err(err(&format!("exponent out of range for l = {ell}")));
        }
        if !value.starts_with(' ') {
            return Err(err("expected space before coefficient"));
        }
        let value = value.trim_start_matches(' ');
        let c = reduce_decimal(value, p).ok_or_else(|| err(&format!("bad coefficient {value:?}")))?;
        let key = (a.max(b), a.min(b));
        if let Some(prev) = seen.insert(key, c) {
            if a == b || prev != c {
                return Err(err(&format!("conflicting entry for [{},{}]", key.0, key.1)));
            }
        }
        if key == (top, 0) {
            has_leading = true;
        }
        phi.set(a, b, c);
    }
    if !has_leading {
        return Err(ModPolyError::Validation(format!("missing leading term [{top},0]")));
    }
    phi.validate()?;
    Ok(phi)
}

pub fn parse_phi_str(text: &str, ell: u64, p: u64) -> Result<PhiPoly, ModPolyError> {
    parse_phi(text.as_bytes(), ell, p)
}

pub fn parse_phi_file(path: &Path, ell: u64, p: u64) -> Result<PhiPoly, ModPolyError> {
    let file = std::fs::File::open(path)
        .map_err(|source| ModPolyError::Io { path: path.to_path_buf(), source })?;
    parse_phi(std::io::BufReader::new(file), ell, p)
}

/// Reads the level of a database file from its leading term `[l+1,0]`.
pub fn infer_level(path: &Path) -> Result<u64, ModPolyError> {
    let text = std::fs::read_to_string(path)
        .map_err(|source| ModPolyError::Io { path: path.to_path_buf(), source })?;
    let mut max_exp = None;
    for (idx, line) in text.lines().enumerate() {
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let exps = line
            .strip_prefix('[')
            .and_then(|r| r.split_once(']'))
            .and_then(|(e, _)| e.split_once(','))
            .and_then(|(a, b)| Some((a.parse::<u64>().ok()?, b.parse::<u64>().ok()?)))
            .ok_or_else(|| ModPolyError::Parse { line: idx + 1, msg: "malformed entry".into() })?;
        max_exp = max_exp.max(Some(exps.0.max(exps.1)));
    }
    match max_exp {
        Some(m) if m >= 2 => Ok(m - 1),
        _ => Err(ModPolyError::Validation("cannot infer level from an empty database".into())),
    }
}

/// Classical `Phi_2` or `Phi_3` reduced mod `p`.
pub fn builtin_phi(ell: u64, p: u64) -> Result<PhiPoly, ModPolyError> {
    match ell {
        2 => Ok(PhiPoly::from_table(2, p, PHI2)),
        3 => Ok(PhiPoly::from_table(3, p, PHI3)),
        _ => Err(ModPolyError::Unsupported(ell)),
    }
}

/// Anything that can hand out `Phi_l mod p` for prime levels `l`.
pub trait PhiSource: Send + Sync {
    fn phi(&self, ell: u64) -> Result<Arc<PhiPoly>, ModPolyError>;

    /// Whether `phi(ell)` can succeed, without loading anything.
    fn has(&self, ell: u64) -> bool;
}

/// Built-in `Phi_2`, `Phi_3` plus user-supplied database files, loaded lazily.
#[derive(Debug)]
pub struct PhiLibrary {
    p: u64,
    files: HashMap<u64, PathBuf>,
    loaded: RwLock<HashMap<u64, Arc<PhiPoly>>>,
}

impl PhiLibrary {
    pub fn new(p: u64) -> Self {
        Self { p, files: HashMap::new(), loaded: RwLock::new(HashMap::new()) }
    }

    pub fn with_file(mut self, ell: u64, path: impl Into<PathBuf>) -> Self {
        self.add_file(ell, path);
        self
    }

    pub fn add_file(&mut self, ell: u64, path: impl Into<PathBuf>) {
        self.files.insert(ell, path.into());
    }

    /// Registers every `phi_j_<l>.txt` in `dir`.
    pub fn add_directory(&mut self, dir: &Path) -> Result<(), ModPolyError> {
        let entries =
            std::fs::read_dir(dir).map_err(|source| ModPolyError::Io { path: dir.to_path_buf(), source })?;
        for entry in entries {
            let entry = entry.map_err(|source| ModPolyError::Io { path: dir.to_path_buf(), source })?;
            let name = entry.file_name();
            let ell = name
                .to_str()
                .and_then(|n| n.strip_prefix("phi_j_"))
                .and_then(|n| n.strip_suffix(".txt"))
                .and_then(|n| n.parse::<u64>().ok());
            if let Some(ell) = ell {
                self.files.insert(ell, entry.path());
            }
        }
        Ok(())
    }

    /// Levels available, sorted.
    pub fn levels(&self) -> Vec<u64> {
        let mut v: Vec<u64> = [2, 3].into_iter().chain(self.files.keys().copied()).collect();
        v.sort_unstable();
        v.dedup();
        v
    }
}

impl PhiSource for PhiLibrary {
    fn phi(&self, ell: u64) -> Result<Arc<PhiPoly>, ModPolyError> {
        if let Some(phi) = self.loaded.read().expect("lock poisoned").get(&ell) {
            return Ok(phi.clone());
        }
        let phi = match self.files.get(&ell) {
            Some(path) => parse_phi_file(path, ell, self.p)?,
            None if ell == 2 || ell == 3 => builtin_phi(ell, self.p)?,
            None => return Err(ModPolyError::Missing(ell)),
        };
        let mut loaded = self.loaded.write().expect("lock poisoned");
        Ok(loaded.entry(ell).or_insert_with(|| Arc::new(phi)).clone())
    }

    fn has(&self, ell: u64) -> bool {
        ell == 2 || ell == 3 || self.files.contains_key(&ell)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{make_fp2, roots_with_multiplicity};

    #[test]
    fn leading_term_line() {
        let phi = parse_phi_str("[3,0] 1\n", 2, 11).unwrap();
        assert_eq!(phi.coeff(3, 0), 1);
        assert_eq!(phi.coeff(0, 3), 1);
    }

    #[test]
    fn negative_coefficient_reduction() {
        // -162000 = -14728 * 11 + 8
        assert_eq!(reduce_decimal("-162000", 11), Some(8));
        let phi = parse_phi_str("[3,0] 1\n[1,1] -162000\n", 2, 11).unwrap();
        assert_eq!(phi.coeff(1, 1), 8);
        assert_eq!(reduce_decimal("-0", 7), Some(0));
        assert_eq!(reduce_decimal("-", 7), None);
        assert_eq!(reduce_decimal("12a", 7), None);
    }

    #[test]
    fn malformed_lines_report_line_numbers() {
        for (text, line) in [
            ("[3,0] 1\n[2,x] 7\n", 2),
            ("# header\n\n[3,0] 1\n[2,1 7\n", 4),
            ("[3,0] 1\n2,1] 7\n", 2),
            ("[3,0] 1\n[2,1] 7b\n", 2),
            ("[3,0] 1\n[2,1]7\n", 2),
            ("[3,0] 1\n[5,0] 1\n", 2),
            ("[3,0] 1\n[1,1] 2\n[1,1] 2\n", 3),
        ] {
            match parse_phi_str(text, 2, 11) {
                Err(ModPolyError::Parse { line: l, .. }) => assert_eq!(l, line, "{text:?}"),
                other => panic!("expected parse error for {text:?}, got {other:?}"),
            }
        }
    }

    #[test]
    fn missing_leading_term() {
        assert!(matches!(parse_phi_str("[2,2] -1\n", 2, 11), Err(ModPolyError::Validation(_))));
        assert!(matches!(parse_phi_str("[3,0] 1\n[3,1] 4\n", 2, 11), Err(ModPolyError::Validation(_))));
    }

    #[test]
    fn symmetric_entries_must_agree() {
        assert!(parse_phi_str("[3,0] 1\n[2,1] 5\n[1,2] 5\n", 2, 11).is_ok());
        assert!(parse_phi_str("[3,0] 1\n[2,1] 5\n[1,2] 6\n", 2, 11).is_err());
    }

    #[test]
    fn builtin_matches_database_text() {
        let text = "[3,0] 1\n[2,2] -1\n[2,1] 1488\n[2,0] -162000\n[1,1] 40773375\n\
                    [1,0] 8748000000\n[0,0] -157464000000000\n";
        for p in [11, 13, 101] {
            assert_eq!(parse_phi_str(text, 2, p).unwrap(), builtin_phi(2, p).unwrap());
        }
        assert!(matches!(builtin_phi(5, 11), Err(ModPolyError::Unsupported(5))));
    }

    #[test]
    fn rows_are_monic_of_degree_l_plus_1() {
        let f = make_fp2(101).unwrap();
        for ell in [2, 3] {
            let phi = builtin_phi(ell, 101).unwrap();
            for j in [f.zero(), f.elem(5, 7), f.from_u64(1728)] {
                let row = phi.row(&f, &j);
                assert_eq!(row.degree(), Some(ell as usize + 1));
                assert!(f.is_one(row.leading().unwrap()));
            }
        }
    }

    #[test]
    fn phi2_rows_for_small_p() {
        // p = 11, j = 0: Phi_2(0, Y) = (Y - 54000)^3 and 54000 = 1 mod 11
        let f = make_fp2(11).unwrap();
        let phi = builtin_phi(2, 11).unwrap();
        let roots = roots_with_multiplicity(&f, &phi.row(&f, &f.zero())).unwrap();
        assert_eq!(roots, vec![(f.from_u64(1), 3)]);
        // p = 13: the unique supersingular j = 5 is 2-isogenous only to itself
        let f = make_fp2(13).unwrap();
        let phi = builtin_phi(2, 13).unwrap();
        let roots = roots_with_multiplicity(&f, &phi.row(&f, &f.from_u64(5))).unwrap();
        assert_eq!(roots, vec![(f.from_u64(5), 3)]);
    }

    #[test]
    fn phi3_row_degree() {
        let phi = builtin_phi(3, 13).unwrap();
        assert_eq!(phi.entries().iter().map(|e| e.0).max(), Some(4));
    }

    #[test]
    fn serialize_round_trip() {
        let phi = builtin_phi(3, 101).unwrap();
        let text = phi.to_database_string();
        assert_eq!(parse_phi_str(&text, 3, 101).unwrap(), phi);
    }

    #[test]
    fn library_reports_missing_levels() {
        let lib = PhiLibrary::new(11);
        assert!(lib.phi(2).is_ok());
        assert!(matches!(lib.phi(5), Err(ModPolyError::Missing(5))));
        assert!(!lib.has(7));
        assert_eq!(lib.levels(), vec![2, 3]);
    }
}
