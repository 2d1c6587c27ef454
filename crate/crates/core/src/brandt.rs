//! Brandt matrices `B(m)` and the Hecke action on the supersingular module.
//!
//! For a prime `l != p`, row `i` of `B(l)` lists the root multiplicities of
//! `Phi_l(j_i, Y)` over the locus. Everything else is assembled from those:
//!
//! * `B(p^k)` is the Frobenius permutation for odd `k` and the identity for even `k`,
//! * `B(l^(k+1)) = B(l) B(l^k) - l B(l^(k-1))`,
//! * `B(ab) = B(a) B(b)` for coprime `a`, `b`.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, RwLock};

use num_traits::Zero;
use rayon::prelude::*;

use crate::arith::roots_with_multiplicity;
use crate::error::{Error, Result};
use crate::modpoly::{PhiPoly, PhiSource};
use crate::ssgraph::SupersingularLocus;
use crate::Rational;

/// Sum of the divisors of `m` that are prime to `p`; the degree of `T_m`.
pub fn sigma_p(m: u64, p: u64) -> u64 {
    assert!(m >= 1, "sigma_p needs m >= 1");
    let mut m_p = m;
    while m_p % p == 0 {
        m_p /= p;
    }
    sigma1(m_p)
}

/// Sum of all divisors of `m >= 1`.
pub fn sigma1(m: u64) -> u64 {
    factorize(m)
        .into_iter()
        .map(|(q, e)| (0..=e).map(|i| q.pow(i)).sum::<u64>())
        .product()
}

/// Number of divisors of `m >= 1`.
pub fn divisor_count(m: u64) -> u64 {
    factorize(m).into_iter().map(|(_, e)| u64::from(e) + 1).product()
}

/// Prime factorization by trial division, primes ascending.
pub fn factorize(mut m: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= m {
        if m % d == 0 {
            let mut e = 0;
            while m % d == 0 {
                m /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if m > 1 {
        out.push((m, 1));
    }
    out
}

/// A square matrix of nonnegative integers with checked arithmetic.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    n: usize,
    data: Vec<u64>,
}

impl IntMatrix {
    pub fn zeros(n: usize) -> Self {
        Self { n, data: vec![0; n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    /// The matrix with a single 1 in row `i` at column `tau[i]`.
    pub fn permutation(tau: &[usize]) -> Self {
        let n = tau.len();
        let mut m = Self::zeros(n);
        for (i, &t) in tau.iter().enumerate() {
            m.data[i * n + t] = 1;
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<u64>>) -> Self {
        let n = rows.len();
        assert!(rows.iter().all(|r| r.len() == n), "matrix must be square");
        Self { n, data: rows.into_iter().flatten().collect() }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.data[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[u64]> {
        self.data.chunks(self.n.max(1)).take(self.n)
    }

    pub fn to_rows(&self) -> Vec<Vec<u64>> {
        self.rows().map(|r| r.to_vec()).collect()
    }

    pub fn row_sums(&self) -> Vec<u64> {
        self.rows().map(|r| r.iter().sum()).collect()
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        assert_eq!(self.n, other.n);
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == 0 {
                    continue;
                }
                for j in 0..n {
                    let t = a.checked_mul(other.data[k * n + j]).ok_or(Error::Overflow("matrix product"))?;
                    let cell = &mut out.data[i * n + j];
                    *cell = cell.checked_add(t).ok_or(Error::Overflow("matrix product"))?;
                }
            }
        }
        Ok(out)
    }

    /// `self - c * other`; a negative entry is reported as an error.
    pub fn checked_sub_scaled(&self, c: u64, other: &Self) -> Result<Self> {
        assert_eq!(self.n, other.n);
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| {
                let cb = c.checked_mul(b).ok_or(Error::Overflow("matrix scaling"))?;
                a.checked_sub(cb)
                    .ok_or_else(|| Error::Consistency("Hecke recursion produced a negative entry".into()))
            })
            .collect::<Result<_>>()?;
        Ok(Self { n: self.n, data })
    }

    pub fn transpose(&self) -> Self {
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out.data[j * n + i] = self.data[i * n + j];
            }
        }
        out
    }

    /// `Some(tau)` if this is a permutation matrix sending row `i` to column `tau[i]`.
    pub fn as_permutation(&self) -> Option<Vec<usize>> {
        let mut tau = Vec::with_capacity(self.n);
        let mut hit = vec![false; self.n];
        for r in self.rows() {
            let ones: Vec<usize> = r.iter().enumerate().filter(|(_, &v)| v != 0).map(|(j, _)| j).collect();
            match ones.as_slice() {
                [j] if r[*j] == 1 && !hit[*j] => {
                    hit[*j] = true;
                    tau.push(*j);
                }
                _ => return None,
            }
        }
        Some(tau)
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .rows()
            .map(|r| format!("[{}]", r.iter().map(u64::to_string).collect::<Vec<_>>().join(",")))
            .collect();
        write!(f, "[{}]", rows.join(","))
    }
}

/// `B(m)` relative to the canonical order of a locus in characteristic `p`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BrandtMatrix {
    m: u64,
    p: u64,
    entries: IntMatrix,
}

impl BrandtMatrix {
    pub fn new(m: u64, p: u64, entries: IntMatrix) -> Self {
        Self { m, p, entries }
    }

    pub fn m(&self) -> u64 {
        self.m
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn n(&self) -> usize {
        self.entries.n()
    }

    pub fn entries(&self) -> &IntMatrix {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.entries.get(i, j)
    }

    pub fn row_sums(&self) -> Vec<u64> {
        self.entries.row_sums()
    }

    /// Whether every row sums to `sigma(m)_p`.
    pub fn has_degree_row_sums(&self) -> bool {
        let d = sigma_p(self.m, self.p);
        self.row_sums().iter().all(|&s| s == d)
    }

    /// Whether `B_{i,j} w_j = B_{j,i} w_i` for all `i, j`.
    pub fn is_weighted_symmetric(&self, weights: &[u32]) -> bool {
        let n = self.n();
        (0..n).all(|i| {
            (0..n).all(|j| {
                u128::from(self.get(i, j)) * u128::from(weights[j])
                    == u128::from(self.get(j, i)) * u128::from(weights[i])
            })
        })
    }
}

/// `B(l)` for a prime `l != p` from the root multiplicities of `Phi_l(j_i, Y)`.
pub fn brandt_prime(locus: &SupersingularLocus, phi: &PhiPoly) -> Result<BrandtMatrix> {
    let ell = phi.ell();
    let p = locus.p();
    if ell == p || phi.p() != p {
        return Err(Error::InvalidArgument(format!("need Phi_l mod {p} with l != p, got Phi_{ell} mod {}", phi.p())));
    }
    let field = locus.field();
    let n = locus.n();
    let rows = (0..n)
        .into_par_iter()
        .map(|i| {
            let row_poly = phi.row(field, &locus.j(i));
            let roots = roots_with_multiplicity(field, &row_poly)?;
            let mut row = vec![0u64; n];
            let mut total = 0u64;
            for (r, mult) in roots {
                let k = locus.index_of(&r).ok_or_else(|| {
                    Error::Consistency(format!("Phi_{ell}({}, Y) has root {r} outside the locus", locus.j(i)))
                })?;
                row[k] += u64::from(mult);
                total += u64::from(mult);
            }
            if total != ell + 1 {
                return Err(Error::Consistency(format!(
                    "Phi_{ell}({}, Y) has {total} roots in the locus, expected {}",
                    locus.j(i),
                    ell + 1
                )));
            }
            Ok(row)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(BrandtMatrix::new(ell, p, IntMatrix::from_rows(rows)))
}

/// `B(p^k)`: the Frobenius permutation for odd `k`, the identity for even `k`.
pub fn brandt_frobenius(locus: &SupersingularLocus, k: u32) -> Result<BrandtMatrix> {
    let p = locus.p();
    let m = p.checked_pow(k).ok_or(Error::Overflow("p^k"))?;
    let entries = if k % 2 == 0 {
        IntMatrix::identity(locus.n())
    } else {
        IntMatrix::permutation(&locus.frobenius_permutation()?)
    };
    Ok(BrandtMatrix::new(m, p, entries))
}

/// Memoizing source of `B(m)` for one locus.
///
/// Safe to share between threads; concurrent requests for the same `m` may both
/// compute it, and the first insertion wins.
pub struct BrandtCache {
    locus: Arc<SupersingularLocus>,
    phis: Arc<dyn PhiSource>,
    memo: RwLock<HashMap<u64, Arc<BrandtMatrix>>>,
}

impl fmt::Debug for BrandtCache {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BrandtCache")
            .field("p", &self.locus.p())
            .field("n", &self.locus.n())
            .field("cached", &self.memo.read().map(|m| m.len()).unwrap_or(0))
            .finish()
    }
}

impl BrandtCache {
    pub fn new(locus: Arc<SupersingularLocus>, phis: Arc<dyn PhiSource>) -> Self {
        Self { locus, phis, memo: RwLock::new(HashMap::new()) }
    }

    pub fn locus(&self) -> &Arc<SupersingularLocus> {
        &self.locus
    }

    pub fn phi_source(&self) -> &Arc<dyn PhiSource> {
        &self.phis
    }

    pub fn p(&self) -> u64 {
        self.locus.p()
    }

    /// Whether `B(m)` can be computed with the available modular polynomials.
    pub fn is_computable(&self, m: u64) -> bool {
        m >= 1 && factorize(m).into_iter().all(|(q, _)| q == self.p() || self.phis.has(q))
    }

    fn lookup(&self, m: u64) -> Option<Arc<BrandtMatrix>> {
        self.memo.read().expect("lock poisoned").get(&m).cloned()
    }

    fn store(&self, b: BrandtMatrix) -> Arc<BrandtMatrix> {
        let mut memo = self.memo.write().expect("lock poisoned");
        memo.entry(b.m()).or_insert_with(|| Arc::new(b)).clone()
    }

    /// `B(m)` for any `m >= 1`.
    pub fn brandt(&self, m: u64) -> Result<Arc<BrandtMatrix>> {
        if m == 0 {
            return Err(Error::InvalidArgument("Brandt matrices are indexed by m >= 1".into()));
        }
        if let Some(b) = self.lookup(m) {
            return Ok(b);
        }
        let p = self.p();
        let n = self.locus.n();
        let factors = factorize(m);
        if let Some(&(q, _)) = factors.iter().find(|(q, _)| *q != p && !self.phis.has(*q)) {
            return Err(Error::ModPoly(crate::modpoly::ModPolyError::Missing(q)));
        }
        let mut acc = IntMatrix::identity(n);
        let mut p_exp = 0;
        for (q, e) in factors {
            if q == p {
                p_exp = e;
                continue;
            }
            let block = self.prime_power(q, e)?;
            acc = acc.checked_mul(block.entries())?;
        }
        if p_exp > 0 {
            let frob = brandt_frobenius(&self.locus, p_exp)?;
            acc = frob.entries().checked_mul(&acc)?;
        }
        Ok(self.store(BrandtMatrix::new(m, p, acc)))
    }

    fn prime_power(&self, ell: u64, e: u32) -> Result<Arc<BrandtMatrix>> {
        let m = ell.checked_pow(e).ok_or(Error::Overflow("prime power"))?;
        if let Some(b) = self.lookup(m) {
            return Ok(b);
        }
        let b = match e {
            0 => BrandtMatrix::new(1, self.p(), IntMatrix::identity(self.locus.n())),
            1 => brandt_prime(&self.locus, self.phis.phi(ell)?.as_ref())?,
            _ => {
                let b1 = self.prime_power(ell, 1)?;
                let prev = self.prime_power(ell, e - 1)?;
                let prev2 = self.prime_power(ell, e - 2)?;
                let prod = b1.entries().checked_mul(prev.entries())?;
                BrandtMatrix::new(m, self.p(), prod.checked_sub_scaled(ell, prev2.entries())?)
            }
        };
        Ok(self.store(b))
    }
}

/// An element `sum a_i E_i` of the supersingular module tensored with `Q`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Divisor {
    p: u64,
    coeffs: Vec<Rational>,
}

impl Divisor {
    pub fn new(locus: &SupersingularLocus, coeffs: Vec<Rational>) -> Result<Self> {
        if coeffs.len() != locus.n() {
            return Err(Error::LocusMismatch);
        }
        Ok(Self { p: locus.p(), coeffs })
    }

    /// The class `E_i` itself.
    pub fn basis(locus: &SupersingularLocus, i: usize) -> Self {
        let mut coeffs = vec![Rational::zero(); locus.n()];
        coeffs[i] = Rational::from_integer(1);
        Self { p: locus.p(), coeffs }
    }

    /// The Eisenstein element `e = sum (1/w_i) E_i`.
    pub fn eisenstein(locus: &SupersingularLocus) -> Self {
        let coeffs = locus.weights().iter().map(|&w| Rational::new(1, i128::from(w))).collect();
        Self { p: locus.p(), coeffs }
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn degree(&self) -> Rational {
        self.coeffs.iter().sum()
    }

    /// Whether all coefficients are nonnegative and not all zero.
    pub fn is_effective_nonzero(&self) -> bool {
        self.coeffs.iter().all(|c| *c >= Rational::zero()) && self.coeffs.iter().any(|c| !c.is_zero())
    }

    pub fn scale(&self, c: Rational) -> Self {
        Self { p: self.p, coeffs: self.coeffs.iter().map(|a| a * c).collect() }
    }
}

/// `T_m D` where `T_m E_i = sum_j B_{i,j}(m) E_j`.
pub fn hecke_apply(b: &BrandtMatrix, d: &Divisor) -> Result<Divisor> {
    if b.p() != d.p || b.n() != d.coeffs.len() {
        return Err(Error::LocusMismatch);
    }
    let n = b.n();
    let coeffs = (0..n)
        .map(|j| {
            d.coeffs
                .iter()
                .enumerate()
                .map(|(i, a)| a * Rational::from_integer(i128::from(b.get(i, j))))
                .sum()
        })
        .collect();
    Ok(Divisor { p: d.p, coeffs })
}
