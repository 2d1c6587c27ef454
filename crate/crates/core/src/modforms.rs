//! Weight-2 Eisenstein coefficients for `Gamma_0(p)` and the cusp residuals
//! left over once the Eisenstein part is removed from a Brandt entry.
//!
//! Writing `m = p^k m'` with `p` not dividing `m'`:
//!
//! * `a_m = p^k sigma_1(m')`,
//! * `b_m = sigma_1(m')` if `k = 0`, else `(p + 1 - p^(k+1)) sigma_1(m')`,
//! * `f0 = 1 + 24/(p^2 - 1) sum (p a_n + b_n) q^n`,
//! * `c_m(i, j) = B_{i,j}(m) - 12 (p a_m + b_m) / (w_j (p^2 - 1))`.
//!
//! The sign in `b_{p^k m'} = b_{p^k} b_{m'}` is the one that makes
//! `p a_n + b_n = (p + 1) sigma_1(m')`, i.e. `f0 = 1 + 24/(p-1) sum sigma*(n) q^n`
//! with `sigma*` the divisor sum prime to `p`. The opposite sign would give `T_m`
//! and `T_{pm}` different Eisenstein parts although `B(pm) = B(p) B(m)`.
//!
//! Everything is exact; only [`deligne_ratio`] returns a float.

use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::brandt::{divisor_count, sigma1, BrandtCache};
use crate::error::{Error, Result};
use crate::Rational;

/// Splits `m = p^k m'` with `p` not dividing `m'`.
pub fn split_p_part(m: u64, p: u64) -> (u32, u64) {
    let (mut k, mut rest) = (0, m);
    while rest % p == 0 {
        rest /= p;
        k += 1;
    }
    (k, rest)
}

/// Fourier coefficients of the two Eisenstein series spanning the Eisenstein
/// part of `M_2(Gamma_0(p))`, and of their combination `f0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EisensteinData {
    p: u64,
}

impl EisensteinData {
    pub fn new(p: u64) -> Self {
        Self { p }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    fn p_power(&self, k: u32) -> Result<i128> {
        i128::from(self.p).checked_pow(k).ok_or(Error::Overflow("Eisenstein coefficient"))
    }

    /// `a_n`.
    pub fn coeff_a(&self, n: u64) -> Result<i128> {
        check_index(n)?;
        let (k, rest) = split_p_part(n, self.p);
        self.p_power(k)?
            .checked_mul(i128::from(sigma1(rest)))
            .ok_or(Error::Overflow("Eisenstein coefficient"))
    }

    /// `b_{p^k} = p + 1 - p^(k+1)` for `k >= 1`.
    fn b_prime_power(&self, k: u32) -> Result<i128> {
        let pk1 = self.p_power(k + 1)?;
        Ok(i128::from(self.p) + 1 - pk1)
    }

    /// `b_n`.
    pub fn coeff_b(&self, n: u64) -> Result<i128> {
        check_index(n)?;
        let (k, rest) = split_p_part(n, self.p);
        let s = i128::from(sigma1(rest));
        if k == 0 {
            return Ok(s);
        }
        self.b_prime_power(k)?
            .checked_mul(s)
            .ok_or(Error::Overflow("Eisenstein coefficient"))
    }

    /// `p a_m + b_m`.
    pub fn eisenstein_sum(&self, m: u64) -> Result<i128> {
        let (a, b) = (self.coeff_a(m)?, self.coeff_b(m)?);
        i128::from(self.p)
            .checked_mul(a)
            .and_then(|x| x.checked_add(b))
            .ok_or(Error::Overflow("Eisenstein coefficient"))
    }

    /// Coefficient of `q^m` in `f0`.
    pub fn f0_coeff(&self, m: u64) -> Result<Rational> {
        if m == 0 {
            return Ok(Rational::from_integer(1));
        }
        let p2m1 = i128::from(self.p * self.p - 1);
        Ok(Rational::new(24 * self.eisenstein_sum(m)?, p2m1))
    }
}

fn check_index(n: u64) -> Result<()> {
    if n == 0 {
        Err(Error::InvalidArgument("Fourier coefficients are indexed by n >= 1".into()))
    } else {
        Ok(())
    }
}

/// `12 (p a_m + b_m) / (w (p^2 - 1))`: the Eisenstein part of `B_{i,j}(m)` for a target of weight `w`.
pub fn eisenstein_part(data: &EisensteinData, w: u32, m: u64) -> Result<Rational> {
    let p = data.p();
    let den = i128::from(w) * i128::from(p * p - 1);
    Ok(Rational::new(12 * data.eisenstein_sum(m)?, den))
}

/// `c_m(i, j)`, using the general formula valid for all `m >= 1`.
pub fn cusp_residual(cache: &BrandtCache, i: usize, j: usize, m: u64) -> Result<Rational> {
    let b = cache.brandt(m)?;
    let data = EisensteinData::new(cache.p());
    let w = cache.locus().weight(j);
    let c = Rational::from_integer(i128::from(b.get(i, j))) - eisenstein_part(&data, w, m)?;
    if m % cache.p() != 0 {
        let simple = cusp_residual_coprime(b.get(i, j), w, m, cache.p());
        if simple != c {
            return Err(Error::Consistency(format!(
                "residual formulas disagree at m = {m}: {c} vs {simple}"
            )));
        }
    }
    Ok(c)
}

/// `B - 12 sigma_1(m) / (w (p - 1))`, the form of the residual when `p` does not divide `m`.
pub fn cusp_residual_coprime(entry: u64, w: u32, m: u64, p: u64) -> Rational {
    let den = i128::from(w) * i128::from(p - 1);
    Rational::from_integer(i128::from(entry)) - Rational::new(12 * i128::from(sigma1(m)), den)
}

/// All `c_m(i, j)` for one `m`, row-major.
pub fn cusp_residual_matrix(cache: &BrandtCache, m: u64) -> Result<Vec<Vec<Rational>>> {
    let n = cache.locus().n();
    (0..n)
        .map(|i| (0..n).map(|j| cusp_residual(cache, i, j, m)).collect())
        .collect()
}

/// Whether `w_j (p^2 - 1) c` is an integer.
pub fn has_expected_denominator(c: &Rational, w: u32, p: u64) -> bool {
    let scale = i128::from(w) * i128::from(p * p - 1);
    (c * Rational::from_integer(scale)).is_integer()
}

/// `|c_m| / (d(m) sqrt(m))` for `p` not dividing `m`.
pub fn deligne_ratio(cache: &BrandtCache, i: usize, j: usize, m: u64) -> Result<f64> {
    if m % cache.p() == 0 {
        return Err(Error::InvalidArgument(format!("the Deligne ratio needs p not dividing m, got m = {m}")));
    }
    let c = cusp_residual(cache, i, j, m)?;
    Ok(ratio_to_f64(&c.abs()) / (divisor_count(m) as f64 * (m as f64).sqrt()))
}

/// The largest Deligne ratio over all pairs `(i, j)`.
pub fn max_deligne_ratio(cache: &BrandtCache, m: u64) -> Result<f64> {
    let n = cache.locus().n();
    let mut best = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            best = best.max(deligne_ratio(cache, i, j, m)?);
        }
    }
    Ok(best)
}

/// Sum over `j` of `B_{i,j}(m) - 12 sigma_1(m)/(w_j (p - 1))`; zero for every `i` when `p` does not divide `m`.
pub fn row_residual_sum(cache: &BrandtCache, i: usize, m: u64) -> Result<Rational> {
    let b = cache.brandt(m)?;
    let locus = cache.locus();
    Ok((0..locus.n())
        .map(|j| cusp_residual_coprime(b.get(i, j), locus.weight(j), m, cache.p()))
        .fold(Rational::zero(), |acc, c| acc + c))
}

/// Nearest double to an exact rational.
pub fn ratio_to_f64(r: &Rational) -> f64 {
    let (n, d) = (*r.numer(), *r.denom());
    let g = n.gcd(&d);
    (n / g) as f64 / (d / g) as f64
}
