//! Exact finite-field arithmetic.
//!
//! Fields are "ring objects": a field value carries the modulus data and
//! elements are plain values that do not know which field they belong to.
//! Every operation goes through the field, e.g. `field.mul(&a, &b)`.
//!
//! Three implementations are provided:
//!
//! * [`PrimeField`] for `F_p`,
//! * [`Fp2`] for `F_{p^2} = F_p[u]/(u^2 - r)` with `r` the smallest quadratic
//!   nonresidue, which is where every supersingular j-invariant lives,
//! * [`ExtField`], a generic extension `K[t]/(g)` of any finite field `K` by a
//!   monic irreducible `g`. The isogeny oracle uses it for splitting fields of
//!   torsion polynomials over `F_{p^2}`.
//!
//! Univariate polynomials over any of these live in [`poly`].

mod ext;
mod fp2;
pub mod poly;
mod prime;

use std::fmt::Debug;
use std::hash::Hash;

use rand::Rng;
use thiserror::Error;

pub use ext::ExtField;
pub use fp2::{make_fp2, Fp2, Fp2Elem};
pub use poly::{roots_with_multiplicity, roots_with_multiplicity_seeded, Poly, PolyRing};
pub use prime::PrimeField;

/// Seed used by randomized routines when the caller does not supply one.
pub const DEFAULT_SEED: u64 = 0x5eed_0001;

/// Largest admissible characteristic (exclusive). Products of two residues
/// must fit in a `u64` accumulator.
pub const MAX_CHARACTERISTIC: u64 = 1 << 31;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("characteristic {0} is unsupported (need 5 <= p < 2^31)")]
    UnsupportedCharacteristic(u64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("element does not belong to this field")]
    ContextMismatch,
    #[error("modulus polynomial is not irreducible")]
    ReducibleModulus,
    #[error("modulus polynomial must be monic of degree >= 1")]
    BadModulus,
    #[error("the zero polynomial has no finite root multiset")]
    ZeroPolynomial,
}

/// A finite field of odd characteristic, used as a ring object.
pub trait FiniteField: Clone + Debug + Send + Sync {
    type Elem: Clone + PartialEq + Eq + Hash + Ord + Debug + Send + Sync;

    fn characteristic(&self) -> u64;

    /// Degree over the prime field.
    fn degree(&self) -> u32;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_u64(&self, v: u64) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;

    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Result<Self::Elem, ArithError>;

    /// Uniformly random element.
    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Self::Elem;

    /// Checks that `a` is a well-formed element of this field.
    fn validate(&self, a: &Self::Elem) -> Result<(), ArithError>;

    fn from_i64(&self, v: i64) -> Self::Elem {
        let p = self.characteristic() as i64;
        self.from_u64(v.rem_euclid(p) as u64)
    }

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem, ArithError> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    fn square(&self, a: &Self::Elem) -> Self::Elem {
        self.mul(a, a)
    }

    fn pow(&self, a: &Self::Elem, mut e: u64) -> Self::Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.square(&base);
            }
        }
        acc
    }

    /// The absolute Frobenius `a -> a^p`.
    fn frobenius(&self, a: &Self::Elem) -> Self::Elem {
        self.pow(a, self.characteristic())
    }

    /// Whether `a` lies in the prime field, i.e. is fixed by Frobenius.
    fn in_prime_field(&self, a: &Self::Elem) -> bool {
        self.frobenius(a) == *a
    }

    /// `a^((q-1)/2)` where `q` is the field order, computed without forming `q`.
    fn quadratic_character_power(&self, a: &Self::Elem) -> Self::Elem {
        // (q-1)/2 = (1 + p + ... + p^(d-1)) * (p-1)/2
        let p = self.characteristic();
        let mut conj = a.clone();
        let mut norm = a.clone();
        for _ in 1..self.degree() {
            conj = self.frobenius(&conj);
            norm = self.mul(&norm, &conj);
        }
        self.pow(&norm, (p - 1) / 2)
    }

    fn is_square(&self, a: &Self::Elem) -> bool {
        self.is_zero(a) || self.is_one(&self.quadratic_character_power(a))
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

pub(crate) fn check_characteristic(p: u64) -> Result<(), ArithError> {
    if p < 5 || p >= MAX_CHARACTERISTIC {
        return Err(ArithError::UnsupportedCharacteristic(p));
    }
    if !is_prime(p) {
        return Err(ArithError::NotPrime(p));
    }
    Ok(())
}

#[inline]
pub(crate) fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    a * b % p
}

pub(crate) fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, a, p);
        }
        a = mul_mod(a, a, p);
        e >>= 1;
    }
    acc
}

/// Inverses of `1..n` modulo `p` (index 0 unused), for `n < p`.
pub fn inverse_table(n: usize, p: u64) -> Vec<u64> {
    let mut inv = vec![0u64; n.max(1) + 1];
    if n >= 1 {
        inv[1] = 1;
    }
    for i in 2..=n {
        let i64_ = i as u64;
        inv[i] = (p - (p / i64_) * inv[(p % i64_) as usize] % p) % p;
    }
    inv
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primality() {
        let primes: Vec<u64> = (0..40).filter(|&n| is_prime(n)).collect();
        assert_eq!(primes, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37]);
        assert!(is_prime(2_147_483_647));
    }

    #[test]
    fn inverse_table_matches_fermat() {
        let p = 101;
        let inv = inverse_table(100, p);
        for i in 1..=100u64 {
            assert_eq!(inv[i as usize], pow_mod(i, p - 2, p));
        }
    }

    #[test]
    fn characteristic_checks() {
        assert_eq!(check_characteristic(9), Err(ArithError::NotPrime(9)));
        assert_eq!(check_characteristic(3), Err(ArithError::UnsupportedCharacteristic(3)));
        assert!(check_characteristic(11).is_ok());
    }
}
