use std::fmt;

use rand::Rng;

use super::{check_characteristic, mul_mod, pow_mod, ArithError, FiniteField, PrimeField};

/// An element `c0 + c1*u` of `F_{p^2}`.
///
/// The derived ordering is lexicographic on `(c0, c1)`; it is only used to
/// make root lists deterministic, not for the canonical locus order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fp2Elem {
    c0: u64,
    c1: u64,
}

impl Fp2Elem {
    pub fn coords(&self) -> (u64, u64) {
        (self.c0, self.c1)
    }

    pub fn is_base(&self) -> bool {
        self.c1 == 0
    }
}

impl fmt::Display for Fp2Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.c1 == 0 {
            write!(f, "{}", self.c0)
        } else {
            write!(f, "{}+{}*u", self.c0, self.c1)
        }
    }
}

/// `F_{p^2} = F_p[u]/(u^2 - r)` where `r` is the smallest quadratic nonresidue mod `p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Fp2 {
    p: u64,
    r: u64,
}

/// Builds `F_{p^2}` with the fixed modulus `u^2 - r`, `r` the smallest nonresidue.
pub fn make_fp2(p: u64) -> Result<Fp2, ArithError> {
    Fp2::new(p)
}

impl Fp2 {
    pub fn new(p: u64) -> Result<Self, ArithError> {
        check_characteristic(p)?;
        let r = (2..p)
            .find(|&r| pow_mod(r, (p - 1) / 2, p) == p - 1)
            .expect("an odd prime has a quadratic nonresidue");
        Ok(Self { p, r })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    /// The constant `r` in the modulus `u^2 - r`.
    pub fn nonresidue(&self) -> u64 {
        self.r
    }

    pub fn base_field(&self) -> PrimeField {
        PrimeField::new(self.p).expect("validated at construction")
    }

    /// Builds `a + b*u`, reducing both coordinates.
    pub fn elem(&self, a: u64, b: u64) -> Fp2Elem {
        Fp2Elem { c0: a % self.p, c1: b % self.p }
    }

    /// Builds `a + b*u` without reduction, rejecting out-of-range coordinates.
    pub fn try_elem(&self, a: u64, b: u64) -> Result<Fp2Elem, ArithError> {
        let e = Fp2Elem { c0: a, c1: b };
        self.validate(&e)?;
        Ok(e)
    }

    /// The generator `u` with `u^2 = r`.
    pub fn gen(&self) -> Fp2Elem {
        Fp2Elem { c0: 0, c1: 1 }
    }

    pub fn conjugate(&self, a: &Fp2Elem) -> Fp2Elem {
        Fp2Elem { c0: a.c0, c1: (self.p - a.c1) % self.p }
    }

    /// `a * conj(a)`, an element of `F_p`.
    pub fn norm(&self, a: &Fp2Elem) -> u64 {
        let p = self.p;
        let t0 = mul_mod(a.c0, a.c0, p);
        let t1 = mul_mod(self.r, mul_mod(a.c1, a.c1, p), p);
        (t0 + p - t1) % p
    }

    /// Iterates over all `p^2` elements, base field first.
    pub fn elements(&self) -> impl Iterator<Item = Fp2Elem> + '_ {
        (0..self.p).flat_map(move |b| (0..self.p).map(move |a| Fp2Elem { c0: a, c1: b }))
    }
}

impl FiniteField for Fp2 {
    type Elem = Fp2Elem;

    fn characteristic(&self) -> u64 {
        self.p
    }

    fn degree(&self) -> u32 {
        2
    }

    fn zero(&self) -> Fp2Elem {
        Fp2Elem { c0: 0, c1: 0 }
    }

    fn one(&self) -> Fp2Elem {
        Fp2Elem { c0: 1, c1: 0 }
    }

    fn from_u64(&self, v: u64) -> Fp2Elem {
        Fp2Elem { c0: v % self.p, c1: 0 }
    }

    fn is_zero(&self, a: &Fp2Elem) -> bool {
        a.c0 == 0 && a.c1 == 0
    }

    fn add(&self, a: &Fp2Elem, b: &Fp2Elem) -> Fp2Elem {
        let p = self.p;
        let c0 = a.c0 + b.c0;
        let c1 = a.c1 + b.c1;
        Fp2Elem {
            c0: if c0 >= p { c0 - p } else { c0 },
            c1: if c1 >= p { c1 - p } else { c1 },
        }
    }

    fn sub(&self, a: &Fp2Elem, b: &Fp2Elem) -> Fp2Elem {
        let p = self.p;
        Fp2Elem {
            c0: if a.c0 >= b.c0 { a.c0 - b.c0 } else { a.c0 + p - b.c0 },
            c1: if a.c1 >= b.c1 { a.c1 - b.c1 } else { a.c1 + p - b.c1 },
        }
    }

    fn neg(&self, a: &Fp2Elem) -> Fp2Elem {
        let p = self.p;
        Fp2Elem { c0: (p - a.c0) % p, c1: (p - a.c1) % p }
    }

    fn mul(&self, a: &Fp2Elem, b: &Fp2Elem) -> Fp2Elem {
        let p = self.p;
        let t00 = a.c0 * b.c0 % p;
        let t11 = a.c1 * b.c1 % p;
        let c0 = (t00 + self.r * t11) % p;
        let c1 = (a.c0 * b.c1 + a.c1 * b.c0) % p;
        Fp2Elem { c0, c1 }
    }

    fn inv(&self, a: &Fp2Elem) -> Result<Fp2Elem, ArithError> {
        let n = self.norm(a);
        if n == 0 {
            return Err(ArithError::DivisionByZero);
        }
        let ninv = pow_mod(n, self.p - 2, self.p);
        let c = self.conjugate(a);
        Ok(Fp2Elem { c0: mul_mod(c.c0, ninv, self.p), c1: mul_mod(c.c1, ninv, self.p) })
    }

    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Fp2Elem {
        Fp2Elem { c0: rng.gen_range(0..self.p), c1: rng.gen_range(0..self.p) }
    }

    fn validate(&self, a: &Fp2Elem) -> Result<(), ArithError> {
        if a.c0 < self.p && a.c1 < self.p {
            Ok(())
        } else {
            Err(ArithError::ContextMismatch)
        }
    }

    fn frobenius(&self, a: &Fp2Elem) -> Fp2Elem {
        self.conjugate(a)
    }

    fn in_prime_field(&self, a: &Fp2Elem) -> bool {
        a.c1 == 0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn modulus_choice() {
        assert_eq!(make_fp2(11).unwrap().nonresidue(), 2);
        assert_eq!(make_fp2(13).unwrap().nonresidue(), 2);
        assert_eq!(make_fp2(7).unwrap().nonresidue(), 3);
        assert_eq!(make_fp2(9), Err(ArithError::NotPrime(9)));
        assert_eq!(make_fp2(3), Err(ArithError::UnsupportedCharacteristic(3)));
    }

    #[test]
    fn u_squared_is_r() {
        let f = make_fp2(11).unwrap();
        let u = f.gen();
        assert_eq!(f.mul(&u, &u), f.from_u64(2));
    }

    #[test]
    fn frobenius_of_u_in_f121() {
        let f = make_fp2(11).unwrap();
        let u = f.gen();
        // u^11 = (u^2)^5 u = 32 u = 10 u
        assert_eq!(f.pow(&u, 11), f.elem(0, 10));
        assert_eq!(f.frobenius(&u), f.elem(0, 10));
        assert_eq!(f.frobenius(&f.frobenius(&u)), u);
    }

    #[test]
    fn inverse_and_errors() {
        let f = make_fp2(101).unwrap();
        assert_eq!(f.inv(&f.one()).unwrap(), f.one());
        assert_eq!(f.inv(&f.zero()), Err(ArithError::DivisionByZero));
        let a = f.elem(17, 33);
        assert_eq!(f.mul(&a, &f.inv(&a).unwrap()), f.one());
        let foreign = make_fp2(13).unwrap().elem(0, 12);
        assert!(make_fp2(11).unwrap().validate(&foreign).is_err());
        assert!(f.try_elem(101, 0).is_err());
    }

    #[test]
    fn frobenius_fixes_exactly_the_base_field() {
        for p in [11u64, 13] {
            let f = make_fp2(p).unwrap();
            let fixed = f.elements().filter(|a| f.pow(a, p) == *a).count();
            assert_eq!(fixed as u64, p);
            for a in f.elements() {
                assert_eq!(f.pow(&a, p), f.frobenius(&a));
                assert_eq!(f.frobenius(&f.frobenius(&a)), a);
            }
        }
    }

    #[test]
    fn display() {
        let f = make_fp2(11).unwrap();
        assert_eq!(f.elem(5, 0).to_string(), "5");
        assert_eq!(f.elem(3, 7).to_string(), "3+7*u");
    }
}
