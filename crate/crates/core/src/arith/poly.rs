//! Dense univariate polynomials over a [`FiniteField`], gcds, and root finding.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{ArithError, FiniteField, DEFAULT_SEED};

/// A dense polynomial, lowest degree first. The leading coefficient is nonzero
/// unless the polynomial is zero, in which case `coeffs` is empty.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Poly<E> {
    coeffs: Vec<E>,
}

impl<E> Poly<E> {
    pub fn coeffs(&self) -> &[E] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<E> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&E> {
        self.coeffs.last()
    }
}

/// Polynomial arithmetic over a borrowed field.
#[derive(Debug, Clone, Copy)]
pub struct PolyRing<'a, F: FiniteField> {
    field: &'a F,
}

impl<'a, F: FiniteField> PolyRing<'a, F> {
    pub fn new(field: &'a F) -> Self {
        Self { field }
    }

    pub fn field(&self) -> &'a F {
        self.field
    }

    /// Builds a polynomial from coefficients (lowest degree first), trimming zeros.
    pub fn from_coeffs(&self, mut coeffs: Vec<F::Elem>) -> Poly<F::Elem> {
        while coeffs.last().is_some_and(|c| self.field.is_zero(c)) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero(&self) -> Poly<F::Elem> {
        Poly { coeffs: Vec::new() }
    }

    pub fn one(&self) -> Poly<F::Elem> {
        self.constant(self.field.one())
    }

    pub fn constant(&self, c: F::Elem) -> Poly<F::Elem> {
        self.from_coeffs(vec![c])
    }

    /// The polynomial `X`.
    pub fn x(&self) -> Poly<F::Elem> {
        Poly { coeffs: vec![self.field.zero(), self.field.one()] }
    }

    /// `X - r`.
    pub fn linear(&self, r: &F::Elem) -> Poly<F::Elem> {
        Poly { coeffs: vec![self.field.neg(r), self.field.one()] }
    }

    /// `prod (X - r_i)`.
    pub fn from_roots<'b>(&self, roots: impl IntoIterator<Item = &'b F::Elem>) -> Poly<F::Elem>
    where
        F::Elem: 'b,
    {
        roots.into_iter().fold(self.one(), |acc, r| self.mul(&acc, &self.linear(r)))
    }

    pub fn validate(&self, f: &Poly<F::Elem>) -> Result<(), ArithError> {
        f.coeffs.iter().try_for_each(|c| self.field.validate(c))?;
        if f.coeffs.last().is_some_and(|c| self.field.is_zero(c)) {
            return Err(ArithError::ContextMismatch);
        }
        Ok(())
    }

    pub fn add(&self, a: &Poly<F::Elem>, b: &Poly<F::Elem>) -> Poly<F::Elem> {
        let (long, short) = if a.coeffs.len() >= b.coeffs.len() { (a, b) } else { (b, a) };
        let mut out = long.coeffs.clone();
        for (o, s) in out.iter_mut().zip(&short.coeffs) {
            *o = self.field.add(o, s);
        }
        self.from_coeffs(out)
    }

    pub fn neg(&self, a: &Poly<F::Elem>) -> Poly<F::Elem> {
        Poly { coeffs: a.coeffs.iter().map(|c| self.field.neg(c)).collect() }
    }

    pub fn sub(&self, a: &Poly<F::Elem>, b: &Poly<F::Elem>) -> Poly<F::Elem> {
        self.add(a, &self.neg(b))
    }

    pub fn scale(&self, a: &Poly<F::Elem>, c: &F::Elem) -> Poly<F::Elem> {
        self.from_coeffs(a.coeffs.iter().map(|x| self.field.mul(x, c)).collect())
    }

    pub fn mul(&self, a: &Poly<F::Elem>, b: &Poly<F::Elem>) -> Poly<F::Elem> {
        if a.is_zero() || b.is_zero() {
            return self.zero();
        }
        let f = self.field;
        let mut out = vec![f.zero(); a.coeffs.len() + b.coeffs.len() - 1];
        for (i, x) in a.coeffs.iter().enumerate() {
            if f.is_zero(x) {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                out[i + j] = f.add(&out[i + j], &f.mul(x, y));
            }
        }
        self.from_coeffs(out)
    }

    pub fn eval(&self, a: &Poly<F::Elem>, x: &F::Elem) -> F::Elem {
        let f = self.field;
        a.coeffs.iter().rev().fold(f.zero(), |acc, c| f.add(&f.mul(&acc, x), c))
    }

    pub fn derivative(&self, a: &Poly<F::Elem>) -> Poly<F::Elem> {
        let f = self.field;
        self.from_coeffs(
            a.coeffs.iter().enumerate().skip(1).map(|(i, c)| f.mul(c, &f.from_u64(i as u64))).collect(),
        )
    }

    /// Scales `a` to be monic. The zero polynomial is returned unchanged.
    pub fn monic(&self, a: &Poly<F::Elem>) -> Poly<F::Elem> {
        match a.leading() {
            None => a.clone(),
            Some(lc) if self.field.is_one(lc) => a.clone(),
            Some(lc) => {
                let inv = self.field.inv(lc).expect("leading coefficient is nonzero");
                self.scale(a, &inv)
            }
        }
    }

    /// Euclidean division `a = q*b + r` with `deg r < deg b`.
    pub fn div_rem(
        &self,
        a: &Poly<F::Elem>,
        b: &Poly<F::Elem>,
    ) -> Result<(Poly<F::Elem>, Poly<F::Elem>), ArithError> {
        let f = self.field;
        let db = b.degree().ok_or(ArithError::DivisionByZero)?;
        let lc_inv = f.inv(b.leading().expect("nonzero"))?;
        let mut rem = a.coeffs.clone();
        if rem.len() <= db {
            return Ok((self.zero(), a.clone()));
        }
        let mut quot = vec![f.zero(); rem.len() - db];
        for k in (0..quot.len()).rev() {
            let c = f.mul(&rem[k + db], &lc_inv);
            if f.is_zero(&c) {
                continue;
            }
            for (i, bc) in b.coeffs.iter().enumerate() {
                rem[k + i] = f.sub(&rem[k + i], &f.mul(&c, bc));
            }
            quot[k] = c;
        }
        rem.truncate(db);
        Ok((self.from_coeffs(quot), self.from_coeffs(rem)))
    }

    pub fn rem(&self, a: &Poly<F::Elem>, b: &Poly<F::Elem>) -> Poly<F::Elem> {
        self.div_rem(a, b).expect("nonzero modulus").1
    }

    /// Exact quotient; `None` if `b` does not divide `a`.
    pub fn div_exact(&self, a: &Poly<F::Elem>, b: &Poly<F::Elem>) -> Option<Poly<F::Elem>> {
        match self.div_rem(a, b) {
            Ok((q, r)) if r.is_zero() => Some(q),
            _ => None,
        }
    }

    /// Monic gcd; `gcd(0, 0) = 0`.
    pub fn gcd(&self, a: &Poly<F::Elem>, b: &Poly<F::Elem>) -> Poly<F::Elem> {
        let mut a = a.clone();
        let mut b = b.clone();
        while !b.is_zero() {
            let r = self.rem(&a, &b);
            a = b;
            b = r;
        }
        self.monic(&a)
    }

    /// Returns `(g, s)` with `g = gcd(a, m)` monic and `s*a = g (mod m)`.
    pub fn gcd_with_cofactor(
        &self,
        a: &Poly<F::Elem>,
        m: &Poly<F::Elem>,
    ) -> (Poly<F::Elem>, Poly<F::Elem>) {
        let (mut r0, mut r1) = (m.clone(), a.clone());
        let (mut s0, mut s1) = (self.zero(), self.one());
        while !r1.is_zero() {
            let (q, r) = self.div_rem(&r0, &r1).expect("nonzero divisor");
            let s = self.sub(&s0, &self.mul(&q, &s1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
        }
        match r0.leading() {
            None => (r0, s0),
            Some(lc) => {
                let inv = self.field.inv(lc).expect("nonzero");
                (self.scale(&r0, &inv), self.scale(&s0, &inv))
            }
        }
    }

    pub fn mul_mod(
        &self,
        a: &Poly<F::Elem>,
        b: &Poly<F::Elem>,
        m: &Poly<F::Elem>,
    ) -> Poly<F::Elem> {
        self.rem(&self.mul(a, b), m)
    }

    pub fn pow_mod(&self, a: &Poly<F::Elem>, mut e: u64, m: &Poly<F::Elem>) -> Poly<F::Elem> {
        let mut base = self.rem(a, m);
        let mut acc = self.rem(&self.one(), m);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_mod(&acc, &base, m);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul_mod(&base, &base, m);
            }
        }
        acc
    }

    /// `a^q mod m` where `q` is the order of the coefficient field.
    pub fn pow_field_order_mod(&self, a: &Poly<F::Elem>, m: &Poly<F::Elem>) -> Poly<F::Elem> {
        let p = self.field.characteristic();
        (0..self.field.degree()).fold(self.rem(a, m), |acc, _| self.pow_mod(&acc, p, m))
    }

    /// `a^((q-1)/2) mod m` where `q` is the order of the coefficient field.
    pub fn pow_half_order_mod(&self, a: &Poly<F::Elem>, m: &Poly<F::Elem>) -> Poly<F::Elem> {
        let p = self.field.characteristic();
        let mut conj = self.rem(a, m);
        let mut norm = conj.clone();
        for _ in 1..self.field.degree() {
            conj = self.pow_mod(&conj, p, m);
            norm = self.mul_mod(&norm, &conj, m);
        }
        self.pow_mod(&norm, (p - 1) / 2, m)
    }

    /// Rabin's test: a polynomial `g` of degree `d >= 1` is irreducible iff
    /// `g | X^(q^d) - X` and `gcd(g, X^(q^(d/r)) - X) = 1` for each prime `r | d`.
    pub fn is_irreducible(&self, g: &Poly<F::Elem>) -> bool {
        let Some(d) = g.degree() else { return false };
        if d == 0 {
            return false;
        }
        if d == 1 {
            return true;
        }
        let g = self.monic(g);
        let x = self.x();
        // frob[i] = X^(q^i) mod g
        let mut frob = vec![self.rem(&x, &g)];
        for i in 1..=d {
            let next = self.pow_field_order_mod(&frob[i - 1], &g);
            frob.push(next);
        }
        if frob[d] != frob[0] {
            return false;
        }
        prime_divisors(d as u64).into_iter().all(|r| {
            let k = d / r as usize;
            let h = self.sub(&frob[k], &x);
            self.gcd(&g, &h).degree() == Some(0)
        })
    }

    /// Distinct-degree factorization of a squarefree polynomial: returns
    /// `(k, g_k)` where `g_k` is the product of all monic irreducible factors of degree `k`.
    pub fn distinct_degree_factors(&self, f: &Poly<F::Elem>) -> Vec<(usize, Poly<F::Elem>)> {
        let mut rest = self.monic(f);
        let x = self.x();
        let mut out = Vec::new();
        let mut k = 0;
        let mut xq = x.clone();
        while rest.degree().is_some_and(|d| d >= 2 * (k + 1)) {
            k += 1;
            xq = self.pow_field_order_mod(&xq, &rest);
            let g = self.gcd(&rest, &self.sub(&xq, &x));
            if g.degree().is_some_and(|d| d > 0) {
                rest = self.div_exact(&rest, &g).expect("gcd divides");
                xq = self.rem(&xq, &rest);
                out.push((k, g));
            }
        }
        if let Some(d) = rest.degree().filter(|&d| d > 0) {
            out.push((d, rest));
        }
        out
    }

    /// Random monic irreducible polynomial of degree `d >= 1`, drawn from `rng`.
    pub fn random_irreducible<R: rand::Rng + ?Sized>(&self, d: usize, rng: &mut R) -> Poly<F::Elem> {
        assert!(d >= 1, "degree must be positive");
        loop {
            let mut coeffs: Vec<F::Elem> = (0..d).map(|_| self.field.random(rng)).collect();
            coeffs.push(self.field.one());
            let g = self.from_coeffs(coeffs);
            if self.is_irreducible(&g) {
                return g;
            }
        }
    }

    /// Splits a monic squarefree product of distinct linear factors into its roots
    /// (Cantor–Zassenhaus with `d = 1`).
    fn split_linear<R: rand::Rng + ?Sized>(
        &self,
        g: &Poly<F::Elem>,
        rng: &mut R,
        out: &mut Vec<F::Elem>,
    ) {
        match g.degree() {
            None | Some(0) => {}
            Some(1) => out.push(self.field.neg(&g.coeffs[0])),
            Some(d) => loop {
                let delta = self.field.random(rng);
                let shifted = self.from_coeffs(vec![delta, self.field.one()]);
                let h = self.sub(&self.pow_half_order_mod(&shifted, g), &self.one());
                let s = self.gcd(g, &h);
                if let Some(ds) = s.degree() {
                    if ds > 0 && ds < d {
                        let t = self.div_exact(g, &s).expect("gcd divides");
                        self.split_linear(&s, rng, out);
                        self.split_linear(&t, rng, out);
                        return;
                    }
                }
            },
        }
    }
}

fn prime_divisors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Roots of `f` in its coefficient field with multiplicities, using the default seed.
pub fn roots_with_multiplicity<F: FiniteField>(
    field: &F,
    f: &Poly<F::Elem>,
) -> Result<Vec<(F::Elem, u32)>, ArithError> {
    roots_with_multiplicity_seeded(field, f, DEFAULT_SEED)
}

/// Roots of `f` lying in `field`, each with its exact multiplicity, sorted by root.
///
/// The in-field part `gcd(f, X^q - X)` is split by equal-degree factorization
/// driven by a ChaCha stream seeded with `seed`; the result does not depend on
/// the seed, only the running time does.
pub fn roots_with_multiplicity_seeded<F: FiniteField>(
    field: &F,
    f: &Poly<F::Elem>,
    seed: u64,
) -> Result<Vec<(F::Elem, u32)>, ArithError> {
    let ring = PolyRing::new(field);
    ring.validate(f)?;
    if f.is_zero() {
        return Err(ArithError::ZeroPolynomial);
    }
    let f = ring.monic(f);
    if f.degree() == Some(0) {
        return Ok(Vec::new());
    }
    let x = ring.x();
    let xq = ring.pow_field_order_mod(&x, &f);
    let split = ring.gcd(&f, &ring.sub(&xq, &x));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut roots = Vec::new();
    ring.split_linear(&split, &mut rng, &mut roots);
    roots.sort();
    let out = roots
        .into_iter()
        .map(|r| {
            let lin = ring.linear(&r);
            let mut rest = f.clone();
            let mut mult = 0;
            while let Some(q) = ring.div_exact(&rest, &lin) {
                rest = q;
                mult += 1;
            }
            (r, mult)
        })
        .collect();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{make_fp2, PrimeField};

    #[test]
    fn planted_roots_over_f13() {
        let f = PrimeField::new(13).unwrap();
        let ring = PolyRing::new(&f);
        let poly = ring.from_roots([3u64, 3, 5].iter());
        assert_eq!(roots_with_multiplicity(&f, &poly).unwrap(), vec![(3, 2), (5, 1)]);
    }

    #[test]
    fn nonresidue_has_no_roots_in_f11() {
        let f = PrimeField::new(11).unwrap();
        let ring = PolyRing::new(&f);
        let poly = ring.from_coeffs(vec![f.from_i64(-2), 0, 1]);
        assert!(roots_with_multiplicity(&f, &poly).unwrap().is_empty());
        assert!(ring.is_irreducible(&poly));
    }

    #[test]
    fn y2_minus_2_splits_in_f121() {
        let f = make_fp2(11).unwrap();
        let ring = PolyRing::new(&f);
        let poly = ring.from_coeffs(vec![f.from_i64(-2), f.zero(), f.one()]);
        let u = f.gen();
        let mut expected = vec![(u, 1), (f.neg(&u), 1)];
        expected.sort();
        assert_eq!(roots_with_multiplicity(&f, &poly).unwrap(), expected);
    }

    #[test]
    fn zero_polynomial_rejected() {
        let f = PrimeField::new(11).unwrap();
        let ring = PolyRing::new(&f);
        assert_eq!(roots_with_multiplicity(&f, &ring.zero()), Err(ArithError::ZeroPolynomial));
    }

    #[test]
    fn roots_independent_of_seed() {
        let f = make_fp2(101).unwrap();
        let ring = PolyRing::new(&f);
        let rs: Vec<_> = (0..7).map(|i| f.elem(3 * i + 1, 5 * i)).collect();
        let poly = ring.from_roots(rs.iter());
        let a = roots_with_multiplicity_seeded(&f, &poly, 1).unwrap();
        let b = roots_with_multiplicity_seeded(&f, &poly, 99).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.len(), 7);
    }

    #[test]
    fn division_and_gcd() {
        let f = PrimeField::new(17).unwrap();
        let ring = PolyRing::new(&f);
        let a = ring.from_roots([1u64, 2, 3].iter());
        let b = ring.from_roots([2u64, 3, 4].iter());
        assert_eq!(ring.gcd(&a, &b), ring.from_roots([2u64, 3].iter()));
        let (q, r) = ring.div_rem(&a, &ring.linear(&1)).unwrap();
        assert!(r.is_zero());
        assert_eq!(q, ring.from_roots([2u64, 3].iter()));
        assert_eq!(ring.div_rem(&a, &ring.zero()), Err(ArithError::DivisionByZero));
    }

    #[test]
    fn distinct_degree_split() {
        let f = PrimeField::new(11).unwrap();
        let ring = PolyRing::new(&f);
        // (X - 1)(X^2 - 2)(X^2 - 6): 2 and 6 are both nonresidues mod 11
        let q1 = ring.from_coeffs(vec![f.from_i64(-2), 0, 1]);
        let q2 = ring.from_coeffs(vec![f.from_i64(-6), 0, 1]);
        let poly = ring.mul(&ring.mul(&ring.linear(&1), &q1), &q2);
        let ddf = ring.distinct_degree_factors(&poly);
        let degs: Vec<(usize, usize)> = ddf.iter().map(|(k, g)| (*k, g.degree().unwrap())).collect();
        assert_eq!(degs, vec![(1, 1), (2, 4)]);
    }

    #[test]
    fn irreducibility_detects_products() {
        let f = PrimeField::new(13).unwrap();
        let ring = PolyRing::new(&f);
        let q = ring.from_coeffs(vec![f.from_i64(-2), 0, 1]);
        assert!(ring.is_irreducible(&q));
        assert!(!ring.is_irreducible(&ring.mul(&q, &q)));
        assert!(!ring.is_irreducible(&ring.from_roots([1u64, 2].iter())));
    }

    #[test]
    fn cofactor_inverts_modulo() {
        let f = PrimeField::new(13).unwrap();
        let ring = PolyRing::new(&f);
        let m = ring.from_coeffs(vec![f.from_i64(-2), 0, 0, 1]);
        let a = ring.from_coeffs(vec![4, 7, 1]);
        let (g, s) = ring.gcd_with_cofactor(&a, &m);
        assert_eq!(g, ring.one());
        assert_eq!(ring.mul_mod(&s, &a, &m), ring.one());
    }
}
