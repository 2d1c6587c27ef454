use rand::Rng;

use super::poly::{Poly, PolyRing};
use super::{ArithError, FiniteField};

/// `K[t]/(g)` for a finite field `K` and a monic irreducible `g` of degree `e >= 1`.
///
/// Elements are coordinate vectors of length exactly `e` in the power basis
/// `1, t, ..., t^(e-1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExtField<F: FiniteField> {
    base: F,
    modulus: Poly<F::Elem>,
}

impl<F: FiniteField> ExtField<F> {
    /// Validates that `modulus` is monic and irreducible over `base`.
    pub fn new(base: F, modulus: Poly<F::Elem>) -> Result<Self, ArithError> {
        let ring = PolyRing::new(&base);
        ring.validate(&modulus)?;
        match modulus.leading() {
            Some(lc) if modulus.degree() >= Some(1) && base.is_one(lc) => {}
            _ => return Err(ArithError::BadModulus),
        }
        if !ring.is_irreducible(&modulus) {
            return Err(ArithError::ReducibleModulus);
        }
        Ok(Self { base, modulus })
    }

    pub fn base(&self) -> &F {
        &self.base
    }

    pub fn modulus(&self) -> &Poly<F::Elem> {
        &self.modulus
    }

    /// Degree of the extension over the base field.
    pub fn relative_degree(&self) -> usize {
        self.modulus.degree().expect("nonzero modulus")
    }

    /// The image of a base-field element.
    pub fn embed(&self, a: &F::Elem) -> Vec<F::Elem> {
        let mut v = vec![self.base.zero(); self.relative_degree()];
        v[0] = a.clone();
        v
    }

    /// The base-field element equal to `a`, if `a` lies in the base field.
    pub fn descend(&self, a: &[F::Elem]) -> Option<F::Elem> {
        if a[1..].iter().all(|c| self.base.is_zero(c)) {
            Some(a[0].clone())
        } else {
            None
        }
    }

    /// The class of `t`.
    pub fn gen(&self) -> Vec<F::Elem> {
        self.from_poly(&PolyRing::new(&self.base).x())
    }

    fn ring(&self) -> PolyRing<'_, F> {
        PolyRing::new(&self.base)
    }

    fn to_poly(&self, a: &[F::Elem]) -> Poly<F::Elem> {
        self.ring().from_coeffs(a.to_vec())
    }

    fn from_poly(&self, a: &Poly<F::Elem>) -> Vec<F::Elem> {
        let r = self.ring().rem(a, &self.modulus);
        let mut v = r.into_coeffs();
        v.resize(self.relative_degree(), self.base.zero());
        v
    }
}

impl<F: FiniteField> FiniteField for ExtField<F> {
    type Elem = Vec<F::Elem>;

    fn characteristic(&self) -> u64 {
        self.base.characteristic()
    }

    fn degree(&self) -> u32 {
        self.base.degree() * self.relative_degree() as u32
    }

    fn zero(&self) -> Self::Elem {
        vec![self.base.zero(); self.relative_degree()]
    }

    fn one(&self) -> Self::Elem {
        self.embed(&self.base.one())
    }

    fn from_u64(&self, v: u64) -> Self::Elem {
        self.embed(&self.base.from_u64(v))
    }

    fn is_zero(&self, a: &Self::Elem) -> bool {
        a.iter().all(|c| self.base.is_zero(c))
    }

    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        a.iter().zip(b).map(|(x, y)| self.base.add(x, y)).collect()
    }

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        a.iter().zip(b).map(|(x, y)| self.base.sub(x, y)).collect()
    }

    fn neg(&self, a: &Self::Elem) -> Self::Elem {
        a.iter().map(|x| self.base.neg(x)).collect()
    }

    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        let ring = self.ring();
        self.from_poly(&ring.mul(&self.to_poly(a), &self.to_poly(b)))
    }

    fn inv(&self, a: &Self::Elem) -> Result<Self::Elem, ArithError> {
        if self.is_zero(a) {
            return Err(ArithError::DivisionByZero);
        }
        let (g, s) = self.ring().gcd_with_cofactor(&self.to_poly(a), &self.modulus);
        debug_assert_eq!(g.degree(), Some(0));
        Ok(self.from_poly(&s))
    }

    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Self::Elem {
        (0..self.relative_degree()).map(|_| self.base.random(rng)).collect()
    }

    fn validate(&self, a: &Self::Elem) -> Result<(), ArithError> {
        if a.len() != self.relative_degree() {
            return Err(ArithError::ContextMismatch);
        }
        a.iter().try_for_each(|c| self.base.validate(c))
    }
}
