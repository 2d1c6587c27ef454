//! Ground-truth `B(2)` and `B(3)` by explicit Vélu isogenies.
//!
//! Every order-`l` subgroup of `E: y^2 = x^3 + a x + b` is located through the
//! x-coordinates of its nonzero points: the roots of `x^3 + a x + b` for `l = 2`
//! and of the 3-division polynomial `3x^4 + 6ax^2 + 12bx - a^2` for `l = 3`.
//! These are found in a splitting field `F_{p^2}[t]/(g)`, the quotient curve is
//! written down with Vélu's formulas, and its j-invariant is pulled back to
//! `F_{p^2}`. Nothing here touches modular polynomials.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::arith::{roots_with_multiplicity_seeded, ExtField, FiniteField, Fp2, Fp2Elem, PolyRing};
use crate::brandt::{BrandtMatrix, IntMatrix};
use crate::error::{Error, Result};
use crate::ssgraph::{weierstrass_model, SupersingularLocus};

/// `y^2 = x^3 + a x + b` together with its j-invariant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurveModel<E> {
    a: E,
    b: E,
    j: E,
}

impl<E: Clone> CurveModel<E> {
    /// Rejects singular models (`4a^3 + 27b^2 = 0`).
    pub fn new<F: FiniteField<Elem = E>>(field: &F, a: E, b: E) -> Result<Self> {
        let four_a3 = field.mul(&field.from_u64(4), &field.mul(&a, &field.square(&a)));
        let disc = field.add(&four_a3, &field.mul(&field.from_u64(27), &field.square(&b)));
        let j = field
            .div(&field.mul(&field.from_u64(1728), &four_a3), &disc)
            .map_err(|_| Error::Consistency("singular curve model".into()))?;
        Ok(Self { a, b, j })
    }

    pub fn a(&self) -> &E {
        &self.a
    }

    pub fn b(&self) -> &E {
        &self.b
    }

    pub fn j(&self) -> &E {
        &self.j
    }
}

impl CurveModel<Fp2Elem> {
    /// The model used throughout the crate for a given j-invariant.
    pub fn from_j(field: &Fp2, j: &Fp2Elem) -> Result<Self> {
        let (a, b) = weierstrass_model(field, j);
        Self::new(field, a, b)
    }
}

fn lcm(a: usize, b: usize) -> usize {
    a / num_integer::gcd(a, b) * b
}

/// The polynomial whose roots are the x-coordinates of the nonzero `l`-torsion
/// points, one root per subgroup (`l = 2`) or per pair `{P, -P}` (`l = 3`).
fn torsion_x_polynomial(field: &Fp2, curve: &CurveModel<Fp2Elem>, ell: u64) -> Vec<Fp2Elem> {
    let (a, b) = (*curve.a(), *curve.b());
    match ell {
        2 => vec![b, a, field.zero(), field.one()],
        3 => {
            let c = |k: u64| field.from_u64(k);
            vec![
                field.neg(&field.square(&a)),
                field.mul(&c(12), &b),
                field.mul(&c(6), &a),
                field.zero(),
                c(3),
            ]
        }
        _ => unreachable!("checked by caller"),
    }
}

/// Vélu's codomain `(a - 5t, b - 7w)` for the subgroup generated by a point with x-coordinate `x0`.
fn velu_codomain<F: FiniteField>(field: &F, a: &F::Elem, b: &F::Elem, x0: &F::Elem, ell: u64) -> (F::Elem, F::Elem) {
    let c = |k: u64| field.from_u64(k);
    let x0sq = field.square(x0);
    let gx = field.add(&field.mul(&c(3), &x0sq), a);
    let (t, w) = if ell == 2 {
        (gx.clone(), field.mul(x0, &gx))
    } else {
        // a point of order 3 and its negative contribute t = 2 g^x and u = (g^y)^2 = 4 y0^2
        let t = field.mul(&c(2), &gx);
        let y0sq = field.add(&field.add(&field.mul(&x0sq, x0), &field.mul(a, x0)), b);
        let u = field.mul(&c(4), &y0sq);
        (t.clone(), field.add(&u, &field.mul(x0, &t)))
    };
    (field.sub(a, &field.mul(&c(5), &t)), field.sub(b, &field.mul(&c(7), &w)))
}

/// Degree over `F_{p^2}` of the splitting field of the `l`-torsion x-polynomial.
pub fn splitting_degree(field: &Fp2, curve: &CurveModel<Fp2Elem>, ell: u64) -> Result<usize> {
    check_level(ell)?;
    let ring = PolyRing::new(field);
    let h = ring.from_coeffs(torsion_x_polynomial(field, curve, ell));
    Ok(ring.distinct_degree_factors(&h).iter().fold(1, |acc, (k, _)| lcm(acc, *k)))
}

/// An extension of `F_{p^2}` of degree `multiple * splitting_degree`, with a
/// random irreducible modulus drawn from `seed`.
pub fn splitting_field(
    field: &Fp2,
    curve: &CurveModel<Fp2Elem>,
    ell: u64,
    multiple: usize,
    seed: u64,
) -> Result<ExtField<Fp2>> {
    let e = splitting_degree(field, curve, ell)? * multiple.max(1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let modulus = PolyRing::new(field).random_irreducible(e, &mut rng);
    Ok(ExtField::new(*field, modulus)?)
}

fn check_level(ell: u64) -> Result<()> {
    if ell == 2 || ell == 3 {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("the Velu oracle supports l in {{2, 3}}, got {ell}")))
    }
}

/// j-invariants of `E/C` for the `l + 1` subgroups `C` of order `l`, sorted.
pub fn enumerate_isogenies(
    field: &Fp2,
    curve: &CurveModel<Fp2Elem>,
    ell: u64,
    seed: u64,
) -> Result<Vec<Fp2Elem>> {
    enumerate_isogenies_in(field, curve, ell, 1, seed)
}

/// As [`enumerate_isogenies`], but working in an extension whose degree is
/// `multiple` times the splitting degree. The answer must not depend on
/// `multiple` or `seed`.
pub fn enumerate_isogenies_in(
    field: &Fp2,
    curve: &CurveModel<Fp2Elem>,
    ell: u64,
    multiple: usize,
    seed: u64,
) -> Result<Vec<Fp2Elem>> {
    check_level(ell)?;
    if field.p() == ell {
        return Err(Error::InvalidArgument("l must differ from p".into()));
    }
    let ext = splitting_field(field, curve, ell, multiple, seed)?;
    let ext_ring = PolyRing::new(&ext);
    let h = ext_ring.from_coeffs(torsion_x_polynomial(field, curve, ell).iter().map(|c| ext.embed(c)).collect());
    let roots = roots_with_multiplicity_seeded(&ext, &h, seed)?;
    if roots.len() as u64 != ell + 1 || roots.iter().any(|(_, m)| *m != 1) {
        return Err(Error::Consistency(format!(
            "expected {} simple torsion x-roots over the splitting field, found {roots:?}",
            ell + 1
        )));
    }
    let (a, b) = (ext.embed(curve.a()), ext.embed(curve.b()));
    let mut js = roots
        .iter()
        .map(|(x0, _)| {
            let (qa, qb) = velu_codomain(&ext, &a, &b, x0, ell);
            let quotient = CurveModel::new(&ext, qa, qb)?;
            ext.descend(quotient.j())
                .ok_or_else(|| Error::Consistency("quotient j-invariant is not in F_{p^2}".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    js.sort();
    Ok(js)
}

/// `B(l)` for `l in {2, 3}` assembled from explicit isogenies.
pub fn oracle_brandt(locus: &SupersingularLocus, ell: u64, seed: u64) -> Result<BrandtMatrix> {
    check_level(ell)?;
    let field = locus.field();
    let n = locus.n();
    let rows = (0..n)
        .into_par_iter()
        .map(|i| {
            let curve = CurveModel::from_j(field, &locus.j(i))?;
            let mut row = vec![0u64; n];
            for j in enumerate_isogenies(field, &curve, ell, seed)? {
                let k = locus
                    .index_of(&j)
                    .ok_or_else(|| Error::Consistency(format!("isogenous j = {j} is not in the locus")))?;
                row[k] += 1;
            }
            Ok(row)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(BrandtMatrix::new(ell, locus.p(), IntMatrix::from_rows(rows)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{make_fp2, DEFAULT_SEED};
    use crate::modpoly::builtin_phi;
    use crate::ssgraph::enumerate_locus;

    fn locus(p: u64) -> SupersingularLocus {
        enumerate_locus(&make_fp2(p).unwrap(), &builtin_phi(2, p).unwrap()).unwrap()
    }

    #[test]
    fn model_j_invariants() {
        let f = make_fp2(101).unwrap();
        for j in [f.zero(), f.from_u64(1728), f.elem(7, 3), f.from_u64(55)] {
            assert_eq!(*CurveModel::from_j(&f, &j).unwrap().j(), j);
        }
        assert!(CurveModel::new(&f, f.zero(), f.zero()).is_err());
    }

    #[test]
    fn p13_loops() {
        let f = make_fp2(13).unwrap();
        let e = CurveModel::from_j(&f, &f.from_u64(5)).unwrap();
        let five = f.from_u64(5);
        assert_eq!(enumerate_isogenies(&f, &e, 2, DEFAULT_SEED).unwrap(), vec![five; 3]);
        assert_eq!(enumerate_isogenies(&f, &e, 3, DEFAULT_SEED).unwrap(), vec![five; 4]);
        let l = locus(13);
        assert_eq!(oracle_brandt(&l, 3, DEFAULT_SEED).unwrap().entries().to_rows(), vec![vec![4]]);
    }

    #[test]
    fn p11_b2() {
        let f = make_fp2(11).unwrap();
        let e = CurveModel::from_j(&f, &f.zero()).unwrap();
        let one = f.from_u64(1);
        assert_eq!(enumerate_isogenies(&f, &e, 2, DEFAULT_SEED).unwrap(), vec![one; 3]);
        let l = locus(11);
        let b2 = oracle_brandt(&l, 2, DEFAULT_SEED).unwrap();
        assert_eq!(b2.entries().to_rows(), vec![vec![0, 3], vec![2, 1]]);
    }

    #[test]
    fn p17_invariants() {
        let l = locus(17);
        for ell in [2, 3] {
            let b = oracle_brandt(&l, ell, DEFAULT_SEED).unwrap();
            assert!(b.row_sums().iter().all(|&s| s == ell + 1));
            assert!(b.is_weighted_symmetric(l.weights()));
        }
    }

    #[test]
    fn torsion_x_coordinates_are_rational_over_fp2() {
        // the models are defined so that Frobenius acts as +-p on them
        for p in [11, 13, 17, 19, 23, 101] {
            let l = locus(p);
            for i in 0..l.n() {
                let e = CurveModel::from_j(l.field(), &l.j(i)).unwrap();
                assert_eq!(splitting_degree(l.field(), &e, 2).unwrap(), 1);
                assert_eq!(splitting_degree(l.field(), &e, 3).unwrap(), 1);
            }
        }
    }

    #[test]
    fn splitting_field_choice_is_irrelevant() {
        let l = locus(101);
        let f = l.field();
        for i in 0..l.n() {
            let e = CurveModel::from_j(f, &l.j(i)).unwrap();
            for ell in [2, 3] {
                let base = enumerate_isogenies(f, &e, ell, DEFAULT_SEED).unwrap();
                for (multiple, s1, s2) in [(2, 1, 2), (3, 5, 6)] {
                    let k1 = splitting_field(f, &e, ell, multiple, s1).unwrap();
                    let k2 = splitting_field(f, &e, ell, multiple, s2).unwrap();
                    assert_eq!(k1.relative_degree(), multiple);
                    assert_ne!(k1.modulus(), k2.modulus());
                    assert_eq!(enumerate_isogenies_in(f, &e, ell, multiple, s1).unwrap(), base);
                    assert_eq!(enumerate_isogenies_in(f, &e, ell, multiple, s2).unwrap(), base);
                }
            }
        }
    }

    #[test]
    fn twisted_models_give_the_same_quotients() {
        // a quadratic twist by a nonsquare c has (a c^2, b c^3) and the same j
        let l = locus(23);
        let f = l.field();
        let c = f.elem(1, 1);
        assert!(!f.is_square(&c));
        for i in 0..l.n() {
            let e = CurveModel::from_j(f, &l.j(i)).unwrap();
            let c2 = f.square(&c);
            let twist = CurveModel::new(f, f.mul(e.a(), &c2), f.mul(e.b(), &f.mul(&c2, &c))).unwrap();
            assert_eq!(twist.j(), e.j());
            for ell in [2, 3] {
                assert_eq!(
                    enumerate_isogenies(f, &twist, ell, DEFAULT_SEED).unwrap(),
                    enumerate_isogenies(f, &e, ell, DEFAULT_SEED).unwrap()
                );
            }
        }
    }

    #[test]
    fn unsupported_levels() {
        let l = locus(11);
        assert!(oracle_brandt(&l, 5, DEFAULT_SEED).is_err());
    }
}
