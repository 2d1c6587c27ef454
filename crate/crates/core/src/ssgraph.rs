//! The supersingular locus in characteristic `p`.
//!
//! Supersingularity is decided with the Hasse invariant; the locus is the
//! connected component of a supersingular starter in the 2-isogeny graph, found
//! by breadth-first search over the roots of `Phi_2(j, Y)`.

use std::collections::{HashMap, HashSet, VecDeque};

use num_rational::Ratio;
use rayon::prelude::*;

use crate::arith::{inverse_table, roots_with_multiplicity, FiniteField, Fp2, Fp2Elem};
use crate::error::{Error, Result};
use crate::modpoly::PhiPoly;

/// `(a, b)` for a short Weierstrass model `y^2 = x^3 + a x + b` with j-invariant `j`.
///
/// `j = 0` gives `y^2 = x^3 + 1`, `j = 1728` gives `y^2 = x^3 + x`, and
/// otherwise `a = 3j(1728 - j)`, `b = 2j(1728 - j)^2`.
pub fn weierstrass_model<F: FiniteField>(field: &F, j: &F::Elem) -> (F::Elem, F::Elem) {
    let j1728 = field.from_u64(1728);
    if field.is_zero(j) {
        (field.zero(), field.one())
    } else if *j == j1728 {
        (field.one(), field.zero())
    } else {
        let k = field.sub(&j1728, j);
        let jk = field.mul(j, &k);
        (field.mul(&field.from_u64(3), &jk), field.mul(&field.from_u64(2), &field.mul(&jk, &k)))
    }
}

/// Hasse-invariant test with the modular inverses of `1..p` precomputed.
#[derive(Debug, Clone)]
pub struct HasseTest {
    field: Fp2,
    inverses: Vec<u64>,
}

impl HasseTest {
    pub fn new(field: &Fp2) -> Self {
        let p = field.p();
        Self { field: *field, inverses: inverse_table(p as usize - 1, p) }
    }

    /// Whether `y^2 = x^3 + a x + b` is supersingular, i.e. the coefficient of
    /// `x^(p-1)` in `(x^3 + a x + b)^((p-1)/2)` vanishes.
    pub fn is_supersingular_model(&self, a: &Fp2Elem, b: &Fp2Elem) -> bool {
        let f = &self.field;
        let p = f.p();
        let k = (p - 1) / 2;
        let target = (p - 1) as usize;
        // strip the x-adic valuation of x^3 + a x + b
        let (h, v): (Vec<Fp2Elem>, usize) = if !f.is_zero(b) {
            (vec![*b, *a, f.zero(), f.one()], 0)
        } else if !f.is_zero(a) {
            (vec![*a, f.zero(), f.one()], 1)
        } else {
            (vec![f.one()], 3)
        };
        let shift = v * k as usize;
        if shift > target {
            return true;
        }
        let n_max = target - shift;
        // g = h^k satisfies h g' = k h' g, which gives
        // g_n = (n h_0)^{-1} sum_{i>=1} ((k+1) i - n) h_i g_{n-i}
        let h0_inv = f.inv(&h[0]).expect("nonzero constant term");
        let mut g = Vec::with_capacity(n_max + 1);
        g.push(f.pow(&h[0], k));
        for n in 1..=n_max {
            let mut acc = f.zero();
            for (i, hi) in h.iter().enumerate().skip(1).take(n) {
                if f.is_zero(hi) {
                    continue;
                }
                let c = ((k as i64 + 1) * i as i64 - n as i64).rem_euclid(p as i64) as u64;
                acc = f.add(&acc, &f.mul(&f.mul(hi, &g[n - i]), &f.from_u64(c)));
            }
            let scale = f.mul(&h0_inv, &f.from_u64(self.inverses[n]));
            g.push(f.mul(&acc, &scale));
        }
        f.is_zero(&g[n_max])
    }

    pub fn is_supersingular(&self, j: &Fp2Elem) -> bool {
        let (a, b) = weierstrass_model(&self.field, j);
        self.is_supersingular_model(&a, &b)
    }
}

/// Whether the curves with j-invariant `j` are supersingular.
pub fn is_supersingular(field: &Fp2, j: &Fp2Elem) -> bool {
    HasseTest::new(field).is_supersingular(j)
}

/// The first supersingular `j` among `0, 1, 2, ...` in `F_p`.
pub fn find_starter(field: &Fp2) -> Result<Fp2Elem> {
    let test = HasseTest::new(field);
    (0..field.p())
        .map(|j| field.from_u64(j))
        .find(|j| test.is_supersingular(j))
        .ok_or_else(|| Error::Consistency(format!("no supersingular j-invariant in F_{}", field.p())))
}

/// Automorphism weight `|Aut(E)/{+-1}|` for `p >= 5`.
pub fn automorphism_weight(field: &Fp2, j: &Fp2Elem) -> u32 {
    if field.is_zero(j) {
        3
    } else if *j == field.from_u64(1728) {
        2
    } else {
        1
    }
}

/// Sort key of the canonical order: `F_p` members by value, then conjugate
/// pairs `a +- b u` keyed by `(a, min(b, p - b))` with the smaller `b` first.
fn canonical_key(field: &Fp2, j: &Fp2Elem) -> (u8, u64, u64, u64) {
    let (a, b) = j.coords();
    if b == 0 {
        (0, a, 0, 0)
    } else {
        (1, a, b.min(field.p() - b), b)
    }
}

/// The set of supersingular j-invariants in characteristic `p`, canonically ordered.
#[derive(Debug, Clone)]
pub struct SupersingularLocus {
    field: Fp2,
    js: Vec<Fp2Elem>,
    weights: Vec<u32>,
    index: HashMap<Fp2Elem, usize>,
}

impl PartialEq for SupersingularLocus {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.js == other.js
    }
}

impl SupersingularLocus {
    /// Builds a locus from an arbitrary list of j-invariants: sorts canonically,
    /// assigns weights and checks the mass formula.
    pub fn from_js(field: &Fp2, mut js: Vec<Fp2Elem>) -> Result<Self> {
        js.sort_by_key(|j| canonical_key(field, j));
        js.dedup();
        let weights = js.iter().map(|j| automorphism_weight(field, j)).collect();
        let index = js.iter().enumerate().map(|(i, j)| (*j, i)).collect();
        let locus = Self { field: *field, js, weights, index };
        let expected = Ratio::new(field.p() as i64 - 1, 12);
        if locus.mass() != expected {
            return Err(Error::EnumerationIncomplete(format!(
                "sum of 1/w_i is {} but (p-1)/12 = {}",
                locus.mass(),
                expected
            )));
        }
        Ok(locus)
    }

    pub fn field(&self) -> &Fp2 {
        &self.field
    }

    pub fn p(&self) -> u64 {
        self.field.p()
    }

    pub fn n(&self) -> usize {
        self.js.len()
    }

    pub fn js(&self) -> &[Fp2Elem] {
        &self.js
    }

    pub fn j(&self, i: usize) -> Fp2Elem {
        self.js[i]
    }

    pub fn weights(&self) -> &[u32] {
        &self.weights
    }

    pub fn weight(&self, i: usize) -> u32 {
        self.weights[i]
    }

    pub fn index_of(&self, j: &Fp2Elem) -> Option<usize> {
        self.index.get(j).copied()
    }

    /// `sum 1/w_i`, exactly.
    pub fn mass(&self) -> Ratio<i64> {
        self.weights.iter().map(|&w| Ratio::new(1, i64::from(w))).sum()
    }

    /// The permutation `tau` with `j_{tau(i)} = j_i^p`.
    pub fn frobenius_permutation(&self) -> Result<Vec<usize>> {
        self.js
            .iter()
            .map(|j| {
                self.index_of(&self.field.frobenius(j))
                    .ok_or_else(|| Error::Consistency(format!("Frobenius image of {j} is not in the locus")))
            })
            .collect()
    }
}

/// Enumerates the supersingular locus by breadth-first search in the 2-isogeny graph.
pub fn enumerate_locus(field: &Fp2, phi2: &PhiPoly) -> Result<SupersingularLocus> {
    if phi2.ell() != 2 || phi2.p() != field.p() {
        return Err(Error::InvalidArgument(format!(
            "expected Phi_2 mod {}, got Phi_{} mod {}",
            field.p(),
            phi2.ell(),
            phi2.p()
        )));
    }
    let start = find_starter(field)?;
    let mut seen = HashSet::from([start]);
    let mut order = vec![start];
    let mut queue = VecDeque::from([start]);
    while let Some(j) = queue.pop_front() {
        for (nb, _) in roots_with_multiplicity(field, &phi2.row(field, &j))? {
            if seen.insert(nb) {
                order.push(nb);
                queue.push_back(nb);
            }
        }
    }
    SupersingularLocus::from_js(field, order)
}

/// All supersingular `j` in `F_{p^2}` by testing every element; `O(p^3)`.
pub fn brute_force_locus(field: &Fp2) -> Vec<Fp2Elem> {
    let test = HasseTest::new(field);
    let p = field.p();
    let mut found: Vec<Fp2Elem> = (0..p)
        .into_par_iter()
        .flat_map_iter(|b| {
            let test = &test;
            (0..p).map(move |a| field.elem(a, b)).filter(move |j| test.is_supersingular(j))
        })
        .collect();
    found.sort_by_key(|j| canonical_key(field, j));
    found
}
