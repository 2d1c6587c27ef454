//! Probability measures on the locus and the distance of Hecke orbits from `Theta`.
//!
//! `Theta` gives class `j` the mass `12 / (w_j (p - 1))`. The orbit measure of
//! `E_i` under `T_m` is row `i` of `B(m)` divided by `deg T_m`, and
//! [`error_sup`] is the largest pointwise gap between the two.

use rand::Rng;
use rayon::prelude::*;

use crate::brandt::{sigma_p, BrandtCache, IntMatrix};
use crate::error::{Error, Result};
use crate::modforms::ratio_to_f64;
use crate::ssgraph::SupersingularLocus;
use crate::Rational;
use num_traits::{Signed, Zero};

/// A probability measure on the locus.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Measure {
    weights: Vec<Rational>,
}

impl Measure {
    /// Rejects negative weights and totals other than 1.
    pub fn new(weights: Vec<Rational>) -> Result<Self> {
        if weights.iter().any(|w| w.is_negative()) {
            return Err(Error::InvalidArgument("measure weights must be nonnegative".into()));
        }
        let total: Rational = weights.iter().sum();
        if total != Rational::from_integer(1) {
            return Err(Error::Consistency(format!("measure has total mass {total}, expected 1")));
        }
        Ok(Self { weights })
    }

    /// `Theta_D = (1/deg D) sum a_i delta_{E_i}` for an effective nonzero divisor.
    pub fn from_divisor(d: &crate::brandt::Divisor) -> Result<Self> {
        if !d.is_effective_nonzero() {
            return Err(Error::InvalidArgument("Theta_D needs an effective nonzero divisor".into()));
        }
        let deg = d.degree();
        Self::new(d.coeffs().iter().map(|a| a / deg).collect())
    }

    pub fn dirac(n: usize, i: usize) -> Self {
        let mut weights = vec![Rational::zero(); n];
        weights[i] = Rational::from_integer(1);
        Self { weights }
    }

    pub fn weights(&self) -> &[Rational] {
        &self.weights
    }

    pub fn n(&self) -> usize {
        self.weights.len()
    }

    /// `mu(f) = sum mu_i f(E_i)`.
    pub fn integrate(&self, f: &TestFunction) -> Result<Rational> {
        if f.values.len() != self.n() {
            return Err(Error::LocusMismatch);
        }
        Ok(self.weights.iter().zip(&f.values).map(|(w, v)| w * v).sum())
    }

    /// `max_j |mu_j - nu_j|`.
    pub fn sup_distance(&self, other: &Measure) -> Result<Rational> {
        if self.n() != other.n() {
            return Err(Error::LocusMismatch);
        }
        Ok(self
            .weights
            .iter()
            .zip(&other.weights)
            .map(|(a, b)| (a - b).abs())
            .max()
            .unwrap_or_else(Rational::zero))
    }

    /// The image measure under a map `i -> tau[i]`.
    pub fn push_forward(&self, tau: &[usize]) -> Result<Measure> {
        if tau.len() != self.n() {
            return Err(Error::LocusMismatch);
        }
        let mut weights = vec![Rational::zero(); self.n()];
        for (i, &t) in tau.iter().enumerate() {
            weights[t] += self.weights[i];
        }
        Ok(Measure { weights })
    }
}

/// A function on the locus.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TestFunction {
    values: Vec<Rational>,
}

impl TestFunction {
    pub fn new(values: Vec<Rational>) -> Self {
        Self { values }
    }

    /// Values drawn uniformly from `[-1, 1]` on a grid of step `1/1000`, then scaled so that `||f|| = 1`.
    pub fn random<R: Rng>(n: usize, rng: &mut R) -> Self {
        let mut values: Vec<Rational> = (0..n).map(|_| Rational::new(rng.gen_range(-1000..=1000), 1000)).collect();
        let norm = values.iter().map(|v| v.abs()).max().unwrap_or_else(Rational::zero);
        if norm.is_zero() {
            values[0] = Rational::from_integer(1);
        } else {
            values.iter_mut().for_each(|v| *v /= norm);
        }
        Self { values }
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    /// `max |f(E_i)|`.
    pub fn norm(&self) -> Rational {
        self.values.iter().map(|v| v.abs()).max().unwrap_or_else(Rational::zero)
    }
}

/// `Theta = sum 12 / (w_j (p - 1)) delta_{E_j}`.
pub fn theta_star(locus: &SupersingularLocus) -> Measure {
    let p = i128::from(locus.p());
    let weights = locus.weights().iter().map(|&w| Rational::new(12, i128::from(w) * (p - 1))).collect();
    Measure::new(weights).expect("the locus satisfies the mass formula")
}

/// `Theta_{T_m E_i}`: row `i` of `B(m)` over `deg T_m`.
pub fn orbit_measure(cache: &BrandtCache, i: usize, m: u64) -> Result<Measure> {
    let b = cache.brandt(m)?;
    let deg = i128::from(sigma_p(m, cache.p()));
    Measure::new(b.entries().row(i).iter().map(|&x| Rational::new(i128::from(x), deg)).collect())
}

/// `max_j |B_{i,j}(m) / deg T_m - 12 / (w_j (p - 1))|`.
pub fn error_sup(cache: &BrandtCache, i: usize, m: u64) -> Result<Rational> {
    orbit_measure(cache, i, m)?.sup_distance(&theta_star(cache.locus()))
}

/// `error_sup(i, m)` for every `m` in `ms`, computed in parallel and returned in input order.
pub fn error_sweep(cache: &BrandtCache, i: usize, ms: &[u64]) -> Result<Vec<(u64, Rational)>> {
    ms.par_iter().map(|&m| Ok((m, error_sup(cache, i, m)?))).collect()
}

/// Least-squares fit of `log error` against `log m`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateFit {
    pub slope: f64,
    pub intercept: f64,
    /// Root-mean-square residual of the fit, in log units.
    pub rms: f64,
    pub used: usize,
    /// Points dropped because their error was exactly zero.
    pub excluded_zero: usize,
}

/// Fewer usable points than this is an [`Error::InsufficientData`].
pub const MIN_FIT_POINTS: usize = 10;

/// Fits a power law to `(m, error)` pairs, skipping exact zeros.
pub fn fit_power_law(points: &[(u64, Rational)]) -> Result<RateFit> {
    let usable: Vec<(f64, f64)> = points
        .iter()
        .filter(|(_, e)| !e.is_zero())
        .map(|(m, e)| ((*m as f64).ln(), ratio_to_f64(e).ln()))
        .collect();
    let excluded_zero = points.len() - usable.len();
    if usable.len() < MIN_FIT_POINTS {
        return Err(Error::InsufficientData { usable: usable.len(), zeros: excluded_zero });
    }
    let k = usable.len() as f64;
    let mx = usable.iter().map(|(x, _)| x).sum::<f64>() / k;
    let my = usable.iter().map(|(_, y)| y).sum::<f64>() / k;
    let sxx: f64 = usable.iter().map(|(x, _)| (x - mx).powi(2)).sum();
    let sxy: f64 = usable.iter().map(|(x, y)| (x - mx) * (y - my)).sum();
    if sxx == 0.0 {
        return Err(Error::InvalidArgument("rate fit needs at least two distinct m".into()));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let rms = (usable.iter().map(|(x, y)| (y - intercept - slope * x).powi(2)).sum::<f64>() / k).sqrt();
    Ok(RateFit { slope, intercept, rms, used: usable.len(), excluded_zero })
}

/// Sweeps `error_sup(i, m)` over `ms` (which should be prime to `p`) and fits the decay rate.
pub fn rate_fit(cache: &BrandtCache, i: usize, ms: &[u64]) -> Result<RateFit> {
    if let Some(m) = ms.iter().find(|&&m| m % cache.p() == 0) {
        return Err(Error::InvalidArgument(format!("rate fits use m prime to p, got {m}")));
    }
    fit_power_law(&error_sweep(cache, i, ms)?)
}

/// Checks `|Theta_{T_m E_i}(f) - Theta(f)| <= ||f|| n error_sup(i, m)` for one `f`.
pub fn theorem_bound_holds(cache: &BrandtCache, i: usize, m: u64, f: &TestFunction) -> Result<bool> {
    let theta = theta_star(cache.locus());
    let orbit = orbit_measure(cache, i, m)?;
    let lhs = (orbit.integrate(f)? - theta.integrate(f)?).abs();
    let n = Rational::from_integer(cache.locus().n() as i128);
    Ok(lhs <= f.norm() * n * orbit.sup_distance(&theta)?)
}

/// Outcome of [`check_commuting`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommutingReport {
    pub q: u64,
    pub commutes: bool,
    /// First `(row, column)` where `P B(q)` and `B(q) P` differ, zero-based.
    pub first_violation: Option<(usize, usize)>,
    /// Whether `w_i = w_{tau(i)}` for all `i`.
    pub weights_preserved: bool,
    /// Whether `tau` pushes `Theta` to itself.
    pub theta_preserved: bool,
}

impl CommutingReport {
    /// Commuting maps must preserve weights and `Theta`; non-commuting maps are not a failure.
    pub fn is_consistent(&self) -> bool {
        !self.commutes || (self.weights_preserved && self.theta_preserved)
    }
}

/// Tests whether the permutation `tau` commutes with `T_q`.
pub fn check_commuting(cache: &BrandtCache, tau: &[usize], q: u64) -> Result<CommutingReport> {
    let locus = cache.locus();
    let n = locus.n();
    let mut seen = vec![false; n];
    if tau.len() != n || tau.iter().any(|&t| t >= n || std::mem::replace(&mut seen[t], true)) {
        return Err(Error::InvalidArgument(format!("tau must be a permutation of 0..{n}")));
    }
    if q == cache.p() || !crate::arith::is_prime(q) {
        return Err(Error::InvalidArgument(format!("q must be a prime different from p, got {q}")));
    }
    let b = cache.brandt(q)?;
    let perm = IntMatrix::permutation(tau);
    let left = perm.checked_mul(b.entries())?;
    let right = b.entries().checked_mul(&perm)?;
    let first_violation = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .find(|&(i, j)| left.get(i, j) != right.get(i, j));
    let theta = theta_star(locus);
    Ok(CommutingReport {
        q,
        commutes: first_violation.is_none(),
        first_violation,
        weights_preserved: (0..n).all(|i| locus.weight(i) == locus.weight(tau[i])),
        theta_preserved: theta.push_forward(tau)? == theta,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{make_fp2, DEFAULT_SEED};
    use crate::brandt::Divisor;
    use crate::modpoly::{builtin_phi, PhiLibrary};
    use crate::ssgraph::enumerate_locus;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::sync::Arc;

    fn cache(p: u64) -> BrandtCache {
        let f = make_fp2(p).unwrap();
        let locus = enumerate_locus(&f, &builtin_phi(2, p).unwrap()).unwrap();
        let mut lib = PhiLibrary::new(p);
        lib.add_directory(std::path::Path::new(concat!(env!("CARGO_MANIFEST_DIR"), "/data"))).unwrap();
        BrandtCache::new(Arc::new(locus), Arc::new(lib))
    }

    fn q(n: i128, d: i128) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn theta_values() {
        assert_eq!(theta_star(cache(11).locus()).weights(), &[q(2, 5), q(3, 5)]);
        assert_eq!(theta_star(cache(13).locus()).weights(), &[q(1, 1)]);
        let t = theta_star(cache(101).locus());
        assert_eq!(t.weights().iter().sum::<Rational>(), q(1, 1));
    }

    #[test]
    fn eleven_orbit() {
        let c = cache(11);
        assert_eq!(orbit_measure(&c, 1, 2).unwrap().weights(), &[q(2, 3), q(1, 3)]);
        assert_eq!(orbit_measure(&c, 0, 1).unwrap(), Measure::dirac(2, 0));
        // |2/3 - 2/5| = |1/3 - 3/5| = 4/15, matching |c_2(1, j)| / sigma(2) = (4/5) / 3
        assert_eq!(error_sup(&c, 1, 2).unwrap(), q(4, 15));
        let c2 = crate::modforms::cusp_residual(&c, 1, 0, 2).unwrap();
        assert_eq!(c2 / q(3, 1), q(4, 15));
    }

    #[test]
    fn theta_is_hecke_invariant() {
        for p in [11, 17, 101] {
            let c = cache(p);
            let e = Divisor::eisenstein(c.locus());
            for m in (1..=100).filter(|&m| c.is_computable(m)) {
                let te = crate::brandt::hecke_apply(&c.brandt(m).unwrap(), &e).unwrap();
                assert_eq!(Measure::from_divisor(&te).unwrap(), theta_star(c.locus()));
            }
        }
    }

    #[test]
    fn p_power_insensitivity() {
        let c = cache(23);
        let tau = c.locus().frobenius_permutation().unwrap();
        for m in [1u64, 2, 3, 4, 6] {
            for i in 0..c.locus().n() {
                assert_eq!(error_sup(&c, i, 23 * 23 * m).unwrap(), error_sup(&c, i, m).unwrap());
                assert_eq!(error_sup(&c, i, 23 * m).unwrap(), error_sup(&c, tau[i], m).unwrap());
            }
        }
    }

    #[test]
    fn thirteen_is_exact() {
        let c = cache(13);
        let ms: Vec<u64> = (1..=100).filter(|&m| m % 13 != 0 && c.is_computable(m)).collect();
        assert!(error_sweep(&c, 0, &ms).unwrap().iter().all(|(_, e)| e.is_zero()));
        match rate_fit(&c, 0, &ms) {
            Err(Error::InsufficientData { usable: 0, zeros }) => assert_eq!(zeros, ms.len()),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn fit_recovers_a_power_law() {
        let pts: Vec<(u64, Rational)> = (1..=20u64).map(|m| (m * m, q(1, m as i128))).collect();
        let fit = fit_power_law(&pts).unwrap();
        assert!((fit.slope + 0.5).abs() < 1e-12 && fit.intercept.abs() < 1e-12 && fit.rms < 1e-12);
        assert!(matches!(fit_power_law(&pts[..9]), Err(Error::InsufficientData { usable: 9, zeros: 0 })));
    }

    #[test]
    fn theorem_bound() {
        let c = cache(101);
        let mut rng = ChaCha8Rng::seed_from_u64(DEFAULT_SEED);
        for _ in 0..100 {
            let f = TestFunction::random(c.locus().n(), &mut rng);
            assert_eq!(f.norm(), q(1, 1));
            for m in [2u64, 6, 35, 64] {
                assert!(theorem_bound_holds(&c, 0, m, &f).unwrap());
            }
        }
    }

    #[test]
    fn commuting_maps() {
        let c = cache(11);
        let id = vec![0, 1];
        assert!(check_commuting(&c, &id, 2).unwrap().commutes);
        let swap = check_commuting(&c, &[1, 0], 2).unwrap();
        assert!(!swap.commutes);
        assert_eq!(swap.first_violation, Some((0, 0)));
        assert!(swap.is_consistent());
        for p in [23, 101] {
            let c = cache(p);
            let tau = c.locus().frobenius_permutation().unwrap();
            for ql in [2, 3] {
                let r = check_commuting(&c, &tau, ql).unwrap();
                assert!(r.commutes && r.weights_preserved && r.theta_preserved);
            }
        }
        assert!(check_commuting(&c, &[0, 0], 2).is_err());
        assert!(check_commuting(&c, &id, 11).is_err());
    }
}
