// Permutations of the locus that commute with a Hecke operator preserve Theta.

use std::sync::Arc;

use supersingular_hecke::arith::make_fp2;
use supersingular_hecke::brandt::BrandtCache;
use supersingular_hecke::equidist::check_commuting;
use supersingular_hecke::modpoly::{builtin_phi, PhiLibrary};
use supersingular_hecke::ssgraph::enumerate_locus;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    for p in [11u64, 101] {
        let f = make_fp2(p)?;
        let locus = Arc::new(enumerate_locus(&f, &builtin_phi(2, p)?)?);
        let cache = BrandtCache::new(locus.clone(), Arc::new(PhiLibrary::new(p)));
        let frob = locus.frobenius_permutation()?;
        let mut swap: Vec<usize> = (0..locus.n()).collect();
        swap.swap(0, 1);
        for (name, tau) in [("Frobenius", frob), ("swap(1,2)", swap)] {
            let r = check_commuting(&cache, &tau, 2)?;
            println!(
                "p = {p}, tau = {name}: commutes with T_2: {}, first violation {:?}, weights preserved {}, Theta preserved {}",
                r.commutes, r.first_violation, r.weights_preserved, r.theta_preserved
            );
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("commuting maps example");
}
