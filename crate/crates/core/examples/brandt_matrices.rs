// Brandt matrices B(m) and the Hecke action on divisors.

use std::path::Path;
use std::sync::Arc;

use supersingular_hecke::arith::make_fp2;
use supersingular_hecke::brandt::{hecke_apply, sigma_p, BrandtCache, Divisor};
use supersingular_hecke::modpoly::{builtin_phi, PhiLibrary};
use supersingular_hecke::ssgraph::enumerate_locus;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let p = 37;
    let f = make_fp2(p)?;
    let locus = Arc::new(enumerate_locus(&f, &builtin_phi(2, p)?)?);
    let mut lib = PhiLibrary::new(p);
    lib.add_directory(&Path::new(env!("CARGO_MANIFEST_DIR")).join("data"))?;
    let cache = BrandtCache::new(locus.clone(), Arc::new(lib));

    for m in [1u64, 2, 3, 4, 37, 74, 35] {
        let b = cache.brandt(m)?;
        println!(
            "B({m}) = {}  row sums {:?} (sigma = {}), weighted symmetric: {}",
            b.entries(),
            b.row_sums(),
            sigma_p(m, p),
            b.is_weighted_symmetric(locus.weights())
        );
    }
    match cache.brandt(17) {
        Err(e) => println!("B(17): {e}"),
        Ok(_) => unreachable!("no Phi_17 shipped"),
    }

    let e = Divisor::eisenstein(&locus);
    let te = hecke_apply(&*cache.brandt(6)?, &e)?;
    let shown: Vec<String> = te.coeffs().iter().map(|c| c.to_string()).collect();
    println!("T_6 e = ({}) = {} e", shown.join(", "), sigma_p(6, p));
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("Brandt example");
}
