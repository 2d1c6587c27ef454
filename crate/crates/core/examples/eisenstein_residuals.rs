// Eisenstein coefficients and the cusp residuals c_m(i, j).

use std::path::Path;
use std::sync::Arc;

use supersingular_hecke::arith::make_fp2;
use supersingular_hecke::brandt::BrandtCache;
use supersingular_hecke::modforms::{cusp_residual, deligne_ratio, EisensteinData};
use supersingular_hecke::modpoly::{builtin_phi, PhiLibrary};
use supersingular_hecke::ssgraph::enumerate_locus;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let e = EisensteinData::new(5);
    for n in [1u64, 5, 6, 10, 25] {
        println!("p = 5: a_{n} = {}, b_{n} = {}, f0_{n} = {}", e.coeff_a(n)?, e.coeff_b(n)?, e.f0_coeff(n)?);
    }

    let p = 11;
    let f = make_fp2(p)?;
    let locus = Arc::new(enumerate_locus(&f, &builtin_phi(2, p)?)?);
    let mut lib = PhiLibrary::new(p);
    lib.add_directory(&Path::new(env!("CARGO_MANIFEST_DIR")).join("data"))?;
    let cache = BrandtCache::new(locus, Arc::new(lib));
    // class 2 is j = 1728; the residuals follow the level-11 newform q - 2q^2 - q^3 + 2q^4 + q^5 + ...
    for m in 1..=7 {
        let c = cusp_residual(&cache, 1, 1, m)?;
        println!("p = 11: c_{m}(1728, 1728) = {c}, Deligne ratio {:.4}", deligne_ratio(&cache, 1, 1, m)?);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("Eisenstein example");
}
