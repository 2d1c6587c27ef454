// Hecke orbits approaching Theta, and the fitted decay rate.

use std::sync::Arc;

use supersingular_hecke::arith::make_fp2;
use supersingular_hecke::brandt::BrandtCache;
use supersingular_hecke::equidist::{error_sweep, fit_power_law, orbit_measure, theta_star};
use supersingular_hecke::modpoly::{builtin_phi, PhiLibrary};
use supersingular_hecke::ssgraph::enumerate_locus;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let p = 101;
    let f = make_fp2(p)?;
    let locus = Arc::new(enumerate_locus(&f, &builtin_phi(2, p)?)?);
    let cache = BrandtCache::new(locus.clone(), Arc::new(PhiLibrary::new(p)));

    let theta: Vec<String> = theta_star(&locus).weights().iter().map(|w| w.to_string()).collect();
    println!("Theta = ({})", theta.join(", "));
    let orbit: Vec<String> = orbit_measure(&cache, 0, 64)?.weights().iter().map(|w| w.to_string()).collect();
    println!("orbit of E_1 under T_64 = ({})", orbit.join(", "));

    // m = 2^a 3^b needs only the built-in Phi_2 and Phi_3
    let mut ms: Vec<u64> = (0..14).flat_map(|a| (0..9).map(move |b| 2u64.pow(a) * 3u64.pow(b))).collect();
    ms.retain(|&m| m <= 10_000);
    ms.sort_unstable();
    let sweep = error_sweep(&cache, 0, &ms)?;
    for (m, e) in sweep.iter().filter(|(m, _)| [1, 8, 81, 1024, 6561].contains(m)) {
        println!("error_sup(1, {m}) = {e}");
    }
    let fit = fit_power_law(&sweep)?;
    println!("slope {:.3}, intercept {:.3}, rms {:.3} over {} points", fit.slope, fit.intercept, fit.rms, fit.used);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("equidistribution example");
}
