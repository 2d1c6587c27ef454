// Enumerating supersingular j-invariants and checking the mass formula.

use supersingular_hecke::arith::make_fp2;
use supersingular_hecke::modpoly::builtin_phi;
use supersingular_hecke::ssgraph::{enumerate_locus, find_starter, is_supersingular};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    for p in [11u64, 13, 37, 101] {
        let f = make_fp2(p)?;
        let locus = enumerate_locus(&f, &builtin_phi(2, p)?)?;
        let js: Vec<String> = (0..locus.n()).map(|i| format!("{}(w={})", locus.j(i), locus.weight(i))).collect();
        println!("p = {p}: starter j = {}, n = {}, mass = {}", find_starter(&f)?, locus.n(), locus.mass());
        println!("  {}", js.join(" "));
        println!("  Frobenius permutation {:?}", locus.frobenius_permutation()?);
    }
    let f = make_fp2(13)?;
    println!("p = 13: j = 0 supersingular? {}", is_supersingular(&f, &f.elem(0, 0)));
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("locus example");
}
