// Cross-checking B(2) and B(3) against explicit Velu isogenies.

use supersingular_hecke::arith::{make_fp2, DEFAULT_SEED};
use supersingular_hecke::brandt::brandt_prime;
use supersingular_hecke::modpoly::builtin_phi;
use supersingular_hecke::ssgraph::enumerate_locus;
use supersingular_hecke::velu::{enumerate_isogenies, oracle_brandt, CurveModel};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let f = make_fp2(11)?;
    let e = CurveModel::from_j(&f, &f.elem(0, 0))?;
    let js: Vec<String> = enumerate_isogenies(&f, &e, 2, DEFAULT_SEED)?.iter().map(|j| j.to_string()).collect();
    println!("p = 11: 2-isogenous j-invariants of j = 0: {}", js.join(", "));

    for p in [11u64, 17, 23] {
        let f = make_fp2(p)?;
        let locus = enumerate_locus(&f, &builtin_phi(2, p)?)?;
        for ell in [2, 3] {
            let from_phi = brandt_prime(&locus, &builtin_phi(ell, p)?)?;
            let oracle = oracle_brandt(&locus, ell, DEFAULT_SEED)?;
            let verdict = if from_phi.entries() == oracle.entries() { "MATCH" } else { "MISMATCH" };
            println!("p = {p}, l = {ell}: {}  oracle: {verdict}", oracle.entries());
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("Velu example");
}
