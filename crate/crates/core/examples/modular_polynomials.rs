// Loading modular polynomials from a database file and reducing them mod p.

use std::path::Path;

use supersingular_hecke::arith::make_fp2;
use supersingular_hecke::modpoly::{builtin_phi, parse_phi_file, parse_phi_str, reduce_decimal, PhiLibrary, PhiSource};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    println!("-162000 mod 11 = {:?}", reduce_decimal("-162000", 11));

    let phi2 = builtin_phi(2, 11)?;
    let f = make_fp2(11)?;
    println!("Phi_2(0, Y) mod 11 has coefficients {:?}", phi2.row(&f, &f.elem(0, 0)).coeffs());

    let data = Path::new(env!("CARGO_MANIFEST_DIR")).join("data");
    let phi5 = parse_phi_file(&data.join("phi_j_5.txt"), 5, 101)?;
    println!("Phi_5 mod 101: {} stored coefficients", phi5.entries().len());
    let phi5_mod5 = parse_phi_file(&data.join("phi_j_5.txt"), 5, 5)?;
    println!("Phi_5 mod 5 = (X^5 - Y)(X - Y^5)? {}", phi5_mod5.satisfies_kronecker_congruence());

    let mut lib = PhiLibrary::new(101);
    lib.add_directory(&data)?;
    println!("levels available for p = 101: {:?}", lib.levels());
    println!("Phi_17 available? {}", lib.has(17));

    match parse_phi_str("[3,0] 1\n[2,x] 7\n", 2, 11) {
        Err(e) => println!("malformed input rejected: {e}"),
        Ok(_) => unreachable!(),
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("modular polynomial example");
}
