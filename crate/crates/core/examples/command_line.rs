// Driving the `sshecke` command line in-process.

use supersingular_hecke::cli::run;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let data = concat!(env!("CARGO_MANIFEST_DIR"), "/data");
    let invocations: [&[&str]; 4] = [
        &["--p", "11", "locus"],
        &["--p", "11", "brandt", "--m", "2", "--oracle"],
        &["--p", "13", "equidist", "--i", "1", "--m-max", "12"],
        &["--p", "11", "--phi-dir", data, "brandt", "--m", "35"],
    ];
    for args in invocations {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = run(std::iter::once("sshecke").chain(args.iter().copied()), &mut out, &mut err);
        println!("$ sshecke {}   (exit {code})", args.join(" "));
        print!("{}{}", String::from_utf8(out)?, String::from_utf8(err)?);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("command line example");
}
