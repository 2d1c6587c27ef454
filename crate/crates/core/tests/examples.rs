mod field_arithmetic {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/field_arithmetic.rs"));
}

#[test]
fn field_arithmetic_runs() {
    field_arithmetic::run_example().expect("field_arithmetic example should run");
}

mod supersingular_locus {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/supersingular_locus.rs"));
}

#[test]
fn supersingular_locus_runs() {
    supersingular_locus::run_example().expect("supersingular_locus example should run");
}

mod modular_polynomials {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/modular_polynomials.rs"));
}

#[test]
fn modular_polynomials_runs() {
    modular_polynomials::run_example().expect("modular_polynomials example should run");
}

mod brandt_matrices {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/brandt_matrices.rs"));
}

#[test]
fn brandt_matrices_runs() {
    brandt_matrices::run_example().expect("brandt_matrices example should run");
}

mod velu_oracle {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/velu_oracle.rs"));
}

#[test]
fn velu_oracle_runs() {
    velu_oracle::run_example().expect("velu_oracle example should run");
}

mod eisenstein_residuals {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/eisenstein_residuals.rs"));
}

#[test]
fn eisenstein_residuals_runs() {
    eisenstein_residuals::run_example().expect("eisenstein_residuals example should run");
}

mod equidistribution {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/equidistribution.rs"));
}

#[test]
fn equidistribution_runs() {
    equidistribution::run_example().expect("equidistribution example should run");
}

mod commuting_maps {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/commuting_maps.rs"));
}

#[test]
fn commuting_maps_runs() {
    commuting_maps::run_example().expect("commuting_maps example should run");
}

mod command_line {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/command_line.rs"));
}

#[test]
fn command_line_runs() {
    command_line::run_example().expect("command_line example should run");
}
