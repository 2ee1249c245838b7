//! Randomised invariants, 128 cases each with a fixed seed.

mod common;

use common::props;

fn check(r: Result<(), String>) {
    if let Err(e) = r {
        panic!("{e}");
    }
}

#[test]
fn homogeneity() {
    check(props::homogeneity());
}

#[test]
fn legendre_round_trip() {
    check(props::legendre_round_trip());
}

#[test]
fn duality_consistency() {
    check(props::duality_consistency());
}

#[test]
fn symbol_is_spd() {
    check(props::symbol_is_spd());
}

#[test]
fn quadrature_normalisation() {
    check(props::quadrature_normalisation());
}

#[test]
fn stiffness_kernel_and_symmetry() {
    check(props::stiffness_kernel_and_symmetry());
}
