//! Shared setup for the pipeline benchmarks.

use symfock::catalog::builtin;
use symfock::complexification::{construct_compatible_structure, ComplexifiedSpace};
use symfock::fock::{build_fock, FockRep};

pub fn scenario_rep(name: &str, mass: f64, omega: f64, cutoff: usize) -> FockRep {
    let sc = builtin(name, mass, omega, 1.0, cutoff).expect("builtin scenario");
    let j = construct_compatible_structure(&sc.form, &sc.generator).expect("structure");
    let space = ComplexifiedSpace::new(sc.form.clone(), j).expect("space");
    build_fock(space, cutoff, sc.hbar).expect("representation")
}
