//! The three subcommand pipelines: validate, quantize, compare.

use std::collections::BTreeMap;

use serde_json::json;

use symfock::catalog::{builtin, load_scenario, oscillator_generator, Scenario, BUILTIN_NAMES};
use symfock::complexification::{
    construct_compatible_structure, one_particle_hamiltonian, transport_structure,
    verify_complex_structure, ComplexifiedSpace, StructureResiduals,
};
use symfock::equivalence::{
    bogoliubov_defect, build_intertwiner, correlation_agreement, intertwining_residual,
    naive_vs_correct_hamiltonian, transformed_hamiltonian_check,
};
use symfock::fock::{
    build_fock, ccr_check, coordinate_vacuum_residual, field_operator,
    hamiltonian_commutator_check, second_quantize, spectrum, FockRep, GridSpec,
};
use symfock::linalg::{commutator_c, identity_c, max_abs, max_abs_vec_c, max_diff, max_diff_c, C64};
use symfock::phase_space::{
    dimension_check, is_hamiltonian_generator, relating_transformation, transform_form, LinearMap,
};
use symfock::sample::VectorSampler;
use symfock::{Error, Result, DEFAULT_CUTOFF, TOL_MATRIX, TOL_RANK, TOL_RELATION};

use crate::report::{matrix_rows, CheckRecord, Matrices, Parameters, RunReport, ScenarioRef};

/// Resolved command-line knobs. `cutoff` is `None` when the flag was not
/// given, so file scenarios keep their stored truncation.
pub struct Settings {
    pub cutoff: Option<usize>,
    pub tolerance: f64,
    pub seed: u64,
    pub mass: f64,
    pub omega: f64,
    pub hbar: f64,
}

/// Sampled-check sizes, fixed so reports are reproducible byte for byte.
const CCR_PAIRS: usize = 20;
const COMMUTATOR_VECTORS: usize = 5;
const INTERTWINING_VECTORS: usize = 20;
const TWO_POINT_PAIRS: usize = 50;
const FOUR_POINT_QUADS: usize = 10;
const TWO_POINT_TOL: f64 = 1e-10;
const FIELD_CCR_TOL: f64 = 1e-10;
const GAUSSIAN_TOL: f64 = 1e-6;

/// Builtin names take precedence over filesystem paths.
fn resolve_scenario(spec: &str, st: &Settings) -> Result<Scenario> {
    if BUILTIN_NAMES.contains(&spec) {
        return builtin(
            spec,
            st.mass,
            st.omega,
            st.hbar,
            st.cutoff.unwrap_or(DEFAULT_CUTOFF),
        );
    }
    let text = std::fs::read_to_string(spec).map_err(|e| {
        Error::Schema(format!(
            "'{}' is not a builtin scenario ({}) and could not be read as a file: {}",
            spec,
            BUILTIN_NAMES.join(", "),
            e
        ))
    })?;
    let mut sc = load_scenario(&text)?;
    if let Some(c) = st.cutoff {
        sc.cutoff = c;
    }
    Ok(sc)
}

fn parameters(sc: &Scenario, seed: u64) -> Parameters {
    Parameters {
        m: sc.mass,
        omega: sc.omega,
        hbar: sc.hbar,
        cutoff: sc.cutoff,
        seed,
    }
}

fn structure_max_residual(r: &StructureResiduals) -> f64 {
    r.square
        .max(r.compatibility)
        .max(r.commutation)
        .max((-r.positivity_min).max(0.0))
}

fn scaled_relation_tol(reference: f64) -> f64 {
    TOL_RELATION * reference.max(1.0)
}

pub fn cmd_validate(spec: &str, st: &Settings) -> Result<RunReport> {
    let sc = resolve_scenario(spec, st)?;
    let validation = sc.form.validation();
    let mut checks = Vec::new();
    checks.push(CheckRecord::new(
        "form_antisymmetry",
        validation.antisymmetry_residual,
        0.0,
    ));
    // Nondegeneracy is a threshold on the singular-value ratio, not a
    // residual; encoded so that passed <=> ratio >= the rank tolerance.
    checks.push(CheckRecord::new(
        "form_nondegeneracy",
        (TOL_RANK - validation.rank_ratio()).max(0.0),
        0.0,
    ));
    checks.push(CheckRecord::new(
        "generator_condition",
        is_hamiltonian_generator(&sc.form, &sc.generator)?,
        scaled_relation_tol(max_abs(sc.form.matrix()) * max_abs(sc.generator.matrix())),
    ));

    let dims = dimension_check(&sc.form);
    let mut diagnostics = BTreeMap::new();
    diagnostics.insert(
        "dimension_uniformity".to_string(),
        json!({
            "uniform": dims.uniform,
            "action_valued": dims.action_valued,
            "common": dims.common.map(|d| d.to_string()),
            "entries": dims
                .entries
                .iter()
                .map(|(i, j, d)| json!([i, j, d.to_string()]))
                .collect::<Vec<_>>(),
        }),
    );

    Ok(RunReport {
        scenario: ScenarioRef::Single(sc.name.clone()),
        parameters: parameters(&sc, st.seed),
        checks,
        matrices: Matrices::default(),
        spectrum: Vec::new(),
        diagnostics,
        elapsed_ms: 0.0,
    })
}

/// Max over sampled pairs of the field-commutator defect
/// [pi(v), pi(w)] + i hbar s(v, w) I, restricted to truncation-safe columns.
fn field_ccr_residual(sc: &Scenario, rep: &FockRep, seed: u64, pairs: usize) -> Result<f64> {
    let dim = sc.form.dim();
    let id = identity_c(rep.dim());
    let mut sampler = VectorSampler::new(seed);
    let mut worst = 0.0_f64;
    for _ in 0..pairs {
        let v = sampler.vector(dim);
        let w = sampler.vector(dim);
        let pv = field_operator(rep, &v)?;
        let pw = field_operator(rep, &w)?;
        let defect = commutator_c(&pv, &pw)
            + &id * C64::new(0.0, rep.hbar() * sc.form.evaluate(&v, &w)?);
        let block = defect.columns(0, rep.safe_cols());
        worst = worst.max(block.iter().fold(0.0_f64, |m, z| m.max(z.norm())));
    }
    Ok(worst)
}

pub fn cmd_quantize(spec: &str, st: &Settings) -> Result<RunReport> {
    let sc = resolve_scenario(spec, st)?;
    let dim = sc.form.dim();
    let j = construct_compatible_structure(&sc.form, &sc.generator)?;
    let j_rows = matrix_rows(j.matrix());
    let residuals = verify_complex_structure(&sc.form, j.matrix(), &sc.generator)?;
    let space = ComplexifiedSpace::new(sc.form.clone(), j)?;
    let h = one_particle_hamiltonian(&space, &sc.generator)?;
    let rep = build_fock(space, sc.cutoff, sc.hbar)?;
    let h_tilde = second_quantize(&rep, &h)?;
    let energies = spectrum(&h_tilde, rep.basis(), sc.cutoff)?;

    let mut checks = Vec::new();
    checks.push(CheckRecord::new(
        "structure_identities",
        structure_max_residual(&residuals),
        TOL_MATRIX,
    ));

    let mut sampler = VectorSampler::new(st.seed);
    let mut ladder = 0.0_f64;
    for _ in 0..CCR_PAIRS {
        let v = sampler.vector(dim);
        let w = sampler.vector(dim);
        ladder = ladder.max(ccr_check(&rep, &v, &w)?.max());
    }
    checks.push(CheckRecord::new("ccr_pairing", ladder, TOL_MATRIX));
    checks.push(CheckRecord::new(
        "field_commutators",
        field_ccr_residual(&sc, &rep, st.seed.wrapping_add(1), CCR_PAIRS)?,
        FIELD_CCR_TOL,
    ));

    let mut commutation = 0.0_f64;
    let mut sampler = VectorSampler::new(st.seed.wrapping_add(2));
    for _ in 0..COMMUTATOR_VECTORS {
        let v = sampler.vector(dim);
        commutation = commutation.max(hamiltonian_commutator_check(&rep, &h_tilde, &h, &v)?);
    }
    checks.push(CheckRecord::new(
        "hamiltonian_commutation",
        commutation,
        st.tolerance,
    ));

    // With an isotropic one-particle operator omega I the energies are
    // hbar omega (total occupation); the basis is sorted by total, so the
    // closed form reads off state by state.
    let isotropic = max_diff(
        h.matrix(),
        &(nalgebra::DMatrix::identity(dim, dim) * sc.omega),
    ) <= TOL_MATRIX * sc.omega.max(1.0);
    if isotropic {
        let gap = energies
            .iter()
            .enumerate()
            .fold(0.0_f64, |m, (i, e)| {
                m.max((e - sc.hbar * sc.omega * rep.basis().total(i) as f64).abs())
            });
        checks.push(CheckRecord::new("spectrum_pattern", gap, st.tolerance));
    }

    // Position-space vacuum check only applies when the dynamics are the
    // standard oscillator in these coordinates.
    let standard_oscillator = sc.n_modes() <= 2
        && max_diff(
            sc.generator.matrix(),
            &oscillator_generator(sc.n_modes(), sc.mass, sc.omega),
        ) <= scaled_relation_tol(max_abs(sc.generator.matrix()));
    if standard_oscillator {
        let residual = coordinate_vacuum_residual(sc.mass, sc.omega, sc.hbar, &GridSpec::standard())?;
        checks.push(CheckRecord::new(
            "vacuum_gaussian_residual",
            residual,
            GAUSSIAN_TOL,
        ));
    }

    Ok(RunReport {
        scenario: ScenarioRef::Single(sc.name.clone()),
        parameters: parameters(&sc, st.seed),
        checks,
        matrices: Matrices {
            j: Some(j_rows),
            g: None,
            h: Some(matrix_rows(h.matrix())),
        },
        spectrum: energies,
        diagnostics: BTreeMap::new(),
        elapsed_ms: 0.0,
    })
}

/// Relating-map candidates, most specific first: the composition of the two
/// stored transformations, the target's own transformation, then a Darboux
/// construction. Each candidate is kept only if it actually carries the
/// source form to the target form.
fn choose_relating(a: &Scenario, b: &Scenario) -> Result<LinearMap> {
    let tol = scaled_relation_tol(max_abs(b.form.matrix()));
    let mut candidates = Vec::new();
    if let (Some(ra), Some(rb)) = (&a.relating, &b.relating) {
        if let Ok(ra_inv) = ra.inverse() {
            candidates.push(rb.matrix() * ra_inv.matrix());
        }
    }
    if let Some(rb) = &b.relating {
        candidates.push(rb.matrix().clone());
    }
    for matrix in candidates {
        let g = LinearMap::between(matrix, a.frame().clone(), b.frame().clone())?;
        let moved = transform_form(&a.form, &g)?;
        if max_diff(moved.matrix(), b.form.matrix()) <= tol {
            return Ok(g);
        }
    }
    relating_transformation(&a.form, &b.form)
}

pub fn cmd_compare(spec_a: &str, spec_b: &str, st: &Settings, demo: bool) -> Result<RunReport> {
    let a = resolve_scenario(spec_a, st)?;
    let b = resolve_scenario(spec_b, st)?;
    if a.form.dim() != b.form.dim() {
        return Err(Error::NotComparable(format!(
            "scenarios have {} and {} coordinates",
            a.form.dim(),
            b.form.dim()
        )));
    }
    if (a.hbar - b.hbar).abs() > TOL_RELATION {
        return Err(Error::NotComparable(format!(
            "scenarios use different hbar: {} vs {}",
            a.hbar, b.hbar
        )));
    }
    if a.cutoff != b.cutoff {
        return Err(Error::NotComparable(format!(
            "scenarios use different cutoffs: {} vs {}",
            a.cutoff, b.cutoff
        )));
    }

    let g = choose_relating(&a, &b)?;
    let mut checks = Vec::new();

    let moved_form = transform_form(&a.form, &g)?;
    checks.push(CheckRecord::new(
        "relating_transformation",
        max_diff(moved_form.matrix(), b.form.matrix()),
        scaled_relation_tol(max_abs(b.form.matrix())),
    ));

    let g_inv = g.inverse()?;
    let moved_generator = g.matrix() * a.generator.matrix() * g_inv.matrix();
    checks.push(CheckRecord::new(
        "generator_transport",
        max_diff(&moved_generator, b.generator.matrix()),
        scaled_relation_tol(max_abs(b.generator.matrix())),
    ));

    let j_a = construct_compatible_structure(&a.form, &a.generator)?;
    let j_rows = matrix_rows(j_a.matrix());
    let bogoliubov = bogoliubov_defect(&j_a, &g)?;
    let k = transport_structure(&g, &j_a)?;
    let k_residuals = verify_complex_structure(&b.form, k.matrix(), &b.generator)?;
    checks.push(CheckRecord::new(
        "structure_transport",
        structure_max_residual(&k_residuals),
        TOL_MATRIX,
    ));

    let space_a = ComplexifiedSpace::new(a.form.clone(), j_a)?;
    let h_a = one_particle_hamiltonian(&space_a, &a.generator)?;
    let rep_a = build_fock(space_a, a.cutoff, a.hbar)?;
    let space_b = ComplexifiedSpace::new(b.form.clone(), k)?;
    let rep_b = build_fock(space_b, b.cutoff, b.hbar)?;

    let iw = build_intertwiner(&rep_a, &rep_b, &g)?;
    let u = iw.matrix();
    checks.push(CheckRecord::new(
        "intertwiner_unitarity",
        max_diff_c(&(u.adjoint() * u), &identity_c(u.nrows())),
        TOL_MATRIX,
    ));
    checks.push(CheckRecord::new(
        "vacuum_mapping",
        max_abs_vec_c(&(u * rep_a.vacuum() - rep_b.vacuum())),
        TOL_MATRIX,
    ));

    let mut sampler = VectorSampler::new(st.seed);
    let mut worst = 0.0_f64;
    for _ in 0..INTERTWINING_VECTORS {
        let v = sampler.vector(a.form.dim());
        worst = worst.max(intertwining_residual(&iw, &v)?);
    }
    checks.push(CheckRecord::new(
        "intertwining_relations",
        worst,
        st.tolerance,
    ));

    let correlations = correlation_agreement(
        &rep_a,
        &rep_b,
        &g,
        st.seed.wrapping_add(1),
        TWO_POINT_PAIRS,
        FOUR_POINT_QUADS,
    )?;
    checks.push(CheckRecord::new(
        "two_point_agreement",
        correlations.two_point,
        TWO_POINT_TOL,
    ));
    checks.push(CheckRecord::new(
        "four_point_agreement",
        correlations.four_point,
        st.tolerance,
    ));

    let comparison = transformed_hamiltonian_check(&g, &h_a)?;
    let h_k = comparison.transformed;
    let ht_a = second_quantize(&rep_a, &h_a)?;
    let ht_k = second_quantize(&rep_b, &h_k)?;
    let spec_src = spectrum(&ht_a, rep_a.basis(), a.cutoff)?;
    let spec_tgt = spectrum(&ht_k, rep_b.basis(), b.cutoff)?;
    let gap = spec_src
        .iter()
        .zip(&spec_tgt)
        .fold(0.0_f64, |m, (x, y)| m.max((x - y).abs()));
    checks.push(CheckRecord::new("spectrum_agreement", gap, st.tolerance));

    let mut diagnostics = BTreeMap::new();
    diagnostics.insert("bogoliubov_defect".to_string(), json!(bogoliubov));
    if demo {
        let d = naive_vs_correct_hamiltonian(&a, &b)?;
        diagnostics.insert(
            "demonstration".to_string(),
            json!({
                "omega": d.omega,
                "misread_mode_spectrum": d.misread_mode_spectrum,
                "correct_mode_spectrum": d.correct_mode_spectrum,
                "misread_fock_minimum": d.misread_fock_minimum,
                "correct_fock_minimum": d.correct_fock_minimum,
                "misread_bounded_below": d.misread_bounded_below(),
                "correct_positive_semidefinite": d.correct_positive_semidefinite(),
                "corrected_identification": d.corrected_identification,
            }),
        );
    }

    Ok(RunReport {
        scenario: ScenarioRef::Pair([a.name.clone(), b.name.clone()]),
        parameters: parameters(&a, st.seed),
        checks,
        matrices: Matrices {
            j: Some(j_rows),
            g: Some(matrix_rows(g.matrix())),
            h: Some(matrix_rows(h_k.matrix())),
        },
        spectrum: spec_tgt,
        diagnostics,
        elapsed_ms: 0.0,
    })
}
