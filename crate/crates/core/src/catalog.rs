//! Builtin scenario library: the standard oscillator description, three
//! alternative forms with their reference structures and relating
//! transformations, and the rescaled pair used by the naive-vs-correct
//! demonstration. Also scenario (de)serialization.
//!
//! Reference matrices are generated from formulas in (m * omega), never
//! stored as floating literals, so they stay exact at every scale point.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::complexification::{verify_complex_structure, ComplexStructure, StructureResiduals};
use crate::error::{Error, Result};
use crate::linalg::{max_abs, max_diff, RMat};
use crate::phase_space::{
    is_hamiltonian_generator, standard_form_matrix, transform_form, CoordinateFrame, Dimension,
    LinearMap, SymplecticForm,
};
use crate::{TOL_MATRIX, TOL_RELATION};

pub const BUILTIN_NAMES: [&str; 6] = ["s0", "s1", "s2", "s3", "simple", "simple-alt"];

/// A complete quantization problem: form, dynamics, physical constants, and
/// (for builtins) the reference structure and relating transformation.
#[derive(Clone, Debug)]
pub struct Scenario {
    pub name: String,
    pub form: SymplecticForm,
    /// Generator of the dynamics in this scenario's own frame.
    pub generator: LinearMap,
    pub mass: f64,
    pub omega: f64,
    pub hbar: f64,
    pub cutoff: usize,
    /// Transformation featured with this scenario: for s0-s3 it relates the
    /// standard description to this one (form = pullback of the standard
    /// form); for the rescaled pair it is the coordinate flip connecting
    /// `simple` to `simple-alt`.
    pub relating: Option<LinearMap>,
    /// Reference structure for regression checks; builtin-only, never
    /// serialized.
    pub expected_structure: Option<ComplexStructure>,
}

impl Scenario {
    pub fn frame(&self) -> &CoordinateFrame {
        self.form.frame()
    }

    pub fn n_modes(&self) -> usize {
        self.form.n_modes()
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.mass > 0.0 && self.omega > 0.0 && self.hbar > 0.0) {
            return Err(Error::Parameter(format!(
                "mass {}, omega {}, hbar {} must all be positive",
                self.mass, self.omega, self.hbar
            )));
        }
        if self.cutoff < 1 {
            return Err(Error::InvalidCutoff);
        }
        let residual = is_hamiltonian_generator(&self.form, &self.generator)?;
        let scale = (max_abs(self.form.matrix()) * max_abs(self.generator.matrix())).max(1.0);
        if residual > TOL_RELATION * scale {
            return Err(Error::NotGenerator { residual });
        }
        if let Some(j) = &self.expected_structure {
            let r = verify_complex_structure(&self.form, j.matrix(), &self.generator)?;
            if !r.pass(TOL_MATRIX) {
                return Err(Error::StructureInvalid(format!(
                    "reference structure for '{}' fails verification",
                    self.name
                )));
            }
        }
        Ok(())
    }
}

/// Reference matrices for one builtin name, generated from (m, omega).
#[derive(Clone, Debug)]
pub struct ReferenceMatrices {
    pub form: RMat,
    pub structure: RMat,
    pub relating: RMat,
    pub generator: RMat,
}

fn blocks4(a: [[f64; 2]; 2], b: [[f64; 2]; 2], c: [[f64; 2]; 2], d: [[f64; 2]; 2]) -> RMat {
    DMatrix::from_fn(4, 4, |i, j| match (i / 2, j / 2) {
        (0, 0) => a[i][j],
        (0, 1) => b[i][j - 2],
        (1, 0) => c[i - 2][j],
        _ => d[i - 2][j - 2],
    })
}

const Z2: [[f64; 2]; 2] = [[0.0, 0.0], [0.0, 0.0]];

fn ident2(c: f64) -> [[f64; 2]; 2] {
    [[c, 0.0], [0.0, c]]
}

/// The 2x2 sign-flip diag(-1, 1), scaled.
fn iprime(c: f64) -> [[f64; 2]; 2] {
    [[-c, 0.0], [0.0, c]]
}

/// The 2x2 swap [[0,1],[1,0]], scaled.
fn gswap(c: f64) -> [[f64; 2]; 2] {
    [[0.0, c], [c, 0.0]]
}

/// Isotropic oscillator generator: dq/dt = p/m, dp/dt = -m omega^2 q.
pub fn oscillator_generator(n_modes: usize, mass: f64, omega: f64) -> RMat {
    let n = n_modes;
    DMatrix::from_fn(2 * n, 2 * n, |i, j| {
        if j == i + n {
            1.0 / mass
        } else if i == j + n {
            -mass * omega * omega
        } else {
            0.0
        }
    })
}

pub fn reference_matrices(name: &str, mass: f64, omega: f64) -> Result<ReferenceMatrices> {
    let mw = mass * omega;
    let osc = oscillator_generator(2, mass, omega);
    let identity = DMatrix::identity(4, 4);
    let m = match name {
        "s0" => ReferenceMatrices {
            form: standard_form_matrix(2),
            structure: blocks4(Z2, ident2(1.0 / mw), ident2(-mw), Z2),
            relating: identity,
            generator: osc,
        },
        "s1" => {
            let relating = blocks4(ident2(1.0), Z2, Z2, gswap(1.0));
            ReferenceMatrices {
                form: blocks4(Z2, gswap(1.0), gswap(-1.0), Z2),
                structure: blocks4(Z2, gswap(1.0 / mw), gswap(-mw), Z2),
                generator: &relating * osc * &relating,
                relating,
            }
        }
        "s2" => {
            let relating = blocks4(ident2(1.0), Z2, Z2, iprime(1.0));
            ReferenceMatrices {
                form: blocks4(Z2, iprime(1.0), iprime(-1.0), Z2),
                structure: blocks4(Z2, iprime(1.0 / mw), iprime(-mw), Z2),
                generator: &relating * osc * &relating,
                relating,
            }
        }
        "s3" => {
            let relating = DMatrix::from_row_slice(
                4,
                4,
                &[
                    1.0,
                    0.0,
                    0.0,
                    0.0,
                    0.0,
                    0.0,
                    -mw,
                    0.0,
                    0.0,
                    -1.0 / mw,
                    0.0,
                    0.0,
                    0.0,
                    0.0,
                    0.0,
                    1.0,
                ],
            );
            let pair2 = |c: f64| -> [[f64; 2]; 2] { [[0.0, -c], [c, 0.0]] };
            let jblock = [[0.0, -1.0 / (mw * mw)], [mw * mw, 0.0]];
            ReferenceMatrices {
                form: blocks4(pair2(1.0 / mw), Z2, Z2, pair2(mw)),
                structure: blocks4(jblock, Z2, Z2, jblock),
                generator: &relating * osc * &relating,
                relating,
            }
        }
        "simple" => ReferenceMatrices {
            form: standard_form_matrix(2),
            structure: blocks4(Z2, ident2(1.0), ident2(-1.0), Z2),
            relating: blocks4(iprime(1.0), Z2, Z2, ident2(1.0)),
            generator: standard_form_matrix(2) * omega,
        },
        "simple-alt" => ReferenceMatrices {
            form: blocks4(Z2, iprime(1.0), iprime(-1.0), Z2),
            structure: blocks4(Z2, iprime(1.0), iprime(-1.0), Z2),
            relating: blocks4(iprime(1.0), Z2, Z2, ident2(1.0)),
            generator: blocks4(Z2, iprime(1.0), iprime(-1.0), Z2) * omega,
        },
        other => return Err(Error::UnknownScenario(other.to_string())),
    };
    Ok(m)
}

pub fn builtin(name: &str, mass: f64, omega: f64, hbar: f64, cutoff: usize) -> Result<Scenario> {
    if !(mass > 0.0 && omega > 0.0 && hbar > 0.0) {
        return Err(Error::Parameter(format!(
            "mass {}, omega {}, hbar {} must all be positive",
            mass, omega, hbar
        )));
    }
    if cutoff < 1 {
        return Err(Error::InvalidCutoff);
    }
    let matrices = reference_matrices(name, mass, omega)?;
    let frame = CoordinateFrame::standard(2);
    let form = SymplecticForm::new(matrices.form, frame.clone())?;
    let generator = LinearMap::endo(matrices.generator, frame.clone())?;
    let relating = LinearMap::endo(matrices.relating, frame)?;
    let expected_structure = ComplexStructure::new(matrices.structure, &form, &generator)?;
    let scenario = Scenario {
        name: name.to_string(),
        form,
        generator,
        mass,
        omega,
        hbar,
        cutoff,
        relating: Some(relating),
        expected_structure: Some(expected_structure),
    };
    scenario.validate()?;
    Ok(scenario)
}

/// Consistency of one catalog row at a given scale point.
#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub name: String,
    /// max |S_row - pullback of the base form along the row's relating map|;
    /// absent where the relating map is not anchored to the row's own form
    /// (the `simple` row carries the demonstration flip instead).
    pub form_relation: Option<f64>,
    /// max |J_row - g J_base g^{-1}|; absent for the base rows and for
    /// `simple`, whose structure is scale-independent.
    pub structure_relation: Option<f64>,
    pub residuals: StructureResiduals,
}

#[derive(Clone, Debug)]
pub struct CatalogReport {
    pub entries: Vec<CatalogEntry>,
}

impl CatalogReport {
    pub fn pass(&self) -> bool {
        self.entries.iter().all(|e| {
            e.form_relation.map_or(true, |r| r < TOL_RELATION)
                && e.structure_relation.map_or(true, |r| r < TOL_RELATION)
                && e.residuals.pass(TOL_MATRIX)
        })
    }
}

/// Checks the printed relations between catalog rows: each alternative form
/// is the pullback of the standard one along its transformation, each
/// structure is the transport of the standard structure, and every row's
/// structure passes verification.
pub fn verify_catalog(mass: f64, omega: f64) -> Result<CatalogReport> {
    let frame = CoordinateFrame::standard(2);
    let base = reference_matrices("s0", mass, omega)?;
    let base_form = SymplecticForm::new(base.form.clone(), frame.clone())?;
    let simple = reference_matrices("simple", mass, omega)?;

    let mut entries = Vec::new();
    for name in BUILTIN_NAMES {
        let m = reference_matrices(name, mass, omega)?;
        let form = SymplecticForm::new(m.form.clone(), frame.clone())?;
        let generator = LinearMap::endo(m.generator.clone(), frame.clone())?;
        let residuals = verify_complex_structure(&form, &m.structure, &generator)?;

        let g = LinearMap::endo(m.relating.clone(), frame.clone())?;
        let (form_relation, structure_relation) = match name {
            "s0" => (Some(0.0), None),
            "s1" | "s2" | "s3" => {
                let moved = transform_form(&base_form, &g)?;
                let g_inv = m.relating.clone().try_inverse().ok_or(Error::Singular)?;
                let moved_j = &m.relating * &base.structure * g_inv;
                (
                    Some(max_diff(moved.matrix(), form.matrix())),
                    Some(max_diff(&moved_j, &m.structure)),
                )
            }
            // The flip relates the rescaled pair, not the row to itself.
            "simple" => (None, None),
            "simple-alt" => {
                let simple_form = SymplecticForm::new(simple.form.clone(), frame.clone())?;
                let moved = transform_form(&simple_form, &g)?;
                let g_inv = m.relating.clone().try_inverse().ok_or(Error::Singular)?;
                let moved_j = &m.relating * &simple.structure * g_inv;
                (
                    Some(max_diff(moved.matrix(), form.matrix())),
                    Some(max_diff(&moved_j, &m.structure)),
                )
            }
            _ => unreachable!(),
        };
        entries.push(CatalogEntry {
            name: name.to_string(),
            form_relation,
            structure_relation,
            residuals,
        });
    }
    Ok(CatalogReport { entries })
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScenarioDocument {
    name: String,
    coordinates: Vec<String>,
    units: Vec<Dimension>,
    symplectic: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    generator: Option<Vec<Vec<f64>>>,
    mass: f64,
    omega: f64,
    hbar: f64,
    cutoff: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    transformation: Option<Vec<Vec<f64>>>,
}

fn matrix_rows(m: &RMat) -> Vec<Vec<f64>> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect())
        .collect()
}

fn matrix_from_rows(field: &str, rows: &[Vec<f64>], dim: usize) -> Result<RMat> {
    if rows.len() != dim {
        return Err(Error::Schema(format!(
            "{}: expected {} rows, found {}",
            field,
            dim,
            rows.len()
        )));
    }
    for (i, row) in rows.iter().enumerate() {
        if row.len() != dim {
            return Err(Error::Schema(format!(
                "{}: row {} has {} entries, expected {}",
                field,
                i,
                row.len(),
                dim
            )));
        }
        for (j, x) in row.iter().enumerate() {
            if !x.is_finite() {
                return Err(Error::Schema(format!(
                    "{}: entry ({}, {}) is not finite",
                    field, i, j
                )));
            }
        }
    }
    Ok(DMatrix::from_fn(dim, dim, |i, j| rows[i][j]))
}

/// Serializes everything except the reference structure, which is a
/// builtin-only regression fixture.
pub fn save_scenario(scenario: &Scenario) -> Result<String> {
    let doc = ScenarioDocument {
        name: scenario.name.clone(),
        coordinates: scenario.frame().labels().to_vec(),
        units: scenario.frame().units().to_vec(),
        symplectic: matrix_rows(scenario.form.matrix()),
        generator: Some(matrix_rows(scenario.generator.matrix())),
        mass: scenario.mass,
        omega: scenario.omega,
        hbar: scenario.hbar,
        cutoff: scenario.cutoff,
        transformation: scenario.relating.as_ref().map(|g| matrix_rows(g.matrix())),
    };
    Ok(serde_json::to_string_pretty(&doc)?)
}

pub fn load_scenario(text: &str) -> Result<Scenario> {
    let doc: ScenarioDocument = serde_json::from_str(text)?;
    if doc.coordinates.is_empty() || doc.coordinates.len() % 2 != 0 {
        return Err(Error::Schema(format!(
            "coordinates: count must be even and positive, got {}",
            doc.coordinates.len()
        )));
    }
    let dim = doc.coordinates.len();
    let frame = CoordinateFrame::new(doc.coordinates, doc.units)
        .map_err(|e| Error::Schema(format!("coordinates/units: {}", e)))?;
    if !(doc.mass > 0.0 && doc.omega > 0.0 && doc.hbar > 0.0) {
        return Err(Error::Parameter(format!(
            "mass {}, omega {}, hbar {} must all be positive",
            doc.mass, doc.omega, doc.hbar
        )));
    }
    let form_matrix = matrix_from_rows("symplectic", &doc.symplectic, dim)?;
    let form = SymplecticForm::new(form_matrix, frame.clone())?;
    let generator_matrix = match &doc.generator {
        Some(rows) => matrix_from_rows("generator", rows, dim)?,
        None => oscillator_generator(dim / 2, doc.mass, doc.omega),
    };
    let generator = LinearMap::endo(generator_matrix, frame.clone())?;
    let relating = match &doc.transformation {
        Some(rows) => Some(LinearMap::endo(
            matrix_from_rows("transformation", rows, dim)?,
            frame,
        )?),
        None => None,
    };
    let scenario = Scenario {
        name: doc.name,
        form,
        generator,
        mass: doc.mass,
        omega: doc.omega,
        hbar: doc.hbar,
        cutoff: doc.cutoff,
        relating,
        expected_structure: None,
    };
    scenario.validate()?;
    Ok(scenario)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complexification::construct_compatible_structure;
    use crate::phase_space::{dimension_check, validate_symplectic};

    const POINTS: [(f64, f64); 3] = [(1.0, 1.0), (2.0, 0.5), (1.3, 2.7)];

    #[test]
    fn standard_row_at_unit_scale() {
        let m = reference_matrices("s0", 1.0, 1.0).unwrap();
        assert_eq!(m.form, standard_form_matrix(2));
        assert_eq!(m.structure, standard_form_matrix(2));
        assert_eq!(m.relating, DMatrix::identity(4, 4));
    }

    #[test]
    fn sign_flip_structure_at_double_scale() {
        // mw = 2: structure is [[0, 0.5 I'], [-2 I', 0]].
        let m = reference_matrices("s2", 2.0, 1.0).unwrap();
        let expected = DMatrix::from_row_slice(
            4,
            4,
            &[
                0.0, 0.0, -0.5, 0.0, //
                0.0, 0.0, 0.0, 0.5, //
                2.0, 0.0, 0.0, 0.0, //
                0.0, -2.0, 0.0, 0.0,
            ],
        );
        assert_eq!(m.structure, expected);
    }

    #[test]
    fn position_pairing_transformation_at_unit_scale() {
        let m = reference_matrices("s3", 1.0, 1.0).unwrap();
        let expected = DMatrix::from_row_slice(
            4,
            4,
            &[
                1.0, 0.0, 0.0, 0.0, //
                0.0, 0.0, -1.0, 0.0, //
                0.0, -1.0, 0.0, 0.0, //
                0.0, 0.0, 0.0, 1.0,
            ],
        );
        assert_eq!(m.relating, expected);
        // Involution: applying the swap twice is the identity.
        assert_eq!(&m.relating * &m.relating, DMatrix::identity(4, 4));
    }

    #[test]
    fn simple_structure_matches_standard_row_at_unit_scale() {
        let simple = reference_matrices("simple", 1.3, 2.7).unwrap();
        let s0 = reference_matrices("s0", 1.0, 1.0).unwrap();
        assert_eq!(simple.structure, s0.structure);
        let flip = DMatrix::from_row_slice(
            4,
            4,
            &[
                -1.0, 0.0, 0.0, 0.0, //
                0.0, 1.0, 0.0, 0.0, //
                0.0, 0.0, 1.0, 0.0, //
                0.0, 0.0, 0.0, 1.0,
            ],
        );
        assert_eq!(simple.relating, flip);
    }

    #[test]
    fn builtins_validate_at_all_grid_points() {
        for (m, w) in POINTS {
            for name in BUILTIN_NAMES {
                let scn = builtin(name, m, w, 1.0, 6).unwrap();
                assert!(scn.form.validation().pass(), "{} form at ({}, {})", name, m, w);
                let residual = is_hamiltonian_generator(&scn.form, &scn.generator).unwrap();
                assert!(residual < 1e-12, "{} generator residual {}", name, residual);
            }
        }
    }

    #[test]
    fn construction_reproduces_reference_structures() {
        for (m, w) in POINTS {
            for name in BUILTIN_NAMES {
                let scn = builtin(name, m, w, 1.0, 6).unwrap();
                let j = construct_compatible_structure(&scn.form, &scn.generator).unwrap();
                let expected = scn.expected_structure.as_ref().unwrap();
                assert!(
                    max_diff(j.matrix(), expected.matrix()) < 1e-10,
                    "{} at ({}, {})",
                    name,
                    m,
                    w
                );
            }
        }
    }

    #[test]
    fn catalog_relations_hold_at_all_grid_points() {
        for (m, w) in POINTS {
            let report = verify_catalog(m, w).unwrap();
            assert!(report.pass(), "catalog at ({}, {}): {:?}", m, w, report);
            assert_eq!(report.entries.len(), BUILTIN_NAMES.len());
        }
    }

    #[test]
    fn corrupted_transformation_shows_order_one_residual() {
        let base = reference_matrices("s0", 1.0, 1.0).unwrap();
        let m1 = reference_matrices("s1", 1.0, 1.0).unwrap();
        let mut bad = m1.relating.clone();
        bad[(2, 3)] = -bad[(2, 3)];
        let frame = CoordinateFrame::standard(2);
        let base_form = SymplecticForm::new(base.form, frame.clone()).unwrap();
        let g = LinearMap::endo(bad, frame).unwrap();
        let moved = transform_form(&base_form, &g).unwrap();
        let residual = max_diff(moved.matrix(), &m1.form);
        assert!(residual >= 1.0);
    }

    #[test]
    fn dimension_uniformity_across_catalog() {
        for name in ["s0", "s1", "s2", "simple", "simple-alt"] {
            let scn = builtin(name, 1.3, 2.7, 1.0, 6).unwrap();
            let report = dimension_check(&scn.form);
            assert!(report.action_valued, "{}", name);
        }
        let s3 = builtin("s3", 1.3, 2.7, 1.0, 6).unwrap();
        let report = dimension_check(&s3.form);
        assert!(!report.uniform);
    }

    #[test]
    fn rejects_bad_names_and_parameters() {
        assert!(matches!(
            builtin("s4", 1.0, 1.0, 1.0, 6),
            Err(Error::UnknownScenario(_))
        ));
        assert!(matches!(
            builtin("s0", -1.0, 1.0, 1.0, 6),
            Err(Error::Parameter(_))
        ));
        assert!(matches!(
            builtin("s0", 1.0, 1.0, 1.0, 0),
            Err(Error::InvalidCutoff)
        ));
    }

    #[test]
    fn save_load_round_trip_is_bit_exact() {
        let scn = builtin("s2", 1.3, 2.7, 0.7, 5).unwrap();
        let text = save_scenario(&scn).unwrap();
        let back = load_scenario(&text).unwrap();
        assert_eq!(back.name, scn.name);
        assert_eq!(back.cutoff, scn.cutoff);
        assert_eq!(back.hbar.to_bits(), scn.hbar.to_bits());
        for (a, b) in scn
            .form
            .matrix()
            .iter()
            .zip(back.form.matrix().iter())
        {
            assert_eq!(a.to_bits(), b.to_bits());
        }
        for (a, b) in scn
            .generator
            .matrix()
            .iter()
            .zip(back.generator.matrix().iter())
        {
            assert_eq!(a.to_bits(), b.to_bits());
        }
        let g0 = scn.relating.as_ref().unwrap();
        let g1 = back.relating.as_ref().unwrap();
        for (a, b) in g0.matrix().iter().zip(g1.matrix().iter()) {
            assert_eq!(a.to_bits(), b.to_bits());
        }
        // Round trip again: serialization is stable.
        assert_eq!(text, save_scenario(&back).unwrap());
    }

    #[test]
    fn load_reports_missing_field() {
        let text = r#"{"name":"x","coordinates":["x","p_x"],"units":[[[0,1],[1,1],[0,1]],[[1,1],[1,1],[-1,1]]],"mass":1.0,"omega":1.0,"hbar":1.0,"cutoff":3}"#;
        let err = load_scenario(text).unwrap_err();
        assert!(err.to_string().contains("symplectic"), "{}", err);
    }

    #[test]
    fn load_rejects_wrong_matrix_shape() {
        let text = r#"{
            "name": "x",
            "coordinates": ["x", "p_x"],
            "units": [[[0,1],[1,1],[0,1]], [[1,1],[1,1],[-1,1]]],
            "symplectic": [[0.0, 1.0, 0.0], [-1.0, 0.0, 0.0], [0.0, 0.0, 0.0]],
            "mass": 1.0, "omega": 1.0, "hbar": 1.0, "cutoff": 3
        }"#;
        let err = load_scenario(text).unwrap_err();
        assert!(matches!(err, Error::Schema(_)), "{}", err);
        assert!(err.to_string().contains("symplectic"));
    }

    #[test]
    fn load_defaults_generator_to_oscillator() {
        let text = r#"{
            "name": "one-mode",
            "coordinates": ["x", "p_x"],
            "units": [[[0,1],[1,1],[0,1]], [[1,1],[1,1],[-1,1]]],
            "symplectic": [[0.0, 1.0], [-1.0, 0.0]],
            "mass": 2.0, "omega": 0.5, "hbar": 1.0, "cutoff": 4
        }"#;
        let scn = load_scenario(text).unwrap();
        let expected = oscillator_generator(1, 2.0, 0.5);
        assert_eq!(scn.generator.matrix(), &expected);
    }

    #[test]
    fn load_rejects_degenerate_form() {
        let text = r#"{
            "name": "bad",
            "coordinates": ["x", "p_x"],
            "units": [[[0,1],[1,1],[0,1]], [[1,1],[1,1],[-1,1]]],
            "symplectic": [[0.0, 0.0], [0.0, 0.0]],
            "mass": 1.0, "omega": 1.0, "hbar": 1.0, "cutoff": 3
        }"#;
        assert!(matches!(
            load_scenario(text),
            Err(Error::DegenerateForm { .. })
        ));
    }

    #[test]
    fn load_rejects_unknown_keys() {
        let text = r#"{
            "name": "x",
            "coordinates": ["x", "p_x"],
            "units": [[[0,1],[1,1],[0,1]], [[1,1],[1,1],[-1,1]]],
            "symplectic": [[0.0, 1.0], [-1.0, 0.0]],
            "mass": 1.0, "omega": 1.0, "hbar": 1.0, "cutoff": 3,
            "extra": true
        }"#;
        assert!(load_scenario(text).is_err());
    }

    #[test]
    fn reference_forms_are_valid_symplectic_matrices() {
        for (m, w) in POINTS {
            for name in BUILTIN_NAMES {
                let mats = reference_matrices(name, m, w).unwrap();
                let report = validate_symplectic(&mats.form);
                assert!(report.pass(), "{} at ({}, {})", name, m, w);
            }
        }
    }
}
