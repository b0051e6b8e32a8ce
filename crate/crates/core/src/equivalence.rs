//! Unitary equivalence of two quantizations of the same dynamics: the
//! one-particle isometry lifts to a unitary between the truncated occupation
//! spaces that maps ladder and field operators onto each other, preserves
//! vacuum correlations, and leaves spectra untouched. Also the advertised
//! failure mode: reading the one-particle Hamiltonian in the wrong frame
//! produces a spectrum unbounded below.

use nalgebra::{Complex, DMatrix};

use crate::catalog::Scenario;
use crate::complexification::{
    construct_compatible_structure, isometry_check, mode_matrix, ComplexStructure,
    ComplexifiedSpace,
};
use crate::error::{Error, Result};
use crate::fock::{
    annihilator, build_fock, field_operator, second_quantize, spectrum, sub_block_max,
    vacuum_two_point, wick_npoint, FockRep,
};
use crate::linalg::{identity_c, max_abs_vec_c, max_diff, max_diff_c, CMat, RMat, RVec};
use crate::phase_space::{standard_form_matrix, LinearMap};
use crate::sample::VectorSampler;
use crate::{DEFAULT_SEED, TOL_FOCK, TOL_MATRIX};

const ISOMETRY_PAIRS: usize = 16;

/// u_jk = <e'_j, g e_k> in the target inner product; unitary whenever g is an
/// isometry between the two mode spaces.
pub fn one_particle_unitary(
    g: &LinearMap,
    from: &ComplexifiedSpace,
    to: &ComplexifiedSpace,
) -> Result<CMat> {
    let residual = isometry_check(g, from, to, ISOMETRY_PAIRS, DEFAULT_SEED)?;
    if residual > TOL_MATRIX {
        return Err(Error::NotIsometric { residual });
    }
    let n = from.n_modes();
    let mut u = CMat::zeros(n, n);
    for k in 0..n {
        let image = g.apply(&from.basis()[k])?;
        for j in 0..n {
            u[(j, k)] = to.inner_product(&to.basis()[j], &image)?;
        }
    }
    let unitarity = max_diff_c(&(u.adjoint() * &u), &identity_c(n));
    if unitarity > TOL_MATRIX {
        return Err(Error::NotUnitary {
            residual: unitarity,
        });
    }
    Ok(u)
}

fn factorial(n: usize) -> f64 {
    (1..=n).fold(1.0, |acc, k| acc * k as f64)
}

/// Occupation-space lift of a mode unitary: column for state (n_1..) is
/// prod_j (sum_k u_kj a_k*)^(n_j) vacuum / sqrt(prod n_j! hbar^(n_j)).
/// Number-conserving, hence unitary shell by shell.
pub fn fock_lift(rep: &FockRep, u: &CMat) -> Result<CMat> {
    let n = rep.n_modes();
    if u.nrows() != n || u.ncols() != n {
        return Err(Error::Dimension(format!(
            "mode matrix is {}x{} for {} modes",
            u.nrows(),
            u.ncols(),
            n
        )));
    }
    let unitarity = max_diff_c(&(u.adjoint() * u), &identity_c(n));
    if unitarity > TOL_MATRIX {
        return Err(Error::NotUnitary {
            residual: unitarity,
        });
    }
    let dim = rep.dim();
    let lifted: Vec<CMat> = (0..n)
        .map(|j| {
            let mut c = CMat::zeros(dim, dim);
            for k in 0..n {
                c += rep.creator_matrix(k) * u[(k, j)];
            }
            c
        })
        .collect();
    let mut out = CMat::zeros(dim, dim);
    for (col, state) in rep.basis().states().iter().enumerate() {
        let mut vec = rep.vacuum().clone();
        let mut norm2 = 1.0_f64;
        for (j, &occ) in state.iter().enumerate() {
            for _ in 0..occ {
                vec = &lifted[j] * vec;
            }
            norm2 *= factorial(occ) * rep.hbar().powi(occ as i32);
        }
        vec /= Complex::new(norm2.sqrt(), 0.0);
        out.set_column(col, &vec);
    }
    Ok(out)
}

/// Unitary between two truncated representations carrying pi_J(v) to
/// pi_K(gv), with the vacuum-to-vacuum phase fixed to +1.
#[derive(Clone, Debug)]
pub struct Intertwiner {
    one_particle: CMat,
    matrix: CMat,
    relating: LinearMap,
    source: FockRep,
    target: FockRep,
}

impl Intertwiner {
    pub fn one_particle(&self) -> &CMat {
        &self.one_particle
    }

    pub fn matrix(&self) -> &CMat {
        &self.matrix
    }

    pub fn relating(&self) -> &LinearMap {
        &self.relating
    }

    pub fn source(&self) -> &FockRep {
        &self.source
    }

    pub fn target(&self) -> &FockRep {
        &self.target
    }
}

pub fn build_intertwiner(rep_j: &FockRep, rep_k: &FockRep, g: &LinearMap) -> Result<Intertwiner> {
    if rep_j.basis().cutoff() != rep_k.basis().cutoff() {
        return Err(Error::NotComparable(format!(
            "cutoffs differ: {} vs {}",
            rep_j.basis().cutoff(),
            rep_k.basis().cutoff()
        )));
    }
    if rep_j.n_modes() != rep_k.n_modes() {
        return Err(Error::NotComparable(format!(
            "mode counts differ: {} vs {}",
            rep_j.n_modes(),
            rep_k.n_modes()
        )));
    }
    if rep_j.hbar() != rep_k.hbar() {
        return Err(Error::NotComparable(format!(
            "hbar differs: {} vs {}",
            rep_j.hbar(),
            rep_k.hbar()
        )));
    }
    let u = one_particle_unitary(g, rep_j.space(), rep_k.space())?;
    let matrix = fock_lift(rep_k, &u)?;
    let unitarity = max_diff_c(&(matrix.adjoint() * &matrix), &identity_c(rep_j.dim()));
    if unitarity > TOL_MATRIX {
        return Err(Error::NotUnitary {
            residual: unitarity,
        });
    }
    let vacuum_gap = max_abs_vec_c(&(&matrix * rep_j.vacuum() - rep_k.vacuum()));
    if vacuum_gap > TOL_MATRIX {
        return Err(Error::StructureInvalid(format!(
            "lift moves the vacuum by {:.3e}",
            vacuum_gap
        )));
    }
    let iw = Intertwiner {
        one_particle: u,
        matrix,
        relating: g.clone(),
        source: rep_j.clone(),
        target: rep_k.clone(),
    };
    for e in rep_j.space().basis() {
        let residual = intertwining_residual(&iw, e)?;
        if residual > TOL_FOCK {
            return Err(Error::RelationResidual { residual });
        }
    }
    Ok(iw)
}

/// max over the safe sub-block of |U pi_J(v) U* - pi_K(gv)| and
/// |U a_J(v) U* - a_K(gv)|.
pub fn intertwining_residual(iw: &Intertwiner, v: &RVec) -> Result<f64> {
    let gv = iw.relating.apply(v)?;
    let u = &iw.matrix;
    let ustar = u.adjoint();
    let cols = iw.source.safe_cols();

    let field_gap = u * field_operator(&iw.source, v)? * &ustar - field_operator(&iw.target, &gv)?;
    let ladder_gap = u * annihilator(&iw.source, v)? * &ustar - annihilator(&iw.target, &gv)?;
    Ok(sub_block_max(&field_gap, cols).max(sub_block_max(&ladder_gap, cols)))
}

/// Two- and four-point vacuum correlation gaps between a representation and
/// the g-image of its arguments in another.
#[derive(Clone, Copy, Debug)]
pub struct CorrelationReport {
    pub two_point: f64,
    pub four_point: f64,
}

impl CorrelationReport {
    pub fn max(&self) -> f64 {
        self.two_point.max(self.four_point)
    }
}

pub fn correlation_agreement(
    rep_j: &FockRep,
    rep_k: &FockRep,
    g: &LinearMap,
    seed: u64,
    pairs: usize,
    quads: usize,
) -> Result<CorrelationReport> {
    let dim = rep_j.space().dim();
    let mut sampler = VectorSampler::new(seed);
    let mut two_point = 0.0_f64;
    for _ in 0..pairs {
        let v = sampler.vector(dim);
        let w = sampler.vector(dim);
        let lhs = vacuum_two_point(rep_j, &v, &w)?;
        let rhs = vacuum_two_point(rep_k, &g.apply(&v)?, &g.apply(&w)?)?;
        two_point = two_point.max((lhs - rhs).norm());
    }
    let mut four_point = 0.0_f64;
    for _ in 0..quads {
        let vs: Vec<RVec> = (0..4).map(|_| sampler.vector(dim)).collect();
        let gvs: Vec<RVec> = vs
            .iter()
            .map(|v| g.apply(v))
            .collect::<Result<Vec<_>>>()?;
        let lhs = wick_npoint(rep_j, &vs)?;
        let rhs = wick_npoint(rep_k, &gvs)?;
        four_point = four_point.max((lhs - rhs).norm());
    }
    Ok(CorrelationReport {
        two_point,
        four_point,
    })
}

/// Spectra of a one-particle operator and its conjugate g H g^{-1}, which
/// agree as multisets; positivity is likewise carried over.
#[derive(Clone, Debug)]
pub struct SpectrumComparison {
    pub source_spectrum: Vec<f64>,
    pub target_spectrum: Vec<f64>,
    pub source_positive: bool,
    pub target_positive: bool,
    pub max_gap: f64,
    pub transformed: LinearMap,
}

fn sorted_real_eigenvalues(m: &RMat) -> Vec<f64> {
    let mut values: Vec<f64> = m
        .clone()
        .complex_eigenvalues()
        .iter()
        .map(|z| z.re)
        .collect();
    values.sort_by(|a, b| a.total_cmp(b));
    values
}

pub fn transformed_hamiltonian_check(
    g: &LinearMap,
    h_j: &LinearMap,
) -> Result<SpectrumComparison> {
    if g.dim_domain() != h_j.dim_domain() {
        return Err(Error::Dimension(format!(
            "map acts on {} coordinates but the operator on {}",
            g.dim_domain(),
            h_j.dim_domain()
        )));
    }
    let g_inv = g.inverse()?;
    let transformed = LinearMap::endo(
        g.matrix() * h_j.matrix() * g_inv.matrix(),
        g.codomain().clone(),
    )?;
    let source_spectrum = sorted_real_eigenvalues(h_j.matrix());
    let target_spectrum = sorted_real_eigenvalues(transformed.matrix());
    let scale = source_spectrum
        .iter()
        .fold(1.0_f64, |acc, x| acc.max(x.abs()));
    let max_gap = source_spectrum
        .iter()
        .zip(&target_spectrum)
        .fold(0.0_f64, |acc, (a, b)| acc.max((a - b).abs()));
    Ok(SpectrumComparison {
        source_positive: source_spectrum.first().is_some_and(|x| *x > -1e-10 * scale),
        target_positive: target_spectrum.first().is_some_and(|x| *x > -1e-10 * scale),
        source_spectrum,
        target_spectrum,
        max_gap,
        transformed,
    })
}

/// Frobenius norm of hJ - Jh: the size of the conjugate-linear part of h,
/// zero exactly when h is complex-linear for J.
pub fn bogoliubov_defect(j: &ComplexStructure, h: &LinearMap) -> Result<f64> {
    if h.dim_domain() != j.dim() || h.matrix().nrows() != j.dim() {
        return Err(Error::Dimension(format!(
            "map is {}x{} but the structure has {} coordinates",
            h.matrix().nrows(),
            h.matrix().ncols(),
            j.dim()
        )));
    }
    Ok((h.matrix() * j.matrix() - j.matrix() * h.matrix()).norm())
}

/// The misread-versus-correct comparison for the flipped oscillator pair.
#[derive(Clone, Debug)]
pub struct DiscrepancyReport {
    pub omega: f64,
    /// Mode eigenvalues of -K Omega with the untransported generator.
    pub misread_mode_spectrum: Vec<f64>,
    /// Mode eigenvalues of g H g^{-1}.
    pub correct_mode_spectrum: Vec<f64>,
    pub misread_fock_minimum: f64,
    pub correct_fock_minimum: f64,
    /// Where the flipped description's operators actually live: the g-image
    /// of the original coordinates.
    pub corrected_identification: String,
}

impl DiscrepancyReport {
    pub fn misread_bounded_below(&self) -> bool {
        self.misread_fock_minimum > -1e-9
    }

    pub fn correct_positive_semidefinite(&self) -> bool {
        self.correct_fock_minimum > -1e-9
    }
}

fn sign_flip_form_matrix() -> RMat {
    DMatrix::from_fn(4, 4, |i, j| match (i, j) {
        (0, 2) => -1.0,
        (1, 3) => 1.0,
        (2, 0) => 1.0,
        (3, 1) => -1.0,
        _ => 0.0,
    })
}

fn describe_image(g: &RMat, labels: &[String]) -> String {
    let scale = g.amax();
    let rows: Vec<String> = (0..g.nrows())
        .map(|i| {
            let mut terms = Vec::new();
            for (j, label) in labels.iter().enumerate() {
                let c = g[(i, j)];
                if c.abs() <= 1e-12 * scale {
                    continue;
                }
                if (c - 1.0).abs() < 1e-12 {
                    terms.push(label.clone());
                } else if (c + 1.0).abs() < 1e-12 {
                    terms.push(format!("-{}", label));
                } else {
                    terms.push(format!("{}*{}", c, label));
                }
            }
            terms.join(" + ")
        })
        .collect();
    format!("({})", rows.join(", "))
}

/// Contrasts the naive Hamiltonian reading in the flipped description (using
/// the untransported generator, which yields eigenvalues of both signs and a
/// second-quantized operator unbounded below) with the transported one, which
/// is isotropic and positive. Only defined for the rescaled oscillator pair.
pub fn naive_vs_correct_hamiltonian(
    original: &Scenario,
    flipped: &Scenario,
) -> Result<DiscrepancyReport> {
    let w = original.omega;
    if (flipped.omega - w).abs() > 1e-12 {
        return Err(Error::NotDemoPair(format!(
            "frequencies differ: {} vs {}",
            w, flipped.omega
        )));
    }
    if (flipped.hbar - original.hbar).abs() > 1e-12 {
        return Err(Error::NotDemoPair(format!(
            "hbar differs: {} vs {}",
            original.hbar, flipped.hbar
        )));
    }
    if original.form.dim() != 4 || flipped.form.dim() != 4 {
        return Err(Error::NotDemoPair(
            "the demonstration pair has two modes".into(),
        ));
    }
    let s_std = standard_form_matrix(2);
    let s_flip = sign_flip_form_matrix();
    let checks = [
        ("original form", max_diff(original.form.matrix(), &s_std)),
        (
            "original generator",
            max_diff(original.generator.matrix(), &(&s_std * w)),
        ),
        ("flipped form", max_diff(flipped.form.matrix(), &s_flip)),
        (
            "flipped generator",
            max_diff(flipped.generator.matrix(), &(&s_flip * w)),
        ),
    ];
    for (what, residual) in checks {
        if residual > 1e-12 {
            return Err(Error::NotDemoPair(format!(
                "{} deviates from the rescaled oscillator pair by {:.3e}",
                what, residual
            )));
        }
    }

    let frame = original.frame().clone();
    let flip = LinearMap::endo(
        DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![-1.0, 1.0, 1.0, 1.0])),
        frame.clone(),
    )?;

    let k = construct_compatible_structure(&flipped.form, &flipped.generator)?;
    let space_k = ComplexifiedSpace::new(flipped.form.clone(), k)?;

    // Naive reading: pair the flipped structure with the original dynamics.
    let misread = LinearMap::endo(
        -space_k.structure().matrix() * original.generator.matrix(),
        frame.clone(),
    )?;
    // Transported reading: H_K = g H_J g^{-1} with H_J = -J Omega = omega I.
    let j = construct_compatible_structure(&original.form, &original.generator)?;
    let h_j = LinearMap::endo(-j.matrix() * original.generator.matrix(), frame)?;
    let correct = transformed_hamiltonian_check(&flip, &h_j)?.transformed;

    let mode_eigen = |map: &LinearMap| -> Result<Vec<f64>> {
        let h = mode_matrix(&space_k, map)?;
        let herm = (&h + h.adjoint()) * Complex::new(0.5, 0.0);
        let mut values: Vec<f64> = nalgebra::SymmetricEigen::new(herm)
            .eigenvalues
            .iter()
            .copied()
            .collect();
        values.sort_by(|a, b| a.total_cmp(b));
        Ok(values)
    };
    let misread_mode_spectrum = mode_eigen(&misread)?;
    let correct_mode_spectrum = mode_eigen(&correct)?;

    let rep_k = build_fock(space_k, flipped.cutoff, flipped.hbar)?;
    let misread_fock = spectrum(
        &second_quantize(&rep_k, &misread)?,
        rep_k.basis(),
        rep_k.basis().cutoff(),
    )?;
    let correct_fock = spectrum(
        &second_quantize(&rep_k, &correct)?,
        rep_k.basis(),
        rep_k.basis().cutoff(),
    )?;

    Ok(DiscrepancyReport {
        omega: w,
        misread_mode_spectrum,
        correct_mode_spectrum,
        misread_fock_minimum: misread_fock[0],
        correct_fock_minimum: correct_fock[0],
        corrected_identification: describe_image(flip.matrix(), frame_labels(original)),
    })
}

fn frame_labels(scenario: &Scenario) -> &[String] {
    scenario.frame().labels()
}
