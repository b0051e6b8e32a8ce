//! Truncated bosonic representation over a complexified phase space:
//! occupation bases, ladder and field operators, second quantization,
//! spectra, and vacuum correlation functions.
//!
//! Cutoff policy: the space holds all occupations with total <= N. Creators
//! map the top shell out of the space, so algebraic identities are asserted
//! on columns with total <= N-1; everything number-preserving is exact.

use std::collections::HashMap;
use std::f64::consts::FRAC_1_SQRT_2;

use nalgebra::Complex;

use crate::complexification::{mode_matrix, ComplexifiedSpace};
use crate::error::{Error, Result};
use crate::linalg::{commutator_c, identity_c, max_abs_c, max_diff_c, C64, CMat, CVec, RVec};
use crate::phase_space::LinearMap;
use crate::TOL_MATRIX;

fn binomial(n: usize, k: usize) -> usize {
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc as usize
}

/// Multi-indices (n_1..n_n) with total occupation <= cutoff, ordered by
/// total first, then lexicographically by components.
#[derive(Clone, Debug)]
pub struct OccupationBasis {
    n_modes: usize,
    cutoff: usize,
    states: Vec<Vec<usize>>,
    index: HashMap<Vec<usize>, usize>,
    /// shell_starts[t] is the dense index of the first state with total t;
    /// trailing entry is the dimension.
    shell_starts: Vec<usize>,
}

impl OccupationBasis {
    pub fn new(n_modes: usize, cutoff: usize) -> Result<Self> {
        if n_modes == 0 {
            return Err(Error::Dimension("basis needs at least one mode".into()));
        }
        if cutoff < 1 {
            return Err(Error::InvalidCutoff);
        }
        let mut states = Vec::with_capacity(binomial(cutoff + n_modes, n_modes));
        let mut shell_starts = Vec::with_capacity(cutoff + 2);
        for total in 0..=cutoff {
            shell_starts.push(states.len());
            let mut state = vec![0usize; n_modes];
            fill_shell(&mut states, &mut state, 0, total);
        }
        shell_starts.push(states.len());
        let index = states
            .iter()
            .enumerate()
            .map(|(i, s)| (s.clone(), i))
            .collect();
        Ok(Self {
            n_modes,
            cutoff,
            states,
            index,
            shell_starts,
        })
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn dim(&self) -> usize {
        self.states.len()
    }

    pub fn states(&self) -> &[Vec<usize>] {
        &self.states
    }

    pub fn state(&self, i: usize) -> &[usize] {
        &self.states[i]
    }

    pub fn total(&self, i: usize) -> usize {
        self.states[i].iter().sum()
    }

    pub fn index_of(&self, state: &[usize]) -> Option<usize> {
        self.index.get(state).copied()
    }

    /// Dimension of the sub-block with total occupation <= total. States are
    /// ordered by total, so this block is leading-principal.
    pub fn block_dim(&self, total: usize) -> usize {
        let t = total.min(self.cutoff);
        self.shell_starts[t + 1]
    }
}

fn fill_shell(states: &mut Vec<Vec<usize>>, state: &mut Vec<usize>, mode: usize, remaining: usize) {
    if mode + 1 == state.len() {
        state[mode] = remaining;
        states.push(state.clone());
        state[mode] = 0;
        return;
    }
    for c in 0..=remaining {
        state[mode] = c;
        fill_shell(states, state, mode + 1, remaining - c);
        state[mode] = 0;
    }
}

/// Ladder representation on the truncated occupation space, with
/// [a_j, a_k*] = hbar delta_jk below the top shell.
#[derive(Clone, Debug)]
pub struct FockRep {
    space: ComplexifiedSpace,
    basis: OccupationBasis,
    hbar: f64,
    annihilators: Vec<CMat>,
    vacuum: CVec,
}

impl FockRep {
    pub fn space(&self) -> &ComplexifiedSpace {
        &self.space
    }

    pub fn basis(&self) -> &OccupationBasis {
        &self.basis
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn dim(&self) -> usize {
        self.basis.dim()
    }

    pub fn n_modes(&self) -> usize {
        self.basis.n_modes()
    }

    pub fn annihilator_matrix(&self, mode: usize) -> &CMat {
        &self.annihilators[mode]
    }

    pub fn creator_matrix(&self, mode: usize) -> CMat {
        self.annihilators[mode].adjoint()
    }

    pub fn vacuum(&self) -> &CVec {
        &self.vacuum
    }

    /// Columns of the sub-block on which truncated commutator identities are
    /// exact: states with total occupation <= cutoff - 1.
    pub fn safe_cols(&self) -> usize {
        self.basis.block_dim(self.basis.cutoff() - 1)
    }
}

pub fn build_fock(space: ComplexifiedSpace, cutoff: usize, hbar: f64) -> Result<FockRep> {
    if cutoff < 1 {
        return Err(Error::InvalidCutoff);
    }
    if !(hbar > 0.0 && hbar.is_finite()) {
        return Err(Error::Parameter(format!("hbar {} must be positive", hbar)));
    }
    let basis = OccupationBasis::new(space.n_modes(), cutoff)?;
    let dim = basis.dim();
    let mut annihilators = Vec::with_capacity(space.n_modes());
    for mode in 0..space.n_modes() {
        let mut a = CMat::zeros(dim, dim);
        for (col, state) in basis.states().iter().enumerate() {
            if state[mode] == 0 {
                continue;
            }
            let mut lowered = state.clone();
            lowered[mode] -= 1;
            let row = basis.index_of(&lowered).expect("lowered state stays in basis");
            a[(row, col)] = Complex::new((hbar * state[mode] as f64).sqrt(), 0.0);
        }
        annihilators.push(a);
    }
    let mut vacuum = CVec::zeros(dim);
    let origin = basis
        .index_of(&vec![0; space.n_modes()])
        .expect("empty state is in every basis");
    vacuum[origin] = Complex::new(1.0, 0.0);
    Ok(FockRep {
        space,
        basis,
        hbar,
        annihilators,
        vacuum,
    })
}

/// a(v) = sum_j conj(<e_j, v>) a_j; antilinear, so a(Jv) = -i a(v).
pub fn annihilator(rep: &FockRep, v: &RVec) -> Result<CMat> {
    let coeffs = rep.space().coordinates(v)?;
    let dim = rep.dim();
    let mut out = CMat::zeros(dim, dim);
    for (j, c) in coeffs.iter().enumerate() {
        out += rep.annihilator_matrix(j) * c.conj();
    }
    Ok(out)
}

/// pi(v) = (a(v) + a*(v)) / sqrt(2); self-adjoint and real-linear in v.
pub fn field_operator(rep: &FockRep, v: &RVec) -> Result<CMat> {
    let a = annihilator(rep, v)?;
    Ok((&a + a.adjoint()) * Complex::new(FRAC_1_SQRT_2, 0.0))
}

/// Residuals of the commutation relations on the safe sub-block.
#[derive(Clone, Copy, Debug)]
pub struct CcrResiduals {
    /// max |[a(v), a*(w)] - hbar <v,w> I| over safe columns.
    pub pairing: f64,
    /// max |[a(v), a(w)]| over safe columns.
    pub annihilators: f64,
}

impl CcrResiduals {
    pub fn max(&self) -> f64 {
        self.pairing.max(self.annihilators)
    }

    pub fn pass(&self, tol: f64) -> bool {
        self.max() <= tol
    }
}

pub(crate) fn sub_block_max(m: &CMat, cols: usize) -> f64 {
    m.columns(0, cols)
        .iter()
        .fold(0.0_f64, |acc, z| acc.max(z.norm()))
}

pub fn ccr_check(rep: &FockRep, v: &RVec, w: &RVec) -> Result<CcrResiduals> {
    let av = annihilator(rep, v)?;
    let aw = annihilator(rep, w)?;
    let inner = rep.space().inner_product(v, w)?;
    let expected = identity_c(rep.dim()) * (inner * Complex::new(rep.hbar(), 0.0));
    let pair = commutator_c(&av, &aw.adjoint()) - expected;
    let anni = commutator_c(&av, &aw);
    let cols = rep.safe_cols();
    Ok(CcrResiduals {
        pairing: sub_block_max(&pair, cols),
        annihilators: sub_block_max(&anni, cols),
    })
}

/// Normal-ordered lift sum_jk <e_j, H e_k> a_j* a_k. Requires H complex-linear
/// and self-adjoint in the mode inner product; annihilates the vacuum by
/// construction.
pub fn second_quantize(rep: &FockRep, map: &LinearMap) -> Result<CMat> {
    let h = mode_matrix(rep.space(), map)?;
    let herm = max_diff_c(&h, &h.adjoint());
    if herm > TOL_MATRIX * max_abs_c(&h).max(1.0) {
        return Err(Error::NotSelfAdjoint { residual: herm });
    }
    let dim = rep.dim();
    let mut out = CMat::zeros(dim, dim);
    for j in 0..rep.n_modes() {
        let cj = rep.creator_matrix(j);
        for k in 0..rep.n_modes() {
            let coeff = h[(j, k)];
            if coeff == Complex::new(0.0, 0.0) {
                continue;
            }
            out += &cj * rep.annihilator_matrix(k) * coeff;
        }
    }
    Ok(out)
}

/// Residual of [H-tilde, a*(v)] = hbar a*(Hv) on the safe sub-block.
pub fn hamiltonian_commutator_check(
    rep: &FockRep,
    h_tilde: &CMat,
    map: &LinearMap,
    v: &RVec,
) -> Result<f64> {
    if h_tilde.nrows() != rep.dim() || h_tilde.ncols() != rep.dim() {
        return Err(Error::Dimension(format!(
            "operator is {}x{} on a {}-dimensional space",
            h_tilde.nrows(),
            h_tilde.ncols(),
            rep.dim()
        )));
    }
    let astar = annihilator(rep, v)?.adjoint();
    let hv = map.apply(v)?;
    let astar_hv = annihilator(rep, &hv)?.adjoint();
    let residual = commutator_c(h_tilde, &astar) - astar_hv * Complex::new(rep.hbar(), 0.0);
    Ok(sub_block_max(&residual, rep.safe_cols()))
}

/// Sorted eigenvalues of the leading sub-block with total occupation
/// <= safe_total.
pub fn spectrum(h_tilde: &CMat, basis: &OccupationBasis, safe_total: usize) -> Result<Vec<f64>> {
    if h_tilde.nrows() != basis.dim() || h_tilde.ncols() != basis.dim() {
        return Err(Error::Dimension(format!(
            "operator is {}x{} but the basis has dimension {}",
            h_tilde.nrows(),
            h_tilde.ncols(),
            basis.dim()
        )));
    }
    if safe_total > basis.cutoff() {
        return Err(Error::Parameter(format!(
            "safe total {} exceeds cutoff {}",
            safe_total,
            basis.cutoff()
        )));
    }
    let d = basis.block_dim(safe_total);
    let block = h_tilde.view((0, 0), (d, d)).into_owned();
    let herm = max_diff_c(&block, &block.adjoint());
    if herm > TOL_MATRIX * max_abs_c(&block).max(1.0) {
        return Err(Error::NotSelfAdjoint { residual: herm });
    }
    let hermitized = (&block + block.adjoint()) * Complex::new(0.5, 0.0);
    let eigen = nalgebra::SymmetricEigen::new(hermitized);
    let mut values: Vec<f64> = eigen.eigenvalues.iter().copied().collect();
    values.sort_by(|a, b| a.total_cmp(b));
    Ok(values)
}

/// a_j* a_j; diagonal with entries hbar n_j in occupation order.
pub fn number_operator(rep: &FockRep, mode: usize) -> CMat {
    rep.creator_matrix(mode) * rep.annihilator_matrix(mode)
}

/// <vacuum, pi(v)* pi(w) vacuum> by matrix action; equals hbar <v,w> / 2.
pub fn vacuum_two_point(rep: &FockRep, v: &RVec, w: &RVec) -> Result<C64> {
    let pv = field_operator(rep, v)? * rep.vacuum();
    let pw = field_operator(rep, w)? * rep.vacuum();
    Ok(pv.dotc(&pw))
}

/// Vacuum expectation of pi(v_1) ... pi(v_2k) as a sum over perfect pairings
/// of ordered two-point factors.
pub fn wick_npoint(rep: &FockRep, vectors: &[RVec]) -> Result<C64> {
    let count = vectors.len();
    if count % 2 != 0 {
        return Err(Error::OddMoment(count));
    }
    if count > 8 {
        return Err(Error::Parameter(format!(
            "{} insertions exceed the supported maximum of 8",
            count
        )));
    }
    if count == 0 {
        return Ok(Complex::new(1.0, 0.0));
    }
    let mut factor = vec![vec![Complex::new(0.0, 0.0); count]; count];
    for i in 0..count {
        for j in (i + 1)..count {
            factor[i][j] = vacuum_two_point(rep, &vectors[i], &vectors[j])?;
        }
    }
    Ok(pairing_sum((1u32 << count) - 1, &factor))
}

fn pairing_sum(mask: u32, factor: &[Vec<C64>]) -> C64 {
    if mask == 0 {
        return Complex::new(1.0, 0.0);
    }
    let i = mask.trailing_zeros() as usize;
    let rest = mask & !(1u32 << i);
    let mut total = Complex::new(0.0, 0.0);
    for j in (i + 1)..factor.len() {
        if rest & (1u32 << j) != 0 {
            total += factor[i][j] * pairing_sum(rest & !(1u32 << j), factor);
        }
    }
    total
}

/// Symmetric sampling grid for the coordinate-space ground state, in units of
/// the ground-state width sigma = sqrt(hbar / (m omega)).
#[derive(Clone, Copy, Debug)]
pub struct GridSpec {
    /// Half-width in standard deviations; at least 6.
    pub sigmas: f64,
    /// Total sample count; odd keeps 0 on the grid.
    pub points: usize,
}

impl GridSpec {
    pub fn standard() -> Self {
        Self {
            sigmas: 6.0,
            points: 2001,
        }
    }
}

impl Default for GridSpec {
    fn default() -> Self {
        Self::standard()
    }
}

/// Max relative residual of (x + (hbar / m omega) d/dx) applied to the
/// ground-state Gaussian, with the derivative taken by central finite
/// differences on the grid.
pub fn coordinate_vacuum_residual(mass: f64, omega: f64, hbar: f64, grid: &GridSpec) -> Result<f64> {
    gaussian_annihilation_residual(mass, omega, hbar, grid, 1.0)
}

/// width_scale 1 is the true ground state; other widths measure how sharply
/// the annihilation condition pins the Gaussian.
fn gaussian_annihilation_residual(
    mass: f64,
    omega: f64,
    hbar: f64,
    grid: &GridSpec,
    width_scale: f64,
) -> Result<f64> {
    if !(mass > 0.0 && omega > 0.0 && hbar > 0.0) {
        return Err(Error::Parameter(format!(
            "mass {}, omega {}, hbar {} must all be positive",
            mass, omega, hbar
        )));
    }
    let sigma = (hbar / (mass * omega)).sqrt();
    if grid.sigmas < 6.0 || grid.points < 5 {
        return Err(Error::GridTooNarrow {
            sigmas: grid.sigmas,
            points: grid.points,
        });
    }
    let half = grid.sigmas * sigma;
    let step = 2.0 * half / (grid.points - 1) as f64;
    let limit = sigma / 10.0;
    if step > limit {
        return Err(Error::GridTooCoarse { step, limit });
    }
    let width = width_scale * sigma;
    let xs: Vec<f64> = (0..grid.points)
        .map(|i| -half + step * i as f64)
        .collect();
    let phi: Vec<f64> = xs.iter().map(|x| (-x * x / (2.0 * width * width)).exp()).collect();
    let coef = hbar / (mass * omega);
    let scale = xs
        .iter()
        .zip(&phi)
        .fold(0.0_f64, |acc, (x, p)| acc.max((x * p).abs()));
    let mut worst = 0.0_f64;
    // 5-point stencil: the 2nd-order one leaves a truncation residual just
    // above 1e-6 at step = sigma/166.
    for i in 2..grid.points - 2 {
        let deriv = (phi[i - 2] - 8.0 * phi[i - 1] + 8.0 * phi[i + 1] - phi[i + 2]) / (12.0 * step);
        let residual = (xs[i] * phi[i] + coef * deriv).abs();
        worst = worst.max(residual);
    }
    Ok(worst / scale)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{builtin, oscillator_generator, BUILTIN_NAMES};
    use crate::complexification::{hermitian_inner, ComplexStructure};
    use crate::linalg::max_abs_vec_c;
    use crate::phase_space::{standard_form_matrix, CoordinateFrame, SymplecticForm};
    use crate::sample::VectorSampler;
    use crate::DEFAULT_SEED;
    use nalgebra::{Complex, DMatrix, DVector};

    fn standard_space(n_modes: usize) -> ComplexifiedSpace {
        let frame = CoordinateFrame::standard(n_modes);
        let s = SymplecticForm::new(standard_form_matrix(n_modes), frame.clone()).unwrap();
        let omega = LinearMap::endo(oscillator_generator(n_modes, 1.0, 1.0), frame).unwrap();
        let j = ComplexStructure::new(standard_form_matrix(n_modes), &s, &omega).unwrap();
        ComplexifiedSpace::new(s, j).unwrap()
    }

    fn scenario_space(name: &str, mass: f64, omega: f64) -> ComplexifiedSpace {
        let scn = builtin(name, mass, omega, 1.0, 4).unwrap();
        let j = scn.expected_structure.clone().unwrap();
        ComplexifiedSpace::new(scn.form.clone(), j).unwrap()
    }

    fn axis(dim: usize, i: usize) -> RVec {
        let mut v = RVec::zeros(dim);
        v[i] = 1.0;
        v
    }

    fn direct_moment(rep: &FockRep, vectors: &[RVec]) -> C64 {
        let mut state = rep.vacuum().clone();
        for v in vectors.iter().rev() {
            state = field_operator(rep, v).unwrap() * state;
        }
        rep.vacuum().dotc(&state)
    }

    #[test]
    fn one_mode_ladder_matrix() {
        let rep = build_fock(standard_space(1), 2, 1.0).unwrap();
        let a = rep.annihilator_matrix(0);
        let expected = CMat::from_row_slice(
            3,
            3,
            &[
                Complex::new(0.0, 0.0),
                Complex::new(1.0, 0.0),
                Complex::new(0.0, 0.0),
                Complex::new(0.0, 0.0),
                Complex::new(0.0, 0.0),
                Complex::new(2.0_f64.sqrt(), 0.0),
                Complex::new(0.0, 0.0),
                Complex::new(0.0, 0.0),
                Complex::new(0.0, 0.0),
            ],
        );
        assert_eq!(a, &expected);
        assert_eq!((rep.annihilator_matrix(0) * rep.vacuum()), CVec::zeros(3));
    }

    #[test]
    fn hbar_scales_ladder_entries() {
        let rep1 = build_fock(standard_space(1), 2, 1.0).unwrap();
        let rep2 = build_fock(standard_space(1), 2, 2.0).unwrap();
        let scaled = rep1.annihilator_matrix(0) * Complex::new(2.0_f64.sqrt(), 0.0);
        assert!(max_diff_c(rep2.annihilator_matrix(0), &scaled) < 1e-15);
        // Commutator oracle on the safe block: [a, a*] = hbar I.
        let comm = commutator_c(
            rep2.annihilator_matrix(0),
            &rep2.creator_matrix(0),
        ) - identity_c(3) * Complex::new(2.0, 0.0);
        assert!(sub_block_max(&comm, rep2.safe_cols()) < 1e-15);
    }

    #[test]
    fn two_mode_dimension_and_ordering() {
        let basis = OccupationBasis::new(2, 3).unwrap();
        assert_eq!(basis.dim(), 10);
        let expected: Vec<Vec<usize>> = vec![
            vec![0, 0],
            vec![0, 1],
            vec![1, 0],
            vec![0, 2],
            vec![1, 1],
            vec![2, 0],
            vec![0, 3],
            vec![1, 2],
            vec![2, 1],
            vec![3, 0],
        ];
        assert_eq!(basis.states(), expected.as_slice());
        assert_eq!(basis.block_dim(0), 1);
        assert_eq!(basis.block_dim(1), 3);
        assert_eq!(basis.block_dim(2), 6);
        assert_eq!(basis.block_dim(3), 10);
        for (i, s) in basis.states().iter().enumerate() {
            assert_eq!(basis.index_of(s), Some(i));
        }
    }

    #[test]
    fn basis_dimension_matches_closed_form() {
        for n in 1..=3 {
            for cutoff in 1..=5 {
                let basis = OccupationBasis::new(n, cutoff).unwrap();
                assert_eq!(basis.dim(), binomial(cutoff + n, n));
            }
        }
    }

    #[test]
    fn build_rejects_bad_parameters() {
        assert!(matches!(
            build_fock(standard_space(1), 0, 1.0),
            Err(Error::InvalidCutoff)
        ));
        assert!(matches!(
            build_fock(standard_space(1), 2, 0.0),
            Err(Error::Parameter(_))
        ));
    }

    #[test]
    fn annihilator_expansion_is_antilinear() {
        let space = standard_space(2);
        let j = space.structure().matrix().clone();
        let rep = build_fock(space, 3, 1.0).unwrap();
        let e1 = rep.space().basis()[0].clone();
        let e2 = rep.space().basis()[1].clone();

        let a_e1 = annihilator(&rep, &e1).unwrap();
        assert!(max_diff_c(&a_e1, rep.annihilator_matrix(0)) < 1e-14);

        let je1 = &j * &e1;
        let a_je1 = annihilator(&rep, &je1).unwrap();
        let minus_i = rep.annihilator_matrix(0) * Complex::new(0.0, -1.0);
        assert!(max_diff_c(&a_je1, &minus_i) < 1e-14);

        let sum = annihilator(&rep, &(&e1 + &e2)).unwrap();
        let direct = rep.annihilator_matrix(0) + rep.annihilator_matrix(1);
        assert!(max_diff_c(&sum, &direct) < 1e-14);
    }

    #[test]
    fn field_operator_is_self_adjoint_and_real_linear() {
        let rep = build_fock(standard_space(2), 3, 0.7).unwrap();
        let mut sampler = VectorSampler::new(DEFAULT_SEED);
        for _ in 0..5 {
            let v = sampler.vector(4);
            let w = sampler.vector(4);
            let pv = field_operator(&rep, &v).unwrap();
            assert!(max_diff_c(&pv, &pv.adjoint()) < 1e-14);
            let combo = field_operator(&rep, &(&v * 2.0 - &w * 0.5)).unwrap();
            let direct = &pv * Complex::new(2.0, 0.0)
                - field_operator(&rep, &w).unwrap() * Complex::new(0.5, 0.0);
            assert!(max_diff_c(&combo, &direct) < 1e-12);
        }
        let zero = field_operator(&rep, &RVec::zeros(4)).unwrap();
        assert_eq!(max_abs_c(&zero), 0.0);
    }

    #[test]
    fn field_commutator_matches_form() {
        let rep = build_fock(standard_space(2), 4, 1.3).unwrap();
        let s = rep.space().form().matrix().clone();
        let mut sampler = VectorSampler::new(DEFAULT_SEED);
        for _ in 0..10 {
            let v = sampler.vector(4);
            let w = sampler.vector(4);
            let pv = field_operator(&rep, &v).unwrap();
            let pw = field_operator(&rep, &w).unwrap();
            let sval = v.dot(&(&s * &w));
            // [pi(v), pi(w)] = -i hbar s(v,w) I.
            let expected = identity_c(rep.dim()) * Complex::new(0.0, -rep.hbar() * sval);
            let residual = commutator_c(&pv, &pw) - expected;
            assert!(sub_block_max(&residual, rep.safe_cols()) < 1e-10);
        }
    }

    #[test]
    fn ccr_residuals_across_catalog() {
        for name in BUILTIN_NAMES {
            let rep = build_fock(scenario_space(name, 1.3, 2.7), 4, 1.0).unwrap();
            let dim = rep.space().dim();
            let e1 = rep.space().basis()[0].clone();
            let e2 = rep.space().basis()[1].clone();
            let same = ccr_check(&rep, &e1, &e1).unwrap();
            assert!(same.max() < 1e-12, "{}: {:?}", name, same);
            let cross = ccr_check(&rep, &e1, &e2).unwrap();
            assert!(cross.max() < 1e-12, "{}: {:?}", name, cross);

            let mut sampler = VectorSampler::new(DEFAULT_SEED);
            for _ in 0..5 {
                let v = sampler.vector(dim);
                let w = sampler.vector(dim);
                let r = ccr_check(&rep, &v, &w).unwrap();
                assert!(r.max() < 1e-10, "{}: {:?}", name, r);
                // Independent oracle for the pairing coefficient.
                let av = annihilator(&rep, &v).unwrap();
                let aw = annihilator(&rep, &w).unwrap();
                let comm = commutator_c(&av, &aw.adjoint());
                let inner = hermitian_inner(
                    rep.space().form(),
                    rep.space().structure(),
                    &v,
                    &w,
                )
                .unwrap();
                let at_vacuum = comm.column(0)[0];
                assert!((at_vacuum - inner * rep.hbar()).norm() < 1e-12, "{}", name);
            }
        }
    }

    #[test]
    fn ladder_commutators_across_catalog() {
        for name in BUILTIN_NAMES {
            let rep = build_fock(scenario_space(name, 1.3, 2.7), 4, 0.5).unwrap();
            let cols = rep.safe_cols();
            for j in 0..rep.n_modes() {
                for k in 0..rep.n_modes() {
                    let pair = commutator_c(
                        rep.annihilator_matrix(j),
                        &rep.creator_matrix(k),
                    );
                    let expected = if j == k {
                        identity_c(rep.dim()) * Complex::new(rep.hbar(), 0.0)
                    } else {
                        CMat::zeros(rep.dim(), rep.dim())
                    };
                    assert!(sub_block_max(&(pair - expected), cols) < 1e-12, "{}", name);
                    let anni = commutator_c(
                        rep.annihilator_matrix(j),
                        rep.annihilator_matrix(k),
                    );
                    assert_eq!(max_abs_c(&anni), 0.0, "{}", name);
                }
            }
        }
    }

    #[test]
    fn second_quantized_isotropic_hamiltonian_is_diagonal() {
        let space = standard_space(2);
        let frame = space.form().frame().clone();
        let rep = build_fock(space, 3, 1.0).unwrap();
        let h_map = LinearMap::endo(DMatrix::identity(4, 4), frame.clone()).unwrap();
        let h = second_quantize(&rep, &h_map).unwrap();
        for col in 0..rep.dim() {
            for row in 0..rep.dim() {
                let expected = if row == col {
                    Complex::new(rep.basis().total(col) as f64, 0.0)
                } else {
                    Complex::new(0.0, 0.0)
                };
                assert!((h[(row, col)] - expected).norm() < 1e-14);
            }
        }
        assert_eq!(max_abs_vec_c(&(&h * rep.vacuum())), 0.0);

        let zero_map = LinearMap::endo(DMatrix::zeros(4, 4), frame).unwrap();
        let z = second_quantize(&rep, &zero_map).unwrap();
        assert_eq!(max_abs_c(&z), 0.0);
    }

    #[test]
    fn anisotropic_hamiltonian_spectrum() {
        let space = standard_space(2);
        let frame = space.form().frame().clone();
        // omega_1 on (x, p_x), omega_2 on (y, p_y); commutes with J and is
        // self-adjoint because each block is a multiple of the identity.
        let (w1, w2) = (1.0, 2.5);
        let h_map = LinearMap::endo(
            DMatrix::from_diagonal(&DVector::from_vec(vec![w1, w2, w1, w2])),
            frame,
        )
        .unwrap();
        let rep = build_fock(space, 3, 0.5).unwrap();
        let h = second_quantize(&rep, &h_map).unwrap();
        let values = spectrum(&h, rep.basis(), 3).unwrap();
        let mut expected: Vec<f64> = rep
            .basis()
            .states()
            .iter()
            .map(|s| 0.5 * (w1 * s[0] as f64 + w2 * s[1] as f64))
            .collect();
        expected.sort_by(|a, b| a.total_cmp(b));
        for (a, b) in values.iter().zip(&expected) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn isotropic_spectrum_with_multiplicities() {
        let space = standard_space(2);
        let frame = space.form().frame().clone();
        let rep = build_fock(space, 3, 1.0).unwrap();
        let h_map = LinearMap::endo(DMatrix::identity(4, 4), frame).unwrap();
        let h = second_quantize(&rep, &h_map).unwrap();
        let values = spectrum(&h, rep.basis(), 3).unwrap();
        let expected = [0.0, 1.0, 1.0, 2.0, 2.0, 2.0, 3.0, 3.0, 3.0, 3.0];
        assert_eq!(values.len(), expected.len());
        for (a, b) in values.iter().zip(expected) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn one_mode_spectrum_scales_with_hbar_omega() {
        let frame = CoordinateFrame::standard(1);
        let s = SymplecticForm::new(standard_form_matrix(1), frame.clone()).unwrap();
        let omega = LinearMap::endo(oscillator_generator(1, 1.0, 2.7), frame.clone()).unwrap();
        let jm = DMatrix::from_row_slice(2, 2, &[0.0, 1.0 / 2.7, -2.7, 0.0]);
        let j = ComplexStructure::new(jm, &s, &omega).unwrap();
        let space = ComplexifiedSpace::new(s, j).unwrap();
        let rep = build_fock(space, 3, 0.5).unwrap();
        let h_map = LinearMap::endo(DMatrix::identity(2, 2) * 2.7, frame).unwrap();
        let h = second_quantize(&rep, &h_map).unwrap();
        let values = spectrum(&h, rep.basis(), 3).unwrap();
        for (n, value) in values.iter().enumerate() {
            assert!((value - 0.5 * 2.7 * n as f64).abs() < 1e-12);
        }
    }

    #[test]
    fn spectrum_rejects_non_self_adjoint_input() {
        let basis = OccupationBasis::new(1, 2).unwrap();
        let mut m = CMat::zeros(3, 3);
        m[(0, 1)] = Complex::new(1.0, 0.0);
        assert!(matches!(
            spectrum(&m, &basis, 2),
            Err(Error::NotSelfAdjoint { .. })
        ));
        assert!(matches!(
            spectrum(&CMat::zeros(3, 3), &basis, 5),
            Err(Error::Parameter(_))
        ));
    }

    #[test]
    fn second_quantize_rejects_bad_maps() {
        let space = standard_space(2);
        let frame = space.form().frame().clone();
        let rep = build_fock(space, 2, 1.0).unwrap();
        // Complex-linear (block form commuting with J) but not self-adjoint:
        // rotation by J itself has mode matrix iI.
        let j_map = LinearMap::endo(standard_form_matrix(2), frame.clone()).unwrap();
        assert!(matches!(
            second_quantize(&rep, &j_map),
            Err(Error::NotSelfAdjoint { .. })
        ));
        let skew = LinearMap::endo(
            DMatrix::from_diagonal(&DVector::from_vec(vec![1.0, 1.0, 2.0, 2.0])),
            frame,
        )
        .unwrap();
        assert!(matches!(
            second_quantize(&rep, &skew),
            Err(Error::NotComplexLinear { .. })
        ));
    }

    #[test]
    fn hamiltonian_commutator_residuals() {
        let space = standard_space(2);
        let frame = space.form().frame().clone();
        let rep = build_fock(space, 4, 1.0).unwrap();
        let h_map = LinearMap::endo(DMatrix::identity(4, 4) * 2.0, frame.clone()).unwrap();
        let h = second_quantize(&rep, &h_map).unwrap();
        let e1 = rep.space().basis()[0].clone();
        assert!(hamiltonian_commutator_check(&rep, &h, &h_map, &e1).unwrap() < 1e-12);

        let zero_map = LinearMap::endo(DMatrix::zeros(4, 4), frame.clone()).unwrap();
        let z = second_quantize(&rep, &zero_map).unwrap();
        assert_eq!(
            hamiltonian_commutator_check(&rep, &z, &zero_map, &e1).unwrap(),
            0.0
        );

        // Random complex-linear self-adjoint map built from a Hermitian mode
        // matrix pushed back to coordinates.
        let mut sampler = VectorSampler::new(DEFAULT_SEED + 1);
        let g11 = sampler.vector(1)[0];
        let g22 = sampler.vector(1)[0];
        let re = sampler.vector(1)[0];
        let im = sampler.vector(1)[0];
        let mut hmode = CMat::zeros(2, 2);
        hmode[(0, 0)] = Complex::new(g11, 0.0);
        hmode[(1, 1)] = Complex::new(g22, 0.0);
        hmode[(0, 1)] = Complex::new(re, im);
        hmode[(1, 0)] = Complex::new(re, -im);
        let space = rep.space();
        let mut columns = Vec::new();
        for i in 0..4 {
            let coords = space.coordinates(&axis(4, i)).unwrap();
            let mapped = &hmode * coords;
            columns.push(space.vector_from_coordinates(&mapped).unwrap());
        }
        let hm = DMatrix::from_columns(&columns);
        let h_map = LinearMap::endo(hm, frame).unwrap();
        let h = second_quantize(&rep, &h_map).unwrap();
        for _ in 0..5 {
            let v = sampler.vector(4);
            assert!(hamiltonian_commutator_check(&rep, &h, &h_map, &v).unwrap() < 1e-10);
        }
    }

    #[test]
    fn number_operator_counts_quanta() {
        let rep = build_fock(standard_space(2), 3, 0.7).unwrap();
        for mode in 0..2 {
            let num = number_operator(&rep, mode);
            for col in 0..rep.dim() {
                for row in 0..rep.dim() {
                    let expected = if row == col {
                        Complex::new(0.7 * rep.basis().state(col)[mode] as f64, 0.0)
                    } else {
                        Complex::new(0.0, 0.0)
                    };
                    assert!((num[(row, col)] - expected).norm() < 1e-15);
                }
            }
        }
    }

    #[test]
    fn creators_raise_shell_by_one() {
        let rep = build_fock(standard_space(2), 3, 1.0).unwrap();
        for mode in 0..2 {
            let c = rep.creator_matrix(mode);
            for col in 0..rep.dim() {
                for row in 0..rep.dim() {
                    if c[(row, col)].norm() > 0.0 {
                        assert_eq!(rep.basis().total(row), rep.basis().total(col) + 1);
                    }
                }
            }
        }
    }

    #[test]
    fn two_point_values() {
        let rep = build_fock(standard_space(1), 3, 1.0).unwrap();
        let x = axis(2, 0);
        let p = axis(2, 1);
        let xx = vacuum_two_point(&rep, &x, &x).unwrap();
        assert!((xx - Complex::new(0.5, 0.0)).norm() < 1e-14);
        let xp = vacuum_two_point(&rep, &x, &p).unwrap();
        assert!((xp - Complex::new(0.0, -0.5)).norm() < 1e-14);

        let mut sampler = VectorSampler::new(DEFAULT_SEED);
        for _ in 0..10 {
            let v = sampler.vector(2);
            let vv = vacuum_two_point(&rep, &v, &v).unwrap();
            assert!(vv.im.abs() < 1e-14);
            assert!(vv.re >= 0.0);
            let inner = rep.space().inner_product(&v, &v).unwrap();
            assert!((vv - inner * 0.5).norm() < 1e-13);
        }
    }

    #[test]
    fn wick_reduces_to_two_point() {
        let rep = build_fock(standard_space(2), 4, 1.0).unwrap();
        let mut sampler = VectorSampler::new(DEFAULT_SEED);
        let v = sampler.vector(4);
        let w = sampler.vector(4);
        let wick = wick_npoint(&rep, &[v.clone(), w.clone()]).unwrap();
        let direct = vacuum_two_point(&rep, &v, &w).unwrap();
        assert!((wick - direct).norm() < 1e-14);
    }

    #[test]
    fn wick_four_point_oscillator_position() {
        let rep = build_fock(standard_space(1), 4, 1.0).unwrap();
        let x = axis(2, 0);
        let wick = wick_npoint(&rep, &[x.clone(), x.clone(), x.clone(), x.clone()]).unwrap();
        assert!((wick - Complex::new(0.75, 0.0)).norm() < 1e-13);
        let direct = direct_moment(&rep, &[x.clone(), x.clone(), x.clone(), x]);
        assert!((wick - direct).norm() < 1e-13);
    }

    #[test]
    fn wick_six_point_matches_direct_evaluation() {
        let rep = build_fock(standard_space(2), 6, 0.8).unwrap();
        let mut sampler = VectorSampler::new(DEFAULT_SEED);
        let vectors: Vec<RVec> = (0..6).map(|_| sampler.vector(4)).collect();
        let wick = wick_npoint(&rep, &vectors).unwrap();
        let direct = direct_moment(&rep, &vectors);
        assert!((wick - direct).norm() < 1e-9, "wick {} direct {}", wick, direct);
    }

    #[test]
    fn odd_moments_vanish_and_are_rejected_by_wick() {
        let rep = build_fock(standard_space(1), 4, 1.0).unwrap();
        let x = axis(2, 0);
        assert!(matches!(
            wick_npoint(&rep, &[x.clone(), x.clone(), x.clone()]),
            Err(Error::OddMoment(3))
        ));
        let direct = direct_moment(&rep, &[x.clone(), x.clone(), x]);
        assert!(direct.norm() < 1e-14);
        let too_many: Vec<RVec> = (0..10).map(|_| axis(2, 0)).collect();
        assert!(matches!(
            wick_npoint(&rep, &too_many),
            Err(Error::Parameter(_))
        ));
    }

    #[test]
    fn coordinate_residual_small_for_true_vacuum() {
        let grid = GridSpec::standard();
        for (m, w, h) in [(1.0, 1.0, 1.0), (2.0, 0.5, 1.0), (1.3, 2.7, 0.7)] {
            let r = coordinate_vacuum_residual(m, w, h, &grid).unwrap();
            assert!(r < 1e-6, "({}, {}, {}): {}", m, w, h, r);
        }
    }

    #[test]
    fn coordinate_residual_flags_wrong_width() {
        let grid = GridSpec::standard();
        let r = gaussian_annihilation_residual(1.0, 1.0, 1.0, &grid, 2.0).unwrap();
        assert!((r - 0.75).abs() < 1e-6, "{}", r);
    }

    #[test]
    fn grid_validation() {
        let coarse = GridSpec {
            sigmas: 6.0,
            points: 21,
        };
        assert!(matches!(
            coordinate_vacuum_residual(1.0, 1.0, 1.0, &coarse),
            Err(Error::GridTooCoarse { .. })
        ));
        let narrow = GridSpec {
            sigmas: 4.0,
            points: 2001,
        };
        assert!(matches!(
            coordinate_vacuum_residual(1.0, 1.0, 1.0, &narrow),
            Err(Error::GridTooNarrow { .. })
        ));
        assert!(matches!(
            coordinate_vacuum_residual(-1.0, 1.0, 1.0, &GridSpec::standard()),
            Err(Error::Parameter(_))
        ));
    }
}
