//! Compatible positive complex structures on a symplectic phase space.
//!
//! A complex structure J (J^2 = -I) is compatible with the form s when
//! s(Jv, Jw) = s(v, w) and s(Jv, v) >= 0, and it quantizes a dynamics
//! generated by O when JO = OJ. Such a J turns the real phase space into a
//! complex vector space (i acts as J) with Hermitian inner product
//! <v, w> = s(Jv, w) - i s(v, w), antilinear in the first argument.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::error::{Error, Result};
use crate::linalg::{
    max_abs, max_abs_c, max_diff, to_complex, to_complex_vec, CMat, CVec, RMat, RVec, C64,
};
use crate::phase_space::{is_hamiltonian_generator, LinearMap, SymplecticForm};
use crate::sample::VectorSampler;
use crate::TOL_MATRIX;

/// Seed for the positivity probe in [`verify_complex_structure`]; fixed so
/// verification reports are reproducible.
const POSITIVITY_SEED: u64 = 0x5EED;
const POSITIVITY_SAMPLES: usize = 32;

/// Relative threshold deciding when generator eigenvalues count as the same
/// frequency, as purely imaginary, or as zero.
const SPECTRUM_TOL: f64 = 1e-8;

/// Relative singular-value cutoff for frequency-subspace extraction.
const KERNEL_TOL: f64 = 1e-7;

/// Verified compatible positive complex structure.
#[derive(Clone, Debug)]
pub struct ComplexStructure {
    matrix: RMat,
}

impl ComplexStructure {
    /// Verifies the candidate against the form and generator before
    /// accepting it.
    pub fn new(matrix: RMat, s: &SymplecticForm, omega: &LinearMap) -> Result<Self> {
        let residuals = verify_complex_structure(s, &matrix, omega)?;
        if !residuals.pass(TOL_MATRIX) {
            return Err(Error::StructureInvalid(format!(
                "square {:.3e}, compatibility {:.3e}, commutation {:.3e}, positivity min {:.3e}",
                residuals.square,
                residuals.compatibility,
                residuals.commutation,
                residuals.positivity_min
            )));
        }
        Ok(Self { matrix })
    }

    pub(crate) fn from_matrix_unchecked(matrix: RMat) -> Self {
        Self { matrix }
    }

    pub fn matrix(&self) -> &RMat {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn apply(&self, v: &RVec) -> RVec {
        &self.matrix * v
    }
}

/// Residuals of the defining properties of a candidate structure.
#[derive(Clone, Copy, Debug)]
pub struct StructureResiduals {
    /// max |J^2 + I| entrywise.
    pub square: f64,
    /// min s(Jv, v) over coordinate axes and a seeded sample of unit
    /// vectors; negative values witness a positivity violation.
    pub positivity_min: f64,
    /// max |J^T S J - S| entrywise.
    pub compatibility: f64,
    /// max |JO - OJ| entrywise.
    pub commutation: f64,
}

impl StructureResiduals {
    pub fn pass(&self, tol: f64) -> bool {
        self.square <= tol
            && self.compatibility <= tol
            && self.commutation <= tol
            && self.positivity_min >= -tol
    }
}

pub fn verify_complex_structure(
    s: &SymplecticForm,
    j: &RMat,
    omega: &LinearMap,
) -> Result<StructureResiduals> {
    let dim = s.dim();
    if j.nrows() != dim || j.ncols() != dim {
        return Err(Error::Dimension(format!(
            "structure is {}x{} but form has {} coordinates",
            j.nrows(),
            j.ncols(),
            dim
        )));
    }
    if omega.matrix().nrows() != dim {
        return Err(Error::Dimension(format!(
            "generator is {}x{} but form has {} coordinates",
            omega.matrix().nrows(),
            omega.matrix().ncols(),
            dim
        )));
    }
    let square = max_diff(&(j * j), &(-DMatrix::identity(dim, dim)));
    let compatibility = max_diff(&(j.transpose() * s.matrix() * j), s.matrix());
    let commutation = max_abs(&(j * omega.matrix() - omega.matrix() * j));

    let mut sampler = VectorSampler::new(POSITIVITY_SEED);
    let mut positivity_min = f64::INFINITY;
    for i in 0..dim {
        let v = s.frame().axis(i);
        positivity_min = positivity_min.min(s.evaluate(&(j * &v), &v)?);
    }
    for _ in 0..POSITIVITY_SAMPLES {
        let v = sampler.unit_vector(dim);
        positivity_min = positivity_min.min(s.evaluate(&(j * &v), &v)?);
    }

    Ok(StructureResiduals {
        square,
        positivity_min,
        compatibility,
        commutation,
    })
}

/// K = g J g^{-1}: the structure seen through a change of description g.
/// The result is compatible with the g-transformed form whenever J is
/// compatible with the original; callers verify against their own form.
pub fn transport_structure(g: &LinearMap, j: &ComplexStructure) -> Result<ComplexStructure> {
    if g.dim_domain() != j.dim() {
        return Err(Error::Dimension(format!(
            "map domain has {} coordinates but structure has {}",
            g.dim_domain(),
            j.dim()
        )));
    }
    let g_inv = g.matrix().clone().try_inverse().ok_or(Error::Singular)?;
    Ok(ComplexStructure::from_matrix_unchecked(
        g.matrix() * j.matrix() * g_inv,
    ))
}

/// Hermitian pairing <v, w> = s(Jv, w) - i s(v, w) of two real vectors.
pub fn hermitian_inner(
    s: &SymplecticForm,
    j: &ComplexStructure,
    v: &RVec,
    w: &RVec,
) -> Result<C64> {
    let re = s.evaluate(&j.apply(v), w)?;
    let im = -s.evaluate(v, w)?;
    Ok(C64::new(re, im))
}

/// Builds the unique positive compatible structure attached to a semisimple
/// generator with purely imaginary spectrum, by splitting each frequency
/// subspace with the Hermitian energy form H(u, w) = -i u^* S w.
///
/// Frequencies closer than a relative 1e-8 are treated as equal; kernels are
/// extracted by SVD with a relative 1e-7 cutoff, so nearby-but-distinct
/// frequencies are out of scope.
pub fn construct_compatible_structure(
    s: &SymplecticForm,
    omega: &LinearMap,
) -> Result<ComplexStructure> {
    let dim = s.dim();
    let n = s.n_modes();
    if omega.matrix().nrows() != dim || omega.matrix().ncols() != dim {
        return Err(Error::Dimension(format!(
            "generator is {}x{} but form has {} coordinates",
            omega.matrix().nrows(),
            omega.matrix().ncols(),
            dim
        )));
    }
    let gen_residual = is_hamiltonian_generator(s, omega)?;
    let gen_scale = (max_abs(s.matrix()) * max_abs(omega.matrix())).max(1.0);
    if gen_residual > TOL_MATRIX * gen_scale {
        return Err(Error::NotGenerator {
            residual: gen_residual,
        });
    }

    let om = omega.matrix();
    let eigs = om.clone().complex_eigenvalues();
    let omega_scale = eigs.iter().fold(0.0_f64, |a, z| a.max(z.norm()));
    if omega_scale == 0.0 {
        return Err(Error::SingularGenerator { magnitude: 0.0 });
    }
    for z in eigs.iter() {
        if z.re.abs() > SPECTRUM_TOL * omega_scale {
            return Err(Error::HyperbolicSpectrum { re: z.re, im: z.im });
        }
        if z.norm() < SPECTRUM_TOL * omega_scale {
            return Err(Error::SingularGenerator {
                magnitude: z.norm(),
            });
        }
    }

    // Cluster the positive halves of the conjugate eigenvalue pairs into
    // frequencies with multiplicities.
    let mut ims: Vec<f64> = eigs.iter().map(|z| z.im).filter(|x| *x > 0.0).collect();
    ims.sort_by(|a, b| a.partial_cmp(b).unwrap());
    if ims.len() != n {
        return Err(Error::StructureInvalid(format!(
            "expected {} positive-frequency eigenvalues, found {}",
            n,
            ims.len()
        )));
    }
    let mut clusters: Vec<(f64, usize)> = Vec::new();
    for x in ims {
        match clusters.last_mut() {
            Some((freq, count)) if (x - *freq).abs() <= SPECTRUM_TOL * omega_scale => {
                // Running mean keeps the representative frequency stable.
                *freq += (x - *freq) / (*count as f64 + 1.0);
                *count += 1;
            }
            _ => clusters.push((x, 1)),
        }
    }

    let s_c = to_complex(s.matrix());
    let mut plus: Vec<CVec> = Vec::with_capacity(n);

    for &(freq, count) in &clusters {
        // Real invariant subspace for this frequency: ker(O^2 + freq^2 I).
        // The cutoff is relative to the size of the cancelling terms, not to
        // sigma_max of the difference, which vanishes when every eigenvalue
        // shares this frequency.
        let om2 = om * om;
        let scale = max_abs(&om2) + freq * freq;
        let m = om2 + DMatrix::identity(dim, dim) * (freq * freq);
        let svd = m.svd(false, true);
        let v_t = svd.v_t.as_ref().expect("requested right singular vectors");
        let mut kernel: Vec<RVec> = Vec::new();
        for (i, sv) in svd.singular_values.iter().enumerate() {
            if *sv <= KERNEL_TOL * scale {
                kernel.push(v_t.row(i).transpose());
            }
        }
        if kernel.len() != 2 * count {
            return Err(Error::NotSemisimple {
                omega: freq,
                found: kernel.len(),
                expected: 2 * count,
            });
        }

        // Project each kernel vector into the +i*freq eigenspace:
        // u - (i/freq) O u is an eigenvector when u lies in the invariant
        // plane, and the projections of a real basis span the eigenspace.
        let mut candidates: Vec<CVec> = Vec::with_capacity(kernel.len());
        for u in &kernel {
            let ou = om * u;
            let b = (to_complex_vec(u) - to_complex_vec(&ou) * C64::new(0.0, 1.0 / freq)) * C64::new(0.5, 0.0);
            candidates.push(b);
        }

        // Gram-Schmidt in the Euclidean Hermitian product; the kernel basis
        // projects onto a spanning set of the count-dimensional eigenspace,
        // so exactly `count` candidates survive.
        let mut basis: Vec<CVec> = Vec::with_capacity(count);
        for (step, cand) in candidates.into_iter().enumerate() {
            if basis.len() == count {
                break;
            }
            let initial = cand.norm();
            let mut v = cand;
            for _ in 0..2 {
                for e in &basis {
                    let coeff = e.dotc(&v);
                    v -= e * coeff;
                }
            }
            let norm = v.norm();
            if norm > 1e-8 * initial {
                basis.push(v / C64::new(norm, 0.0));
            } else if step + 1 == 2 * count && basis.len() < count {
                return Err(Error::BasisBreakdown { step, norm });
            }
        }
        if basis.len() < count {
            return Err(Error::BasisBreakdown {
                step: 2 * count,
                norm: 0.0,
            });
        }

        // Hermitian energy form H(u, w) = -i u^* S w on the eigenspace.
        let k = basis.len();
        let mut gram = CMat::zeros(k, k);
        for r in 0..k {
            for c in 0..k {
                gram[(r, c)] = -C64::i() * basis[r].dotc(&(&s_c * &basis[c]));
            }
        }
        let gram = (gram.clone() + gram.adjoint()) * C64::new(0.5, 0.0);
        let eigen = SymmetricEigen::new(gram);
        let gram_scale = eigen.eigenvalues.iter().fold(0.0_f64, |a, x| a.max(x.abs()));
        for t in 0..k {
            let gamma = eigen.eigenvalues[t];
            if gamma.abs() <= SPECTRUM_TOL * gram_scale || gram_scale == 0.0 {
                return Err(Error::DegeneratePairing {
                    omega: freq,
                    value: gamma,
                });
            }
            let mut w = CVec::zeros(dim);
            for r in 0..k {
                w += &basis[r] * eigen.eigenvectors[(r, t)];
            }
            if gamma > 0.0 {
                plus.push(w);
            } else {
                plus.push(w.map(|z| z.conj()));
            }
        }
    }

    if plus.len() != n {
        return Err(Error::StructureInvalid(format!(
            "positive splitting produced {} directions, expected {}",
            plus.len(),
            n
        )));
    }

    // J is +i on the positive span and -i on its conjugate.
    let mut w_mat = CMat::zeros(dim, dim);
    for (idx, w) in plus.iter().enumerate() {
        w_mat.set_column(idx, w);
        w_mat.set_column(n + idx, &w.map(|z| z.conj()));
    }
    let mut d = CMat::zeros(dim, dim);
    for idx in 0..n {
        d[(idx, idx)] = C64::i();
        d[(n + idx, n + idx)] = -C64::i();
    }
    let w_inv = w_mat.clone().try_inverse().ok_or(Error::Singular)?;
    let j_c = &w_mat * d * w_inv;
    let imag = j_c.iter().fold(0.0_f64, |a, z| a.max(z.im.abs()));
    let real_scale = j_c.iter().fold(0.0_f64, |a, z| a.max(z.re.abs()));
    if imag > 1e-8 * (1.0 + real_scale) {
        return Err(Error::StructureInvalid(format!(
            "constructed structure has imaginary residue {:.3e}",
            imag
        )));
    }
    let j = j_c.map(|z| z.re);
    ComplexStructure::new(j, s, omega)
}

/// One mode of a complexified space, displayed through the real coordinates
/// carrying the real and imaginary parts of its complex label.
#[derive(Clone, Debug)]
pub struct ModeChart {
    /// 1-based mode index.
    pub mode: usize,
    /// Coordinate expansion of the vector carrying Re(label).
    pub re: Vec<(String, f64)>,
    /// Coordinate expansion of the vector carrying Im(label).
    pub im: Vec<(String, f64)>,
}

fn fmt_combo(terms: &[(String, f64)]) -> String {
    if terms.is_empty() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (i, (label, c)) in terms.iter().enumerate() {
        let mag = c.abs();
        let sign = if *c < 0.0 { "-" } else { "+" };
        if i == 0 {
            if *c < 0.0 {
                out.push('-');
            }
        } else {
            out.push_str(&format!(" {} ", sign));
        }
        if (mag - 1.0).abs() <= 1e-9 {
            out.push_str(label);
        } else {
            out.push_str(&format!("{}*{}", mag, label));
        }
    }
    out
}

impl std::fmt::Display for ModeChart {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "Re(a_{}) = {}, Im(a_{}) = {}",
            self.mode,
            fmt_combo(&self.re),
            self.mode,
            fmt_combo(&self.im)
        )
    }
}

/// Phase space seen as a complex vector space: form, structure, an
/// orthonormal mode basis, and the coordinate charts of each mode.
#[derive(Clone, Debug)]
pub struct ComplexifiedSpace {
    form: SymplecticForm,
    structure: ComplexStructure,
    basis: Vec<RVec>,
    hat_basis: Vec<RVec>,
    charts: Vec<ModeChart>,
}

impl ComplexifiedSpace {
    /// Verifies the kinematic structure properties (square, compatibility,
    /// positivity) and derives the mode basis from the coordinate axes.
    /// Commutation with a dynamics is checked where the dynamics enters
    /// ([`one_particle_hamiltonian`], [`construct_compatible_structure`]).
    pub fn new(form: SymplecticForm, structure: ComplexStructure) -> Result<Self> {
        check_kinematic(&form, &structure)?;
        let basis = orthonormal_mode_basis(&form, &structure)?;
        Self::assemble(form, structure, basis)
    }

    /// Same as [`ComplexifiedSpace::new`] but with a caller-supplied mode
    /// basis, which must be orthonormal for the induced inner product.
    pub fn with_basis(
        form: SymplecticForm,
        structure: ComplexStructure,
        basis: Vec<RVec>,
    ) -> Result<Self> {
        check_kinematic(&form, &structure)?;
        let n = form.n_modes();
        if basis.len() != n {
            return Err(Error::Dimension(format!(
                "{} basis vectors for {} modes",
                basis.len(),
                n
            )));
        }
        let mut gram_residual = 0.0_f64;
        for j in 0..n {
            for k in 0..n {
                let p = hermitian_inner(&form, &structure, &basis[j], &basis[k])?;
                let expected = if j == k { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) };
                gram_residual = gram_residual.max((p - expected).norm());
            }
        }
        if gram_residual > TOL_MATRIX {
            return Err(Error::StructureInvalid(format!(
                "mode basis is not orthonormal (gram residual {:.3e})",
                gram_residual
            )));
        }
        Self::assemble(form, structure, basis)
    }

    fn assemble(
        form: SymplecticForm,
        structure: ComplexStructure,
        basis: Vec<RVec>,
    ) -> Result<Self> {
        let mut hat_basis = Vec::with_capacity(basis.len());
        let mut charts = Vec::with_capacity(basis.len());
        for (j, e) in basis.iter().enumerate() {
            let ehat = -structure.apply(e);
            let chart_scale = ehat.amax().max(e.amax());
            let expand = |v: &RVec| -> Vec<(String, f64)> {
                v.iter()
                    .enumerate()
                    .filter(|(_, x)| x.abs() > 1e-12 * chart_scale)
                    .map(|(i, x)| (form.frame().label(i).to_string(), *x))
                    .collect()
            };
            charts.push(ModeChart {
                mode: j + 1,
                re: expand(&ehat),
                im: expand(e),
            });
            hat_basis.push(ehat);
        }
        Ok(Self {
            form,
            structure,
            basis,
            hat_basis,
            charts,
        })
    }

    pub fn form(&self) -> &SymplecticForm {
        &self.form
    }

    pub fn structure(&self) -> &ComplexStructure {
        &self.structure
    }

    pub fn n_modes(&self) -> usize {
        self.form.n_modes()
    }

    pub fn dim(&self) -> usize {
        self.form.dim()
    }

    /// Orthonormal mode basis e_1..e_n.
    pub fn basis(&self) -> &[RVec] {
        &self.basis
    }

    /// Partner vectors -J e_j carrying the real parts of the mode labels.
    pub fn hat_basis(&self) -> &[RVec] {
        &self.hat_basis
    }

    pub fn charts(&self) -> &[ModeChart] {
        &self.charts
    }

    pub fn inner_product(&self, v: &RVec, w: &RVec) -> Result<C64> {
        hermitian_inner(&self.form, &self.structure, v, w)
    }

    /// (a + ib) . v = a v + b Jv.
    pub fn scalar_multiply(&self, a: C64, v: &RVec) -> Result<RVec> {
        if v.len() != self.dim() {
            return Err(Error::Dimension(format!(
                "vector of length {} in {}-coordinate space",
                v.len(),
                self.dim()
            )));
        }
        Ok(v * a.re + self.structure.apply(v) * a.im)
    }

    /// Mode coordinates with respect to the orthonormal basis.
    pub fn coordinates(&self, v: &RVec) -> Result<CVec> {
        let mut c = CVec::zeros(self.n_modes());
        for (j, e) in self.basis.iter().enumerate() {
            c[j] = self.inner_product(e, v)?;
        }
        Ok(c)
    }

    pub fn vector_from_coordinates(&self, c: &CVec) -> Result<RVec> {
        if c.len() != self.n_modes() {
            return Err(Error::Dimension(format!(
                "{} coordinates for {} modes",
                c.len(),
                self.n_modes()
            )));
        }
        let mut v = DVector::zeros(self.dim());
        for (j, e) in self.basis.iter().enumerate() {
            v += self.scalar_multiply(c[j], e)?;
        }
        Ok(v)
    }

    /// Complex labels read through the charts: label_j(v) = <e_hat_j, v>,
    /// so Re/Im of the label sit along the chart's coordinate combinations.
    pub fn mode_labels(&self, v: &RVec) -> Result<CVec> {
        let mut c = CVec::zeros(self.n_modes());
        for (j, ehat) in self.hat_basis.iter().enumerate() {
            c[j] = self.inner_product(ehat, v)?;
        }
        Ok(c)
    }

    /// Real vector whose mode-j label is alpha and whose other labels
    /// vanish: Re(alpha) e_hat_j + Im(alpha) e_j.
    pub fn chart_vector(&self, mode: usize, alpha: C64) -> Result<RVec> {
        if mode >= self.n_modes() {
            return Err(Error::Dimension(format!(
                "mode {} of {}",
                mode,
                self.n_modes()
            )));
        }
        Ok(&self.hat_basis[mode] * alpha.re + &self.basis[mode] * alpha.im)
    }
}

fn check_kinematic(form: &SymplecticForm, structure: &ComplexStructure) -> Result<()> {
    let dim = form.dim();
    if structure.dim() != dim {
        return Err(Error::Dimension(format!(
            "structure is {}x{} but form has {} coordinates",
            structure.dim(),
            structure.dim(),
            dim
        )));
    }
    let j = structure.matrix();
    let square = max_diff(&(j * j), &(-DMatrix::identity(dim, dim)));
    let compatibility = max_diff(&(j.transpose() * form.matrix() * j), form.matrix());
    if square > TOL_MATRIX || compatibility > TOL_MATRIX {
        return Err(Error::StructureInvalid(format!(
            "square {:.3e}, compatibility {:.3e}",
            square, compatibility
        )));
    }
    Ok(())
}

/// Gram-Schmidt over the coordinate axes in frame order; axes already in the
/// complex span of earlier ones are skipped.
fn orthonormal_mode_basis(
    form: &SymplecticForm,
    structure: &ComplexStructure,
) -> Result<Vec<RVec>> {
    let n = form.n_modes();
    let mut basis: Vec<RVec> = Vec::with_capacity(n);
    for i in 0..form.dim() {
        if basis.len() == n {
            break;
        }
        let seed = form.frame().axis(i);
        let initial = hermitian_inner(form, structure, &seed, &seed)?.re;
        if initial <= 0.0 {
            return Err(Error::StructureInvalid(format!(
                "axis {} has non-positive norm {:.3e}",
                i, initial
            )));
        }
        let mut v = seed;
        for _ in 0..2 {
            for e in basis.iter() {
                let coeff = hermitian_inner(form, structure, e, &v)?;
                let proj = (e * coeff.re) + (structure.apply(e) * coeff.im);
                v -= proj;
            }
        }
        let norm2 = hermitian_inner(form, structure, &v, &v)?.re;
        if norm2 > 1e-20 * initial {
            let mut e = v / norm2.sqrt();
            // Sign convention: the first significant coefficient of the
            // Re-carrying partner -Je is positive, which pins chart signs.
            // Applied here so caller-supplied bases pass through untouched.
            let ehat = -structure.apply(&e);
            let scale = ehat.amax();
            let pivot = ehat
                .iter()
                .find(|x| x.abs() > 1e-9 * scale)
                .copied()
                .unwrap_or(0.0);
            if pivot < 0.0 {
                e = -e;
            }
            basis.push(e);
        }
    }
    if basis.len() < n {
        return Err(Error::BasisBreakdown {
            step: basis.len(),
            norm: 0.0,
        });
    }
    Ok(basis)
}

/// Matrix of a complex-linear map in the mode basis: h_jk = <e_j, H e_k>.
pub fn mode_matrix(space: &ComplexifiedSpace, map: &LinearMap) -> Result<CMat> {
    let dim = space.dim();
    if map.matrix().nrows() != dim || map.matrix().ncols() != dim {
        return Err(Error::Dimension(format!(
            "map is {}x{} but space has {} coordinates",
            map.matrix().nrows(),
            map.matrix().ncols(),
            dim
        )));
    }
    let j = space.structure().matrix();
    let commutation = max_abs(&(j * map.matrix() - map.matrix() * j));
    if commutation > TOL_MATRIX {
        return Err(Error::NotComplexLinear {
            residual: commutation,
        });
    }
    let n = space.n_modes();
    let mut h = CMat::zeros(n, n);
    for k in 0..n {
        let he = map.apply(&space.basis()[k])?;
        for jdx in 0..n {
            h[(jdx, k)] = space.inner_product(&space.basis()[jdx], &he)?;
        }
    }
    Ok(h)
}

/// H = -J O: the positive one-particle energy when O is the mode-frame
/// generator commuting with J. Rejects generators that fail to commute and
/// operators whose mode matrix is not Hermitian.
pub fn one_particle_hamiltonian(
    space: &ComplexifiedSpace,
    omega: &LinearMap,
) -> Result<LinearMap> {
    let j = space.structure().matrix();
    if omega.matrix().nrows() != space.dim() {
        return Err(Error::Dimension(format!(
            "generator is {}x{} but space has {} coordinates",
            omega.matrix().nrows(),
            omega.matrix().ncols(),
            space.dim()
        )));
    }
    let commutation = max_abs(&(j * omega.matrix() - omega.matrix() * j));
    if commutation > TOL_MATRIX {
        return Err(Error::NotComplexLinear {
            residual: commutation,
        });
    }
    let h = LinearMap::endo(-(j * omega.matrix()), space.form().frame().clone())?;
    let hm = mode_matrix(space, &h)?;
    let herm = max_abs_c(&(hm.clone() - hm.adjoint()));
    if herm > TOL_MATRIX {
        return Err(Error::NotSelfAdjoint { residual: herm });
    }
    Ok(h)
}

/// Max mismatch of the two Hermitian products over seeded sample pairs:
/// |<v, w>_from - <g v, g w>_to|.
pub fn isometry_check(
    g: &LinearMap,
    from: &ComplexifiedSpace,
    to: &ComplexifiedSpace,
    pairs: usize,
    seed: u64,
) -> Result<f64> {
    if g.dim_domain() != from.dim() || g.matrix().nrows() != to.dim() {
        return Err(Error::Dimension(format!(
            "map is {}x{} between spaces of {} and {} coordinates",
            g.matrix().nrows(),
            g.matrix().ncols(),
            from.dim(),
            to.dim()
        )));
    }
    let mut sampler = VectorSampler::new(seed);
    let mut max = 0.0_f64;
    for _ in 0..pairs {
        let v = sampler.vector(from.dim());
        let w = sampler.vector(from.dim());
        let a = from.inner_product(&v, &w)?;
        let b = to.inner_product(&g.apply(&v)?, &g.apply(&w)?)?;
        max = max.max((a - b).norm());
    }
    Ok(max)
}
