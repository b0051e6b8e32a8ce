//! Real phase space: coordinate frames with physical units, antisymmetric
//! bilinear forms, linear maps between frames, Darboux reduction, and the
//! dimensional bookkeeping that distinguishes action-valued forms from
//! mixed-unit ones.

use std::fmt;
use std::ops::Add;

use nalgebra::{DMatrix, DVector};
use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{max_abs, max_diff, RMat, RVec};
use crate::{TOL_MATRIX, TOL_RANK};

/// Physical dimension as rational exponents of (mass, length, time).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "DimTriple", into = "DimTriple")]
pub struct Dimension {
    pub mass: Ratio<i64>,
    pub length: Ratio<i64>,
    pub time: Ratio<i64>,
}

/// Wire form: three [numerator, denominator] pairs, (mass, length, time).
type DimTriple = [[i64; 2]; 3];

impl From<Dimension> for DimTriple {
    fn from(d: Dimension) -> Self {
        [
            [*d.mass.numer(), *d.mass.denom()],
            [*d.length.numer(), *d.length.denom()],
            [*d.time.numer(), *d.time.denom()],
        ]
    }
}

impl TryFrom<DimTriple> for Dimension {
    type Error = String;

    fn try_from(t: DimTriple) -> std::result::Result<Self, String> {
        for pair in &t {
            if pair[1] == 0 {
                return Err(format!("unit exponent {}/{} has zero denominator", pair[0], pair[1]));
            }
        }
        Ok(Dimension {
            mass: Ratio::new(t[0][0], t[0][1]),
            length: Ratio::new(t[1][0], t[1][1]),
            time: Ratio::new(t[2][0], t[2][1]),
        })
    }
}

impl Dimension {
    pub fn new(mass: Ratio<i64>, length: Ratio<i64>, time: Ratio<i64>) -> Self {
        Self { mass, length, time }
    }

    pub fn from_integers(mass: i64, length: i64, time: i64) -> Self {
        Self {
            mass: Ratio::from_integer(mass),
            length: Ratio::from_integer(length),
            time: Ratio::from_integer(time),
        }
    }

    pub fn dimensionless() -> Self {
        Self::from_integers(0, 0, 0)
    }

    pub fn length() -> Self {
        Self::from_integers(0, 1, 0)
    }

    pub fn momentum() -> Self {
        Self::from_integers(1, 1, -1)
    }

    pub fn action() -> Self {
        Self::from_integers(1, 2, -1)
    }
}

/// Dimensions multiply as quantities, so exponents add.
impl Add for Dimension {
    type Output = Dimension;

    fn add(self, rhs: Dimension) -> Dimension {
        Dimension {
            mass: self.mass + rhs.mass,
            length: self.length + rhs.length,
            time: self.time + rhs.time,
        }
    }
}

impl fmt::Display for Dimension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (symbol, exp) in [("M", self.mass), ("L", self.length), ("T", self.time)] {
            if exp != Ratio::from_integer(0) {
                if exp == Ratio::from_integer(1) {
                    parts.push(symbol.to_string());
                } else {
                    parts.push(format!("{}^{}", symbol, exp));
                }
            }
        }
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join(" "))
        }
    }
}

/// Ordered coordinate labels with the physical dimension of each coordinate.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoordinateFrame {
    labels: Vec<String>,
    units: Vec<Dimension>,
}

impl CoordinateFrame {
    pub fn new(labels: Vec<String>, units: Vec<Dimension>) -> Result<Self> {
        if labels.len() != units.len() {
            return Err(Error::Frame(format!(
                "{} labels but {} unit entries",
                labels.len(),
                units.len()
            )));
        }
        if labels.is_empty() || labels.len() % 2 != 0 {
            return Err(Error::Frame(format!(
                "coordinate count must be even and positive, got {}",
                labels.len()
            )));
        }
        for (i, a) in labels.iter().enumerate() {
            if a.is_empty() {
                return Err(Error::Frame(format!("label {} is empty", i)));
            }
            if labels[..i].contains(a) {
                return Err(Error::Frame(format!("duplicate label '{}'", a)));
            }
        }
        Ok(Self { labels, units })
    }

    /// Positions first, then momenta: (x, y, z, q4, ..., p_x, p_y, ...).
    pub fn standard(n_modes: usize) -> Self {
        let mut labels = Vec::with_capacity(2 * n_modes);
        let mut units = Vec::with_capacity(2 * n_modes);
        let pos_name = |k: usize| match k {
            0 => "x".to_string(),
            1 => "y".to_string(),
            2 => "z".to_string(),
            _ => format!("q{}", k + 1),
        };
        for k in 0..n_modes {
            labels.push(pos_name(k));
            units.push(Dimension::length());
        }
        for k in 0..n_modes {
            labels.push(format!("p_{}", pos_name(k)));
            units.push(Dimension::momentum());
        }
        Self { labels, units }
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn n_modes(&self) -> usize {
        self.labels.len() / 2
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn unit(&self, i: usize) -> Dimension {
        self.units[i]
    }

    pub fn units(&self) -> &[Dimension] {
        &self.units
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// Coordinate axis vector (all zeros, 1 at position i).
    pub fn axis(&self, i: usize) -> RVec {
        let mut v = DVector::zeros(self.dim());
        v[i] = 1.0;
        v
    }
}

/// Diagnostics for a candidate form matrix. Defects are reported, never
/// repaired: the matrix is kept exactly as given.
#[derive(Clone, Copy, Debug)]
pub struct ValidationReport {
    /// max |S + S^T| entrywise; 0 means antisymmetric as stored.
    pub antisymmetry_residual: f64,
    pub sigma_min: f64,
    pub sigma_max: f64,
}

impl ValidationReport {
    pub fn antisymmetric(&self) -> bool {
        self.antisymmetry_residual == 0.0
    }

    pub fn rank_ratio(&self) -> f64 {
        if self.sigma_max == 0.0 {
            0.0
        } else {
            self.sigma_min / self.sigma_max
        }
    }

    pub fn nondegenerate(&self) -> bool {
        self.sigma_max > 0.0 && self.rank_ratio() >= TOL_RANK
    }

    pub fn pass(&self) -> bool {
        self.antisymmetric() && self.nondegenerate()
    }
}

pub fn validate_symplectic(matrix: &RMat) -> ValidationReport {
    let antisymmetry_residual = max_abs(&(matrix + matrix.transpose()));
    let svd = matrix.clone().svd(false, false);
    let sv = &svd.singular_values;
    let sigma_max = sv.iter().fold(0.0_f64, |a, x| a.max(*x));
    let sigma_min = sv.iter().fold(f64::INFINITY, |a, x| a.min(*x));
    let sigma_min = if sigma_min.is_finite() { sigma_min } else { 0.0 };
    ValidationReport {
        antisymmetry_residual,
        sigma_min,
        sigma_max,
    }
}

/// Non-degenerate antisymmetric bilinear form `s(v, w) = v^T S w` on a frame.
#[derive(Clone, Debug)]
pub struct SymplecticForm {
    matrix: RMat,
    frame: CoordinateFrame,
}

impl SymplecticForm {
    /// Validates and stores the matrix exactly as given: antisymmetry must
    /// hold as stored (defects are rejected, not symmetrized away).
    pub fn new(matrix: RMat, frame: CoordinateFrame) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() {
            return Err(Error::Dimension(format!(
                "form matrix is {}x{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        if matrix.nrows() != frame.dim() {
            return Err(Error::Dimension(format!(
                "form matrix is {}x{} but frame has {} coordinates",
                matrix.nrows(),
                matrix.ncols(),
                frame.dim()
            )));
        }
        let report = validate_symplectic(&matrix);
        if !report.antisymmetric() {
            return Err(Error::NotAntisymmetric {
                residual: report.antisymmetry_residual,
            });
        }
        if !report.nondegenerate() {
            return Err(Error::DegenerateForm {
                ratio: report.rank_ratio(),
            });
        }
        Ok(Self { matrix, frame })
    }

    pub fn matrix(&self) -> &RMat {
        &self.matrix
    }

    pub fn frame(&self) -> &CoordinateFrame {
        &self.frame
    }

    pub fn dim(&self) -> usize {
        self.frame.dim()
    }

    pub fn n_modes(&self) -> usize {
        self.frame.n_modes()
    }

    pub fn validation(&self) -> ValidationReport {
        validate_symplectic(&self.matrix)
    }

    pub fn evaluate(&self, v: &RVec, w: &RVec) -> Result<f64> {
        evaluate_form(self, v, w)
    }
}

pub fn evaluate_form(s: &SymplecticForm, v: &RVec, w: &RVec) -> Result<f64> {
    if v.len() != s.dim() || w.len() != s.dim() {
        return Err(Error::Dimension(format!(
            "form on {} coordinates applied to vectors of length {} and {}",
            s.dim(),
            v.len(),
            w.len()
        )));
    }
    Ok(v.dot(&(s.matrix() * w)))
}

/// Matrix of the standard form [[0, I], [-I, 0]] for n modes.
pub fn standard_form_matrix(n_modes: usize) -> RMat {
    let n = n_modes;
    DMatrix::from_fn(2 * n, 2 * n, |i, j| {
        if j == i + n {
            1.0
        } else if i == j + n {
            -1.0
        } else {
            0.0
        }
    })
}

/// Linear map with declared domain and codomain frames.
#[derive(Clone, Debug)]
pub struct LinearMap {
    matrix: RMat,
    domain: CoordinateFrame,
    codomain: CoordinateFrame,
}

impl LinearMap {
    pub fn between(matrix: RMat, domain: CoordinateFrame, codomain: CoordinateFrame) -> Result<Self> {
        if matrix.nrows() != codomain.dim() || matrix.ncols() != domain.dim() {
            return Err(Error::Dimension(format!(
                "matrix is {}x{} but codomain/domain have {}/{} coordinates",
                matrix.nrows(),
                matrix.ncols(),
                codomain.dim(),
                domain.dim()
            )));
        }
        Ok(Self {
            matrix,
            domain,
            codomain,
        })
    }

    /// Endomorphism of a single frame.
    pub fn endo(matrix: RMat, frame: CoordinateFrame) -> Result<Self> {
        Self::between(matrix, frame.clone(), frame)
    }

    pub fn identity(frame: CoordinateFrame) -> Self {
        let n = frame.dim();
        Self {
            matrix: DMatrix::identity(n, n),
            domain: frame.clone(),
            codomain: frame,
        }
    }

    pub fn matrix(&self) -> &RMat {
        &self.matrix
    }

    pub fn domain(&self) -> &CoordinateFrame {
        &self.domain
    }

    pub fn codomain(&self) -> &CoordinateFrame {
        &self.codomain
    }

    pub fn dim_domain(&self) -> usize {
        self.domain.dim()
    }

    pub fn apply(&self, v: &RVec) -> Result<RVec> {
        if v.len() != self.domain.dim() {
            return Err(Error::Dimension(format!(
                "map expects vectors of length {}, got {}",
                self.domain.dim(),
                v.len()
            )));
        }
        Ok(&self.matrix * v)
    }

    pub fn inverse(&self) -> Result<LinearMap> {
        let inv = self.matrix.clone().try_inverse().ok_or(Error::Singular)?;
        Ok(LinearMap {
            matrix: inv,
            domain: self.codomain.clone(),
            codomain: self.domain.clone(),
        })
    }

    /// self after inner: (self . inner)(v) = self(inner(v)).
    pub fn compose(&self, inner: &LinearMap) -> Result<LinearMap> {
        if inner.codomain.dim() != self.domain.dim() {
            return Err(Error::Dimension(format!(
                "cannot compose: inner codomain has {} coordinates, outer domain {}",
                inner.codomain.dim(),
                self.domain.dim()
            )));
        }
        Ok(LinearMap {
            matrix: &self.matrix * &inner.matrix,
            domain: inner.domain.clone(),
            codomain: self.codomain.clone(),
        })
    }
}

/// Residual of the Hamiltonian-generator condition `O^T S + S O = 0`,
/// i.e. antisymmetry of the flow of O for the form s.
pub fn is_hamiltonian_generator(s: &SymplecticForm, omega: &LinearMap) -> Result<f64> {
    let m = omega.matrix();
    if m.nrows() != s.dim() {
        return Err(Error::Dimension(format!(
            "generator is {}x{} but form has {} coordinates",
            m.nrows(),
            m.ncols(),
            s.dim()
        )));
    }
    Ok(max_abs(&(m.transpose() * s.matrix() + s.matrix() * m)))
}

/// Residual of the symplectic-map condition `h^T S h = S`.
pub fn is_symplectic_map(s: &SymplecticForm, h: &LinearMap) -> Result<f64> {
    let m = h.matrix();
    if m.nrows() != s.dim() || m.ncols() != s.dim() {
        return Err(Error::Dimension(format!(
            "map is {}x{} but form has {} coordinates",
            m.nrows(),
            m.ncols(),
            s.dim()
        )));
    }
    Ok(max_diff(&(m.transpose() * s.matrix() * m), s.matrix()))
}

/// Darboux basis for s: columns of the returned map are (q_1..q_n, p_1..p_n)
/// with F^T S F equal to the standard form. Pivots greedily on the largest
/// remaining |s(c_i, c_j)| over the projected coordinate axes.
pub fn darboux_frame(s: &SymplecticForm) -> Result<LinearMap> {
    let dim = s.dim();
    let n = s.n_modes();
    let scale = max_abs(s.matrix());
    let mut cands: Vec<RVec> = (0..dim).map(|i| s.frame().axis(i)).collect();
    let mut qs: Vec<RVec> = Vec::with_capacity(n);
    let mut ps: Vec<RVec> = Vec::with_capacity(n);

    while qs.len() < n {
        let mut best = (0usize, 0usize, 0.0_f64);
        for i in 0..cands.len() {
            for j in (i + 1)..cands.len() {
                let val = s.evaluate(&cands[i], &cands[j])?.abs();
                if val > best.2 {
                    best = (i, j, val);
                }
            }
        }
        let (bi, bj, pivot) = best;
        if pivot <= TOL_RANK * scale {
            return Err(Error::DarbouxBreakdown { pivot });
        }
        let q = cands[bi].clone();
        let val = s.evaluate(&q, &cands[bj])?;
        let p = &cands[bj] / val;
        cands.remove(bj);
        cands.remove(bi);
        // Two projection sweeps keep the residual pairings at roundoff.
        for _ in 0..2 {
            for c in cands.iter_mut() {
                let sp = s.evaluate(&p, c)?;
                let sq = s.evaluate(&q, c)?;
                *c += &q * sp - &p * sq;
            }
        }
        qs.push(q);
        ps.push(p);
    }

    let mut f = DMatrix::zeros(dim, dim);
    for (k, q) in qs.iter().enumerate() {
        f.set_column(k, q);
    }
    for (k, p) in ps.iter().enumerate() {
        f.set_column(n + k, p);
    }
    let residual = max_diff(&(f.transpose() * s.matrix() * &f), &standard_form_matrix(n));
    if residual > TOL_MATRIX * scale.max(1.0) {
        return Err(Error::RelationResidual { residual });
    }
    LinearMap::endo(f, s.frame().clone())
}

/// Map g with `to = g^{-T} from g^{-1}` (pullback along g^{-1}), built from
/// the two Darboux frames. Any valid g is acceptable; this one is
/// deterministic but need not match a catalog transformation.
pub fn relating_transformation(from: &SymplecticForm, to: &SymplecticForm) -> Result<LinearMap> {
    if from.dim() != to.dim() {
        return Err(Error::Dimension(format!(
            "forms have {} and {} coordinates",
            from.dim(),
            to.dim()
        )));
    }
    let f_from = darboux_frame(from)?;
    let f_to = darboux_frame(to)?;
    let g = f_to.matrix() * f_from.matrix().clone().try_inverse().ok_or(Error::Singular)?;
    let g = LinearMap::between(g, from.frame().clone(), to.frame().clone())?;
    let transported = transform_form(from, &g)?;
    let residual = max_diff(transported.matrix(), to.matrix());
    if residual > TOL_MATRIX * max_abs(to.matrix()).max(1.0) {
        return Err(Error::RelationResidual { residual });
    }
    Ok(g)
}

/// Pullback of s along g^{-1}: the form seen in the codomain frame of g.
/// The product is antisymmetric in exact arithmetic; the stored matrix is
/// explicitly antisymmetrized to keep the type invariant under roundoff.
pub fn transform_form(s: &SymplecticForm, g: &LinearMap) -> Result<SymplecticForm> {
    if g.dim_domain() != s.dim() {
        return Err(Error::Dimension(format!(
            "map domain has {} coordinates but form has {}",
            g.dim_domain(),
            s.dim()
        )));
    }
    let g_inv = g.matrix().clone().try_inverse().ok_or(Error::Singular)?;
    let m = g_inv.transpose() * s.matrix() * &g_inv;
    let m = (&m - m.transpose()) / 2.0;
    SymplecticForm::new(m, g.codomain().clone())
}

/// Physical dimension of each nonzero form entry and whether they agree.
#[derive(Clone, Debug)]
pub struct DimensionReport {
    /// (row, column, dimension of S_ij contribution) for i < j, S_ij != 0.
    pub entries: Vec<(usize, usize, Dimension)>,
    pub uniform: bool,
    pub common: Option<Dimension>,
    pub action_valued: bool,
}

/// Treats form entries as pure numbers, so s(v, w) contributes the product
/// of the two coordinate dimensions at every nonzero entry.
pub fn dimension_check(s: &SymplecticForm) -> DimensionReport {
    let mut entries = Vec::new();
    for i in 0..s.dim() {
        for j in (i + 1)..s.dim() {
            if s.matrix()[(i, j)] != 0.0 {
                entries.push((i, j, s.frame().unit(i) + s.frame().unit(j)));
            }
        }
    }
    let common = entries.first().map(|e| e.2);
    let uniform = match common {
        Some(c) => entries.iter().all(|e| e.2 == c),
        None => true,
    };
    let action_valued = uniform && common == Some(Dimension::action());
    DimensionReport {
        entries,
        uniform,
        common: if uniform { common } else { None },
        action_valued,
    }
}
