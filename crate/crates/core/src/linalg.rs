//! Dense complex matrix kernels.
//!
//! Everything here is sized for the problem at hand: 4×4 system operators and
//! joint system-bath objects of dimension 2ⁿ (32 for the default five spins).
//! Matrices are stored row-major in a flat `Vec<Complex64>`.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

/// Tolerance used to decide whether an input is Hermitian before it gets
/// symmetrized and handed to the eigensolver.
pub const HERMITIAN_TOL: f64 = 1e-10;

/// Looser Hermiticity check for density-matrix arguments to [`trace_distance`].
pub const DENSITY_HERMITIAN_TOL: f64 = 1e-8;

const EIG_MAX_ITER: usize = 10_000;

/// Square complex matrix.
#[derive(Clone, PartialEq)]
pub struct CMat {
    dim: usize,
    data: Vec<C64>,
}

impl CMat {
    pub fn zeros(dim: usize) -> Self {
        Self { dim, data: vec![ZERO; dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = ONE;
        }
        m
    }

    /// Builds a matrix from row-major entries. Fails unless the entry count is
    /// a perfect square and every entry is finite.
    pub fn from_row_major(data: Vec<C64>) -> Result<Self> {
        let dim = (data.len() as f64).sqrt().round() as usize;
        if dim == 0 || dim * dim != data.len() {
            return Err(Error::Shape(format!(
                "{} entries do not form a square matrix",
                data.len()
            )));
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Shape("matrix has non-finite entries".into()));
        }
        Ok(Self { dim, data })
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let data = rows.iter().flat_map(|r| r.iter().map(|&x| C64::new(x, 0.0))).collect();
        Self::from_row_major(data)
    }

    pub fn from_diag(diag: &[C64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = d;
        }
        m
    }

    /// `|ket⟩⟨bra|`
    pub fn outer(ket: &[C64], bra: &[C64]) -> Result<Self> {
        if ket.len() != bra.len() {
            return Err(Error::Shape("outer product of unequal lengths".into()));
        }
        let dim = ket.len();
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            for j in 0..dim {
                m[(i, j)] = ket[i] * bra[j].conj();
            }
        }
        Ok(m)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[C64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn adjoint(&self) -> Self {
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    pub fn scale(&self, s: C64) -> Self {
        Self { dim: self.dim, data: self.data.iter().map(|&z| z * s).collect() }
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    /// Hilbert–Schmidt inner product `Tr(self† other)`.
    pub fn hs_inner(&self, other: &CMat) -> C64 {
        debug_assert_eq!(self.dim, other.dim);
        self.data.iter().zip(&other.data).map(|(a, b)| a.conj() * b).sum()
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &CMat) -> f64 {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        self.data.iter().zip(&other.data).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    pub fn approx_eq(&self, other: &CMat, tol: f64) -> bool {
        self.dim == other.dim && self.max_abs_diff(other) <= tol
    }

    /// `max |H - H†|`
    pub fn hermitian_defect(&self) -> f64 {
        let n = self.dim;
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in i..n {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermitian_defect() <= tol
    }

    /// `(H + H†)/2`
    pub fn symmetrized(&self) -> Self {
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out[(i, j)] = (self[(i, j)] + self[(j, i)].conj()) * 0.5;
            }
        }
        out
    }

    /// `‖U†U − I‖_max`
    pub fn unitarity_defect(&self) -> f64 {
        (&self.adjoint() * self).max_abs_diff(&Self::identity(self.dim))
    }

    pub fn matvec(&self, v: &[C64]) -> Vec<C64> {
        let mut out = vec![ZERO; self.dim];
        self.matvec_into(v, &mut out);
        out
    }

    pub fn matvec_into(&self, v: &[C64], out: &mut [C64]) {
        assert_eq!(v.len(), self.dim);
        assert_eq!(out.len(), self.dim);
        for (i, o) in out.iter_mut().enumerate() {
            *o = self.row(i).iter().zip(v).map(|(a, b)| a * b).sum();
        }
    }

    /// `self† v`
    pub fn adjoint_matvec_into(&self, v: &[C64], out: &mut [C64]) {
        assert_eq!(v.len(), self.dim);
        out.iter_mut().for_each(|o| *o = ZERO);
        for (i, &vi) in v.iter().enumerate() {
            for (o, a) in out.iter_mut().zip(self.row(i)) {
                *o += a.conj() * vi;
            }
        }
    }

    fn to_nalgebra(&self) -> DMatrix<C64> {
        DMatrix::from_row_slice(self.dim, self.dim, &self.data)
    }
}

impl Index<(usize, usize)> for CMat {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.dim + j]
    }
}

impl IndexMut<(usize, usize)> for CMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.dim + j]
    }
}

impl<'a> Mul<&'a CMat> for &'a CMat {
    type Output = CMat;
    fn mul(self, rhs: &CMat) -> CMat {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        let n = self.dim;
        let mut out = CMat::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a == ZERO {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * rhs.data[k * n + j];
                }
            }
        }
        out
    }
}

impl<'a> Add<&'a CMat> for &'a CMat {
    type Output = CMat;
    fn add(self, rhs: &CMat) -> CMat {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        CMat { dim: self.dim, data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect() }
    }
}

impl<'a> Sub<&'a CMat> for &'a CMat {
    type Output = CMat;
    fn sub(self, rhs: &CMat) -> CMat {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        CMat { dim: self.dim, data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect() }
    }
}

impl fmt::Debug for CMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "CMat({}x{}) [", self.dim, self.dim)?;
        for i in 0..self.dim {
            write!(f, "  ")?;
            for z in self.row(i) {
                write!(f, "{:+.6e}{:+.6e}i  ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Kronecker product; `a` carries the slow (outer) indices.
pub fn kron(a: &CMat, b: &CMat) -> CMat {
    let (na, nb) = (a.dim, b.dim);
    let n = na * nb;
    let mut out = CMat::zeros(n);
    for i in 0..na {
        for j in 0..na {
            let aij = a[(i, j)];
            if aij == ZERO {
                continue;
            }
            for k in 0..nb {
                for l in 0..nb {
                    out[(i * nb + k, j * nb + l)] = aij * b[(k, l)];
                }
            }
        }
    }
    out
}

/// Eigendecomposition `H = V diag(λ) V†` of a Hermitian matrix, eigenvalues
/// ascending.
#[derive(Clone, Debug)]
pub struct HermEig {
    eigenvalues: Vec<f64>,
    eigenvectors: CMat,
}

impl HermEig {
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// Columns are the eigenvectors.
    pub fn eigenvectors(&self) -> &CMat {
        &self.eigenvectors
    }

    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn reconstruct(&self) -> CMat {
        let v = &self.eigenvectors;
        let d = CMat::from_diag(&self.eigenvalues.iter().map(|&l| C64::new(l, 0.0)).collect::<Vec<_>>());
        &(v * &d) * &v.adjoint()
    }
}

/// Hermitian eigendecomposition. The input is symmetrized first; inputs further
/// than [`HERMITIAN_TOL`] from Hermitian are rejected.
pub fn herm_eig(h: &CMat) -> Result<HermEig> {
    let defect = h.hermitian_defect();
    let scale = h.max_abs().max(1.0);
    if defect > HERMITIAN_TOL * scale {
        return Err(Error::NotHermitian { defect });
    }
    let sym = h.symmetrized();
    let eig = SymmetricEigen::try_new(sym.to_nalgebra(), f64::EPSILON, EIG_MAX_ITER)
        .ok_or_else(|| Error::EigenNoConvergence { matrix: format!("{sym:?}") })?;

    let n = h.dim;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));

    let eigenvalues = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let mut vecs = CMat::zeros(n);
    for (col, &k) in order.iter().enumerate() {
        for row in 0..n {
            vecs[(row, col)] = eig.eigenvectors[(row, k)];
        }
    }
    Ok(HermEig { eigenvalues, eigenvectors: vecs })
}

/// Phase factors `e^{−iλτ}` for each eigenvalue.
pub fn phases(e: &HermEig, tau: f64) -> Vec<C64> {
    e.eigenvalues.iter().map(|&l| C64::from_polar(1.0, -l * tau)).collect()
}

/// `V diag(e^{−iλτ}) V†`
pub fn propagator(e: &HermEig, tau: f64) -> Result<CMat> {
    if !tau.is_finite() || tau < 0.0 {
        return Err(Error::InvalidDuration(tau));
    }
    let n = e.dim();
    let v = &e.eigenvectors;
    let ph = phases(e, tau);
    let mut out = CMat::zeros(n);
    for i in 0..n {
        for j in 0..n {
            out[(i, j)] = (0..n).map(|k| v[(i, k)] * ph[k] * v[(j, k)].conj()).sum();
        }
    }
    Ok(out)
}

/// Traces out the bath; the system occupies the slow indices.
pub fn partial_trace_bath(rho_full: &CMat, sys_dim: usize, bath_dim: usize) -> Result<CMat> {
    if sys_dim == 0 || bath_dim == 0 || rho_full.dim != sys_dim * bath_dim {
        return Err(Error::Shape(format!(
            "cannot trace a {}-dim operator as {sys_dim}x{bath_dim}",
            rho_full.dim
        )));
    }
    let mut out = CMat::zeros(sys_dim);
    for i in 0..sys_dim {
        for j in 0..sys_dim {
            out[(i, j)] = (0..bath_dim).map(|b| rho_full[(i * bath_dim + b, j * bath_dim + b)]).sum();
        }
    }
    Ok(out)
}

/// Reduced system density matrix of a pure joint state, without forming the
/// joint projector.
pub fn reduced_from_pure(psi: &[C64], sys_dim: usize) -> Result<CMat> {
    if sys_dim == 0 || psi.len() % sys_dim != 0 {
        return Err(Error::Shape(format!("state of length {} does not split by {sys_dim}", psi.len())));
    }
    let bath_dim = psi.len() / sys_dim;
    let mut out = CMat::zeros(sys_dim);
    for i in 0..sys_dim {
        let ri = &psi[i * bath_dim..(i + 1) * bath_dim];
        for j in 0..sys_dim {
            let rj = &psi[j * bath_dim..(j + 1) * bath_dim];
            out[(i, j)] = ri.iter().zip(rj).map(|(a, b)| a * b.conj()).sum();
        }
    }
    Ok(out)
}

/// `½ Σ |λᵢ(ρ − σ)|`
pub fn trace_distance(rho: &CMat, sigma: &CMat) -> Result<f64> {
    if rho.dim != sigma.dim {
        return Err(Error::Shape(format!("trace distance of {} vs {} dims", rho.dim, sigma.dim)));
    }
    for m in [rho, sigma] {
        let defect = m.hermitian_defect();
        if defect > DENSITY_HERMITIAN_TOL {
            return Err(Error::NotHermitian { defect });
        }
    }
    let diff = (rho - sigma).symmetrized();
    let eig = herm_eig(&diff)?;
    let d = 0.5 * eig.eigenvalues.iter().map(|l| l.abs()).sum::<f64>();
    Ok(d.clamp(0.0, 1.0))
}
