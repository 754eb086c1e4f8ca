//! Dense complex linear algebra helpers shared across the crate.
//!
//! Everything here operates on small matrices (dimension at most a few
//! hundred), so plain dense algorithms are used throughout.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMat = DMatrix<Complex64>;
pub type CVec = DVector<Complex64>;
pub type RMat = DMatrix<f64>;
pub type RVec = DVector<f64>;

pub const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub const I: Complex64 = Complex64::new(0.0, 1.0);

pub fn cr(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// e^{2πi k / d}
pub fn root_of_unity(d: usize, k: f64) -> Complex64 {
    let arg = 2.0 * std::f64::consts::PI * k / d as f64;
    Complex64::new(arg.cos(), arg.sin())
}

pub fn ceye(n: usize) -> CMat {
    CMat::identity(n, n)
}

pub fn kron(a: &CMat, b: &CMat) -> CMat {
    a.kronecker(b)
}

/// Lift a one-party operator to the bipartite space: A ⊗ 𝟙_dB.
pub fn lift_left(a: &CMat, db: usize) -> CMat {
    a.kronecker(&ceye(db))
}

/// Lift a one-party operator to the bipartite space: 𝟙_dA ⊗ B.
pub fn lift_right(b: &CMat, da: usize) -> CMat {
    ceye(da).kronecker(b)
}

pub fn hermitize(m: &CMat) -> CMat {
    (m + m.adjoint()).scale(0.5)
}

pub fn hermitian_defect(m: &CMat) -> f64 {
    (m - m.adjoint()).norm()
}

pub fn unitary_defect(m: &CMat) -> f64 {
    (m.adjoint() * m - ceye(m.nrows())).norm()
}

/// Eigenvalues of a Hermitian matrix, ascending. The input is symmetrized
/// first so callers can pass nearly-Hermitian data.
pub fn hermitian_eigenvalues(m: &CMat) -> RVec {
    let h = hermitize(m);
    let eig = h.symmetric_eigen();
    let mut vals: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    vals.sort_by(|a, b| a.partial_cmp(b).unwrap());
    RVec::from_vec(vals)
}

pub fn min_eig_hermitian(m: &CMat) -> f64 {
    hermitian_eigenvalues(m)[0]
}

/// Eigendecomposition of a Hermitian matrix: (eigenvalues, eigenvectors as
/// columns), eigenvalues ascending.
pub fn hermitian_eigen(m: &CMat) -> (RVec, CMat) {
    let h = hermitize(m);
    let n = h.nrows();
    let eig = h.symmetric_eigen();
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&a, &b| eig.eigenvalues[a].partial_cmp(&eig.eigenvalues[b]).unwrap());
    let vals = RVec::from_iterator(n, idx.iter().map(|&i| eig.eigenvalues[i]));
    let mut vecs = CMat::zeros(n, n);
    for (col, &i) in idx.iter().enumerate() {
        vecs.set_column(col, &eig.eigenvectors.column(i));
    }
    (vals, vecs)
}

pub fn min_eig_symmetric(m: &RMat) -> f64 {
    let h = (m + m.transpose()).scale(0.5);
    h.symmetric_eigen()
        .eigenvalues
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min)
}

/// Unitary polar factor of a nonsingular matrix, by Newton iteration
/// X ← (X + X^{-†})/2. Quadratically convergent; fails on (numerically)
/// singular input.
pub fn polar_unitary(m: &CMat) -> Result<CMat> {
    let n = m.nrows();
    if m.ncols() != n {
        return Err(Error::ShapeMismatch("polar factor needs a square matrix".into()));
    }
    if m.norm() < 1e-14 {
        return Err(Error::Singular("zero matrix has no polar factor".into()));
    }
    let mut x = m.clone();
    for _ in 0..100 {
        let inv = x
            .clone()
            .try_inverse()
            .ok_or_else(|| Error::Singular("matrix is singular in polar iteration".into()))?;
        let next = (&x + inv.adjoint()).scale(0.5);
        let delta = (&next - &x).norm();
        x = next;
        if delta < 1e-15 {
            break;
        }
    }
    if unitary_defect(&x) > 1e-10 {
        return Err(Error::Singular(format!(
            "polar iteration did not reach a unitary factor (defect {:.3e})",
            unitary_defect(&x)
        )));
    }
    Ok(x)
}

/// k-th matrix power by repeated multiplication (k is small everywhere in
/// this crate).
pub fn mat_power(m: &CMat, k: usize) -> CMat {
    let mut out = ceye(m.nrows());
    for _ in 0..k {
        out = &out * m;
    }
    out
}

/// Maximally entangled state of local dimension d: Σ_i |ii⟩ / √d.
pub fn phi_plus(d: usize) -> CVec {
    let mut v = CVec::zeros(d * d);
    for i in 0..d {
        v[i * d + i] = cr(1.0 / (d as f64).sqrt());
    }
    v
}

pub fn pauli_x() -> CMat {
    CMat::from_row_slice(2, 2, &[cr(0.0), ONE, ONE, cr(0.0)])
}

pub fn pauli_y() -> CMat {
    CMat::from_row_slice(2, 2, &[cr(0.0), -I, I, cr(0.0)])
}

pub fn pauli_z() -> CMat {
    CMat::from_row_slice(2, 2, &[ONE, cr(0.0), cr(0.0), -ONE])
}
