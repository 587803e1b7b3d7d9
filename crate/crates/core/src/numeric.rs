//! Numerical specialisation on the unit torus `|t_i| = 1`.
//!
//! On the torus `t̄ = t^-1` is complex conjugation, so `Ω̄ᵀ` becomes the
//! conjugate transpose of `Ω` and `Ψ = iΩ - iΩ*` is an honest Hermitian
//! matrix. Ψ-unitarity of a pure braid's Gassner matrix `γ` means
//! `γ* Ψ γ = Ψ`.

use std::ops::{Index, IndexMut};

use num_complex::Complex64;

use crate::braid::BraidWord;
use crate::error::{Error, Result};
use crate::gassner::gassner;
use crate::matrix::LaurentMatrix;

/// Minimum allowed `|1 - t_i|`.
pub const POLE_GUARD: f64 = 1e-9;
/// Default entrywise tolerance for Hermitian symmetry.
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Default floor for Cholesky pivots.
pub const PIVOT_FLOOR: f64 = 1e-10;
/// Default bound on the relative unitarity residual.
pub const UNITARITY_TOL: f64 = 1e-8;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// A point `t_k = exp(i θ_k)` on the unit torus.
#[derive(Clone, Debug, PartialEq)]
pub struct TorusPoint {
    thetas: Vec<f64>,
}

impl TorusPoint {
    pub fn new(thetas: Vec<f64>) -> Result<Self> {
        if let Some(k) = thetas.iter().position(|x| !x.is_finite()) {
            return Err(Error::InvalidArgument(format!("angle {} is not finite", k + 1)));
        }
        Ok(TorusPoint { thetas })
    }

    pub fn thetas(&self) -> &[f64] {
        &self.thetas
    }

    pub fn len(&self) -> usize {
        self.thetas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.thetas.is_empty()
    }

    pub fn coordinates(&self) -> Vec<Complex64> {
        self.thetas.iter().map(|&t| Complex64::from_polar(1.0, t)).collect()
    }

    /// Fails if any `t_k` is within [`POLE_GUARD`] of 1.
    pub fn check_poles(&self) -> Result<()> {
        for (k, z) in self.coordinates().iter().enumerate() {
            if (Complex64::new(1.0, 0.0) - z).norm() < POLE_GUARD {
                return Err(Error::NearPole {
                    index: k + 1,
                    guard: POLE_GUARD,
                });
            }
        }
        Ok(())
    }
}

/// Dense square complex matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix {
    n: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(n: usize) -> Self {
        ComplexMatrix {
            n,
            data: vec![Complex64::new(0.0, 0.0); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for k in 0..n {
            m[(k, k)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Complex64>>) -> Result<Self> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for r in rows {
            if r.len() != n {
                return Err(Error::DimensionMismatch {
                    left: n,
                    right: r.len(),
                });
            }
            data.extend(r);
        }
        Ok(ComplexMatrix { n, data })
    }

    pub fn diagonal(diag: &[Complex64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (k, &d) in diag.iter().enumerate() {
            m[(k, k)] = d;
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n, "dimension mismatch");
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                for j in 0..n {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n, "dimension mismatch");
        ComplexMatrix {
            n: self.n,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn scale(&self, c: Complex64) -> Self {
        ComplexMatrix {
            n: self.n,
            data: self.data.iter().map(|z| z * c).collect(),
        }
    }

    pub fn conj(&self) -> Self {
        ComplexMatrix {
            n: self.n,
            data: self.data.iter().map(Complex64::conj).collect(),
        }
    }

    pub fn conj_transpose(&self) -> Self {
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out[(i, j)] = self[(j, i)].conj();
            }
        }
        out
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(Complex64::norm_sqr).sum::<f64>().sqrt()
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.n, other.n, "dimension mismatch");
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// `max |H - H*|` over all entries.
    pub fn hermitian_defect(&self) -> f64 {
        self.max_abs_diff(&self.conj_transpose())
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;
    fn index(&self, (r, c): (usize, usize)) -> &Complex64 {
        &self.data[r * self.n + c]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Complex64 {
        &mut self.data[r * self.n + c]
    }
}

pub fn eval_matrix(m: &LaurentMatrix, p: &TorusPoint) -> Result<ComplexMatrix> {
    let z = p.coordinates();
    let n = m.dim();
    let mut out = ComplexMatrix::zeros(n);
    for r in 0..n {
        for c in 0..n {
            out[(r, c)] = m.get(r, c).eval(&z)?;
        }
    }
    Ok(out)
}

/// `Ω(ι)` at a torus point: `1/(1 - t_k)` on the diagonal, ones below.
pub fn omega_numeric(p: &TorusPoint) -> Result<ComplexMatrix> {
    p.check_poles()?;
    let z = p.coordinates();
    let n = z.len();
    let mut m = ComplexMatrix::zeros(n);
    for r in 0..n {
        m[(r, r)] = (Complex64::new(1.0, 0.0) - z[r]).inv();
        for c in 0..r {
            m[(r, c)] = Complex64::new(1.0, 0.0);
        }
    }
    Ok(m)
}

/// `Ψ = iΩ - iΩ*`.
pub fn psi_numeric(p: &TorusPoint) -> Result<ComplexMatrix> {
    let omega = omega_numeric(p)?;
    Ok(omega.scale(I).sub(&omega.conj_transpose().scale(I)))
}

/// `Ψ' = D* Ψ D` with `D = diag(1 - t_k)`.
pub fn psi_prime_numeric(p: &TorusPoint) -> Result<ComplexMatrix> {
    let psi = psi_numeric(p)?;
    let d = d_numeric(p);
    Ok(d.conj_transpose().mul(&psi).mul(&d))
}

fn d_numeric(p: &TorusPoint) -> ComplexMatrix {
    let diag: Vec<_> = p
        .coordinates()
        .iter()
        .map(|z| Complex64::new(1.0, 0.0) - z)
        .collect();
    ComplexMatrix::diagonal(&diag)
}

/// Cholesky-style test: true iff every pivot exceeds `pivot_floor`.
///
/// Rejects matrices whose Hermitian defect exceeds [`HERMITIAN_TOL`] relative
/// to the largest entry (or absolutely, for entries below 1).
pub fn is_positive_definite(h: &ComplexMatrix, pivot_floor: f64) -> Result<bool> {
    let scale = h.data.iter().map(|z| z.norm()).fold(1.0, f64::max);
    let defect = h.hermitian_defect();
    if defect.is_nan() || defect > HERMITIAN_TOL * scale {
        return Err(Error::NotHermitian(defect));
    }
    let n = h.dim();
    let mut l = ComplexMatrix::zeros(n);
    for k in 0..n {
        let pivot = h[(k, k)].re - (0..k).map(|m| l[(k, m)].norm_sqr()).sum::<f64>();
        if pivot.is_nan() || pivot <= pivot_floor {
            return Ok(false);
        }
        let root = pivot.sqrt();
        l[(k, k)] = Complex64::new(root, 0.0);
        for i in k + 1..n {
            let s = (0..k).fold(h[(i, k)], |acc, m| acc - l[(i, m)] * l[(k, m)].conj());
            l[(i, k)] = s / root;
        }
    }
    Ok(true)
}

fn relative_residual(gamma: &ComplexMatrix, form: &ComplexMatrix) -> f64 {
    let moved = gamma.conj_transpose().mul(form).mul(gamma);
    let denom = form.frobenius_norm();
    let num = moved.sub(form).frobenius_norm();
    if denom == 0.0 {
        num
    } else {
        num / denom
    }
}

fn require_pure(b: &BraidWord) -> Result<()> {
    let tau = b.permutation();
    if !tau.is_identity() {
        return Err(Error::NotPure(tau.to_string()));
    }
    Ok(())
}

/// `‖γ*Ψγ - Ψ‖_F / ‖Ψ‖_F` for `γ = Γ(b)` at `p`; `b` must be pure.
pub fn check_psi_unitarity(b: &BraidWord, p: &TorusPoint) -> Result<f64> {
    require_pure(b)?;
    check_dims(b, p)?;
    let psi = psi_numeric(p)?;
    let gamma = eval_matrix(&gassner(b), p)?;
    Ok(relative_residual(&gamma, &psi))
}

/// The same residual for `γ' = D^-1 Γ(b) D` against `Ψ'`.
pub fn check_psi_prime_unitarity(b: &BraidWord, p: &TorusPoint) -> Result<f64> {
    require_pure(b)?;
    check_dims(b, p)?;
    let psi = psi_prime_numeric(p)?;
    let d = d_numeric(p);
    let d_inv = ComplexMatrix::diagonal(
        &(0..d.dim()).map(|k| d[(k, k)].inv()).collect::<Vec<_>>(),
    );
    let gamma = eval_matrix(&gassner(b), p)?;
    let gamma_prime = d_inv.mul(&gamma).mul(&d);
    Ok(relative_residual(&gamma_prime, &psi))
}

fn check_dims(b: &BraidWord, p: &TorusPoint) -> Result<()> {
    if b.strands() != p.len() {
        return Err(Error::DimensionMismatch {
            left: b.strands(),
            right: p.len(),
        });
    }
    Ok(())
}
