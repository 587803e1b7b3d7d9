//! The Gassner invariant of braids and its unitarity property.
//!
//! For a braid word `b = σ_{i_1}^{s_1} ... σ_{i_k}^{s_k}` the invariant is the
//! left-to-right product `U_{i_1}^{s_1}(t_{j_1}) ... U_{i_k}^{s_k}(t_{j_k})`,
//! where `j_a` labels the strand passing over at crossing `a`. On pure braids
//! it is multiplicative; in general it is a crossed homomorphism, with the
//! symmetric group acting by relabelling the variables.
//!
//! The unitarity identity `Ω(τ) γ^-1 = γ̄ᵀ Ω(ι)` is checked with every `Ω`
//! cleared by `Δ = ∏(1 - t_i)`, so the comparison stays inside the Laurent
//! ring.

mod vw;

pub use vw::{
    d_matrix, verify_vw_unitarity, vw_gassner, vw_gassner_inverse, vw_gassner_prime,
    vw_generator, VwCrossing, VwForm, VwWord,
};

use crate::braid::{AnnotatedBraid, BraidWord, Crossing, Permutation, Sign};
use crate::error::{Error, Result};
use crate::laurent::LaurentPoly;
use crate::matrix::{LaurentMatrix, ScaledMatrix};

/// `U_i(t_j)` or its inverse in dimension `n`, with `n` variables.
///
/// The `2x2` block at rows and columns `{i, i+1}` is `[[1-t, 1], [t, 0]]` for
/// a positive crossing and `[[0, t^-1], [1, 1-t^-1]]` for a negative one.
pub fn generator_matrix(n: usize, i: usize, sign: Sign, j: usize) -> Result<LaurentMatrix> {
    if n < 2 || i == 0 || i >= n {
        return Err(Error::IndexOutOfRange {
            what: "generator",
            index: i,
            max: n.saturating_sub(1),
        });
    }
    if j == 0 || j > n {
        return Err(Error::IndexOutOfRange {
            what: "variable",
            index: j,
            max: n,
        });
    }
    let one = LaurentPoly::one(n);
    let zero = LaurentPoly::zero(n);
    let block = match sign {
        Sign::Positive => {
            let t = LaurentPoly::var(n, j);
            [[&one - &t, one], [t, zero]]
        }
        Sign::Negative => {
            let tb = LaurentPoly::var_pow(n, j, -1);
            [[zero, tb.clone()], [one.clone(), &one - &tb]]
        }
    };
    let mut m = LaurentMatrix::identity(n, n);
    for (r, row) in block.into_iter().enumerate() {
        for (c, p) in row.into_iter().enumerate() {
            m.set(i - 1 + r, i - 1 + c, p);
        }
    }
    Ok(m)
}

fn product_of<'a>(
    n: usize,
    letters: impl Iterator<Item = (&'a Crossing, usize)>,
) -> LaurentMatrix {
    letters.fold(LaurentMatrix::identity(n, n), |acc, (c, j)| {
        let g = generator_matrix(n, c.position, c.sign, j).expect("validated word");
        acc.checked_mul(&g).expect("same shape")
    })
}

/// Product of generator matrices along an already-annotated word.
pub fn gassner_annotated(a: &AnnotatedBraid) -> LaurentMatrix {
    let n = a.word.strands();
    product_of(n, a.word.crossings().iter().zip(a.over.iter().copied()))
}

/// The Gassner invariant `Γ(b)`.
pub fn gassner(b: &BraidWord) -> LaurentMatrix {
    gassner_annotated(&b.annotate())
}

/// `Γ(b)^-1`, computed by undoing the crossings of `b` in reverse order.
///
/// Each undone crossing carries the same over strand as the crossing it
/// undoes. This equals `Γ` of the inverse word annotated from the top of
/// `b`, i.e. `relabel(Γ(b.invert()), τ_b)`; it is not `Γ(b.invert())` on its
/// own unless `b` is pure.
pub fn gassner_inverse(b: &BraidWord) -> LaurentMatrix {
    let a = b.annotate();
    let n = b.strands();
    let undo: Vec<(Crossing, usize)> = b
        .crossings()
        .iter()
        .zip(a.over.iter().copied())
        .rev()
        .map(|(c, j)| (Crossing::new(c.position, c.sign.flip()), j))
        .collect();
    product_of(n, undo.iter().map(|(c, j)| (c, *j)))
}

/// Substitutes `t_j -> t_{sigma(j)}` in every entry.
pub fn relabel(m: &LaurentMatrix, sigma: &Permutation) -> Result<LaurentMatrix> {
    m.relabel(sigma.image())
}

/// `Ω(τ)` in cleared form: numerator `Δ·Ω(τ)` over denominator `Δ`.
///
/// The numerator has `∏_{q ≠ τ(p)} (1 - t_q)` at `(p, p)`, `Δ` below the
/// diagonal and zeros above.
pub fn omega_cleared(tau: &Permutation) -> ScaledMatrix {
    let n = tau.len();
    let factors: Vec<LaurentPoly> = (1..=n).map(|q| LaurentPoly::one_minus_var(n, q)).collect();
    let delta = LaurentPoly::delta(n);
    let mut num = LaurentMatrix::zeros(n, n);
    for p in 0..n {
        let skip = tau.image()[p];
        let diag = factors
            .iter()
            .enumerate()
            .filter(|(q, _)| q + 1 != skip)
            .fold(LaurentPoly::one(n), |acc, (_, f)| &acc * f);
        num.set(p, p, diag);
        for c in 0..p {
            num.set(p, c, delta.clone());
        }
    }
    ScaledMatrix::new(num, delta).expect("Δ is nonzero")
}

/// Outcome of an exact unitarity check: both sides of the cleared identity.
#[derive(Clone, Debug)]
pub struct UnitarityReport {
    pub holds: bool,
    pub lhs: LaurentMatrix,
    pub rhs: LaurentMatrix,
}

impl UnitarityReport {
    fn new(lhs: LaurentMatrix, rhs: LaurentMatrix) -> Self {
        UnitarityReport {
            holds: lhs == rhs,
            lhs,
            rhs,
        }
    }

    /// First `(row, col)` (0-based) where the two sides disagree.
    pub fn first_difference(&self) -> Option<(usize, usize)> {
        self.lhs.first_difference(&self.rhs)
    }
}

/// Checks `Ω(τ) γ^-1 = γ̄ᵀ Ω(ι)` exactly, with both `Ω` cleared by `Δ`.
pub fn verify_unitarity(b: &BraidWord) -> UnitarityReport {
    let n = b.strands();
    let tau = b.permutation();
    let gamma = gassner(b);
    let inverse = gassner_inverse(b);
    let lhs = omega_cleared(&tau)
        .numerator()
        .checked_mul(&inverse)
        .expect("same shape");
    let rhs = gamma
        .bar_transpose()
        .checked_mul(omega_cleared(&Permutation::identity(n)).numerator())
        .expect("same shape");
    UnitarityReport::new(lhs, rhs)
}

/// For a pure braid, checks the same identity with `Ω` replaced by `Ω̄ᵀ`.
pub fn verify_unitarity_variant(b: &BraidWord) -> Result<UnitarityReport> {
    let tau = b.permutation();
    if !tau.is_identity() {
        return Err(Error::NotPure(tau.to_string()));
    }
    let omega = omega_cleared(&tau).bar_transpose();
    let lhs = omega
        .numerator()
        .checked_mul(&gassner_inverse(b))
        .expect("same shape");
    let rhs = gassner(b)
        .bar_transpose()
        .checked_mul(omega.numerator())
        .expect("same shape");
    Ok(UnitarityReport::new(lhs, rhs))
}

/// `∏_a (-t_{j_a})^{s_a}`, the determinant every Gassner matrix must have.
pub fn expected_det(a: &AnnotatedBraid) -> LaurentPoly {
    let n = a.word.strands();
    a.word
        .crossings()
        .iter()
        .zip(&a.over)
        .fold(LaurentPoly::one(n), |acc, (c, &j)| {
            let m = -LaurentPoly::var_pow(n, j, c.sign.as_i32());
            &acc * &m
        })
}

/// Collapses every `t_i` to a single `t` (the unreduced Burau matrix when
/// applied to `Γ(b)`).
pub fn burau_specialize(m: &LaurentMatrix) -> LaurentMatrix {
    m.collapse()
}
