//! Gassner matrices for pure v/w-braid words.
//!
//! A generator `σ_ij` (`i ≠ j`) acts on the strands labelled `i` and `j`.
//! Two forms are provided: `U_ij`, with block `[[1, 1-t_i], [0, t_i]]`, and
//! the conjugate `V_ij = D^-1 U_ij D`, with block `[[1, 1-t_j], [0, t_i]]`,
//! where `D = diag(1 - t_1, ..., 1 - t_n)`. The block's first row and column
//! go to index `i`, the second to `j`, whichever is larger.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{omega_cleared, UnitarityReport};
use crate::braid::{Permutation, Sign};
use crate::error::{Error, Result};
use crate::laurent::LaurentPoly;
use crate::matrix::LaurentMatrix;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct VwCrossing {
    pub i: usize,
    pub j: usize,
    pub sign: Sign,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum VwForm {
    /// `Γ`, built from `U_ij`.
    U,
    /// `Γ'`, built from `V_ij`.
    V,
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct VwWord {
    strands: usize,
    crossings: Vec<VwCrossing>,
}

impl VwWord {
    pub fn new(strands: usize, crossings: Vec<VwCrossing>) -> Result<Self> {
        for c in &crossings {
            check_pair(strands, c.i, c.j)?;
        }
        Ok(VwWord { strands, crossings })
    }

    pub fn empty(strands: usize) -> Self {
        VwWord {
            strands,
            crossings: Vec::new(),
        }
    }

    /// Parses letters separated by whitespace or `;`. A letter is `i,j` for
    /// `σ_ij` or `-i,j` for its inverse.
    pub fn parse(text: &str, strands: usize) -> Result<Self> {
        let mut crossings = Vec::new();
        let mut offset = 0;
        for piece in text.split(|c: char| c.is_whitespace() || c == ';') {
            let here = offset;
            offset += piece.len() + 1;
            if piece.is_empty() {
                continue;
            }
            let fail = |message: String| Error::Parse {
                position: here,
                token: piece.to_string(),
                message,
            };
            let (sign, body) = match piece.strip_prefix('-') {
                Some(rest) => (Sign::Negative, rest),
                None => (Sign::Positive, piece.strip_prefix('+').unwrap_or(piece)),
            };
            let Some((a, b)) = body.split_once(',') else {
                return Err(fail("expected a strand pair i,j".into()));
            };
            let parse_index = |s: &str| -> Result<usize> {
                if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
                    return Err(fail("strand index must be a positive integer".into()));
                }
                s.parse().map_err(|_| fail("strand index too large".into()))
            };
            let (i, j) = (parse_index(a)?, parse_index(b)?);
            check_pair(strands, i, j).map_err(|e| fail(e.to_string()))?;
            crossings.push(VwCrossing { i, j, sign });
        }
        Ok(VwWord { strands, crossings })
    }

    pub fn random(strands: usize, length: usize, seed: u64) -> Result<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Self::random_with(strands, length, &mut rng)
    }

    pub fn random_with<R: Rng>(strands: usize, length: usize, rng: &mut R) -> Result<Self> {
        if strands < 2 {
            return Err(Error::InvalidArgument(
                "v/w words need at least two strands".into(),
            ));
        }
        let crossings = (0..length)
            .map(|_| {
                let i = rng.gen_range(1..=strands);
                let mut j = rng.gen_range(1..strands);
                if j >= i {
                    j += 1;
                }
                let sign = if rng.gen_bool(0.5) {
                    Sign::Positive
                } else {
                    Sign::Negative
                };
                VwCrossing { i, j, sign }
            })
            .collect();
        Ok(VwWord { strands, crossings })
    }

    pub fn strands(&self) -> usize {
        self.strands
    }

    pub fn crossings(&self) -> &[VwCrossing] {
        &self.crossings
    }

    pub fn len(&self) -> usize {
        self.crossings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.crossings.is_empty()
    }

    pub fn concat(&self, other: &Self) -> Result<Self> {
        if self.strands != other.strands {
            return Err(Error::DimensionMismatch {
                left: self.strands,
                right: other.strands,
            });
        }
        let mut crossings = self.crossings.clone();
        crossings.extend_from_slice(&other.crossings);
        Ok(VwWord {
            strands: self.strands,
            crossings,
        })
    }

    pub fn invert(&self) -> Self {
        VwWord {
            strands: self.strands,
            crossings: self
                .crossings
                .iter()
                .rev()
                .map(|c| VwCrossing {
                    sign: c.sign.flip(),
                    ..*c
                })
                .collect(),
        }
    }
}

impl fmt::Display for VwWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, c) in self.crossings.iter().enumerate() {
            if k > 0 {
                f.write_str(" ")?;
            }
            if c.sign == Sign::Negative {
                f.write_str("-")?;
            }
            write!(f, "{},{}", c.i, c.j)?;
        }
        Ok(())
    }
}

fn check_pair(n: usize, i: usize, j: usize) -> Result<()> {
    for x in [i, j] {
        if x == 0 || x > n {
            return Err(Error::IndexOutOfRange {
                what: "strand",
                index: x,
                max: n,
            });
        }
    }
    if i == j {
        return Err(Error::InvalidArgument(format!(
            "v/w generator needs distinct strands, got ({i}, {j})"
        )));
    }
    Ok(())
}

/// `U_ij^±1` or `V_ij^±1` in dimension `n`.
pub fn vw_generator(n: usize, i: usize, j: usize, sign: Sign, form: VwForm) -> Result<LaurentMatrix> {
    check_pair(n, i, j)?;
    let one = LaurentPoly::one(n);
    let zero = LaurentPoly::zero(n);
    // Block [[1, x], [0, t_i]], with inverse [[1, -x t_i^-1], [0, t_i^-1]].
    let x = match form {
        VwForm::U => LaurentPoly::one_minus_var(n, i),
        VwForm::V => LaurentPoly::one_minus_var(n, j),
    };
    let block = match sign {
        Sign::Positive => [[one.clone(), x], [zero, LaurentPoly::var(n, i)]],
        Sign::Negative => {
            let ti_inv = LaurentPoly::var_pow(n, i, -1);
            [[one.clone(), -(&x * &ti_inv)], [zero, ti_inv]]
        }
    };
    let idx = [i - 1, j - 1];
    let mut m = LaurentMatrix::identity(n, n);
    for (r, row) in block.into_iter().enumerate() {
        for (c, p) in row.into_iter().enumerate() {
            m.set(idx[r], idx[c], p);
        }
    }
    Ok(m)
}

fn vw_product(w: &VwWord, form: VwForm) -> LaurentMatrix {
    let n = w.strands();
    w.crossings()
        .iter()
        .fold(LaurentMatrix::identity(n, n), |acc, c| {
            let g = vw_generator(n, c.i, c.j, c.sign, form).expect("validated word");
            acc.checked_mul(&g).expect("same shape")
        })
}

/// `Γ(w)`: the left-to-right product of `U_ij^±1`.
pub fn vw_gassner(w: &VwWord) -> LaurentMatrix {
    vw_product(w, VwForm::U)
}

/// `Γ'(w)`: the left-to-right product of `V_ij^±1`.
pub fn vw_gassner_prime(w: &VwWord) -> LaurentMatrix {
    vw_product(w, VwForm::V)
}

pub fn vw_gassner_inverse(w: &VwWord) -> LaurentMatrix {
    vw_gassner(&w.invert())
}

/// `D = diag(1 - t_1, ..., 1 - t_n)`.
pub fn d_matrix(n: usize) -> LaurentMatrix {
    LaurentMatrix::diagonal((1..=n).map(|i| LaurentPoly::one_minus_var(n, i)).collect())
        .expect("uniform variable count")
}

/// The braid unitarity identity with `τ = ι`, applied to `Γ(w)`.
pub fn verify_vw_unitarity(w: &VwWord) -> UnitarityReport {
    let n = w.strands();
    let omega = omega_cleared(&Permutation::identity(n));
    let lhs = omega
        .numerator()
        .checked_mul(&vw_gassner_inverse(w))
        .expect("same shape");
    let rhs = vw_gassner(w)
        .bar_transpose()
        .checked_mul(omega.numerator())
        .expect("same shape");
    UnitarityReport::new(lhs, rhs)
}
