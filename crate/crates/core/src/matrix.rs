//! Dense square matrices over the Laurent ring.
//!
//! Rows and columns are 0-based here. [`ScaledMatrix`] pairs a matrix with a
//! scalar denominator so that matrices with entries like `(1 - t)^-1` can be
//! compared exactly by cross-multiplication, without a fraction field.

use std::fmt;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::laurent::LaurentPoly;

/// Largest dimension accepted by [`LaurentMatrix::det`].
pub const DET_MAX_DIM: usize = 8;

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct LaurentMatrix {
    dim: usize,
    vars: usize,
    entries: Vec<LaurentPoly>,
}

impl LaurentMatrix {
    pub fn zeros(dim: usize, vars: usize) -> Self {
        LaurentMatrix {
            dim,
            vars,
            entries: vec![LaurentPoly::zero(vars); dim * dim],
        }
    }

    pub fn identity(dim: usize, vars: usize) -> Self {
        let mut m = Self::zeros(dim, vars);
        for i in 0..dim {
            m.set(i, i, LaurentPoly::one(vars));
        }
        m
    }

    pub fn diagonal(diag: Vec<LaurentPoly>) -> Result<Self> {
        let dim = diag.len();
        let vars = diag.first().map_or(0, LaurentPoly::vars);
        let mut m = Self::zeros(dim, vars);
        for (i, d) in diag.into_iter().enumerate() {
            if d.vars() != vars {
                return Err(Error::VariableMismatch {
                    left: vars,
                    right: d.vars(),
                });
            }
            m.set(i, i, d);
        }
        Ok(m)
    }

    pub fn from_rows(rows: Vec<Vec<LaurentPoly>>) -> Result<Self> {
        let dim = rows.len();
        if dim == 0 {
            return Err(Error::InvalidArgument("empty matrix".into()));
        }
        let vars = rows[0].first().map_or(0, LaurentPoly::vars);
        let mut entries = Vec::with_capacity(dim * dim);
        for row in rows {
            if row.len() != dim {
                return Err(Error::DimensionMismatch {
                    left: dim,
                    right: row.len(),
                });
            }
            for p in row {
                if p.vars() != vars {
                    return Err(Error::VariableMismatch {
                        left: vars,
                        right: p.vars(),
                    });
                }
                entries.push(p);
            }
        }
        Ok(LaurentMatrix { dim, vars, entries })
    }

    /// Parses a grid of canonical polynomial strings.
    pub fn parse_rows<S: AsRef<str>>(rows: &[Vec<S>], vars: usize) -> Result<Self> {
        let rows = rows
            .iter()
            .map(|r| {
                r.iter()
                    .map(|s| LaurentPoly::parse(s.as_ref(), vars))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let m = Self::from_rows(rows)?;
        Ok(LaurentMatrix { vars, ..m })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn get(&self, row: usize, col: usize) -> &LaurentPoly {
        &self.entries[row * self.dim + col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: LaurentPoly) {
        assert_eq!(value.vars(), self.vars, "variable count mismatch");
        self.entries[row * self.dim + col] = value;
    }

    pub fn rows(&self) -> impl Iterator<Item = &[LaurentPoly]> {
        self.entries.chunks(self.dim.max(1))
    }

    pub fn is_identity(&self) -> bool {
        self == &Self::identity(self.dim, self.vars)
    }

    fn check_shape(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: other.dim,
            });
        }
        if self.vars != other.vars {
            return Err(Error::VariableMismatch {
                left: self.vars,
                right: other.vars,
            });
        }
        Ok(())
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check_shape(other)?;
        let n = self.dim;
        let mut out = Self::zeros(n, self.vars);
        for i in 0..n {
            for j in 0..n {
                let a = self.get(i, j);
                if a.is_zero() {
                    continue;
                }
                for k in 0..n {
                    let b = other.get(j, k);
                    if !b.is_zero() {
                        out.entries[i * n + k].add_product(a, b);
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check_shape(other)?;
        Ok(self.zip_with(other, |a, b| a + b))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.check_shape(other)?;
        Ok(self.zip_with(other, |a, b| a - b))
    }

    fn zip_with(&self, other: &Self, f: impl Fn(&LaurentPoly, &LaurentPoly) -> LaurentPoly) -> Self {
        LaurentMatrix {
            dim: self.dim,
            vars: self.vars,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| f(a, b))
                .collect(),
        }
    }

    /// Applies `f` to every entry. The result must keep a uniform variable
    /// count.
    pub fn map(&self, f: impl Fn(&LaurentPoly) -> LaurentPoly) -> Self {
        let entries: Vec<_> = self.entries.iter().map(f).collect();
        let vars = entries.first().map_or(self.vars, LaurentPoly::vars);
        debug_assert!(entries.iter().all(|p| p.vars() == vars));
        LaurentMatrix {
            dim: self.dim,
            vars,
            entries,
        }
    }

    pub fn scale(&self, c: &LaurentPoly) -> Result<Self> {
        if c.vars() != self.vars {
            return Err(Error::VariableMismatch {
                left: self.vars,
                right: c.vars(),
            });
        }
        Ok(self.map(|p| p * c))
    }

    pub fn scale_int(&self, c: &BigInt) -> Self {
        self.map(|p| p.scale(c))
    }

    pub fn transpose(&self) -> Self {
        let n = self.dim;
        let mut out = self.clone();
        for i in 0..n {
            for j in 0..n {
                out.entries[i * n + j] = self.get(j, i).clone();
            }
        }
        out
    }

    pub fn bar(&self) -> Self {
        self.map(LaurentPoly::bar)
    }

    /// Entrywise `t_i -> t_i^-1` followed by transposition.
    pub fn bar_transpose(&self) -> Self {
        self.transpose().bar()
    }

    /// Substitutes `t_j -> t_{sigma[j]}` in every entry (1-based images).
    pub fn relabel(&self, sigma: &[usize]) -> Result<Self> {
        let entries = self
            .entries
            .iter()
            .map(|p| p.relabel(sigma))
            .collect::<Result<Vec<_>>>()?;
        Ok(LaurentMatrix { entries, ..*self })
    }

    /// Collapses all variables to a single `t`.
    pub fn collapse(&self) -> Self {
        LaurentMatrix {
            dim: self.dim,
            vars: 1,
            entries: self.entries.iter().map(LaurentPoly::collapse).collect(),
        }
    }

    /// Determinant by cofactor expansion, memoised over column subsets.
    pub fn det(&self) -> Result<LaurentPoly> {
        let n = self.dim;
        if n > DET_MAX_DIM {
            return Err(Error::UnsupportedSize {
                n,
                max: DET_MAX_DIM,
            });
        }
        // minors[mask]: determinant of rows 0..popcount(mask) restricted to the
        // columns in mask.
        let mut minors: Vec<Option<LaurentPoly>> = vec![None; 1 << n];
        minors[0] = Some(LaurentPoly::one(self.vars));
        for mask in 0usize..(1 << n) {
            let Some(base) = minors[mask].take() else {
                continue;
            };
            let row = mask.count_ones() as usize;
            if row == n {
                minors[mask] = Some(base);
                continue;
            }
            if base.is_zero() {
                minors[mask] = Some(base);
                continue;
            }
            for col in 0..n {
                if mask & (1 << col) != 0 {
                    continue;
                }
                let a = self.get(row, col);
                if a.is_zero() {
                    continue;
                }
                let higher = (mask >> (col + 1)).count_ones();
                let term = if higher % 2 == 0 { &base * a } else { -(&base * a) };
                let slot = &mut minors[mask | (1 << col)];
                *slot = Some(match slot.take() {
                    Some(acc) => &acc + &term,
                    None => term,
                });
            }
            minors[mask] = Some(base);
        }
        Ok(minors[(1 << n) - 1]
            .take()
            .unwrap_or_else(|| LaurentPoly::zero(self.vars)))
    }

    /// True iff every column sums to 1, i.e. the all-ones row vector is fixed.
    pub fn ones_fixed(&self) -> bool {
        (0..self.dim).all(|c| {
            let sum = (0..self.dim).fold(LaurentPoly::zero(self.vars), |acc, r| {
                &acc + self.get(r, c)
            });
            sum.is_one()
        })
    }

    /// First `(row, col)` where the two matrices differ.
    pub fn first_difference(&self, other: &Self) -> Option<(usize, usize)> {
        if self.dim != other.dim {
            return Some((0, 0));
        }
        self.entries
            .iter()
            .zip(&other.entries)
            .position(|(a, b)| a != b)
            .map(|k| (k / self.dim, k % self.dim))
    }

    pub fn to_strings(&self) -> Vec<Vec<String>> {
        self.rows()
            .map(|r| r.iter().map(ToString::to_string).collect())
            .collect()
    }

    pub fn to_json(&self) -> MatrixJson {
        MatrixJson {
            n: self.dim,
            entries: self.to_strings(),
        }
    }

    pub fn from_json(json: &MatrixJson, vars: usize) -> Result<Self> {
        let m = Self::parse_rows(&json.entries, vars)?;
        if m.dim != json.n {
            return Err(Error::DimensionMismatch {
                left: json.n,
                right: m.dim,
            });
        }
        Ok(m)
    }
}

impl fmt::Display for LaurentMatrix {
    /// Column-aligned plain-text grid.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells = self.to_strings();
        let widths: Vec<usize> = (0..self.dim)
            .map(|c| cells.iter().map(|r| r[c].len()).max().unwrap_or(0))
            .collect();
        for row in &cells {
            f.write_str("[ ")?;
            for (c, cell) in row.iter().enumerate() {
                if c > 0 {
                    f.write_str(" | ")?;
                }
                write!(f, "{cell:<w$}", w = widths[c])?;
            }
            f.write_str(" ]\n")?;
        }
        Ok(())
    }
}

/// Serialized matrix: `{"n": k, "entries": [[canonical-string, ...], ...]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub n: usize,
    pub entries: Vec<Vec<String>>,
}

/// `numerator / denominator` with a scalar, nonzero denominator.
#[derive(Clone, Debug)]
pub struct ScaledMatrix {
    numerator: LaurentMatrix,
    denominator: LaurentPoly,
}

impl ScaledMatrix {
    pub fn new(numerator: LaurentMatrix, denominator: LaurentPoly) -> Result<Self> {
        if denominator.is_zero() {
            return Err(Error::InvalidArgument("zero denominator".into()));
        }
        if denominator.vars() != numerator.vars() {
            return Err(Error::VariableMismatch {
                left: numerator.vars(),
                right: denominator.vars(),
            });
        }
        Ok(ScaledMatrix {
            numerator,
            denominator,
        })
    }

    pub fn numerator(&self) -> &LaurentMatrix {
        &self.numerator
    }

    pub fn denominator(&self) -> &LaurentPoly {
        &self.denominator
    }

    pub fn dim(&self) -> usize {
        self.numerator.dim()
    }

    /// Exact equality as fractions: `a.num * b.den == b.num * a.den`.
    pub fn scaled_equals(&self, other: &Self) -> Result<bool> {
        let lhs = self.numerator.scale(&other.denominator)?;
        let rhs = other.numerator.scale(&self.denominator)?;
        lhs.check_shape(&rhs)?;
        Ok(lhs == rhs)
    }

    /// `m * self`, same denominator.
    pub fn left_mul(&self, m: &LaurentMatrix) -> Result<Self> {
        Ok(ScaledMatrix {
            numerator: m.checked_mul(&self.numerator)?,
            denominator: self.denominator.clone(),
        })
    }

    /// Entrywise bar then transpose, denominator barred as well.
    pub fn bar_transpose(&self) -> Self {
        ScaledMatrix {
            numerator: self.numerator.bar_transpose(),
            denominator: self.denominator.bar(),
        }
    }
}
