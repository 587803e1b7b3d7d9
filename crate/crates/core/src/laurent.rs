//! Sparse multivariate Laurent polynomials over the integers.
//!
//! A [`LaurentPoly`] lives in `Z[t1^±1, ..., tn^±1]` for a fixed variable
//! count `n`. Terms are kept in canonical form: no zero coefficients, and
//! stored in the same order they are printed, so the printed string is a
//! bit-exact fingerprint of the value.
//!
//! The canonical order is lexicographic over variable slots read from the
//! last variable to the first, where each slot orders its exponents as
//! `0, 1, -1, 2, -2, ...`. A constant therefore prints first, and
//! `(1 - t1)(1 - t2)` prints as `1 - t1 - t2 + t1*t2`:
//!
//! ```
//! use gassner::laurent::LaurentPoly;
//! let p = LaurentPoly::parse("t1*t2^-1 - t1 + 1", 2).unwrap();
//! assert_eq!(p.to_string(), "1 - t1 + t1*t2^-1");
//! ```

use std::cmp::Ordering;
use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Exponent vector of a monomial; slot `k` holds the exponent of `t(k+1)`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Exponents(Box<[i32]>);

fn zigzag(e: i32) -> u64 {
    if e > 0 {
        2 * e as u64 - 1
    } else {
        2 * (-(e as i64)) as u64
    }
}

impl Ord for Exponents {
    fn cmp(&self, other: &Self) -> Ordering {
        for (a, b) in self.0.iter().zip(other.0.iter()).rev() {
            match zigzag(*a).cmp(&zigzag(*b)) {
                Ordering::Equal => continue,
                ord => return ord,
            }
        }
        self.0.len().cmp(&other.0.len())
    }
}

impl PartialOrd for Exponents {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Exponents {
    pub fn new(exps: impl Into<Box<[i32]>>) -> Self {
        Exponents(exps.into())
    }

    pub fn zero(vars: usize) -> Self {
        Exponents(vec![0; vars].into_boxed_slice())
    }

    pub fn as_slice(&self) -> &[i32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    fn add(&self, other: &Self) -> Self {
        Exponents(self.0.iter().zip(other.0.iter()).map(|(a, b)| a + b).collect())
    }

    fn negated(&self) -> Self {
        Exponents(self.0.iter().map(|e| -e).collect())
    }
}

/// An element of `Z[t1^±1, ..., tn^±1]`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct LaurentPoly {
    vars: usize,
    terms: BTreeMap<Exponents, BigInt>,
}

impl LaurentPoly {
    pub fn zero(vars: usize) -> Self {
        LaurentPoly {
            vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(vars: usize) -> Self {
        Self::constant(vars, 1)
    }

    pub fn constant(vars: usize, c: impl Into<BigInt>) -> Self {
        Self::monomial(Exponents::zero(vars), c)
    }

    /// `t_index^power`, with `index` 1-based.
    ///
    /// Panics if `index` is out of `1..=vars`.
    pub fn var_pow(vars: usize, index: usize, power: i32) -> Self {
        assert!(
            (1..=vars).contains(&index),
            "variable t{index} out of range for {vars} variables"
        );
        let mut e = vec![0; vars];
        e[index - 1] = power;
        Self::monomial(Exponents::new(e), 1)
    }

    pub fn var(vars: usize, index: usize) -> Self {
        Self::var_pow(vars, index, 1)
    }

    /// `1 - t_index`.
    pub fn one_minus_var(vars: usize, index: usize) -> Self {
        &Self::one(vars) - &Self::var(vars, index)
    }

    pub fn monomial(exps: Exponents, c: impl Into<BigInt>) -> Self {
        let vars = exps.len();
        let c = c.into();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exps, c);
        }
        LaurentPoly { vars, terms }
    }

    /// Builds a polynomial from `(exponents, coefficient)` pairs, summing
    /// repeated monomials.
    pub fn from_terms<I, C>(vars: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<i32>, C)>,
        C: Into<BigInt>,
    {
        let mut p = Self::zero(vars);
        for (e, c) in terms {
            if e.len() != vars {
                return Err(Error::VariableMismatch {
                    left: vars,
                    right: e.len(),
                });
            }
            p.accumulate(Exponents::new(e), c.into());
        }
        Ok(p)
    }

    /// `Δ = (1 - t1)(1 - t2)...(1 - tn)`.
    pub fn delta(vars: usize) -> Self {
        (1..=vars).fold(Self::one(vars), |acc, i| {
            &acc * &Self::one_minus_var(vars, i)
        })
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .iter()
                .all(|(e, c)| e.is_constant() && c.is_one())
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in canonical order.
    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &BigInt)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, exps: &[i32]) -> BigInt {
        self.terms
            .get(&Exponents::new(exps.to_vec()))
            .cloned()
            .unwrap_or_else(BigInt::zero)
    }

    fn accumulate(&mut self, e: Exponents, c: BigInt) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn check_vars(&self, other: &Self) -> Result<()> {
        if self.vars != other.vars {
            return Err(Error::VariableMismatch {
                left: self.vars,
                right: other.vars,
            });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check_vars(other)?;
        let (big, small) = if self.terms.len() >= other.terms.len() {
            (self, other)
        } else {
            (other, self)
        };
        let mut out = big.clone();
        for (e, c) in &small.terms {
            out.accumulate(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.check_vars(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.accumulate(e.clone(), -c);
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check_vars(other)?;
        let mut out = Self::zero(self.vars);
        if self.is_zero() || other.is_zero() {
            return Ok(out);
        }
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                out.accumulate(ea.add(eb), ca * cb);
            }
        }
        Ok(out)
    }

    /// Adds `a * b` into `self` without materialising the product.
    pub(crate) fn add_product(&mut self, a: &Self, b: &Self) {
        debug_assert!(a.vars == self.vars && b.vars == self.vars);
        for (ea, ca) in &a.terms {
            for (eb, cb) in &b.terms {
                self.accumulate(ea.add(eb), ca * cb);
            }
        }
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero(self.vars);
        }
        LaurentPoly {
            vars: self.vars,
            terms: self.terms.iter().map(|(e, x)| (e.clone(), x * c)).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::one(self.vars), |acc, _| &acc * self)
    }

    /// The involution `t_i -> t_i^-1` for every `i`.
    pub fn bar(&self) -> Self {
        LaurentPoly {
            vars: self.vars,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.negated(), c.clone()))
                .collect(),
        }
    }

    /// Substitutes `t_j -> t_{sigma[j]}` (1-based images in `sigma`).
    pub fn relabel(&self, sigma: &[usize]) -> Result<Self> {
        if sigma.len() != self.vars {
            return Err(Error::VariableMismatch {
                left: self.vars,
                right: sigma.len(),
            });
        }
        let mut out = Self::zero(self.vars);
        for (e, c) in &self.terms {
            let mut ne = vec![0; self.vars];
            for (j, &x) in e.as_slice().iter().enumerate() {
                ne[sigma[j] - 1] += x;
            }
            out.accumulate(Exponents::new(ne), c.clone());
        }
        Ok(out)
    }

    /// Collapses every variable to a single `t` by summing exponents.
    pub fn collapse(&self) -> Self {
        let mut out = Self::zero(1);
        for (e, c) in &self.terms {
            let d: i32 = e.as_slice().iter().sum();
            out.accumulate(Exponents::new(vec![d]), c.clone());
        }
        out
    }

    /// Evaluates at a point with nonzero complex coordinates.
    pub fn eval(&self, point: &[Complex64]) -> Result<Complex64> {
        if point.len() != self.vars {
            return Err(Error::VariableMismatch {
                left: self.vars,
                right: point.len(),
            });
        }
        if let Some(k) = point.iter().position(|z| z.norm_sqr() == 0.0) {
            return Err(Error::ZeroCoordinate(k + 1));
        }
        Ok(self.terms.iter().fold(Complex64::zero(), |acc, (e, c)| {
            let coeff = c.to_f64().unwrap_or(f64::NAN);
            let m = e
                .as_slice()
                .iter()
                .zip(point)
                .fold(Complex64::one(), |m, (&x, z)| m * z.powi(x));
            acc + m * coeff
        }))
    }

    /// Parses the canonical printed form (terms may appear in any order;
    /// repeated monomials are summed).
    pub fn parse(text: &str, vars: usize) -> Result<Self> {
        Parser::new(text, vars).parse()
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (e, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            match (k, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let mag = c.abs();
            if e.is_constant() {
                write!(f, "{mag}")?;
                continue;
            }
            if !mag.is_one() {
                write!(f, "{mag}*")?;
            }
            let mut first = true;
            for (slot, &x) in e.as_slice().iter().enumerate() {
                if x == 0 {
                    continue;
                }
                if !first {
                    f.write_str("*")?;
                }
                first = false;
                write!(f, "t{}", slot + 1)?;
                if x != 1 {
                    write!(f, "^{x}")?;
                }
            }
        }
        Ok(())
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl $tr<&LaurentPoly> for &LaurentPoly {
            type Output = LaurentPoly;
            /// Panics on a variable-count mismatch; use the `checked_*`
            /// methods to get an error instead.
            fn $method(self, rhs: &LaurentPoly) -> LaurentPoly {
                self.$checked(rhs).expect("variable count mismatch")
            }
        }
        impl $tr<LaurentPoly> for LaurentPoly {
            type Output = LaurentPoly;
            fn $method(self, rhs: LaurentPoly) -> LaurentPoly {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, checked_add);
forward_binop!(Sub, sub, checked_sub);
forward_binop!(Mul, mul, checked_mul);

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            vars: self.vars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }
}

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        -&self
    }
}

struct Parser<'a> {
    src: &'a str,
    bytes: &'a [u8],
    pos: usize,
    vars: usize,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str, vars: usize) -> Self {
        Parser {
            src,
            bytes: src.as_bytes(),
            pos: 0,
            vars,
        }
    }

    fn err(&self, message: impl Into<String>) -> Error {
        let rest = &self.src[self.pos.min(self.src.len())..];
        Error::Parse {
            position: self.pos,
            token: rest.chars().take(8).collect(),
            message: message.into(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn digits(&mut self) -> Result<&'a str> {
        let start = self.pos;
        while self.peek().is_some_and(|b| b.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected digits"));
        }
        Ok(&self.src[start..self.pos])
    }

    fn parse(mut self) -> Result<LaurentPoly> {
        let mut out = LaurentPoly::zero(self.vars);
        self.skip_ws();
        if self.peek().is_none() {
            return Err(self.err("empty polynomial"));
        }
        let mut first = true;
        loop {
            self.skip_ws();
            let Some(b) = self.peek() else { break };
            let negative = match b {
                b'+' | b'-' => {
                    self.pos += 1;
                    self.skip_ws();
                    b == b'-'
                }
                _ if first => false,
                _ => return Err(self.err("expected '+' or '-' between terms")),
            };
            first = false;
            let (e, c) = self.term()?;
            out.accumulate(e, if negative { -c } else { c });
        }
        Ok(out)
    }

    fn term(&mut self) -> Result<(Exponents, BigInt)> {
        let mut coeff = BigInt::one();
        let mut exps = vec![0i32; self.vars];
        let mut factors = 0;
        loop {
            self.skip_ws();
            match self.peek() {
                Some(b) if b.is_ascii_digit() => {
                    let d = self.digits()?;
                    coeff *= d.parse::<BigInt>().map_err(|e| self.err(e.to_string()))?;
                }
                Some(b't') => {
                    self.pos += 1;
                    let at = self.pos;
                    let idx: usize = self
                        .digits()?
                        .parse()
                        .map_err(|_| self.err("bad variable index"))?;
                    if idx == 0 || idx > self.vars {
                        self.pos = at;
                        return Err(self.err(format!(
                            "variable t{idx} out of range for {} variables",
                            self.vars
                        )));
                    }
                    let mut power = 1i32;
                    if self.peek() == Some(b'^') {
                        self.pos += 1;
                        let neg = self.peek() == Some(b'-');
                        if neg {
                            self.pos += 1;
                        }
                        let p: i32 = self
                            .digits()?
                            .parse()
                            .map_err(|_| self.err("exponent too large"))?;
                        power = if neg { -p } else { p };
                    }
                    exps[idx - 1] += power;
                }
                _ => return Err(self.err("expected coefficient or variable")),
            }
            factors += 1;
            self.skip_ws();
            if self.peek() == Some(b'*') {
                self.pos += 1;
            } else {
                break;
            }
        }
        debug_assert!(factors > 0);
        Ok((Exponents::new(exps), coeff))
    }
}
