//! Braid words, strand permutations, and over-strand annotation.
//!
//! Strands are labelled `1..=n` at the bottom of the braid. Positions and
//! strand labels are both 1-based throughout this module.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Sign {
    Positive,
    Negative,
}

impl Sign {
    pub fn flip(self) -> Self {
        match self {
            Sign::Positive => Sign::Negative,
            Sign::Negative => Sign::Positive,
        }
    }

    pub fn as_i32(self) -> i32 {
        match self {
            Sign::Positive => 1,
            Sign::Negative => -1,
        }
    }
}

/// One letter `σ_position^sign`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Crossing {
    pub position: usize,
    pub sign: Sign,
}

impl Crossing {
    pub fn new(position: usize, sign: Sign) -> Self {
        Crossing { position, sign }
    }

    fn signed(self) -> i64 {
        self.position as i64 * self.sign.as_i32() as i64
    }
}

/// A strand permutation in one-line form: `image[p - 1]` is the label of the
/// strand at position `p`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation((1..=n).collect())
    }

    pub fn from_image(image: Vec<usize>) -> Result<Self> {
        let n = image.len();
        let mut seen = vec![false; n];
        for &x in &image {
            if x == 0 || x > n || seen[x - 1] {
                return Err(Error::InvalidArgument(format!(
                    "{image:?} is not a permutation of 1..={n}"
                )));
            }
            seen[x - 1] = true;
        }
        Ok(Permutation(image))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn image(&self) -> &[usize] {
        &self.0
    }

    /// Label of the strand at 1-based `position`.
    pub fn at(&self, position: usize) -> usize {
        self.0[position - 1]
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(k, &x)| x == k + 1)
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.0.len()];
        for (k, &x) in self.0.iter().enumerate() {
            inv[x - 1] = k + 1;
        }
        Permutation(inv)
    }

    /// `p -> self[other[p]]`.
    pub fn compose(&self, other: &Self) -> Self {
        Permutation(other.0.iter().map(|&q| self.at(q)).collect())
    }

    /// Swaps the strands at 1-based positions `p` and `p + 1`.
    fn swap_adjacent(&mut self, p: usize) {
        self.0.swap(p - 1, p);
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (k, x) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{x}")?;
        }
        f.write_str("]")
    }
}

/// A word `σ_{i_1}^{s_1} ... σ_{i_k}^{s_k}` in the braid group on `strands`
/// strands, read left to right.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct BraidWord {
    strands: usize,
    crossings: Vec<Crossing>,
}

impl BraidWord {
    pub fn new(strands: usize, crossings: Vec<Crossing>) -> Result<Self> {
        if strands == 0 {
            return Err(Error::InvalidArgument("a braid needs at least one strand".into()));
        }
        for c in &crossings {
            if c.position == 0 || c.position >= strands {
                return Err(Error::IndexOutOfRange {
                    what: "crossing position",
                    index: c.position,
                    max: strands - 1,
                });
            }
        }
        Ok(BraidWord { strands, crossings })
    }

    pub fn empty(strands: usize) -> Self {
        assert!(strands > 0, "a braid needs at least one strand");
        BraidWord {
            strands,
            crossings: Vec::new(),
        }
    }

    /// From signed generator indices: `m > 0` is `σ_m`, `m < 0` is `σ_|m|^-1`.
    pub fn from_signed(strands: usize, letters: &[i32]) -> Result<Self> {
        let crossings = letters
            .iter()
            .map(|&m| {
                if m == 0 {
                    return Err(Error::InvalidArgument("generator index 0".into()));
                }
                let sign = if m > 0 { Sign::Positive } else { Sign::Negative };
                Ok(Crossing::new(m.unsigned_abs() as usize, sign))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(strands, crossings)
    }

    /// Parses whitespace- or comma-separated letters. Each letter is a nonzero
    /// integer (`3` is `σ_3`, `-3` is `σ_3^-1`) or an alias `s3` / `S3`.
    pub fn parse(text: &str, strands: usize) -> Result<Self> {
        if strands == 0 {
            return Err(Error::InvalidArgument("a braid needs at least one strand".into()));
        }
        let mut crossings = Vec::new();
        for (offset, token) in tokens(text) {
            let fail = |message: String| Error::Parse {
                position: offset,
                token: token.to_string(),
                message,
            };
            let (sign, digits) = if let Some(rest) = token.strip_prefix('s') {
                (Sign::Positive, rest)
            } else if let Some(rest) = token.strip_prefix('S') {
                (Sign::Negative, rest)
            } else if let Some(rest) = token.strip_prefix('-') {
                (Sign::Negative, rest)
            } else if let Some(rest) = token.strip_prefix('+') {
                (Sign::Positive, rest)
            } else {
                (Sign::Positive, token)
            };
            if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
                return Err(fail("expected a nonzero integer or s<k>/S<k>".into()));
            }
            let position: usize = digits
                .parse()
                .map_err(|_| fail("generator index too large".into()))?;
            if position == 0 {
                return Err(fail("generator index must be nonzero".into()));
            }
            if position >= strands {
                return Err(fail(format!(
                    "generator index must be at most {} for {strands} strands",
                    strands - 1
                )));
            }
            crossings.push(Crossing::new(position, sign));
        }
        Ok(BraidWord { strands, crossings })
    }

    pub fn strands(&self) -> usize {
        self.strands
    }

    pub fn crossings(&self) -> &[Crossing] {
        &self.crossings
    }

    pub fn len(&self) -> usize {
        self.crossings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.crossings.is_empty()
    }

    /// The group inverse: letters reversed, signs flipped.
    pub fn invert(&self) -> Self {
        BraidWord {
            strands: self.strands,
            crossings: self
                .crossings
                .iter()
                .rev()
                .map(|c| Crossing::new(c.position, c.sign.flip()))
                .collect(),
        }
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
        Ok(BraidWord {
            strands: self.strands,
            crossings,
        })
    }

    pub fn annotate(&self) -> AnnotatedBraid {
        self.annotate_from(&Permutation::identity(self.strands))
    }

    /// Annotates the word as if its bottom carried the strand labels `start`
    /// (as happens for the right factor of a product).
    ///
    /// At `σ_i` the strand at position `i` passes over; at `σ_i^-1` the
    /// strand at position `i + 1` does.
    pub fn annotate_from(&self, start: &Permutation) -> AnnotatedBraid {
        assert_eq!(start.len(), self.strands, "permutation size mismatch");
        let mut pi = start.clone();
        let mut over = Vec::with_capacity(self.crossings.len());
        for c in &self.crossings {
            let j = match c.sign {
                Sign::Positive => pi.at(c.position),
                Sign::Negative => pi.at(c.position + 1),
            };
            over.push(j);
            pi.swap_adjacent(c.position);
        }
        AnnotatedBraid {
            word: self.clone(),
            over,
            tau: pi,
        }
    }

    pub fn permutation(&self) -> Permutation {
        let mut pi = Permutation::identity(self.strands);
        for c in &self.crossings {
            pi.swap_adjacent(c.position);
        }
        pi
    }

    pub fn is_pure(&self) -> bool {
        self.permutation().is_identity()
    }

    /// Uniformly random letters; deterministic in `seed`.
    pub fn random(strands: usize, length: usize, seed: u64) -> Result<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Self::random_with(strands, length, &mut rng)
    }

    pub fn random_with<R: Rng>(strands: usize, length: usize, rng: &mut R) -> Result<Self> {
        if strands < 2 {
            return Err(Error::InvalidArgument(
                "random words need at least two strands".into(),
            ));
        }
        let crossings = (0..length)
            .map(|_| {
                let position = rng.gen_range(1..strands);
                let sign = if rng.gen_bool(0.5) {
                    Sign::Positive
                } else {
                    Sign::Negative
                };
                Crossing::new(position, sign)
            })
            .collect();
        Ok(BraidWord { strands, crossings })
    }

    /// The band generator `A_ij = (σ_{j-1}...σ_{i+1}) σ_i^2 (σ_{i+1}^-1...σ_{j-1}^-1)`,
    /// or its inverse, for `1 <= i < j <= strands`.
    pub fn band(strands: usize, i: usize, j: usize, sign: Sign) -> Result<Self> {
        if !(1 <= i && i < j && j <= strands) {
            return Err(Error::InvalidArgument(format!(
                "band generator needs 1 <= i < j <= {strands}, got ({i}, {j})"
            )));
        }
        let mut crossings: Vec<Crossing> = (i + 1..j)
            .rev()
            .map(|p| Crossing::new(p, Sign::Positive))
            .collect();
        crossings.push(Crossing::new(i, Sign::Positive));
        crossings.push(Crossing::new(i, Sign::Positive));
        crossings.extend((i + 1..j).map(|p| Crossing::new(p, Sign::Negative)));
        let a = BraidWord { strands, crossings };
        Ok(match sign {
            Sign::Positive => a,
            Sign::Negative => a.invert(),
        })
    }

    /// A product of `bands` random band generators (or their inverses).
    pub fn random_pure(strands: usize, bands: usize, seed: u64) -> Result<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Self::random_pure_with(strands, bands, &mut rng)
    }

    pub fn random_pure_with<R: Rng>(strands: usize, bands: usize, rng: &mut R) -> Result<Self> {
        if strands < 2 {
            return Err(Error::InvalidArgument(
                "random pure braids need at least two strands".into(),
            ));
        }
        let mut word = BraidWord::empty(strands);
        for _ in 0..bands {
            let i = rng.gen_range(1..strands);
            let j = rng.gen_range(i + 1..=strands);
            let sign = if rng.gen_bool(0.5) {
                Sign::Positive
            } else {
                Sign::Negative
            };
            word = word.concat(&Self::band(strands, i, j, sign)?)?;
        }
        debug_assert!(word.is_pure());
        Ok(word)
    }
}

impl fmt::Display for BraidWord {
    /// Signed-integer form, e.g. `1 -3 2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, c) in self.crossings.iter().enumerate() {
            if k > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{}", c.signed())?;
        }
        Ok(())
    }
}

/// Splits on whitespace and commas, yielding `(byte offset, token)`.
pub(crate) fn tokens(text: &str) -> impl Iterator<Item = (usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (k, ch) in text.char_indices() {
        if ch.is_whitespace() || ch == ',' {
            if let Some(s) = start.take() {
                out.push((s, &text[s..k]));
            }
        } else if start.is_none() {
            start = Some(k);
        }
    }
    if let Some(s) = start {
        out.push((s, &text[s..]));
    }
    out.into_iter()
}

/// A braid word together with its over-strand labels and the permutation it
/// induces (read at the top).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AnnotatedBraid {
    pub word: BraidWord,
    pub over: Vec<usize>,
    pub tau: Permutation,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b0() -> BraidWord {
        BraidWord::from_signed(4, &[1, -3, 2]).unwrap()
    }

    #[test]
    fn annotate_examples() {
        let w = BraidWord::from_signed(3, &[1, 2, 1]).unwrap();
        assert_eq!(w.annotate().over, vec![1, 1, 2]);

        let a = b0().annotate();
        assert_eq!(a.over, vec![1, 4, 1]);
        assert_eq!(a.tau.image(), &[2, 4, 1, 3]);

        let e = BraidWord::empty(3).annotate();
        assert!(e.over.is_empty());
        assert!(e.tau.is_identity());
    }

    #[test]
    fn invert_examples() {
        assert_eq!(b0().invert(), BraidWord::from_signed(4, &[-2, 3, -1]).unwrap());
        assert_eq!(BraidWord::empty(4).invert(), BraidWord::empty(4));
        assert_eq!(b0().invert().annotate().tau.image(), &[3, 1, 4, 2]);
    }

    #[test]
    fn concat_examples() {
        let b = b0();
        assert!(b.concat(&b.invert()).unwrap().is_pure());
        assert_eq!(BraidWord::empty(4).concat(&b).unwrap(), b);
        let s1 = BraidWord::from_signed(3, &[1]).unwrap();
        let s2 = BraidWord::from_signed(3, &[2]).unwrap();
        let w = s1.concat(&s2).unwrap();
        assert_eq!(w.to_string(), "1 2");
        assert_eq!(w.annotate().tau.image(), &[2, 3, 1]);
        assert!(s1.concat(&BraidWord::empty(4)).is_err());
    }

    #[test]
    fn purity_examples() {
        assert!(BraidWord::from_signed(2, &[1, 1]).unwrap().is_pure());
        assert!(!BraidWord::from_signed(2, &[1]).unwrap().is_pure());
        let a13 = BraidWord::band(3, 1, 3, Sign::Positive).unwrap();
        assert_eq!(a13, BraidWord::from_signed(3, &[2, 1, 1, -2]).unwrap());
        assert!(a13.is_pure());
    }

    #[test]
    fn parse_examples() {
        assert_eq!(BraidWord::parse("1 -3 2", 4).unwrap(), b0());
        assert_eq!(BraidWord::parse("1,-3, 2", 4).unwrap(), b0());
        assert_eq!(BraidWord::parse("s1 S3 s2", 4).unwrap(), b0());
        assert_eq!(BraidWord::parse("", 5).unwrap(), BraidWord::empty(5));
        assert_eq!(BraidWord::parse("  ,  ", 5).unwrap(), BraidWord::empty(5));
    }

    #[test]
    fn parse_errors_name_the_token() {
        match BraidWord::parse("1 4", 4) {
            Err(Error::Parse { position, token, .. }) => {
                assert_eq!(position, 2);
                assert_eq!(token, "4");
            }
            other => panic!("unexpected {other:?}"),
        }
        for bad in ["0", "x", "1 -", "s", "--1", "1.5", "-0"] {
            assert!(
                matches!(BraidWord::parse(bad, 4), Err(Error::Parse { .. })),
                "{bad:?} should not parse"
            );
        }
    }

    #[test]
    fn random_words_are_deterministic() {
        assert!(BraidWord::random(4, 0, 7).unwrap().is_empty());
        assert_eq!(
            BraidWord::random(5, 30, 42).unwrap(),
            BraidWord::random(5, 30, 42).unwrap()
        );
        assert_ne!(
            BraidWord::random(5, 30, 42).unwrap(),
            BraidWord::random(5, 30, 43).unwrap()
        );
        assert!(BraidWord::random(1, 3, 0).is_err());
        for seed in 0..50 {
            assert!(BraidWord::random_pure(5, 4, seed).unwrap().is_pure());
        }
    }

    #[test]
    fn permutation_validation() {
        assert!(Permutation::from_image(vec![2, 1, 3]).is_ok());
        assert!(Permutation::from_image(vec![2, 2, 3]).is_err());
        assert!(Permutation::from_image(vec![0, 1]).is_err());
        assert_eq!(Permutation::from_image(vec![2, 4, 1, 3]).unwrap().to_string(), "[2,4,1,3]");
    }
}
