//! Randomized sweep over the exact identities satisfied by `Γ`.
//!
//! Every case draws its inputs from its own ChaCha stream (`seed`, case
//! index), so a case can be replayed alone and the sweep can run in parallel
//! while reporting in case order.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::braid::{BraidWord, Crossing, Sign};
use crate::error::Result;
use crate::gassner::{
    d_matrix, expected_det, gassner, gassner_inverse, relabel, verify_unitarity,
    verify_unitarity_variant, vw_gassner, vw_gassner_prime, VwWord,
};
use crate::matrix::DET_MAX_DIM;

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Property {
    BraidRelation,
    FarCommutation,
    Unitarity,
    UnitarityVariant,
    Inverse,
    TwistedProduct,
    Determinant,
    OnesFixed,
    Conjugacy,
}

impl Property {
    pub const ALL: [Property; 9] = [
        Property::BraidRelation,
        Property::FarCommutation,
        Property::Unitarity,
        Property::UnitarityVariant,
        Property::Inverse,
        Property::TwistedProduct,
        Property::Determinant,
        Property::OnesFixed,
        Property::Conjugacy,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Property::BraidRelation => "braid-relation",
            Property::FarCommutation => "far-commutation",
            Property::Unitarity => "unitarity",
            Property::UnitarityVariant => "unitarity-variant",
            Property::Inverse => "inverse",
            Property::TwistedProduct => "twisted-product",
            Property::Determinant => "determinant",
            Property::OnesFixed => "ones-fixed",
            Property::Conjugacy => "conjugacy",
        }
    }
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct SelftestConfig {
    pub max_n: usize,
    pub max_len: usize,
    pub cases: usize,
    pub seed: u64,
}

impl Default for SelftestConfig {
    fn default() -> Self {
        SelftestConfig {
            max_n: 5,
            max_len: 20,
            cases: 500,
            seed: 0,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Tally {
    pub passed: usize,
    pub failed: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Failure {
    pub case: usize,
    pub property: Property,
    pub strands: usize,
    pub input: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct SelftestReport {
    pub config: SelftestConfig,
    pub tallies: BTreeMap<&'static str, Tally>,
    pub failures: Vec<Failure>,
}

impl SelftestReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Runs every case and collects results in case order.
pub fn run(config: &SelftestConfig) -> Result<SelftestReport> {
    if config.max_n < 2 {
        return Err(crate::Error::InvalidArgument(
            "selftest needs max-n of at least 2".into(),
        ));
    }
    let outcomes: Vec<Vec<(Property, Option<Failure>)>> = (0..config.cases)
        .into_par_iter()
        .map(|case| run_case(config, case))
        .collect::<Result<_>>()?;
    let mut tallies: BTreeMap<&'static str, Tally> =
        Property::ALL.iter().map(|p| (p.name(), Tally::default())).collect();
    let mut failures = Vec::new();
    for (property, failure) in outcomes.into_iter().flatten() {
        let t = tallies.get_mut(property.name()).expect("known property");
        match failure {
            None => t.passed += 1,
            Some(f) => {
                t.failed += 1;
                failures.push(f);
            }
        }
    }
    Ok(SelftestReport {
        config: *config,
        tallies,
        failures,
    })
}

/// The RNG for one case.
pub fn case_rng(seed: u64, case: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(case as u64);
    rng
}

fn run_case(config: &SelftestConfig, case: usize) -> Result<Vec<(Property, Option<Failure>)>> {
    let mut rng = case_rng(config.seed, case);
    let n = rng.gen_range(2..=config.max_n);
    let len = rng.gen_range(0..=config.max_len);
    let mut out = Vec::with_capacity(Property::ALL.len());
    let mut record = |property: Property, ok: bool, input: String| {
        let failure = (!ok).then_some(Failure {
            case,
            property,
            strands: n,
            input,
        });
        out.push((property, failure));
    };

    let b = BraidWord::random_with(n, len, &mut rng)?;
    let gamma = gassner(&b);

    if n >= 3 {
        let (lhs, rhs) = relation_pair(n, config.max_len, &mut rng, false)?;
        record(
            Property::BraidRelation,
            gassner(&lhs) == gassner(&rhs),
            format!("{lhs} | {rhs}"),
        );
    }
    if n >= 4 {
        let (lhs, rhs) = relation_pair(n, config.max_len, &mut rng, true)?;
        record(
            Property::FarCommutation,
            gassner(&lhs) == gassner(&rhs),
            format!("{lhs} | {rhs}"),
        );
    }

    record(Property::Unitarity, verify_unitarity(&b).holds, b.to_string());

    let pure = BraidWord::random_pure_with(n, rng.gen_range(0..=3), &mut rng)?;
    record(
        Property::UnitarityVariant,
        verify_unitarity_variant(&pure)?.holds,
        pure.to_string(),
    );

    let inverse_ok = gamma.checked_mul(&gassner_inverse(&b))?.is_identity()
        && gamma
            .checked_mul(&relabel(&gassner(&b.invert()), &b.permutation())?)?
            .is_identity();
    record(Property::Inverse, inverse_ok, b.to_string());

    let a = BraidWord::random_with(n, rng.gen_range(0..=config.max_len / 2), &mut rng)?;
    let c = BraidWord::random_with(n, rng.gen_range(0..=config.max_len / 2), &mut rng)?;
    let twisted = gassner(&a).checked_mul(&relabel(&gassner(&c), &a.permutation())?)?;
    record(
        Property::TwistedProduct,
        gassner(&a.concat(&c)?) == twisted,
        format!("{a} | {c}"),
    );

    if n <= DET_MAX_DIM {
        record(
            Property::Determinant,
            gamma.det()? == expected_det(&b.annotate()),
            b.to_string(),
        );
    }
    record(Property::OnesFixed, gamma.ones_fixed(), b.to_string());

    let w = VwWord::random_with(n, rng.gen_range(0..=config.max_len), &mut rng)?;
    let d = d_matrix(n);
    record(
        Property::Conjugacy,
        d.checked_mul(&vw_gassner_prime(&w))? == vw_gassner(&w).checked_mul(&d)?,
        w.to_string(),
    );
    Ok(out)
}

/// Two words differing by one relation inserted between random context
/// words: `σ_i σ_{i+1} σ_i ↔ σ_{i+1} σ_i σ_{i+1}` (signs shared), or
/// `σ_i^a σ_j^b ↔ σ_j^b σ_i^a` with `|i - j| > 1` when `far` is set.
pub fn relation_pair<R: Rng>(
    n: usize,
    max_len: usize,
    rng: &mut R,
    far: bool,
) -> Result<(BraidWord, BraidWord)> {
    let needed = if far { 4 } else { 3 };
    if n < needed {
        return Err(crate::Error::InvalidArgument(format!(
            "relation needs at least {needed} strands, got {n}"
        )));
    }
    let budget = max_len.saturating_sub(3);
    let left_len = rng.gen_range(0..=budget / 2);
    let right_len = rng.gen_range(0..=budget - budget / 2);
    let left = BraidWord::random_with(n, left_len, rng)?;
    let right = BraidWord::random_with(n, right_len, rng)?;
    let sign = |rng: &mut R| {
        if rng.gen_bool(0.5) {
            Sign::Positive
        } else {
            Sign::Negative
        }
    };
    let (x, y) = if far {
        let i = rng.gen_range(1..n - 2);
        let j = rng.gen_range(i + 2..n);
        let (a, b) = (Crossing::new(i, sign(rng)), Crossing::new(j, sign(rng)));
        let (a, b) = if rng.gen_bool(0.5) { (a, b) } else { (b, a) };
        (vec![a, b], vec![b, a])
    } else {
        let i = rng.gen_range(1..n - 1);
        let s = sign(rng);
        let (p, q) = (Crossing::new(i, s), Crossing::new(i + 1, s));
        (vec![p, q, p], vec![q, p, q])
    };
    let middle = |letters: Vec<Crossing>| BraidWord::new(n, letters);
    let lhs = left.concat(&middle(x)?)?.concat(&right)?;
    let rhs = left.concat(&middle(y)?)?.concat(&right)?;
    Ok((lhs, rhs))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_cases() {
        let r = run(&SelftestConfig {
            cases: 0,
            ..Default::default()
        })
        .unwrap();
        assert!(r.passed());
        assert!(r.tallies.values().all(|t| t.passed == 0 && t.failed == 0));
        assert_eq!(r.tallies.len(), Property::ALL.len());
    }

    #[test]
    fn small_sweep_passes_and_is_deterministic() {
        let config = SelftestConfig {
            max_n: 4,
            max_len: 8,
            cases: 40,
            seed: 11,
        };
        let a = run(&config).unwrap();
        assert!(a.passed(), "{:?}", a.failures);
        assert_eq!(a.tallies["unitarity"].passed, 40);
        let b = run(&config).unwrap();
        assert_eq!(a.tallies, b.tallies);
    }

    #[test]
    fn relation_pairs_differ_as_words() {
        let mut rng = case_rng(3, 0);
        for _ in 0..20 {
            let (l, r) = relation_pair(5, 12, &mut rng, false).unwrap();
            assert_ne!(l, r);
            assert_eq!(l.len(), r.len());
            assert_eq!(l.permutation(), r.permutation());
            let (l, r) = relation_pair(5, 12, &mut rng, true).unwrap();
            assert_eq!(l.permutation(), r.permutation());
        }
        assert!(relation_pair(2, 12, &mut rng, false).is_err());
        assert!(relation_pair(3, 12, &mut rng, true).is_err());
    }

    #[test]
    fn max_n_below_two_is_rejected() {
        assert!(run(&SelftestConfig {
            max_n: 1,
            ..Default::default()
        })
        .is_err());
    }
}
