//! Binary "time spin" decomposition of a time index and the closed-form
//! activity built from it.
//!
//! Writing `t = Σ σ_j 2^j`, the Rule 150 activity is multiplicative over the
//! maximal runs of 1-spins: a run of length `n` contributes a factor `χ(n)`,
//! where `χ(n) = X(2^n − 1)`.

use std::collections::BTreeMap;
use std::fmt;

use crate::{Error, Result};

/// Largest `n` for which `χ(n)` fits in a `u64`.
pub const MAX_CHI_N: u32 = 63;

/// Binary digits of a time index, least significant first.
///
/// Digits outside `0..width` read as 0, which gives the boundary spins
/// `σ₋₁ = σ_N = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SpinWord {
    value: u64,
    width: u32,
}

impl SpinWord {
    pub fn new(t: u64) -> Self {
        SpinWord {
            value: t,
            width: u64::BITS - t.leading_zeros(),
        }
    }

    /// Builds a word from spins given least significant first. Trailing
    /// (most significant) zeros are dropped; returns `None` if a digit is not
    /// 0 or 1 or the value needs more than 64 bits.
    pub fn from_spins(spins: &[u8]) -> Option<Self> {
        let mut value = 0u64;
        for (j, &s) in spins.iter().enumerate() {
            match s {
                0 => {}
                1 if j < 64 => value |= 1 << j,
                _ => return None,
            }
        }
        Some(SpinWord::new(value))
    }

    /// Number of significant digits; 0 for `t = 0`.
    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    /// `σ_j`, with every index outside `0..width` reading as 0.
    pub fn spin(&self, j: i64) -> u8 {
        if j < 0 || j >= i64::from(self.width) {
            0
        } else {
            ((self.value >> j) & 1) as u8
        }
    }

    /// `σ_0, σ_1, …, σ_{N−1}`.
    pub fn spins(&self) -> impl Iterator<Item = u8> + '_ {
        (0..self.width).map(move |j| ((self.value >> j) & 1) as u8)
    }

    /// `Σ σ_j 2^j`, recomputed from the digits.
    pub fn reconstruct(&self) -> u64 {
        self.spins()
            .enumerate()
            .fold(0u64, |acc, (j, s)| acc | (u64::from(s) << j))
    }

    pub fn popcount(&self) -> u32 {
        self.value.count_ones()
    }
}

/// Most significant digit first; the empty word prints as an empty string.
impl fmt::Display for SpinWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for j in (0..self.width).rev() {
            write!(f, "{}", (self.value >> j) & 1)?;
        }
        Ok(())
    }
}

pub fn spin_decompose(t: u64) -> SpinWord {
    SpinWord::new(t)
}

/// Multiplicities of maximal 1-runs, keyed by run length.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct BlockMultiset {
    counts: BTreeMap<u32, u32>,
}

impl BlockMultiset {
    /// `c_n`, zero when no run of length `n` exists.
    pub fn count(&self, len: u32) -> u32 {
        self.counts.get(&len).copied().unwrap_or(0)
    }

    /// `(n, c_n)` pairs in increasing `n`, only for `c_n > 0`.
    pub fn iter(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.counts.iter().map(|(&n, &c)| (n, c))
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    /// `Σ n·c_n`, i.e. the number of 1-spins covered.
    pub fn total_spins(&self) -> u32 {
        self.iter().map(|(n, c)| n * c).sum()
    }

    fn insert(&mut self, len: u32) {
        *self.counts.entry(len).or_insert(0) += 1;
    }
}

impl FromIterator<(u32, u32)> for BlockMultiset {
    fn from_iter<I: IntoIterator<Item = (u32, u32)>>(iter: I) -> Self {
        BlockMultiset {
            counts: iter.into_iter().filter(|&(_, c)| c > 0).collect(),
        }
    }
}

/// Maximal runs of 1-spins, found in one pass over the word.
pub fn spin_blocks(word: &SpinWord) -> BlockMultiset {
    let mut blocks = BlockMultiset::default();
    let mut rest = word.value();
    while rest != 0 {
        rest >>= rest.trailing_zeros();
        let run = rest.trailing_ones();
        blocks.insert(run);
        rest = rest.checked_shr(run).unwrap_or(0);
    }
    blocks
}

/// `χ(n)` from the recurrence `χ(n) = 2χ(n−1) − (−1)^n`, `χ(0) = 1`.
pub fn chi(n: u32) -> Result<u64> {
    let mut value = 1u64;
    for k in 1..=n {
        let doubled = value.checked_mul(2).ok_or_else(|| chi_overflow(n))?;
        value = if k % 2 == 0 {
            doubled - 1
        } else {
            doubled.checked_add(1).ok_or_else(|| chi_overflow(n))?
        };
    }
    Ok(value)
}

/// `χ(n) = ⌊(2^{n+2} + 1) / 3⌋`, evaluated exactly.
pub fn chi_closed(n: u32) -> Result<u64> {
    let shift = n.checked_add(2).filter(|&s| s < u128::BITS);
    let power = shift.map(|s| 1u128 << s).ok_or_else(|| chi_overflow(n))?;
    u64::try_from((power + 1) / 3).map_err(|_| chi_overflow(n))
}

fn chi_overflow(n: u32) -> Error {
    Error::overflow(format!(
        "chi({n}) exceeds u64 (largest supported n is {MAX_CHI_N})"
    ))
}

/// Rule 150 activity `X(t) = Π χ(n)^{c_n}` over the spin blocks of `t`.
pub fn activity_closed_form(t: u64) -> Result<u64> {
    activity_closed_form_with(t, chi_closed)
}

/// As [`activity_closed_form`], with the per-block factor supplied by the
/// caller.
pub fn activity_closed_form_with<F>(t: u64, factor: F) -> Result<u64>
where
    F: Fn(u32) -> Result<u64>,
{
    let blocks = spin_blocks(&spin_decompose(t));
    let mut product = 1u64;
    for (len, count) in blocks.iter() {
        let term = factor(len)?
            .checked_pow(count)
            .ok_or_else(|| Error::overflow(format!("X({t}) exceeds u64")))?;
        product = product
            .checked_mul(term)
            .ok_or_else(|| Error::overflow(format!("X({t}) exceeds u64")))?;
    }
    Ok(product)
}

/// Rule 90 activity, `2^{popcount(t)}`.
pub fn rule90_activity(t: u64) -> Result<u64> {
    1u64.checked_shl(t.count_ones())
        .ok_or_else(|| Error::overflow(format!("rule 90 activity at t={t} exceeds u64")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Block counts straight from the nested indicator expression:
    /// `c_n = Σ_i (1−σ_{i−1})(1−σ_{i+n}) Π_{l<n} σ_{i+l}`.
    fn indicator_counts(word: &SpinWord) -> BlockMultiset {
        let width = i64::from(word.width());
        (1..=width)
            .map(|n| {
                let c: u32 = (0..=width - n)
                    .map(|i| {
                        let bounded = (1 - word.spin(i - 1)) * (1 - word.spin(i + n));
                        let run: u8 = (0..n).map(|l| word.spin(i + l)).product();
                        u32::from(bounded * run)
                    })
                    .sum();
                (n as u32, c)
            })
            .collect()
    }

    #[test]
    fn decompose_examples() {
        let zero = spin_decompose(0);
        assert_eq!(zero.width(), 0);
        assert_eq!(zero.to_string(), "");
        assert_eq!(spin_decompose(5).to_string(), "101");
        assert_eq!(spin_decompose(240).to_string(), "11110000");
        assert_eq!(spin_decompose(240).width(), 8);
    }

    #[test]
    fn boundary_spins_read_zero() {
        let w = spin_decompose(7);
        assert_eq!(w.spin(-1), 0);
        assert_eq!(w.spin(3), 0);
        assert_eq!(w.spin(2), 1);
        let full = spin_decompose(u64::MAX);
        assert_eq!(full.width(), 64);
        assert_eq!(full.spin(64), 0);
    }

    #[test]
    fn from_spins_drops_leading_zeros() {
        let w = SpinWord::from_spins(&[1, 0, 1, 0, 0]).unwrap();
        assert_eq!(w.value(), 5);
        assert_eq!(w.width(), 3);
        assert!(SpinWord::from_spins(&[2]).is_none());
    }

    #[test]
    fn block_examples() {
        assert!(spin_blocks(&spin_decompose(0)).is_empty());
        let seven = spin_blocks(&spin_decompose(7));
        assert_eq!(seven.iter().collect::<Vec<_>>(), vec![(3, 1)]);
        let five = spin_blocks(&spin_decompose(5));
        assert_eq!(five.iter().collect::<Vec<_>>(), vec![(1, 2)]);
        let all = spin_blocks(&spin_decompose(u64::MAX));
        assert_eq!(all.iter().collect::<Vec<_>>(), vec![(64, 1)]);
    }

    #[test]
    fn chi_examples() {
        assert_eq!(chi(0), Ok(1));
        assert_eq!(chi(3), Ok(11));
        assert_eq!(chi(5), Ok(43));
        assert_eq!(chi_closed(0), Ok(1));
        assert_eq!(chi_closed(2), Ok(5));
        assert_eq!(chi_closed(4), Ok(21));
    }

    #[test]
    fn chi_routes_agree_over_whole_range() {
        for n in 0..=MAX_CHI_N {
            assert_eq!(chi(n), chi_closed(n), "n={n}");
        }
    }

    #[test]
    fn chi_overflow_is_reported() {
        assert!(matches!(chi(MAX_CHI_N + 1), Err(Error::Overflow(_))));
        assert!(matches!(chi_closed(MAX_CHI_N + 1), Err(Error::Overflow(_))));
        assert!(matches!(chi_closed(200), Err(Error::Overflow(_))));
        assert!(matches!(chi_closed(u32::MAX), Err(Error::Overflow(_))));
    }

    #[test]
    fn activity_examples() {
        assert_eq!(activity_closed_form(0), Ok(1));
        assert_eq!(activity_closed_form(5), Ok(9));
        assert_eq!(activity_closed_form(255), Ok(341));
        assert_eq!(activity_closed_form(255), chi(8));
    }

    #[test]
    fn chi_is_activity_at_all_ones() {
        for n in 0..=20 {
            assert_eq!(chi(n), activity_closed_form((1u64 << n) - 1), "n={n}");
        }
    }

    #[test]
    fn activity_overflow_is_reported() {
        // one block of 64 ones needs chi(64)
        assert!(matches!(
            activity_closed_form(u64::MAX),
            Err(Error::Overflow(_))
        ));
        // χ(1)·χ(62) = 3·(2^64 − 1)/3 lands exactly on the top of the range
        let t = (u64::MAX >> 2) | (1 << 63);
        assert_eq!(activity_closed_form(t), Ok(u64::MAX));
    }

    #[test]
    fn rule90_examples() {
        assert_eq!(rule90_activity(0), Ok(1));
        assert_eq!(rule90_activity(3), Ok(4));
        assert_eq!(rule90_activity(7), Ok(8));
        assert_eq!(rule90_activity(u64::MAX >> 1), Ok(1 << 63));
        assert!(matches!(rule90_activity(u64::MAX), Err(Error::Overflow(_))));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(2000))]

        #[test]
        fn reconstruct_round_trips(t in any::<u64>()) {
            let w = spin_decompose(t);
            prop_assert_eq!(w.reconstruct(), t);
            if w.width() > 0 {
                prop_assert_eq!(w.spin(i64::from(w.width()) - 1), 1);
            }
            let digits: Vec<u8> = w.spins().collect();
            prop_assert_eq!(SpinWord::from_spins(&digits), Some(w));
        }

        #[test]
        fn single_pass_matches_indicator_counts(t in any::<u64>()) {
            let w = spin_decompose(t);
            let blocks = spin_blocks(&w);
            prop_assert_eq!(blocks.total_spins(), t.count_ones());
            prop_assert_eq!(&blocks, &indicator_counts(&w));
        }

        #[test]
        fn activity_multiplies_across_zero_gap(high in 0u64..(1 << 20), k in 0u32..20, low_bits in any::<u64>()) {
            let low = low_bits & ((1u64 << k) - 1);
            let t = (high << (k + 1)) | low;
            prop_assert_eq!(
                activity_closed_form(t).unwrap(),
                activity_closed_form(high).unwrap() * activity_closed_form(low).unwrap()
            );
        }
    }

    #[test]
    fn reconstruct_million_random() {
        use proptest::test_runner::{RngAlgorithm, TestRng};
        let mut rng = TestRng::deterministic_rng(RngAlgorithm::ChaCha);
        for _ in 0..1_000_000 {
            let t = rng.next_u64();
            assert_eq!(spin_decompose(t).reconstruct(), t);
        }
    }
}
