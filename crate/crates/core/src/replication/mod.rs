//! String-doubling iteration for the activity series.
//!
//! A [`ReplicationRule`] carries one or two equal-length strings and builds the
//! next generation by concatenating integer combinations of them. For Rule 150
//! the carried pair `(Y_n, Z_n)` covers times `0..2^{n+1}` and the rule is
//! `(a, b) → (a, b, 3a, 2a+b)`: the new `Y` is the old `(Y, Z)` and the new `Z`
//! is `(3Y, 2Y+Z)`. Every generation doubles the strings, so producing `T`
//! values costs `O(T)` element operations in total.

mod dsl;

use std::fmt;

pub use dsl::parse_rule;

use crate::spin::activity_closed_form;
use crate::{Error, Result, RuleError};

/// Element-wise `alpha·a + beta·b` of the carried strings.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Segment {
    pub alpha: i64,
    pub beta: i64,
}

impl Segment {
    pub const fn new(alpha: i64, beta: i64) -> Self {
        Segment { alpha, beta }
    }

    fn apply(&self, a: &[i64], b: Option<&[i64]>, out: &mut Vec<i64>) -> Option<()> {
        match (self.alpha, self.beta, b) {
            (1, 0, _) => out.extend_from_slice(a),
            (0, 1, Some(b)) => out.extend_from_slice(b),
            (alpha, 0, _) => {
                for &x in a {
                    out.push(x.checked_mul(alpha)?);
                }
            }
            (alpha, beta, Some(b)) => {
                for (&x, &y) in a.iter().zip(b) {
                    out.push(x.checked_mul(alpha)?.checked_add(y.checked_mul(beta)?)?);
                }
            }
            // beta != 0 without a second string is rejected at construction
            (_, _, None) => unreachable!("segment references a missing string"),
        }
        Some(())
    }
}

/// A linear replication law together with its seed strings.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReplicationRule {
    arity: usize,
    outputs: Vec<Vec<Segment>>,
    seeds: Vec<Vec<i64>>,
}

impl ReplicationRule {
    /// Validates and builds a rule. `outputs[k]` lists the segments of the
    /// k-th new string; `seeds[k]` is the initial k-th string.
    pub fn new(
        arity: usize,
        outputs: Vec<Vec<Segment>>,
        seeds: Vec<Vec<i64>>,
    ) -> Result<Self, RuleError> {
        if !(1..=2).contains(&arity) {
            return Err(RuleError::ArityMismatch(format!(
                "a rule carries 1 or 2 strings, got {arity}"
            )));
        }
        if outputs.len() != arity {
            return Err(RuleError::ArityMismatch(format!(
                "{arity} carried strings need {arity} outputs, got {}",
                outputs.len()
            )));
        }
        if outputs.iter().any(Vec::is_empty) {
            return Err(RuleError::ArityMismatch(
                "every output needs a segment".into(),
            ));
        }
        if arity == 1 && outputs.iter().flatten().any(|s| s.beta != 0) {
            return Err(RuleError::ArityMismatch(
                "second coefficient must be 0 for a single carried string".into(),
            ));
        }
        if seeds.len() != arity {
            return Err(RuleError::ArityMismatch(format!(
                "{arity} carried strings need {arity} seeds, got {}",
                seeds.len()
            )));
        }
        let seed_len = seeds[0].len();
        if seed_len == 0 || seeds.iter().any(|s| s.len() != seed_len) {
            return Err(RuleError::ArityMismatch(
                "seeds must be non-empty and of equal length".into(),
            ));
        }
        Ok(ReplicationRule {
            arity,
            outputs,
            seeds,
        })
    }

    /// `(a, b) → (a, b, 3a, 2a+b)` from `a = (1)`, `b = (3)`.
    pub fn rule150() -> Self {
        ReplicationRule {
            arity: 2,
            outputs: vec![
                vec![Segment::new(1, 0), Segment::new(0, 1)],
                vec![Segment::new(3, 0), Segment::new(2, 1)],
            ],
            seeds: vec![vec![1], vec![3]],
        }
    }

    /// `(a) → (a, 2a)` from `a = (1)`; yields the Rule 90 activity.
    pub fn sierpinski() -> Self {
        ReplicationRule {
            arity: 1,
            outputs: vec![vec![Segment::new(1, 0), Segment::new(2, 0)]],
            seeds: vec![vec![1]],
        }
    }

    /// `(a) → (a, −a)` from `a = (1)`; yields `(−1)^{popcount(t)}`.
    pub fn thue_morse() -> Self {
        ReplicationRule {
            arity: 1,
            outputs: vec![vec![Segment::new(1, 0), Segment::new(-1, 0)]],
            seeds: vec![vec![1]],
        }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn outputs(&self) -> &[Vec<Segment>] {
        &self.outputs
    }

    pub fn seeds(&self) -> &[Vec<i64>] {
        &self.seeds
    }

    pub fn initial_state(&self) -> GenerationState {
        GenerationState {
            generation: 0,
            strings: self.seeds.clone(),
            elements_written: 0,
        }
    }

    /// Runs `generations` steps from the seeds.
    pub fn run(&self, generations: u32) -> Result<GenerationState> {
        let mut state = self.initial_state();
        for _ in 0..generations {
            state = apply_generation(self, &state)?;
        }
        Ok(state)
    }
}

/// Prints the law in the DSL grammar, naming the carried strings `a` and `b`.
/// Seeds are not part of the text.
impl fmt::Display for ReplicationRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = ["a", "b"];
        f.write_str(&names[..self.arity].join(","))?;
        f.write_str(" -> ")?;
        for (i, seg) in self.outputs.iter().flatten().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            let mut wrote = false;
            for (coef, name) in [seg.alpha, seg.beta].into_iter().zip(names) {
                if coef == 0 {
                    continue;
                }
                if coef < 0 {
                    f.write_str("-")?;
                } else if wrote {
                    f.write_str("+")?;
                }
                if coef.unsigned_abs() != 1 {
                    write!(f, "{}", coef.unsigned_abs())?;
                }
                f.write_str(name)?;
                wrote = true;
            }
            if !wrote {
                f.write_str("0a")?;
            }
        }
        Ok(())
    }
}

/// The carried strings after some number of generations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenerationState {
    generation: u32,
    strings: Vec<Vec<i64>>,
    elements_written: u64,
}

impl GenerationState {
    pub fn generation(&self) -> u32 {
        self.generation
    }

    pub fn strings(&self) -> &[Vec<i64>] {
        &self.strings
    }

    /// Length of each carried string.
    pub fn string_len(&self) -> usize {
        self.strings.first().map_or(0, Vec::len)
    }

    /// All carried strings joined in order.
    pub fn concatenated(&self) -> Vec<i64> {
        self.strings.concat()
    }

    /// Elements produced by all generations leading to this state.
    pub fn elements_written(&self) -> u64 {
        self.elements_written
    }
}

/// One doubling step: every output string is assembled segment by segment.
pub fn apply_generation(
    rule: &ReplicationRule,
    state: &GenerationState,
) -> Result<GenerationState> {
    if state.strings.len() != rule.arity {
        return Err(RuleError::ArityMismatch(format!(
            "rule carries {} strings, state has {}",
            rule.arity,
            state.strings.len()
        ))
        .into());
    }
    let len = state.string_len();
    if state.strings.iter().any(|s| s.len() != len) {
        return Err(RuleError::ArityMismatch("carried strings differ in length".into()).into());
    }

    let generation = state.generation + 1;
    let a = &state.strings[0];
    let b = state.strings.get(1).map(Vec::as_slice);
    let mut strings = Vec::with_capacity(rule.arity);
    for output in &rule.outputs {
        let mut out = Vec::with_capacity(len * output.len());
        for seg in output {
            seg.apply(a, b, &mut out)
                .ok_or_else(|| Error::overflow(format!("generation {generation} exceeds i64")))?;
        }
        strings.push(out);
    }
    let produced: usize = strings.iter().map(Vec::len).sum();
    if strings.iter().any(|s| s.len() != strings[0].len()) {
        return Err(
            RuleError::ArityMismatch("outputs have different numbers of segments".into()).into(),
        );
    }
    Ok(GenerationState {
        generation,
        strings,
        elements_written: state.elements_written + produced as u64,
    })
}

/// A contiguous stretch of the activity series.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ActivityString {
    start: u64,
    values: Vec<u64>,
}

impl ActivityString {
    pub fn new(start: u64, values: Vec<u64>) -> Self {
        ActivityString { start, values }
    }

    /// Time index of the first value.
    pub fn start(&self) -> u64 {
        self.start
    }

    pub fn values(&self) -> &[u64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `X(t)` if `t` lies in this stretch.
    pub fn at(&self, t: u64) -> Option<u64> {
        let i = usize::try_from(t.checked_sub(self.start)?).ok()?;
        self.values.get(i).copied()
    }

    pub fn into_values(self) -> Vec<u64> {
        self.values
    }
}

/// `X(0), …, X(count−1)` for Rule 150.
///
/// The series is prefix-stable under doubling: with `h = 2^n` and the first
/// `2h` values known (`Y_n = x[..h]`, `Z_n = x[h..2h]`), the next `2h` are
/// `3·Y_n` followed by `2·Y_n + Z_n`. So one buffer is grown in place,
/// stopping as soon as `count` values exist.
pub fn activity_series(count: usize) -> Result<ActivityString> {
    if count == 0 {
        return Err(Error::domain("series length must be at least 1"));
    }
    let mut x: Vec<u64> = Vec::with_capacity(count.max(2));
    x.extend([1, 3]);
    let mut generation = 0u32;
    while x.len() < count {
        generation += 1;
        let h = x.len() / 2;
        let overflow = || Error::overflow(format!("generation {generation} exceeds u64"));
        for i in 0..h.min(count - x.len()) {
            let v = x[i].checked_mul(3).ok_or_else(overflow)?;
            x.push(v);
        }
        for i in 0..h.min(count - x.len()) {
            let v = x[i]
                .checked_mul(2)
                .and_then(|y| y.checked_add(x[h + i]))
                .ok_or_else(overflow)?;
            x.push(v);
        }
    }
    x.truncate(count);
    Ok(ActivityString::new(0, x))
}

/// `X(t)` in `O(log t)` through the spin-block product.
pub fn activity_at(t: u64) -> Result<u64> {
    activity_closed_form(t)
}

/// Checks `X(t) = X(t mod 4) · X(t div 8)` for `t ≥ 8` with bit 2 clear.
pub fn self_similarity_check(t: u64) -> Result<bool> {
    if t < 8 || t & 0b100 != 0 {
        return Err(Error::domain(format!(
            "self-similarity needs t >= 8 with bit 2 clear, got {t}"
        )));
    }
    let rhs = activity_at(t % 4)?
        .checked_mul(activity_at(t / 8)?)
        .ok_or_else(|| Error::overflow(format!("X({t} mod 4)·X({t} div 8) exceeds u64")))?;
    Ok(activity_at(t)? == rhs)
}
