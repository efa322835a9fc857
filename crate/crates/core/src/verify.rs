//! Cross-checks of the iteration, the closed form and the lattice simulation.

use std::fmt;

use crate::eca::{simulate_activity, RuleNumber};
use crate::replication::activity_series;
use crate::{Error, Result};

/// The first disagreement found.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Mismatch {
    /// The routes disagree on `X(t)`. `simulate` is `None` past the oracle
    /// horizon.
    Methods {
        t: u64,
        iteration: u64,
        closed: u64,
        simulate: Option<u64>,
    },
    /// `X(t) ≠ X(t mod 4)·X(t div 8)` for some `t` with bit 2 clear.
    SelfSimilarity {
        t: u64,
        value: u64,
        low: u64,
        high: u64,
    },
}

impl Mismatch {
    pub fn t(&self) -> u64 {
        match *self {
            Mismatch::Methods { t, .. } | Mismatch::SelfSimilarity { t, .. } => t,
        }
    }
}

impl fmt::Display for Mismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mismatch::Methods {
                t,
                iteration,
                closed,
                simulate,
            } => {
                write!(f, "t={t} iteration={iteration} closed={closed}")?;
                match simulate {
                    Some(s) => write!(f, " simulate={s}"),
                    None => write!(f, " simulate=-"),
                }
            }
            Mismatch::SelfSimilarity {
                t,
                value,
                low,
                high,
            } => write!(
                f,
                "t={t} self-similarity X(t)={value} X(t mod 4)={low} X(t div 8)={high}"
            ),
        }
    }
}

/// Bounds for [`cross_check`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VerifyConfig {
    /// Iteration and closed form are compared for `t < max_t`.
    pub max_t: u64,
    /// The simulation joins in for `t < oracle_max_t`.
    pub oracle_max_t: u64,
}

impl VerifyConfig {
    pub fn new(max_t: u64, oracle_max_t: u64) -> Result<Self> {
        if max_t == 0 {
            return Err(Error::domain("max-t must be at least 1"));
        }
        if oracle_max_t > max_t {
            return Err(Error::domain(format!(
                "oracle-max-t ({oracle_max_t}) must not exceed max-t ({max_t})"
            )));
        }
        Ok(VerifyConfig {
            max_t,
            oracle_max_t,
        })
    }
}

/// Scans `t` upward and returns the first disagreement, if any. The closed
/// form is passed in so a deliberately broken one can be checked too.
pub fn cross_check<F>(config: VerifyConfig, closed: F) -> Result<Option<Mismatch>>
where
    F: Fn(u64) -> Result<u64>,
{
    let count = usize::try_from(config.max_t)
        .map_err(|_| Error::domain(format!("max-t {} is too large", config.max_t)))?;
    let iterated = activity_series(count)?;
    let simulated = simulate_activity(RuleNumber::RULE_150, config.oracle_max_t as usize);
    let x = iterated.values();

    for t in 0..config.max_t {
        let iteration = x[t as usize];
        let closed = closed(t)?;
        let simulate = simulated.get(t as usize).copied();
        if iteration != closed || simulate.is_some_and(|s| s != iteration) {
            return Ok(Some(Mismatch::Methods {
                t,
                iteration,
                closed,
                simulate,
            }));
        }
        if t >= 8 && t & 0b100 == 0 {
            let (low, high) = (x[(t % 4) as usize], x[(t / 8) as usize]);
            if low.checked_mul(high) != Some(iteration) {
                return Ok(Some(Mismatch::SelfSimilarity {
                    t,
                    value: iteration,
                    low,
                    high,
                }));
            }
        }
    }
    Ok(None)
}
