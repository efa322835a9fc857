//! Selection between the three ways of computing the Rule 150 activity.

use std::fmt;
use std::str::FromStr;

use crate::eca::{simulate_activity, RuleNumber};
use crate::replication::activity_series;
use crate::spin::activity_closed_form;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    /// String-doubling iteration, `O(T)`.
    Iteration,
    /// Spin-block product per time index, `O(T log T)`.
    Closed,
    /// Lattice simulation, `O(T²)`.
    Simulate,
}

impl Method {
    pub const ALL: [Method; 3] = [Method::Iteration, Method::Closed, Method::Simulate];

    pub fn name(self) -> &'static str {
        match self {
            Method::Iteration => "iteration",
            Method::Closed => "closed",
            Method::Simulate => "simulate",
        }
    }

    /// `X(0), …, X(count−1)`.
    pub fn series(self, count: usize) -> Result<Vec<u64>> {
        if count == 0 {
            return Err(Error::domain("series length must be at least 1"));
        }
        match self {
            Method::Iteration => Ok(activity_series(count)?.into_values()),
            Method::Closed => (0..count as u64).map(activity_closed_form).collect(),
            Method::Simulate => Ok(simulate_activity(RuleNumber::RULE_150, count)),
        }
    }

    /// `X(t)` alone.
    pub fn at(self, t: u64) -> Result<u64> {
        match self {
            Method::Closed => activity_closed_form(t),
            _ => {
                let count = usize::try_from(t)
                    .ok()
                    .and_then(|t| t.checked_add(1))
                    .ok_or_else(|| Error::domain(format!("t={t} is too large for {self}")))?;
                Ok(*self.series(count)?.last().expect("series is non-empty"))
            }
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| {
                Error::domain(format!("unknown method `{s}` (iteration|closed|simulate)"))
            })
    }
}
