//! Dyadic block sums `S_n = Σ_{t<2^n} X(t)` and the detrended signal.
//!
//! `S_n = 2S_{n−1} + 4S_{n−2}` with `S_0 = 1`, `S_1 = 4`, which equals
//! `F_{n+2}·2^n`. The per-block mean offset is
//! `N_n = (S_n − S_{n−1}) / 2^{n−1}` (with `N_0 = 1`), the Lucas numbers
//! `1, 3, 4, 7, 11, 18, …`.

use crate::replication::activity_series;
use crate::{Error, Result};

/// Largest `n` with `S_n` (and so `N_n`) inside `u64`.
pub const MAX_BLOCK_SUM_N: u32 = 37;

/// Largest `n` with `F_n` inside `u64`.
pub const MAX_FIBONACCI_N: u32 = 93;

fn block_overflow(n: u32) -> Error {
    Error::overflow(format!(
        "S_{n} exceeds u64 (largest supported n is {MAX_BLOCK_SUM_N})"
    ))
}

/// `S_n` by the two-term recurrence.
pub fn block_sum(n: u32) -> Result<u64> {
    let (mut prev, mut cur) = (1u64, 4u64);
    match n {
        0 => return Ok(prev),
        1 => return Ok(cur),
        _ => {}
    }
    for _ in 2..=n {
        let next = cur
            .checked_mul(2)
            .zip(prev.checked_mul(4))
            .and_then(|(a, b)| a.checked_add(b))
            .ok_or_else(|| block_overflow(n))?;
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

/// `F_n` with `F_1 = F_2 = 1`.
pub fn fibonacci(n: u32) -> Result<u64> {
    if n == 0 {
        return Err(Error::domain("Fibonacci index starts at 1"));
    }
    let (mut prev, mut cur) = (0u64, 1u64);
    for _ in 1..n {
        let next = prev.checked_add(cur).ok_or_else(|| {
            Error::overflow(format!(
                "F_{n} exceeds u64 (largest supported n is {MAX_FIBONACCI_N})"
            ))
        })?;
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

/// `S_n` as `F_{n+2}·2^n`.
pub fn block_sum_fib(n: u32) -> Result<u64> {
    let fib = fibonacci(n.checked_add(2).ok_or_else(|| block_overflow(n))?)
        .map_err(|_| block_overflow(n))?;
    1u64.checked_shl(n)
        .and_then(|scale| fib.checked_mul(scale))
        .ok_or_else(|| block_overflow(n))
}

/// `N_n`, the mean of `X` over the dyadic block `[2^{n−1}, 2^n − 1]`.
pub fn detrend_offset(n: u32) -> Result<u64> {
    if n == 0 {
        return Ok(1);
    }
    let diff = block_sum(n)? - block_sum(n - 1)?;
    let width = 1u64 << (n - 1);
    debug_assert_eq!(diff % width, 0);
    Ok(diff / width)
}

/// `X(t) − N_{b(t)}` for `t < count`, where `b(0) = 0` and `b(t) = n` on
/// `[2^{n−1}, 2^n − 1]`. `count` must be a power of two.
pub fn detrended_series(count: usize) -> Result<Vec<i64>> {
    if !count.is_power_of_two() {
        return Err(Error::domain(format!(
            "detrended series length must be a power of two, got {count}"
        )));
    }
    let levels = count.trailing_zeros();
    let offsets = (0..=levels)
        .map(detrend_offset)
        .collect::<Result<Vec<_>>>()?;
    let series = activity_series(count)?;
    series
        .values()
        .iter()
        .enumerate()
        .map(|(t, &x)| {
            let level = (usize::BITS - t.leading_zeros()) as usize;
            let x = i64::try_from(x).map_err(|_| Error::overflow(format!("X({t}) exceeds i64")))?;
            let offset = i64::try_from(offsets[level])
                .map_err(|_| Error::overflow(format!("N_{level} exceeds i64")))?;
            Ok(x - offset)
        })
        .collect()
}

/// `S_n / S_{n−1}`, which tends to `1 + √5`.
pub fn eigenvalue_ratio(n: u32) -> Result<f64> {
    if n < 2 {
        return Err(Error::domain(format!(
            "eigenvalue ratio needs n >= 2, got {n}"
        )));
    }
    Ok(block_sum(n)? as f64 / block_sum(n - 1)? as f64)
}
