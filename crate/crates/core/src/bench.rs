//! Wall-clock scaling of the activity routes.
//!
//! Each size is timed `repetitions` times after one discarded warm-up run and
//! summarised by the median per call. The doubling ratio between consecutive sizes is
//! `(t₂/t₁)^{1/log₂(n₂/n₁)}`: about 2 for linear work and 4 for quadratic.

use std::hint::black_box;
use std::ops::RangeInclusive;
use std::time::{Duration, Instant};

use crate::{Error, Method, Result};

/// Accepted doubling ratio for the linear-time iteration.
pub const ITERATION_RATIO_BAND: RangeInclusive<f64> = 1.5..=3.0;
/// Accepted doubling ratio for the quadratic-time simulation.
pub const SIMULATION_RATIO_BAND: RangeInclusive<f64> = 3.0..=6.0;

#[derive(Debug, Clone, PartialEq)]
pub struct ScalingPoint {
    pub method: Method,
    pub size: usize,
    pub median: Duration,
    /// Ratio against the previous size; `None` for the first one.
    pub doubling_ratio: Option<f64>,
}

/// Shortest wall time a single sample should cover.
const MIN_SAMPLE: Duration = Duration::from_millis(5);

/// Median wall time of computing `size` values with `method`. Fast calls
/// are batched so each sample spans at least [`MIN_SAMPLE`]; the median is
/// reported per call.
pub fn time_method(method: Method, size: usize, repetitions: usize) -> Result<Duration> {
    if repetitions == 0 {
        return Err(Error::domain("repetitions must be at least 1"));
    }
    let warmup = Instant::now();
    black_box(method.series(black_box(size))?);
    let once = warmup.elapsed().max(Duration::from_nanos(1));
    let batch = (MIN_SAMPLE.as_nanos() / once.as_nanos()).clamp(1, 10_000) as u32;

    let mut samples = Vec::with_capacity(repetitions);
    for _ in 0..repetitions {
        let start = Instant::now();
        for _ in 0..batch {
            black_box(method.series(black_box(size))?);
        }
        samples.push(start.elapsed() / batch);
    }
    samples.sort_unstable();
    Ok(samples[samples.len() / 2])
}

/// Checks that there are at least two sizes, all powers of two and strictly
/// increasing.
pub fn validate_sizes(sizes: &[usize]) -> Result<()> {
    if sizes.len() < 2 {
        return Err(Error::domain("scaling needs at least two sizes"));
    }
    if let Some(bad) = sizes.iter().find(|s| !s.is_power_of_two()) {
        return Err(Error::domain(format!("size {bad} is not a power of two")));
    }
    if sizes.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::domain("sizes must be strictly increasing"));
    }
    Ok(())
}

pub fn doubling_ratio(small: (usize, Duration), large: (usize, Duration)) -> f64 {
    let doublings = (large.0 as f64 / small.0 as f64).log2();
    let ratio = large.1.as_secs_f64() / small.1.as_secs_f64().max(1e-12);
    ratio.powf(1.0 / doublings)
}

pub fn measure_scaling(
    method: Method,
    sizes: &[usize],
    repetitions: usize,
) -> Result<Vec<ScalingPoint>> {
    validate_sizes(sizes)?;
    let mut points: Vec<ScalingPoint> = Vec::with_capacity(sizes.len());
    for &size in sizes {
        let median = time_method(method, size, repetitions)?;
        let doubling_ratio = points
            .last()
            .map(|prev| doubling_ratio((prev.size, prev.median), (size, median)));
        points.push(ScalingPoint {
            method,
            size,
            median,
            doubling_ratio,
        });
    }
    Ok(points)
}

/// The band a method's ratio has to fall in, if it is checked at all.
pub fn ratio_band(method: Method) -> Option<RangeInclusive<f64>> {
    match method {
        Method::Iteration => Some(ITERATION_RATIO_BAND),
        Method::Simulate => Some(SIMULATION_RATIO_BAND),
        Method::Closed => None,
    }
}
