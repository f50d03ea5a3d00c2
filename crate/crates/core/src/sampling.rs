//! Distribution sampling primitives and the keyed substream scheme.
//!
//! Every random variate in a simulation is drawn from a substream keyed by
//! `(seed, source id, iteration index)`, where a source is one activity's
//! duration or one risk's variates. Substreams are mutually independent, so
//! adding or removing a risk from a scenario leaves every other source's
//! variates untouched. That is what lets scenario differences be attributed
//! to the risk itself rather than sampling noise, and it makes the output
//! independent of how iterations are scheduled across worker threads.

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use thiserror::Error;

use crate::project::ActivityId;
use crate::risk::{ImpactSpec, Interval, RiskId};

/// Stable 64-bit identifier for an independent variate source.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SourceId(u64);

impl SourceId {
    /// Source for an activity's base duration variates.
    pub fn activity(id: &ActivityId) -> Self {
        Self(fnv1a("activity/", id.as_str()))
    }

    /// Source for a risk's probability, occurrence and impact variates.
    pub fn risk(id: &RiskId) -> Self {
        Self(fnv1a("risk/", id.as_str()))
    }
}

/// FNV-1a over a namespaced label; stable across platforms and runs.
fn fnv1a(namespace: &str, name: &str) -> u64 {
    let mut hash = 0xcbf2_9ce4_8422_2325_u64;
    for byte in namespace.bytes().chain(name.bytes()) {
        hash ^= u64::from(byte);
        hash = hash.wrapping_mul(0x0000_0100_0000_01b3);
    }
    hash
}

const STREAM_DOMAIN: u64 = 0x7072_6a72_6973_6b73; // ASCII "prjrisks"

/// The substream for one `(seed, source, iteration)` cell. The full triple
/// goes into the ChaCha key, so distinct cells get independent streams with
/// no positional coupling.
pub fn substream(seed: u64, source: SourceId, iteration: u64) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[0..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&source.0.to_le_bytes());
    key[16..24].copy_from_slice(&iteration.to_le_bytes());
    key[24..32].copy_from_slice(&STREAM_DOMAIN.to_le_bytes());
    ChaCha8Rng::from_seed(key)
}

/// Next uniform variate in `[0, 1)` with 53-bit resolution.
pub fn unit_f64(rng: &mut impl RngCore) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

#[derive(Debug, Error, PartialEq)]
pub enum SampleError {
    #[error("invalid triangular parameters (min={min}, mp={mp}, max={max})")]
    BadTriangular { min: f64, mp: f64, max: f64 },
    #[error("uniform variate {0} lies outside [0, 1]")]
    BadUnitVariate(f64),
    #[error("probability {0} lies outside [0, 1]")]
    BadProbability(f64),
}

fn check_unit(u: f64) -> Result<(), SampleError> {
    if !(0.0..=1.0).contains(&u) {
        return Err(SampleError::BadUnitVariate(u));
    }
    Ok(())
}

/// Inverse-CDF sample of a triangular distribution.
///
/// For `u <= (mp-min)/(max-min)` the value is
/// `min + sqrt(u (max-min)(mp-min))`, otherwise
/// `max - sqrt((1-u)(max-min)(max-mp))`; a degenerate `min == max` returns
/// `min`.
pub fn sample_triangular(min: f64, mp: f64, max: f64, u: f64) -> Result<f64, SampleError> {
    if !(min <= mp && mp <= max) {
        return Err(SampleError::BadTriangular { min, mp, max });
    }
    check_unit(u)?;
    Ok(triangular_inv_cdf(min, mp, max, u))
}

pub(crate) fn triangular_inv_cdf(min: f64, mp: f64, max: f64, u: f64) -> f64 {
    let range = max - min;
    if range == 0.0 {
        return min;
    }
    let cut = (mp - min) / range;
    if u <= cut {
        min + (u * range * (mp - min)).sqrt()
    } else {
        max - ((1.0 - u) * range * (max - mp)).sqrt()
    }
}

/// Uniform sample over a closed interval: `lo + u (hi - lo)`.
pub fn sample_uniform(interval: Interval, u: f64) -> Result<f64, SampleError> {
    check_unit(u)?;
    Ok(uniform_inv_cdf(interval, u))
}

pub(crate) fn uniform_inv_cdf(interval: Interval, u: f64) -> f64 {
    interval.lo + u * (interval.hi - interval.lo)
}

/// Bernoulli occurrence draw: occurred iff `u < p`.
pub fn sample_bernoulli(p: f64, u: f64) -> Result<bool, SampleError> {
    if !(0.0..=1.0).contains(&p) {
        return Err(SampleError::BadProbability(p));
    }
    check_unit(u)?;
    Ok(u < p)
}

pub(crate) fn draw_impact(spec: &ImpactSpec, rng: &mut impl RngCore) -> f64 {
    match *spec {
        ImpactSpec::Point(v) => v,
        ImpactSpec::Uniform(iv) => uniform_inv_cdf(iv, unit_f64(rng)),
        ImpactSpec::Triangular { min, mp, max } => {
            triangular_inv_cdf(min, mp, max, unit_f64(rng))
        }
    }
}
