//! Histogram export for external plotting: equal-width bins over the sample
//! range, cumulative fractions, and the percentile marker.

use std::io::{self, Write};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use riskprio_core::percentile;

#[derive(Debug, Error, PartialEq)]
pub enum HistogramError {
    #[error("cannot build a histogram from an empty sample array")]
    EmptySamples,
    #[error("bin count must be at least 1")]
    ZeroBins,
    #[error("percentile must lie strictly between 0 and 1, got {0}")]
    BadPercentile(f64),
}

/// Binned samples plus the marked percentile value.
///
/// `edges` has one more entry than `counts`; bins are half-open except the
/// last, which is closed on the right so the maximum sample is counted.
/// Degenerate samples (all equal) collapse to a single zero-width bin.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HistogramExport {
    pub edges: Vec<f64>,
    pub counts: Vec<u64>,
    pub cum_frac: Vec<f64>,
    pub percentile: f64,
    pub percentile_value: f64,
}

/// Bins `samples` into `bins` equal-width bins spanning `[min, max]` and
/// marks the `alpha` percentile.
pub fn export_histogram(
    samples: &[f64],
    bins: usize,
    alpha: f64,
) -> Result<HistogramExport, HistogramError> {
    if samples.is_empty() {
        return Err(HistogramError::EmptySamples);
    }
    if bins == 0 {
        return Err(HistogramError::ZeroBins);
    }
    let percentile_value =
        percentile(samples, alpha).map_err(|_| HistogramError::BadPercentile(alpha))?;

    let min = samples.iter().copied().fold(f64::INFINITY, f64::min);
    let max = samples.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let width = max - min;

    let (edges, counts) = if width == 0.0 {
        (vec![min, max], vec![samples.len() as u64])
    } else {
        let edges: Vec<f64> = (0..=bins)
            .map(|i| min + width * i as f64 / bins as f64)
            .collect();
        let mut counts = vec![0u64; bins];
        for &s in samples {
            let idx = (((s - min) / width) * bins as f64) as usize;
            counts[idx.min(bins - 1)] += 1;
        }
        (edges, counts)
    };

    let total = samples.len() as f64;
    let mut cum = 0u64;
    let cum_frac = counts
        .iter()
        .map(|&c| {
            cum += c;
            cum as f64 / total
        })
        .collect();

    Ok(HistogramExport {
        edges,
        counts,
        cum_frac,
        percentile: alpha,
        percentile_value,
    })
}

impl HistogramExport {
    /// Delimited rows `bin_lo,bin_hi,count,cum_frac` plus a one-line
    /// percentile marker.
    pub fn write_delimited(&self, w: &mut dyn Write) -> io::Result<()> {
        writeln!(w, "bin_lo,bin_hi,count,cum_frac")?;
        for (i, &count) in self.counts.iter().enumerate() {
            writeln!(
                w,
                "{},{},{},{}",
                self.edges[i],
                self.edges[i + 1],
                count,
                self.cum_frac[i]
            )?;
        }
        writeln!(
            w,
            "# P{:.0} = {}",
            self.percentile * 100.0,
            self.percentile_value
        )
    }
}
