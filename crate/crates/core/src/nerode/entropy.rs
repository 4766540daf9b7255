//! Finite-horizon entropy estimates from a γ-table.
//!
//! `h(L)` is a limsup, so a table can only suggest it. Reported side by side:
//! `aₙ = log₂γₙ / n`, the maximum of `aₙ` over the tail, and the least-squares
//! slope of `log₂γₙ` against `n` over the tail. The tail is the upper half of
//! the usable range, and at least three records.

use serde::Serialize;

use crate::error::GammaError;
use crate::nerode::GammaTable;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Zero,
    PositiveFinite,
    UnboundedTrend,
    Inconclusive,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Zero => "zero",
            Verdict::PositiveFinite => "positive-finite",
            Verdict::UnboundedTrend => "unbounded-trend",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EntropyThresholds {
    /// Slopes below this count as zero entropy.
    pub slope_floor: f64,
    /// Positive-finite slopes may exceed `log₂|Σ|` by this much.
    pub slope_slack: f64,
    /// Minimum number of tail records.
    pub min_tail: usize,
    /// Minimum number of usable records overall.
    pub min_records: usize,
}

impl Default for EntropyThresholds {
    fn default() -> Self {
        Self {
            slope_floor: 0.05,
            slope_slack: 0.5,
            min_tail: 3,
            min_records: 4,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PerN {
    pub n: usize,
    pub gamma: u64,
    pub a_n: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EntropyEstimate {
    pub per_n: Vec<PerN>,
    pub tail_start: usize,
    pub tail_max: f64,
    pub slope: f64,
    /// Residual sum of squares of `log₂γ ~ α + βn` over the tail.
    pub linear_residual: f64,
    /// Residual sum of squares of `log₂γ ~ α + c·log₂(n+1)` over the tail.
    pub log_residual: f64,
    pub verdict: Verdict,
    pub thresholds: EntropyThresholds,
}

/// Least-squares line through `(x, y)`: `(slope, intercept, residual SS)`.
pub fn fit_line(xs: &[f64], ys: &[f64]) -> (f64, f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = if sxx == 0.0 { 0.0 } else { sxy / sxx };
    let icpt = my - slope * mx;
    let rss = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| (y - icpt - slope * x).powi(2))
        .sum();
    (slope, icpt, rss)
}

pub fn a_n(gamma: u64, n: usize) -> f64 {
    (gamma as f64).log2() / n as f64
}

pub fn entropy_estimate(table: &GammaTable) -> Result<EntropyEstimate, GammaError> {
    entropy_estimate_with(table, EntropyThresholds::default())
}

pub fn entropy_estimate_with(
    table: &GammaTable,
    th: EntropyThresholds,
) -> Result<EntropyEstimate, GammaError> {
    let usable: Vec<_> = table
        .records
        .iter()
        .filter(|r| r.n >= 1 && !r.partial)
        .collect();
    if usable.len() < th.min_records.max(th.min_tail) {
        return Err(GammaError::TooFewRecords {
            needed: th.min_records.max(th.min_tail),
            got: usable.len(),
        });
    }
    let per_n: Vec<PerN> = usable
        .iter()
        .map(|r| PerN {
            n: r.n,
            gamma: r.gamma,
            a_n: a_n(r.gamma, r.n),
        })
        .collect();
    let tail_len = usable.len().div_ceil(2).max(th.min_tail).min(usable.len());
    let tail = &per_n[per_n.len() - tail_len..];
    let xs: Vec<f64> = tail.iter().map(|p| p.n as f64).collect();
    let ys: Vec<f64> = tail.iter().map(|p| (p.gamma as f64).log2()).collect();
    let logs: Vec<f64> = xs.iter().map(|x| (x + 1.0).log2()).collect();
    let tail_max = tail.iter().map(|p| p.a_n).fold(0.0, f64::max);
    let (slope, _, linear_residual) = fit_line(&xs, &ys);
    let (_, _, log_residual) = fit_line(&logs, &ys);

    let increasing = tail.windows(2).all(|w| w[1].a_n > w[0].a_n);
    let convex = ys.windows(3).all(|w| w[2] - 2.0 * w[1] + w[0] > 1e-9);
    let constant = tail.windows(2).all(|w| w[0].gamma == w[1].gamma);
    let ceiling = (table.alphabet_size as f64).log2() + th.slope_slack;

    let tail_start = tail[0].n;
    let verdict = if constant || slope < th.slope_floor {
        Verdict::Zero
    } else if increasing && convex {
        Verdict::UnboundedTrend
    } else if log_residual < linear_residual {
        Verdict::Zero
    } else if slope <= ceiling {
        Verdict::PositiveFinite
    } else {
        Verdict::Inconclusive
    };
    Ok(EntropyEstimate {
        per_n,
        tail_start,
        tail_max,
        slope,
        linear_residual,
        log_residual,
        verdict,
        thresholds: th,
    })
}
