//! Goodness-of-fit: empirical copula, Cramér-von Mises distance, and the
//! tie-preserving parametric bootstrap test.

use crate::copula::Family;
use crate::error::Error;
use crate::mple::{fit_average_rank, fit_censoring, Fit};
use crate::pseudo::{CensoredData, TiePattern};
use crate::sim::TieMechanism;
use crate::stream::Seed;
use crate::Result;
use rayon::prelude::*;
use serde::Serialize;

const MAX_FAIL_FRAC: f64 = 0.05;

/// How the test handles ties.
#[derive(Debug, Clone)]
pub enum TieStrategy {
    /// Reimpose the observed tie pattern on every replicate by rank matching
    /// (the default; needs no knowledge of how the ties arose).
    Match,
    /// Re-round replicate margins with a known tie mechanism (bench use).
    Round(TieMechanism),
    /// Ignore ties entirely: mid-rank pseudo-observations, density MPLE, and
    /// tie-free replicates. This is the classical test; on tied data it does
    /// not hold its size.
    None,
}

/// Test output: observed distance, bootstrap p-value, and the fitted model.
#[derive(Debug, Clone, Serialize)]
pub struct GofReport {
    pub fit: Fit,
    pub statistic: f64,
    pub p_value: f64,
    /// Replicate distances that fitted successfully, in replicate order.
    pub replicate_stats: Vec<f64>,
    pub b: usize,
    pub b_failed: usize,
    /// True when the p-value uses the (count + 1) / (B + 1) correction.
    pub plus_one: bool,
    pub seed: u64,
}

/// The data with every censoring interval collapsed to its midpoint: the
/// mid-rank pseudo-observations a tie-ignoring analysis would use.
fn midrank_data(d: &CensoredData) -> CensoredData {
    let mids = d.midpoints();
    let us: Vec<f64> = mids.iter().map(|p| p.0).collect();
    let vs: Vec<f64> = mids.iter().map(|p| p.1).collect();
    CensoredData {
        u_lo: us.clone(),
        u_up: us,
        v_lo: vs.clone(),
        v_up: vs,
    }
}

/// Empirical copula at (s, t): the fraction of upper-bound pseudo-observation
/// pairs dominated by the point.
pub fn empirical_copula(data: &CensoredData, s: f64, t: f64) -> f64 {
    let n = data.n();
    let hits = (0..n)
        .filter(|&i| data.u_up[i] <= s && data.v_up[i] <= t)
        .count();
    hits as f64 / n as f64
}

/// Cramér-von Mises distance between the empirical copula and C_theta,
/// summed over the upper-bound pseudo-observations (the atoms of C_n).
pub fn cvm_statistic(family: Family, theta: f64, data: &CensoredData) -> f64 {
    let n = data.n();
    (0..n)
        .map(|i| {
            let (s, t) = (data.u_up[i], data.v_up[i]);
            let diff = empirical_copula(data, s, t) - family.cdf(theta, s, t);
            diff * diff
        })
        .sum()
}

/// One bootstrap replicate: sample from the fitted copula, apply the tie
/// strategy, refit, and return its distance.
fn replicate_stat(
    family: Family,
    theta: f64,
    n: usize,
    strategy: &TieStrategy,
    pattern: &TiePattern,
    seed: Seed,
    tau0: Option<f64>,
) -> Option<f64> {
    let mut rng = seed.rng();
    let pts = family.sample(theta, n, &mut rng).ok()?;
    let data = match strategy {
        TieStrategy::Match => pattern.imprint(&pts).ok()?,
        TieStrategy::Round(mech) => {
            let tied = mech.apply(&pts);
            let xs: Vec<f64> = tied.iter().map(|p| p.0).collect();
            let ys: Vec<f64> = tied.iter().map(|p| p.1).collect();
            CensoredData::from_raw(&xs, &ys).ok()?
        }
        TieStrategy::None => {
            let xs: Vec<f64> = pts.iter().map(|p| p.0).collect();
            let ys: Vec<f64> = pts.iter().map(|p| p.1).collect();
            CensoredData::from_raw(&xs, &ys).ok()?
        }
    };
    let fit = fit_censoring(family, &data, tau0).ok()?;
    if !fit.converged {
        return None;
    }
    Some(cvm_statistic(family, fit.theta, &data))
}

/// Parametric bootstrap goodness-of-fit test for `family`.
///
/// The p-value is the share of replicate distances at least as large as the
/// observed one; `plus_one` switches to (count + 1) / (B_eff + 1).
#[allow(clippy::too_many_arguments)]
pub fn gof_test(
    family: Family,
    data: &CensoredData,
    b: usize,
    seed: Seed,
    strategy: TieStrategy,
    plus_one: bool,
    tau0: Option<f64>,
) -> Result<GofReport> {
    if b < 100 {
        return Err(Error::InvalidParameter(format!(
            "need at least 100 bootstrap replicates, got {b}"
        )));
    }
    // The tie-ignoring strategy evaluates the whole pipeline the classical
    // way: mid-rank atoms and the density pseudo-likelihood. Both coincide
    // with the censoring path when the data are tie-free.
    let (fit, statistic) = match &strategy {
        TieStrategy::None => {
            let fit = fit_average_rank(family, data, tau0)?;
            let naive = midrank_data(data);
            let stat = cvm_statistic(family, fit.theta, &naive);
            (fit, stat)
        }
        _ => {
            let fit = fit_censoring(family, data, tau0)?;
            let stat = cvm_statistic(family, fit.theta, data);
            (fit, stat)
        }
    };
    let pattern = TiePattern::of(data);
    let n = data.n();
    let draws: Vec<Option<f64>> = (0..b)
        .into_par_iter()
        .map(|i| {
            replicate_stat(
                family,
                fit.theta,
                n,
                &strategy,
                &pattern,
                seed.child(i as u64),
                tau0,
            )
        })
        .collect();
    let replicate_stats: Vec<f64> = draws.iter().filter_map(|d| *d).collect();
    let failed = b - replicate_stats.len();
    if (failed as f64) > MAX_FAIL_FRAC * b as f64 {
        return Err(Error::BootstrapUnstable { failed, total: b });
    }
    let b_eff = replicate_stats.len();
    let count = replicate_stats.iter().filter(|&&d| d >= statistic).count();
    let p_value = if plus_one {
        (count + 1) as f64 / (b_eff + 1) as f64
    } else {
        count as f64 / b_eff as f64
    };
    Ok(GofReport {
        fit,
        statistic,
        p_value,
        replicate_stats,
        b,
        b_failed: failed,
        plus_one,
        seed: seed.0,
    })
}
