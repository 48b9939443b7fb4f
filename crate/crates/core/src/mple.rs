//! Maximum pseudo-likelihood estimation.
//!
//! The censoring-aware likelihood gives each observation one of four
//! contributions, depending on which margins are tied:
//! both tied      -> rectangle mass of the copula between the rank bounds
//! x tied only    -> difference of dC/dv across the x bounds
//! y tied only    -> difference of dC/du across the y bounds
//! untied         -> copula density
//! Two classical baselines (mid-ranks, random rank completion) share the
//! same optimizer but use the density everywhere.

use crate::copula::Family;
use crate::error::Error;
use crate::optim::brent_min;
use crate::pseudo::{CensoredData, Margin};
use crate::stream::Seed;
use crate::Result;
use rand::seq::SliceRandom;
use serde::Serialize;

/// Likelihood contributions are clamped here before taking logs, so that a
/// single zero-mass point vetoes a parameter without producing -inf.
const MIN_LIK: f64 = 1e-300;

/// Brent tolerance on the tau scale.
const TAU_TOL: f64 = 1e-7;
const MAX_ITER: usize = 200;

/// Result of a one-parameter fit.
#[derive(Debug, Clone, Serialize)]
pub struct Fit {
    pub family: Family,
    pub theta: f64,
    pub tau: f64,
    pub loglik: f64,
    pub iterations: usize,
    /// False when the optimizer ran out of iterations or stopped on the
    /// boundary of the parameter range.
    pub converged: bool,
}

/// Sum with Neumaier compensation; the rectangle mass is an alternating sum
/// of four nearly equal CDF values.
fn comp_sum(xs: &[f64]) -> f64 {
    let mut s = 0.0;
    let mut c = 0.0;
    for &x in xs {
        let t = s + x;
        if s.abs() >= x.abs() {
            c += (s - t) + x;
        } else {
            c += (x - t) + s;
        }
        s = t;
    }
    s + c
}

/// Likelihood of one observation with censoring bounds `[u_lo, u_up]` x
/// `[v_lo, v_up]`. Degenerate intervals mean the margin is untied:
/// both degenerate -> density; one degenerate -> difference of the
/// conditional distribution across the other margin's bounds; none ->
/// rectangle probability from four CDF corners.
pub fn censored_likelihood(
    family: Family,
    theta: f64,
    u_lo: f64,
    u_up: f64,
    v_lo: f64,
    v_up: f64,
) -> f64 {
    match (u_lo < u_up, v_lo < v_up) {
        (true, true) => comp_sum(&[
            family.cdf(theta, u_up, v_up),
            -family.cdf(theta, u_lo, v_up),
            -family.cdf(theta, u_up, v_lo),
            family.cdf(theta, u_lo, v_lo),
        ]),
        (true, false) => family.dcdv(theta, u_up, v_up) - family.dcdv(theta, u_lo, v_up),
        (false, true) => family.dcdu(theta, u_up, v_up) - family.dcdu(theta, u_up, v_lo),
        (false, false) => family.pdf(theta, u_up, v_up),
    }
}

/// One observation's likelihood under the censoring scheme.
fn contribution(family: Family, theta: f64, d: &CensoredData, i: usize) -> f64 {
    censored_likelihood(
        family, theta, d.u_lo[i], d.u_up[i], d.v_lo[i], d.v_up[i],
    )
}

/// Log pseudo-likelihood of the censoring model at `theta`.
pub fn loglik_censoring(family: Family, theta: f64, data: &CensoredData) -> f64 {
    (0..data.n())
        .map(|i| contribution(family, theta, data, i).max(MIN_LIK).ln())
        .sum()
}

/// Log pseudo-likelihood using the density at fixed points.
pub fn loglik_density(family: Family, theta: f64, points: &[(f64, f64)]) -> f64 {
    points
        .iter()
        .map(|&(u, v)| family.pdf(theta, u, v).max(MIN_LIK).ln())
        .sum()
}

fn run_brent<F: FnMut(f64) -> f64>(
    family: Family,
    mut neg_loglik_at_tau: F,
    tau0: Option<f64>,
) -> Result<Fit> {
    let (lo, hi) = family.tau_range();
    let start = tau0.filter(|t| *t > lo && *t < hi);
    let r = brent_min(&mut neg_loglik_at_tau, lo, hi, start, TAU_TOL, MAX_ITER);
    if !r.fx.is_finite() {
        return Err(Error::Numerical(format!(
            "likelihood not finite at tau = {}",
            r.x
        )));
    }
    Ok(Fit {
        family,
        theta: family.tau_to_theta(r.x)?,
        tau: r.x,
        loglik: -r.fx,
        iterations: r.iters,
        converged: r.converged,
    })
}

/// Censoring-aware maximum pseudo-likelihood fit.
///
/// `tau0` optionally seeds the search; the optimizer stays inside the
/// family's tau range either way.
pub fn fit_censoring(family: Family, data: &CensoredData, tau0: Option<f64>) -> Result<Fit> {
    run_brent(
        family,
        |tau| {
            let theta = family.tau_to_theta(tau).expect("tau within range");
            -loglik_censoring(family, theta, data)
        },
        tau0,
    )
}

/// Classical density MPLE at fixed pseudo-observations.
pub fn fit_density(family: Family, points: &[(f64, f64)], tau0: Option<f64>) -> Result<Fit> {
    if points.len() < 2 {
        return Err(Error::InvalidInput("need at least 2 points".into()));
    }
    run_brent(
        family,
        |tau| {
            let theta = family.tau_to_theta(tau).expect("tau within range");
            -loglik_density(family, theta, points)
        },
        tau0,
    )
}

/// Baseline: collapse each tie block to its mid-rank and run density MPLE.
pub fn fit_average_rank(family: Family, data: &CensoredData, tau0: Option<f64>) -> Result<Fit> {
    fit_density(family, &data.midpoints(), tau0)
}

/// Baseline: break ties by randomly permuting ranks inside each tie block,
/// fit each completion by density MPLE, and average the parameter estimates
/// over `m` completions.
pub fn fit_random_break(
    family: Family,
    data: &CensoredData,
    m: usize,
    seed: Seed,
    tau0: Option<f64>,
) -> Result<Fit> {
    if m == 0 {
        return Err(Error::InvalidParameter("m must be positive".into()));
    }
    let n = data.n();
    let scale = 1.0 / (n as f64 + 1.0);
    let bx = data.blocks(Margin::X);
    let by = data.blocks(Margin::Y);
    let mut theta_sum = 0.0;
    let mut loglik_sum = 0.0;
    let mut iterations = 0;
    let mut all_converged = true;
    for j in 0..m {
        let mut rng = seed.child(j as u64).rng();
        let mut pts = vec![(0.0, 0.0); n];
        for (blocks, grab) in [(&bx, 0usize), (&by, 1usize)] {
            for (members, r_lo, r_up) in blocks.iter() {
                let mut ranks: Vec<usize> = (*r_lo..=*r_up).collect();
                ranks.shuffle(&mut rng);
                for (&idx, &r) in members.iter().zip(&ranks) {
                    let val = r as f64 * scale;
                    if grab == 0 {
                        pts[idx].0 = val;
                    } else {
                        pts[idx].1 = val;
                    }
                }
            }
        }
        let fit = fit_density(family, &pts, tau0)?;
        theta_sum += fit.theta;
        loglik_sum += fit.loglik;
        iterations += fit.iterations;
        all_converged &= fit.converged;
    }
    let theta = theta_sum / m as f64;
    Ok(Fit {
        family,
        theta,
        tau: family.theta_to_tau(theta)?,
        loglik: loglik_sum / m as f64,
        iterations,
        converged: all_converged,
    })
}
