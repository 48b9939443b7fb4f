//! Parametric copula families: CDF, density, conditional distributions,
//! Kendall tau maps, and exact samplers.
//!
//! Clayton and Gumbel evaluate in log space so that strong dependence
//! (theta in the hundreds) neither overflows nor loses the tails.

use crate::error::Error;
use crate::normal::{bvn_cdf, phi, phi_inv};
use crate::Result;
use rand::Rng;
use rand_distr::{Distribution, Exp1, Gamma, StandardNormal};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Copula family. Survival Clayton is the 180-degree rotation of Clayton.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    Clayton,
    SurvivalClayton,
    Gumbel,
    Gaussian,
}

/// ln(1 + e^x) without overflow.
fn softplus(x: f64) -> f64 {
    if x > 35.0 {
        x
    } else if x < -35.0 {
        x.exp()
    } else {
        x.exp().ln_1p()
    }
}

impl std::fmt::Display for Family {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "clayton" => Ok(Family::Clayton),
            "survival-clayton" | "survival_clayton" => Ok(Family::SurvivalClayton),
            "gumbel" => Ok(Family::Gumbel),
            "gaussian" | "normal" => Ok(Family::Gaussian),
            other => Err(Error::InvalidParameter(format!(
                "unknown family '{other}' (expected clayton, survival-clayton, gumbel, gaussian)"
            ))),
        }
    }
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::Clayton => "clayton",
            Family::SurvivalClayton => "survival-clayton",
            Family::Gumbel => "gumbel",
            Family::Gaussian => "gaussian",
        }
    }

    /// Open interval of Kendall tau values the family can represent
    /// (as searched by the fitter).
    pub fn tau_range(self) -> (f64, f64) {
        match self {
            Family::Gaussian => (-0.999, 0.999),
            _ => (0.001, 0.999),
        }
    }

    /// Map Kendall's tau to the family parameter.
    pub fn tau_to_theta(self, tau: f64) -> Result<f64> {
        let (lo, hi) = self.tau_range();
        if !(tau >= lo && tau <= hi) {
            return Err(Error::InvalidParameter(format!(
                "tau {tau} outside [{lo}, {hi}] for family {self}"
            )));
        }
        Ok(match self {
            Family::Clayton | Family::SurvivalClayton => 2.0 * tau / (1.0 - tau),
            Family::Gumbel => 1.0 / (1.0 - tau),
            Family::Gaussian => (PI * tau / 2.0).sin(),
        })
    }

    /// Map the family parameter to Kendall's tau.
    pub fn theta_to_tau(self, theta: f64) -> Result<f64> {
        self.check_theta(theta)?;
        Ok(match self {
            Family::Clayton | Family::SurvivalClayton => theta / (theta + 2.0),
            Family::Gumbel => 1.0 - 1.0 / theta,
            Family::Gaussian => 2.0 * theta.asin() / PI,
        })
    }

    /// Reject parameters outside the family's domain.
    pub fn check_theta(self, theta: f64) -> Result<()> {
        let ok = theta.is_finite()
            && match self {
                Family::Clayton | Family::SurvivalClayton => theta > 0.0,
                Family::Gumbel => theta >= 1.0,
                Family::Gaussian => theta > -1.0 && theta < 1.0,
            };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidParameter(format!(
                "theta {theta} invalid for family {self}"
            )))
        }
    }

    /// C(u, v). Inputs are clamped to [0, 1].
    pub fn cdf(self, theta: f64, u: f64, v: f64) -> f64 {
        let u = u.clamp(0.0, 1.0);
        let v = v.clamp(0.0, 1.0);
        if u == 0.0 || v == 0.0 {
            return 0.0;
        }
        if u == 1.0 {
            return v;
        }
        if v == 1.0 {
            return u;
        }
        match self {
            Family::Clayton => clayton_ln_cdf(theta, u, v).exp(),
            Family::SurvivalClayton => {
                (u + v - 1.0 + clayton_ln_cdf(theta, 1.0 - u, 1.0 - v).exp()).max(0.0)
            }
            Family::Gumbel => gumbel_ln_cdf(theta, u, v).exp(),
            Family::Gaussian => bvn_cdf(phi_inv(u), phi_inv(v), theta),
        }
    }

    /// Copula density c(u, v) at an interior point.
    pub fn pdf(self, theta: f64, u: f64, v: f64) -> f64 {
        match self {
            Family::Clayton => clayton_ln_pdf(theta, u, v).exp(),
            Family::SurvivalClayton => clayton_ln_pdf(theta, 1.0 - u, 1.0 - v).exp(),
            Family::Gumbel => gumbel_ln_pdf(theta, u, v).exp(),
            Family::Gaussian => {
                let x = phi_inv(u);
                let y = phi_inv(v);
                let r2 = 1.0 - theta * theta;
                let q = theta * theta * (x * x + y * y) - 2.0 * theta * x * y;
                (-q / (2.0 * r2)).exp() / r2.sqrt()
            }
        }
    }

    /// Conditional distribution dC/du (u, v) = P(V <= v | U = u).
    pub fn dcdu(self, theta: f64, u: f64, v: f64) -> f64 {
        let v = v.clamp(0.0, 1.0);
        if v == 0.0 {
            return 0.0;
        }
        if v == 1.0 {
            return 1.0;
        }
        match self {
            Family::Clayton => clayton_ln_dcdu(theta, u, v).exp(),
            Family::SurvivalClayton => 1.0 - clayton_ln_dcdu(theta, 1.0 - u, 1.0 - v).exp(),
            Family::Gumbel => gumbel_ln_dcdu(theta, u, v).exp(),
            Family::Gaussian => {
                let x = phi_inv(u);
                let y = phi_inv(v);
                phi((y - theta * x) / (1.0 - theta * theta).sqrt())
            }
        }
    }

    /// Conditional distribution dC/dv (u, v) = P(U <= u | V = v).
    pub fn dcdv(self, theta: f64, u: f64, v: f64) -> f64 {
        // every family here is exchangeable or rotates an exchangeable one
        self.dcdu(theta, v, u)
    }

    /// Draw n pairs from the copula.
    pub fn sample<R: Rng + ?Sized>(
        self,
        theta: f64,
        n: usize,
        rng: &mut R,
    ) -> Result<Vec<(f64, f64)>> {
        self.check_theta(theta)?;
        let mut out = Vec::with_capacity(n);
        match self {
            Family::Clayton => sample_clayton(theta, n, rng, &mut out)?,
            Family::SurvivalClayton => {
                sample_clayton(theta, n, rng, &mut out)?;
                for p in &mut out {
                    *p = (1.0 - p.0, 1.0 - p.1);
                }
            }
            Family::Gumbel => sample_gumbel(theta, n, rng, &mut out),
            Family::Gaussian => {
                let s = (1.0 - theta * theta).sqrt();
                for _ in 0..n {
                    let z1: f64 = StandardNormal.sample(rng);
                    let z2: f64 = StandardNormal.sample(rng);
                    out.push((phi(z1), phi(theta * z1 + s * z2)));
                }
            }
        }
        Ok(out)
    }
}

/// ln T where T = u^-t + v^-t - 1, computed from a = -t ln u, b = -t ln v.
fn clayton_ln_t(theta: f64, u: f64, v: f64) -> f64 {
    let a = -theta * u.ln();
    let b = -theta * v.ln();
    let m = a.max(b);
    m + ((a - m).exp() + (b - m).exp() - (-m).exp()).ln()
}

fn clayton_ln_cdf(theta: f64, u: f64, v: f64) -> f64 {
    -clayton_ln_t(theta, u, v) / theta
}

fn clayton_ln_dcdu(theta: f64, u: f64, v: f64) -> f64 {
    -(theta + 1.0) * u.ln() - (1.0 / theta + 1.0) * clayton_ln_t(theta, u, v)
}

fn clayton_ln_pdf(theta: f64, u: f64, v: f64) -> f64 {
    (1.0 + theta).ln() - (theta + 1.0) * (u.ln() + v.ln())
        - (1.0 / theta + 2.0) * clayton_ln_t(theta, u, v)
}

/// ln S where S = x^t + y^t, x = -ln u, y = -ln v.
fn gumbel_ln_s(theta: f64, lx: f64, ly: f64) -> f64 {
    let m = lx.max(ly);
    theta * m + ((theta * (lx - m)).exp() + (theta * (ly - m)).exp()).ln()
}

fn gumbel_ln_cdf(theta: f64, u: f64, v: f64) -> f64 {
    let lx = (-u.ln()).ln();
    let ly = (-v.ln()).ln();
    -(gumbel_ln_s(theta, lx, ly) / theta).exp()
}

fn gumbel_ln_dcdu(theta: f64, u: f64, v: f64) -> f64 {
    let lx = (-u.ln()).ln();
    let ly = (-v.ln()).ln();
    let ln_s = gumbel_ln_s(theta, lx, ly);
    let ln_a = ln_s / theta;
    -ln_a.exp() + (1.0 / theta - 1.0) * ln_s + (theta - 1.0) * lx - u.ln()
}

fn gumbel_ln_pdf(theta: f64, u: f64, v: f64) -> f64 {
    let lx = (-u.ln()).ln();
    let ly = (-v.ln()).ln();
    let ln_s = gumbel_ln_s(theta, lx, ly);
    let a = (ln_s / theta).exp();
    -a + (theta - 1.0) * (lx + ly) - (u.ln() + v.ln()) + (2.0 / theta - 2.0) * ln_s
        + ((theta - 1.0) / a).ln_1p()
}

/// Gamma-frailty draw: W ~ Gamma(1/theta), U_i = (1 + E_i / W)^(-1/theta).
/// ln W is formed directly (boosted Gamma for shape < 1) so large theta
/// cannot underflow the frailty.
fn sample_clayton<R: Rng + ?Sized>(
    theta: f64,
    n: usize,
    rng: &mut R,
    out: &mut Vec<(f64, f64)>,
) -> Result<()> {
    let alpha = 1.0 / theta;
    let gamma = Gamma::new(alpha.max(1.0), 1.0)
        .map_err(|e| Error::Numerical(format!("gamma sampler: {e}")))?;
    for _ in 0..n {
        let ln_w = if alpha >= 1.0 {
            let w: f64 = gamma.sample(rng);
            w.ln()
        } else {
            // Gamma(a) = Gamma(a + 1) * U^(1/a), taken in logs
            let boosted = Gamma::new(alpha + 1.0, 1.0)
                .map_err(|e| Error::Numerical(format!("gamma sampler: {e}")))?;
            let w1: f64 = boosted.sample(rng);
            let mut q: f64 = rng.random();
            while q == 0.0 {
                q = rng.random();
            }
            w1.ln() + q.ln() / alpha
        };
        let e1: f64 = Exp1.sample(rng);
        let e2: f64 = Exp1.sample(rng);
        let lu = -softplus(e1.ln() - ln_w) / theta;
        let lv = -softplus(e2.ln() - ln_w) / theta;
        out.push((lu.exp(), lv.exp()));
    }
    Ok(())
}

/// Stable-frailty draw: S positive alpha-stable (Kanter's representation),
/// U_i = exp(-(E_i / S)^alpha) with alpha = 1/theta.
fn sample_gumbel<R: Rng + ?Sized>(theta: f64, n: usize, rng: &mut R, out: &mut Vec<(f64, f64)>) {
    if theta == 1.0 {
        for _ in 0..n {
            out.push((rng.random(), rng.random()));
        }
        return;
    }
    let alpha = 1.0 / theta;
    for _ in 0..n {
        let th: f64 = rng.random::<f64>() * PI;
        let e: f64 = Exp1.sample(rng);
        let ln_a = (alpha / (1.0 - alpha)) * (alpha * th).sin().ln()
            + ((1.0 - alpha) * th).sin().ln()
            - th.sin().ln() / (1.0 - alpha);
        let ln_s = (1.0 - alpha) / alpha * (ln_a - e.ln());
        let e1: f64 = Exp1.sample(rng);
        let e2: f64 = Exp1.sample(rng);
        let u = (-(alpha * (e1.ln() - ln_s)).exp().min(f64::MAX)).exp();
        let v = (-(alpha * (e2.ln() - ln_s)).exp().min(f64::MAX)).exp();
        out.push((u, v));
    }
}
