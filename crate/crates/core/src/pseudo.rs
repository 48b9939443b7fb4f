//! Rank-based pseudo-observations with interval censoring for ties.
//!
//! An observation whose value is tied with m - 1 others occupies a block of
//! ranks; instead of picking one rank arbitrarily, both the smallest and the
//! largest rank of the block are kept, scaled by 1 / (n + 1). Untied values
//! have equal bounds.

use crate::error::Error;
use crate::Result;
use serde::Serialize;

/// Bivariate sample reduced to per-margin rank bounds on the uniform scale.
#[derive(Debug, Clone, PartialEq)]
pub struct CensoredData {
    pub u_lo: Vec<f64>,
    pub u_up: Vec<f64>,
    pub v_lo: Vec<f64>,
    pub v_up: Vec<f64>,
}

/// Counts describing how tied each margin is.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct TieSummary {
    pub n: usize,
    pub distinct_x: usize,
    pub distinct_y: usize,
    pub tied_frac_x: f64,
    pub tied_frac_y: f64,
    pub max_block_x: usize,
    pub max_block_y: usize,
}

/// (lowest rank, highest rank) of each value's tie block, 1-based.
fn rank_bounds(values: &[f64]) -> Result<Vec<(usize, usize)>> {
    let n = values.len();
    for (i, x) in values.iter().enumerate() {
        if !x.is_finite() {
            return Err(Error::InvalidInput(format!(
                "non-finite value {x} at index {i}"
            )));
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut bounds = vec![(0usize, 0usize); n];
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && values[order[end]] == values[order[start]] {
            end += 1;
        }
        for &idx in &order[start..end] {
            bounds[idx] = (start + 1, end);
        }
        start = end;
    }
    Ok(bounds)
}

impl CensoredData {
    /// Build pseudo-observations from raw margins.
    pub fn from_raw(x: &[f64], y: &[f64]) -> Result<CensoredData> {
        if x.len() != y.len() {
            return Err(Error::InvalidInput(format!(
                "margin lengths differ: {} vs {}",
                x.len(),
                y.len()
            )));
        }
        if x.len() < 2 {
            return Err(Error::InvalidInput(format!(
                "need at least 2 observations, got {}",
                x.len()
            )));
        }
        let n = x.len();
        let np1 = n as f64 + 1.0;
        let bx = rank_bounds(x)?;
        let by = rank_bounds(y)?;
        // a margin with a single distinct value carries no rank information
        if bx[0] == (1, n) {
            return Err(Error::InvalidInput("margin x is constant".into()));
        }
        if by[0] == (1, n) {
            return Err(Error::InvalidInput("margin y is constant".into()));
        }
        Ok(CensoredData {
            u_lo: bx.iter().map(|b| b.0 as f64 / np1).collect(),
            u_up: bx.iter().map(|b| b.1 as f64 / np1).collect(),
            v_lo: by.iter().map(|b| b.0 as f64 / np1).collect(),
            v_up: by.iter().map(|b| b.1 as f64 / np1).collect(),
        })
    }

    pub fn n(&self) -> usize {
        self.u_lo.len()
    }

    /// True when observation i is tied in the first margin.
    pub fn x_tied(&self, i: usize) -> bool {
        self.u_lo[i] < self.u_up[i]
    }

    /// True when observation i is tied in the second margin.
    pub fn y_tied(&self, i: usize) -> bool {
        self.v_lo[i] < self.v_up[i]
    }

    /// Mid-rank pseudo-observations (tie blocks collapsed to their average
    /// rank), as used by the classical estimator.
    pub fn midpoints(&self) -> Vec<(f64, f64)> {
        (0..self.n())
            .map(|i| {
                (
                    0.5 * (self.u_lo[i] + self.u_up[i]),
                    0.5 * (self.v_lo[i] + self.v_up[i]),
                )
            })
            .collect()
    }

    /// Tie-block index sets for one margin: groups of observations that share
    /// a rank interval, each with the block's 1-based rank range.
    pub fn blocks(&self, margin: Margin) -> Vec<(Vec<usize>, usize, usize)> {
        let (lo, up) = match margin {
            Margin::X => (&self.u_lo, &self.u_up),
            Margin::Y => (&self.v_lo, &self.v_up),
        };
        let n = self.n();
        let scale = n as f64 + 1.0;
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| lo[a].total_cmp(&lo[b]));
        let mut out = Vec::new();
        let mut start = 0;
        while start < n {
            let mut end = start + 1;
            while end < n && lo[order[end]] == lo[order[start]] {
                end += 1;
            }
            let members: Vec<usize> = order[start..end].to_vec();
            let r_lo = (lo[members[0]] * scale).round() as usize;
            let r_up = (up[members[0]] * scale).round() as usize;
            out.push((members, r_lo, r_up));
            start = end;
        }
        out
    }

    pub fn tie_summary(&self) -> TieSummary {
        let n = self.n();
        let bx = self.blocks(Margin::X);
        let by = self.blocks(Margin::Y);
        let tied = |blocks: &[(Vec<usize>, usize, usize)]| {
            blocks
                .iter()
                .filter(|b| b.0.len() > 1)
                .map(|b| b.0.len())
                .sum::<usize>() as f64
                / n as f64
        };
        TieSummary {
            n,
            distinct_x: bx.len(),
            distinct_y: by.len(),
            tied_frac_x: tied(&bx),
            tied_frac_y: tied(&by),
            max_block_x: bx.iter().map(|b| b.0.len()).max().unwrap_or(0),
            max_block_y: by.iter().map(|b| b.0.len()).max().unwrap_or(0),
        }
    }
}

/// Which margin of the pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Margin {
    X,
    Y,
}

/// The tie structure of a dataset, detached from which observation is which:
/// the sorted bound vectors of each margin.
#[derive(Debug, Clone, PartialEq)]
pub struct TiePattern {
    u_lo: Vec<f64>,
    u_up: Vec<f64>,
    v_lo: Vec<f64>,
    v_up: Vec<f64>,
}

impl TiePattern {
    pub fn of(data: &CensoredData) -> TiePattern {
        let sorted = |v: &[f64]| {
            let mut s = v.to_vec();
            s.sort_by(f64::total_cmp);
            s
        };
        TiePattern {
            u_lo: sorted(&data.u_lo),
            u_up: sorted(&data.u_up),
            v_lo: sorted(&data.v_lo),
            v_up: sorted(&data.v_up),
        }
    }

    pub fn n(&self) -> usize {
        self.u_lo.len()
    }

    /// Impose this tie structure on a fresh (tie-free) sample: the element
    /// with marginal rank i receives the i-th smallest observed lower and
    /// upper bound. Blocks of equal bounds are recreated exactly.
    ///
    /// Errors if the fresh sample has tied coordinates within a margin,
    /// which a correct continuous sampler produces with probability zero.
    pub fn imprint(&self, pairs: &[(f64, f64)]) -> Result<CensoredData> {
        let n = pairs.len();
        if n != self.n() {
            return Err(Error::InvalidInput(format!(
                "sample size {n} does not match pattern size {}",
                self.n()
            )));
        }
        let ranks = |get: &dyn Fn(&(f64, f64)) -> f64| -> Result<Vec<usize>> {
            let mut order: Vec<usize> = (0..n).collect();
            order.sort_by(|&a, &b| get(&pairs[a]).total_cmp(&get(&pairs[b])));
            if order
                .windows(2)
                .any(|w| get(&pairs[w[0]]) == get(&pairs[w[1]]))
            {
                return Err(Error::Numerical(
                    "fresh sample has tied coordinates".into(),
                ));
            }
            let mut rank = vec![0usize; n];
            for (r, &idx) in order.iter().enumerate() {
                rank[idx] = r;
            }
            Ok(rank)
        };
        let rx = ranks(&|p| p.0)?;
        let ry = ranks(&|p| p.1)?;
        Ok(CensoredData {
            u_lo: rx.iter().map(|&r| self.u_lo[r]).collect(),
            u_up: rx.iter().map(|&r| self.u_up[r]).collect(),
            v_lo: ry.iter().map(|&r| self.v_lo[r]).collect(),
            v_up: ry.iter().map(|&r| self.v_up[r]).collect(),
        })
    }
}

/// Kendall's tau-b: pair concordance corrected for ties in both margins.
/// Errors when either margin is constant.
pub fn kendall_tau_b(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() || x.len() < 2 {
        return Err(Error::InvalidInput(
            "tau-b needs two margins of equal length >= 2".into(),
        ));
    }
    let n = x.len();
    let mut net = 0i64;
    let mut ties_x = 0i64;
    let mut ties_y = 0i64;
    for i in 0..n {
        for j in (i + 1)..n {
            let dx = x[i] - x[j];
            let dy = y[i] - y[j];
            if dx == 0.0 {
                ties_x += 1;
            }
            if dy == 0.0 {
                ties_y += 1;
            }
            if dx != 0.0 && dy != 0.0 {
                net += if (dx > 0.0) == (dy > 0.0) { 1 } else { -1 };
            }
        }
    }
    let n0 = (n * (n - 1) / 2) as i64;
    if n0 == ties_x || n0 == ties_y {
        return Err(Error::InvalidInput("a margin is constant".into()));
    }
    Ok(net as f64 / (((n0 - ties_x) as f64) * ((n0 - ties_y) as f64)).sqrt())
}
