//! Floating-point companions: the tree function on `[0, 1/e)` by Newton's
//! method, and the growth of `Q(n)` against `sqrt(pi n / 2)`.

use std::f64::consts::{E, PI};

use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::identity::ramanujan_q;

/// Newton stops once `|y - z e^y|` is at most this.
pub const NEWTON_TOLERANCE: f64 = 1e-14;
/// Largest residual on any value handed back to a caller.
pub const ACCEPT_TOLERANCE: f64 = 1e-12;
pub const MAX_NEWTON_ITERATIONS: u32 = 64;

/// Window for `Q(n) / sqrt(pi n / 2)` once `n >= Q_WINDOW_MIN_N`.
pub const Q_RATIO_WINDOW: (f64, f64) = (0.97, 1.01);
pub const Q_WINDOW_MIN_N: u64 = 100;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TreeEvalResult {
    pub z: f64,
    pub y: f64,
    pub iterations: u32,
    /// `|y - z e^y|`
    pub residual: f64,
}

/// Principal solution `y` of `y = z e^y` for `0 <= z < 1/e`.
pub fn tree_eval(z: f64) -> Result<TreeEvalResult> {
    if !(0.0..1.0 / E).contains(&z) {
        return Err(Error::Domain(format!(
            "tree function needs 0 <= z < 1/e, got {z}"
        )));
    }
    let residual_at = |y: f64| (y - z * y.exp()).abs();

    // f(y) = y e^{-y} - z is increasing and concave on [0, 1), so from
    // y = z <= root the iterates increase monotonically to the root.
    let mut y = z;
    let mut residual = residual_at(y);
    let mut iterations = 0;
    while residual > NEWTON_TOLERANCE {
        if iterations == MAX_NEWTON_ITERATIONS {
            return Err(Error::NonConvergence { z, iterations });
        }
        let decay = (-y).exp();
        let step = (y * decay - z) / (decay * (1.0 - y));
        if !step.is_finite() {
            return Err(Error::NonConvergence { z, iterations });
        }
        y -= step;
        residual = residual_at(y);
        iterations += 1;
    }

    if !(0.0..1.0).contains(&y) || residual > ACCEPT_TOLERANCE {
        return Err(Error::NonConvergence { z, iterations });
    }
    Ok(TreeEvalResult {
        z,
        y,
        iterations,
        residual,
    })
}

/// `Q(n)` rounded to the nearest `f64`.
pub fn q_float(n: u64) -> Result<f64> {
    let q = ramanujan_q(n)?;
    q.to_f64()
        .ok_or_else(|| Error::Inconsistency(format!("Q({n}) does not fit in f64")))
}

/// Leading-order growth `sqrt(pi n / 2)`. The next term is `-1/3`.
pub fn q_leading_order(n: u64) -> f64 {
    (PI * n as f64 / 2.0).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QGrowthRow {
    pub n: u64,
    pub q: f64,
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct QGrowthTable {
    pub rows: Vec<QGrowthRow>,
}

impl QGrowthTable {
    /// Every row with `n >= Q_WINDOW_MIN_N` has its ratio inside
    /// [`Q_RATIO_WINDOW`].
    pub fn window_holds(&self) -> bool {
        let (lo, hi) = Q_RATIO_WINDOW;
        self.rows
            .iter()
            .filter(|r| r.n >= Q_WINDOW_MIN_N)
            .all(|r| (lo..=hi).contains(&r.ratio))
    }

    /// Ratios increase with `n` and stay below 1 across the grid.
    pub fn approaches_from_below(&self) -> bool {
        let mut rows = self.rows.clone();
        rows.sort_by_key(|r| r.n);
        rows.iter().all(|r| r.ratio < 1.0) && rows.windows(2).all(|w| w[0].ratio < w[1].ratio)
    }

    pub fn passes(&self) -> bool {
        self.window_holds() && self.approaches_from_below()
    }
}

/// Table of `(n, Q(n), Q(n) / sqrt(pi n / 2))`.
pub fn q_growth_check(n_values: &[u64]) -> Result<QGrowthTable> {
    let rows = n_values
        .iter()
        .map(|&n| {
            let q = q_float(n)?;
            Ok(QGrowthRow {
                n,
                q,
                ratio: q / q_leading_order(n),
            })
        })
        .collect::<Result<_>>()?;
    Ok(QGrowthTable { rows })
}
