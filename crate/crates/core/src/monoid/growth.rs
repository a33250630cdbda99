//! Growth functions and their window comparison.

use serde::Serialize;

use super::cayley::CayleyBall;
use crate::error::{Error, Result};

/// `counts[t]` = number of elements of word length at most `t`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GrowthTable {
    pub counts: Vec<u64>,
}

impl GrowthTable {
    /// Table for an arbitrary function on `0..=window`.
    pub fn from_fn(window: usize, f: impl Fn(usize) -> u64) -> Self {
        GrowthTable {
            counts: (0..=window).map(f).collect(),
        }
    }

    /// Largest `t` the table covers.
    pub fn window(&self) -> usize {
        self.counts.len().saturating_sub(1)
    }

    /// `counts[T]^(1/T)` at the largest `T`; 1 for a radius-0 table.
    pub fn rate_estimate(&self) -> f64 {
        let t = self.window();
        if t == 0 {
            return 1.0;
        }
        (self.counts[t] as f64).powf(1.0 / t as f64)
    }

    pub fn is_non_decreasing(&self) -> bool {
        self.counts.windows(2).all(|w| w[0] <= w[1])
    }

    /// `t,count` lines with a header.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,count\n");
        for (t, c) in self.counts.iter().enumerate() {
            out.push_str(&format!("{t},{c}\n"));
        }
        out
    }
}

pub fn growth_table(b: &CayleyBall) -> GrowthTable {
    let mut counts = vec![0u64; b.radius() as usize + 1];
    for &l in b.lengths() {
        counts[l as usize] += 1;
    }
    for t in 1..counts.len() {
        counts[t] += counts[t - 1];
    }
    GrowthTable { counts }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum PreceqOutcome {
    /// `f(t) ≤ k·g(ℓt)` on the whole window.
    WindowWitness { k: u64, l: u64 },
    /// Every candidate fails; `failures` lists `(k, ℓ, first failing t)`.
    WindowFalsification { failures: Vec<(u64, u64, usize)> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PreceqReport {
    pub outcome: PreceqOutcome,
    /// Shared window `t = 1..=window`.
    pub window: usize,
    pub k_max: u64,
    pub l_max: u64,
}

/// Searches `(k, ℓ)` in `[1, k_max] × [1, l_max]`, `k` outermost, for
/// `f(t) ≤ k·g(ℓt)` at every `t = 1..=T` where `T` is `f`'s window.
///
/// `g` must cover `l_max·T`.
pub fn preceq_window(f: &GrowthTable, g: &GrowthTable, k_max: u64, l_max: u64) -> Result<PreceqReport> {
    if k_max == 0 || l_max == 0 {
        return Err(Error::InvalidParam("k_max and l_max must be positive".into()));
    }
    let window = f.window();
    let needed = (l_max as usize).checked_mul(window).ok_or_else(|| Error::IncompatibleWindows("window overflow".into()))?;
    if g.window() < needed {
        return Err(Error::IncompatibleWindows(format!(
            "comparison needs g up to t = {needed} (l_max · {window}), table stops at {}",
            g.window()
        )));
    }
    let mut failures = Vec::new();
    for k in 1..=k_max {
        for l in 1..=l_max {
            let bad = (1..=window).find(|&t| u128::from(f.counts[t]) > u128::from(k) * u128::from(g.counts[l as usize * t]));
            match bad {
                None => {
                    return Ok(PreceqReport {
                        outcome: PreceqOutcome::WindowWitness { k, l },
                        window,
                        k_max,
                        l_max,
                    })
                }
                Some(t) => failures.push((k, l, t)),
            }
        }
    }
    Ok(PreceqReport {
        outcome: PreceqOutcome::WindowFalsification { failures },
        window,
        k_max,
        l_max,
    })
}
