//! Worker control for the embarrassingly parallel enumerations.
//!
//! All parallel entry points go through [`par_map`], which preserves input
//! order, so reductions downstream are sequential and results do not depend on
//! the worker count.

use rayon::prelude::*;
use std::sync::atomic::{AtomicBool, Ordering};

/// Environment variable capping the worker count; `0` means sequential.
pub const THREADS_ENV: &str = "HYPERMONO_THREADS";

static SEQUENTIAL: AtomicBool = AtomicBool::new(false);

/// Worker configuration for one process.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Workers {
    Sequential,
    Threads(usize),
    Default,
}

impl Workers {
    pub fn from_env() -> Self {
        match std::env::var(THREADS_ENV).ok().and_then(|s| s.trim().parse::<usize>().ok()) {
            Some(0) => Workers::Sequential,
            Some(n) => Workers::Threads(n),
            None => Workers::Default,
        }
    }

    /// Runs `f` under this configuration.
    pub fn install<R: Send>(self, f: impl FnOnce() -> R + Send) -> R {
        match self {
            Workers::Sequential => {
                let prev = SEQUENTIAL.swap(true, Ordering::SeqCst);
                let out = f();
                SEQUENTIAL.store(prev, Ordering::SeqCst);
                out
            }
            Workers::Threads(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
                Ok(pool) => pool.install(f),
                Err(_) => f(),
            },
            Workers::Default => f(),
        }
    }
}

pub(crate) fn sequential() -> bool {
    SEQUENTIAL.load(Ordering::Relaxed)
}

/// Order-preserving map, parallel unless the process is pinned sequential.
pub fn par_map<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    if sequential() || items.len() < 2 {
        items.iter().map(f).collect()
    } else {
        items.par_iter().map(f).collect()
    }
}
