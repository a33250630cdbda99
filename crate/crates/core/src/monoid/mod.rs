//! Finitely presented monoids: rewriting, right Cayley balls and growth.

mod cayley;
mod growth;
mod presentation;
mod rewrite;

pub use cayley::{cancellativity_window, cayley_ball, left_mul_embedding, CancellativityReport, CayleyBall};
pub use growth::{growth_table, preceq_window, GrowthTable, PreceqOutcome, PreceqReport};
pub use presentation::{Presentation, Word};
pub use rewrite::{complete, shortlex_cmp, RewriteSystem};
