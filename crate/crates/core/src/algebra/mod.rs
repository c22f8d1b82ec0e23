//! Closed-form arithmetic on the function class `c · x^q e^{iωx} · y^p e^{ay}`.
//!
//! Every profile, eigenfunction, forcing term and reduced-matrix entry in this
//! crate is a [`SeriesFunction`]. Three-component states live in [`WaveState`].

mod parse;
mod series;
mod state;

pub use parse::parse_series;
pub use series::{same_rate, SeriesFunction, Term, DEFAULT_TERM_CAP, TAU_ALG};
pub use state::{inner_product, inner_product_x, WaveState};
