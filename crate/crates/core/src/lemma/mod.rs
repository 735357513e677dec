//! Exact and numerical checks of the circle, monomial and line-dynamics lemmas.

mod circles;
mod line;

pub use circles::{
    circle_lemma_check, minimal_cover_exponent, monomial_pair_julia_radius, monomial_rigidity_check,
    CircleReport, Rigidity,
};
pub use line::{
    commutator_value, d_n_value, density_march, format_rational, line_apply, line_apply_guarded,
    line_apply_stepwise, parse_rational, reversed_commutator_value, DensityMarch, LineLetter, LineWord,
    LogDynParams,
};
pub use num_rational::BigRational;
