//! Numerical and exact tools for polynomial semigroup dynamics.
//!
//! * [`sphere`] and [`grid`]: Riemann-sphere points, the chordal metric and an
//!   equal-area cell grid.
//! * [`poly`]: polynomials, parsing and full preimage sets.
//! * [`single`]: Green's function, Böttcher coordinate and Julia clouds of a
//!   single polynomial.
//! * [`semigroup`]: word orbits of a finitely generated semigroup, sphere
//!   coverage and the Julia-set comparator.
//! * [`lemma`]: exact rational checks of the log-coordinate line dynamics and
//!   the circle and monomial lemmas.

pub mod cloud;
pub mod error;
pub mod grid;
pub mod lemma;
pub mod nearest;
pub mod poly;
pub mod semigroup;
pub mod single;
pub mod sphere;

pub use cloud::{CloudKind, SetApprox};
pub use error::{Error, Result};
pub use grid::SphereGrid;
pub use poly::{parse_poly, Polynomial, PreimageSet};
pub use sphere::{chordal_dist, SpherePoint};
pub use num_complex::Complex64;
