//! Exact computation of the double-ramification cycle `DR_2(d)` in the
//! degree-2 tautological group of the moduli space of stable 2-pointed
//! genus-2 curves, together with its push-forwards, its restriction to
//! compact type and its position among effective classes.
//!
//! Everything is exact: rationals are arbitrary precision and classes carry
//! polynomial coefficients in `d`.

pub mod arith;
pub mod checks;
pub mod chow;
pub mod class;
pub mod cone;
pub mod ct;
pub mod error;
pub mod linalg;
pub mod m21;
pub mod solver;
pub mod surfaces;

pub use arith::{q, PolyQ, Rational};
pub use chow::{
    multiply_divisors, reduce_to_basis, theorem1_class, theorem1_class_at, DivisorM22, FormalExpr,
    Generator, Monomial2, TautClass2,
};
pub use class::{Basis, Class};
pub use ct::CtClass;
pub use error::{Error, Result};
pub use m21::DivisorM21;
pub use solver::{solve_parametric, ParamSystem, SolveCertificate};
pub use surfaces::{EquationRow, SurfaceModel, SurfaceSet};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
