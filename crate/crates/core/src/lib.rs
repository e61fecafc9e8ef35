//! Exact decision and parametrization of rational ruled surfaces.
//!
//! Given a surface either implicitly by f(x1,x2,x3) = 0 or parametrically by
//! M(t1,t2), the kernel decides whether it is a rational ruled surface and,
//! in the affirmative case, produces a proper parametrization in standard
//! reduced form (p1 + t2*q1, p2 + t2*q2, t2), verifying every output by
//! exact substitution. All arithmetic is exact over Q or a single quadratic
//! extension Q(sqrt(d)).

pub mod error;
pub mod implicit;
pub mod plane;
pub mod poly;
pub mod ratfunc;
pub mod scalar;
pub mod space;
pub mod text;

pub use error::{Error, Result};
pub use poly::{MultiPoly, Var};
pub use ratfunc::RatFunc;
pub use scalar::{FieldCtx, Scalar};
