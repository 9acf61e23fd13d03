//! Exact formal inversion of maps `F = z - H` and the symbol calculus
//! around it.
//!
//! The crate is layered bottom-up:
//!
//! * [`poly`], [`series`], [`matrix`]: sparse polynomials over the rationals,
//!   truncated power series, formal maps, Jacobians and determinants.
//! * [`weyl`]: differential operators in right-normal form, total symbols,
//!   the anti-involution `tau`, the mixed Laplacian `Lambda` and `exp(Lambda)`.
//! * [`inversion`]: three independent ways to compute the formal inverse
//!   `G = z + N`, and verifiers for the identities tying them together.
//! * [`lab`] and [`corpus`]: nilpotency of `JH`, the `t`-deformation
//!   `F_t = z - tH`, vanishing scans of `Lambda^m(P^m)`, and deterministic
//!   families of test maps.
//!
//! Every computation is exact. Series are represented by polynomials plus a
//! precision bound, and each operation states which input precision it needs
//! for the output window it promises.

pub mod corpus;
pub mod error;
pub mod inversion;
pub mod lab;
pub mod matrix;
pub mod multi_index;
pub mod parse;
pub mod poly;
pub mod rational;
pub mod report;
pub mod series;
pub mod varset;
pub mod weyl;

pub use error::{Error, Result};
pub use matrix::{jacobian, PolyMatrix};
pub use multi_index::MultiIndex;
pub use parse::parse_poly;
pub use poly::{Degree, Eta, Order, SparsePoly, Window};
pub use rational::Rational;
pub use series::{compose, MapTuple, Precision, SeriesTrunc};
pub use varset::{VarKind, VarSet};

/// The guide under `book/` is compiled here so its snippets run as doctests,
/// one module per chapter so a failure points at its chapter.
#[cfg(doctest)]
pub mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    pub mod introduction {}
    #[doc = include_str!("../../../book/src/polynomials.md")]
    pub mod polynomials {}
    #[doc = include_str!("../../../book/src/inversion.md")]
    pub mod inversion {}
    #[doc = include_str!("../../../book/src/weyl.md")]
    pub mod weyl {}
    #[doc = include_str!("../../../book/src/windows.md")]
    pub mod windows {}
    #[doc = include_str!("../../../book/src/lab.md")]
    pub mod lab {}
    #[doc = include_str!("../../../book/src/corpus.md")]
    pub mod corpus {}
    #[doc = include_str!("../../../book/src/cli.md")]
    pub mod cli {}
}
