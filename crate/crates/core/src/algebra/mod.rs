//! Exact coefficient-ring tower and the truncated graded polynomial ring.

pub mod chow;
pub mod eps;
pub mod expr;
pub mod laurent;
pub mod poly;
pub mod ratfun;
pub mod rational;
pub mod ring;
pub mod series;

pub use chow::{
    assemble_y_powers, embed, ChowClass, ChowModel, Generator, IntegralFunctional, Monomial,
};
pub use eps::{EpsLaurent, EpsRing, PREC_EXACT};
pub use laurent::{s_ring, LaurentPoly, LaurentRing, SLaurent, SLaurentRing};
pub use poly::{Poly, PolyRing, QPoly, QPolyRing};
pub use ratfun::{RatFun, RatFunRing};
pub use rational::{rat, rat_from_str, rat_int, rat_to_string, Rational};
pub use ring::{RatRing, Ring};
pub use series::{SeriesRing, TruncSeries};
