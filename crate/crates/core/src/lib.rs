pub mod error;
pub mod field;
pub mod frac;
pub mod level;
pub mod linalg;
pub mod mpoly;
pub mod orders;
pub mod poly;
pub mod quotient;
pub mod ring;
pub mod selfisog;
pub mod skew;
pub mod sympoly;
pub mod volcano;

pub use error::{Error, Result};
pub use field::{FieldCtx, Fq};
pub use frac::Frac;
pub use mpoly::MPoly;
pub use poly::{Pretty, UPoly};
pub use ring::{EuclideanDomain, Field, FqAlgebra, GcdDomain, Ring};
pub use skew::{DrinfeldModule, SkewPoly};

/// `A = F_q[T]`.
pub type Poly = UPoly<Fq>;
/// `A[y]`, outer variable `y`.
pub type BiPoly = UPoly<Poly>;
/// `F_q(T)`.
pub type FqT = Frac<Poly>;
/// Rational functions in `y` over `F_q(T)`, as reduced quotients in `A[y]`.
pub type RatFunc = Frac<BiPoly>;
