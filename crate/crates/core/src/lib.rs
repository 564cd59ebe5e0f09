//! Conic geometry of PG(2,q), its incidence codes, and the 2-modular
//! representation theory of PSL(2,q) needed to decompose their null spaces.

pub mod arith;
pub mod blocks;
pub mod chartable;
pub mod codes;
pub mod cyclotomic;
pub mod error;
pub mod field;
pub mod gf2k;
pub mod group;
pub mod linalg;
pub mod parity;
pub mod plane;
pub mod twoadic;

pub use cyclotomic::Cyclotomic;
pub use error::{Error, Result};
pub use field::{FieldCtx, FieldElem, SquareClass};
pub use linalg::{BitMatrix, BitVec, PFMatrix};
pub use plane::{LineClass, Mat3, PlaneCtx, PointClass, ProjLine, ProjPoint};

/// Cyclotomic integers with machine-word coefficients.
pub type CycInt = Cyclotomic<i64>;
/// Cyclotomic integers with arbitrary-precision coefficients.
pub type BigCycInt = Cyclotomic<num_bigint::BigInt>;
