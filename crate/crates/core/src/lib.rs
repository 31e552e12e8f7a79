//! Exact intersection numbers on finitely presented, evenly graded
//! commutative cohomology rings, and the moduli computations built on them.
//!
//! Layers, bottom up: [`ring`] (presentations and normal forms), [`spaces`]
//! (ready-made presentations), [`grr`], [`mukai`] and [`verlinde`] (the
//! numerical inputs), then [`repro`], [`selfcheck`] and [`dsl`] on top.

pub mod rational;
pub mod ring;
pub mod spaces;

pub mod grr;
pub mod mukai;
pub mod verlinde;

pub mod dsl;
pub mod error;
pub mod report;
pub mod repro;
pub mod selfcheck;

pub use error::Error;
pub use grr::{KClass, LambdaResult, LambdaSource, PoincareFamily};
pub use mukai::{CurveKClass, MukaiVector};
pub use rational::Rational;
pub use report::{Report, Step, Verdict};
pub use ring::{Element, Generator, Monomial, Ring, RingBuilder, RingError, RingPresentation};
