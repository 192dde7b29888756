#![no_std]
extern crate alloc;

pub mod blowup;
pub mod classify;
pub mod fixtures;
pub mod fuzz;
pub mod germ;
pub mod newton;
pub mod parse;
pub mod poly;
pub mod predict;
pub mod rational;
pub mod verify;

pub use germ::{GermError, Iterates, SkewGerm};
pub use parse::{parse_poly, ParseError, ParseErrorKind};
pub use poly::{Limits, Monomial, PolyError, SparsePoly2};
pub use rational::{ExtendedRational, Rational};
