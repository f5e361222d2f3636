//! Exact computations for toroidal Lie algebras and their modules.

#![allow(clippy::needless_range_loop)]

pub mod affine;
pub mod error;
pub mod garland;
pub mod lattice;
pub mod lie;
pub mod num;
pub mod pimod;
pub mod rootsys;
pub mod toroidal;

pub use error::{Error, Result};
