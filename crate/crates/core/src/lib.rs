//! Burnside rings, crossed Burnside rings, their idempotents and Mackey
//! functor actions for explicit finite groups, plus towers of finite
//! quotients that stand in for profinite groups at finite depth.

pub mod error;
pub mod group;

pub use error::{Error, Result};
pub mod burnside;
pub mod linalg;
pub mod crossed;
pub mod tower;
pub mod mackey;
pub mod serial;
