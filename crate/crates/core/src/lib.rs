//! Finite fields, pre-semifields on `GF(p^m)²`, the Taniguchi family, and
//! isotopy decisions and class counts for it.

pub mod counting;
pub mod error;
pub mod ff;
pub mod isotopy;
pub mod linalg;
pub mod semifield;
pub mod taniguchi;

pub use error::{Error, Result};
pub use ff::{FieldCtx, FieldElement};
pub use isotopy::{decide_isotopy, IsotopyDecision, OracleLimits};
pub use linalg::{BlockMap, LinearMap, MonomialEntry, Pair};
pub use semifield::{IsotopismCertificate, Presemifield, Semifield};
pub use taniguchi::{TaniguchiParams, ValidationReport};
