//! Exact decision procedures for element-conjugacy and global conjugacy of
//! homomorphisms from finite groups into compact classical groups and their
//! central quotients, plus the certificate suite built on them.

pub mod certsuite;
pub mod conjtest;
pub mod error;
pub mod exactalg;
pub mod fingrp;
pub mod grpcore;
pub mod homcheck;
pub mod report;
pub mod scfcheck;
pub mod so3crit;

pub use error::{ExactError, ExactResult, GroupError, GroupResult};
pub use exactalg::{CycNum, ExactMatrix, Subspace};
pub use fingrp::{FinGroup, FormalElem, Hom};
pub use grpcore::{AmbientElement, FactorKind, GroupSpec, QuotElement, Quat};
pub use homcheck::{GlobalVerdict, HomPair};
pub use report::Report;
