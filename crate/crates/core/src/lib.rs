//! Algorithms for finitely presented groups at desk scale.
//!
//! The crate covers the word problem through Dehn's algorithm, ball-limited
//! Cayley graph geometry (geodesics, slim triangles, quasiconvexity), the
//! membership problem for quasiconvex subgroups through weakly Nielsen
//! generating sets, a folding oracle for subgroups of free groups, finite
//! groups as multiplication tables, and a decision procedure for whether
//! `H ∩ g⁻¹Hg` is finite.
//!
//! Everything here is pure computation over `alloc`; file IO and the command
//! line live in the `ggt` crate.
#![no_std]
#![warn(rust_2018_idioms, unused_qualifications)]

extern crate alloc;

pub mod abelian;
pub mod cayley;
pub mod conjugate;
pub mod dehn;
pub mod finite_enum;
pub mod free_oracle;
pub mod presentation;
pub mod subgroup;
pub mod words;

use alloc::string::String;

pub use presentation::Presentation;
pub use words::{Alphabet, Letter, Word};

/// Errors raised by the algorithms in this crate.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("unknown letter '{0}'")]
    UnknownLetter(char),
    #[error("{what} exceeded the cap of {limit}")]
    ResourceCap { what: &'static str, limit: usize },
    #[error("presentation has relators; the folding oracle only covers free groups")]
    NotFree,
    #[error("no exact membership oracle is available for this presentation")]
    OracleUnavailable,
    #[error("{0}")]
    Precondition(String),
    #[error("inconsistent input: {0}")]
    Inconsistent(String),
    #[error("integer overflow while evaluating {0}")]
    Overflow(&'static str),
    #[error("order {requested} is above the enumeration cap {cap}")]
    OrderAboveCap { requested: usize, cap: usize },
    #[error("invalid multiplication table: {0}")]
    InvalidTable(String),
}

impl Error {
    /// Short machine-readable code used in command-line error lines.
    pub fn code(&self) -> &'static str {
        match self {
            Error::Parse { .. } => "parse",
            Error::UnknownLetter(_) => "unknown-letter",
            Error::ResourceCap { .. } => "resource-cap",
            Error::NotFree => "not-free",
            Error::OracleUnavailable => "oracle-unavailable",
            Error::Precondition(_) => "precondition",
            Error::Inconsistent(_) => "inconsistent",
            Error::Overflow(_) => "overflow",
            Error::OrderAboveCap { .. } => "order-cap",
            Error::InvalidTable(_) => "invalid-table",
        }
    }
}

pub type Result<T, E = Error> = core::result::Result<T, E>;

/// Resource caps shared by every search in the crate.
///
/// A search that would exceed a cap fails with [`Error::ResourceCap`]; no
/// operation silently truncates its result.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Vertices in a ball, states in a search, elements in an enumeration.
    pub max_states: usize,
    /// Geodesic words enumerated between one pair of vertices.
    pub max_geodesics: usize,
}

impl Limits {
    pub const DEFAULT_MAX_STATES: usize = 500_000;
    pub const DEFAULT_MAX_GEODESICS: usize = 20_000;

    pub fn with_max_states(max_states: usize) -> Self {
        Limits { max_states, ..Limits::default() }
    }

    pub(crate) fn check(&self, what: &'static str, count: usize) -> Result<()> {
        if count > self.max_states {
            Err(Error::ResourceCap { what, limit: self.max_states })
        } else {
            Ok(())
        }
    }
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_states: Self::DEFAULT_MAX_STATES,
            max_geodesics: Self::DEFAULT_MAX_GEODESICS,
        }
    }
}
