//! Exact arithmetic in a local field: Q_p with the p-adic valuation, or
//! F_p((t)) with the order-at-t valuation (elements restricted to rational
//! functions, which is all the decompositions ever produce).
//!
//! Scalars are immutable canonical values, so structural equality is field
//! equality and everything can be shared freely.

mod poly;
mod scalar;

pub use scalar::Scalar;

use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("negative valuation: operation requires an integral element")]
    NegativeValuation,
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("parse error: {0}")]
    Parse(String),
}

/// Which local field a scalar lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Backend {
    /// Q with the p-adic valuation (dense in Q_p).
    Qp,
    /// F_p(t) with the order-at-t valuation (dense in F_p((t))).
    Laurent,
}

/// A local field configuration: backend plus the residue characteristic p.
/// The residue field is the prime field, so q = p.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Field {
    backend: Backend,
    p: u64,
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl Field {
    pub fn new(backend: Backend, p: u64) -> Result<Self, FieldError> {
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        Ok(Field { backend, p })
    }

    pub fn qp(p: u64) -> Result<Self, FieldError> {
        Self::new(Backend::Qp, p)
    }

    pub fn laurent(p: u64) -> Result<Self, FieldError> {
        Self::new(Backend::Laurent, p)
    }

    pub fn backend(&self) -> Backend {
        self.backend
    }

    /// Residue characteristic; also the residue field size q.
    pub fn p(&self) -> u64 {
        self.p
    }

    /// Residue field representatives 0..p-1, in that order.
    pub fn residue_reps(&self) -> Vec<Scalar> {
        (0..self.p).map(|r| self.from_int(r as i64)).collect()
    }
}

/// Value of the valuation map: an integer, or infinity for the zero element.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Valuation {
    Finite(i64),
    Infinity,
}

impl Valuation {
    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinity => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Valuation::Infinity)
    }
}

impl PartialOrd for Valuation {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Valuation {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        match (self, other) {
            (Valuation::Infinity, Valuation::Infinity) => std::cmp::Ordering::Equal,
            (Valuation::Infinity, _) => std::cmp::Ordering::Greater,
            (_, Valuation::Infinity) => std::cmp::Ordering::Less,
            (Valuation::Finite(a), Valuation::Finite(b)) => a.cmp(b),
        }
    }
}

impl std::ops::Add for Valuation {
    type Output = Valuation;
    fn add(self, rhs: Valuation) -> Valuation {
        match (self, rhs) {
            (Valuation::Finite(a), Valuation::Finite(b)) => Valuation::Finite(a + b),
            _ => Valuation::Infinity,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinity => write!(f, "inf"),
        }
    }
}
