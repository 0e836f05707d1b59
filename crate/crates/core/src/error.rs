use std::fmt;

/// A failed structural axiom, with the elements that witness the failure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub axiom: String,
    pub witnesses: Vec<String>,
}

impl Violation {
    pub fn new(axiom: impl Into<String>, witnesses: impl IntoIterator<Item = impl Into<String>>) -> Self {
        Violation {
            axiom: axiom.into(),
            witnesses: witnesses.into_iter().map(Into::into).collect(),
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.witnesses.is_empty() {
            write!(f, "{}", self.axiom)
        } else {
            write!(f, "{} at ({})", self.axiom, self.witnesses.join(", "))
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid ring: {0}")]
    InvalidRing(String),
    #[error("invalid group: {0}")]
    InvalidGroup(String),
    #[error("groupoid axiom violated: {0}")]
    Groupoid(Violation),
    #[error("cocycle violated: {0}")]
    Cocycle(Violation),
    #[error("twist axiom violated: {0}")]
    Twist(Violation),
    #[error("invalid algebra: {0}")]
    InvalidAlgebra(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("{what}: search size {attempted} exceeds cap {cap}")]
    CapExceeded { what: String, attempted: u128, cap: u64 },
    #[error("mismatched twists in convolution")]
    MismatchedTwists,
    #[error("{0}")]
    NotApplicable(String),
}

pub type Result<T> = std::result::Result<T, Error>;

/// Fails with [`Error::CapExceeded`] when `attempted` is above `cap`.
pub(crate) fn check_cap(what: &str, attempted: u128, cap: u64) -> Result<()> {
    if attempted > cap as u128 {
        Err(Error::CapExceeded { what: what.to_string(), attempted, cap })
    } else {
        Ok(())
    }
}

/// `base^exp` saturating at `u128::MAX`.
pub(crate) fn pow_size(base: usize, exp: usize) -> u128 {
    let mut acc: u128 = 1;
    for _ in 0..exp {
        acc = acc.saturating_mul(base as u128);
    }
    acc
}
