use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};

use thiserror::Error;

/// Raised when a search exhausts its node budget before reaching a certificate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("node budget of {limit} exhausted")]
pub struct ResourceLimit {
    pub limit: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    ResourceLimit(#[from] ResourceLimit),
    #[error("modulus 1 not canonical")]
    ModulusOne,
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("group mismatch: {0}")]
    GroupMismatch(String),
    #[error("invalid homomorphism: {0}")]
    InvalidHom(String),
    #[error("morphism `{0}` is not monotone")]
    NotMonotone(String),
    #[error("group is infinite: {0}")]
    InfiniteGroup(String),
    #[error("cone has no generator representation: {0}")]
    MissingGenerators(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("inconsistent data: {0}")]
    Inconsistent(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Three-valued answer of a decision procedure. `No` carries a witness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict<W = ()> {
    Yes,
    No(W),
    Unknown,
}

impl<W> Verdict<W> {
    pub fn is_yes(&self) -> bool {
        matches!(self, Verdict::Yes)
    }

    pub fn is_no(&self) -> bool {
        matches!(self, Verdict::No(_))
    }

    pub fn is_unknown(&self) -> bool {
        matches!(self, Verdict::Unknown)
    }

    pub fn witness(&self) -> Option<&W> {
        match self {
            Verdict::No(w) => Some(w),
            _ => None,
        }
    }

    pub fn map_witness<V>(self, f: impl FnOnce(W) -> V) -> Verdict<V> {
        match self {
            Verdict::Yes => Verdict::Yes,
            Verdict::No(w) => Verdict::No(f(w)),
            Verdict::Unknown => Verdict::Unknown,
        }
    }

    pub fn forget(self) -> Verdict {
        self.map_witness(|_| ())
    }

    /// Kleene conjunction; the first definite `No` wins.
    pub fn and(self, other: Verdict<W>) -> Verdict<W> {
        match (self, other) {
            (Verdict::No(w), _) => Verdict::No(w),
            (_, Verdict::No(w)) => Verdict::No(w),
            (Verdict::Yes, Verdict::Yes) => Verdict::Yes,
            _ => Verdict::Unknown,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Verdict::Yes => "yes",
            Verdict::No(_) => "no",
            Verdict::Unknown => "unknown",
        }
    }
}

impl Verdict {
    pub fn from_bool(b: bool) -> Self {
        if b {
            Verdict::Yes
        } else {
            Verdict::No(())
        }
    }
}

/// Lifts a fallible yes/no computation into a verdict, mapping resource
/// exhaustion to `Unknown` and passing every other error through.
pub fn lift<W>(r: Result<Verdict<W>>) -> Result<Verdict<W>> {
    match r {
        Err(Error::ResourceLimit(_)) => Ok(Verdict::Unknown),
        other => other,
    }
}

impl<W> fmt::Display for Verdict<W> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

pub const DEFAULT_NODE_BUDGET: u64 = 1_000_000;

/// Node budget for the Diophantine searches. The limit applies to each
/// individual search; `used` accumulates across all of them.
#[derive(Debug)]
pub struct Budget {
    limit: u64,
    used: AtomicU64,
}

impl Budget {
    pub fn new(limit: u64) -> Self {
        Budget { limit, used: AtomicU64::new(0) }
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn used(&self) -> u64 {
        self.used.load(Ordering::Relaxed)
    }

    pub(crate) fn record(&self, nodes: u64) {
        self.used.fetch_add(nodes, Ordering::Relaxed);
    }
}

impl Default for Budget {
    fn default() -> Self {
        Budget::new(DEFAULT_NODE_BUDGET)
    }
}

impl Clone for Budget {
    fn clone(&self) -> Self {
        Budget::new(self.limit)
    }
}
