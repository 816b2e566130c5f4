use alloc::string::String;
use core::fmt;

pub type Result<T, E = Error> = core::result::Result<T, E>;

/// Everything that can go wrong in the core library.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Error {
    /// Malformed real expression, polynomial or digit string.
    Parse { pos: usize, msg: String },
    /// A `root(...)` hint interval that does not isolate exactly one root.
    RootIsolation { roots: usize },
    /// Two values could not be separated within the configured precision.
    PrecisionExhausted { bits: u32 },
    DivisionByZero,
    /// The base must satisfy `beta > 1`.
    InvalidBase(String),
    InvalidAlphabet(String),
    /// The alphabet leaves holes in the representable interval.
    AlphabetGap,
    DigitNotInAlphabet(i64),
    /// The argument lies outside the domain of the map being applied.
    Domain(String),
    Unsupported(&'static str),
    NotADiscontinuity,
    /// A lexicographic comparison ran past the known digits of a truncated string.
    Undecidable(String),
    /// No period was found for `d*(1)` within the digit horizon.
    Inconclusive(String),
    ValueOutOfRange,
    /// Exhaustive enumeration exceeded its node budget.
    Budget { nodes: u64, depth: usize },
    /// The base is confluent, so no counterexample interval exists.
    Confluent,
    RewriteBudget { steps: usize },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Parse { pos, msg } => write!(f, "parse error at byte {pos}: {msg}"),
            Error::RootIsolation { roots } => {
                write!(f, "isolating interval contains {roots} roots, expected exactly one")
            }
            Error::PrecisionExhausted { bits } => {
                write!(f, "could not decide within {bits} bits of precision")
            }
            Error::DivisionByZero => f.write_str("division by zero"),
            Error::InvalidBase(msg) => write!(f, "invalid base: {msg}"),
            Error::InvalidAlphabet(msg) => write!(f, "invalid alphabet: {msg}"),
            Error::AlphabetGap => f.write_str("alphabet does not cover the representable interval"),
            Error::DigitNotInAlphabet(d) => write!(f, "digit {d} is not in the alphabet"),
            Error::Domain(msg) => write!(f, "domain error: {msg}"),
            Error::Unsupported(msg) => write!(f, "unsupported: {msg}"),
            Error::NotADiscontinuity => f.write_str("point is not a discontinuity of the map"),
            Error::Undecidable(msg) => write!(f, "undecidable: {msg}"),
            Error::Inconclusive(msg) => write!(f, "inconclusive: {msg}"),
            Error::ValueOutOfRange => f.write_str("represented value is outside [0, 1)"),
            Error::Budget { nodes, depth } => {
                write!(f, "enumeration budget of {nodes} nodes exhausted at depth {depth}")
            }
            Error::Confluent => f.write_str("base is confluent: no counterexample interval exists"),
            Error::RewriteBudget { steps } => {
                write!(f, "rewriting did not terminate within {steps} steps")
            }
        }
    }
}

impl core::error::Error for Error {}
