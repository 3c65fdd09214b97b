use std::fmt;

use thiserror::Error;

/// A single structural defect found while checking a register.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// `f_i` does not reference `x_{(i+1) mod n}` at all.
    MissingDependence { bit: usize },
    /// `f_i ⊕ x_{(i+1) mod n}` still depends on `x_{(i+1) mod n}`.
    NonSingular { bit: usize },
    /// A bit above the terminal bit reads a variable above the terminal bit.
    ReadsAboveTerminal { bit: usize, var: usize, tau: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::MissingDependence { bit } => {
                write!(f, "f{bit} does not depend on its successor bit")
            }
            Violation::NonSingular { bit } => write!(f, "f{bit} is not singular (condition a)"),
            Violation::ReadsAboveTerminal { bit, var, tau } => {
                write!(f, "g{bit} reads x{var} above terminal bit {tau} (condition b)")
            }
        }
    }
}

pub(crate) struct ViolationList<'a>(pub &'a [Violation]);

impl fmt::Display for ViolationList<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

/// Why a shifting was refused.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ShiftRejection {
    #[error("source register is not uniform: {}", ViolationList(.0))]
    SourceNotUniform(Vec<Violation>),
    #[error("shift source bit {from} is not the terminal bit {tau}")]
    SourceNotTerminal { from: usize, tau: usize },
    #[error("shift from bit {from} to bit {to} does not lower the terminal bit")]
    NotLowering { from: usize, to: usize },
    #[error("bit index {bit} out of range for register of size {n}")]
    BitOutOfRange { bit: usize, n: usize },
    #[error("product-terms are not a subset of g{bit}")]
    NotSubset { bit: usize },
    #[error("term reads x{var}, outside x{lo}..=x{hi} for a shift from bit {from} to bit {to}")]
    ReadsOutsideWindow {
        var: usize,
        lo: usize,
        hi: usize,
        from: usize,
        to: usize,
    },
    #[error("shifted register is not uniform: {}", ViolationList(.0))]
    ResultNotUniform(Vec<Violation>),
}

/// Why a Galois profile cannot be used for lowering.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProfileError {
    #[error("profile is for {profile} bits, register has {register}")]
    SizeMismatch { profile: usize, register: usize },
    #[error("profile terminal bit {tau} out of range for register of size {n}")]
    TauOutOfRange { tau: usize, n: usize },
    #[error("profile has {found} g-parts, expected {expected}")]
    PartCount { expected: usize, found: usize },
    #[error("g{bit} reads x{var} above terminal bit {tau}")]
    ReadsAboveTerminal { bit: usize, var: usize, tau: usize },
    #[error("g{bit} depends on its successor bit")]
    NonSingular { bit: usize },
    #[error("g{tau} is zero, so bit {tau} would not be the terminal bit")]
    ZeroTerminalPart { tau: usize },
    #[error("profile does not recombine into the Fibonacci feedback")]
    Inconsistent,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at column {column}: {message}")]
    Syntax { column: usize, message: String },
    #[error("line {line}: {source}")]
    Line {
        line: usize,
        #[source]
        source: Box<Error>,
    },
    #[error("variable x{index} out of range for register of size {n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("shifting x{index} by {delta} gives a negative index")]
    NegativeIndex { index: usize, delta: isize },
    #[error("state has {found} bits, register has {expected}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("register size {0} is below the minimum of 2")]
    TooSmall(usize),
    #[error("register size {n} exceeds the limit of {limit} for this operation")]
    TooLarge { n: usize, limit: usize },
    #[error("f{bit} is not singular")]
    NonSingular { bit: usize },
    #[error("register is not uniform: {}", ViolationList(.0))]
    NotUniform(Vec<Violation>),
    #[error("register is invalid: {}", ViolationList(.0))]
    Invalid(Vec<Violation>),
    #[error("register is not in the Fibonacci configuration")]
    NotFibonacci,
    #[error("g{tau} reads x{var} above the terminal bit, so no Fibonacci counterpart exists")]
    TerminalReadsAbove { tau: usize, var: usize },
    #[error("shift rejected: {0}")]
    Shift(#[from] ShiftRejection),
    #[error("profile rejected: {0}")]
    Profile(#[from] ProfileError),
    #[error("precondition violated: {0}")]
    Precondition(String),
}

impl Error {
    pub(crate) fn at_line(self, line: usize) -> Error {
        Error::Line {
            line,
            source: Box::new(self),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
