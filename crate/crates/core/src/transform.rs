//! Moving product-terms between feedback functions (shifting), and the
//! staged lowering of a Fibonacci register into a chosen Galois shape.
//!
//! Every shifting is guarded: the source must be uniform, the terms must
//! leave the terminal bit and stay inside the index window that avoids
//! wraparound, and the result must be uniform again. A refused shifting
//! returns a [`ShiftRejection`] and no register.

use std::fmt;

use crate::anf::AnfPolynomial;
use crate::error::{Error, ProfileError, Result, ShiftRejection};
use crate::nlfsr::Nlfsr;

/// Move the product-terms `terms` from `g_{from_bit}` to `g_{to_bit}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShiftMove {
    pub from_bit: usize,
    pub to_bit: usize,
    pub terms: AnfPolynomial,
}

impl ShiftMove {
    pub fn new(from_bit: usize, to_bit: usize, terms: AnfPolynomial) -> Self {
        ShiftMove {
            from_bit,
            to_bit,
            terms,
        }
    }

    /// Parses `from,to,poly`, e.g. `2,1,x1`.
    pub fn parse(text: &str) -> Result<Self> {
        let mut parts = text.splitn(3, ',');
        let mut index = |what: &str| -> Result<usize> {
            let field = parts.next().unwrap_or("").trim();
            field.parse().map_err(|_| Error::Syntax {
                column: 1,
                message: format!("expected {what} bit index, found '{field}'"),
            })
        };
        let from_bit = index("source")?;
        let to_bit = index("destination")?;
        let terms = AnfPolynomial::parse(parts.next().unwrap_or(""))?;
        Ok(ShiftMove::new(from_bit, to_bit, terms))
    }
}

impl fmt::Display for ShiftMove {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{}", self.from_bit, self.to_bit, self.terms)
    }
}

/// Target Galois shape: terminal bit `tau` and the residuals `g_tau … g_{n-1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GaloisProfile {
    n: usize,
    tau: usize,
    g_parts: Vec<AnfPolynomial>,
}

impl GaloisProfile {
    /// `g_parts[k]` is the residual of bit `tau + k`.
    pub fn new(
        n: usize,
        tau: usize,
        g_parts: Vec<AnfPolynomial>,
    ) -> Result<Self, ProfileError> {
        if tau >= n {
            return Err(ProfileError::TauOutOfRange { tau, n });
        }
        if g_parts.len() != n - tau {
            return Err(ProfileError::PartCount {
                expected: n - tau,
                found: g_parts.len(),
            });
        }
        for (k, g) in g_parts.iter().enumerate() {
            let bit = tau + k;
            if let Some(var) = g.max_index().filter(|&v| v > tau) {
                return Err(ProfileError::ReadsAboveTerminal { bit, var, tau });
            }
            if g.depends_on((bit + 1) % n) {
                return Err(ProfileError::NonSingular { bit });
            }
        }
        if tau < n - 1 && g_parts[0].is_zero() {
            return Err(ProfileError::ZeroTerminalPart { tau });
        }
        Ok(GaloisProfile { n, tau, g_parts })
    }

    /// Reads the profile off a uniform register whose `g_tau` reads only
    /// bits `<= tau`.
    pub fn of_register(m: &Nlfsr) -> Result<Self> {
        let tau = m.require_uniform()?;
        let g_tau = m.g_part(tau)?;
        if let Some(var) = g_tau.max_index().filter(|&v| v > tau) {
            return Err(Error::TerminalReadsAbove { tau, var });
        }
        let parts = (tau..m.n()).map(|i| m.g_part(i)).collect::<Result<_>>()?;
        Ok(Self::new(m.n(), tau, parts)?)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn tau(&self) -> usize {
        self.tau
    }

    /// Residual of bit `bit`; zero below `tau`.
    pub fn g(&self, bit: usize) -> AnfPolynomial {
        if bit < self.tau {
            AnfPolynomial::zero()
        } else {
            self.g_parts[bit - self.tau].clone()
        }
    }

    pub fn g_parts(&self) -> &[AnfPolynomial] {
        &self.g_parts
    }

    /// `XOR_{k=tau}^{upto-1} g_k|_{+(upto-k)}`: the product-terms still
    /// pending at bit `upto` during lowering. Zero when `upto == tau`.
    pub fn pending_terms(&self, upto: usize) -> AnfPolynomial {
        (self.tau..upto).fold(AnfPolynomial::zero(), |acc, k| {
            let shifted = self
                .g(k)
                .shift_plain((upto - k) as isize)
                .expect("positive shift");
            acc.xor(&shifted)
        })
    }

    /// Residual of the top feedback of the Fibonacci counterpart:
    /// `g_{n-1} ⊕ g_{n-2}|_{+1} ⊕ … ⊕ g_tau|_{+(n-1-tau)}`.
    pub fn fibonacci_g(&self) -> AnfPolynomial {
        self.g(self.n - 1).xor(&self.pending_terms(self.n - 1))
    }

    /// The Galois register this profile describes.
    pub fn register(&self) -> Nlfsr {
        Nlfsr::from_singular((0..self.n).map(|i| self.g(i)).collect())
            .expect("profile supports are within the register")
    }
}

/// Result of [`lower_to_profile`]: the Galois register and the one-bit
/// shiftings that produced it, highest source bit first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lowering {
    pub register: Nlfsr,
    pub moves: Vec<ShiftMove>,
}

fn check_bit(bit: usize, n: usize) -> Result<(), ShiftRejection> {
    if bit >= n {
        Err(ShiftRejection::BitOutOfRange { bit, n })
    } else {
        Ok(())
    }
}

fn check_window(terms: &AnfPolynomial, from: usize, to: usize) -> Result<(), ShiftRejection> {
    let lo = from - to;
    match terms.support().into_iter().find(|&v| v < lo || v > from) {
        Some(var) => Err(ShiftRejection::ReadsOutsideWindow {
            var,
            lo,
            hi: from,
            from,
            to,
        }),
        None => Ok(()),
    }
}

/// XOR `terms` out of `g_from` and their remapped copy into `g_to`.
fn transfer(m: &Nlfsr, from: usize, to: usize, terms: &AnfPolynomial) -> Result<Nlfsr> {
    let moved = terms.shift_mod(from, to, m.n())?;
    let mut feedbacks = m.feedbacks().to_vec();
    feedbacks[from] = feedbacks[from].xor(terms);
    feedbacks[to] = feedbacks[to].xor(&moved);
    Nlfsr::new(feedbacks)
}

/// Shifts `move.terms` from the terminal bit of a uniform register down to
/// `move.to_bit`.
///
/// The terms must all be product-terms of `g_{from}` and may only read
/// `x_{from-to} … x_{from}`, so the index remapping never wraps.
pub fn apply_shift(m: &Nlfsr, mv: &ShiftMove) -> Result<Nlfsr> {
    let n = m.n();
    let (from, to) = (mv.from_bit, mv.to_bit);
    check_bit(from, n)?;
    check_bit(to, n)?;
    m.uniformity().map_err(ShiftRejection::SourceNotUniform)?;
    let tau = m.terminal_bit();
    if from != tau {
        return Err(ShiftRejection::SourceNotTerminal { from, tau }.into());
    }
    if to >= from {
        return Err(ShiftRejection::NotLowering { from, to }.into());
    }
    if !mv.terms.is_subset_of(&m.g_part(from)?) {
        return Err(ShiftRejection::NotSubset { bit: from }.into());
    }
    if mv.terms.is_zero() {
        return Ok(m.clone());
    }
    check_window(&mv.terms, from, to)?;
    let result = transfer(m, from, to, &mv.terms)?;
    result
        .uniformity()
        .map_err(ShiftRejection::ResultNotUniform)?;
    Ok(result)
}

/// Applies raw moves in order, each with the full guard of [`apply_shift`].
pub fn apply_moves(m: &Nlfsr, moves: &[ShiftMove]) -> Result<Nlfsr> {
    moves
        .iter()
        .try_fold(m.clone(), |cur, mv| apply_shift(&cur, mv))
}

/// One lowering stage: XOR-transfers `terms` from bit `from` to `from - 1`.
///
/// Unlike [`apply_shift`] the terms need not be a subset of `g_from`, and
/// `from` may sit below the terminal bit as long as every lower bit is a
/// pure shift.
pub fn lower_one_bit(m: &Nlfsr, from: usize, terms: &AnfPolynomial) -> Result<Nlfsr> {
    let n = m.n();
    check_bit(from, n)?;
    m.uniformity().map_err(ShiftRejection::SourceNotUniform)?;
    let tau = m.terminal_bit();
    if from > tau {
        return Err(ShiftRejection::SourceNotTerminal { from, tau }.into());
    }
    if from == 0 {
        return Err(ShiftRejection::NotLowering { from, to: 0 }.into());
    }
    if terms.is_zero() {
        return Ok(m.clone());
    }
    check_window(terms, from, from - 1)?;
    let result = transfer(m, from, from - 1, terms)?;
    result
        .uniformity()
        .map_err(ShiftRejection::ResultNotUniform)?;
    Ok(result)
}

/// Lowers a Fibonacci register into the Galois shape `profile` through
/// `n-1-tau` one-bit stages. Stage `j` (from `n-1` down to `tau+1`) moves
/// [`GaloisProfile::pending_terms`]`(j)` from bit `j` to bit `j-1`.
pub fn lower_to_profile(fib: &Nlfsr, profile: &GaloisProfile) -> Result<Lowering> {
    let n = fib.n();
    if !fib.is_fibonacci() {
        return Err(Error::NotFibonacci);
    }
    fib.require_uniform()?;
    if profile.n() != n {
        return Err(ProfileError::SizeMismatch {
            profile: profile.n(),
            register: n,
        }
        .into());
    }
    if profile.fibonacci_g() != fib.g_part(n - 1)? {
        return Err(ProfileError::Inconsistent.into());
    }
    let mut register = fib.clone();
    let mut moves = Vec::with_capacity(n - 1 - profile.tau());
    for from in (profile.tau() + 1..n).rev() {
        let terms = profile.pending_terms(from);
        register = lower_one_bit(&register, from, &terms)?;
        moves.push(ShiftMove::new(from, from - 1, terms));
    }
    debug_assert_eq!(register, profile.register());
    Ok(Lowering { register, moves })
}

/// The Fibonacci register equivalent to a uniform Galois register: top
/// feedback `x_0 ⊕ XOR_{k=tau}^{n-1} g_k|_{+(n-1-k)}`, all other bits pure
/// shifts.
pub fn reconstruct_fibonacci(g: &Nlfsr) -> Result<Nlfsr> {
    let profile = GaloisProfile::of_register(g)?;
    Nlfsr::fibonacci(g.n(), profile.fibonacci_g())
}
