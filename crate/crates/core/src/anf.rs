//! Boolean polynomials in algebraic normal form over GF(2).
//!
//! A polynomial is an XOR of product-terms, each product-term an AND of
//! distinct variables `x_k`. The empty product-term is the constant 1 and
//! the empty polynomial is the constant 0.
//!
//! Text form: `x3 + x1 + x0*x1`, where `+` is XOR and `*` is AND. The
//! literal `1` is the constant term and `0` alone denotes the zero
//! polynomial.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::nlfsr::RegisterState;

/// A product of distinct variables, stored as a strictly ascending index list.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Monomial(Vec<usize>);

impl Monomial {
    /// The constant-1 product-term.
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(index: usize) -> Self {
        Monomial(vec![index])
    }

    /// Builds a monomial from any index list; repeats collapse since `x·x = x`.
    pub fn new<I: IntoIterator<Item = usize>>(vars: I) -> Self {
        let mut v: Vec<usize> = vars.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        Monomial(v)
    }

    pub fn vars(&self) -> &[usize] {
        &self.0
    }

    pub fn is_constant(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn contains(&self, index: usize) -> bool {
        self.0.binary_search(&index).is_ok()
    }

    pub fn max_index(&self) -> Option<usize> {
        self.0.last().copied()
    }

    /// Bit mask of the variables; every index must be below 64.
    pub fn mask(&self) -> u64 {
        self.0.iter().fold(0u64, |m, &k| {
            debug_assert!(k < 64);
            m | (1u64 << k)
        })
    }

    fn evaluate_with(&self, bit: impl Fn(usize) -> bool) -> bool {
        self.0.iter().all(|&k| bit(k))
    }

    fn shift_plain(&self, delta: isize) -> Result<Monomial> {
        let vars = self
            .0
            .iter()
            .map(|&k| {
                let shifted = k as isize + delta;
                if shifted < 0 {
                    Err(Error::NegativeIndex { index: k, delta })
                } else {
                    Ok(shifted as usize)
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Monomial(vars))
    }

    fn shift_mod(&self, from_bit: usize, to_bit: usize, n: usize) -> Monomial {
        Monomial::new(self.0.iter().map(|&k| (k + n - from_bit % n + to_bit) % n))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for (i, k) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str("*")?;
            }
            write!(f, "x{k}")?;
        }
        Ok(())
    }
}

/// An XOR-sum of distinct product-terms.
///
/// Terms are kept in ascending lexicographic order of their index lists, so
/// equal polynomials compare and format identically.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct AnfPolynomial {
    terms: BTreeSet<Monomial>,
}

impl AnfPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_terms([Monomial::one()])
    }

    pub fn var(index: usize) -> Self {
        Self::from_terms([Monomial::var(index)])
    }

    /// XOR-sums the given terms; a term listed twice cancels.
    pub fn from_terms<I: IntoIterator<Item = Monomial>>(terms: I) -> Self {
        let mut p = Self::zero();
        for t in terms {
            p.toggle(t);
        }
        p
    }

    fn toggle(&mut self, term: Monomial) {
        if !self.terms.remove(&term) {
            self.terms.insert(term);
        }
    }

    pub fn terms(&self) -> impl ExactSizeIterator<Item = &Monomial> + '_ {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn contains_term(&self, term: &Monomial) -> bool {
        self.terms.contains(term)
    }

    pub fn has_constant_term(&self) -> bool {
        self.terms.contains(&Monomial::one())
    }

    /// True if every product-term of `self` is also a product-term of `other`.
    pub fn is_subset_of(&self, other: &AnfPolynomial) -> bool {
        self.terms.is_subset(&other.terms)
    }

    pub fn degree(&self) -> usize {
        self.terms.iter().map(Monomial::degree).max().unwrap_or(0)
    }

    /// Union of the variable indices over all product-terms.
    pub fn support(&self) -> BTreeSet<usize> {
        self.terms
            .iter()
            .flat_map(|t| t.vars().iter().copied())
            .collect()
    }

    pub fn max_index(&self) -> Option<usize> {
        self.terms.iter().filter_map(Monomial::max_index).max()
    }

    pub fn min_index(&self) -> Option<usize> {
        self.terms.iter().filter_map(|t| t.vars().first().copied()).min()
    }

    pub fn depends_on(&self, index: usize) -> bool {
        self.terms.iter().any(|t| t.contains(index))
    }

    /// Fails if any variable index is `n` or larger.
    pub fn check_bound(&self, n: usize) -> Result<()> {
        match self.max_index() {
            Some(index) if index >= n => Err(Error::IndexOutOfRange { index, n }),
            _ => Ok(()),
        }
    }

    /// GF(2) sum: the symmetric difference of the term sets.
    pub fn xor(&self, other: &AnfPolynomial) -> AnfPolynomial {
        AnfPolynomial {
            terms: self
                .terms
                .symmetric_difference(&other.terms)
                .cloned()
                .collect(),
        }
    }

    pub fn evaluate(&self, state: &RegisterState) -> Result<bool> {
        self.check_bound(state.len())?;
        Ok(self.evaluate_bits(state.bits()))
    }

    /// Evaluates on a bit slice indexed by variable; panics on an index out of range.
    pub fn evaluate_bits(&self, bits: &[bool]) -> bool {
        self.terms
            .iter()
            .fold(false, |acc, t| acc ^ t.evaluate_with(|k| bits[k]))
    }

    /// Evaluates on a packed state where bit `k` of `word` is `x_k`.
    pub fn evaluate_word(&self, word: u64) -> bool {
        self.terms.iter().fold(false, |acc, t| {
            let m = t.mask();
            acc ^ (word & m == m)
        })
    }

    /// Index shift without wraparound: `x_k` becomes `x_{k+delta}`.
    pub fn shift_plain(&self, delta: isize) -> Result<AnfPolynomial> {
        if delta == 0 {
            return Ok(self.clone());
        }
        let terms = self
            .terms
            .iter()
            .map(|t| t.shift_plain(delta))
            .collect::<Result<BTreeSet<_>>>()?;
        Ok(AnfPolynomial { terms })
    }

    /// Index remapping of a shifting from bit `from_bit` to bit `to_bit` of an
    /// `n`-bit register: `x_k` becomes `x_{(k - from_bit + to_bit) mod n}`.
    pub fn shift_mod(&self, from_bit: usize, to_bit: usize, n: usize) -> Result<AnfPolynomial> {
        for bit in [from_bit, to_bit] {
            if bit >= n {
                return Err(Error::IndexOutOfRange { index: bit, n });
            }
        }
        self.check_bound(n)?;
        Ok(Self::from_terms(
            self.terms.iter().map(|t| t.shift_mod(from_bit, to_bit, n)),
        ))
    }

    pub fn parse(text: &str) -> Result<AnfPolynomial> {
        Parser::new(text).polynomial()
    }

    /// Parses and rejects any variable index `>= n`.
    pub fn parse_bounded(text: &str, n: usize) -> Result<AnfPolynomial> {
        let p = Self::parse(text)?;
        p.check_bound(n)?;
        Ok(p)
    }
}

impl fmt::Display for AnfPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, t) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "{t}")?;
        }
        Ok(())
    }
}

impl FromStr for AnfPolynomial {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s)
    }
}

impl From<Monomial> for AnfPolynomial {
    fn from(m: Monomial) -> Self {
        Self::from_terms([m])
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str) -> Self {
        Parser {
            src: text.as_bytes(),
            pos: 0,
        }
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Syntax {
            column: self.pos + 1,
            message: message.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn digits(&mut self) -> Option<usize> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .ok()
            .and_then(|s| s.parse().ok())
    }

    fn polynomial(mut self) -> Result<AnfPolynomial> {
        if self.peek().is_none() {
            return self.error("empty polynomial");
        }
        if self.peek() == Some(b'0') {
            let save = self.pos;
            self.pos += 1;
            if self.peek().is_none() {
                return Ok(AnfPolynomial::zero());
            }
            self.pos = save;
            return self.error("'0' is only allowed as the whole polynomial");
        }
        let mut p = AnfPolynomial::zero();
        loop {
            p.toggle(self.term()?);
            match self.peek() {
                None => return Ok(p),
                Some(b'+') => self.pos += 1,
                Some(c) => return self.error(format!("expected '+', found '{}'", c as char)),
            }
        }
    }

    fn term(&mut self) -> Result<Monomial> {
        if self.peek() == Some(b'1') {
            self.pos += 1;
            return Ok(Monomial::one());
        }
        let mut vars = vec![self.factor()?];
        while self.peek() == Some(b'*') {
            self.pos += 1;
            vars.push(self.factor()?);
        }
        Ok(Monomial::new(vars))
    }

    fn factor(&mut self) -> Result<usize> {
        match self.peek() {
            Some(b'x') => {
                self.pos += 1;
                match self.digits() {
                    Some(k) => Ok(k),
                    None => self.error("expected variable index after 'x'"),
                }
            }
            Some(c) => self.error(format!("expected 'x' or '1', found '{}'", c as char)),
            None => self.error("unexpected end of input"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> AnfPolynomial {
        s.parse().unwrap()
    }

    fn state(bits: &[bool]) -> RegisterState {
        RegisterState::from_bits(bits.to_vec())
    }

    #[test]
    fn evaluate_examples() {
        let s = state(&[false, true, true, false]);
        assert!(p("x1*x2 + x3").evaluate(&s).unwrap());
        assert!(!AnfPolynomial::zero().evaluate(&s).unwrap());
        // g-part of the Fibonacci register's top feedback at state 0001 (s_0 = 1 only)
        let s = RegisterState::parse_display("0001").unwrap();
        assert!(!p("x1 + x2 + x1*x2").evaluate(&s).unwrap());
        assert!(AnfPolynomial::one().evaluate(&s).unwrap());
    }

    #[test]
    fn evaluate_out_of_range() {
        let s = state(&[true, true]);
        assert_eq!(
            p("x0*x2").evaluate(&s),
            Err(Error::IndexOutOfRange { index: 2, n: 2 })
        );
    }

    #[test]
    fn shift_plain_examples() {
        assert_eq!(p("x1*x2 + x3").shift_plain(2).unwrap(), p("x3*x4 + x5"));
        assert_eq!(p("x1*x2 + x3").shift_plain(0).unwrap(), p("x1*x2 + x3"));
        assert_eq!(p("x1").shift_plain(-1).unwrap(), p("x0"));
        assert_eq!(
            p("x0*x2").shift_plain(-1),
            Err(Error::NegativeIndex { index: 0, delta: -1 })
        );
        assert_eq!(p("1 + x2").shift_plain(-2).unwrap(), p("1 + x0"));
    }

    #[test]
    fn shift_mod_examples() {
        assert_eq!(p("x1").shift_mod(2, 1, 4).unwrap(), p("x0"));
        assert_eq!(p("x0*x3 + x2").shift_mod(3, 3, 4).unwrap(), p("x0*x3 + x2"));
        assert_eq!(p("x0").shift_mod(0, 3, 4).unwrap(), p("x3"));
        assert_eq!(p("x0").shift_mod(1, 0, 4).unwrap(), p("x3"));
        assert!(p("x4").shift_mod(1, 0, 4).is_err());
        assert!(p("x1").shift_mod(4, 0, 4).is_err());
    }

    #[test]
    fn xor_examples() {
        assert_eq!(p("x1 + x2").xor(&p("x2")), p("x1"));
        assert_eq!(p("x1 + x0*x3").xor(&AnfPolynomial::zero()), p("x1 + x0*x3"));
        assert!(p("x0*x1").xor(&p("x0*x1")).is_zero());
    }

    #[test]
    fn support_examples() {
        assert_eq!(p("x1*x2 + x3").support(), BTreeSet::from([1, 2, 3]));
        assert!(AnfPolynomial::zero().support().is_empty());
        assert!(AnfPolynomial::one().support().is_empty());
    }

    #[test]
    fn parse_examples() {
        assert_eq!(
            p("x0 + x1"),
            AnfPolynomial::from_terms([Monomial::var(0), Monomial::var(1)])
        );
        assert_eq!(
            p("x3 + x1 + x0*x1"),
            AnfPolynomial::from_terms([
                Monomial::var(3),
                Monomial::var(1),
                Monomial::new([0, 1])
            ])
        );
        let q = p("1 + x2");
        assert!(q.has_constant_term());
        assert_eq!(q.len(), 2);
        assert_eq!(p(" x1*x1 + x0 "), p("x0 + x1"));
        assert!(p("x1 + x1").is_zero());
        assert!(p("0").is_zero());
    }

    #[test]
    fn format_is_canonical() {
        assert_eq!(p("x3 + x1 + x0*x1").to_string(), "x0*x1 + x1 + x3");
        assert_eq!(p("x2 + 1").to_string(), "1 + x2");
        assert_eq!(AnfPolynomial::zero().to_string(), "0");
    }

    #[test]
    fn parse_errors_carry_column() {
        assert_eq!(
            AnfPolynomial::parse("x0 + y1"),
            Err(Error::Syntax {
                column: 6,
                message: "expected 'x' or '1', found 'y'".into()
            })
        );
        assert!(matches!(
            AnfPolynomial::parse("x0 +"),
            Err(Error::Syntax { column: 5, .. })
        ));
        assert!(AnfPolynomial::parse("").is_err());
        assert!(AnfPolynomial::parse("x").is_err());
        assert!(AnfPolynomial::parse("x1 x2").is_err());
        assert!(AnfPolynomial::parse("0 + x1").is_err());
        assert_eq!(
            AnfPolynomial::parse_bounded("x0 + x4", 4),
            Err(Error::IndexOutOfRange { index: 4, n: 4 })
        );
    }

    #[test]
    fn word_and_slice_evaluation_agree() {
        let q = p("1 + x0*x2 + x1*x2*x3 + x3");
        for w in 0u64..16 {
            let bits: Vec<bool> = (0..4).map(|k| w >> k & 1 == 1).collect();
            assert_eq!(q.evaluate_word(w), q.evaluate_bits(&bits));
        }
    }
}
