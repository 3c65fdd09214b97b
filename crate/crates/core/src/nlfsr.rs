//! Register states, feedback functions and simulation.

use std::fmt;
use std::str::FromStr;

use crate::anf::{AnfPolynomial, Monomial};
use crate::error::{Error, Result, Violation};

/// Largest register handled by full state-space scans unless overridden.
pub const EXHAUSTIVE_LIMIT: usize = 20;

/// Largest register that fits a packed `u64` state.
pub const PACKED_LIMIT: usize = 64;

/// Values `(s_0, …, s_{n-1})` of the register bits.
///
/// Text form prints the highest index first, so `0001` has `s_0 = 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RegisterState {
    bits: Vec<bool>,
}

impl RegisterState {
    pub fn from_bits(bits: Vec<bool>) -> Self {
        RegisterState { bits }
    }

    pub fn zeros(n: usize) -> Self {
        RegisterState {
            bits: vec![false; n],
        }
    }

    /// Bit `k` of `word` becomes `s_k`.
    pub fn from_word(word: u64, n: usize) -> Self {
        debug_assert!(n <= PACKED_LIMIT);
        RegisterState {
            bits: (0..n).map(|k| word >> k & 1 == 1).collect(),
        }
    }

    /// Packs into a word with `s_k` at bit `k`; `None` for more than 64 bits.
    pub fn to_word(&self) -> Option<u64> {
        if self.bits.len() > PACKED_LIMIT {
            return None;
        }
        Some(
            self.bits
                .iter()
                .enumerate()
                .fold(0u64, |w, (k, &b)| w | (u64::from(b) << k)),
        )
    }

    /// Parses a bit string written `s_{n-1} … s_0`.
    pub fn parse_display(text: &str) -> Result<Self> {
        let text = text.trim();
        if text.is_empty() {
            return Err(Error::Syntax {
                column: 1,
                message: "empty state".into(),
            });
        }
        let mut bits = Vec::with_capacity(text.len());
        for (i, c) in text.bytes().enumerate().rev() {
            match c {
                b'0' => bits.push(false),
                b'1' => bits.push(true),
                _ => {
                    return Err(Error::Syntax {
                        column: i + 1,
                        message: format!("expected '0' or '1', found '{}'", c as char),
                    })
                }
            }
        }
        Ok(RegisterState { bits })
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn get(&self, i: usize) -> bool {
        self.bits[i]
    }

    pub fn set(&mut self, i: usize, value: bool) {
        self.bits[i] = value;
    }

    /// Indices where `self` and `other` differ.
    pub fn diff(&self, other: &RegisterState) -> Vec<usize> {
        self.bits
            .iter()
            .zip(&other.bits)
            .enumerate()
            .filter(|(_, (a, b))| a != b)
            .map(|(i, _)| i)
            .collect()
    }
}

impl fmt::Display for RegisterState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in self.bits.iter().rev() {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl FromStr for RegisterState {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse_display(s)
    }
}

/// Formats an output bit sequence as a `0`/`1` string, first bit first.
pub fn format_bits(bits: &[bool]) -> String {
    bits.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

/// An `n`-bit nonlinear feedback shift register: bit `i` is updated to `f_i`
/// of the current state and the output is bit 0.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Nlfsr {
    feedbacks: Vec<AnfPolynomial>,
}

impl Nlfsr {
    /// `feedbacks[i]` is `f_i`. Requires `n >= 2` and every variable below `n`.
    pub fn new(feedbacks: Vec<AnfPolynomial>) -> Result<Self> {
        let n = feedbacks.len();
        if n < 2 {
            return Err(Error::TooSmall(n));
        }
        for f in &feedbacks {
            f.check_bound(n)?;
        }
        Ok(Nlfsr { feedbacks })
    }

    /// Builds `f_i = x_{(i+1) mod n} ⊕ g_i` from the residuals `g_i`.
    pub fn from_singular(g_parts: Vec<AnfPolynomial>) -> Result<Self> {
        let n = g_parts.len();
        let feedbacks = g_parts
            .into_iter()
            .enumerate()
            .map(|(i, g)| g.xor(&AnfPolynomial::var((i + 1) % n)))
            .collect();
        Self::new(feedbacks)
    }

    /// Fibonacci register whose top feedback is `x_0 ⊕ g`.
    pub fn fibonacci(n: usize, g: AnfPolynomial) -> Result<Self> {
        let mut g_parts = vec![AnfPolynomial::zero(); n];
        if let Some(top) = g_parts.last_mut() {
            *top = g;
        }
        Self::from_singular(g_parts)
    }

    pub fn n(&self) -> usize {
        self.feedbacks.len()
    }

    pub fn feedback(&self, i: usize) -> &AnfPolynomial {
        &self.feedbacks[i]
    }

    pub fn feedbacks(&self) -> &[AnfPolynomial] {
        &self.feedbacks
    }

    fn successor(&self, i: usize) -> usize {
        (i + 1) % self.n()
    }

    /// Checks that each `f_i` reads `x_{(i+1) mod n}`.
    pub fn validate(&self) -> Result<()> {
        let violations: Vec<_> = (0..self.n())
            .filter(|&i| !self.feedbacks[i].depends_on(self.successor(i)))
            .map(|bit| Violation::MissingDependence { bit })
            .collect();
        if violations.is_empty() {
            Ok(())
        } else {
            Err(Error::Invalid(violations))
        }
    }

    fn check_state(&self, s: &RegisterState) -> Result<()> {
        if s.len() != self.n() {
            return Err(Error::LengthMismatch {
                expected: self.n(),
                found: s.len(),
            });
        }
        Ok(())
    }

    /// One clock: every bit takes the value of its feedback on the old state.
    pub fn step(&self, s: &RegisterState) -> Result<RegisterState> {
        self.check_state(s)?;
        Ok(self.step_unchecked(s))
    }

    fn step_unchecked(&self, s: &RegisterState) -> RegisterState {
        RegisterState::from_bits(
            self.feedbacks
                .iter()
                .map(|f| f.evaluate_bits(s.bits()))
                .collect(),
        )
    }

    /// The first `len` output bits; the first is bit 0 of `s` itself.
    pub fn output_sequence(&self, s: &RegisterState, len: usize) -> Result<Vec<bool>> {
        Ok(self
            .state_sequence(s, len)?
            .into_iter()
            .map(|st| st.get(0))
            .collect())
    }

    /// `len` consecutive states starting with `s`.
    pub fn state_sequence(&self, s: &RegisterState, len: usize) -> Result<Vec<RegisterState>> {
        self.check_state(s)?;
        let mut out = Vec::with_capacity(len);
        let mut cur = s.clone();
        for _ in 0..len {
            let next = self.step_unchecked(&cur);
            out.push(std::mem::replace(&mut cur, next));
        }
        Ok(out)
    }

    fn is_pure_shift(&self, i: usize) -> bool {
        let f = &self.feedbacks[i];
        f.len() == 1 && f.contains_term(&Monomial::var(i + 1))
    }

    /// Largest `τ` such that `f_i = x_{i+1}` for every `i < τ`.
    pub fn terminal_bit(&self) -> usize {
        (0..self.n() - 1)
            .find(|&i| !self.is_pure_shift(i))
            .unwrap_or(self.n() - 1)
    }

    pub fn is_fibonacci(&self) -> bool {
        (0..self.n() - 1).all(|i| self.is_pure_shift(i))
    }

    /// The residual `g_i = f_i ⊕ x_{(i+1) mod n}`; fails unless it is free of
    /// `x_{(i+1) mod n}`.
    pub fn g_part(&self, i: usize) -> Result<AnfPolynomial> {
        let next = self.successor(i);
        let g = self.feedbacks[i].xor(&AnfPolynomial::var(next));
        if g.depends_on(next) {
            return Err(Error::NonSingular { bit: i });
        }
        Ok(g)
    }

    /// Lists every violation of the uniformity conditions: each feedback
    /// singular, and every `g_i` above the terminal bit reading only bits
    /// `<= τ`.
    pub fn uniformity(&self) -> Result<(), Vec<Violation>> {
        let tau = self.terminal_bit();
        let mut violations = Vec::new();
        for i in 0..self.n() {
            match self.g_part(i) {
                Err(_) => violations.push(Violation::NonSingular { bit: i }),
                Ok(g) if i > tau => {
                    violations.extend(g.support().into_iter().filter(|&v| v > tau).map(|var| {
                        Violation::ReadsAboveTerminal { bit: i, var, tau }
                    }))
                }
                Ok(_) => {}
            }
        }
        if violations.is_empty() {
            Ok(())
        } else {
            Err(violations)
        }
    }

    pub fn is_uniform(&self) -> bool {
        self.uniformity().is_ok()
    }

    pub(crate) fn require_uniform(&self) -> Result<usize> {
        self.uniformity().map_err(Error::NotUniform)?;
        Ok(self.terminal_bit())
    }

    /// All residuals `g_0 … g_{n-1}`; fails on the first non-singular bit.
    pub fn g_parts(&self) -> Result<Vec<AnfPolynomial>> {
        (0..self.n()).map(|i| self.g_part(i)).collect()
    }

    pub fn packed(&self) -> Result<PackedNlfsr> {
        PackedNlfsr::new(self)
    }

    /// Longest cycle over all `2^n` initial states.
    pub fn period(&self) -> Result<usize> {
        self.period_with_limit(EXHAUSTIVE_LIMIT)
    }

    pub fn period_with_limit(&self, limit: usize) -> Result<usize> {
        check_exhaustive(self.n(), limit)?;
        Ok(self.packed()?.orbits().max_cycle())
    }

    /// Length of the cycle eventually entered from `s`; any lead-in is excluded.
    pub fn period_from(&self, s: &RegisterState) -> Result<usize> {
        self.check_state(s)?;
        let packed = self.packed()?;
        let word = s.to_word().expect("packed register implies packable state");
        Ok(packed.cycle_length_from(word))
    }
}

pub(crate) fn check_exhaustive(n: usize, limit: usize) -> Result<()> {
    if n > limit.min(PACKED_LIMIT - 1) {
        return Err(Error::TooLarge {
            n,
            limit: limit.min(PACKED_LIMIT - 1),
        });
    }
    Ok(())
}

/// A register compiled to AND-masks over a `u64` state, for bulk simulation.
#[derive(Debug, Clone)]
pub struct PackedNlfsr {
    n: usize,
    masks: Vec<Vec<u64>>,
}

impl PackedNlfsr {
    pub fn new(m: &Nlfsr) -> Result<Self> {
        if m.n() > PACKED_LIMIT {
            return Err(Error::TooLarge {
                n: m.n(),
                limit: PACKED_LIMIT,
            });
        }
        Ok(PackedNlfsr {
            n: m.n(),
            masks: m
                .feedbacks()
                .iter()
                .map(|f| f.terms().map(Monomial::mask).collect())
                .collect(),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of states, `2^n`.
    pub fn state_count(&self) -> u64 {
        1u64 << self.n
    }

    #[inline]
    pub fn step(&self, s: u64) -> u64 {
        let mut next = 0u64;
        for (i, terms) in self.masks.iter().enumerate() {
            let bit = terms.iter().fold(0u64, |acc, &m| acc ^ u64::from(s & m == m));
            next |= bit << i;
        }
        next
    }

    /// Appends `len` output bits from `s` into `out`, packed 64 per word.
    pub fn output_words(&self, mut s: u64, len: usize, out: &mut Vec<u64>) {
        out.clear();
        out.resize(len.div_ceil(64), 0);
        for t in 0..len {
            out[t / 64] |= (s & 1) << (t % 64);
            s = self.step(s);
        }
    }

    /// Brent's cycle detection.
    pub fn cycle_length_from(&self, s: u64) -> usize {
        let mut power = 1usize;
        let mut lam = 1usize;
        let mut tortoise = s;
        let mut hare = self.step(s);
        while tortoise != hare {
            if power == lam {
                tortoise = hare;
                power *= 2;
                lam = 0;
            }
            hare = self.step(hare);
            lam += 1;
        }
        lam
    }

    pub fn is_bijective(&self) -> bool {
        let mut seen = vec![false; self.state_count() as usize];
        for s in 0..self.state_count() {
            let t = self.step(s) as usize;
            if std::mem::replace(&mut seen[t], true) {
                return false;
            }
        }
        true
    }

    /// Partitions the whole state space into cycles and lead-in (tail) states.
    pub fn orbits(&self) -> Orbits {
        let total = self.state_count() as usize;
        // visit[s]: 0 = unseen, otherwise 1 + index of the walk that reached s
        let mut visit = vec![0u32; total];
        let mut cycle_len = vec![0u32; total];
        let mut path = Vec::new();
        for start in 0..total {
            if visit[start] != 0 {
                continue;
            }
            let id = start as u32 + 1;
            path.clear();
            let mut s = start;
            while visit[s] == 0 {
                visit[s] = id;
                path.push(s);
                s = self.step(s as u64) as usize;
            }
            if visit[s] == id {
                let at = path.iter().position(|&p| p == s).expect("cycle entry on path");
                let len = (path.len() - at) as u32;
                for &c in &path[at..] {
                    cycle_len[c] = len;
                }
            }
        }
        Orbits { cycle_len }
    }
}

/// Cycle length of every state, or 0 for states not on a cycle.
#[derive(Debug, Clone)]
pub struct Orbits {
    cycle_len: Vec<u32>,
}

impl Orbits {
    pub fn cycle_len(&self, state: u64) -> Option<usize> {
        match self.cycle_len[state as usize] {
            0 => None,
            l => Some(l as usize),
        }
    }

    pub fn max_cycle(&self) -> usize {
        self.cycle_len.iter().copied().max().unwrap_or(0) as usize
    }

    pub fn tail_count(&self) -> usize {
        self.cycle_len.iter().filter(|&&l| l == 0).count()
    }

    pub fn iter(&self) -> impl Iterator<Item = Option<usize>> + '_ {
        self.cycle_len
            .iter()
            .map(|&l| if l == 0 { None } else { Some(l as usize) })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::samples::{n1, n2, n3};

    fn st(s: &str) -> RegisterState {
        s.parse().unwrap()
    }

    fn poly(s: &str) -> AnfPolynomial {
        s.parse().unwrap()
    }

    #[test]
    fn display_order_is_high_index_first() {
        let s = st("0001");
        assert!(s.get(0));
        assert!(!s.get(3));
        assert_eq!(s.to_string(), "0001");
        assert_eq!(s.to_word(), Some(1));
        assert_eq!(RegisterState::from_word(0b1010, 4).to_string(), "1010");
        assert!(RegisterState::parse_display("01a1").is_err());
    }

    #[test]
    fn step_examples() {
        assert_eq!(n1().step(&st("0001")).unwrap(), st("1000"));
        assert_eq!(n2().step(&st("0101")).unwrap(), st("1000"));
        assert_eq!(n3().step(&st("1111")).unwrap(), st("0111"));
        assert_eq!(
            n1().step(&st("001")),
            Err(Error::LengthMismatch {
                expected: 4,
                found: 3
            })
        );
    }

    #[test]
    fn output_sequences() {
        let out = n1().output_sequence(&st("0001"), 15).unwrap();
        assert_eq!(format_bits(&out), "100010110100111");
        let out = n3().output_sequence(&st("1000"), 15).unwrap();
        assert_eq!(format_bits(&out), "000101101001111");
        assert!(n3().output_sequence(&st("1000"), 0).unwrap().is_empty());
    }

    #[test]
    fn state_sequence_first_is_initial() {
        assert_eq!(n2().state_sequence(&st("0101"), 1).unwrap(), vec![st("0101")]);
        assert!(n2().state_sequence(&st("0101"), 0).unwrap().is_empty());
    }

    #[test]
    fn terminal_bits() {
        assert_eq!(n1().terminal_bit(), 2);
        assert_eq!(n2().terminal_bit(), 1);
        assert_eq!(n3().terminal_bit(), 3);
        let m = Nlfsr::new(vec![poly("x1 + x2"), poly("x2"), poly("x0")]).unwrap();
        assert_eq!(m.terminal_bit(), 0);
    }

    #[test]
    fn fibonacci_classification() {
        assert!(n3().is_fibonacci());
        assert!(!n1().is_fibonacci());
        assert!(!n2().is_fibonacci());
        let rot = Nlfsr::new(vec![poly("x1"), poly("x0")]).unwrap();
        assert!(rot.is_fibonacci());
        assert_eq!(rot.terminal_bit(), 1);
    }

    #[test]
    fn singular_decomposition() {
        assert_eq!(n1().g_part(2).unwrap(), poly("x1 + x0*x1"));
        assert_eq!(n2().g_part(1).unwrap(), poly("x0"));
        assert!(n3().g_part(1).unwrap().is_zero());
        let m = Nlfsr::new(vec![poly("x1 + x1*x0"), poly("x0")]).unwrap();
        assert_eq!(m.g_part(0), Err(Error::NonSingular { bit: 0 }));
    }

    #[test]
    fn uniformity_examples() {
        assert!(n1().is_uniform());
        assert!(n2().is_uniform());
        assert!(n3().is_uniform());
        // f_2 = x3 + x0*x2: g_2 reads x2 above tau = 1
        let mut f = n2().feedbacks().to_vec();
        f[2] = poly("x3 + x0*x2");
        let m = Nlfsr::new(f).unwrap();
        assert_eq!(m.terminal_bit(), 1);
        assert_eq!(
            m.uniformity(),
            Err(vec![Violation::ReadsAboveTerminal {
                bit: 2,
                var: 2,
                tau: 1
            }])
        );
        let m = Nlfsr::new(vec![poly("x1*x0"), poly("x0")]).unwrap();
        assert_eq!(m.uniformity(), Err(vec![Violation::NonSingular { bit: 0 }]));
    }

    #[test]
    fn validate_reports_missing_dependence() {
        assert!(n1().validate().is_ok());
        let m = Nlfsr::new(vec![poly("x0"), poly("x0")]).unwrap();
        assert_eq!(
            m.validate(),
            Err(Error::Invalid(vec![Violation::MissingDependence { bit: 0 }]))
        );
    }

    #[test]
    fn construction_errors() {
        assert_eq!(Nlfsr::new(vec![poly("x0")]), Err(Error::TooSmall(1)));
        assert_eq!(
            Nlfsr::new(vec![poly("x1"), poly("x2")]),
            Err(Error::IndexOutOfRange { index: 2, n: 2 })
        );
    }

    #[test]
    fn periods() {
        for m in [n1(), n2(), n3()] {
            assert_eq!(m.period().unwrap(), 15);
            assert_eq!(m.period_from(&st("0000")).unwrap(), 1);
            for w in 1..16 {
                assert_eq!(m.period_from(&RegisterState::from_word(w, 4)).unwrap(), 15);
            }
        }
        let rot = Nlfsr::new(vec![poly("x1"), poly("x0")]).unwrap();
        assert_eq!(rot.period().unwrap(), 2);
    }

    #[test]
    fn period_from_excludes_tail() {
        // f_1 = x0*x1, f_0 = x1: 01 -> 00 (fixed), 10 -> 01, 11 -> 11
        let m = Nlfsr::new(vec![poly("x1"), poly("x0*x1")]).unwrap();
        assert_eq!(m.period_from(&st("10")).unwrap(), 1);
        let orbits = m.packed().unwrap().orbits();
        assert_eq!(orbits.tail_count(), 2);
        assert_eq!(orbits.max_cycle(), 1);
    }

    #[test]
    fn period_limit() {
        let m = Nlfsr::fibonacci(21, AnfPolynomial::zero()).unwrap();
        assert_eq!(m.period(), Err(Error::TooLarge { n: 21, limit: 20 }));
    }

    #[test]
    fn packed_step_matches_polynomial_step() {
        for m in [n1(), n2(), n3()] {
            let p = m.packed().unwrap();
            for w in 0..16 {
                let s = RegisterState::from_word(w, 4);
                assert_eq!(p.step(w), m.step(&s).unwrap().to_word().unwrap());
            }
        }
    }
}
