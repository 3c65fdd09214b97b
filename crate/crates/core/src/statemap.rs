//! Matching initial states between a Fibonacci register and an equivalent
//! uniform Galois register.
//!
//! For a Galois register with terminal bit `tau`, bit `i > tau` of the Galois
//! state is the Fibonacci bit `s_i` XORed with the correction
//! `c_i = g_{i-1} ⊕ g_{i-2}|_{+1} ⊕ … ⊕ g_tau|_{+(i-1-tau)}` evaluated on `s`.
//! Bits `0..=tau` are shared. `c_i` reads only bits `< i` (not only bits
//! `<= tau`: `g_tau` may read `x_tau`, which its shifted copies move upward),
//! so the inverse recovers `s` from the low bits up.

use crate::anf::AnfPolynomial;
use crate::error::{Error, Result};
use crate::nlfsr::{Nlfsr, RegisterState};
use crate::transform::{lower_one_bit, GaloisProfile, ShiftMove};

/// Symbolic corrections for bits `tau+1 … n-1` of a Galois register.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StateCorrection {
    n: usize,
    tau: usize,
    polys: Vec<AnfPolynomial>,
    /// Length of the zero prefix that makes every correction vanish; `None`
    /// when some correction has a constant term.
    quiet_prefix: Option<usize>,
}

impl StateCorrection {
    /// Builds the corrections for a uniform register whose `g_tau` reads
    /// only bits `<= tau`.
    pub fn build(g: &Nlfsr) -> Result<Self> {
        let profile = GaloisProfile::of_register(g)?;
        let tau = profile.tau();
        let polys: Vec<_> = (tau + 1..g.n())
            .map(|i| profile.pending_terms(i).shift_plain(-1))
            .collect::<Result<_>>()?;
        let quiet_prefix = polys
            .iter()
            .all(|p: &AnfPolynomial| !p.has_constant_term())
            .then(|| {
                polys
                    .iter()
                    .filter_map(AnfPolynomial::max_index)
                    .max()
                    .map_or(0, |v| v + 1)
            });
        Ok(StateCorrection {
            n: g.n(),
            tau,
            polys,
            quiet_prefix,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn tau(&self) -> usize {
        self.tau
    }

    /// Correction for bit `i`; zero for `i <= tau`.
    pub fn correction(&self, i: usize) -> AnfPolynomial {
        if i <= self.tau {
            AnfPolynomial::zero()
        } else {
            self.polys[i - self.tau - 1].clone()
        }
    }

    pub fn polys(&self) -> &[AnfPolynomial] {
        &self.polys
    }

    /// Bits `0..k` whose vanishing silences every correction, or `None` if a
    /// correction has a constant term. `k` can exceed `tau + 1`.
    pub fn quiet_prefix(&self) -> Option<usize> {
        self.quiet_prefix
    }

    /// True when every correction vanishes on `s`, judged from its zero
    /// prefix alone; the map is then the identity on `s` in both directions.
    pub fn zero_prefix_applies(&self, s: &RegisterState) -> bool {
        self.quiet_prefix
            .is_some_and(|k| s.bits()[..k].iter().all(|&b| !b))
    }

    fn check(&self, s: &RegisterState) -> Result<()> {
        if s.len() != self.n {
            return Err(Error::LengthMismatch {
                expected: self.n,
                found: s.len(),
            });
        }
        Ok(())
    }

    /// Fibonacci state to matching Galois state.
    pub fn fib_to_galois(&self, s: &RegisterState) -> Result<RegisterState> {
        self.check(s)?;
        if self.zero_prefix_applies(s) {
            return Ok(s.clone());
        }
        let mut r = s.clone();
        for (k, c) in self.polys.iter().enumerate() {
            let i = self.tau + 1 + k;
            r.set(i, s.get(i) ^ c.evaluate_bits(s.bits()));
        }
        Ok(r)
    }

    /// Galois state to matching Fibonacci state.
    pub fn galois_to_fib(&self, r: &RegisterState) -> Result<RegisterState> {
        self.check(r)?;
        if self.zero_prefix_applies(r) {
            return Ok(r.clone());
        }
        // c_i reads bits below i, which are already recovered
        let mut s = r.clone();
        for (k, c) in self.polys.iter().enumerate() {
            let i = self.tau + 1 + k;
            let bit = r.get(i) ^ c.evaluate_bits(s.bits());
            s.set(i, bit);
        }
        Ok(s)
    }

    /// Packed-state variant of [`Self::fib_to_galois`].
    pub fn fib_to_galois_word(&self, s: u64) -> u64 {
        let mut r = s;
        for (k, c) in self.polys.iter().enumerate() {
            r ^= u64::from(c.evaluate_word(s)) << (self.tau + 1 + k);
        }
        r
    }

    /// Packed-state variant of [`Self::galois_to_fib`].
    pub fn galois_to_fib_word(&self, r: u64) -> u64 {
        let mut s = r;
        for (k, c) in self.polys.iter().enumerate() {
            s ^= u64::from(c.evaluate_word(s)) << (self.tau + 1 + k);
        }
        s
    }
}

/// Replaces bit `tau` of `s` by `s_tau ⊕ p|_{-1}(s)`: the state of the
/// register obtained by shifting `p` from bit `tau` to `tau - 1` that
/// matches state `s` of the original.
pub fn single_shift_map(p: &AnfPolynomial, tau: usize, s: &RegisterState) -> Result<RegisterState> {
    if tau == 0 || tau >= s.len() {
        return Err(Error::Precondition(format!(
            "bit {tau} cannot be lowered in a {}-bit register",
            s.len()
        )));
    }
    if let Some(var) = p.support().into_iter().find(|&v| v == 0 || v > tau) {
        return Err(Error::Precondition(format!(
            "shifted terms read x{var}, outside x1..=x{tau}"
        )));
    }
    let mut r = s.clone();
    r.set(tau, s.get(tau) ^ p.shift_plain(-1)?.evaluate(s)?);
    Ok(r)
}

pub fn map_fib_to_galois(g: &Nlfsr, s: &RegisterState) -> Result<RegisterState> {
    StateCorrection::build(g)?.fib_to_galois(s)
}

pub fn map_galois_to_fib(g: &Nlfsr, r: &RegisterState) -> Result<RegisterState> {
    StateCorrection::build(g)?.galois_to_fib(r)
}

/// Per-step comparison of the two state sequences of a one-bit shifting.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StateDiffReport {
    pub tau: usize,
    /// Differing bit positions at each time step.
    pub diffs: Vec<Vec<usize>>,
}

impl StateDiffReport {
    /// True when no step differs outside bit `tau`.
    pub fn passes(&self) -> bool {
        self.diffs.iter().flatten().all(|&b| b == self.tau)
    }

    pub fn steps_differing(&self) -> impl Iterator<Item = usize> + '_ {
        self.diffs
            .iter()
            .enumerate()
            .filter(|(_, d)| !d.is_empty())
            .map(|(t, _)| t)
    }
}

/// Runs `before` from `s` and `after` from the mapped state for `len` steps
/// and records where their states differ. `mv` must be a one-bit lowering
/// and `after` the register it produces from `before`.
pub fn compare_state_sequences(
    before: &Nlfsr,
    after: &Nlfsr,
    mv: &ShiftMove,
    s: &RegisterState,
    len: usize,
) -> Result<StateDiffReport> {
    if mv.to_bit + 1 != mv.from_bit {
        return Err(Error::Precondition(format!(
            "move {} is not a one-bit lowering",
            mv
        )));
    }
    if &lower_one_bit(before, mv.from_bit, &mv.terms)? != after {
        return Err(Error::Precondition(
            "second register is not the result of the move".into(),
        ));
    }
    let r = single_shift_map(&mv.terms, mv.from_bit, s)?;
    let a = before.state_sequence(s, len)?;
    let b = after.state_sequence(&r, len)?;
    Ok(StateDiffReport {
        tau: mv.from_bit,
        diffs: a.iter().zip(&b).map(|(x, y)| x.diff(y)).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nlfsr::format_bits;
    use crate::samples::{n1, n2, n3};

    fn st(s: &str) -> RegisterState {
        s.parse().unwrap()
    }

    fn poly(s: &str) -> AnfPolynomial {
        s.parse().unwrap()
    }

    #[test]
    fn single_shift_examples() {
        assert_eq!(single_shift_map(&poly("x1"), 2, &st("0001")).unwrap(), st("0101"));
        assert_eq!(
            single_shift_map(&AnfPolynomial::zero(), 2, &st("1011")).unwrap(),
            st("1011")
        );
        assert_eq!(single_shift_map(&poly("x1"), 2, &st("1000")).unwrap(), st("1000"));
    }

    #[test]
    fn single_shift_preconditions() {
        assert!(single_shift_map(&poly("x0*x1"), 2, &st("0001")).is_err());
        assert!(single_shift_map(&poly("x3"), 2, &st("0001")).is_err());
        assert!(single_shift_map(&poly("x1"), 0, &st("0001")).is_err());
    }

    #[test]
    fn corrections() {
        let c = StateCorrection::build(&n2()).unwrap();
        assert_eq!(c.tau(), 1);
        assert_eq!(c.correction(2), poly("x0"));
        assert_eq!(c.correction(3), poly("x1 + x0*x1"));
        assert!(c.correction(1).is_zero());

        let c = StateCorrection::build(&n1()).unwrap();
        assert_eq!(c.polys(), &[poly("x1 + x0*x1")]);

        let c = StateCorrection::build(&n3()).unwrap();
        assert!(c.polys().is_empty());
    }

    #[test]
    fn fib_to_galois_examples() {
        assert_eq!(map_fib_to_galois(&n2(), &st("0001")).unwrap(), st("0101"));
        assert_eq!(map_fib_to_galois(&n1(), &st("0001")).unwrap(), st("0001"));
        assert_eq!(map_fib_to_galois(&n2(), &st("1000")).unwrap(), st("1000"));
    }

    #[test]
    fn galois_to_fib_examples() {
        assert_eq!(map_galois_to_fib(&n2(), &st("0101")).unwrap(), st("0001"));
        assert_eq!(map_galois_to_fib(&n2(), &st("1000")).unwrap(), st("1000"));
        // correction x1 + x0*x1 vanishes at s_1 = 0
        let s = map_galois_to_fib(&n1(), &st("1101")).unwrap();
        assert_eq!(s, st("1101"));
        let fib = n3().output_sequence(&s, 15).unwrap();
        let gal = n1().output_sequence(&st("1101"), 15).unwrap();
        assert_eq!(format_bits(&fib), format_bits(&gal));
    }

    #[test]
    fn non_uniform_target_is_rejected() {
        let m = Nlfsr::new(vec![poly("x1*x0"), poly("x0")]).unwrap();
        assert!(matches!(
            map_fib_to_galois(&m, &st("01")),
            Err(Error::NotUniform(_))
        ));
    }

    #[test]
    fn zero_prefix_fast_path() {
        let c = StateCorrection::build(&n2()).unwrap();
        assert_eq!(c.quiet_prefix(), Some(2));
        assert!(c.zero_prefix_applies(&st("1100")));
        assert!(!c.zero_prefix_applies(&st("1101")));
        // a constant in g_2 reaches the correction of bit 3
        let g = Nlfsr::from_singular(vec![
            AnfPolynomial::zero(),
            poly("x0"),
            AnfPolynomial::one(),
            poly("x1"),
        ])
        .unwrap();
        let c = StateCorrection::build(&g).unwrap();
        assert_eq!(c.correction(3), poly("1 + x1"));
        assert_eq!(c.quiet_prefix(), None);
        assert!(!c.zero_prefix_applies(&st("1100")));
        assert_eq!(c.fib_to_galois(&st("0100")).unwrap(), st("1100"));
        assert_eq!(c.fib_to_galois(&st("0000")).unwrap(), st("1000"));
    }

    #[test]
    fn zero_on_bits_up_to_tau_is_not_enough() {
        // g_1 = x1 reaches bit 3 as x2, above the terminal bit
        let g = Nlfsr::from_singular(vec![
            AnfPolynomial::zero(),
            poly("x1"),
            AnfPolynomial::zero(),
            AnfPolynomial::zero(),
        ])
        .unwrap();
        let c = StateCorrection::build(&g).unwrap();
        assert_eq!(c.tau(), 1);
        assert_eq!(c.correction(3), poly("x2"));
        assert_eq!(c.quiet_prefix(), Some(3));
        assert!(!c.zero_prefix_applies(&st("1100")));
        let fib = Nlfsr::fibonacci(4, poly("x3")).unwrap();
        let same = format_bits(&fib.output_sequence(&st("1100"), 20).unwrap());
        let galois = format_bits(&g.output_sequence(&st("1100"), 20).unwrap());
        assert_ne!(same, galois);
        let r = c.fib_to_galois(&st("1100")).unwrap();
        assert_eq!(r, st("0100"));
        let mapped = format_bits(&g.output_sequence(&r, 20).unwrap());
        assert_eq!(same, mapped);
        assert_eq!(c.galois_to_fib(&r).unwrap(), st("1100"));
    }

    #[test]
    fn word_maps_match() {
        for m in [n1(), n2(), n3()] {
            let c = StateCorrection::build(&m).unwrap();
            for w in 0..16 {
                let s = RegisterState::from_word(w, 4);
                let r = c.fib_to_galois(&s).unwrap();
                assert_eq!(r.to_word().unwrap(), c.fib_to_galois_word(w));
                assert_eq!(c.galois_to_fib(&r).unwrap(), s);
                assert_eq!(c.galois_to_fib_word(c.fib_to_galois_word(w)), w);
            }
        }
    }

    #[test]
    fn n1_n2_state_sequences_differ_in_bit_two_only() {
        let mv = ShiftMove::new(2, 1, poly("x1"));
        let rep = compare_state_sequences(&n1(), &n2(), &mv, &st("0001"), 15).unwrap();
        assert!(rep.passes());
        // bit 2 differs exactly where s_0 = 1 in the same row
        let states = n1().state_sequence(&st("0001"), 15).unwrap();
        let expect: Vec<usize> = (0..15).filter(|&t| states[t].get(0)).collect();
        assert_eq!(rep.steps_differing().collect::<Vec<_>>(), expect);

        let rep = compare_state_sequences(&n1(), &n2(), &mv, &st("1000"), 4).unwrap();
        assert!(rep.diffs[..3].iter().all(Vec::is_empty));

        let empty = ShiftMove::new(2, 1, AnfPolynomial::zero());
        let rep = compare_state_sequences(&n1(), &n1(), &empty, &st("0110"), 20).unwrap();
        assert_eq!(rep.steps_differing().count(), 0);
    }

    #[test]
    fn compare_rejects_mismatched_pair() {
        let mv = ShiftMove::new(2, 1, poly("x1"));
        assert!(compare_state_sequences(&n1(), &n3(), &mv, &st("0001"), 4).is_err());
        let mv = ShiftMove::new(3, 1, poly("x2"));
        assert!(compare_state_sequences(&n3(), &n2(), &mv, &st("0001"), 4).is_err());
    }
}
