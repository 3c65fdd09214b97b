//! Exhaustive oracles: output-set equivalence, matching-state search and
//! cycle census.
//!
//! Two states are taken to match when their output prefixes of a fixed
//! length agree. The default length `2^n + n` is a convention for small
//! registers, not a proof of equality of the infinite sequences.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::nlfsr::{check_exhaustive, Nlfsr, PackedNlfsr, RegisterState, EXHAUSTIVE_LIMIT};

/// `2^n + n`.
pub fn default_prefix_len(n: usize) -> usize {
    (1usize << n) + n
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Equivalent,
    NotEquivalent,
    /// Every prefix matched, but the prefix was shorter than `2^n + n`.
    Inconclusive,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Equivalent => "equivalent",
            Verdict::NotEquivalent => "not-equivalent",
            Verdict::Inconclusive => "inconclusive",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    A,
    B,
}

/// A state of one register whose output prefix no state of the other emits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub side: Side,
    pub state: RegisterState,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquivalenceReport {
    pub verdict: Verdict,
    /// `matching[w]` is the smallest state of B matching state `w` of A;
    /// present when every state of A has a match.
    pub matching: Option<Vec<RegisterState>>,
    pub witness: Option<Witness>,
    pub prefix_len: usize,
}

impl fmt::Display for EquivalenceReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "verdict: {}", self.verdict)?;
        writeln!(
            f,
            "prefix length: {} (states match when their first {} output bits agree)",
            self.prefix_len, self.prefix_len
        )?;
        if let Some(w) = &self.witness {
            let (this, other) = match w.side {
                Side::A => ("A", "B"),
                Side::B => ("B", "A"),
            };
            writeln!(
                f,
                "witness: state {} of {this} has no matching state in {other}",
                w.state
            )?;
        }
        Ok(())
    }
}

fn packed_pair(a: &Nlfsr, b: &Nlfsr) -> Result<(PackedNlfsr, PackedNlfsr)> {
    if a.n() != b.n() {
        return Err(Error::LengthMismatch {
            expected: a.n(),
            found: b.n(),
        });
    }
    check_exhaustive(a.n(), EXHAUSTIVE_LIMIT)?;
    Ok((a.packed()?, b.packed()?))
}

/// Scans the states of `b` in ascending order for the first one whose first
/// `prefix_len` outputs equal those of `a` from `s`.
pub fn brute_force_match(
    a: &Nlfsr,
    b: &Nlfsr,
    s: &RegisterState,
    prefix_len: usize,
) -> Result<Option<RegisterState>> {
    let (_, pb) = packed_pair(a, b)?;
    let target = a.output_sequence(s, prefix_len)?;
    let found = (0..pb.state_count()).find(|&start| {
        let mut cur = start;
        target.iter().all(|&bit| {
            let ok = (cur & 1 == 1) == bit;
            cur = pb.step(cur);
            ok
        })
    });
    Ok(found.map(|w| RegisterState::from_word(w, b.n())))
}

fn prefixes(m: &PackedNlfsr, prefix_len: usize) -> Vec<Vec<u64>> {
    (0..m.state_count())
        .into_par_iter()
        .map(|s| {
            let mut out = Vec::new();
            m.output_words(s, prefix_len, &mut out);
            out
        })
        .collect()
}

/// Smallest state for each distinct prefix.
fn index_prefixes(prefixes: &[Vec<u64>]) -> HashMap<&[u64], u64> {
    let mut index = HashMap::with_capacity(prefixes.len());
    for (s, p) in prefixes.iter().enumerate() {
        index.entry(p.as_slice()).or_insert(s as u64);
    }
    index
}

/// For each state of `from`, the smallest matching state of `to`.
fn match_all(from: &[Vec<u64>], to: &HashMap<&[u64], u64>) -> Vec<Option<u64>> {
    from.par_iter()
        .map(|p| to.get(p.as_slice()).copied())
        .collect()
}

/// Compares the sets of output prefixes of `a` and `b` in both directions.
pub fn output_set_equivalent(a: &Nlfsr, b: &Nlfsr, prefix_len: usize) -> Result<EquivalenceReport> {
    let (pa, pb) = packed_pair(a, b)?;
    let n = a.n();
    let pre_a = prefixes(&pa, prefix_len);
    let pre_b = prefixes(&pb, prefix_len);
    let a_to_b = match_all(&pre_a, &index_prefixes(&pre_b));
    let b_to_a = match_all(&pre_b, &index_prefixes(&pre_a));

    let unmatched = |v: &[Option<u64>]| v.iter().position(Option::is_none);
    let witness = match (unmatched(&a_to_b), unmatched(&b_to_a)) {
        (Some(w), _) => Some(Witness {
            side: Side::A,
            state: RegisterState::from_word(w as u64, n),
        }),
        (None, Some(w)) => Some(Witness {
            side: Side::B,
            state: RegisterState::from_word(w as u64, n),
        }),
        (None, None) => None,
    };
    let matching = a_to_b
        .iter()
        .map(|m| m.map(|w| RegisterState::from_word(w, n)))
        .collect::<Option<Vec<_>>>();
    let verdict = if witness.is_some() {
        Verdict::NotEquivalent
    } else if prefix_len < default_prefix_len(n) {
        Verdict::Inconclusive
    } else {
        Verdict::Equivalent
    };
    Ok(EquivalenceReport {
        verdict,
        matching,
        witness,
        prefix_len,
    })
}

/// States per cycle length, plus states that lead into a cycle without
/// lying on one.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PeriodCensus {
    pub cycles: BTreeMap<usize, usize>,
    pub tail_states: usize,
}

impl PeriodCensus {
    pub fn period(&self) -> usize {
        self.cycles.keys().next_back().copied().unwrap_or(0)
    }

    pub fn total_states(&self) -> usize {
        self.cycles.values().sum::<usize>() + self.tail_states
    }
}

impl fmt::Display for PeriodCensus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self
            .cycles
            .iter()
            .rev()
            .map(|(len, count)| format!("{len}: {count}"))
            .collect();
        if self.tail_states > 0 {
            parts.push(format!("tail: {}", self.tail_states));
        }
        f.write_str(&parts.join(", "))
    }
}

pub fn period_census(m: &Nlfsr) -> Result<PeriodCensus> {
    period_census_with_limit(m, EXHAUSTIVE_LIMIT)
}

pub fn period_census_with_limit(m: &Nlfsr, limit: usize) -> Result<PeriodCensus> {
    check_exhaustive(m.n(), limit)?;
    let orbits = m.packed()?.orbits();
    let mut census = PeriodCensus::default();
    for len in orbits.iter() {
        match len {
            Some(l) => *census.cycles.entry(l).or_default() += 1,
            None => census.tail_states += 1,
        }
    }
    Ok(census)
}
