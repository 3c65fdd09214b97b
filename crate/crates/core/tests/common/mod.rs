#![allow(dead_code)]

use nlfsr::transform::{lower_to_profile, Lowering};
use nlfsr::{AnfPolynomial, GaloisProfile, Monomial, Nlfsr};
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

/// Up to `max_terms` random product-terms of degree 1..=3 over `vars`,
/// occasionally with a constant term.
pub fn random_poly(rng: &mut StdRng, vars: &[usize], max_terms: usize) -> AnfPolynomial {
    let mut terms = Vec::new();
    if rng.gen_bool(0.1) {
        terms.push(Monomial::one());
    }
    if !vars.is_empty() {
        for _ in 0..rng.gen_range(0..=max_terms) {
            let degree = rng.gen_range(1..=3.min(vars.len()));
            terms.push(Monomial::new(vars.choose_multiple(rng, degree).copied()));
        }
    }
    AnfPolynomial::from_terms(terms)
}

/// A fibonacci register with a consistent Galois profile.
#[derive(Debug, Clone)]
pub struct Case {
    pub fib: Nlfsr,
    pub profile: GaloisProfile,
}

impl Case {
    pub fn n(&self) -> usize {
        self.fib.n()
    }

    pub fn lower(&self) -> Lowering {
        lower_to_profile(&self.fib, &self.profile).expect("generated profile lowers")
    }
}

/// Random legal profile for an `n`-bit register, plus the Fibonacci register
/// it recombines into, computed straight from the sum
/// `g_{n-1} + g_{n-2}|+1 + ... + g_tau|+(n-1-tau)`.
pub fn random_case(rng: &mut StdRng, n: usize) -> Case {
    let tau = rng.gen_range(0..n);
    let parts: Vec<AnfPolynomial> = (tau..n)
        .map(|bit| {
            let vars: Vec<usize> = (0..=tau).filter(|&v| v != (bit + 1) % n).collect();
            loop {
                let g = random_poly(rng, &vars, 4);
                if bit != tau || tau == n - 1 || !g.is_zero() {
                    break g;
                }
            }
        })
        .collect();
    let top = parts.iter().enumerate().fold(AnfPolynomial::zero(), |acc, (k, g)| {
        acc.xor(&g.shift_plain((n - 1 - (tau + k)) as isize).unwrap())
    });
    let fib = Nlfsr::fibonacci(n, top).unwrap();
    let profile = GaloisProfile::new(n, tau, parts).unwrap();
    Case { fib, profile }
}

/// First `len` outputs from packed state `s`, one bool per step.
pub fn outputs(m: &Nlfsr, s: u64, len: usize) -> Vec<bool> {
    let p = m.packed().unwrap();
    let mut cur = s;
    (0..len)
        .map(|_| {
            let bit = cur & 1 == 1;
            cur = p.step(cur);
            bit
        })
        .collect()
}
