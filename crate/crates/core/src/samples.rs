//! Three equivalent 4-bit registers of period 15, used throughout the tests
//! and by the `demo` command.
//!
//! `n1` and `n2` are Galois registers with terminal bits 2 and 1; `n3` is
//! their Fibonacci counterpart.

use crate::anf::AnfPolynomial;
use crate::nlfsr::Nlfsr;

fn build(fs: [&str; 4]) -> Nlfsr {
    // listed from f_3 down to f_0
    let mut feedbacks: Vec<AnfPolynomial> = fs
        .iter()
        .map(|s| s.parse().expect("built-in polynomial"))
        .collect();
    feedbacks.reverse();
    Nlfsr::new(feedbacks).expect("built-in register")
}

pub fn n1() -> Nlfsr {
    build(["x0 + x1", "x3 + x1 + x0*x1", "x2", "x1"])
}

/// `n1` after moving the product-term `x1` from bit 2 to bit 1.
pub fn n2() -> Nlfsr {
    build(["x0 + x1", "x3 + x0*x1", "x2 + x0", "x1"])
}

pub fn n3() -> Nlfsr {
    build(["x0 + x1 + x2 + x1*x2", "x3", "x2", "x1"])
}

/// Initial states for the side-by-side state table: `n1`, `n2`, `n3`.
pub const TABLE_INITIAL_STATES: [&str; 3] = ["0001", "0101", "0001"];

pub const TABLE_ROWS: usize = 15;

/// Side-by-side state sequences of `n1`, `n2` and `n3` from
/// [`TABLE_INITIAL_STATES`], one row per clock, states printed high bit first.
pub fn state_table() -> String {
    let registers = [n1(), n2(), n3()];
    let columns: Vec<Vec<_>> = registers
        .iter()
        .zip(TABLE_INITIAL_STATES)
        .map(|(m, init)| {
            m.state_sequence(&init.parse().expect("built-in state"), TABLE_ROWS)
                .expect("built-in register")
        })
        .collect();
    let mut out = String::from("N1   | N2   | N3\n");
    for row in 0..TABLE_ROWS {
        out.push_str(&format!(
            "{} | {} | {}\n",
            columns[0][row], columns[1][row], columns[2][row]
        ));
    }
    out
}
