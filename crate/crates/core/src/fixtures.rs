//! Small automata with known behaviors, shared by tests, the CLI and the
//! examples in the README.

use crate::semiring::Semiring;
use crate::wafa::Wafa;

/// `a^i b^j ↦ (2^j)^(2^i)`, and 0 on words outside `a*b*`. Universal: every
/// word has at most one run.
pub fn doubly_exponential() -> Wafa {
    Wafa::build(
        Semiring::Natural,
        &["q", "p"],
        &["a", "b"],
        "q",
        &[("q", "a", "q^2"), ("q", "b", "p"), ("p", "a", "0"), ("p", "b", "2*p")],
        &[("q", "1"), ("p", "2")],
    )
    .unwrap()
}

/// A non-universal automaton: `q` branches on `a`, so `aba` has four runs.
/// All final weights are 1.
pub fn branching() -> Wafa {
    Wafa::build(
        Semiring::Natural,
        &["q", "p"],
        &["a", "b"],
        "q",
        &[("q", "a", "q + p"), ("q", "b", "q*p"), ("p", "a", "p"), ("p", "b", "q")],
        &[("q", "1"), ("p", "1")],
    )
    .unwrap()
}

/// Over `B[x]`: `a^i # c^k d^l ↦ x^(k·i)`, and 0 on all other words.
pub fn marked_powers() -> Wafa {
    Wafa::build(
        Semiring::polynomial(Semiring::Boolean, &["x"]),
        &["ql", "q1", "qa", "qc", "qd"],
        &["a", "#", "c", "d"],
        "ql",
        &[
            ("ql", "a", "ql*qa"),
            ("ql", "#", "q1"),
            ("q1", "c", "q1"),
            ("q1", "d", "qd"),
            ("qa", "a", "qa"),
            ("qa", "#", "qc"),
            ("qc", "c", "x*qc"),
            ("qc", "d", "qd"),
            ("qd", "d", "qd"),
        ],
        &[("q1", "1"), ("qc", "1"), ("qd", "1")],
    )
    .unwrap()
}

/// Same transitions as [`doubly_exponential`] over the rationals, but with
/// all final weights 0.
pub fn zero_series() -> Wafa {
    Wafa::build(
        Semiring::Rational,
        &["q", "p"],
        &["a", "b"],
        "q",
        &[("q", "a", "q^2"), ("q", "b", "p"), ("p", "b", "2*p")],
        &[],
    )
    .unwrap()
}
