//! Seeded random generators for automata, homomorphisms and trees.

#![allow(dead_code)]

use num::{BigInt, BigRational};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use wafa_core::polynomial::{Exponents, Polynomial};
use wafa_core::trees::{enumerate_trees, Head, Position, RankedAlphabet, Term, TreeHom};
use wafa_core::wafa::Wafa;
use wafa_core::wfta::{StepFunction, Transition, Wfta};
use wafa_core::words::WordHom;
use wafa_core::{Semiring, Value};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn letters(names: &[&str]) -> Vec<String> {
    names.iter().map(|s| s.to_string()).collect()
}

/// A nonzero value: 1..3 for naturals, small signed fractions for rationals.
pub fn nonzero(rng: &mut ChaCha8Rng, ring: &Semiring) -> Value {
    match ring {
        Semiring::Rational => {
            let num = [-2i64, -1, 1, 2, 3][rng.gen_range(0..5)];
            let den = [1i64, 1, 2, 3][rng.gen_range(0..4)];
            Value::Rat(BigRational::new(BigInt::from(num), BigInt::from(den)))
        }
        Semiring::Boolean => Value::Bool(true),
        _ => ring.from_u64(rng.gen_range(1..=3)),
    }
}

/// Zero with probability 1/4, otherwise [`nonzero`].
pub fn small(rng: &mut ChaCha8Rng, ring: &Semiring) -> Value {
    if rng.gen_bool(0.25) {
        ring.zero()
    } else {
        nonzero(rng, ring)
    }
}

/// A random monomial of degree in `degrees` over `n` variables.
fn exponents(rng: &mut ChaCha8Rng, n: usize, degree: usize) -> Exponents {
    Exponents::from_pairs((0..degree).map(|_| (rng.gen_range(0..n), 1))).unwrap()
}

/// Up to `max_terms` monomials of degree `min_deg..=max_deg`.
pub fn polynomial(
    rng: &mut ChaCha8Rng,
    ring: &Semiring,
    n: usize,
    max_terms: usize,
    min_deg: usize,
    max_deg: usize,
) -> Polynomial {
    let terms = rng.gen_range(0..=max_terms);
    let ts: Vec<(Value, Exponents)> = (0..terms)
        .map(|_| {
            let d = rng.gen_range(min_deg..=max_deg);
            (nonzero(rng, ring), exponents(rng, n, d))
        })
        .collect();
    Polynomial::from_terms(ring.clone(), n, ts).unwrap()
}

fn states(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("s{i}")).collect()
}

/// A nice automaton: `P0` is the first state and transitions are sums of
/// proper monomials of degree at most `max_deg`.
pub fn nice_wafa(rng: &mut ChaCha8Rng, ring: &Semiring, max_states: usize, max_deg: usize) -> Wafa {
    let n = rng.gen_range(1..=max_states);
    let alphabet = letters(&["a", "b"]);
    let delta = (0..n)
        .map(|_| {
            (0..alphabet.len())
                .map(|_| polynomial(rng, ring, n, 2, 1, max_deg))
                .collect()
        })
        .collect();
    let tau = (0..n).map(|_| small(rng, ring)).collect();
    let p0 = Polynomial::var(ring.clone(), n, 0).unwrap();
    Wafa::new(ring.clone(), states(n), alphabet, p0, delta, tau).unwrap()
}

/// An arbitrary automaton whose initial polynomial and transitions may
/// contain constants and coefficients other than 1.
pub fn general_wafa(rng: &mut ChaCha8Rng, ring: &Semiring, max_states: usize, max_deg: usize) -> Wafa {
    let n = rng.gen_range(1..=max_states);
    let alphabet = letters(&["a", "b"]);
    let delta = (0..n)
        .map(|_| {
            (0..alphabet.len())
                .map(|_| polynomial(rng, ring, n, 2, 0, max_deg))
                .collect()
        })
        .collect();
    let tau = (0..n).map(|_| small(rng, ring)).collect();
    let mut p0 = polynomial(rng, ring, n, 2, 0, max_deg);
    if p0.is_zero() {
        p0 = Polynomial::var(ring.clone(), n, 0).unwrap();
    }
    Wafa::new(ring.clone(), states(n), alphabet, p0, delta, tau).unwrap()
}

/// A word homomorphism from `{c, d, e}` into `{a, b}` with images of
/// length at most 2, possibly empty.
pub fn word_hom(rng: &mut ChaCha8Rng) -> WordHom {
    let target = letters(&["a", "b"]);
    let images = (0..3)
        .map(|_| {
            let len = rng.gen_range(0..=2);
            (0..len).map(|_| target[rng.gen_range(0..2)].clone()).collect()
        })
        .collect();
    WordHom::new(letters(&["c", "d", "e"]), target, images).unwrap()
}

pub fn tree_alphabet() -> RankedAlphabet {
    RankedAlphabet::from_pairs(&[("f", 2), ("g", 1), ("c", 0), ("d", 0)]).unwrap()
}

/// A tree automaton with `1..=max_states` states; each table entry is
/// present with probability 1/2.
pub fn wfta(
    rng: &mut ChaCha8Rng,
    ring: &Semiring,
    alphabet: &RankedAlphabet,
    max_states: usize,
) -> Wfta {
    let n = rng.gen_range(1..=max_states);
    let mut transitions = Vec::new();
    for (name, rank) in alphabet.symbols() {
        let tuples = n.pow(*rank as u32);
        for code in 0..tuples {
            let mut from = Vec::with_capacity(*rank);
            let mut c = code;
            for _ in 0..*rank {
                from.push(c % n);
                c /= n;
            }
            for to in 0..n {
                if rng.gen_bool(0.5) {
                    transitions.push(Transition {
                        symbol: name.clone(),
                        from: from.clone(),
                        to,
                        weight: nonzero(rng, ring),
                    });
                }
            }
        }
    }
    let lambda = (0..n).map(|_| small(rng, ring)).collect();
    Wfta::new(ring.clone(), states(n), alphabet.clone(), transitions, lambda).unwrap()
}

fn leaves(t: &Term) -> Vec<Position> {
    t.positions()
        .into_iter()
        .filter(|p| t.subtree(p).unwrap().children().is_empty())
        .collect()
}

/// A context: a tree with at most `max_vars` leaves replaced by `x1`.
pub fn context(rng: &mut ChaCha8Rng, pool: &[Term], max_vars: usize) -> Term {
    let t = pool.choose(rng).unwrap();
    let mut ls = leaves(t);
    ls.shuffle(rng);
    let k = rng.gen_range(0..=max_vars.min(ls.len()));
    let chosen = &ls[..k];
    t.substitute_uniform(chosen, &Term::var(1)).unwrap()
}

/// A linear non-deleting homomorphism into `target`: the image of a rank-k
/// symbol is a tree with at least two nodes in which `k` distinct leaves
/// are replaced by `x1..xk` in random order.
pub fn linear_hom(rng: &mut ChaCha8Rng, source: &RankedAlphabet, target: &RankedAlphabet) -> TreeHom {
    let pool = enumerate_trees(target, 5);
    let images = source
        .symbols()
        .iter()
        .map(|(_, k)| loop {
            let t = pool.choose(rng).unwrap();
            let mut ls = leaves(t);
            if t.size() < 2 && *k > 0 || ls.len() < *k {
                continue;
            }
            ls.shuffle(rng);
            let mut vars: Vec<Term> = (1..=*k).map(Term::var).collect();
            vars.shuffle(rng);
            break t.substitute_positions(&ls[..*k], &vars).unwrap();
        })
        .collect();
    TreeHom::new(source.clone(), target.clone(), images).unwrap()
}

/// A step function with up to `max_parts` Boolean automata.
pub fn step_function(
    rng: &mut ChaCha8Rng,
    ring: &Semiring,
    alphabet: &RankedAlphabet,
    max_parts: usize,
    max_states: usize,
) -> StepFunction {
    let k = rng.gen_range(0..=max_parts);
    let parts = (0..k)
        .map(|_| (wfta(rng, &Semiring::Boolean, alphabet, max_states), nonzero(rng, ring)))
        .collect();
    StepFunction::new(ring.clone(), alphabet.clone(), parts).unwrap()
}

/// Whether `t` is a symbol applied to `x1..xk` in order.
pub fn is_relabeling(t: &Term) -> bool {
    matches!(t.head(), Head::Sym(_))
        && t
            .children()
            .iter()
            .enumerate()
            .all(|(i, c)| c.var_index() == Some(i + 1))
}
