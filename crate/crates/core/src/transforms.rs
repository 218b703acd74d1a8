//! Translations between alternating word automata and tree automata,
//! closure under inverse word homomorphisms, images under word
//! homomorphisms, and the decomposition of tree automata into a relabeling,
//! a recognizable language and a one-state weight automaton.

use crate::error::{Error, Result};
use crate::polynomial::{Exponents, Polynomial};
use crate::semiring::{Semiring, Value};
use crate::trees::{compose_word_then_tree, generic_hom, padded_alphabet, RankedAlphabet, Term, TreeHom, WordToTreeHom};
use crate::wafa::{fresh_name, Wafa};
use crate::wfta::{Transition, Wfta};
use crate::words::{letter_index, WordHom};

/// The tree automaton of a word automaton, with the rank of its generic
/// homomorphism and the normalized automaton it was read off.
#[derive(Clone, Debug)]
pub struct TreeTranslation {
    pub wfta: Wfta,
    pub rank: usize,
    /// The nice, equalized automaton whose states the tree automaton
    /// shares.
    pub normalized: Wafa,
}

/// A tree automaton `B` over `Σ_#^r` with `⟦A⟧(w) = ⟦B⟧(t_w^r)`, and
/// `[A']_q(w) = [B]_q(t_w^r)` state by state for the normalized `A'`.
///
/// The input is first made nice and equalized. A monomial
/// `s · p_1 ⋯ p_r` of `δ(q, a)` becomes the single transition
/// `β_a(p_1 ... p_r, q) = s` with `p_1 ≤ ... ≤ p_r` in state order.
pub fn wafa_to_wfta(a: &Wafa) -> Result<TreeTranslation> {
    let normalized = a.make_nice()?.equalize()?;
    let rank = normalized.equalization_degree() as usize;
    let alphabet = padded_alphabet(normalized.alphabet(), rank)?;
    let end = alphabet.name(alphabet.len() - 1).to_string();
    let ring = normalized.ring().clone();
    let n = normalized.num_states();
    let mut transitions = Vec::new();
    for q in 0..n {
        transitions.push(Transition {
            symbol: end.clone(),
            from: Vec::new(),
            to: q,
            weight: normalized.tau()[q].clone(),
        });
        for (ai, letter) in normalized.alphabet().iter().enumerate() {
            for m in normalized.delta(q, ai).monomials() {
                transitions.push(Transition {
                    symbol: letter.clone(),
                    from: m.exps.expand(),
                    to: q,
                    weight: m.coeff.clone(),
                });
            }
        }
    }
    let mut lambda = vec![ring.zero(); n];
    lambda[0] = ring.one();
    let wfta = Wfta::new(ring, normalized.states().to_vec(), alphabet, transitions, lambda)?;
    Ok(TreeTranslation {
        wfta,
        rank,
        normalized,
    })
}

/// A word automaton for `w ↦ ⟦B⟧(h(w))`. Transitions are read off the
/// extended tables of the letter images: `δ(q, a) = Σ δ'_{h(a)}(p̄, q) · p_1 ⋯ p_k`,
/// `τ(q) = [B]_q(h(ε))` and `P0 = Σ λ(q) · q`.
pub fn wfta_hom_to_wafa(b: &Wfta, h: &WordToTreeHom) -> Result<Wafa> {
    if h.target() != b.alphabet() {
        return Err(Error::InvalidAutomaton(
            "homomorphism target differs from the automaton's alphabet".into(),
        ));
    }
    let ring = b.ring().clone();
    let n = b.num_states();
    let mut delta = vec![Vec::with_capacity(h.alphabet().len()); n];
    for image in h.images() {
        let table = b.delta_prime(image)?;
        let mut per_state: Vec<Vec<(Value, Exponents)>> = vec![Vec::new(); n];
        for ((from, to), w) in table.entries {
            let exps = Exponents::from_pairs(from.into_iter().map(|p| (p, 1)))?;
            per_state[to].push((w, exps));
        }
        for (q, terms) in per_state.into_iter().enumerate() {
            delta[q].push(Polynomial::from_terms(ring.clone(), n, terms)?);
        }
    }
    let tau = b.state_behaviors(h.end_image())?;
    let p0 = Polynomial::from_terms(
        ring.clone(),
        n,
        b.lambda()
            .iter()
            .enumerate()
            .map(|(q, l)| (l.clone(), Exponents::var(q))),
    )?;
    Wafa::new(ring, b.states().to_vec(), h.alphabet().to_vec(), p0, delta, tau)
}

/// A word automaton for `v ↦ ⟦A⟧(hw(v))`, through the tree automaton of
/// `A` and the composition of `hw` with the generic homomorphism.
pub fn wafa_inverse_word_hom(a: &Wafa, hw: &WordHom) -> Result<Wafa> {
    let known = letter_index(a.alphabet());
    if let Some(bad) = hw.target().iter().find(|x| !known.contains_key(x.as_str())) {
        return Err(Error::UnknownLetter(bad.clone()));
    }
    let tr = wafa_to_wfta(a)?;
    let generic = generic_hom(a.alphabet(), tr.rank)?;
    let composed = compose_word_then_tree(hw, &generic)?;
    wfta_hom_to_wafa(&tr.wfta, &composed)
}

/// `Σ_{hw(v) = w} ⟦A⟧(v)`, summing over the finitely many preimages of a
/// non-deleting homomorphism.
pub fn word_hom_image_eval(a: &Wafa, hw: &WordHom, w: &[String]) -> Result<Value> {
    let mut total = a.ring().zero();
    for v in hw.preimages(w)? {
        total = a.ring().add(&total, &a.behavior(&v)?)?;
    }
    Ok(total)
}

/// A symbol `[q̄, g, p]` of the decomposition alphabet: a source tuple, a
/// symbol of the original alphabet, and a target that is either a state or
/// the root copy of a state.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NivatSymbol {
    pub from: Vec<usize>,
    pub symbol: String,
    pub target: usize,
    pub root: bool,
}

/// A tree automaton split into a relabeling `h`, a Boolean automaton `L`
/// for its run language, and a one-state automaton `Aw` carrying the
/// weights.
#[derive(Clone, Debug)]
pub struct NivatDecomposition {
    pub alphabet: RankedAlphabet,
    pub symbols: Vec<NivatSymbol>,
    pub h: TreeHom,
    pub l: Wfta,
    pub aw: Wfta,
}

/// Decomposes `B` so that `⟦B⟧(t) = Σ_{h(t') = t} ⟦Aw⟧(t') · 1_L(t')`.
///
/// The run language lives over the states `P = Q ∪ Q_fin`, where the copy
/// `q_fin` marks the root. The weight of `[q̄, g, q]` is `δ_g(q̄, q)`, and
/// that of `[q̄, g, q_fin]` additionally carries `λ(q)`.
pub fn nivat_decompose(b: &Wfta) -> Result<NivatDecomposition> {
    let ring = b.ring().clone();
    let n = b.num_states();
    let mut p_names: Vec<String> = b.states().to_vec();
    for q in b.states() {
        let name = fresh_name(&format!("{q}_fin"), &p_names);
        p_names.push(name);
    }
    let gamma = b.alphabet();
    let mut symbols = Vec::new();
    for (g, rank) in gamma.symbols() {
        for from in tuples(n, *rank) {
            for target in 0..2 * n {
                symbols.push(NivatSymbol {
                    from: from.clone(),
                    symbol: g.clone(),
                    target: target % n,
                    root: target >= n,
                });
            }
        }
    }
    let name_of = |s: &NivatSymbol| {
        let from: Vec<&str> = s.from.iter().map(|&p| b.states()[p].as_str()).collect();
        let p = &p_names[s.target + if s.root { n } else { 0 }];
        format!("[({}),{},{}]", from.join(","), s.symbol, p)
    };
    let alphabet = RankedAlphabet::new(
        symbols
            .iter()
            .map(|s| (name_of(s), s.from.len()))
            .collect(),
    )?;
    let images = symbols
        .iter()
        .map(|s| Term::sym(s.symbol.clone(), (1..=s.from.len()).map(Term::var).collect()))
        .collect();
    let h = TreeHom::new(alphabet.clone(), gamma.clone(), images)?;

    let yes = Value::Bool(true);
    let l_transitions = symbols.iter().enumerate().map(|(i, s)| Transition {
        symbol: alphabet.name(i).to_string(),
        from: s.from.clone(),
        to: s.target + if s.root { n } else { 0 },
        weight: yes.clone(),
    });
    let roots = (0..2 * n).map(|p| Value::Bool(p >= n)).collect();
    let l = Wfta::new(Semiring::Boolean, p_names, alphabet.clone(), l_transitions, roots)?;

    let mut aw_transitions = Vec::new();
    for (i, s) in symbols.iter().enumerate() {
        let mut w = b.weight(&s.symbol, &s.from, s.target)?;
        if s.root {
            w = ring.mul(&w, &b.lambda()[s.target])?;
        }
        aw_transitions.push(Transition {
            symbol: alphabet.name(i).to_string(),
            from: vec![0; s.from.len()],
            to: 0,
            weight: w,
        });
    }
    let aw = Wfta::new(
        ring.clone(),
        vec!["q_w".into()],
        alphabet.clone(),
        aw_transitions,
        vec![ring.one()],
    )?;
    Ok(NivatDecomposition {
        alphabet,
        symbols,
        h,
        l,
        aw,
    })
}

/// All tuples in `{0..n}^k`, lexicographically.
fn tuples(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..k {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (0..n).map(move |p| {
                    let mut v = prefix.clone();
                    v.push(p);
                    v
                })
            })
            .collect();
    }
    out
}

/// `h(⟦Aw⟧ ⊙ 1_L)` as a tree automaton over the original alphabet.
pub fn nivat_recompose(d: &NivatDecomposition) -> Result<Wfta> {
    if d.aw.num_states() != 1 {
        return Err(Error::InvalidAutomaton(format!(
            "weight automaton has {} states, expected one",
            d.aw.num_states()
        )));
    }
    if d.l.ring() != &Semiring::Boolean {
        return Err(Error::CarrierMismatch {
            expected: Semiring::Boolean.to_string(),
            found: d.l.ring().to_string(),
        });
    }
    let weighted_l = d.l.port(d.aw.ring())?;
    d.aw.hadamard(&weighted_l)?.linear_hom_image(&d.h)
}

/// The decomposition of the tree automaton of a word automaton, together
/// with the rank `r` such that `⟦A⟧(w)` is the decomposition's preimage sum
/// at `t_w^r`.
pub fn nivat_wafa_decompose(a: &Wafa) -> Result<(usize, NivatDecomposition)> {
    let tr = wafa_to_wfta(a)?;
    Ok((tr.rank, nivat_decompose(&tr.wfta)?))
}
