//! Weighted finite tree automata, extended transition tables for contexts,
//! products, homomorphic images and step functions.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use crate::error::{Error, Result};
use crate::semiring::{Semiring, Value};
use crate::trees::{Head, RankedAlphabet, Term, TreeHom};
use crate::wafa::fresh_name;
use crate::words::check_distinct;

/// One weighted transition `δ_g(from, to) = weight`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transition {
    pub symbol: String,
    pub from: Vec<usize>,
    pub to: usize,
    pub weight: Value,
}

type Table = BTreeMap<(Vec<usize>, usize), Value>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Wfta {
    ring: Semiring,
    states: Vec<String>,
    alphabet: RankedAlphabet,
    /// Nonzero entries of `δ_g`, indexed like `alphabet`.
    delta: Vec<Table>,
    lambda: Vec<Value>,
}

impl Wfta {
    /// Assembles an automaton. Transitions naming the same symbol, source
    /// tuple and target are summed; zero weights are dropped.
    pub fn new(
        ring: Semiring,
        states: Vec<String>,
        alphabet: RankedAlphabet,
        transitions: impl IntoIterator<Item = Transition>,
        lambda: Vec<Value>,
    ) -> Result<Self> {
        check_distinct(&states, "state")?;
        if lambda.len() != states.len() {
            return Err(Error::ArityMismatch {
                expected: states.len(),
                found: lambda.len(),
            });
        }
        for v in &lambda {
            ring.check(v)?;
        }
        let mut a = Wfta {
            delta: vec![Table::new(); alphabet.len()],
            ring,
            states,
            alphabet,
            lambda,
        };
        for t in transitions {
            let g = a
                .alphabet
                .index_of(&t.symbol)
                .ok_or_else(|| Error::UnknownSymbol(t.symbol.clone()))?;
            a.add_transition(g, t.from, t.to, t.weight)?;
        }
        Ok(a)
    }

    fn add_transition(&mut self, g: usize, from: Vec<usize>, to: usize, weight: Value) -> Result<()> {
        self.ring.check(&weight)?;
        let rank = self.alphabet.rank(g);
        if from.len() != rank {
            return Err(Error::RankMismatch {
                symbol: self.alphabet.name(g).to_string(),
                expected: rank,
                found: from.len(),
            });
        }
        let n = self.states.len();
        if let Some(&bad) = from.iter().chain([&to]).find(|&&s| s >= n) {
            return Err(Error::UnknownState(format!("#{bad}")));
        }
        let table = &mut self.delta[g];
        let key = (from, to);
        let sum = match table.get(&key) {
            Some(old) => self.ring.add(old, &weight)?,
            None => weight,
        };
        if sum.is_zero() {
            table.remove(&key);
        } else {
            table.insert(key, sum);
        }
        Ok(())
    }

    pub fn ring(&self) -> &Semiring {
        &self.ring
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn alphabet(&self) -> &RankedAlphabet {
        &self.alphabet
    }

    pub fn lambda(&self) -> &[Value] {
        &self.lambda
    }

    pub fn state_index(&self, q: &str) -> Result<usize> {
        self.states
            .iter()
            .position(|s| s == q)
            .ok_or_else(|| Error::UnknownState(q.to_string()))
    }

    /// `δ_g(from, to)`, zero when absent.
    pub fn weight(&self, symbol: &str, from: &[usize], to: usize) -> Result<Value> {
        let g = self
            .alphabet
            .index_of(symbol)
            .ok_or_else(|| Error::UnknownSymbol(symbol.to_string()))?;
        Ok(self.delta[g]
            .get(&(from.to_vec(), to))
            .cloned()
            .unwrap_or_else(|| self.ring.zero()))
    }

    /// All stored (nonzero) transitions, grouped by symbol.
    pub fn transitions(&self) -> Vec<Transition> {
        self.delta
            .iter()
            .enumerate()
            .flat_map(|(g, table)| {
                table.iter().map(move |((from, to), w)| Transition {
                    symbol: self.alphabet.name(g).to_string(),
                    from: from.clone(),
                    to: *to,
                    weight: w.clone(),
                })
            })
            .collect()
    }

    pub fn num_transitions(&self) -> usize {
        self.delta.iter().map(BTreeMap::len).sum()
    }

    /// `([B]_{q_1}(t), ..., [B]_{q_n}(t))`, bottom-up with one evaluation
    /// per shared subtree.
    pub fn state_behaviors(&self, t: &Term) -> Result<Vec<Value>> {
        let mut memo = HashMap::new();
        self.eval_memo(t, &mut memo)
    }

    fn eval_memo(&self, t: &Term, memo: &mut HashMap<usize, Vec<Value>>) -> Result<Vec<Value>> {
        if let Some(v) = memo.get(&t.id()) {
            return Ok(v.clone());
        }
        let name = match t.head() {
            Head::Sym(s) => s,
            Head::Var(i) => return Err(Error::UnknownSymbol(format!("x{i}"))),
        };
        let g = self
            .alphabet
            .index_of(name)
            .ok_or_else(|| Error::UnknownSymbol(name.clone()))?;
        if self.alphabet.rank(g) != t.children().len() {
            return Err(Error::RankMismatch {
                symbol: name.clone(),
                expected: self.alphabet.rank(g),
                found: t.children().len(),
            });
        }
        let children = t
            .children()
            .iter()
            .map(|c| self.eval_memo(c, memo))
            .collect::<Result<Vec<_>>>()?;
        let mut out = vec![self.ring.zero(); self.states.len()];
        for ((from, to), w) in &self.delta[g] {
            let mut term = w.clone();
            for (i, &p) in from.iter().enumerate() {
                if term.is_zero() {
                    break;
                }
                term = self.ring.mul(&term, &children[i][p])?;
            }
            if !term.is_zero() {
                out[*to] = self.ring.add(&out[*to], &term)?;
            }
        }
        memo.insert(t.id(), out.clone());
        Ok(out)
    }

    /// `[B]_q(t)`.
    pub fn state_behavior(&self, q: &str, t: &Term) -> Result<Value> {
        let qi = self.state_index(q)?;
        Ok(self.state_behaviors(t)?.swap_remove(qi))
    }

    /// `⟦B⟧(t) = Σ λ(q) · [B]_q(t)`.
    pub fn behavior(&self, t: &Term) -> Result<Value> {
        let v = self.state_behaviors(t)?;
        let mut total = self.ring.zero();
        for (l, x) in self.lambda.iter().zip(&v) {
            if !l.is_zero() && !x.is_zero() {
                total = self.ring.add(&total, &self.ring.mul(l, x)?)?;
            }
        }
        Ok(total)
    }

    /// The extended transition table `δ'_t` of a term with variables: one
    /// source state per variable occurrence, occurrences in lexicographic
    /// order of their positions.
    pub fn delta_prime(&self, t: &Term) -> Result<DeltaPrime> {
        let entries = self.delta_prime_rec(t)?;
        Ok(DeltaPrime {
            arity: t.all_var_positions().len(),
            entries,
        })
    }

    fn delta_prime_rec(&self, t: &Term) -> Result<Table> {
        let name = match t.head() {
            Head::Var(_) => {
                if !t.children().is_empty() {
                    return Err(Error::InvalidPosition("variable with children".into()));
                }
                return Ok((0..self.states.len())
                    .map(|p| ((vec![p], p), self.ring.one()))
                    .collect());
            }
            Head::Sym(s) => s,
        };
        let g = self
            .alphabet
            .index_of(name)
            .ok_or_else(|| Error::UnknownSymbol(name.clone()))?;
        if self.alphabet.rank(g) != t.children().len() {
            return Err(Error::RankMismatch {
                symbol: name.clone(),
                expected: self.alphabet.rank(g),
                found: t.children().len(),
            });
        }
        // child tables grouped by their target state
        let mut grouped: Vec<HashMap<usize, Vec<(Vec<usize>, Value)>>> = Vec::new();
        for c in t.children() {
            let mut by_target: HashMap<usize, Vec<(Vec<usize>, Value)>> = HashMap::new();
            for ((from, to), w) in self.delta_prime_rec(c)? {
                by_target.entry(to).or_default().push((from, w));
            }
            grouped.push(by_target);
        }
        let mut out = Table::new();
        for ((from, to), w) in &self.delta[g] {
            let mut partial: Vec<(Vec<usize>, Value)> = vec![(Vec::new(), w.clone())];
            for (i, &p) in from.iter().enumerate() {
                let Some(options) = grouped[i].get(&p) else {
                    partial.clear();
                    break;
                };
                let mut next = Vec::with_capacity(partial.len() * options.len());
                for (prefix, acc) in &partial {
                    for (tuple, v) in options {
                        let prod = self.ring.mul(acc, v)?;
                        if prod.is_zero() {
                            continue;
                        }
                        let mut key = prefix.clone();
                        key.extend_from_slice(tuple);
                        next.push((key, prod));
                    }
                }
                partial = next;
            }
            for (key, v) in partial {
                let slot = out.entry((key, *to)).or_insert_with(|| self.ring.zero());
                *slot = self.ring.add(slot, &v)?;
            }
        }
        out.retain(|_, v| !v.is_zero());
        Ok(out)
    }

    /// The same automaton with weights mapped into `ring` along the
    /// canonical embedding.
    pub fn port(&self, ring: &Semiring) -> Result<Wfta> {
        let mut out = Wfta {
            ring: ring.clone(),
            states: self.states.clone(),
            alphabet: self.alphabet.clone(),
            delta: vec![Table::new(); self.alphabet.len()],
            lambda: self
                .lambda
                .iter()
                .map(|v| ring.embed(&self.ring, v))
                .collect::<Result<_>>()?,
        };
        for (g, table) in self.delta.iter().enumerate() {
            for ((from, to), w) in table {
                out.add_transition(g, from.clone(), *to, ring.embed(&self.ring, w)?)?;
            }
        }
        Ok(out)
    }

    /// Pointwise product: states are pairs, weights multiply.
    pub fn hadamard(&self, other: &Wfta) -> Result<Wfta> {
        if self.ring != other.ring {
            return Err(Error::CarrierMismatch {
                expected: self.ring.to_string(),
                found: other.ring.to_string(),
            });
        }
        if self.alphabet != other.alphabet {
            return Err(Error::InvalidAutomaton(
                "Hadamard product of automata over different alphabets".into(),
            ));
        }
        let m = other.num_states();
        let pair = |p: usize, q: usize| p * m + q;
        let mut states = Vec::with_capacity(self.num_states() * m);
        for p in &self.states {
            for q in &other.states {
                states.push(format!("({p}, {q})"));
            }
        }
        let mut lambda = Vec::with_capacity(states.len());
        for l1 in &self.lambda {
            for l2 in &other.lambda {
                lambda.push(self.ring.mul(l1, l2)?);
            }
        }
        let mut out = Wfta::new(self.ring.clone(), states, self.alphabet.clone(), [], lambda)?;
        for g in 0..self.alphabet.len() {
            for ((f1, t1), w1) in &self.delta[g] {
                for ((f2, t2), w2) in &other.delta[g] {
                    let from = f1.iter().zip(f2).map(|(&a, &b)| pair(a, b)).collect();
                    out.add_transition(g, from, pair(*t1, *t2), self.ring.mul(w1, w2)?)?;
                }
            }
        }
        Ok(out)
    }

    /// An automaton over the target alphabet of `h` recognizing
    /// `t ↦ Σ_{h(t') = t} ⟦B⟧(t')`. Each transition of `B` on `f` is
    /// simulated along the image term `h(f)`, with a fresh state for every
    /// inner position of that term.
    pub fn linear_hom_image(&self, h: &TreeHom) -> Result<Wfta> {
        h.check_linear_non_deleting()?;
        if h.source() != &self.alphabet {
            return Err(Error::InvalidAutomaton(
                "homomorphism source differs from the automaton's alphabet".into(),
            ));
        }
        let target = h.target();
        let mut states = self.states.clone();
        let mut lambda = self.lambda.clone();
        let mut pending: Vec<(usize, Vec<usize>, usize, Value)> = Vec::new();
        for (f, table) in self.delta.iter().enumerate() {
            let image = &h.images()[f];
            for ((from, to), w) in table {
                // state for every position of the image
                let mut assign: HashMap<Vec<usize>, usize> = HashMap::new();
                for pos in image.positions() {
                    let sub = image.subtree(&pos)?;
                    let s = match sub.head() {
                        Head::Var(i) => from[i - 1],
                        Head::Sym(_) if pos.is_root() => *to,
                        Head::Sym(_) => {
                            let base = format!(
                                "{}[{}->{}]@{}",
                                self.alphabet.name(f),
                                from.iter()
                                    .map(|&p| self.states[p].as_str())
                                    .collect::<Vec<_>>()
                                    .join(","),
                                self.states[*to],
                                pos.to_dotted()
                            );
                            states.push(fresh_name(&base, &states));
                            lambda.push(self.ring.zero());
                            states.len() - 1
                        }
                    };
                    assign.insert(pos.0.clone(), s);
                }
                for pos in image.positions() {
                    let sub = image.subtree(&pos)?;
                    if let Head::Sym(name) = sub.head() {
                        let g = target
                            .index_of(name)
                            .ok_or_else(|| Error::UnknownSymbol(name.clone()))?;
                        let children = (1..=sub.children().len())
                            .map(|i| assign[&pos.child(i).0])
                            .collect();
                        let weight = if pos.is_root() {
                            w.clone()
                        } else {
                            self.ring.one()
                        };
                        pending.push((g, children, assign[&pos.0], weight));
                    }
                }
            }
        }
        let mut out = Wfta::new(self.ring.clone(), states, target.clone(), [], lambda)?;
        for (g, from, to, w) in pending {
            out.add_transition(g, from, to, w)?;
        }
        Ok(out)
    }
}

/// The extended transition table of a context.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeltaPrime {
    /// Number of variable occurrences, i.e. the length of every source
    /// tuple.
    pub arity: usize,
    /// Nonzero entries `(source tuple, target) -> weight`.
    pub entries: BTreeMap<(Vec<usize>, usize), Value>,
}

impl DeltaPrime {
    pub fn get(&self, from: &[usize], to: usize) -> Option<&Value> {
        self.entries.get(&(from.to_vec(), to))
    }
}

impl fmt::Display for Wfta {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ring: {}", self.ring)?;
        writeln!(f, "states: {}", self.states.join(", "))?;
        let symbols: Vec<String> = self
            .alphabet
            .symbols()
            .iter()
            .map(|(n, r)| format!("{n}/{r}"))
            .collect();
        writeln!(f, "alphabet: {}", symbols.join(", "))?;
        for t in self.transitions() {
            let from: Vec<&str> = t.from.iter().map(|&p| self.states[p].as_str()).collect();
            writeln!(
                f,
                "delta_{}({}; {}) = {}",
                t.symbol,
                from.join(", "),
                self.states[t.to],
                self.ring.format_value(&t.weight)
            )?;
        }
        for (q, l) in self.lambda.iter().enumerate() {
            if !l.is_zero() {
                writeln!(f, "lambda({}) = {}", self.states[q], self.ring.format_value(l))?;
            }
        }
        Ok(())
    }
}

/// Every `t'` with `h(t') = t`. The homomorphism must be non-deleting so
/// that the set is finite.
pub fn preimages(h: &TreeHom, t: &Term) -> Result<Vec<Term>> {
    for (i, img) in h.images().iter().enumerate() {
        if !img.var_stats(h.source().rank(i)).non_deleting {
            return Err(Error::Deleting(format!(
                "image of `{}` is {img}",
                h.source().name(i)
            )));
        }
    }
    let mut memo = HashMap::new();
    preimages_rec(h, t, &mut memo)
}

fn preimages_rec(h: &TreeHom, t: &Term, memo: &mut HashMap<usize, Vec<Term>>) -> Result<Vec<Term>> {
    if let Some(v) = memo.get(&t.id()) {
        return Ok(v.clone());
    }
    let mut out = Vec::new();
    for (f, image) in h.images().iter().enumerate() {
        let rank = h.source().rank(f);
        let mut bindings: Vec<Option<Term>> = vec![None; rank];
        if !match_image(image, t, &mut bindings) {
            continue;
        }
        let mut combos: Vec<Vec<Term>> = vec![Vec::new()];
        for b in &bindings {
            let sub = b.as_ref().expect("non-deleting image binds every variable");
            let options = preimages_rec(h, sub, memo)?;
            let mut next = Vec::with_capacity(combos.len() * options.len());
            for prefix in &combos {
                for o in &options {
                    let mut v = prefix.clone();
                    v.push(o.clone());
                    next.push(v);
                }
            }
            combos = next;
            if combos.is_empty() {
                break;
            }
        }
        let name = h.source().name(f).to_string();
        out.extend(combos.into_iter().map(|cs| Term::sym(name.clone(), cs)));
    }
    memo.insert(t.id(), out.clone());
    Ok(out)
}

fn match_image(pattern: &Term, t: &Term, bindings: &mut [Option<Term>]) -> bool {
    match pattern.head() {
        Head::Var(i) => match &bindings[i - 1] {
            Some(bound) => bound == t,
            None => {
                bindings[i - 1] = Some(t.clone());
                true
            }
        },
        Head::Sym(s) => {
            t.symbol() == Some(s.as_str())
                && t.children().len() == pattern.children().len()
                && pattern
                    .children()
                    .iter()
                    .zip(t.children())
                    .all(|(p, c)| match_image(p, c, bindings))
        }
    }
}

/// A finite sum `Σ l_i · 1_{L_i}` of weighted characteristic functions of
/// recognizable tree languages, each given by a Boolean automaton.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StepFunction {
    ring: Semiring,
    alphabet: RankedAlphabet,
    parts: Vec<(Wfta, Value)>,
}

impl StepFunction {
    pub fn new(ring: Semiring, alphabet: RankedAlphabet, parts: Vec<(Wfta, Value)>) -> Result<Self> {
        for (l, v) in &parts {
            if l.ring() != &Semiring::Boolean {
                return Err(Error::CarrierMismatch {
                    expected: Semiring::Boolean.to_string(),
                    found: l.ring().to_string(),
                });
            }
            if l.alphabet() != &alphabet {
                return Err(Error::InvalidAutomaton(
                    "step function languages over different alphabets".into(),
                ));
            }
            ring.check(v)?;
        }
        Ok(StepFunction {
            ring,
            alphabet,
            parts,
        })
    }

    pub fn ring(&self) -> &Semiring {
        &self.ring
    }

    pub fn alphabet(&self) -> &RankedAlphabet {
        &self.alphabet
    }

    pub fn parts(&self) -> &[(Wfta, Value)] {
        &self.parts
    }

    /// `Σ l_i` over the languages containing `t`.
    pub fn eval(&self, t: &Term) -> Result<Value> {
        self.alphabet.check_term(t, 0)?;
        let mut total = self.ring.zero();
        for (l, v) in &self.parts {
            if l.behavior(t)?.is_one() {
                total = self.ring.add(&total, v)?;
            }
        }
        Ok(total)
    }

    /// The step function `t ↦ self(h(t))`: each language is replaced by its
    /// inverse image under `h`, whose transitions on `f` are the extended
    /// transitions along `h(f)`.
    pub fn inverse_hom(&self, h: &TreeHom) -> Result<StepFunction> {
        h.check_linear_non_deleting()?;
        if h.target() != &self.alphabet {
            return Err(Error::InvalidAutomaton(
                "homomorphism target differs from the step function's alphabet".into(),
            ));
        }
        let mut parts = Vec::with_capacity(self.parts.len());
        for (l, v) in &self.parts {
            let mut transitions = Vec::new();
            for (f, image) in h.images().iter().enumerate() {
                let order: Vec<usize> = image.all_var_positions().into_iter().map(|(_, i)| i).collect();
                let table = l.delta_prime(image)?;
                for ((occ, to), w) in table.entries {
                    let mut from = vec![0; order.len()];
                    for (j, &var) in order.iter().enumerate() {
                        from[var - 1] = occ[j];
                    }
                    transitions.push(Transition {
                        symbol: h.source().name(f).to_string(),
                        from,
                        to,
                        weight: w,
                    });
                }
            }
            let inverse = Wfta::new(
                Semiring::Boolean,
                l.states().to_vec(),
                h.source().clone(),
                transitions,
                l.lambda().to_vec(),
            )?;
            parts.push((inverse, v.clone()));
        }
        StepFunction::new(self.ring.clone(), h.source().clone(), parts)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trees::{enumerate_trees, Position};
    use proptest::prelude::*;

    fn nat(n: u64) -> Value {
        Semiring::Natural.from_u64(n)
    }

    fn t(s: &str) -> Term {
        Term::parse(s).unwrap()
    }

    fn alpha() -> RankedAlphabet {
        RankedAlphabet::from_pairs(&[("g", 2), ("e", 0)]).unwrap()
    }

    fn tr(symbol: &str, from: &[usize], to: usize, w: Value) -> Transition {
        Transition {
            symbol: symbol.into(),
            from: from.to_vec(),
            to,
            weight: w,
        }
    }

    /// Counts the leaves in state 1 and tracks the root in state 0.
    fn leaf_counter() -> Wfta {
        Wfta::new(
            Semiring::Natural,
            vec!["all".into(), "mark".into()],
            alpha(),
            [
                tr("e", &[], 0, nat(1)),
                tr("e", &[], 1, nat(1)),
                tr("g", &[0, 0], 0, nat(1)),
                tr("g", &[1, 0], 1, nat(1)),
                tr("g", &[0, 1], 1, nat(1)),
            ],
            vec![nat(0), nat(1)],
        )
        .unwrap()
    }

    fn ones(ring: Semiring) -> Wfta {
        let one = ring.one();
        Wfta::new(
            ring,
            vec!["u".into()],
            alpha(),
            [tr("e", &[], 0, one.clone()), tr("g", &[0, 0], 0, one.clone())],
            vec![one],
        )
        .unwrap()
    }

    #[test]
    fn leaves_and_trees() {
        let b = leaf_counter();
        assert_eq!(b.state_behavior("all", &t("e")).unwrap(), nat(1));
        assert_eq!(b.behavior(&t("g(g(e,e),e)")).unwrap(), nat(3));
        let zero = Wfta::new(Semiring::Natural, vec!["z".into()], alpha(), [], vec![nat(1)]).unwrap();
        assert_eq!(zero.behavior(&t("g(e,e)")).unwrap(), nat(0));
        assert!(matches!(b.behavior(&t("g(e)")), Err(Error::RankMismatch { .. })));
        assert!(matches!(b.behavior(&t("h")), Err(Error::UnknownSymbol(_))));
    }

    #[test]
    fn duplicate_transitions_add_up() {
        let b = Wfta::new(
            Semiring::Natural,
            vec!["q".into()],
            alpha(),
            [tr("e", &[], 0, nat(2)), tr("e", &[], 0, nat(3))],
            vec![nat(1)],
        )
        .unwrap();
        assert_eq!(b.behavior(&t("e")).unwrap(), nat(5));
        assert_eq!(b.num_transitions(), 1);
    }

    #[test]
    fn extended_table_of_a_variable_is_the_identity() {
        let b = leaf_counter();
        let dp = b.delta_prime(&t("x1")).unwrap();
        assert_eq!(dp.arity, 1);
        assert_eq!(dp.entries.len(), 2);
        assert_eq!(dp.get(&[1], 1), Some(&nat(1)));
        assert_eq!(dp.get(&[0], 1), None);
    }

    #[test]
    fn extended_table_of_a_closed_tree_is_the_behavior() {
        let b = leaf_counter();
        let tree = t("g(g(e,e),e)");
        let dp = b.delta_prime(&tree).unwrap();
        let v = b.state_behaviors(&tree).unwrap();
        for q in 0..2 {
            assert_eq!(dp.get(&[], q).cloned().unwrap_or(nat(0)), v[q]);
        }
    }

    #[test]
    fn hadamard_with_one_and_zero() {
        let b = leaf_counter();
        let one = ones(Semiring::Natural);
        let zero = Wfta::new(Semiring::Natural, vec!["z".into()], alpha(), [], vec![nat(1)]).unwrap();
        let b1 = b.hadamard(&one).unwrap();
        let b0 = b.hadamard(&zero).unwrap();
        for tree in enumerate_trees(&alpha(), 7) {
            assert_eq!(b1.behavior(&tree).unwrap(), b.behavior(&tree).unwrap());
            assert_eq!(b0.behavior(&tree).unwrap(), nat(0));
        }
        let sq = b.hadamard(&b).unwrap();
        assert_eq!(sq.behavior(&t("g(g(e,e),e)")).unwrap(), nat(9));
    }

    #[test]
    fn identity_image_preserves_behavior() {
        let b = leaf_counter();
        let img = b.linear_hom_image(&TreeHom::identity(&alpha())).unwrap();
        for tree in enumerate_trees(&alpha(), 7) {
            assert_eq!(img.behavior(&tree).unwrap(), b.behavior(&tree).unwrap());
        }
    }

    #[test]
    fn non_linear_images_are_rejected() {
        let src = RankedAlphabet::from_pairs(&[("f", 1), ("e", 0)]).unwrap();
        let h = TreeHom::new(src.clone(), alpha(), vec![t("g(x1,x1)"), t("e")]).unwrap();
        let b_src = Wfta::new(Semiring::Natural, vec!["u".into()], src, [], vec![nat(1)]).unwrap();
        assert!(matches!(b_src.linear_hom_image(&h), Err(Error::NotLinearNonDeleting(_))));
        let sf = StepFunction::new(Semiring::Natural, alpha(), vec![(boolean_all(), nat(1))]).unwrap();
        assert!(matches!(sf.inverse_hom(&h), Err(Error::NotLinearNonDeleting(_))));
    }

    fn boolean_all() -> Wfta {
        ones(Semiring::Boolean)
    }

    #[test]
    fn preimages_of_a_merging_relabeling() {
        let src = RankedAlphabet::from_pairs(&[("g1", 2), ("g2", 2), ("e", 0)]).unwrap();
        let h = TreeHom::new(src, alpha(), vec![t("g(x1,x2)"), t("g(x1,x2)"), t("e")]).unwrap();
        assert_eq!(preimages(&h, &t("g(g(e,e),e)")).unwrap().len(), 4);
        assert_eq!(preimages(&h, &t("e")).unwrap(), vec![t("e")]);
        let id = TreeHom::identity(&alpha());
        assert_eq!(preimages(&id, &t("g(e,e)")).unwrap(), vec![t("g(e,e)")]);
    }

    #[test]
    fn step_function_values() {
        let all = boolean_all();
        let empty = StepFunction::new(Semiring::Natural, alpha(), vec![]).unwrap();
        assert_eq!(empty.eval(&t("e")).unwrap(), nat(0));
        let one = StepFunction::new(Semiring::Natural, alpha(), vec![(all.clone(), nat(5))]).unwrap();
        assert_eq!(one.eval(&t("g(e,e)")).unwrap(), nat(5));
        let two = StepFunction::new(
            Semiring::Natural,
            alpha(),
            vec![(all.clone(), nat(1)), (all, nat(1))],
        )
        .unwrap();
        assert_eq!(two.eval(&t("e")).unwrap(), nat(2));
        assert!(empty
            .inverse_hom(&TreeHom::identity(&alpha()))
            .unwrap()
            .parts()
            .is_empty());
    }

    /// Boolean automaton accepting trees whose leftmost leaf sits at even
    /// depth.
    fn even_left_spine() -> Wfta {
        let b = Value::Bool(true);
        Wfta::new(
            Semiring::Boolean,
            vec!["even".into(), "odd".into()],
            alpha(),
            [
                tr("e", &[], 0, b.clone()),
                tr("g", &[0, 0], 1, b.clone()),
                tr("g", &[0, 1], 1, b.clone()),
                tr("g", &[1, 0], 0, b.clone()),
                tr("g", &[1, 1], 0, b.clone()),
            ],
            vec![b, Value::Bool(false)],
        )
        .unwrap()
    }

    #[test]
    fn inverse_image_of_a_step_function() {
        let src = RankedAlphabet::from_pairs(&[("f", 2), ("k", 1), ("c", 0)]).unwrap();
        let h = TreeHom::new(
            src.clone(),
            alpha(),
            vec![t("g(x2,g(x1,e))"), t("g(x1,e)"), t("g(e,e)")],
        )
        .unwrap();
        let sf = StepFunction::new(
            Semiring::Natural,
            alpha(),
            vec![(even_left_spine(), nat(3)), (boolean_all(), nat(1))],
        )
        .unwrap();
        let inv = sf.inverse_hom(&h).unwrap();
        for tree in enumerate_trees(&src, 6) {
            assert_eq!(
                inv.eval(&tree).unwrap(),
                sf.eval(&h.apply(&tree).unwrap()).unwrap(),
                "{tree}"
            );
        }
    }

    fn arb_wfta() -> impl Strategy<Value = Wfta> {
        let entry = (0usize..2, 0u64..3);
        (
            proptest::collection::vec(entry.clone(), 2),
            proptest::collection::vec(entry, 8),
            proptest::collection::vec(0u64..2, 2),
        )
            .prop_map(|(leaves, inner, lambda)| {
                let mut ts = Vec::new();
                for (q, (_, w)) in leaves.iter().enumerate() {
                    ts.push(tr("e", &[], q, nat(*w)));
                }
                for (i, (to, w)) in inner.iter().enumerate() {
                    let from = [(i >> 1) & 1, i & 1];
                    if i < 4 {
                        ts.push(tr("g", &from, *to, nat(*w)));
                    }
                }
                Wfta::new(
                    Semiring::Natural,
                    vec!["q1".into(), "q2".into()],
                    alpha(),
                    ts,
                    lambda.into_iter().map(nat).collect(),
                )
                .unwrap()
            })
    }

    fn closed_trees() -> Vec<Term> {
        enumerate_trees(&alpha(), 5)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn substitution_identity(b in arb_wfta(), i in 0usize..4, j in 0usize..4, k in 0usize..3) {
            let ctxs = [t("g(x1,x1)"), t("g(x1,g(e,x1))"), t("g(e,x1)")];
            let ctx = &ctxs[k];
            let trees = closed_trees();
            let subs = [trees[i].clone(), trees[j].clone()];
            let occ = ctx.all_var_positions().len();
            let subs = &subs[..occ];
            let positions: Vec<Position> = ctx.all_var_positions().into_iter().map(|(p, _)| p).collect();
            let full = ctx.substitute_positions(&positions, subs).unwrap();
            let direct = b.state_behaviors(&full).unwrap();
            let dp = b.delta_prime(ctx).unwrap();
            let children: Vec<Vec<Value>> = subs.iter().map(|s| b.state_behaviors(s).unwrap()).collect();
            let ring = b.ring();
            for q in 0..2 {
                let mut sum = ring.zero();
                for ((from, to), w) in &dp.entries {
                    if *to != q { continue; }
                    let mut term = w.clone();
                    for (idx, &p) in from.iter().enumerate() {
                        term = ring.mul(&term, &children[idx][p]).unwrap();
                    }
                    sum = ring.add(&sum, &term).unwrap();
                }
                prop_assert_eq!(&sum, &direct[q]);
            }
        }

        #[test]
        fn hadamard_is_pointwise(b1 in arb_wfta(), b2 in arb_wfta()) {
            let prod = b1.hadamard(&b2).unwrap();
            for tree in closed_trees() {
                let lhs = prod.behavior(&tree).unwrap();
                let rhs = Semiring::Natural
                    .mul(&b1.behavior(&tree).unwrap(), &b2.behavior(&tree).unwrap())
                    .unwrap();
                prop_assert_eq!(lhs, rhs);
            }
        }

        #[test]
        fn image_is_the_preimage_sum(b in arb_wfta()) {
            // Relabel g into two target shapes: g ↦ f(x2, k(x1)), e ↦ c.
            let tgt = RankedAlphabet::from_pairs(&[("f", 2), ("k", 1), ("c", 0)]).unwrap();
            let h = TreeHom::new(alpha(), tgt.clone(), vec![t("f(x2,k(x1))"), t("c")]).unwrap();
            let img = b.linear_hom_image(&h).unwrap();
            for tree in enumerate_trees(&tgt, 6) {
                let mut sum = Semiring::Natural.zero();
                for pre in preimages(&h, &tree).unwrap() {
                    prop_assert_eq!(&h.apply(&pre).unwrap(), &tree);
                    sum = Semiring::Natural.add(&sum, &b.behavior(&pre).unwrap()).unwrap();
                }
                prop_assert_eq!(img.behavior(&tree).unwrap(), sum);
            }
        }
    }
}
