//! Weighted alternating finite automata.
//!
//! A [`Wafa`] assigns to every state and letter a polynomial over its
//! states. Behaviors are computed either by polynomial substitution along
//! the word (suffix by suffix) or by summing the weights of run trees; the
//! two agree on nice automata.

use std::fmt;

use crate::error::{Error, Result};
use crate::polynomial::{Exponents, Monomial, Polynomial};
use crate::semiring::{Semiring, Value};
use crate::trees::{RankedAlphabet, Term};
use crate::words::{check_distinct, letter_index};

/// Default bound on the number of enumerated runs.
pub const DEFAULT_RUN_CAP: usize = 1_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Wafa {
    ring: Semiring,
    states: Vec<String>,
    alphabet: Vec<String>,
    /// `delta[q][a]`, a polynomial in one variable per state.
    delta: Vec<Vec<Polynomial>>,
    p0: Polynomial,
    tau: Vec<Value>,
}

/// Shape flags of a [`Wafa`], plus structural violations found while
/// reading a document.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Diagnostics {
    pub violations: Vec<String>,
    /// Every polynomial is a normalized sum of monomials.
    pub normalized: bool,
    /// No monomial in `P0` or `δ` is a constant.
    pub no_constants: bool,
    /// `P0` is exactly the first state.
    pub initial_is_first_state: bool,
    /// Conjunction of the three conditions above.
    pub nice: bool,
    pub purely_polynomial: bool,
    pub equalized: bool,
    pub universal: bool,
    pub wfa_shape: bool,
}

impl Wafa {
    /// Validates and assembles an automaton. `delta[q][a]` and `p0` must be
    /// polynomials over `ring` in `states.len()` variables.
    pub fn new(
        ring: Semiring,
        states: Vec<String>,
        alphabet: Vec<String>,
        p0: Polynomial,
        delta: Vec<Vec<Polynomial>>,
        tau: Vec<Value>,
    ) -> Result<Self> {
        check_distinct(&states, "state")?;
        check_distinct(&alphabet, "letter")?;
        let n = states.len();
        if delta.len() != n || tau.len() != n {
            return Err(Error::ArityMismatch {
                expected: n,
                found: if delta.len() != n { delta.len() } else { tau.len() },
            });
        }
        let check_poly = |p: &Polynomial| -> Result<()> {
            if p.ring() != &ring {
                return Err(Error::CarrierMismatch {
                    expected: ring.to_string(),
                    found: p.ring().to_string(),
                });
            }
            if p.nvars() != n {
                return Err(Error::ArityMismatch {
                    expected: n,
                    found: p.nvars(),
                });
            }
            Ok(())
        };
        check_poly(&p0)?;
        for row in &delta {
            if row.len() != alphabet.len() {
                return Err(Error::ArityMismatch {
                    expected: alphabet.len(),
                    found: row.len(),
                });
            }
            row.iter().try_for_each(check_poly)?;
        }
        for t in &tau {
            ring.check(t)?;
        }
        Ok(Wafa {
            ring,
            states,
            alphabet,
            delta,
            p0,
            tau,
        })
    }

    /// Builds an automaton from infix polynomial text. Missing transitions
    /// and final weights default to zero.
    pub fn build(
        ring: Semiring,
        states: &[&str],
        alphabet: &[&str],
        p0: &str,
        delta: &[(&str, &str, &str)],
        tau: &[(&str, &str)],
    ) -> Result<Self> {
        let states: Vec<String> = states.iter().map(|s| s.to_string()).collect();
        let alphabet: Vec<String> = alphabet.iter().map(|s| s.to_string()).collect();
        let n = states.len();
        let sidx = letter_index(&states);
        let aidx = letter_index(&alphabet);
        let mut table = vec![vec![Polynomial::zero(ring.clone(), n); alphabet.len()]; n];
        for &(q, a, text) in delta {
            let qi = *sidx.get(q).ok_or_else(|| Error::UnknownState(q.into()))?;
            let ai = *aidx.get(a).ok_or_else(|| Error::UnknownLetter(a.into()))?;
            table[qi][ai] = Polynomial::parse(&ring, &states, text)?;
        }
        let mut weights = vec![ring.zero(); n];
        for &(q, v) in tau {
            let qi = *sidx.get(q).ok_or_else(|| Error::UnknownState(q.into()))?;
            weights[qi] = ring.parse_value(v).or_else(|_| {
                Polynomial::parse(&ring, &[], v)
                    .map(|p| p.constant_term())
            })?;
        }
        let p0 = Polynomial::parse(&ring, &states, p0)?;
        Wafa::new(ring, states, alphabet, p0, table, weights)
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

    pub fn alphabet(&self) -> &[String] {
        &self.alphabet
    }

    pub fn p0(&self) -> &Polynomial {
        &self.p0
    }

    pub fn tau(&self) -> &[Value] {
        &self.tau
    }

    /// `δ(q, a)` by indices.
    pub fn delta(&self, q: usize, a: usize) -> &Polynomial {
        &self.delta[q][a]
    }

    pub fn delta_by_name(&self, q: &str, a: &str) -> Result<&Polynomial> {
        Ok(&self.delta[self.state_index(q)?][self.letter_index(a)?])
    }

    pub fn state_index(&self, q: &str) -> Result<usize> {
        self.states
            .iter()
            .position(|s| s == q)
            .ok_or_else(|| Error::UnknownState(q.to_string()))
    }

    pub fn letter_index(&self, a: &str) -> Result<usize> {
        self.alphabet
            .iter()
            .position(|s| s == a)
            .ok_or_else(|| Error::UnknownLetter(a.to_string()))
    }

    /// Renders a polynomial over this automaton's states.
    pub fn format_poly(&self, p: &Polynomial) -> String {
        p.format_with(&self.ring, &self.states)
    }

    fn letters(&self, w: &[String]) -> Result<Vec<usize>> {
        let idx = letter_index(&self.alphabet);
        w.iter()
            .map(|a| {
                idx.get(a.as_str())
                    .copied()
                    .ok_or_else(|| Error::UnknownLetter(a.clone()))
            })
            .collect()
    }

    fn all_polys(&self) -> impl Iterator<Item = &Polynomial> {
        std::iter::once(&self.p0).chain(self.delta.iter().flatten())
    }

    pub fn diagnostics(&self) -> Diagnostics {
        let no_constants = self
            .all_polys()
            .all(|p| p.monomials().iter().all(Monomial::is_proper));
        let initial_is_first_state = !self.states.is_empty() && self.p0.is_var(0);
        let purely_polynomial = self
            .all_polys()
            .all(|p| p.monomials().iter().all(|m| m.coeff.is_one()));
        let mut degrees = self
            .delta
            .iter()
            .flatten()
            .flat_map(|p| p.monomials().iter().map(Monomial::degree));
        let equalized = match degrees.next() {
            None => true,
            Some(d) => degrees.all(|e| e == d),
        };
        let universal = self.delta.iter().flatten().all(|p| p.monomials().len() <= 1);
        let wfa_shape = self
            .all_polys()
            .all(|p| p.monomials().iter().all(|m| m.degree() == 1));
        Diagnostics {
            violations: Vec::new(),
            normalized: true,
            no_constants,
            initial_is_first_state,
            nice: no_constants && initial_is_first_state,
            purely_polynomial,
            equalized,
            universal,
            wfa_shape,
        }
    }

    pub fn is_nice(&self) -> bool {
        self.diagnostics().nice
    }

    fn require_nice(&self) -> Result<()> {
        let d = self.diagnostics();
        if !d.no_constants {
            return Err(Error::NotNice("a transition or P0 has a constant term".into()));
        }
        if !d.initial_is_first_state {
            return Err(Error::NotNice(format!(
                "P0 is `{}`, not the first state",
                self.format_poly(&self.p0)
            )));
        }
        Ok(())
    }

    /// The vector `([A]_{q_1}(w), ..., [A]_{q_n}(w))`, computed suffix by
    /// suffix.
    pub fn state_behaviors(&self, w: &[String]) -> Result<Vec<Value>> {
        let letters = self.letters(w)?;
        let mut current = self.tau.clone();
        for &a in letters.iter().rev() {
            current = self
                .delta
                .iter()
                .map(|row| row[a].eval(&current))
                .collect::<Result<_>>()?;
        }
        Ok(current)
    }

    /// `[A]_q(w)`.
    pub fn state_behavior(&self, q: &str, w: &[String]) -> Result<Value> {
        let qi = self.state_index(q)?;
        Ok(self.state_behaviors(w)?.swap_remove(qi))
    }

    /// `⟦A⟧(w) = P0⟨[A]_{q_1}(w), ..., [A]_{q_n}(w)⟩`.
    pub fn behavior(&self, w: &[String]) -> Result<Value> {
        self.p0.eval(&self.state_behaviors(w)?)
    }

    /// The same automaton with every weight mapped into `ring` along the
    /// canonical embedding.
    pub fn port(&self, ring: &Semiring) -> Result<Wafa> {
        let map = |p: &Polynomial| p.map_coefficients(ring, |v| ring.embed(&self.ring, v));
        Wafa::new(
            ring.clone(),
            self.states.clone(),
            self.alphabet.clone(),
            map(&self.p0)?,
            self.delta
                .iter()
                .map(|row| row.iter().map(map).collect())
                .collect::<Result<_>>()?,
            self.tau
                .iter()
                .map(|v| ring.embed(&self.ring, v))
                .collect::<Result<_>>()?,
        )
    }

    /// An equivalent nice automaton. Every distinct constant `c` occurring
    /// in `P0` or `δ` becomes a state `q_c` that loops on every letter with
    /// final weight `c`. If `P0` is then not the first state, a new first
    /// state reads `P0` through the transitions.
    pub fn make_nice(&self) -> Result<Wafa> {
        let mut constants: Vec<Value> = Vec::new();
        for p in self.all_polys() {
            let c = p.constant_term();
            if !c.is_zero() && !constants.contains(&c) {
                constants.push(c);
            }
        }
        let mut out = self.clone();
        if !constants.is_empty() {
            out = out.with_constant_states(&constants)?;
        }
        if !out.p0.is_var(0) || out.states.is_empty() {
            out = out.with_aggregate_state()?;
        }
        Ok(out)
    }

    /// Appends a looping state per constant and rewrites constant terms.
    fn with_constant_states(&self, constants: &[Value]) -> Result<Wafa> {
        let n = self.num_states();
        let m = n + constants.len();
        let mut states = self.states.clone();
        for c in constants {
            let name = fresh_name(&format!("q_{}", self.ring.format_value(c)), &states);
            states.push(name);
        }
        let rewrite = |p: &Polynomial| -> Result<Polynomial> {
            let terms = p
                .monomials()
                .iter()
                .map(|mono| {
                    if mono.exps.is_one() {
                        let k = constants.iter().position(|c| *c == mono.coeff).unwrap();
                        (self.ring.one(), Exponents::var(n + k))
                    } else {
                        (mono.coeff.clone(), mono.exps.clone())
                    }
                })
                .collect::<Vec<_>>();
            Polynomial::from_terms(self.ring.clone(), m, terms)
        };
        let mut delta: Vec<Vec<Polynomial>> = self
            .delta
            .iter()
            .map(|row| row.iter().map(rewrite).collect())
            .collect::<Result<_>>()?;
        for k in 0..constants.len() {
            let loop_poly = Polynomial::var(self.ring.clone(), m, n + k)?;
            delta.push(vec![loop_poly; self.alphabet.len()]);
        }
        let mut tau = self.tau.clone();
        tau.extend(constants.iter().cloned());
        Wafa::new(
            self.ring.clone(),
            states,
            self.alphabet.clone(),
            rewrite(&self.p0)?,
            delta,
            tau,
        )
    }

    /// Prepends a state whose transitions are `P0⟨δ(q_1,a), ..., δ(q_n,a)⟩`
    /// and whose final weight is `P0⟨τ⟩`; `P0` becomes that state.
    fn with_aggregate_state(&self) -> Result<Wafa> {
        let n = self.num_states();
        let shift = |p: &Polynomial| p.remap_vars(n + 1, |v| v + 1);
        let mut states = vec![fresh_name("q0", &self.states)];
        states.extend(self.states.iter().cloned());
        let mut delta = Vec::with_capacity(n + 1);
        let first_row = (0..self.alphabet.len())
            .map(|a| {
                let column: Vec<Polynomial> = self
                    .delta
                    .iter()
                    .map(|row| shift(&row[a]))
                    .collect::<Result<_>>()?;
                self.p0.substitute(&column, n + 1)
            })
            .collect::<Result<Vec<_>>>()?;
        delta.push(first_row);
        for row in &self.delta {
            delta.push(row.iter().map(shift).collect::<Result<_>>()?);
        }
        let mut tau = vec![self.p0.eval(&self.tau)?];
        tau.extend(self.tau.iter().cloned());
        Wafa::new(
            self.ring.clone(),
            states,
            self.alphabet.clone(),
            Polynomial::var(self.ring.clone(), n + 1, 0)?,
            delta,
            tau,
        )
    }

    /// An equivalent nice automaton whose monomials all have coefficient
    /// one. Each coefficient `s ≠ 1` becomes a looping state `q_s` with
    /// final weight `s`, multiplied into the monomials that carried `s`.
    pub fn make_purely_polynomial(&self) -> Result<Wafa> {
        self.require_nice()?;
        let mut coeffs: Vec<Value> = Vec::new();
        for p in self.all_polys() {
            for mono in p.monomials() {
                if !mono.coeff.is_one() && !coeffs.contains(&mono.coeff) {
                    coeffs.push(mono.coeff.clone());
                }
            }
        }
        if coeffs.is_empty() {
            return Ok(self.clone());
        }
        let n = self.num_states();
        let m = n + coeffs.len();
        let mut states = self.states.clone();
        for s in &coeffs {
            let name = fresh_name(&format!("q_{}", self.ring.format_value(s)), &states);
            states.push(name);
        }
        let rewrite = |p: &Polynomial| -> Result<Polynomial> {
            let terms = p
                .monomials()
                .iter()
                .map(|mono| {
                    if mono.coeff.is_one() {
                        return Ok((mono.coeff.clone(), mono.exps.clone()));
                    }
                    let k = coeffs.iter().position(|c| *c == mono.coeff).unwrap();
                    Ok((self.ring.one(), mono.exps.mul(&Exponents::var(n + k))?))
                })
                .collect::<Result<Vec<_>>>()?;
            Polynomial::from_terms(self.ring.clone(), m, terms)
        };
        let mut delta: Vec<Vec<Polynomial>> = self
            .delta
            .iter()
            .map(|row| row.iter().map(rewrite).collect())
            .collect::<Result<_>>()?;
        for k in 0..coeffs.len() {
            let loop_poly = Polynomial::var(self.ring.clone(), m, n + k)?;
            delta.push(vec![loop_poly; self.alphabet.len()]);
        }
        let mut tau = self.tau.clone();
        tau.extend(coeffs.iter().cloned());
        Wafa::new(
            self.ring.clone(),
            states,
            self.alphabet.clone(),
            rewrite(&self.p0)?,
            delta,
            tau,
        )
    }

    /// Largest monomial degree in `δ`, at least one.
    pub fn equalization_degree(&self) -> u64 {
        self.delta
            .iter()
            .flatten()
            .map(Polynomial::degree)
            .max()
            .unwrap_or(0)
            .max(1)
    }

    /// An equivalent nice automaton in which every monomial of `δ` has the
    /// same degree `d`: a sink state `h` with `δ(h,a) = h^d` and final
    /// weight one pads each monomial of degree `k` by `h^(d-k)`.
    pub fn equalize(&self) -> Result<Wafa> {
        self.require_nice()?;
        let d = self.equalization_degree();
        let d32 = u32::try_from(d).map_err(|_| Error::ExponentOverflow)?;
        let n = self.num_states();
        let mut states = self.states.clone();
        states.push(fresh_name("h1", &states));
        let pad = |p: &Polynomial| -> Result<Polynomial> {
            let terms = p
                .monomials()
                .iter()
                .map(|mono| {
                    let missing = d32 - mono.degree() as u32;
                    let exps = if missing == 0 {
                        mono.exps.clone()
                    } else {
                        mono.exps.mul(&Exponents::from_pairs([(n, missing)])?)?
                    };
                    Ok((mono.coeff.clone(), exps))
                })
                .collect::<Result<Vec<_>>>()?;
            Polynomial::from_terms(self.ring.clone(), n + 1, terms)
        };
        let mut delta: Vec<Vec<Polynomial>> = self
            .delta
            .iter()
            .map(|row| row.iter().map(pad).collect())
            .collect::<Result<_>>()?;
        let sink = Polynomial::monomial(
            self.ring.clone(),
            n + 1,
            self.ring.one(),
            Exponents::from_pairs([(n, d32)])?,
        )?;
        delta.push(vec![sink; self.alphabet.len()]);
        let mut tau = self.tau.clone();
        tau.push(self.ring.one());
        Wafa::new(
            self.ring.clone(),
            states,
            self.alphabet.clone(),
            self.p0.remap_vars(n + 1, |v| v)?,
            delta,
            tau,
        )
    }

    /// The run alphabet: one symbol `(q, m)` of rank `deg m` for every
    /// monomial `m` of some `δ(q, a)`, and one symbol `(q, τ(q))` of rank 0
    /// per state.
    pub fn run_alphabet(&self) -> Result<(RankedAlphabet, Vec<RunLabel>)> {
        self.require_nice()?;
        let mut labels = Vec::new();
        for (q, row) in self.delta.iter().enumerate() {
            for p in row {
                for mono in p.monomials() {
                    let label = RunLabel::Step {
                        state: q,
                        monomial: mono.clone(),
                    };
                    if !labels.contains(&label) {
                        labels.push(label);
                    }
                }
            }
            labels.push(RunLabel::Final {
                state: q,
                weight: self.tau[q].clone(),
            });
        }
        let symbols = labels
            .iter()
            .map(|l| (l.name(self), l.rank()))
            .collect();
        Ok((RankedAlphabet::new(symbols)?, labels))
    }

    /// Lazily enumerates the runs over `w`. After `cap` runs, a further run
    /// is reported as a resource error instead.
    pub fn runs(&self, w: &[String], cap: usize) -> Result<Runs<'_>> {
        self.require_nice()?;
        let letters = self.letters(w)?;
        let len = letters.len();
        let n = self.num_states();
        // viable[k][q]: monomials of δ(q, w_{k+1}) whose children all admit
        // a run over the remaining suffix
        let mut viable: Vec<Vec<Vec<usize>>> = vec![Vec::new(); len];
        let mut alive = vec![true; n];
        for k in (0..len).rev() {
            let mut layer = Vec::with_capacity(n);
            for q in 0..n {
                let options: Vec<usize> = self.delta[q][letters[k]]
                    .monomials()
                    .iter()
                    .enumerate()
                    .filter(|(_, m)| m.exps.iter().all(|(v, _)| alive[v]))
                    .map(|(i, _)| i)
                    .collect();
                layer.push(options);
            }
            alive = layer.iter().map(|o| !o.is_empty()).collect();
            viable[k] = layer;
        }
        Ok(Runs {
            wafa: self,
            letters,
            viable,
            root_alive: n > 0 && alive[0],
            choices: Vec::new(),
            started: false,
            done: false,
            yielded: 0,
            cap,
        })
    }

    /// `Σ Weight(t)` over all runs on `w`.
    pub fn behavior_by_runs(&self, w: &[String], cap: usize) -> Result<Value> {
        let mut total = self.ring.zero();
        for run in self.runs(w, cap)? {
            total = self.ring.add(&total, &run?.weight(&self.ring)?)?;
        }
        Ok(total)
    }

    /// Number of runs on `w`, bounded by `cap`.
    pub fn count_runs(&self, w: &[String], cap: usize) -> Result<usize> {
        let mut count = 0;
        for run in self.runs(w, cap)? {
            run?;
            count += 1;
        }
        Ok(count)
    }
}

/// `base`, or `base` followed by primes if that name is taken.
pub(crate) fn fresh_name(base: &str, taken: &[String]) -> String {
    let mut name = base.to_string();
    while taken.iter().any(|t| *t == name) {
        name.push('\'');
    }
    name
}

impl fmt::Display for Wafa {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ring: {}", self.ring)?;
        writeln!(f, "states: {}", self.states.join(", "))?;
        writeln!(f, "alphabet: {}", self.alphabet.join(", "))?;
        writeln!(f, "P0 = {}", self.format_poly(&self.p0))?;
        for (q, row) in self.delta.iter().enumerate() {
            for (a, p) in row.iter().enumerate() {
                writeln!(
                    f,
                    "delta({}, {}) = {}",
                    self.states[q],
                    self.alphabet[a],
                    self.format_poly(p)
                )?;
            }
        }
        for (q, t) in self.tau.iter().enumerate() {
            writeln!(f, "tau({}) = {}", self.states[q], self.ring.format_value(t))?;
        }
        Ok(())
    }
}

/// A symbol of the run alphabet.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum RunLabel {
    /// A state together with a monomial of one of its transitions.
    Step { state: usize, monomial: Monomial },
    /// A state together with its final weight.
    Final { state: usize, weight: Value },
}

impl RunLabel {
    pub fn state(&self) -> usize {
        match self {
            RunLabel::Step { state, .. } | RunLabel::Final { state, .. } => *state,
        }
    }

    pub fn rank(&self) -> usize {
        match self {
            RunLabel::Step { monomial, .. } => monomial.degree() as usize,
            RunLabel::Final { .. } => 0,
        }
    }

    /// The coefficient carried by the label.
    pub fn coefficient(&self) -> &Value {
        match self {
            RunLabel::Step { monomial, .. } => &monomial.coeff,
            RunLabel::Final { weight, .. } => weight,
        }
    }

    /// Printable symbol name such as `(q, 2*p^2)`.
    pub fn name(&self, a: &Wafa) -> String {
        let x = match self {
            RunLabel::Step { monomial, .. } => {
                let p = Polynomial::from_terms(
                    a.ring.clone(),
                    a.num_states(),
                    [(monomial.coeff.clone(), monomial.exps.clone())],
                )
                .expect("monomial over the automaton's states");
                a.format_poly(&p)
            }
            RunLabel::Final { weight, .. } => a.ring.format_value(weight),
        };
        format!("({}, {})", a.states[self.state()], x)
    }
}

/// A run: a tree of run labels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunTree {
    pub label: RunLabel,
    pub children: Vec<RunTree>,
}

impl RunTree {
    /// Product of all coefficients in the tree, final weights included.
    pub fn weight(&self, ring: &Semiring) -> Result<Value> {
        let mut acc = self.label.coefficient().clone();
        for c in &self.children {
            if acc.is_zero() {
                break;
            }
            acc = ring.mul(&acc, &c.weight(ring)?)?;
        }
        Ok(acc)
    }

    pub fn to_term(&self, a: &Wafa) -> Term {
        Term::sym(
            self.label.name(a),
            self.children.iter().map(|c| c.to_term(a)).collect(),
        )
    }

    pub fn size(&self) -> usize {
        1 + self.children.iter().map(RunTree::size).sum::<usize>()
    }
}

/// Iterator over the runs of a [`Wafa`] on a word, see [`Wafa::runs`].
///
/// Runs are produced in the order of an odometer over the monomial choices
/// made at internal nodes, taken in preorder.
pub struct Runs<'a> {
    wafa: &'a Wafa,
    letters: Vec<usize>,
    viable: Vec<Vec<Vec<usize>>>,
    root_alive: bool,
    /// `(chosen option, number of options)` per internal node in preorder.
    choices: Vec<(usize, usize)>,
    started: bool,
    done: bool,
    yielded: usize,
    cap: usize,
}

impl Runs<'_> {
    fn build(&mut self) -> RunTree {
        let mut cursor = 0;
        let tree = self.node(0, 0, &mut cursor);
        self.choices.truncate(cursor);
        tree
    }

    fn node(&mut self, depth: usize, state: usize, cursor: &mut usize) -> RunTree {
        let a = self.wafa;
        if depth == self.letters.len() {
            return RunTree {
                label: RunLabel::Final {
                    state,
                    weight: a.tau[state].clone(),
                },
                children: Vec::new(),
            };
        }
        let options = &self.viable[depth][state];
        if *cursor == self.choices.len() {
            self.choices.push((0, options.len()));
        }
        let pick = options[self.choices[*cursor].0];
        *cursor += 1;
        let monomial = a.delta[state][self.letters[depth]].monomials()[pick].clone();
        let children = monomial
            .exps
            .expand()
            .into_iter()
            .map(|child| self.node(depth + 1, child, cursor))
            .collect();
        RunTree {
            label: RunLabel::Step { state, monomial },
            children,
        }
    }

    fn advance(&mut self) -> bool {
        while let Some((choice, count)) = self.choices.pop() {
            if choice + 1 < count {
                self.choices.push((choice + 1, count));
                return true;
            }
        }
        false
    }
}

impl Iterator for Runs<'_> {
    type Item = Result<RunTree>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            if !self.root_alive {
                self.done = true;
                return None;
            }
        } else if !self.advance() {
            self.done = true;
            return None;
        }
        if self.yielded == self.cap {
            self.done = true;
            return Some(Err(Error::ResourceLimit(format!(
                "more than {} runs",
                self.cap
            ))));
        }
        self.yielded += 1;
        Some(Ok(self.build()))
    }
}
