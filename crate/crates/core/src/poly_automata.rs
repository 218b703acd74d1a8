//! Polynomial automata, their correspondence with word automata under
//! reversal, and zeroness/equivalence over the rationals.

use std::collections::VecDeque;
use std::fmt;

use crate::error::{Error, Result};
use crate::groebner::{Budget, GroebnerBasis};
use crate::polynomial::Polynomial;
use crate::semiring::{Semiring, Value};
use crate::wafa::Wafa;
use crate::words::{check_distinct, letter_index, reversed, Word};

/// Default step budget for the decision procedures.
pub const DEFAULT_BUDGET: u64 = 100_000;

/// A polynomial automaton: registers start at `alpha`, each letter `a`
/// replaces the register vector `x` by `p(a)(x)`, and the output is
/// `gamma` of the final vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pa {
    ring: Semiring,
    registers: Vec<String>,
    alphabet: Vec<String>,
    alpha: Vec<Value>,
    /// `updates[a][i]`, the new value of register `i` on letter `a`.
    updates: Vec<Vec<Polynomial>>,
    gamma: Polynomial,
}

impl Pa {
    pub fn new(
        ring: Semiring,
        registers: Vec<String>,
        alphabet: Vec<String>,
        alpha: Vec<Value>,
        updates: Vec<Vec<Polynomial>>,
        gamma: Polynomial,
    ) -> Result<Self> {
        check_distinct(&registers, "register")?;
        check_distinct(&alphabet, "letter")?;
        let n = registers.len();
        if alpha.len() != n {
            return Err(Error::ArityMismatch {
                expected: n,
                found: alpha.len(),
            });
        }
        if updates.len() != alphabet.len() {
            return Err(Error::ArityMismatch {
                expected: alphabet.len(),
                found: updates.len(),
            });
        }
        for v in &alpha {
            ring.check(v)?;
        }
        for p in updates.iter().flatten().chain([&gamma]) {
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
        }
        for row in &updates {
            if row.len() != n {
                return Err(Error::ArityMismatch {
                    expected: n,
                    found: row.len(),
                });
            }
        }
        Ok(Pa {
            ring,
            registers,
            alphabet,
            alpha,
            updates,
            gamma,
        })
    }

    pub fn ring(&self) -> &Semiring {
        &self.ring
    }

    pub fn registers(&self) -> &[String] {
        &self.registers
    }

    pub fn num_registers(&self) -> usize {
        self.registers.len()
    }

    pub fn alphabet(&self) -> &[String] {
        &self.alphabet
    }

    pub fn alpha(&self) -> &[Value] {
        &self.alpha
    }

    /// `p(a)` by letter index.
    pub fn update(&self, a: usize) -> &[Polynomial] {
        &self.updates[a]
    }

    pub fn gamma(&self) -> &Polynomial {
        &self.gamma
    }

    pub fn format_poly(&self, p: &Polynomial) -> String {
        p.format_with(&self.ring, &self.registers)
    }

    /// The register vector after reading `w` from left to right.
    pub fn registers_after(&self, w: &[String]) -> Result<Vec<Value>> {
        let idx = letter_index(&self.alphabet);
        let mut x = self.alpha.clone();
        for a in w {
            let ai = *idx
                .get(a.as_str())
                .ok_or_else(|| Error::UnknownLetter(a.clone()))?;
            x = self.updates[ai]
                .iter()
                .map(|p| p.eval(&x))
                .collect::<Result<_>>()?;
        }
        Ok(x)
    }

    /// `⟦A⟧(w) = γ([A](w))`.
    pub fn behavior(&self, w: &[String]) -> Result<Value> {
        self.gamma.eval(&self.registers_after(w)?)
    }

    /// The automaton whose registers are those of `self` followed by those
    /// of `other` and whose output is `γ_self - γ_other`. Letters of
    /// `other` are matched by name.
    pub fn difference(&self, other: &Pa) -> Result<Pa> {
        if self.ring != other.ring {
            return Err(Error::CarrierMismatch {
                expected: self.ring.to_string(),
                found: other.ring.to_string(),
            });
        }
        let mut mine = self.alphabet.clone();
        let mut theirs = other.alphabet.clone();
        mine.sort();
        theirs.sort();
        if mine != theirs {
            return Err(Error::InvalidAutomaton(
                "automata over different alphabets".into(),
            ));
        }
        let (n, m) = (self.num_registers(), other.num_registers());
        let mut registers: Vec<String> = self.registers.iter().map(|r| format!("A.{r}")).collect();
        registers.extend(other.registers.iter().map(|r| format!("B.{r}")));
        let mut alpha = self.alpha.clone();
        alpha.extend(other.alpha.iter().cloned());
        let other_idx = letter_index(&other.alphabet);
        let mut updates = Vec::with_capacity(self.alphabet.len());
        for (ai, a) in self.alphabet.iter().enumerate() {
            let bi = other_idx[a.as_str()];
            let mut row = Vec::with_capacity(n + m);
            for p in &self.updates[ai] {
                row.push(p.remap_vars(n + m, |v| v)?);
            }
            for p in &other.updates[bi] {
                row.push(p.remap_vars(n + m, |v| v + n)?);
            }
            updates.push(row);
        }
        let gamma = self
            .gamma
            .remap_vars(n + m, |v| v)?
            .sub(&other.gamma.remap_vars(n + m, |v| v + n)?)?;
        Pa::new(
            self.ring.clone(),
            registers,
            self.alphabet.clone(),
            alpha,
            updates,
            gamma,
        )
    }

    /// An automaton with the same behavior and no irrelevant registers:
    /// registers the output cannot depend on are dropped, and registers
    /// that provably keep their initial value on every letter are replaced
    /// by that value. Repeats until nothing changes.
    pub fn simplify(&self) -> Result<Pa> {
        let mut current = self.clone();
        loop {
            let next = current.simplify_once()?;
            if next.num_registers() == current.num_registers() {
                return Ok(next);
            }
            current = next;
        }
    }

    fn simplify_once(&self) -> Result<Pa> {
        let n = self.num_registers();
        let uses = |p: &Polynomial| -> Vec<usize> {
            let mut vs: Vec<usize> = p.monomials().iter().flat_map(|m| m.exps.iter().map(|(v, _)| v)).collect();
            vs.sort_unstable();
            vs.dedup();
            vs
        };
        let mut live = vec![false; n];
        let mut stack = uses(&self.gamma);
        while let Some(i) = stack.pop() {
            if !live[i] {
                live[i] = true;
                for row in &self.updates {
                    stack.extend(uses(&row[i]));
                }
            }
        }
        // Greatest set of registers that, while all of them hold their
        // initial values, are mapped back to those values by every letter.
        let mut fixed = live.clone();
        let mut changed = true;
        while changed {
            changed = false;
            for i in 0..n {
                if !fixed[i] {
                    continue;
                }
                let stays = self.updates.iter().try_fold(true, |ok, row| -> Result<bool> {
                    Ok(ok
                        && uses(&row[i]).iter().all(|&j| fixed[j])
                        && row[i].eval(&self.alpha)? == self.alpha[i])
                })?;
                if !stays {
                    fixed[i] = false;
                    changed = true;
                }
            }
        }
        let kept: Vec<usize> = (0..n).filter(|&i| live[i] && !fixed[i]).collect();
        let m = kept.len();
        let mut subs = Vec::with_capacity(n);
        let mut next = 0;
        for i in 0..n {
            subs.push(if live[i] && !fixed[i] {
                next += 1;
                Polynomial::var(self.ring.clone(), m, next - 1)?
            } else if fixed[i] {
                Polynomial::constant(self.ring.clone(), m, self.alpha[i].clone())
            } else {
                Polynomial::zero(self.ring.clone(), m)
            });
        }
        let updates = self
            .updates
            .iter()
            .map(|row| kept.iter().map(|&i| row[i].substitute(&subs, m)).collect())
            .collect::<Result<_>>()?;
        Pa::new(
            self.ring.clone(),
            kept.iter().map(|&i| self.registers[i].clone()).collect(),
            self.alphabet.clone(),
            kept.iter().map(|&i| self.alpha[i].clone()).collect(),
            updates,
            self.gamma.substitute(&subs, m)?,
        )
    }
}

impl fmt::Display for Pa {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ring: {}", self.ring)?;
        writeln!(f, "registers: {}", self.registers.join(", "))?;
        writeln!(f, "alphabet: {}", self.alphabet.join(", "))?;
        let alpha: Vec<String> = self.alpha.iter().map(|v| self.ring.format_value(v)).collect();
        writeln!(f, "alpha = ({})", alpha.join(", "))?;
        for (a, row) in self.alphabet.iter().zip(&self.updates) {
            let ps: Vec<String> = row.iter().map(|p| self.format_poly(p)).collect();
            writeln!(f, "p({a}) = ({})", ps.join(", "))?;
        }
        writeln!(f, "gamma = {}", self.format_poly(&self.gamma))
    }
}

/// The polynomial automaton of the reversed behavior: registers are the
/// states, `α = τ`, `p_i(a) = δ(q_i, a)` and `γ = P0`.
pub fn wafa_to_pa(a: &Wafa) -> Result<Pa> {
    let updates = (0..a.alphabet().len())
        .map(|ai| (0..a.num_states()).map(|q| a.delta(q, ai).clone()).collect())
        .collect();
    Pa::new(
        a.ring().clone(),
        a.states().to_vec(),
        a.alphabet().to_vec(),
        a.tau().to_vec(),
        updates,
        a.p0().clone(),
    )
}

/// The inverse of [`wafa_to_pa`].
pub fn pa_to_wafa(b: &Pa) -> Result<Wafa> {
    let delta = (0..b.num_registers())
        .map(|i| (0..b.alphabet.len()).map(|ai| b.updates[ai][i].clone()).collect())
        .collect();
    Wafa::new(
        b.ring.clone(),
        b.registers.clone(),
        b.alphabet.clone(),
        b.gamma.clone(),
        delta,
        b.alpha.clone(),
    )
}

/// Outcome of a zeroness check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Zero,
    /// A word with a nonzero value, and that value.
    NonZero { witness: Word, value: Value },
    /// The step budget ran out before the ideal chain stabilized.
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZeronessReport {
    pub verdict: Verdict,
    /// Size of the reduced basis of the last ideal in the chain.
    pub basis_size: usize,
    /// Length of the longest word whose polynomial entered the chain.
    pub chain_depth: usize,
    pub steps: u64,
}

impl ZeronessReport {
    pub fn is_zero(&self) -> bool {
        self.verdict == Verdict::Zero
    }
}

fn require_rational(ring: &Semiring) -> Result<()> {
    if ring != &Semiring::Rational {
        return Err(Error::UnsupportedCarrier(format!(
            "zeroness is decided over the rationals, found {ring}"
        )));
    }
    Ok(())
}

/// Decides whether `⟦A⟧(w) = 0` for every word.
///
/// Every word `u` has a polynomial `g_u` with `g_u(α) = ⟦A⟧(u)`:
/// `g_ε = γ` and `g_{au} = g_u ∘ p(a)`. The ideal generated by all `g_u`
/// is built breadth-first, keeping only polynomials not already in the
/// ideal; once no letter produces a new one the ideal is closed under every
/// `∘ p(a)`, so the behavior is zero iff every kept generator vanishes at
/// `α`.
///
/// The chain runs on [`Pa::simplify`]'s output, which has the same
/// behavior and usually far fewer registers.
pub fn pa_zeroness(a: &Pa, budget: u64) -> Result<ZeronessReport> {
    require_rational(&a.ring)?;
    let a = &a.simplify()?;
    let n = a.num_registers();
    let mut budget = Budget::new(budget);
    let mut basis = GroebnerBasis::empty(n);
    let mut depth = 0;
    let report = |verdict, basis: &GroebnerBasis, depth, budget: &Budget| ZeronessReport {
        verdict,
        basis_size: basis.len(),
        chain_depth: depth,
        steps: budget.spent(),
    };

    let at_alpha = a.gamma.eval(&a.alpha)?;
    if !at_alpha.is_zero() {
        let verdict = Verdict::NonZero {
            witness: Vec::new(),
            value: at_alpha,
        };
        return Ok(report(verdict, &basis, depth, &budget));
    }
    let mut queue: VecDeque<(Polynomial, Word)> = VecDeque::new();
    match basis.insert(&a.gamma, &mut budget) {
        Ok(true) => queue.push_back((a.gamma.clone(), Vec::new())),
        Ok(false) => {}
        Err(Error::ResourceLimit(_)) => return Ok(report(Verdict::Unknown, &basis, depth, &budget)),
        Err(e) => return Err(e),
    }
    while let Some((g, u)) = queue.pop_front() {
        for (ai, letter) in a.alphabet.iter().enumerate() {
            if budget.tick().is_err() {
                return Ok(report(Verdict::Unknown, &basis, depth, &budget));
            }
            let next = g.substitute(&a.updates[ai], n)?;
            let mut word = vec![letter.clone()];
            word.extend(u.iter().cloned());
            let value = next.eval(&a.alpha)?;
            if !value.is_zero() {
                let verdict = Verdict::NonZero {
                    witness: word,
                    value,
                };
                return Ok(report(verdict, &basis, depth, &budget));
            }
            match basis.insert(&next, &mut budget) {
                Ok(true) => {
                    depth = depth.max(word.len());
                    queue.push_back((next, word));
                }
                Ok(false) => {}
                Err(Error::ResourceLimit(_)) => {
                    return Ok(report(Verdict::Unknown, &basis, depth, &budget))
                }
                Err(e) => return Err(e),
            }
        }
    }
    Ok(report(Verdict::Zero, &basis, depth, &budget))
}

/// Decides `⟦A⟧ = ⟦B⟧` through the zeroness of their difference. A
/// nonzero witness is a word on which the two differ.
pub fn pa_equivalence(a: &Pa, b: &Pa, budget: u64) -> Result<ZeronessReport> {
    require_rational(&a.ring)?;
    pa_zeroness(&a.difference(b)?, budget)
}

/// Zeroness of a word automaton via its reversed polynomial automaton. The
/// witness is reported in the word automaton's reading order.
pub fn wafa_zeroness(a: &Wafa, budget: u64) -> Result<ZeronessReport> {
    let mut report = pa_zeroness(&wafa_to_pa(a)?, budget)?;
    unreverse(&mut report);
    Ok(report)
}

pub fn wafa_equivalence(a: &Wafa, b: &Wafa, budget: u64) -> Result<ZeronessReport> {
    let mut report = pa_equivalence(&wafa_to_pa(a)?, &wafa_to_pa(b)?, budget)?;
    unreverse(&mut report);
    Ok(report)
}

fn unreverse(report: &mut ZeronessReport) {
    if let Verdict::NonZero { witness, .. } = &mut report.verdict {
        *witness = reversed(witness);
    }
}
