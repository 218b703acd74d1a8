//! Sparse multivariate polynomials over a [`Semiring`].
//!
//! Polynomials are kept in normal form: monomials are stored in descending
//! graded lexicographic order of their exponent vectors, no two monomials
//! share an exponent vector and no stored coefficient is zero. Variable
//! indices are 0-based in the API; serialized documents use 1-based indices.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::semiring::{Semiring, Value};

/// Sparse exponent vector: `(variable, exponent)` pairs sorted by variable,
/// every exponent at least one.
///
/// The `Ord` instance is the graded lexicographic order with
/// `x_1 > x_2 > ... > x_n`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Exponents(Vec<(usize, u32)>);

impl Exponents {
    pub fn one() -> Self {
        Exponents(Vec::new())
    }

    pub fn var(i: usize) -> Self {
        Exponents(vec![(i, 1)])
    }

    /// Builds an exponent vector from arbitrary pairs; repeated variables are
    /// multiplied together and zero exponents dropped.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (usize, u32)>) -> Result<Self> {
        let mut map: BTreeMap<usize, u32> = BTreeMap::new();
        for (v, e) in pairs {
            let slot = map.entry(v).or_insert(0);
            *slot = slot.checked_add(e).ok_or(Error::ExponentOverflow)?;
        }
        Ok(Exponents(map.into_iter().filter(|&(_, e)| e > 0).collect()))
    }

    /// Exponent vector from a dense list.
    pub fn from_dense(dense: &[u32]) -> Self {
        Exponents(
            dense
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| (i, e))
                .collect(),
        )
    }

    pub fn to_dense(&self, nvars: usize) -> Vec<u32> {
        let mut dense = vec![0; nvars];
        for &(v, e) in &self.0 {
            dense[v] = e;
        }
        dense
    }

    pub fn degree(&self) -> u64 {
        self.0.iter().map(|&(_, e)| e as u64).sum()
    }

    pub fn get(&self, var: usize) -> u32 {
        self.0
            .binary_search_by_key(&var, |&(v, _)| v)
            .map(|i| self.0[i].1)
            .unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, u32)> + '_ {
        self.0.iter().copied()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn max_var(&self) -> Option<usize> {
        self.0.last().map(|&(v, _)| v)
    }

    pub fn mul(&self, other: &Exponents) -> Result<Exponents> {
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() || j < other.0.len() {
            match (self.0.get(i), other.0.get(j)) {
                (Some(&(va, ea)), Some(&(vb, eb))) if va == vb => {
                    out.push((va, ea.checked_add(eb).ok_or(Error::ExponentOverflow)?));
                    i += 1;
                    j += 1;
                }
                (Some(&(va, ea)), Some(&(vb, _))) if va < vb => {
                    out.push((va, ea));
                    i += 1;
                }
                (Some(&a), None) => {
                    out.push(a);
                    i += 1;
                }
                (_, Some(&b)) => {
                    out.push(b);
                    j += 1;
                }
                (None, None) => unreachable!(),
            }
        }
        Ok(Exponents(out))
    }

    /// Renames variables through `map`, merging collisions.
    pub fn remap(&self, map: impl Fn(usize) -> usize) -> Result<Exponents> {
        Exponents::from_pairs(self.0.iter().map(|&(v, e)| (map(v), e)))
    }

    /// The states of a monomial listed with multiplicity in ascending
    /// variable order, e.g. `q1^2 q3` gives `[0, 0, 2]`.
    pub fn expand(&self) -> Vec<usize> {
        self.0
            .iter()
            .flat_map(|&(v, e)| std::iter::repeat(v).take(e as usize))
            .collect()
    }

    fn lex_cmp(&self, other: &Exponents) -> Ordering {
        let (mut i, mut j) = (0, 0);
        loop {
            match (self.0.get(i), other.0.get(j)) {
                (None, None) => return Ordering::Equal,
                (Some(_), None) => return Ordering::Greater,
                (None, Some(_)) => return Ordering::Less,
                (Some(&(va, ea)), Some(&(vb, eb))) => {
                    if va < vb {
                        return Ordering::Greater;
                    }
                    if vb < va {
                        return Ordering::Less;
                    }
                    if ea != eb {
                        return ea.cmp(&eb);
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
    }
}

impl Ord for Exponents {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.lex_cmp(other))
    }
}

impl PartialOrd for Exponents {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A coefficient together with its exponent vector.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial {
    pub coeff: Value,
    pub exps: Exponents,
}

impl Monomial {
    pub fn degree(&self) -> u64 {
        self.exps.degree()
    }

    pub fn is_proper(&self) -> bool {
        self.degree() > 0
    }
}

/// Shape information about a polynomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Classification {
    /// Total degree of the polynomial (0 for the zero polynomial).
    pub degree: u64,
    /// Smallest total degree among the monomials (0 for the zero polynomial).
    pub min_monomial_degree: u64,
    /// The value at the all-zero point.
    pub constant_term: Value,
    /// No constant term, i.e. a sum of proper monomials.
    pub is_proper_sum: bool,
    /// Every monomial has degree exactly one.
    pub is_linear_form: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Polynomial {
    ring: Semiring,
    nvars: usize,
    terms: Vec<Monomial>,
}

impl Polynomial {
    pub fn zero(ring: Semiring, nvars: usize) -> Self {
        Polynomial {
            ring,
            nvars,
            terms: Vec::new(),
        }
    }

    pub fn one(ring: Semiring, nvars: usize) -> Self {
        let one = ring.one();
        Self::constant(ring, nvars, one)
    }

    pub fn constant(ring: Semiring, nvars: usize, c: Value) -> Self {
        let terms = if c.is_zero() {
            Vec::new()
        } else {
            vec![Monomial {
                coeff: c,
                exps: Exponents::one(),
            }]
        };
        Polynomial { ring, nvars, terms }
    }

    pub fn var(ring: Semiring, nvars: usize, i: usize) -> Result<Self> {
        if i >= nvars {
            return Err(Error::VariableOutOfRange { index: i, nvars });
        }
        let one = ring.one();
        Ok(Polynomial {
            ring,
            nvars,
            terms: vec![Monomial {
                coeff: one,
                exps: Exponents::var(i),
            }],
        })
    }

    /// A single monomial `coeff * exps`.
    pub fn monomial(ring: Semiring, nvars: usize, coeff: Value, exps: Exponents) -> Result<Self> {
        Self::from_terms(ring, nvars, [(coeff, exps)])
    }

    /// Normalizes an arbitrary list of terms.
    pub fn from_terms(
        ring: Semiring,
        nvars: usize,
        terms: impl IntoIterator<Item = (Value, Exponents)>,
    ) -> Result<Self> {
        let mut acc: BTreeMap<Exponents, Value> = BTreeMap::new();
        for (coeff, exps) in terms {
            ring.check(&coeff)?;
            if let Some(v) = exps.max_var() {
                if v >= nvars {
                    return Err(Error::VariableOutOfRange { index: v, nvars });
                }
            }
            accumulate(&ring, &mut acc, exps, coeff)?;
        }
        Ok(Self::from_map(ring, nvars, acc))
    }

    fn from_map(ring: Semiring, nvars: usize, acc: BTreeMap<Exponents, Value>) -> Self {
        let terms = acc
            .into_iter()
            .rev()
            .filter(|(_, c)| !c.is_zero())
            .map(|(exps, coeff)| Monomial { coeff, exps })
            .collect();
        Polynomial { ring, nvars, terms }
    }

    pub fn ring(&self) -> &Semiring {
        &self.ring
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    /// The normal-form monomials, leading monomial first.
    pub fn monomials(&self) -> &[Monomial] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].exps.is_one() && self.terms[0].coeff.is_one()
    }

    /// Whether the polynomial is exactly the indeterminate `x_i`.
    pub fn is_var(&self, i: usize) -> bool {
        self.terms.len() == 1 && self.terms[0].coeff.is_one() && self.terms[0].exps == Exponents::var(i)
    }

    pub fn degree(&self) -> u64 {
        self.terms.iter().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn constant_term(&self) -> Value {
        self.terms
            .iter()
            .find(|m| m.exps.is_one())
            .map(|m| m.coeff.clone())
            .unwrap_or_else(|| self.ring.zero())
    }

    pub fn classify(&self) -> Classification {
        let constant_term = self.constant_term();
        Classification {
            degree: self.degree(),
            min_monomial_degree: self.terms.iter().map(Monomial::degree).min().unwrap_or(0),
            is_proper_sum: constant_term.is_zero(),
            is_linear_form: self.terms.iter().all(|m| m.degree() == 1),
            constant_term,
        }
    }

    fn check_compatible(&self, other: &Polynomial) -> Result<()> {
        if self.ring != other.ring {
            return Err(Error::CarrierMismatch {
                expected: self.ring.to_string(),
                found: other.ring.to_string(),
            });
        }
        if self.nvars != other.nvars {
            return Err(Error::ArityMismatch {
                expected: self.nvars,
                found: other.nvars,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_compatible(other)?;
        let mut acc: BTreeMap<Exponents, Value> = BTreeMap::new();
        for m in self.terms.iter().chain(&other.terms) {
            accumulate(&self.ring, &mut acc, m.exps.clone(), m.coeff.clone())?;
        }
        Ok(Self::from_map(self.ring.clone(), self.nvars, acc))
    }

    pub fn mul(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_compatible(other)?;
        let mut acc: BTreeMap<Exponents, Value> = BTreeMap::new();
        for a in &self.terms {
            for b in &other.terms {
                let c = self.ring.mul(&a.coeff, &b.coeff)?;
                accumulate(&self.ring, &mut acc, a.exps.mul(&b.exps)?, c)?;
            }
        }
        Ok(Self::from_map(self.ring.clone(), self.nvars, acc))
    }

    pub fn scale(&self, c: &Value) -> Result<Polynomial> {
        self.ring.check(c)?;
        let terms = self
            .terms
            .iter()
            .map(|m| Ok((self.ring.mul(&m.coeff, c)?, m.exps.clone())))
            .collect::<Result<Vec<_>>>()?;
        Self::from_terms(self.ring.clone(), self.nvars, terms)
    }

    pub fn pow(&self, mut exp: u32) -> Result<Polynomial> {
        let mut base = self.clone();
        let mut acc = Polynomial::one(self.ring.clone(), self.nvars);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            exp >>= 1;
            if exp > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(acc)
    }

    pub fn neg(&self) -> Result<Polynomial> {
        let terms = self
            .terms
            .iter()
            .map(|m| Ok((self.ring.neg(&m.coeff)?, m.exps.clone())))
            .collect::<Result<Vec<_>>>()?;
        Self::from_terms(self.ring.clone(), self.nvars, terms)
    }

    pub fn sub(&self, other: &Polynomial) -> Result<Polynomial> {
        self.add(&other.neg()?)
    }

    /// Simultaneous substitution `p<subs[0], ..., subs[n-1]>`. The result
    /// lives in `target_nvars` variables; every substitute must too.
    pub fn substitute(&self, subs: &[Polynomial], target_nvars: usize) -> Result<Polynomial> {
        if subs.len() != self.nvars {
            return Err(Error::ArityMismatch {
                expected: self.nvars,
                found: subs.len(),
            });
        }
        for s in subs {
            if s.ring != self.ring {
                return Err(Error::CarrierMismatch {
                    expected: self.ring.to_string(),
                    found: s.ring.to_string(),
                });
            }
            if s.nvars != target_nvars {
                return Err(Error::ArityMismatch {
                    expected: target_nvars,
                    found: s.nvars,
                });
            }
        }
        let mut powers: BTreeMap<(usize, u32), Polynomial> = BTreeMap::new();
        let mut result = Polynomial::zero(self.ring.clone(), target_nvars);
        for m in &self.terms {
            let mut term = Polynomial::constant(self.ring.clone(), target_nvars, m.coeff.clone());
            for (v, e) in m.exps.iter() {
                let power = match powers.get(&(v, e)) {
                    Some(p) => p.clone(),
                    None => {
                        let p = subs[v].pow(e)?;
                        powers.insert((v, e), p.clone());
                        p
                    }
                };
                term = term.mul(&power)?;
                if term.is_zero() {
                    break;
                }
            }
            result = result.add(&term)?;
        }
        Ok(result)
    }

    /// Evaluates at a point of the coefficient carrier.
    pub fn eval(&self, point: &[Value]) -> Result<Value> {
        if point.len() != self.nvars {
            return Err(Error::ArityMismatch {
                expected: self.nvars,
                found: point.len(),
            });
        }
        let ring = &self.ring;
        let mut total = ring.zero();
        for m in &self.terms {
            let mut term = m.coeff.clone();
            for (v, e) in m.exps.iter() {
                if term.is_zero() {
                    break;
                }
                term = ring.mul(&term, &ring.pow(&point[v], e)?)?;
            }
            total = ring.add(&total, &term)?;
        }
        Ok(total)
    }

    /// Re-embeds into `nvars` variables, renaming variable `v` to `map(v)`.
    pub fn remap_vars(&self, nvars: usize, map: impl Fn(usize) -> usize) -> Result<Polynomial> {
        let terms = self
            .terms
            .iter()
            .map(|m| Ok((m.coeff.clone(), m.exps.remap(&map)?)))
            .collect::<Result<Vec<_>>>()?;
        Self::from_terms(self.ring.clone(), nvars, terms)
    }

    /// Maps every coefficient into another carrier.
    pub fn map_coefficients(
        &self,
        ring: &Semiring,
        f: impl Fn(&Value) -> Result<Value>,
    ) -> Result<Polynomial> {
        let terms = self
            .terms
            .iter()
            .map(|m| Ok((f(&m.coeff)?, m.exps.clone())))
            .collect::<Result<Vec<_>>>()?;
        Self::from_terms(ring.clone(), self.nvars, terms)
    }

    /// Renders with the given variable names; coefficients are rendered in
    /// the syntax of `coeff_ring`.
    pub fn format_with(&self, coeff_ring: &Semiring, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (idx, m) in self.terms.iter().enumerate() {
            let mut coeff = m.coeff.clone();
            if idx > 0 {
                if coeff.is_negative() {
                    out.push_str(" - ");
                    coeff = coeff_ring.neg(&coeff).unwrap_or(coeff);
                } else {
                    out.push_str(" + ");
                }
            }
            let factors: Vec<String> = m
                .exps
                .iter()
                .map(|(v, e)| {
                    let name = names.get(v).cloned().unwrap_or_else(|| format!("x{}", v + 1));
                    if e == 1 {
                        name
                    } else {
                        format!("{name}^{e}")
                    }
                })
                .collect();
            let coeff_text = coeff_ring.format_value(&coeff);
            let coeff_text = if matches!(coeff, Value::Poly(ref p) if p.monomials().len() > 1) {
                format!("({coeff_text})")
            } else {
                coeff_text
            };
            if factors.is_empty() {
                out.push_str(&coeff_text);
            } else if coeff.is_one() {
                out.push_str(&factors.join("*"));
            } else if coeff_text == "-1" {
                out.push('-');
                out.push_str(&factors.join("*"));
            } else {
                out.push_str(&coeff_text);
                out.push('*');
                out.push_str(&factors.join("*"));
            }
        }
        out
    }
}

fn accumulate(
    ring: &Semiring,
    acc: &mut BTreeMap<Exponents, Value>,
    exps: Exponents,
    coeff: Value,
) -> Result<()> {
    if coeff.is_zero() {
        return Ok(());
    }
    match acc.get_mut(&exps) {
        Some(slot) => *slot = ring.add(slot, &coeff)?,
        None => {
            acc.insert(exps, coeff);
        }
    }
    Ok(())
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (1..=self.nvars).map(|i| format!("x{i}")).collect();
        f.write_str(&self.format_with(&self.ring, &names))
    }
}

impl Polynomial {
    /// Parses infix syntax such as `2*q^2 + p*h - 1/2`. `names[i]` names
    /// variable `i`; numerals are carrier values, and in a polynomial
    /// carrier the carrier's own indeterminates denote coefficients.
    /// Names may be single-quoted.
    pub fn parse(ring: &Semiring, names: &[String], text: &str) -> Result<Polynomial> {
        let mut p = PolyParser {
            ring,
            names,
            chars: text.chars().collect(),
            pos: 0,
        };
        let out = p.expr()?;
        p.skip_ws();
        if p.pos != p.chars.len() {
            return Err(p.error("trailing input"));
        }
        Ok(out)
    }
}

struct PolyParser<'a> {
    ring: &'a Semiring,
    names: &'a [String],
    chars: Vec<char>,
    pos: usize,
}

impl PolyParser<'_> {
    fn error(&self, msg: &str) -> Error {
        let text: String = self.chars.iter().collect();
        Error::Parse(format!("{msg} at offset {} in `{text}`", self.pos))
    }

    fn skip_ws(&mut self) {
        while self.chars.get(self.pos).is_some_and(|c| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<Polynomial> {
        let mut acc = if self.peek() == Some('-') {
            self.pos += 1;
            self.term()?.neg()?
        } else {
            self.term()?
        };
        loop {
            match self.peek() {
                Some('+') => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?)?;
                }
                Some('-') => {
                    self.pos += 1;
                    acc = acc.sub(&self.term()?)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Polynomial> {
        let mut acc = self.power()?;
        while self.peek() == Some('*') {
            self.pos += 1;
            acc = acc.mul(&self.power()?)?;
        }
        Ok(acc)
    }

    fn power(&mut self) -> Result<Polynomial> {
        let base = self.atom()?;
        if self.peek() != Some('^') {
            return Ok(base);
        }
        self.pos += 1;
        self.skip_ws();
        let start = self.pos;
        while self.chars.get(self.pos).is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        let digits: String = self.chars[start..self.pos].iter().collect();
        let exp: u32 = digits.parse().map_err(|_| self.error("expected an exponent"))?;
        base.pow(exp)
    }

    fn atom(&mut self) -> Result<Polynomial> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(')') {
                    return Err(self.error("expected `)`"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self
                    .chars
                    .get(self.pos)
                    .is_some_and(|c| c.is_ascii_digit() || *c == '/')
                {
                    self.pos += 1;
                }
                let lit: String = self.chars[start..self.pos].iter().collect();
                let v = self.ring.parse_value(&lit)?;
                Ok(Polynomial::constant(self.ring.clone(), self.names.len(), v))
            }
            Some('\'') => {
                self.pos += 1;
                let start = self.pos;
                while self.chars.get(self.pos).is_some_and(|c| *c != '\'') {
                    self.pos += 1;
                }
                if self.pos == self.chars.len() {
                    return Err(self.error("unterminated quote"));
                }
                let name: String = self.chars[start..self.pos].iter().collect();
                self.pos += 1;
                self.name(&name)
            }
            Some(c) if c.is_alphabetic() || c == '_' => {
                let start = self.pos;
                while self
                    .chars
                    .get(self.pos)
                    .is_some_and(|c| c.is_alphanumeric() || *c == '_')
                {
                    self.pos += 1;
                }
                let name: String = self.chars[start..self.pos].iter().collect();
                self.name(&name)
            }
            _ => Err(self.error("expected a term")),
        }
    }

    fn name(&self, name: &str) -> Result<Polynomial> {
        if let Some(i) = self.names.iter().position(|n| n == name) {
            return Polynomial::var(self.ring.clone(), self.names.len(), i);
        }
        if let Semiring::Polynomial { vars, .. } = self.ring {
            if let Some(i) = vars.iter().position(|v| v == name) {
                let x = self.ring.indeterminate(i)?;
                return Ok(Polynomial::constant(self.ring.clone(), self.names.len(), x));
            }
        }
        Err(Error::Parse(format!("unknown name `{name}`")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn nat(n: u64) -> Value {
        Semiring::Natural.from_u64(n)
    }

    fn poly(ring: &Semiring, nvars: usize, terms: &[(u64, &[(usize, u32)])]) -> Polynomial {
        Polynomial::from_terms(
            ring.clone(),
            nvars,
            terms
                .iter()
                .map(|&(c, e)| (ring.from_u64(c), Exponents::from_pairs(e.iter().copied()).unwrap())),
        )
        .unwrap()
    }

    #[test]
    fn addition_combines_coefficients() {
        let n = Semiring::Natural;
        let p = poly(&n, 2, &[(1, &[(0, 1)]), (1, &[(1, 1)])]);
        let q = poly(&n, 2, &[(1, &[(1, 1)])]);
        assert_eq!(p.add(&q).unwrap(), poly(&n, 2, &[(1, &[(0, 1)]), (2, &[(1, 1)])]));
        assert_eq!(p.add(&Polynomial::zero(n.clone(), 2)).unwrap(), p);
        let b = Semiring::Boolean;
        let x = poly(&b, 1, &[(1, &[(0, 1)])]);
        assert_eq!(x.add(&x).unwrap(), x);
    }

    #[test]
    fn multiplication() {
        let n = Semiring::Natural;
        let p = poly(&n, 2, &[(1, &[(0, 1)]), (1, &[(1, 1)])]);
        let x2 = poly(&n, 2, &[(1, &[(1, 1)])]);
        let expected = poly(&n, 2, &[(1, &[(0, 1), (1, 1)]), (1, &[(1, 2)])]);
        assert_eq!(p.mul(&x2).unwrap(), expected);
        assert_eq!(p.mul(&Polynomial::one(n.clone(), 2)).unwrap(), p);
        let q = Semiring::Rational;
        let a = poly(&q, 1, &[(2, &[(0, 1)])]);
        let b = poly(&q, 1, &[(3, &[(0, 1)])]);
        assert_eq!(a.mul(&b).unwrap(), poly(&q, 1, &[(6, &[(0, 2)])]));
    }

    #[test]
    fn substitution_follows_the_derivation_on_aba() {
        // Variables (q, p); substitution q <- q + p, p <- p.
        let n = Semiring::Natural;
        let q = poly(&n, 2, &[(1, &[(0, 1)])]);
        let qp = poly(&n, 2, &[(1, &[(0, 1)]), (1, &[(1, 1)])]);
        let p = poly(&n, 2, &[(1, &[(1, 1)])]);
        let subs = [qp.clone(), p.clone()];
        assert_eq!(q.substitute(&subs, 2).unwrap(), qp);
        let before = poly(&n, 2, &[(1, &[(0, 1), (1, 1)]), (1, &[(0, 1)])]);
        let after = before.substitute(&subs, 2).unwrap();
        let expected = poly(
            &n,
            2,
            &[(1, &[(0, 1), (1, 1)]), (1, &[(1, 2)]), (1, &[(0, 1)]), (1, &[(1, 1)])],
        );
        assert_eq!(after, expected);
        assert_eq!(after.monomials().len(), 4);
        assert_eq!(after.format_with(&n, &["q".into(), "p".into()]), "q*p + p^2 + q + p");
    }

    #[test]
    fn substitution_of_powers() {
        let n = Semiring::Natural;
        let x1sq = poly(&n, 1, &[(1, &[(0, 2)])]);
        let two_x2 = poly(&n, 2, &[(2, &[(1, 1)])]);
        assert_eq!(
            x1sq.substitute(&[two_x2], 2).unwrap(),
            poly(&n, 2, &[(4, &[(1, 2)])])
        );
        let err = x1sq.substitute(&[], 2).unwrap_err();
        assert!(matches!(err, Error::ArityMismatch { .. }));
    }

    #[test]
    fn evaluation() {
        let n = Semiring::Natural;
        let qsq = poly(&n, 2, &[(1, &[(0, 2)])]);
        assert_eq!(qsq.eval(&[nat(2), nat(7)]).unwrap(), nat(4));
        let two_p = poly(&n, 2, &[(2, &[(1, 1)])]);
        assert_eq!(two_p.eval(&[nat(1), nat(1)]).unwrap(), nat(2));
        assert!(Polynomial::zero(n.clone(), 2).eval(&[nat(3), nat(9)]).unwrap().is_zero());
    }

    #[test]
    fn monomials_and_classification() {
        let n = Semiring::Natural;
        assert!(Polynomial::zero(n.clone(), 2).monomials().is_empty());
        let m = poly(&n, 1, &[(2, &[(0, 3)])]);
        assert_eq!(m.monomials().len(), 1);
        assert_eq!(m.monomials()[0].degree(), 3);
        assert_eq!(m.monomials()[0].coeff, nat(2));

        let qsq = poly(&n, 2, &[(1, &[(0, 2)])]).classify();
        assert_eq!(qsq.degree, 2);
        assert!(qsq.constant_term.is_zero());
        assert!(qsq.is_proper_sum);
        assert!(!qsq.is_linear_form);

        let two_p = poly(&n, 2, &[(2, &[(1, 1)])]).classify();
        assert_eq!(two_p.degree, 1);
        assert!(two_p.is_proper_sum && two_p.is_linear_form);

        let three = poly(&n, 2, &[(3, &[])]).classify();
        assert_eq!(three.constant_term, nat(3));
        assert!(!three.is_proper_sum);
    }

    #[test]
    fn grlex_storage_order() {
        let n = Semiring::Natural;
        let p = poly(&n, 2, &[(1, &[]), (1, &[(1, 1)]), (1, &[(0, 1)]), (1, &[(1, 2)])]);
        let degs: Vec<_> = p.monomials().iter().map(|m| m.exps.clone()).collect();
        assert_eq!(
            degs,
            vec![
                Exponents::from_pairs([(1, 2)]).unwrap(),
                Exponents::var(0),
                Exponents::var(1),
                Exponents::one()
            ]
        );
    }

    #[test]
    fn exponent_overflow_is_reported() {
        let big = Exponents::from_pairs([(0, u32::MAX)]).unwrap();
        assert_eq!(big.mul(&Exponents::var(0)).unwrap_err(), Error::ExponentOverflow);
    }

    #[test]
    fn variable_bounds_are_checked() {
        let n = Semiring::Natural;
        let err = Polynomial::from_terms(n.clone(), 1, [(n.one(), Exponents::var(1))]).unwrap_err();
        assert!(matches!(err, Error::VariableOutOfRange { .. }));
    }

    fn arb_poly(nvars: usize) -> impl Strategy<Value = Polynomial> {
        proptest::collection::vec((0u64..4, proptest::collection::vec(0u32..3, nvars)), 0..4).prop_map(
            move |terms| {
                let n = Semiring::Natural;
                Polynomial::from_terms(
                    n.clone(),
                    nvars,
                    terms.into_iter().map(|(c, e)| (n.from_u64(c), Exponents::from_dense(&e))),
                )
                .unwrap()
            },
        )
    }

    #[test]
    fn parses_infix_syntax() {
        let n = Semiring::Natural;
        let names: Vec<String> = vec!["q".into(), "p".into()];
        let p = Polynomial::parse(&n, &names, "q*p + p^2 + q + 2*p").unwrap();
        assert_eq!(p.format_with(&n, &names), "q*p + p^2 + q + 2*p");
        assert_eq!(Polynomial::parse(&n, &names, "(q+p)^2").unwrap().monomials().len(), 3);
        assert!(Polynomial::parse(&n, &names, "0").unwrap().is_zero());
        assert!(Polynomial::parse(&n, &names, "r").is_err());
        assert!(Polynomial::parse(&n, &names, "q -").is_err());

        let q = Semiring::Rational;
        let p = Polynomial::parse(&q, &names, "1/2*q - p").unwrap();
        assert_eq!(Polynomial::parse(&q, &names, &p.format_with(&q, &names)).unwrap(), p);

        let bx = Semiring::polynomial(Semiring::Boolean, &["x"]);
        let p = Polynomial::parse(&bx, &names, "x*q + p").unwrap();
        assert_eq!(p.monomials()[0].coeff, bx.indeterminate(0).unwrap());
    }

    proptest! {
        #[test]
        fn substitution_is_a_homomorphism(p in arb_poly(2), q in arb_poly(2),
                                          s1 in arb_poly(3), s2 in arb_poly(3)) {
            let subs = [s1, s2];
            let sum = p.add(&q).unwrap().substitute(&subs, 3).unwrap();
            let sum2 = p.substitute(&subs, 3).unwrap().add(&q.substitute(&subs, 3).unwrap()).unwrap();
            prop_assert_eq!(sum, sum2);
            let prod = p.mul(&q).unwrap().substitute(&subs, 3).unwrap();
            let prod2 = p.substitute(&subs, 3).unwrap().mul(&q.substitute(&subs, 3).unwrap()).unwrap();
            prop_assert_eq!(prod, prod2);
        }

        #[test]
        fn evaluation_agrees_with_constant_substitution(p in arb_poly(3), pt in proptest::collection::vec(0u64..5, 3)) {
            let n = Semiring::Natural;
            let point: Vec<Value> = pt.iter().map(|&v| n.from_u64(v)).collect();
            let consts: Vec<Polynomial> = point.iter().map(|v| Polynomial::constant(n.clone(), 0, v.clone())).collect();
            let collapsed = p.substitute(&consts, 0).unwrap();
            prop_assert_eq!(p.eval(&point).unwrap(), collapsed.eval(&[]).unwrap());
        }

        #[test]
        fn normalization_is_idempotent(p in arb_poly(2), q in arb_poly(2)) {
            let s = p.add(&q).unwrap();
            let renorm = Polynomial::from_terms(
                s.ring().clone(), 2, s.monomials().iter().map(|m| (m.coeff.clone(), m.exps.clone()))).unwrap();
            prop_assert_eq!(&s, &renorm);
            let m = p.mul(&q).unwrap();
            let renorm = Polynomial::from_terms(
                m.ring().clone(), 2, m.monomials().iter().map(|t| (t.coeff.clone(), t.exps.clone()))).unwrap();
            prop_assert_eq!(&m, &renorm);
        }
    }
}
