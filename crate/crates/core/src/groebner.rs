//! Gröbner bases over the rationals in graded reverse lexicographic order.

use std::cmp::Ordering;

use num::{BigRational, Zero};

use crate::error::{Error, Result};
use crate::polynomial::{Exponents, Polynomial};
use crate::semiring::{Semiring, Value};

/// A bound on S-polynomial reductions and other counted steps.
#[derive(Clone, Debug)]
pub struct Budget {
    remaining: u64,
    spent: u64,
}

impl Budget {
    pub fn new(steps: u64) -> Self {
        Budget {
            remaining: steps,
            spent: 0,
        }
    }

    pub fn tick(&mut self) -> Result<()> {
        if self.remaining == 0 {
            return Err(Error::ResourceLimit(format!(
                "step budget of {} exhausted",
                self.spent
            )));
        }
        self.remaining -= 1;
        self.spent += 1;
        Ok(())
    }

    pub fn spent(&self) -> u64 {
        self.spent
    }
}

type Mono = Vec<u32>;

fn degree(m: &Mono) -> u64 {
    m.iter().map(|&e| u64::from(e)).sum()
}

fn grevlex(a: &Mono, b: &Mono) -> Ordering {
    degree(a).cmp(&degree(b)).then_with(|| {
        for i in (0..a.len()).rev() {
            if a[i] != b[i] {
                return b[i].cmp(&a[i]);
            }
        }
        Ordering::Equal
    })
}

fn divides(a: &Mono, b: &Mono) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

fn quotient(b: &Mono, a: &Mono) -> Mono {
    b.iter().zip(a).map(|(y, x)| y - x).collect()
}

fn lcm(a: &Mono, b: &Mono) -> Mono {
    a.iter().zip(b).map(|(x, y)| *x.max(y)).collect()
}

fn coprime(a: &Mono, b: &Mono) -> bool {
    a.iter().zip(b).all(|(x, y)| *x == 0 || *y == 0)
}

/// A rational polynomial with dense exponent vectors, terms in descending
/// order.
#[derive(Clone, Debug, PartialEq, Eq)]
struct QPoly {
    terms: Vec<(Mono, BigRational)>,
}

impl QPoly {
    fn from_poly(p: &Polynomial) -> Result<QPoly> {
        if p.ring() != &Semiring::Rational {
            return Err(Error::UnsupportedCarrier(format!(
                "Gröbner bases need rational coefficients, found {}",
                p.ring()
            )));
        }
        let mut terms: Vec<(Mono, BigRational)> = p
            .monomials()
            .iter()
            .map(|m| {
                let c = m.coeff.as_rational().cloned().expect("rational coefficient");
                (m.exps.to_dense(p.nvars()), c)
            })
            .collect();
        terms.sort_by(|a, b| grevlex(&b.0, &a.0));
        Ok(QPoly { terms })
    }

    fn to_poly(&self, nvars: usize) -> Polynomial {
        Polynomial::from_terms(
            Semiring::Rational,
            nvars,
            self.terms
                .iter()
                .map(|(m, c)| (Value::Rat(c.clone()), Exponents::from_dense(m))),
        )
        .expect("well-formed rational polynomial")
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn lead(&self) -> &(Mono, BigRational) {
        &self.terms[0]
    }

    fn monic(mut self) -> QPoly {
        if let Some((_, lc)) = self.terms.first() {
            let inv = lc.recip();
            for (_, c) in &mut self.terms {
                *c = &*c * &inv;
            }
        }
        self
    }

    /// `self - c · x^shift · g`.
    fn sub_scaled(&self, c: &BigRational, shift: &Mono, g: &QPoly) -> QPoly {
        let scaled = g.terms.iter().map(|(m, k)| {
            let mono: Mono = m.iter().zip(shift).map(|(a, b)| a + b).collect();
            (mono, c * k)
        });
        let mut out = Vec::with_capacity(self.terms.len() + g.terms.len());
        let mut left = self.terms.iter().cloned().peekable();
        let mut right = scaled.peekable();
        loop {
            match (left.peek(), right.peek()) {
                (None, None) => break,
                (Some(_), None) => out.push(left.next().unwrap()),
                (None, Some(_)) => {
                    let (m, k) = right.next().unwrap();
                    out.push((m, -k));
                }
                (Some(l), Some(r)) => match grevlex(&l.0, &r.0) {
                    Ordering::Greater => out.push(left.next().unwrap()),
                    Ordering::Less => {
                        let (m, k) = right.next().unwrap();
                        out.push((m, -k));
                    }
                    Ordering::Equal => {
                        let (m, a) = left.next().unwrap();
                        let (_, b) = right.next().unwrap();
                        let d = a - b;
                        if !d.is_zero() {
                            out.push((m, d));
                        }
                    }
                },
            }
        }
        QPoly { terms: out }
    }

    /// Full normal form modulo `basis`.
    fn reduce(&self, basis: &[QPoly]) -> QPoly {
        let mut p = self.clone();
        let mut rest: Vec<(Mono, BigRational)> = Vec::new();
        while !p.is_zero() {
            let (lm, lc) = p.lead().clone();
            match basis.iter().find(|g| divides(&g.lead().0, &lm)) {
                Some(g) => {
                    let (gm, gc) = g.lead();
                    p = p.sub_scaled(&(&lc / gc), &quotient(&lm, gm), g);
                }
                None => {
                    rest.push((lm, lc));
                    p.terms.remove(0);
                }
            }
        }
        QPoly { terms: rest }
    }

    fn s_poly(f: &QPoly, g: &QPoly) -> QPoly {
        let (fm, fc) = f.lead();
        let (gm, gc) = g.lead();
        let l = lcm(fm, gm);
        let first = QPoly { terms: Vec::new() }.sub_scaled(&-fc.recip(), &quotient(&l, fm), f);
        first.sub_scaled(&gc.recip(), &quotient(&l, gm), g)
    }
}

/// A Gröbner basis of an ideal of `ℚ[x_1..x_n]`, grevlex order.
#[derive(Clone, Debug)]
pub struct GroebnerBasis {
    nvars: usize,
    polys: Vec<QPoly>,
}

impl GroebnerBasis {
    /// The basis of the zero ideal.
    pub fn empty(nvars: usize) -> Self {
        GroebnerBasis {
            nvars,
            polys: Vec::new(),
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn term_order(&self) -> &'static str {
        "grevlex"
    }

    pub fn len(&self) -> usize {
        self.polys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.polys.is_empty()
    }

    /// The basis elements, each with leading coefficient one.
    pub fn basis(&self) -> Vec<Polynomial> {
        self.polys.iter().map(|p| p.to_poly(self.nvars)).collect()
    }

    fn check(&self, p: &Polynomial) -> Result<QPoly> {
        if p.nvars() != self.nvars {
            return Err(Error::ArityMismatch {
                expected: self.nvars,
                found: p.nvars(),
            });
        }
        QPoly::from_poly(p)
    }

    /// Ideal membership: whether `p` reduces to zero.
    pub fn contains(&self, p: &Polynomial) -> Result<bool> {
        Ok(self.check(p)?.reduce(&self.polys).is_zero())
    }

    /// The normal form of `p`.
    pub fn normal_form(&self, p: &Polynomial) -> Result<Polynomial> {
        Ok(self.check(p)?.reduce(&self.polys).to_poly(self.nvars))
    }

    /// Adds `p` to the ideal and restores the basis property. Returns
    /// `false` when `p` was already a member.
    pub fn insert(&mut self, p: &Polynomial, budget: &mut Budget) -> Result<bool> {
        let r = self.check(p)?.reduce(&self.polys);
        if r.is_zero() {
            return Ok(false);
        }
        let start = self.polys.len();
        self.polys.push(r.monic());
        let mut pairs: Vec<(usize, usize)> = (0..start).map(|i| (i, start)).collect();
        while let Some(idx) = self.next_pair(&pairs) {
            let (i, j) = pairs.swap_remove(idx);
            let (fi, fj) = (&self.polys[i], &self.polys[j]);
            if coprime(&fi.lead().0, &fj.lead().0) {
                continue;
            }
            budget.tick()?;
            let s = QPoly::s_poly(fi, fj).reduce(&self.polys);
            if !s.is_zero() {
                let k = self.polys.len();
                self.polys.push(s.monic());
                pairs.extend((0..k).map(|i| (i, k)));
            }
        }
        self.interreduce();
        Ok(true)
    }

    /// The pending pair with the smallest lcm of leading monomials.
    fn next_pair(&self, pairs: &[(usize, usize)]) -> Option<usize> {
        let key = |&(i, j): &(usize, usize)| lcm(&self.polys[i].lead().0, &self.polys[j].lead().0);
        (0..pairs.len()).min_by(|&a, &b| {
            grevlex(&key(&pairs[a]), &key(&pairs[b])).then_with(|| pairs[a].cmp(&pairs[b]))
        })
    }

    /// Makes the basis reduced: minimal leading monomials, every element in
    /// normal form modulo the others, sorted by leading monomial.
    fn interreduce(&mut self) {
        let mut polys = std::mem::take(&mut self.polys);
        polys.sort_by(|a, b| grevlex(&a.lead().0, &b.lead().0));
        let mut minimal: Vec<QPoly> = Vec::new();
        for p in polys {
            if !minimal.iter().any(|g| divides(&g.lead().0, &p.lead().0)) {
                minimal.push(p);
            }
        }
        let mut reduced = Vec::with_capacity(minimal.len());
        for i in 0..minimal.len() {
            let others: Vec<QPoly> = minimal
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, g)| g.clone())
                .collect();
            reduced.push(minimal[i].reduce(&others).monic());
        }
        self.polys = reduced;
    }
}

/// The reduced Gröbner basis of the ideal generated by `gens`, all in
/// `nvars` variables over the rationals.
pub fn groebner_basis(nvars: usize, gens: &[Polynomial], budget: &mut Budget) -> Result<GroebnerBasis> {
    let mut gb = GroebnerBasis::empty(nvars);
    for g in gens {
        gb.insert(g, budget)?;
    }
    Ok(gb)
}

/// `p ∈ ⟨basis⟩`.
pub fn ideal_member(p: &Polynomial, gb: &GroebnerBasis) -> Result<bool> {
    gb.contains(p)
}
