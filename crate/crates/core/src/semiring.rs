//! Commutative semirings with exact arithmetic.
//!
//! A [`Semiring`] is a runtime description of a carrier and [`Value`] is an
//! element of one. Every operation checks that its operands belong to the
//! carrier it is invoked on, so values of different carriers never mix
//! silently.

use std::fmt;

use num::{BigInt, BigRational, BigUint, One, Signed, Zero};

use crate::error::{Error, Result};
use crate::polynomial::Polynomial;

/// A commutative semiring carrier.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Semiring {
    /// `({0,1}, or, and, 0, 1)`.
    Boolean,
    /// Non-negative integers of arbitrary size.
    Natural,
    /// Exact rationals.
    Rational,
    /// Polynomials over `base` in the named commuting indeterminates.
    Polynomial { base: Box<Semiring>, vars: Vec<String> },
}

/// An element of some [`Semiring`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Value {
    Bool(bool),
    Nat(BigUint),
    Rat(BigRational),
    Poly(Box<Polynomial>),
}

impl Semiring {
    /// The polynomial semiring `base[vars]`.
    pub fn polynomial(base: Semiring, vars: &[&str]) -> Self {
        Semiring::Polynomial {
            base: Box::new(base),
            vars: vars.iter().map(|v| v.to_string()).collect(),
        }
    }

    /// Declared local finiteness. This is metadata, not a computed property.
    pub fn locally_finite(&self) -> bool {
        match self {
            Semiring::Boolean => true,
            Semiring::Natural | Semiring::Rational => false,
            Semiring::Polynomial { base, vars } => vars.is_empty() && base.locally_finite(),
        }
    }

    pub fn tag(&self) -> &'static str {
        match self {
            Semiring::Boolean => "boolean",
            Semiring::Natural => "natural",
            Semiring::Rational => "rational",
            Semiring::Polynomial { .. } => "polynomial",
        }
    }

    pub fn zero(&self) -> Value {
        match self {
            Semiring::Boolean => Value::Bool(false),
            Semiring::Natural => Value::Nat(BigUint::zero()),
            Semiring::Rational => Value::Rat(BigRational::zero()),
            Semiring::Polynomial { base, vars } => {
                Value::Poly(Box::new(Polynomial::zero((**base).clone(), vars.len())))
            }
        }
    }

    pub fn one(&self) -> Value {
        match self {
            Semiring::Boolean => Value::Bool(true),
            Semiring::Natural => Value::Nat(BigUint::one()),
            Semiring::Rational => Value::Rat(BigRational::one()),
            Semiring::Polynomial { base, vars } => {
                Value::Poly(Box::new(Polynomial::one((**base).clone(), vars.len())))
            }
        }
    }

    /// The image of the natural number `n` under the unique semiring
    /// morphism from the naturals.
    pub fn from_u64(&self, n: u64) -> Value {
        match self {
            Semiring::Boolean => Value::Bool(n > 0),
            Semiring::Natural => Value::Nat(BigUint::from(n)),
            Semiring::Rational => Value::Rat(BigRational::from_integer(BigInt::from(n))),
            Semiring::Polynomial { base, vars } => Value::Poly(Box::new(Polynomial::constant(
                (**base).clone(),
                vars.len(),
                base.from_u64(n),
            ))),
        }
    }

    /// The `i`-th indeterminate of a polynomial carrier.
    pub fn indeterminate(&self, i: usize) -> Result<Value> {
        match self {
            Semiring::Polynomial { base, vars } => Ok(Value::Poly(Box::new(Polynomial::var(
                (**base).clone(),
                vars.len(),
                i,
            )?))),
            other => Err(Error::UnsupportedCarrier(format!(
                "{} has no indeterminates",
                other.tag()
            ))),
        }
    }

    pub fn contains(&self, v: &Value) -> bool {
        match (self, v) {
            (Semiring::Boolean, Value::Bool(_)) => true,
            (Semiring::Natural, Value::Nat(_)) => true,
            (Semiring::Rational, Value::Rat(_)) => true,
            (Semiring::Polynomial { base, vars }, Value::Poly(p)) => {
                p.ring() == &**base && p.nvars() == vars.len()
            }
            _ => false,
        }
    }

    pub(crate) fn check(&self, v: &Value) -> Result<()> {
        if self.contains(v) {
            Ok(())
        } else {
            Err(Error::CarrierMismatch {
                expected: self.to_string(),
                found: v.describe_carrier(),
            })
        }
    }

    pub fn add(&self, a: &Value, b: &Value) -> Result<Value> {
        self.check(a)?;
        self.check(b)?;
        Ok(match (a, b) {
            (Value::Bool(x), Value::Bool(y)) => Value::Bool(*x || *y),
            (Value::Nat(x), Value::Nat(y)) => Value::Nat(x + y),
            (Value::Rat(x), Value::Rat(y)) => Value::Rat(x + y),
            (Value::Poly(x), Value::Poly(y)) => Value::Poly(Box::new(x.add(y)?)),
            _ => unreachable!("operands checked against the carrier"),
        })
    }

    pub fn mul(&self, a: &Value, b: &Value) -> Result<Value> {
        self.check(a)?;
        self.check(b)?;
        Ok(match (a, b) {
            (Value::Bool(x), Value::Bool(y)) => Value::Bool(*x && *y),
            (Value::Nat(x), Value::Nat(y)) => Value::Nat(x * y),
            (Value::Rat(x), Value::Rat(y)) => Value::Rat(x * y),
            (Value::Poly(x), Value::Poly(y)) => Value::Poly(Box::new(x.mul(y)?)),
            _ => unreachable!("operands checked against the carrier"),
        })
    }

    pub fn pow(&self, a: &Value, mut exp: u32) -> Result<Value> {
        self.check(a)?;
        let mut base = a.clone();
        let mut acc = self.one();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(&acc, &base)?;
            }
            exp >>= 1;
            if exp > 0 {
                base = self.mul(&base, &base)?;
            }
        }
        Ok(acc)
    }

    pub fn sum<'a>(&self, values: impl IntoIterator<Item = &'a Value>) -> Result<Value> {
        values
            .into_iter()
            .try_fold(self.zero(), |acc, v| self.add(&acc, v))
    }

    pub fn product<'a>(&self, values: impl IntoIterator<Item = &'a Value>) -> Result<Value> {
        values
            .into_iter()
            .try_fold(self.one(), |acc, v| self.mul(&acc, v))
    }

    pub fn equal(&self, a: &Value, b: &Value) -> Result<bool> {
        self.check(a)?;
        self.check(b)?;
        Ok(a == b)
    }

    /// Additive inverse, available when the carrier is a ring.
    pub fn neg(&self, a: &Value) -> Result<Value> {
        self.check(a)?;
        match a {
            Value::Rat(x) => Ok(Value::Rat(-x)),
            Value::Poly(p) => Ok(Value::Poly(Box::new(p.neg()?))),
            _ => Err(Error::UnsupportedCarrier(format!(
                "{} has no additive inverses",
                self
            ))),
        }
    }

    /// Parses the textual syntax of a scalar value: `0`/`1` for booleans,
    /// decimal naturals, and `p/q` rationals.
    pub fn parse_value(&self, s: &str) -> Result<Value> {
        let s = s.trim();
        let bad = || Error::Parse(format!("`{s}` is not a {} value", self.tag()));
        match self {
            Semiring::Boolean => match s {
                "0" => Ok(Value::Bool(false)),
                "1" => Ok(Value::Bool(true)),
                _ => Err(bad()),
            },
            Semiring::Natural => s.parse::<BigUint>().map(Value::Nat).map_err(|_| bad()),
            Semiring::Rational => {
                let (num, den) = match s.split_once('/') {
                    Some((n, d)) => (n.trim(), d.trim()),
                    None => (s, "1"),
                };
                let num: BigInt = num.parse().map_err(|_| bad())?;
                let den: BigInt = den.parse().map_err(|_| bad())?;
                if den.is_zero() {
                    return Err(bad());
                }
                Ok(Value::Rat(BigRational::new(num, den)))
            }
            Semiring::Polynomial { base, vars } => {
                // A bare scalar denotes a constant polynomial.
                let c = base.parse_value(s)?;
                Ok(Value::Poly(Box::new(Polynomial::constant(
                    (**base).clone(),
                    vars.len(),
                    c,
                ))))
            }
        }
    }

    /// Renders a value in the carrier's textual syntax.
    pub fn format_value(&self, v: &Value) -> String {
        match (self, v) {
            (Semiring::Polynomial { base, vars }, Value::Poly(p)) => p.format_with(base, vars),
            _ => v.to_string(),
        }
    }

    /// Maps a value of `source` into `self` along the canonical morphism
    /// (booleans and naturals embed into every carrier; naturals into
    /// rationals).
    pub fn embed(&self, source: &Semiring, v: &Value) -> Result<Value> {
        source.check(v)?;
        if source == self {
            return Ok(v.clone());
        }
        match (source, v) {
            (Semiring::Boolean, Value::Bool(b)) => Ok(if *b { self.one() } else { self.zero() }),
            (Semiring::Natural, Value::Nat(n)) => match self {
                Semiring::Rational => Ok(Value::Rat(BigRational::from_integer(BigInt::from(
                    n.clone(),
                )))),
                Semiring::Polynomial { base, vars } => Ok(Value::Poly(Box::new(
                    Polynomial::constant((**base).clone(), vars.len(), base.embed(source, v)?),
                ))),
                _ => Err(Error::CarrierMismatch {
                    expected: self.to_string(),
                    found: source.to_string(),
                }),
            },
            _ => Err(Error::CarrierMismatch {
                expected: self.to_string(),
                found: source.to_string(),
            }),
        }
    }
}

impl fmt::Display for Semiring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Semiring::Polynomial { base, vars } => write!(f, "{}[{}]", base, vars.join(",")),
            other => f.write_str(other.tag()),
        }
    }
}

impl Value {
    pub fn is_zero(&self) -> bool {
        match self {
            Value::Bool(b) => !b,
            Value::Nat(n) => n.is_zero(),
            Value::Rat(r) => r.is_zero(),
            Value::Poly(p) => p.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Value::Bool(b) => *b,
            Value::Nat(n) => n.is_one(),
            Value::Rat(r) => r.is_one(),
            Value::Poly(p) => p.is_one(),
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Value::Rat(r) => Some(r),
            _ => None,
        }
    }

    fn describe_carrier(&self) -> String {
        match self {
            Value::Bool(_) => "boolean".into(),
            Value::Nat(_) => "natural".into(),
            Value::Rat(_) => "rational".into(),
            Value::Poly(p) => format!("{}[{} vars]", p.ring(), p.nvars()),
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Bool(b) => f.write_str(if *b { "1" } else { "0" }),
            Value::Nat(n) => write!(f, "{n}"),
            Value::Rat(r) => {
                if r.denom().is_one() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            Value::Poly(p) => write!(f, "{p}"),
        }
    }
}

impl Value {
    /// Whether the value is a negative rational; used when printing sums.
    pub(crate) fn is_negative(&self) -> bool {
        matches!(self, Value::Rat(r) if r.is_negative())
    }
}
