//! Laurent polynomials and truncated Laurent series in `t` over the rationals.
//!
//! A [`Laurent`] is either exact (finite support, no precision bound) or
//! truncated: with `precision = Some(p)` the coefficients of `t^k` for
//! `k >= p` are unknown, i.e. the value is `sum + O(t^p)`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Order of vanishing at `t = 0`; the zero series has valuation `Infinity`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Valuation {
    Finite(i64),
    Infinity,
}

impl Valuation {
    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinity => None,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinity => write!(f, "+inf"),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Laurent {
    terms: BTreeMap<i64, Scalar>,
    precision: Option<i64>,
}

impl Laurent {
    pub fn zero() -> Self {
        Laurent::default()
    }

    pub fn one() -> Self {
        Laurent::constant(Scalar::one())
    }

    pub fn constant(c: Scalar) -> Self {
        Laurent::monomial(c, 0)
    }

    /// `c * t^exp`
    pub fn monomial(c: Scalar, exp: i64) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exp, c);
        }
        Laurent { terms, precision: None }
    }

    /// `t^exp`
    pub fn t_pow(exp: i64) -> Self {
        Laurent::monomial(Scalar::one(), exp)
    }

    pub fn from_terms<I: IntoIterator<Item = (i64, Scalar)>>(terms: I) -> Self {
        let mut out = Laurent::zero();
        for (e, c) in terms {
            out.add_term(e, c);
        }
        out
    }

    /// Integer-coefficient shorthand, mostly for tests.
    pub fn from_ints(terms: &[(i64, i64)]) -> Self {
        Laurent::from_terms(terms.iter().map(|&(e, c)| (e, Scalar::from_int(c))))
    }

    /// Marks everything from `t^precision` on as unknown.
    pub fn with_precision(mut self, precision: i64) -> Self {
        let p = match self.precision {
            Some(old) => old.min(precision),
            None => precision,
        };
        self.precision = Some(p);
        self.terms.retain(|&e, _| e < p);
        self
    }

    /// Drops the precision bound, treating the known part as exact.
    pub fn into_exact(mut self) -> Self {
        self.precision = None;
        self
    }

    pub fn precision(&self) -> Option<i64> {
        self.precision
    }

    pub fn is_exact(&self) -> bool {
        self.precision.is_none()
    }

    /// True when no coefficient is stored (exact zero or `O(t^p)`).
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &Scalar)> {
        self.terms.iter().map(|(&e, c)| (e, c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Stored coefficient of `t^exp`, failing if it lies beyond the precision.
    pub fn coeff(&self, exp: i64) -> Result<Scalar> {
        if let Some(p) = self.precision {
            if exp >= p {
                return Err(Error::UndeterminedCoefficient { exponent: exp, precision: p });
            }
        }
        Ok(self.terms.get(&exp).cloned().unwrap_or_else(Scalar::zero))
    }

    fn add_term(&mut self, exp: i64, c: Scalar) {
        if c.is_zero() {
            return;
        }
        if let Some(p) = self.precision {
            if exp >= p {
                return;
            }
        }
        let entry = self.terms.entry(exp).or_insert_with(Scalar::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&exp);
        }
    }

    /// Smallest exponent with a nonzero coefficient.
    pub fn valuation(&self) -> Result<Valuation> {
        match self.terms.keys().next() {
            Some(&e) => Ok(Valuation::Finite(e)),
            None => match self.precision {
                Some(p) => Err(Error::UndeterminedValuation { precision: p }),
                None => Ok(Valuation::Infinity),
            },
        }
    }

    /// Pole order `max(0, -valuation)`; zero for the zero series.
    pub fn pole_order(&self) -> Result<i64> {
        Ok(match self.valuation()? {
            Valuation::Finite(v) => (-v).max(0),
            Valuation::Infinity => 0,
        })
    }

    /// Lower bound on the valuation: the true one, or the precision for `O(t^p)`.
    fn valuation_bound(&self) -> Option<i64> {
        self.terms.keys().next().copied().or(self.precision)
    }

    /// Coefficient of `t^{-1}`.
    pub fn residue(&self) -> Result<Scalar> {
        if let Some(p) = self.precision {
            if p <= -1 {
                return Err(Error::UndeterminedResidue { precision: p });
            }
        }
        Ok(self.terms.get(&-1).cloned().unwrap_or_else(Scalar::zero))
    }

    /// Term-wise `d/dt`; the precision drops by one.
    pub fn derivative(&self) -> Laurent {
        let mut out = Laurent { terms: BTreeMap::new(), precision: self.precision.map(|p| p - 1) };
        for (&e, c) in &self.terms {
            if e != 0 {
                out.add_term(e - 1, c * Scalar::from_int(e));
            }
        }
        out
    }

    pub fn nth_derivative(&self, k: u32) -> Laurent {
        let mut out = self.clone();
        for _ in 0..k {
            out = out.derivative();
        }
        out
    }

    pub fn scale(&self, c: &Scalar) -> Laurent {
        if c.is_zero() {
            return Laurent { terms: BTreeMap::new(), precision: self.precision };
        }
        Laurent {
            terms: self.terms.iter().map(|(&e, v)| (e, v * c)).collect(),
            precision: self.precision,
        }
    }

    /// Multiplies by `t^k`.
    pub fn shift(&self, k: i64) -> Laurent {
        Laurent {
            terms: self.terms.iter().map(|(&e, v)| (e + k, v.clone())).collect(),
            precision: self.precision.map(|p| p + k),
        }
    }

    /// Substitutes `t -> c t`.
    pub fn rescale_variable(&self, c: &Scalar) -> Laurent {
        let mut out = Laurent { terms: BTreeMap::new(), precision: self.precision };
        for (&e, v) in &self.terms {
            let factor = if e >= 0 { c.pow(e as u32) } else { c.recip().pow((-e) as u32) };
            out.add_term(e, v * factor);
        }
        out
    }

    /// Series inverse `b` with `self * b = 1 + O(t^order)`.
    pub fn invert(&self, order: i64) -> Result<Laurent> {
        let v = match self.terms.keys().next() {
            Some(&v) => v,
            None => return Err(Error::ZeroDivisor),
        };
        let mut count = order;
        if let Some(p) = self.precision {
            count = count.min(p - v);
        }
        let unit: Vec<Scalar> = (0..count.max(0))
            .map(|k| self.terms.get(&(v + k)).cloned().unwrap_or_else(Scalar::zero))
            .collect();
        let lead_inv = unit[0].recip();
        let mut w: Vec<Scalar> = Vec::with_capacity(unit.len());
        for k in 0..unit.len() {
            if k == 0 {
                w.push(lead_inv.clone());
                continue;
            }
            let mut acc = Scalar::zero();
            for i in 1..=k {
                if !unit[i].is_zero() {
                    acc += &unit[i] * &w[k - i];
                }
            }
            w.push(-(acc * &lead_inv));
        }
        let terms = w.into_iter().enumerate().map(|(k, c)| (k as i64 - v, c));
        Ok(Laurent::from_terms(terms).with_precision(count - v))
    }

    /// Agreement of coefficients below the smaller of the two precisions.
    pub fn agrees_with(&self, other: &Laurent) -> bool {
        let bound = match (self.precision, other.precision) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (Some(a), None) | (None, Some(a)) => Some(a),
            (None, None) => None,
        };
        let below = |e: &i64| bound.is_none_or(|b| *e < b);
        let lhs: Vec<_> = self.terms.iter().filter(|(e, _)| below(e)).collect();
        let rhs: Vec<_> = other.terms.iter().filter(|(e, _)| below(e)).collect();
        lhs == rhs
    }
}

fn combine_precision(a: Option<i64>, b: Option<i64>) -> Option<i64> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (Some(x), None) | (None, Some(x)) => Some(x),
        (None, None) => None,
    }
}

impl Add<&Laurent> for &Laurent {
    type Output = Laurent;
    fn add(self, rhs: &Laurent) -> Laurent {
        let mut out = self.clone();
        out.precision = combine_precision(self.precision, rhs.precision);
        if let Some(p) = out.precision {
            out.terms.retain(|&e, _| e < p);
        }
        for (&e, c) in &rhs.terms {
            out.add_term(e, c.clone());
        }
        out
    }
}

impl Neg for &Laurent {
    type Output = Laurent;
    fn neg(self) -> Laurent {
        self.scale(&Scalar::from_int(-1))
    }
}

impl Sub<&Laurent> for &Laurent {
    type Output = Laurent;
    fn sub(self, rhs: &Laurent) -> Laurent {
        self + &(-rhs)
    }
}

impl Mul<&Laurent> for &Laurent {
    type Output = Laurent;
    fn mul(self, rhs: &Laurent) -> Laurent {
        let precision = match (self.precision, rhs.precision) {
            (None, None) => None,
            _ => {
                let mut bound: Option<i64> = None;
                let mut consider = |candidate: Option<i64>| {
                    if let Some(c) = candidate {
                        bound = Some(bound.map_or(c, |b: i64| b.min(c)));
                    }
                };
                if let (Some(pb), Some(va)) = (rhs.precision, self.valuation_bound()) {
                    consider(Some(va + pb));
                }
                if let (Some(pa), Some(vb)) = (self.precision, rhs.valuation_bound()) {
                    consider(Some(vb + pa));
                }
                // exact zero times anything stays exact zero
                if self.is_exact() && self.is_zero() || rhs.is_exact() && rhs.is_zero() {
                    return Laurent::zero();
                }
                bound
            }
        };
        let mut out = Laurent { terms: BTreeMap::new(), precision };
        for (&ea, ca) in &self.terms {
            for (&eb, cb) in &rhs.terms {
                out.add_term(ea + eb, ca * cb);
            }
        }
        out
    }
}

macro_rules! owned_laurent_op {
    ($trait:ident, $method:ident) => {
        impl $trait<Laurent> for Laurent {
            type Output = Laurent;
            fn $method(self, rhs: Laurent) -> Laurent {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&Laurent> for Laurent {
            type Output = Laurent;
            fn $method(self, rhs: &Laurent) -> Laurent {
                (&self).$method(rhs)
            }
        }
    };
}

owned_laurent_op!(Add, add);
owned_laurent_op!(Sub, sub);
owned_laurent_op!(Mul, mul);

impl Neg for Laurent {
    type Output = Laurent;
    fn neg(self) -> Laurent {
        -&self
    }
}

impl fmt::Display for Laurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() && self.precision.is_none() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&e, c) in &self.terms {
            let (sign, mag) = if c.is_negative() { ("-", -c) } else { ("+", c.clone()) };
            if first {
                if sign == "-" {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            match e {
                0 => write!(f, "{mag}")?,
                _ => {
                    if !mag.is_one() {
                        write!(f, "{mag}*")?;
                    }
                    if e == 1 {
                        write!(f, "t")?;
                    } else {
                        write!(f, "t^{e}")?;
                    }
                }
            }
        }
        if let Some(p) = self.precision {
            if !first {
                write!(f, " + ")?;
            }
            write!(f, "O(t^{p})")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Laurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Serialize, Deserialize)]
struct LaurentRepr {
    terms: Vec<(i64, Scalar)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    precision: Option<i64>,
}

impl Serialize for Laurent {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        LaurentRepr {
            terms: self.terms.iter().map(|(&e, c)| (e, c.clone())).collect(),
            precision: self.precision,
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Laurent {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Full(LaurentRepr),
            Bare(Vec<(i64, Scalar)>),
        }
        let repr = match Repr::deserialize(deserializer)? {
            Repr::Full(r) => r,
            Repr::Bare(terms) => LaurentRepr { terms, precision: None },
        };
        let mut out = Laurent::from_terms(repr.terms);
        if let Some(p) = repr.precision {
            out = out.with_precision(p);
        }
        Ok(out)
    }
}
