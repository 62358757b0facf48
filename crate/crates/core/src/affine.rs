//! The affine Kac–Moody algebra of `gl_n` at a level given as a rational
//! multiple of the Killing form `(X, Y) = 2n tr(XY) - 2 tr X tr Y`, together
//! with the outer derivation `τ`, `[τ, e_ij[r]] = -r e_ij[r-1]`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, ParseError, Result};
use crate::scalar::Scalar;

/// The loop generator `e_ij[u] = e_ij ⊗ t^u` (1-based indices).
///
/// Generators are totally ordered by root block first (strictly lower
/// triangular, then diagonal, then strictly upper triangular), then by the
/// degree `u`, then by `(i, j)`. With this order a weight-zero normally
/// ordered monomial containing an off-diagonal factor starts with a lowering
/// factor and ends with a raising one, so the Harish-Chandra projection is
/// deletion of such monomials.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Gen {
    pub i: u8,
    pub j: u8,
    pub deg: i32,
}

impl Gen {
    pub fn new(i: usize, j: usize, deg: i32) -> Self {
        assert!(i >= 1 && j >= 1, "generator indices are 1-based");
        Gen { i: i as u8, j: j as u8, deg }
    }

    pub fn row(self) -> usize {
        self.i as usize
    }

    pub fn col(self) -> usize {
        self.j as usize
    }

    pub fn is_diagonal(self) -> bool {
        self.i == self.j
    }

    /// Same matrix unit at a different degree.
    pub fn at(self, deg: i32) -> Gen {
        Gen { deg, ..self }
    }

    fn block(self) -> u8 {
        match self.i.cmp(&self.j) {
            Ordering::Greater => 0,
            Ordering::Equal => 1,
            Ordering::Less => 2,
        }
    }
}

impl Ord for Gen {
    fn cmp(&self, other: &Self) -> Ordering {
        self.block()
            .cmp(&other.block())
            .then(self.deg.cmp(&other.deg))
            .then(self.i.cmp(&other.i))
            .then(self.j.cmp(&other.j))
    }
}

impl PartialOrd for Gen {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Gen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e[{},{};{}]", self.i, self.j, self.deg)
    }
}

impl fmt::Debug for Gen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Gen {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, ParseError> {
        let bad = || ParseError::Generator(s.to_string());
        let body = s.trim().strip_prefix("e[").and_then(|r| r.strip_suffix(']')).ok_or_else(bad)?;
        let (idx, deg) = body.split_once(';').ok_or_else(bad)?;
        let (i, j) = idx.split_once(',').ok_or_else(bad)?;
        let i: u8 = i.trim().parse().map_err(|_| bad())?;
        let j: u8 = j.trim().parse().map_err(|_| bad())?;
        let deg: i32 = deg.trim().parse().map_err(|_| bad())?;
        if i == 0 || j == 0 {
            return Err(bad());
        }
        Ok(Gen { i, j, deg })
    }
}

impl Serialize for Gen {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Gen {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(deserializer)?.parse().map_err(serde::de::Error::custom)
    }
}

/// A generator of the `τ`-extended affine algebra.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Generator {
    Loop(Gen),
    /// The central element `𝟙`.
    Central,
    Tau,
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Generator::Loop(g) => write!(f, "{g}"),
            Generator::Central => write!(f, "one"),
            Generator::Tau => write!(f, "tau"),
        }
    }
}

impl FromStr for Generator {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, ParseError> {
        match s.trim() {
            "tau" => Ok(Generator::Tau),
            "one" => Ok(Generator::Central),
            other => other.parse().map(Generator::Loop),
        }
    }
}

/// A finite combination of loop generators plus a multiple of `𝟙`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct LieElement {
    pub gens: BTreeMap<Gen, Scalar>,
    pub central: Scalar,
}

impl LieElement {
    pub fn zero() -> Self {
        LieElement::default()
    }

    pub fn generator(g: Gen) -> Self {
        let mut out = LieElement::zero();
        out.add_gen(g, Scalar::one());
        out
    }

    pub fn add_gen(&mut self, g: Gen, c: Scalar) {
        if c.is_zero() {
            return;
        }
        let entry = self.gens.entry(g).or_insert_with(Scalar::zero);
        *entry += c;
        if entry.is_zero() {
            self.gens.remove(&g);
        }
    }

    pub fn add_scaled(&mut self, other: &LieElement, c: &Scalar) {
        for (&g, v) in &other.gens {
            self.add_gen(g, v * c);
        }
        self.central += &other.central * c;
    }

    pub fn is_zero(&self) -> bool {
        self.gens.is_empty() && self.central.is_zero()
    }
}

impl fmt::Display for LieElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self.gens.iter().map(|(g, c)| format!("({c})·{g}")).collect();
        if !self.central.is_zero() {
            parts.push(format!("({})·one", self.central));
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// An invariant form on `gl_n`: `scale` times the Killing form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvariantForm {
    pub n: usize,
    pub scale: Scalar,
}

impl InvariantForm {
    pub fn killing(n: usize) -> Self {
        InvariantForm { n, scale: Scalar::one() }
    }

    /// `κ_c = -1/2 · Killing`.
    pub fn critical(n: usize) -> Self {
        InvariantForm { n, scale: Scalar::new(-1, 2) }
    }

    /// Value on the matrix units `e_ij`, `e_kl`.
    pub fn eval(&self, a: Gen, b: Gen) -> Scalar {
        &self.scale * killing_form(self.n, a, b)
    }
}

/// Killing form of `gl_n` on matrix units: `2n δ_jk δ_il - 2 δ_ij δ_kl`.
pub fn killing_form(n: usize, a: Gen, b: Gen) -> Scalar {
    let mut value = 0i64;
    if a.j == b.i && a.i == b.j {
        value += 2 * n as i64;
    }
    if a.i == a.j && b.i == b.j {
        value -= 2;
    }
    Scalar::from_int(value)
}

/// `ĝl_n` at the level fixed by `form`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineGl {
    form: InvariantForm,
}

impl AffineGl {
    pub fn new(form: InvariantForm) -> Self {
        AffineGl { form }
    }

    pub fn critical(n: usize) -> Self {
        AffineGl::new(InvariantForm::critical(n))
    }

    pub fn n(&self) -> usize {
        self.form.n
    }

    pub fn form(&self) -> &InvariantForm {
        &self.form
    }

    pub fn check(&self, g: Gen) -> Result<()> {
        let n = self.n();
        if g.row() > n || g.col() > n {
            return Err(Error::Domain(format!("{g} outside gl_{n}")));
        }
        Ok(())
    }

    /// `[e_ij[u], e_kl[v]] = δ_jk e_il[u+v] - δ_li e_kj[u+v] - κ(e_ij, e_kl)·v·δ_{u+v,0}·𝟙`.
    pub fn bracket(&self, a: Gen, b: Gen) -> LieElement {
        let mut out = LieElement::zero();
        let deg = a.deg + b.deg;
        if a.j == b.i {
            out.add_gen(Gen { i: a.i, j: b.j, deg }, Scalar::one());
        }
        if b.j == a.i {
            out.add_gen(Gen { i: b.i, j: a.j, deg }, Scalar::from_int(-1));
        }
        if deg == 0 && b.deg != 0 {
            let k = self.form.eval(a, b);
            out.central = -(k * Scalar::from_int(b.deg as i64));
        }
        out
    }

    /// Bracket extended linearly to combinations (the central part is ignored
    /// on the inputs since `𝟙` is central).
    pub fn bracket_elements(&self, a: &LieElement, b: &LieElement) -> LieElement {
        let mut out = LieElement::zero();
        for (&x, cx) in &a.gens {
            for (&y, cy) in &b.gens {
                out.add_scaled(&self.bracket(x, y), &(cx * cy));
            }
        }
        out
    }

    /// `[τ, e_ij[r]] = -r e_ij[r-1]`; `[τ, 𝟙] = 0`.
    pub fn tau_bracket(x: Gen) -> LieElement {
        let mut out = LieElement::zero();
        out.add_gen(x.at(x.deg - 1), Scalar::from_int(-(x.deg as i64)));
        out
    }

    pub fn tau_bracket_element(a: &LieElement) -> LieElement {
        let mut out = LieElement::zero();
        for (&x, c) in &a.gens {
            out.add_scaled(&AffineGl::tau_bracket(x), c);
        }
        out
    }
}
