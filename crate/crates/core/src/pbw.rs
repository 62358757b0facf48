//! Normally ordered noncommutative polynomials in the generators of the
//! `τ`-extended affine algebra, and the straightening engine.
//!
//! A normally ordered monomial is `τ^k · g_1 ⋯ g_m` with `g_1 <= … <= g_m` in
//! the generator order of [`Gen`]. The central element is evaluated to 1.

use std::cmp::Ordering;
use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::affine::{AffineGl, Gen, LieElement};
use crate::error::{Error, ParseError, Result};
use crate::scalar::Scalar;

/// A letter of a raw word: `τ` sorts before every loop generator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Letter {
    Tau,
    Gen(Gen),
}

impl Ord for Letter {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Letter::Tau, Letter::Tau) => Ordering::Equal,
            (Letter::Tau, Letter::Gen(_)) => Ordering::Less,
            (Letter::Gen(_), Letter::Tau) => Ordering::Greater,
            (Letter::Gen(a), Letter::Gen(b)) => a.cmp(b),
        }
    }
}

impl PartialOrd for Letter {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Monomial {
    pub tau: u32,
    pub gens: Vec<Gen>,
}

impl Monomial {
    pub fn unit() -> Self {
        Monomial::default()
    }

    pub fn letters(&self) -> Vec<Letter> {
        let mut out = vec![Letter::Tau; self.tau as usize];
        out.extend(self.gens.iter().map(|&g| Letter::Gen(g)));
        out
    }

    /// Sum of generator degrees.
    pub fn degree(&self) -> i64 {
        self.gens.iter().map(|g| g.deg as i64).sum()
    }

    // Display only: within a length, words compare factorwise by (i, j, u).
    fn display_key(&self) -> (std::cmp::Reverse<u32>, usize, Vec<(usize, usize, i32)>) {
        let word = self.gens.iter().map(|g| (g.row(), g.col(), g.deg)).collect();
        (std::cmp::Reverse(self.tau), self.gens.len(), word)
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.tau {
            0 => {}
            1 => parts.push("tau".to_string()),
            k => parts.push(format!("tau^{k}")),
        }
        parts.extend(self.gens.iter().map(|g| g.to_string()));
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join("·"))
        }
    }
}

/// A finite rational combination of normally ordered monomials.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct NCPoly {
    terms: BTreeMap<Monomial, Scalar>,
}

impl NCPoly {
    pub fn zero() -> Self {
        NCPoly::default()
    }

    pub fn one() -> Self {
        NCPoly::monomial(Monomial::unit(), Scalar::one())
    }

    pub fn tau() -> Self {
        NCPoly::monomial(Monomial { tau: 1, gens: vec![] }, Scalar::one())
    }

    pub fn scalar(c: Scalar) -> Self {
        NCPoly::monomial(Monomial::unit(), c)
    }

    /// Caller guarantees the monomial is normally ordered.
    pub fn monomial(m: Monomial, c: Scalar) -> Self {
        let mut out = NCPoly::zero();
        out.add_term(m, c);
        out
    }

    pub fn generator(g: Gen) -> Self {
        NCPoly::monomial(Monomial { tau: 0, gens: vec![g] }, Scalar::one())
    }

    pub fn add_term(&mut self, m: Monomial, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            Entry::Vacant(slot) => {
                slot.insert(c);
            }
            Entry::Occupied(mut slot) => {
                *slot.get_mut() += c;
                if slot.get().is_zero() {
                    slot.remove();
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &NCPoly, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        for (m, v) in &other.terms {
            self.add_term(m.clone(), v * c);
        }
    }

    pub fn scale(&self, c: &Scalar) -> NCPoly {
        let mut out = NCPoly::zero();
        out.add_scaled(self, c);
        out
    }

    pub fn add(&self, other: &NCPoly) -> NCPoly {
        let mut out = self.clone();
        out.add_scaled(other, &Scalar::one());
        out
    }

    pub fn sub(&self, other: &NCPoly) -> NCPoly {
        let mut out = self.clone();
        out.add_scaled(other, &Scalar::from_int(-1));
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &Monomial) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_else(Scalar::zero)
    }

    /// The part `Σ_m c_m · m` of the terms `τ^k · m`, with `τ^k` stripped.
    pub fn tau_coefficient(&self, k: u32) -> NCPoly {
        let mut out = NCPoly::zero();
        for (m, c) in &self.terms {
            if m.tau == k {
                out.add_term(Monomial { tau: 0, gens: m.gens.clone() }, c.clone());
            }
        }
        out
    }

    pub fn max_tau(&self) -> u32 {
        self.terms.keys().map(|m| m.tau).max().unwrap_or(0)
    }

    pub fn contains_tau(&self) -> bool {
        self.terms.keys().any(|m| m.tau > 0)
    }

    /// True when every generator has negative degree and no `τ` occurs.
    pub fn in_negative_part(&self) -> bool {
        self.terms.keys().all(|m| m.tau == 0 && m.gens.iter().all(|g| g.deg < 0))
    }

    /// Harish-Chandra projection `U(g^-) → Sym(h^-)`: drops every monomial
    /// containing an off-diagonal factor.
    pub fn hc_project(&self) -> Result<NCPoly> {
        if !self.in_negative_part() {
            return Err(Error::Domain(
                "Harish-Chandra projection needs an element of U(g^-) without tau".into(),
            ));
        }
        let mut out = NCPoly::zero();
        for (m, c) in &self.terms {
            if m.gens.iter().all(|g| g.is_diagonal()) {
                out.add_term(m.clone(), c.clone());
            }
        }
        Ok(out)
    }

    /// Top PBW-filtration part as a commutative polynomial.
    pub fn symbol(&self) -> CommPoly {
        let top = self.terms.keys().map(|m| m.gens.len()).max().unwrap_or(0);
        let mut out = CommPoly::zero();
        for (m, c) in &self.terms {
            if m.gens.len() == top {
                out.add_term(m.gens.clone(), c.clone());
            }
        }
        out
    }

    /// Terms sorted for display: higher `τ` powers first, then shorter words.
    pub fn display_terms(&self) -> Vec<(&Monomial, &Scalar)> {
        let mut out: Vec<_> = self.terms.iter().collect();
        out.sort_by_key(|a| a.0.display_key());
        out
    }
}

impl fmt::Display for NCPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_terms(f, self.display_terms().into_iter().map(|(m, c)| (m.to_string(), c)))
    }
}

impl fmt::Debug for NCPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

pub(crate) fn write_terms<'a, I>(f: &mut fmt::Formatter<'_>, terms: I) -> fmt::Result
where
    I: IntoIterator<Item = (String, &'a Scalar)>,
{
    let mut first = true;
    for (text, c) in terms {
        let negative = c.is_negative();
        let mag = if negative { -c } else { c.clone() };
        if first {
            if negative {
                write!(f, "-")?;
            }
        } else {
            write!(f, " {} ", if negative { "-" } else { "+" })?;
        }
        first = false;
        if text == "1" {
            write!(f, "{mag}")?;
        } else if mag.is_one() {
            write!(f, "{text}")?;
        } else {
            write!(f, "{mag}·{text}")?;
        }
    }
    if first {
        write!(f, "0")?;
    }
    Ok(())
}

#[derive(Serialize, Deserialize)]
struct TermRepr {
    coeff: Scalar,
    word: Vec<String>,
}

impl Serialize for NCPoly {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let terms: Vec<TermRepr> = self
            .display_terms()
            .into_iter()
            .map(|(m, c)| {
                let mut word = Vec::new();
                if m.tau > 0 {
                    word.push(format!("tau^{}", m.tau));
                }
                word.extend(m.gens.iter().map(|g| g.to_string()));
                TermRepr { coeff: c.clone(), word }
            })
            .collect();
        terms.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for NCPoly {
    /// Accepts normally ordered words only; use [`Pbw::normal_form`] for raw input.
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let terms = Vec::<TermRepr>::deserialize(deserializer)?;
        let mut out = NCPoly::zero();
        for t in terms {
            let letters = parse_word(&t.word).map_err(serde::de::Error::custom)?;
            let m = sorted_monomial(&letters).ok_or_else(|| {
                serde::de::Error::custom(format!("word {:?} is not normally ordered", t.word))
            })?;
            out.add_term(m, t.coeff);
        }
        Ok(out)
    }
}

/// Parses `["tau^k", "e[i,j;u]", …]` into letters.
pub fn parse_word(word: &[String]) -> Result<Vec<Letter>, ParseError> {
    let mut out = Vec::new();
    for item in word {
        let item = item.trim();
        if item == "tau" {
            out.push(Letter::Tau);
        } else if let Some(k) = item.strip_prefix("tau^") {
            let k: usize = k.parse().map_err(|_| ParseError::Generator(item.to_string()))?;
            out.extend(std::iter::repeat_n(Letter::Tau, k));
        } else if item == "one" {
            // the central element acts as 1
        } else {
            out.push(Letter::Gen(item.parse()?));
        }
    }
    Ok(out)
}

fn sorted_monomial(letters: &[Letter]) -> Option<Monomial> {
    if letters.windows(2).any(|w| w[0] > w[1]) {
        return None;
    }
    let tau = letters.iter().filter(|l| matches!(l, Letter::Tau)).count() as u32;
    let gens = letters
        .iter()
        .filter_map(|l| match l {
            Letter::Gen(g) => Some(*g),
            Letter::Tau => None,
        })
        .collect();
    Some(Monomial { tau, gens })
}

/// A commutative polynomial in the graded symbols `x̄_ij[u]`; keys are sorted
/// multisets of generators.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct CommPoly {
    terms: BTreeMap<Vec<Gen>, Scalar>,
}

impl CommPoly {
    pub fn zero() -> Self {
        CommPoly::default()
    }

    pub fn add_term(&mut self, mut key: Vec<Gen>, c: Scalar) {
        if c.is_zero() {
            return;
        }
        key.sort();
        let entry = self.terms.entry(key.clone()).or_insert_with(Scalar::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn mul(&self, other: &CommPoly) -> CommPoly {
        let mut out = CommPoly::zero();
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                let mut key = a.clone();
                key.extend_from_slice(b);
                out.add_term(key, ca * cb);
            }
        }
        out
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<Gen>, &Scalar)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl fmt::Display for CommPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_terms(
            f,
            self.terms.iter().map(|(k, c)| {
                let text = if k.is_empty() {
                    "1".to_string()
                } else {
                    k.iter().map(|g| format!("x{g}")).collect::<Vec<_>>().join("·")
                };
                (text, c)
            }),
        )
    }
}

impl fmt::Debug for CommPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Which adjacent inversion the straightener resolves first.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SwapStrategy {
    FirstDescent,
    LastDescent,
}

/// Straightening engine for one algebra; memoizes normal forms of words.
pub struct Pbw {
    algebra: AffineGl,
    strategy: SwapStrategy,
    memo: HashMap<Vec<Letter>, NCPoly>,
}

impl Pbw {
    pub fn new(algebra: AffineGl) -> Self {
        Pbw::with_strategy(algebra, SwapStrategy::FirstDescent)
    }

    pub fn with_strategy(algebra: AffineGl, strategy: SwapStrategy) -> Self {
        Pbw { algebra, strategy, memo: HashMap::new() }
    }

    pub fn algebra(&self) -> &AffineGl {
        &self.algebra
    }

    /// Normal form of a single raw word.
    pub fn normal_form_word(&mut self, word: &[Letter]) -> NCPoly {
        if let Some(m) = sorted_monomial(word) {
            return NCPoly::monomial(m, Scalar::one());
        }
        if let Some(hit) = self.memo.get(word) {
            return hit.clone();
        }
        let p = self.descent(word).expect("unsorted word has a descent");
        let (x, y) = (word[p], word[p + 1]);

        let mut swapped = word.to_vec();
        swapped.swap(p, p + 1);
        let mut out = self.normal_form_word(&swapped);

        // x y = y x + [x, y]
        let correction = match (x, y) {
            (Letter::Gen(a), Letter::Gen(b)) => self.algebra.bracket(a, b),
            (Letter::Gen(a), Letter::Tau) => {
                let mut neg = LieElement::zero();
                neg.add_scaled(&AffineGl::tau_bracket(a), &Scalar::from_int(-1));
                neg
            }
            _ => unreachable!("tau is minimal, so it never starts a descent"),
        };
        for (&g, c) in &correction.gens {
            let mut w = Vec::with_capacity(word.len() - 1);
            w.extend_from_slice(&word[..p]);
            w.push(Letter::Gen(g));
            w.extend_from_slice(&word[p + 2..]);
            let nf = self.normal_form_word(&w);
            out.add_scaled(&nf, c);
        }
        if !correction.central.is_zero() {
            let mut w = Vec::with_capacity(word.len() - 2);
            w.extend_from_slice(&word[..p]);
            w.extend_from_slice(&word[p + 2..]);
            let nf = self.normal_form_word(&w);
            out.add_scaled(&nf, &correction.central);
        }
        self.memo.insert(word.to_vec(), out.clone());
        out
    }

    fn descent(&self, word: &[Letter]) -> Option<usize> {
        let mut positions = (0..word.len().saturating_sub(1)).filter(|&p| word[p] > word[p + 1]);
        match self.strategy {
            SwapStrategy::FirstDescent => positions.next(),
            SwapStrategy::LastDescent => positions.next_back(),
        }
    }

    /// Normal form of a raw combination of words.
    pub fn normal_form(&mut self, raw: &[(Scalar, Vec<Letter>)]) -> NCPoly {
        let mut out = NCPoly::zero();
        for (c, w) in raw {
            let nf = self.normal_form_word(w);
            out.add_scaled(&nf, c);
        }
        out
    }

    pub fn mul(&mut self, p: &NCPoly, q: &NCPoly) -> NCPoly {
        let mut out = NCPoly::zero();
        for (mp, cp) in p.terms() {
            for (mq, cq) in q.terms() {
                let mut w = mp.letters();
                w.extend(mq.letters());
                let nf = self.normal_form_word(&w);
                out.add_scaled(&nf, &(cp * cq));
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(i: usize, j: usize, u: i32) -> Gen {
        Gen::new(i, j, u)
    }

    fn mono(gens: &[Gen]) -> Monomial {
        let mut gens = gens.to_vec();
        gens.sort();
        Monomial { tau: 0, gens }
    }

    #[test]
    fn moving_tau_left() {
        let mut pbw = Pbw::new(AffineGl::critical(2));
        let nf = pbw.normal_form_word(&[Letter::Gen(e(1, 1, -1)), Letter::Tau]);
        let mut expected = NCPoly::monomial(Monomial { tau: 1, gens: vec![e(1, 1, -1)] }, Scalar::one());
        expected.add_term(mono(&[e(1, 1, -2)]), Scalar::from_int(-1));
        assert_eq!(nf, expected);
    }

    #[test]
    fn commuting_cartan_is_fixed() {
        let mut pbw = Pbw::new(AffineGl::critical(2));
        let w = [Letter::Gen(e(1, 1, -1)), Letter::Gen(e(2, 2, -1))];
        assert_eq!(pbw.normal_form_word(&w), NCPoly::monomial(mono(&[e(1, 1, -1), e(2, 2, -1)]), Scalar::one()));
    }

    #[test]
    fn swapping_root_vectors() {
        // e_12[-1] e_21[-1] = e_21[-1] e_12[-1] + e_11[-2] - e_22[-2]
        let mut pbw = Pbw::new(AffineGl::critical(2));
        let nf = pbw.normal_form_word(&[Letter::Gen(e(1, 2, -1)), Letter::Gen(e(2, 1, -1))]);
        let mut expected = NCPoly::monomial(mono(&[e(2, 1, -1), e(1, 2, -1)]), Scalar::one());
        expected.add_term(mono(&[e(1, 1, -2)]), Scalar::one());
        expected.add_term(mono(&[e(2, 2, -2)]), Scalar::from_int(-1));
        assert_eq!(nf, expected);
    }

    #[test]
    fn central_term_appears_for_opposite_degrees() {
        let mut pbw = Pbw::new(AffineGl::critical(2));
        let nf = pbw.normal_form_word(&[Letter::Gen(e(1, 2, 1)), Letter::Gen(e(2, 1, -1))]);
        assert_eq!(nf.coeff(&Monomial::unit()), Scalar::from_int(-2));
    }

    #[test]
    fn multiplication_basics() {
        let mut pbw = Pbw::new(AffineGl::critical(2));
        let m = NCPoly::generator(e(1, 2, -1));
        let m2 = NCPoly::generator(e(2, 1, -2));
        let lhs = pbw.mul(&m.scale(&Scalar::from_int(2)), &m2.scale(&Scalar::from_int(3)));
        let rhs = pbw.mul(&m, &m2).scale(&Scalar::from_int(6));
        assert_eq!(lhs, rhs);
        assert_eq!(pbw.mul(&m, &NCPoly::one()), m);
        let t = pbw.mul(&NCPoly::tau(), &NCPoly::generator(e(1, 1, -1)));
        assert_eq!(t, NCPoly::monomial(Monomial { tau: 1, gens: vec![e(1, 1, -1)] }, Scalar::one()));
    }

    #[test]
    fn projection_and_symbol() {
        let mut p = NCPoly::monomial(mono(&[e(1, 2, -1), e(2, 1, -1)]), Scalar::one());
        assert!(p.hc_project().unwrap().is_zero());
        p.add_term(mono(&[e(1, 1, -3)]), Scalar::one());
        assert_eq!(p.hc_project().unwrap(), NCPoly::generator(e(1, 1, -3)));
        assert!(NCPoly::tau().hc_project().is_err());
        assert!(NCPoly::generator(e(1, 1, 0)).hc_project().is_err());

        let sym = p.symbol();
        let mut expected = CommPoly::zero();
        expected.add_term(vec![e(1, 2, -1), e(2, 1, -1)], Scalar::one());
        assert_eq!(sym, expected);
    }

    #[test]
    fn serialization_roundtrip() {
        let mut p = NCPoly::monomial(Monomial { tau: 2, gens: vec![e(1, 1, -1)] }, Scalar::new(1, 3));
        p.add_term(mono(&[e(2, 1, -1), e(1, 2, -1)]), Scalar::from_int(-1));
        let text = serde_json::to_string(&p).unwrap();
        assert!(text.contains(r#""word":["tau^2","e[1,1;-1]"]"#), "{text}");
        let back: NCPoly = serde_json::from_str(&text).unwrap();
        assert_eq!(back, p);
        let unsorted = r#"[{"coeff":"1","word":["e[1,2;-1]","e[2,1;-1]"]}]"#;
        assert!(serde_json::from_str::<NCPoly>(unsorted).is_err());
    }
}
