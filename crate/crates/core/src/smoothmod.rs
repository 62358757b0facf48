//! Root modules `V_r = Ind(𝔨_r ⊕ ℂ𝟙 → ĝl_n)` at the critical level, the
//! vertex-algebra Fourier action of vacuum states on them, and the
//! vanishing-threshold verifier for the Segal–Sugawara operators.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::affine::{AffineGl, Gen, LieElement};
use crate::diffop::Oper;
use crate::error::{Error, Result};
use crate::laurent::Laurent;
use crate::pbw::{write_terms, NCPoly};
use crate::scalar::Scalar;
use crate::sugawara::ss_vectors;

/// Depths `r(i, j)`: the subalgebra `𝔨_r` is spanned by `e_ij[u]` with
/// `u >= r(i, j)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RootFunctionRepr", into = "RootFunctionRepr")]
pub struct RootFunction {
    values: Vec<Vec<i64>>,
}

#[derive(Serialize, Deserialize)]
struct RootFunctionRepr {
    n: usize,
    values: Vec<Vec<i64>>,
}

impl TryFrom<RootFunctionRepr> for RootFunction {
    type Error = Error;

    fn try_from(repr: RootFunctionRepr) -> Result<Self> {
        if repr.values.len() != repr.n {
            return Err(Error::DimensionMismatch { expected: repr.n, found: repr.values.len() });
        }
        RootFunction::new(repr.values)
    }
}

impl From<RootFunction> for RootFunctionRepr {
    fn from(rf: RootFunction) -> Self {
        RootFunctionRepr { n: rf.n(), values: rf.values }
    }
}

impl RootFunction {
    /// Validates nonnegativity, positive diagonal and `r(i,j) + r(j,k) >= r(i,k)`.
    pub fn new(values: Vec<Vec<i64>>) -> Result<Self> {
        let rf = RootFunction::unchecked(values)?;
        let n = rf.n();
        for i in 1..=n {
            if rf.get(i, i) <= 0 {
                return Err(Error::InvalidRootFunction(format!("r({i},{i}) must be positive")));
            }
        }
        rf.check_subadditive()?;
        Ok(rf)
    }

    fn unchecked(values: Vec<Vec<i64>>) -> Result<Self> {
        let n = values.len();
        if n == 0 {
            return Err(Error::InvalidRootFunction("rank must be positive".into()));
        }
        for row in &values {
            if row.len() != n {
                return Err(Error::DimensionMismatch { expected: n, found: row.len() });
            }
            if let Some(v) = row.iter().find(|&&v| v < 0) {
                return Err(Error::InvalidRootFunction(format!("negative depth {v}")));
            }
        }
        Ok(RootFunction { values })
    }

    fn check_subadditive(&self) -> Result<()> {
        let n = self.n();
        for i in 1..=n {
            for j in 1..=n {
                for k in 1..=n {
                    if self.get(i, j) + self.get(j, k) < self.get(i, k) {
                        return Err(Error::InvalidRootFunction(format!(
                            "r({i},{j}) + r({j},{k}) < r({i},{k})"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// `t^m gl_n[[t]]`.
    pub fn constant(n: usize, m: i64) -> Result<Self> {
        if m <= 0 {
            return Err(Error::Domain(format!("congruence depth must be positive, got {m}")));
        }
        RootFunction::new(vec![vec![m; n]; n])
    }

    /// `r(i,j) = 1 - ⌈x_i - x_j - r⌉`, which on the diagonal is `1 + ⌊r⌋`.
    pub fn moy_prasad(x: &[Scalar], r: &Scalar) -> Result<Self> {
        if r.is_negative() {
            return Err(Error::Domain(format!("Moy–Prasad depth must be nonnegative, got {r}")));
        }
        let values = x
            .iter()
            .map(|xi| {
                x.iter()
                    .map(|xj| {
                        let c = (xi - xj - r).ceil();
                        1 - c.to_i64().expect("depth fits in i64")
                    })
                    .collect()
            })
            .collect();
        RootFunction::new(values)
    }

    /// Depths of `𝔨_m^0`: bottom row `m`, last column above it `0`, else `1`.
    pub fn km0(n: usize, m: i64) -> Result<Self> {
        if m <= 0 {
            return Err(Error::Domain(format!("conductor depth must be positive, got {m}")));
        }
        let values = (1..=n)
            .map(|i| {
                (1..=n)
                    .map(|j| {
                        if i == n {
                            m
                        } else if j == n {
                            0
                        } else {
                            1
                        }
                    })
                    .collect()
            })
            .collect();
        RootFunction::new(values)
    }

    /// `r = 0`: the vacuum module `V_κ(ĝl_n)`. Not a root function in the
    /// strict sense (the diagonal vanishes) and only used to act on states.
    pub fn vacuum(n: usize) -> Self {
        RootFunction { values: vec![vec![0; n]; n] }
    }

    pub fn n(&self) -> usize {
        self.values.len()
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.values[i - 1][j - 1]
    }

    pub fn values(&self) -> &[Vec<i64>] {
        &self.values
    }

    pub fn depth(&self, g: Gen) -> i64 {
        self.get(g.row(), g.col())
    }

    /// `e_ij[u]` with `u < r(i, j)` acts freely on `v_0`.
    pub fn is_creation(&self, g: Gen) -> bool {
        (g.deg as i64) < self.depth(g)
    }

    /// Extra margin needed by the annihilation estimate when some pairing
    /// `e_ab[u] e_ba[-u]` lies in `𝔨_r` from both sides (only for `r(a,a) = 0`).
    fn slack(&self) -> i64 {
        let n = self.n();
        if (1..=n).any(|i| self.get(i, i) == 0) {
            1
        } else {
            0
        }
    }

    /// `Σ_i r(i,i)`-free headroom `Σ (r(y) - u)` over the factors `y = e[u]` of a word.
    pub fn headroom(&self, word: &[Gen]) -> i64 {
        word.iter().map(|&g| self.depth(g) - g.deg as i64).sum()
    }
}

impl fmt::Display for RootFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .values
            .iter()
            .map(|row| row.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(","))
            .collect();
        write!(f, "[{}]", rows.join("; "))
    }
}

/// Finite combination of creation monomials `y_1 ⋯ y_k v_0`, each word sorted
/// in the PBW order.
#[derive(Clone, Default, PartialEq, Eq)]
pub struct ModuleVector {
    terms: BTreeMap<Vec<Gen>, Scalar>,
}

impl ModuleVector {
    pub fn zero() -> Self {
        ModuleVector::default()
    }

    /// The highest vector `v_0`.
    pub fn vacuum() -> Self {
        ModuleVector::monomial(Vec::new(), Scalar::one())
    }

    pub fn monomial(word: Vec<Gen>, c: Scalar) -> Self {
        let mut out = ModuleVector::zero();
        out.add_term(word, c);
        out
    }

    pub fn add_term(&mut self, word: Vec<Gen>, c: Scalar) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(word) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &ModuleVector, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        for (w, v) in &other.terms {
            self.add_term(w.clone(), v * c);
        }
    }

    pub fn scale(&self, c: &Scalar) -> ModuleVector {
        let mut out = ModuleVector::zero();
        out.add_scaled(self, c);
        out
    }

    pub fn sub(&self, other: &ModuleVector) -> ModuleVector {
        let mut out = self.clone();
        out.add_scaled(other, &Scalar::from_int(-1));
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<Gen>, &Scalar)> {
        self.terms.iter()
    }

    pub fn coeff(&self, word: &[Gen]) -> Scalar {
        self.terms.get(word).cloned().unwrap_or_else(Scalar::zero)
    }

    /// Largest headroom over the monomials; `0` for the zero vector.
    pub fn headroom(&self, rf: &RootFunction) -> i64 {
        self.terms.keys().map(|w| rf.headroom(w)).max().unwrap_or(0)
    }

    /// Every word sorted and built from creation generators of `rf`.
    pub fn is_canonical(&self, rf: &RootFunction) -> bool {
        self.terms
            .keys()
            .all(|w| w.windows(2).all(|p| p[0] <= p[1]) && w.iter().all(|&g| rf.is_creation(g)))
    }
}

impl fmt::Display for ModuleVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_terms(f, self.terms.iter().map(|(w, c)| (word_with_vacuum(w), c)))
    }
}

impl fmt::Debug for ModuleVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

fn word_with_vacuum(w: &[Gen]) -> String {
    let mut parts: Vec<String> = w.iter().map(|g| g.to_string()).collect();
    parts.push("v0".into());
    parts.join("·")
}

#[derive(Serialize, Deserialize)]
struct WordTerm {
    coeff: Scalar,
    word: Vec<Gen>,
}

impl Serialize for ModuleVector {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let terms: Vec<WordTerm> =
            self.terms.iter().map(|(w, c)| WordTerm { coeff: c.clone(), word: w.clone() }).collect();
        terms.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for ModuleVector {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let terms = Vec::<WordTerm>::deserialize(deserializer)?;
        let mut out = ModuleVector::zero();
        for t in terms {
            if t.word.windows(2).any(|p| p[0] > p[1]) {
                return Err(serde::de::Error::custom("module words must be sorted"));
            }
            out.add_term(t.word, t.coeff);
        }
        Ok(out)
    }
}

/// A vector of the vacuum module, `Σ c · x_{n_1} ⋯ x_{n_k} |0⟩` with all
/// `n_i < 0`. Words are kept as given (not reordered).
#[derive(Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct State {
    terms: BTreeMap<Vec<Gen>, Scalar>,
}

impl State {
    pub fn vacuum() -> Self {
        State::word(Vec::new()).expect("empty word is a state")
    }

    pub fn word(gens: Vec<Gen>) -> Result<Self> {
        let mut out = State::default();
        out.add_term(gens, Scalar::one())?;
        Ok(out)
    }

    pub fn add_term(&mut self, gens: Vec<Gen>, c: Scalar) -> Result<()> {
        if let Some(g) = gens.iter().find(|g| g.deg >= 0) {
            return Err(Error::Domain(format!("state factor {g} has nonnegative degree")));
        }
        if c.is_zero() {
            return Ok(());
        }
        let entry = self.terms.entry(gens.clone()).or_insert_with(Scalar::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&gens);
        }
        Ok(())
    }

    /// An element of `U(g^-)` applied to `|0⟩`.
    pub fn from_ncpoly(p: &NCPoly) -> Result<Self> {
        let mut out = State::default();
        for (m, c) in p.terms() {
            if m.tau > 0 {
                return Err(Error::Domain("states cannot contain tau".into()));
            }
            out.add_term(m.gens.clone(), c.clone())?;
        }
        Ok(out)
    }

    /// A vector of the vacuum module computed by [`Module`] with
    /// [`RootFunction::vacuum`].
    pub fn from_vacuum_vector(v: &ModuleVector) -> Result<Self> {
        let mut out = State::default();
        for (w, c) in v.terms() {
            out.add_term(w.clone(), c.clone())?;
        }
        Ok(out)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<Gen>, &Scalar)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl fmt::Display for State {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let text = |w: &Vec<Gen>| {
            let mut parts: Vec<String> = w.iter().map(|g| g.to_string()).collect();
            parts.push("|0>".into());
            parts.join("·")
        };
        write_terms(f, self.terms.iter().map(|(w, c)| (text(w), c)))
    }
}

impl fmt::Debug for State {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// `Σ_i n_i >= Σ_i r(α_i)`: the word then kills `v_0`.
pub fn depth_exceeded(word: &[Gen], rf: &RootFunction) -> bool {
    let degrees: i64 = word.iter().map(|g| g.deg as i64).sum();
    let depths: i64 = word.iter().map(|&g| rf.depth(g)).sum();
    degrees >= depths
}

/// `Σ r(α_i) - Σ n_i - k`, the closed-form estimate for a word acting on `v_0`.
pub fn estimate_bound(word: &[Gen], rf: &RootFunction) -> i64 {
    word.iter().map(|&g| rf.depth(g) - g.deg as i64 - 1).sum()
}

type FourierKey = (Vec<Gen>, i64, Vec<Gen>);

/// The root module `V_r` at the critical level with memoized action tables.
/// One instance per computation; nothing is shared between instances.
pub struct Module {
    algebra: AffineGl,
    rf: RootFunction,
    act_memo: HashMap<(Gen, Vec<Gen>), ModuleVector>,
    fourier_memo: HashMap<FourierKey, ModuleVector>,
    bound_memo: HashMap<(Vec<Gen>, Vec<Gen>), i64>,
}

impl Module {
    pub fn new(rf: RootFunction) -> Self {
        let algebra = AffineGl::critical(rf.n());
        Module::with_algebra(algebra, rf)
    }

    /// The vacuum module `V_κc(ĝl_n)`, in which states live.
    pub fn new_vacuum(n: usize) -> Self {
        Module::new(RootFunction::vacuum(n))
    }

    /// Arbitrary level; centrality statements only hold at the critical one.
    pub fn with_algebra(algebra: AffineGl, rf: RootFunction) -> Self {
        assert_eq!(algebra.n(), rf.n(), "rank mismatch between algebra and root function");
        Module {
            algebra,
            rf,
            act_memo: HashMap::new(),
            fourier_memo: HashMap::new(),
            bound_memo: HashMap::new(),
        }
    }

    pub fn root_function(&self) -> &RootFunction {
        &self.rf
    }

    pub fn algebra(&self) -> &AffineGl {
        &self.algebra
    }

    /// `x_j · w = 0` whenever `j >= generator_bound(x, w)`.
    pub fn generator_bound(&self, g: Gen, word: &[Gen]) -> i64 {
        self.rf.depth(g) + self.rf.headroom(word) + self.rf.slack()
    }

    /// `g · (y_1 ⋯ y_k v_0)` in the creation basis.
    pub fn act_monomial(&mut self, g: Gen, word: &[Gen]) -> ModuleVector {
        let key = (g, word.to_vec());
        if let Some(v) = self.act_memo.get(&key) {
            return v.clone();
        }
        let out = self.act_uncached(g, word);
        self.act_memo.insert(key, out.clone());
        out
    }

    fn act_uncached(&mut self, g: Gen, word: &[Gen]) -> ModuleVector {
        let creation = self.rf.is_creation(g);
        let Some((&first, rest)) = word.split_first() else {
            return if creation { ModuleVector::monomial(vec![g], Scalar::one()) } else { ModuleVector::zero() };
        };
        if creation && g <= first {
            let mut w = Vec::with_capacity(word.len() + 1);
            w.push(g);
            w.extend_from_slice(word);
            return ModuleVector::monomial(w, Scalar::one());
        }
        if (g.deg as i64) >= self.generator_bound(g, word) {
            return ModuleVector::zero();
        }
        // g y_1 R = y_1 (g R) + [g, y_1] R
        let inner = self.act_monomial(g, rest);
        let mut out = self.act_vector(first, &inner);
        let bracket = self.algebra.bracket(g, first);
        out.add_scaled(&self.act_lie_monomial(&bracket, rest), &Scalar::one());
        out
    }

    fn act_lie_monomial(&mut self, x: &LieElement, word: &[Gen]) -> ModuleVector {
        let mut out = ModuleVector::monomial(word.to_vec(), x.central.clone());
        for (&g, c) in &x.gens {
            let v = self.act_monomial(g, word);
            out.add_scaled(&v, c);
        }
        out
    }

    pub fn act_vector(&mut self, g: Gen, v: &ModuleVector) -> ModuleVector {
        let mut out = ModuleVector::zero();
        for (w, c) in v.terms() {
            let r = self.act_monomial(g, w);
            out.add_scaled(&r, c);
        }
        out
    }

    /// `x_1 ⋯ x_k · v`, the rightmost factor acting first.
    pub fn apply_word(&mut self, word: &[Gen], v: &ModuleVector) -> ModuleVector {
        let mut out = v.clone();
        for &g in word.iter().rev() {
            if out.is_zero() {
                break;
            }
            out = self.act_vector(g, &out);
        }
        out
    }

    /// Certified `N*` with `A_(s) · (y_1 ⋯ y_k v_0) = 0` for all `s >= N*`,
    /// for a single word `A`. Built from the same recursion as
    /// [`Module::fourier_word`], using actual vanishing of the inner
    /// generator actions.
    pub fn word_bound(&mut self, state_word: &[Gen], word: &[Gen]) -> i64 {
        let Some((&x, rest)) = state_word.split_first() else {
            return 0;
        };
        let key = (state_word.to_vec(), word.to_vec());
        if let Some(&b) = self.bound_memo.get(&key) {
            return b;
        }
        let m = (-(x.deg as i64)) - 1;
        let mut bound = self.word_bound(rest, word);
        for j in 0..self.generator_bound(x, word) {
            let w = self.act_monomial(x.at(j as i32), word);
            if w.is_zero() {
                continue;
            }
            let inner = self.vector_bound(rest, &w);
            bound = bound.max(inner + j + m + 1);
        }
        self.bound_memo.insert(key, bound);
        bound
    }

    fn vector_bound(&mut self, state_word: &[Gen], v: &ModuleVector) -> i64 {
        let words: Vec<Vec<Gen>> = v.terms().map(|(w, _)| w.clone()).collect();
        words.iter().map(|w| self.word_bound(state_word, w)).max().unwrap_or(i64::MIN)
    }

    /// Certified annihilation bound for a state acting on a vector.
    pub fn annihilation_bound(&mut self, state: &State, v: &ModuleVector) -> i64 {
        let words: Vec<Vec<Gen>> = state.terms().map(|(w, _)| w.clone()).collect();
        let mut bound = i64::MIN;
        for w in &words {
            bound = bound.max(self.vector_bound(w, v));
        }
        bound
    }

    /// `Y(A, z) = Σ_s A_(s) z^{-s-1}`; returns `A_(s) · v`.
    pub fn fourier_act(&mut self, state: &State, s: i64, v: &ModuleVector) -> ModuleVector {
        let mut out = ModuleVector::zero();
        for (sw, cs) in state.terms() {
            for (w, cv) in v.terms() {
                let r = self.fourier_word(sw, s, w);
                out.add_scaled(&r, &(cs * cv));
            }
        }
        out
    }

    /// Normally ordered product recursion for `A = x_{-m-1} B`:
    /// `A_(s) = Σ_{j<0} c_j x_j B_(s-j-m-1) + Σ_{j>=0} c_j B_(s-j-m-1) x_j`
    /// with `c_j = binom(-j-1, m)`, the mode weights of `∂^m x(z) / m!`.
    pub fn fourier_word(&mut self, state_word: &[Gen], s: i64, word: &[Gen]) -> ModuleVector {
        let Some((&x, rest)) = state_word.split_first() else {
            return if s == -1 { ModuleVector::monomial(word.to_vec(), Scalar::one()) } else { ModuleVector::zero() };
        };
        if s >= self.word_bound(state_word, word) {
            return ModuleVector::zero();
        }
        let key = (state_word.to_vec(), s, word.to_vec());
        if let Some(v) = self.fourier_memo.get(&key) {
            return v.clone();
        }
        let m = (-(x.deg as i64)) - 1;
        let mut out = ModuleVector::zero();

        let inner_bound = self.word_bound(rest, word);
        for j in (s - m - inner_bound)..=(-m - 1) {
            let inner = self.fourier_word(rest, s - j - m - 1, word);
            if inner.is_zero() {
                continue;
            }
            let moved = self.act_vector(x.at(j as i32), &inner);
            out.add_scaled(&moved, &mode_weight(j, m));
        }
        for j in 0..self.generator_bound(x, word) {
            let w = self.act_monomial(x.at(j as i32), word);
            if w.is_zero() {
                continue;
            }
            let c = mode_weight(j, m);
            for (ww, cw) in w.terms() {
                let r = self.fourier_word(rest, s - j - m - 1, ww);
                out.add_scaled(&r, &(&c * cw));
            }
        }
        self.fourier_memo.insert(key, out.clone());
        out
    }

    /// The expansion of `A_(s) · v` for a single state word as a list of
    /// mode words (applied right to left), before straightening.
    pub fn fourier_trace(&mut self, state_word: &[Gen], s: i64, v: &ModuleVector) -> Vec<(Scalar, Vec<Gen>)> {
        let Some((&x, rest)) = state_word.split_first() else {
            return if s == -1 && !v.is_zero() { vec![(Scalar::one(), Vec::new())] } else { Vec::new() };
        };
        let m = (-(x.deg as i64)) - 1;
        let mut out = Vec::new();
        let inner_bound = self.vector_bound(rest, v);
        if inner_bound != i64::MIN {
            for j in (s - m - inner_bound)..=(-m - 1) {
                let c = mode_weight(j, m);
                for (ci, w) in self.fourier_trace(rest, s - j - m - 1, v) {
                    let mut word = vec![x.at(j as i32)];
                    word.extend(w);
                    out.push((&c * &ci, word));
                }
            }
        }
        let top = v.terms().map(|(w, _)| self.generator_bound(x, w)).max().unwrap_or(0);
        for j in 0..top {
            let xv = self.act_vector(x.at(j as i32), v);
            if xv.is_zero() {
                continue;
            }
            let c = mode_weight(j, m);
            for (ci, mut w) in self.fourier_trace(rest, s - j - m - 1, &xv) {
                w.push(x.at(j as i32));
                out.push((&c * &ci, w));
            }
        }
        out
    }
}

fn mode_weight(j: i64, m: i64) -> Scalar {
    Scalar::binomial(-j - 1, m as u32)
}

/// `S_{ℓ,[N]} · v_0` in `V_r`.
pub fn ss_operator_act(n: usize, ell: usize, big_n: i64, rf: &RootFunction) -> Result<ModuleVector> {
    if ell == 0 || ell > n {
        return Err(Error::Domain(format!("ell must lie in 1..={n}, got {ell}")));
    }
    if rf.n() != n {
        return Err(Error::DimensionMismatch { expected: n, found: rf.n() });
    }
    let family = ss_vectors(n);
    let state = State::from_ncpoly(family.s(ell))?;
    let mut module = Module::new(rf.clone());
    Ok(module.fourier_act(&state, big_n, &ModuleVector::vacuum()))
}

/// The three families of root modules with a predicted vanishing threshold.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Case {
    /// `t^m gl_n[[t]]`, threshold `d_ℓ · m` with `d_ℓ = ℓ`.
    Congruence { m: i64 },
    /// `𝔨_m^0`, threshold `m + ℓ - 1`.
    Km0 { m: i64 },
    /// Moy–Prasad filtration at `x` of depth `r`, threshold `⌈(r + 1) ℓ⌉`.
    MoyPrasad { x: Vec<Scalar>, r: Scalar },
}

impl Case {
    pub fn root_function(&self, n: usize) -> Result<RootFunction> {
        match self {
            Case::Congruence { m } => RootFunction::constant(n, *m),
            Case::Km0 { m } => RootFunction::km0(n, *m),
            Case::MoyPrasad { x, r } => {
                if x.len() != n {
                    return Err(Error::DimensionMismatch { expected: n, found: x.len() });
                }
                RootFunction::moy_prasad(x, r)
            }
        }
    }

    pub fn threshold(&self, ell: usize) -> i64 {
        let ell = ell as i64;
        match self {
            Case::Congruence { m } => ell * m,
            Case::Km0 { m } => m + ell - 1,
            Case::MoyPrasad { r, .. } => {
                let t = (r + &Scalar::one()) * Scalar::from_int(ell);
                t.ceil().to_i64().expect("threshold fits in i64")
            }
        }
    }

    pub fn label(&self) -> String {
        match self {
            Case::Congruence { m } => format!("congruence(m={m})"),
            Case::Km0 { m } => format!("km0(m={m})"),
            Case::MoyPrasad { x, r } => {
                let xs: Vec<String> = x.iter().map(|v| v.to_string()).collect();
                format!("moyprasad(x=({}), r={r})", xs.join(","))
            }
        }
    }
}

/// Largest nonvanishing `S_{ℓ,[N]} · v_0` found by the scan.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub ell: usize,
    #[serde(rename = "N")]
    pub big_n: i64,
    pub vector: ModuleVector,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VanishingReport {
    pub case: String,
    pub n: usize,
    pub root_function: RootFunction,
    pub thresholds_theoretical: Vec<i64>,
    /// Smallest `N_0` in the scan with `S_{ℓ,[N]} · v_0 = 0` for all scanned `N >= N_0`.
    pub observed_min_vanishing: Vec<i64>,
    /// Certified: zero for every `N` at or above this value.
    pub certified_bounds: Vec<i64>,
    /// Vanishing confirmed for every `N >= threshold` (scan plus certified tail).
    pub threshold_verified: Vec<bool>,
    pub scan: Vec<(i64, i64)>,
    pub witnesses: Vec<Option<Witness>>,
    pub irregularity_bound: Option<u64>,
}

impl VanishingReport {
    pub fn all_verified(&self) -> bool {
        self.threshold_verified.iter().all(|&b| b)
    }
}

/// Scans `N` over `[threshold - window, max(threshold + window, certified)]`
/// for every `ℓ`, fanning the cells out over the current rayon pool.
pub fn vanishing_report(n: usize, case: &Case, window: i64) -> Result<VanishingReport> {
    let rf = case.root_function(n)?;
    let family = ss_vectors(n);
    let states: Vec<State> = family.s.iter().map(State::from_ncpoly).collect::<Result<_>>()?;
    let thresholds: Vec<i64> = (1..=n).map(|ell| case.threshold(ell)).collect();

    let certified: Vec<i64> = states
        .par_iter()
        .map(|st| Module::new(rf.clone()).annihilation_bound(st, &ModuleVector::vacuum()))
        .collect();
    let scan: Vec<(i64, i64)> = (0..n)
        .map(|k| (thresholds[k] - window, (thresholds[k] + window).max(certified[k] - 1)))
        .collect();

    let cells: Vec<(usize, i64)> =
        (0..n).flat_map(|k| (scan[k].0..=scan[k].1).map(move |big_n| (k, big_n))).collect();
    let results: Vec<ModuleVector> = cells
        .par_iter()
        .map(|&(k, big_n)| Module::new(rf.clone()).fourier_act(&states[k], big_n, &ModuleVector::vacuum()))
        .collect();

    let mut observed = Vec::with_capacity(n);
    let mut verified = Vec::with_capacity(n);
    let mut witnesses = Vec::with_capacity(n);
    for k in 0..n {
        let row: Vec<(i64, &ModuleVector)> = cells
            .iter()
            .zip(&results)
            .filter(|((kk, _), _)| *kk == k)
            .map(|((_, big_n), v)| (*big_n, v))
            .collect();
        let last_nonzero = row.iter().rev().find(|(_, v)| !v.is_zero());
        observed.push(last_nonzero.map_or(scan[k].0, |(big_n, _)| big_n + 1));
        witnesses.push(last_nonzero.map(|(big_n, v)| Witness { ell: k + 1, big_n: *big_n, vector: (*v).clone() }));
        let tail_covered = certified[k] <= scan[k].1 + 1;
        let scanned_zero = row.iter().filter(|(big_n, _)| *big_n >= thresholds[k]).all(|(_, v)| v.is_zero());
        verified.push(tail_covered && scanned_zero);
    }

    let irregularity_bound = match case {
        Case::Km0 { m } => Some((m - 1) as u64),
        _ => None,
    };
    Ok(VanishingReport {
        case: case.label(),
        n,
        root_function: rf,
        thresholds_theoretical: thresholds,
        observed_min_vanishing: observed,
        certified_bounds: certified,
        threshold_verified: verified,
        scan,
        witnesses,
        irregularity_bound,
    })
}

/// `Irr(χ) <= max(0, max_ℓ (pole_ℓ - ℓ))` for pole bounds `-ν(a_ℓ) <= pole_ℓ`.
pub fn irregularity_from_pole_bounds(pole_bounds: &[i64]) -> u64 {
    let worst = pole_bounds
        .iter()
        .enumerate()
        .map(|(k, &p)| p - (k as i64 + 1))
        .max()
        .unwrap_or(0);
    worst.max(0) as u64
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConductorReport {
    pub n: usize,
    pub m: i64,
    pub vanishing: VanishingReport,
    /// `-ν(a_ℓ) <= pole_bounds[ℓ-1]` for any compatible oper.
    pub pole_bounds: Vec<i64>,
    pub irregularity_bound: u64,
    pub witness_oper: Oper,
    pub witness_irregularity: u64,
    /// Normalization of the undetermined scalar relating `S_{ℓ,[N]}` to `a_{ℓ,N}`.
    pub character_scalar: Scalar,
}

/// Vanishing of `S_{ℓ,[N]}` on the `𝔨_m^0`-fixed vector forces
/// `a_{ℓ,N} = 0` for `N >= m + ℓ - 1`, hence the pole bounds and `Irr <= m - 1`.
/// A threshold that fails to verify is replaced by the certified bound.
pub fn conductor_irregularity_report(n: usize, m: i64) -> Result<ConductorReport> {
    let case = Case::Km0 { m };
    let vanishing = vanishing_report(n, &case, 1)?;
    let pole_bounds: Vec<i64> = (0..n)
        .map(|k| {
            if vanishing.threshold_verified[k] {
                vanishing.thresholds_theoretical[k]
            } else {
                vanishing.certified_bounds[k].max(vanishing.thresholds_theoretical[k])
            }
        })
        .collect();
    let irregularity_bound = irregularity_from_pole_bounds(&pole_bounds);
    let witness_oper = Oper::new(pole_bounds.iter().map(|&p| Laurent::t_pow(-p)).collect())?;
    let witness_irregularity = witness_oper.irregularity()?;
    Ok(ConductorReport {
        n,
        m,
        vanishing,
        pole_bounds,
        irregularity_bound,
        witness_oper,
        witness_irregularity,
        character_scalar: Scalar::one(),
    })
}
