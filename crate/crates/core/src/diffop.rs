//! Differential operators over Laurent series: opers, irregularity,
//! connections, cyclic vectors and the Miura transform.
//!
//! Throughout, `∂ = d/dt` and the Weyl-type commutation rule is
//! `∂·a = a·∂ + a'`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::laurent::{Laurent, Valuation};
use crate::perm::signed_permutations;
use crate::scalar::Scalar;

/// Which side of the `∂`-powers the coefficients are collected on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CoefficientSide {
    /// `Σ c_k ∂^k`
    Left,
    /// `Σ ∂^k d_k`
    Right,
}

/// A differential operator `Σ c_k ∂^k` stored with coefficients on the left.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct DiffOp {
    coeffs: Vec<Laurent>,
}

impl DiffOp {
    /// Builds from coefficients `c_0, c_1, …` of `∂^0, ∂^1, …` on the given side.
    pub fn from_coefficients(coeffs: Vec<Laurent>, side: CoefficientSide) -> Self {
        match side {
            CoefficientSide::Left => DiffOp { coeffs }.trimmed(),
            CoefficientSide::Right => {
                // ∂^k d = Σ_j binom(k, j) d^{(j)} ∂^{k-j}
                let mut out = vec![Laurent::zero(); coeffs.len()];
                for (k, d) in coeffs.iter().enumerate() {
                    let mut deriv = d.clone();
                    for j in 0..=k {
                        let term = deriv.scale(&Scalar::binomial(k as i64, j as u32));
                        out[k - j] = &out[k - j] + &term;
                        deriv = deriv.derivative();
                    }
                }
                DiffOp { coeffs: out }.trimmed()
            }
        }
    }

    pub fn d() -> Self {
        DiffOp { coeffs: vec![Laurent::zero(), Laurent::one()] }
    }

    pub fn multiplication(a: Laurent) -> Self {
        DiffOp { coeffs: vec![a] }.trimmed()
    }

    /// `∂ + a`
    pub fn first_order(a: Laurent) -> Self {
        DiffOp { coeffs: vec![a, Laurent::one()] }.trimmed()
    }

    fn trimmed(mut self) -> Self {
        while self.coeffs.last().is_some_and(|c| c.is_zero() && c.is_exact()) {
            self.coeffs.pop();
        }
        self
    }

    /// Order in `∂`; `None` for the zero operator.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Coefficients `c_0..c_n` in the requested normal form.
    pub fn coefficients(&self, side: CoefficientSide) -> Vec<Laurent> {
        match side {
            CoefficientSide::Left => self.coeffs.clone(),
            CoefficientSide::Right => {
                // c ∂^k = Σ_j (-1)^j binom(k, j) ∂^{k-j} c^{(j)}
                let mut out = vec![Laurent::zero(); self.coeffs.len()];
                for (k, c) in self.coeffs.iter().enumerate() {
                    let mut deriv = c.clone();
                    for j in 0..=k {
                        let sign = if j % 2 == 0 { 1 } else { -1 };
                        let factor = Scalar::binomial(k as i64, j as u32) * Scalar::from_int(sign);
                        out[k - j] = &out[k - j] + &deriv.scale(&factor);
                        deriv = deriv.derivative();
                    }
                }
                out
            }
        }
    }

    pub fn mul(&self, other: &DiffOp) -> DiffOp {
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return DiffOp::default();
        }
        let mut out = vec![Laurent::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() && a.is_exact() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                // a ∂^i b ∂^j = a Σ_k binom(i, k) b^{(k)} ∂^{i-k+j}
                let mut deriv = b.clone();
                for k in 0..=i {
                    if !deriv.is_zero() {
                        let term = (a * &deriv).scale(&Scalar::binomial(i as i64, k as u32));
                        out[i - k + j] = &out[i - k + j] + &term;
                    }
                    deriv = deriv.derivative();
                }
            }
        }
        DiffOp { coeffs: out }.trimmed()
    }

    pub fn add(&self, other: &DiffOp) -> DiffOp {
        let len = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..len)
            .map(|k| {
                let a = self.coeffs.get(k).cloned().unwrap_or_default();
                let b = other.coeffs.get(k).cloned().unwrap_or_default();
                &a + &b
            })
            .collect();
        DiffOp { coeffs }.trimmed()
    }
}

impl fmt::Display for DiffOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| match k {
                0 => format!("({c})"),
                1 => format!("({c})·∂"),
                _ => format!("({c})·∂^{k}"),
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// An oper of rank `n`, given by its coefficient tuple `(a_1, …, a_n)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "OperRepr", into = "OperRepr")]
pub struct Oper {
    coeffs: Vec<Laurent>,
}

#[derive(Serialize, Deserialize)]
struct OperRepr {
    rank: usize,
    a: Vec<Laurent>,
}

impl TryFrom<OperRepr> for Oper {
    type Error = Error;
    fn try_from(repr: OperRepr) -> Result<Self> {
        if repr.a.len() != repr.rank {
            return Err(Error::DimensionMismatch { expected: repr.rank, found: repr.a.len() });
        }
        Oper::new(repr.a)
    }
}

impl From<Oper> for OperRepr {
    fn from(op: Oper) -> Self {
        OperRepr { rank: op.rank(), a: op.coeffs }
    }
}

impl Oper {
    pub fn new(coeffs: Vec<Laurent>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::Domain("oper rank must be at least 1".into()));
        }
        Ok(Oper { coeffs })
    }

    pub fn rank(&self) -> usize {
        self.coeffs.len()
    }

    /// `a_i` for `1 <= i <= n`.
    pub fn a(&self, i: usize) -> &Laurent {
        &self.coeffs[i - 1]
    }

    pub fn coefficients(&self) -> &[Laurent] {
        &self.coeffs
    }

    /// Irregularity `max_{0<=i<=n} (i - ν(a_{n-i})) - n` with `a_0 = 1`.
    /// Zero coefficients are skipped.
    pub fn irregularity(&self) -> Result<u64> {
        let n = self.rank() as i64;
        let mut best = n; // the a_0 = 1 term
        for i in 0..n {
            let a = &self.coeffs[(n - i - 1) as usize];
            if let Valuation::Finite(v) = a.valuation()? {
                best = best.max(i - v);
            }
        }
        Ok((best - n) as u64)
    }

    /// The operator `∂^n + a_1 ∂^{n-1} + … + a_n` with coefficients on `side`.
    pub fn to_diffop(&self, side: CoefficientSide) -> DiffOp {
        let n = self.rank();
        let mut coeffs = vec![Laurent::zero(); n + 1];
        coeffs[n] = Laurent::one();
        for (i, a) in self.coeffs.iter().enumerate() {
            coeffs[n - i - 1] = a.clone();
        }
        DiffOp::from_coefficients(coeffs, side)
    }

    /// Companion-form connection: `e_1 = v`, `e_{k+1} = D e_k`, and
    /// `D e_n = a_1 e_n + a_2 e_{n-1} + … + a_n e_1`.
    pub fn to_connection(&self) -> Connection {
        let n = self.rank();
        let mut matrix = vec![vec![Laurent::zero(); n]; n];
        for k in 0..n.saturating_sub(1) {
            matrix[k + 1][k] = Laurent::one();
        }
        for (j, a) in self.coeffs.iter().enumerate() {
            matrix[n - 1 - j][n - 1] = a.clone();
        }
        Connection { matrix }
    }

    /// Coefficient of `t^{-N-1}` in `a_ℓ`.
    pub fn coefficient(&self, ell: usize, big_n: i64) -> Result<Scalar> {
        if ell == 0 || ell > self.rank() {
            return Err(Error::Domain(format!("index {ell} outside 1..={}", self.rank())));
        }
        self.coeffs[ell - 1].coeff(-big_n - 1)
    }
}

impl fmt::Display for Oper {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, a) in self.coeffs.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "a_{} = {}", i + 1, a)?;
        }
        Ok(())
    }
}

/// Expands `(∂ + E_11)(∂ + E_22)⋯(∂ + E_nn)` with coefficients collected on
/// `side` and returns the resulting oper coefficients.
pub fn miura_with_side(h: &[Laurent], side: CoefficientSide) -> Result<Oper> {
    let mut prod = DiffOp::multiplication(Laurent::one());
    for e in h {
        prod = prod.mul(&DiffOp::first_order(e.clone()));
    }
    let n = h.len();
    let coeffs = prod.coefficients(side);
    Oper::new((1..=n).map(|i| coeffs[n - i].clone()).collect())
}

/// Miura transform with `∂`-powers on the left and coefficients on the right,
/// the normal form matching `τ`-collection on the left in the Segal-Sugawara
/// expansion.
pub fn miura(h: &[Laurent]) -> Result<Oper> {
    miura_with_side(h, CoefficientSide::Right)
}

/// The connection `D = ∂ + A` acting on column vectors.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "ConnectionRepr", into = "ConnectionRepr")]
pub struct Connection {
    matrix: Vec<Vec<Laurent>>,
}

#[derive(Serialize, Deserialize)]
struct ConnectionRepr {
    rank: usize,
    matrix: Vec<Vec<Laurent>>,
}

impl TryFrom<ConnectionRepr> for Connection {
    type Error = Error;
    fn try_from(repr: ConnectionRepr) -> Result<Self> {
        if repr.matrix.len() != repr.rank {
            return Err(Error::DimensionMismatch { expected: repr.rank, found: repr.matrix.len() });
        }
        Connection::new(repr.matrix)
    }
}

impl From<Connection> for ConnectionRepr {
    fn from(c: Connection) -> Self {
        ConnectionRepr { rank: c.rank(), matrix: c.matrix }
    }
}

impl Connection {
    pub fn new(matrix: Vec<Vec<Laurent>>) -> Result<Self> {
        let n = matrix.len();
        if n == 0 {
            return Err(Error::Domain("connection rank must be at least 1".into()));
        }
        for row in &matrix {
            if row.len() != n {
                return Err(Error::DimensionMismatch { expected: n, found: row.len() });
            }
        }
        Ok(Connection { matrix })
    }

    pub fn diagonal(entries: Vec<Laurent>) -> Result<Self> {
        let n = entries.len();
        let mut matrix = vec![vec![Laurent::zero(); n]; n];
        for (k, e) in entries.into_iter().enumerate() {
            matrix[k][k] = e;
        }
        Connection::new(matrix)
    }

    pub fn rank(&self) -> usize {
        self.matrix.len()
    }

    pub fn matrix(&self) -> &[Vec<Laurent>] {
        &self.matrix
    }

    /// `D v = ∂v + A v`.
    pub fn apply(&self, v: &[Laurent]) -> Result<Vec<Laurent>> {
        let n = self.rank();
        if v.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: v.len() });
        }
        Ok((0..n)
            .map(|i| {
                let mut acc = v[i].derivative();
                for (a, x) in self.matrix[i].iter().zip(v) {
                    if !a.is_zero() && !x.is_zero() {
                        acc = &acc + &(a * x);
                    }
                }
                acc
            })
            .collect())
    }

    /// `[v, Dv, …, D^k v]`
    fn iterates(&self, v: &[Laurent], k: usize) -> Result<Vec<Vec<Laurent>>> {
        let mut out = vec![v.to_vec()];
        for _ in 0..k {
            let next = self.apply(out.last().expect("nonempty"))?;
            out.push(next);
        }
        Ok(out)
    }

    /// `det(v | Dv | … | D^{n-1} v)`.
    pub fn cyclicity_certificate(&self, v: &[Laurent]) -> Result<Laurent> {
        let n = self.rank();
        let iterates = self.iterates(v, n - 1)?;
        Ok(determinant_of_columns(&iterates))
    }

    /// Deterministic search for a cyclic vector with polynomial entries of
    /// degree at most `degree_bound`.
    pub fn find_cyclic_vector(&self, degree_bound: u32) -> Result<CyclicVector> {
        let n = self.rank();
        let certify = |v: Vec<Laurent>| -> Result<Option<CyclicVector>> {
            let det = self.cyclicity_certificate(&v)?;
            Ok((!det.is_zero()).then_some(CyclicVector { components: v, certificate: det }))
        };
        let basis = |k: usize| -> Vec<Laurent> {
            (0..n).map(|i| if i == k { Laurent::one() } else { Laurent::zero() }).collect()
        };

        for k in 0..n {
            if let Some(found) = certify(basis(k))? {
                return Ok(found);
            }
        }

        // staggered sums Σ t^{k i} e_i
        let d = degree_bound as i64;
        let mut stagger = 0i64;
        while stagger * (n as i64 - 1) <= d {
            let v: Vec<Laurent> = (0..n).map(|i| Laurent::t_pow(stagger * i as i64)).collect();
            if let Some(found) = certify(v)? {
                return Ok(found);
            }
            stagger += 1;
            if n == 1 {
                break;
            }
        }

        // small-support enumeration over entries c·t^e
        let mut alphabet = vec![Laurent::zero()];
        for e in 0..=d {
            for c in [1, -1, 2] {
                alphabet.push(Laurent::monomial(Scalar::from_int(c), e));
            }
        }
        let base = alphabet.len();
        let total = base.checked_pow(n as u32).unwrap_or(usize::MAX).min(1 << 20);
        for code in 1..total {
            let mut rest = code;
            let v: Vec<Laurent> = (0..n)
                .map(|_| {
                    let entry = alphabet[rest % base].clone();
                    rest /= base;
                    entry
                })
                .collect();
            if let Some(found) = certify(v)? {
                return Ok(found);
            }
        }
        Err(Error::CyclicVectorNotFound { degree_bound })
    }

    /// Oper coefficients `(a_1, …, a_n)` with `D^n v = a_1 D^{n-1} v + … + a_n v`,
    /// using the default working precision.
    pub fn to_oper(&self, v: &CyclicVector) -> Result<Oper> {
        self.to_oper_with_target(v, None)
    }

    /// As [`Connection::to_oper`], retrying with doubled working precision
    /// until every coefficient is known below `t^target`.
    pub fn to_oper_with_target(&self, v: &CyclicVector, target: Option<i64>) -> Result<Oper> {
        const ATTEMPTS: u32 = 6;
        let n = self.rank();
        let mut working = 4 * n as i64 + 8;
        for _ in 0..ATTEMPTS {
            let oper = self.solve_oper(&v.components, working)?;
            let enough = target.is_none_or(|t| {
                oper.coefficients().iter().all(|a| a.precision().is_none_or(|p| p >= t))
            });
            if enough {
                return Ok(oper);
            }
            working *= 2;
        }
        Err(Error::PrecisionExhausted { attempts: ATTEMPTS })
    }

    fn solve_oper(&self, v: &[Laurent], working: i64) -> Result<Oper> {
        let n = self.rank();
        let iterates = self.iterates(v, n)?;
        // column j (0-based) holds D^{n-1-j} v, the basis vector paired with a_{j+1}
        let columns: Vec<Vec<Laurent>> = (0..n).map(|j| iterates[n - 1 - j].clone()).collect();
        let det = determinant_of_columns(&columns);
        if det.is_zero() {
            return Err(Error::NotCyclic);
        }
        let inverse = if det.is_exact() && det.len() == 1 {
            let (e, c) = det.terms().next().map(|(e, c)| (e, c.clone())).expect("one term");
            Laurent::monomial(c.recip(), -e)
        } else {
            det.invert(working)?
        };
        let target = &iterates[n];
        let mut coeffs = Vec::with_capacity(n);
        for j in 0..n {
            let mut replaced = columns.clone();
            replaced[j] = target.clone();
            let numerator = determinant_of_columns(&replaced);
            coeffs.push(&numerator * &inverse);
        }
        Oper::new(coeffs)
    }
}

/// A vector together with its nonzero cyclicity certificate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CyclicVector {
    components: Vec<Laurent>,
    certificate: Laurent,
}

impl CyclicVector {
    /// Certifies `v` against the connection.
    pub fn certify(connection: &Connection, v: Vec<Laurent>) -> Result<Self> {
        let det = connection.cyclicity_certificate(&v)?;
        if det.is_zero() {
            return Err(Error::NotCyclic);
        }
        Ok(CyclicVector { components: v, certificate: det })
    }

    /// `e_k` (0-based), certified.
    pub fn basis(connection: &Connection, k: usize) -> Result<Self> {
        let v = (0..connection.rank())
            .map(|i| if i == k { Laurent::one() } else { Laurent::zero() })
            .collect();
        CyclicVector::certify(connection, v)
    }

    pub fn components(&self) -> &[Laurent] {
        &self.components
    }

    pub fn certificate(&self) -> &Laurent {
        &self.certificate
    }
}

/// Leibniz determinant of the matrix with the given columns.
pub fn determinant_of_columns(columns: &[Vec<Laurent>]) -> Laurent {
    let n = columns.len();
    let mut acc = Laurent::zero();
    for (perm, sign) in signed_permutations(n) {
        // Π_j M[perm(j)][j]
        let mut term = Laurent::one();
        for (j, &row) in perm.iter().enumerate() {
            let entry = &columns[j][row];
            if entry.is_zero() && entry.is_exact() {
                term = Laurent::zero();
                break;
            }
            term = &term * entry;
        }
        if !(term.is_zero() && term.is_exact()) {
            acc = &acc + &term.scale(&Scalar::from_int(sign));
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(n: i64) -> Laurent {
        Laurent::constant(Scalar::from_int(n))
    }

    #[test]
    fn d_times_t() {
        let lhs = DiffOp::d().mul(&DiffOp::multiplication(Laurent::t_pow(1)));
        let expected = DiffOp::from_coefficients(vec![Laurent::one(), Laurent::t_pow(1)], CoefficientSide::Left);
        assert_eq!(lhs, expected);
    }

    #[test]
    fn constant_coefficient_factors() {
        let prod = DiffOp::first_order(c(2)).mul(&DiffOp::first_order(c(3)));
        assert_eq!(prod.coefficients(CoefficientSide::Left), vec![c(6), c(5), c(1)]);
        let dd = DiffOp::d().mul(&DiffOp::d());
        assert_eq!(dd.coefficients(CoefficientSide::Left), vec![Laurent::zero(), Laurent::zero(), c(1)]);
    }

    #[test]
    fn miura_examples() {
        let oper = miura(&[c(2), c(3)]).unwrap();
        assert_eq!(oper.a(1), &c(5));
        assert_eq!(oper.a(2), &c(6));

        let single = miura(&[Laurent::t_pow(-1)]).unwrap();
        assert_eq!(single.a(1), &Laurent::t_pow(-1));

        let e1 = Laurent::from_ints(&[(0, 1), (1, 2), (2, -1)]);
        let e2 = Laurent::from_ints(&[(0, 3), (3, 1)]);
        let oper = miura(&[e1.clone(), e2.clone()]).unwrap();
        assert_eq!(oper.a(1), &(&e1 + &e2));
        assert_eq!(oper.a(2), &(&(&e1 * &e2) - &e1.derivative()));

        // coefficients on the left instead place E_22' in the constant term
        let left = miura_with_side(&[e1.clone(), e2.clone()], CoefficientSide::Left).unwrap();
        assert_eq!(left.a(2), &(&(&e1 * &e2) + &e2.derivative()));
    }

    #[test]
    fn irregularity_examples() {
        let rank_one = Oper::new(vec![Laurent::t_pow(-2)]).unwrap();
        assert_eq!(rank_one.irregularity().unwrap(), 1);
        let holo = Oper::new(vec![Laurent::from_ints(&[(0, 1), (2, 5)]), Laurent::t_pow(3)]).unwrap();
        assert_eq!(holo.irregularity().unwrap(), 0);
        let slopes = Oper::new(vec![Laurent::zero(), Laurent::t_pow(-3)]).unwrap();
        assert_eq!(slopes.irregularity().unwrap(), 1);
        let hidden = Oper::new(vec![Laurent::zero().with_precision(2)]).unwrap();
        assert!(matches!(hidden.irregularity(), Err(Error::UndeterminedValuation { .. })));
    }

    #[test]
    fn companion_connection() {
        let f = Laurent::from_ints(&[(-2, 1), (1, 4)]);
        let one = Oper::new(vec![f.clone()]).unwrap().to_connection();
        assert_eq!(one.matrix(), &[vec![f.clone()]]);

        let a1 = Laurent::t_pow(-1);
        let a2 = Laurent::t_pow(-2);
        let conn = Oper::new(vec![a1.clone(), a2.clone()]).unwrap().to_connection();
        let e1 = vec![Laurent::one(), Laurent::zero()];
        let e2 = vec![Laurent::zero(), Laurent::one()];
        assert_eq!(conn.apply(&e1).unwrap(), e2);
        assert_eq!(conn.apply(&e2).unwrap(), vec![a2, a1]);
    }

    #[test]
    fn apply_examples() {
        let zero = Connection::new(vec![vec![Laurent::zero()]]).unwrap();
        assert_eq!(zero.apply(&[Laurent::t_pow(1)]).unwrap(), vec![Laurent::one()]);
        let pole = Connection::new(vec![vec![Laurent::t_pow(-1)]]).unwrap();
        assert_eq!(pole.apply(&[Laurent::one()]).unwrap(), vec![Laurent::t_pow(-1)]);
        let diag = Connection::diagonal(vec![Laurent::zero(), Laurent::t_pow(-1)]).unwrap();
        assert_eq!(
            diag.apply(&[Laurent::one(), Laurent::one()]).unwrap(),
            vec![Laurent::zero(), Laurent::t_pow(-1)]
        );
        assert!(matches!(diag.apply(&[Laurent::one()]), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn cyclic_search_on_diagonal() {
        let diag = Connection::diagonal(vec![Laurent::zero(), Laurent::t_pow(-1)]).unwrap();
        assert!(diag.cyclicity_certificate(&[Laurent::one(), Laurent::zero()]).unwrap().is_zero());
        let found = diag.find_cyclic_vector(2).unwrap();
        assert_eq!(found.components(), &[Laurent::one(), Laurent::one()]);
        assert_eq!(found.certificate(), &Laurent::t_pow(-1));

        let rank_one = Connection::new(vec![vec![Laurent::t_pow(-5)]]).unwrap();
        assert_eq!(rank_one.find_cyclic_vector(0).unwrap().components(), &[Laurent::one()]);
    }

    #[test]
    fn extraction_resubstitutes() {
        let diag = Connection::diagonal(vec![Laurent::zero(), Laurent::t_pow(-1)]).unwrap();
        let v = diag.find_cyclic_vector(2).unwrap();
        let oper = diag.to_oper(&v).unwrap();
        let it = diag.iterates(v.components(), 2).unwrap();
        for ((d2, d1), d0) in it[2].iter().zip(&it[1]).zip(&it[0]) {
            let residual = &(d2 - &(oper.a(1) * d1)) - &(oper.a(2) * d0);
            assert!(residual.terms().next().is_none(), "residual {residual}");
        }
        assert!(matches!(
            diag.to_oper(&CyclicVector { components: vec![Laurent::one(), Laurent::zero()], certificate: Laurent::one() }),
            Err(Error::NotCyclic)
        ));
    }

    #[test]
    fn rank_one_extraction() {
        let f = Laurent::from_ints(&[(-3, 2), (0, 1)]);
        let conn = Connection::new(vec![vec![f.clone()]]).unwrap();
        let v = CyclicVector::basis(&conn, 0).unwrap();
        assert_eq!(conn.to_oper(&v).unwrap().a(1), &f);
    }

    #[test]
    fn oper_json() {
        let oper = Oper::new(vec![Laurent::t_pow(-1), Laurent::t_pow(-2)]).unwrap();
        let text = serde_json::to_string(&oper).unwrap();
        assert_eq!(text, r#"{"rank":2,"a":[{"terms":[[-1,"1"]]},{"terms":[[-2,"1"]]}]}"#);
        assert_eq!(serde_json::from_str::<Oper>(&text).unwrap(), oper);
        assert!(serde_json::from_str::<Oper>(r#"{"rank":3,"a":[[]]}"#).is_err());
    }
}
