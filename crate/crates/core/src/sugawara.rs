//! Segal–Sugawara vectors of `ĝl_n` at the critical level from the column
//! determinant of `τ + E[-1]`, their Cartan images, and the row property.

use serde::Serialize;

use crate::affine::{AffineGl, Gen};
use crate::diffop::Oper;
use crate::error::Result;
use crate::pbw::{Letter, Monomial, NCPoly, Pbw};
use crate::perm::signed_permutations;
use crate::scalar::Scalar;

/// Column determinant `Σ_σ sgn σ · a_{σ(1)1} ⋯ a_{σ(n)n}`, factors multiplied
/// in column order and the result normally ordered.
pub fn cdet(pbw: &mut Pbw, matrix: &[Vec<NCPoly>]) -> NCPoly {
    let n = matrix.len();
    let mut raw: Vec<(Scalar, Vec<Letter>)> = Vec::new();
    for (perm, sign) in signed_permutations(n) {
        let mut partial: Vec<(Scalar, Vec<Letter>)> = vec![(Scalar::from_int(sign), Vec::new())];
        for (col, &row) in perm.iter().enumerate() {
            let entry = &matrix[row][col];
            let mut next = Vec::with_capacity(partial.len() * entry.len());
            for (c, w) in &partial {
                for (m, v) in entry.terms() {
                    let mut word = w.clone();
                    word.extend(m.letters());
                    next.push((c * v, word));
                }
            }
            partial = next;
            if partial.is_empty() {
                break;
            }
        }
        raw.extend(partial);
    }
    pbw.normal_form(&raw)
}

/// `τ·Id + E[-1]`, the matrix with `δ_ij τ + e_ij[-1]` in position `(i, j)`.
pub fn tau_plus_e(n: usize) -> Vec<Vec<NCPoly>> {
    (1..=n)
        .map(|i| {
            (1..=n)
                .map(|j| {
                    let entry = NCPoly::generator(Gen::new(i, j, -1));
                    if i == j {
                        entry.add(&NCPoly::tau())
                    } else {
                        entry
                    }
                })
                .collect()
        })
        .collect()
}

/// The family `S_1..S_n` together with the independently computed `ω_1..ω_n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SSFamily {
    pub n: usize,
    #[serde(rename = "S")]
    pub s: Vec<NCPoly>,
    pub omega: Vec<NCPoly>,
}

impl SSFamily {
    /// `S_ℓ` for `1 <= ℓ <= n`.
    pub fn s(&self, ell: usize) -> &NCPoly {
        &self.s[ell - 1]
    }

    pub fn omega(&self, ell: usize) -> &NCPoly {
        &self.omega[ell - 1]
    }
}

/// Reads `S_ℓ` off `cdet(τ + E[-1]) = τ^n + τ^{n-1} S_1 + … + S_n` and `ω_ℓ`
/// off `(τ + e_11[-1]) ⋯ (τ + e_nn[-1]) = τ^n + τ^{n-1} ω_1 + … + ω_n`.
pub fn ss_vectors(n: usize) -> SSFamily {
    assert!(n >= 1, "rank must be positive");
    let mut pbw = Pbw::new(AffineGl::critical(n));
    let det = cdet(&mut pbw, &tau_plus_e(n));
    debug_assert_eq!(det.tau_coefficient(n as u32), NCPoly::one());
    let s = (1..=n).map(|ell| det.tau_coefficient((n - ell) as u32)).collect();

    let mut product = NCPoly::one();
    for i in 1..=n {
        let factor = NCPoly::tau().add(&NCPoly::generator(Gen::new(i, i, -1)));
        product = pbw.mul(&product, &factor);
    }
    let omega = (1..=n).map(|ell| product.tau_coefficient((n - ell) as u32)).collect();
    SSFamily { n, s, omega }
}

/// Outcome of the row check: at most one factor per monomial lies in row `n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RowCheck {
    pub holds: bool,
    pub witness: Option<String>,
}

pub fn check_row_property(s: &NCPoly, n: usize) -> RowCheck {
    let offending = s.terms().map(|(m, _)| m).find(|m| bottom_row_factors(m, n) > 1);
    RowCheck { holds: offending.is_none(), witness: offending.map(|m| m.to_string()) }
}

/// Number of factors `e_ij[u]` with `i = n`.
pub fn bottom_row_factors(m: &Monomial, n: usize) -> usize {
    m.gens.iter().filter(|g| g.row() == n).count()
}

/// Value `a_{ℓ,N}` (coefficient of `t^{-N-1}` in `a_ℓ`) of the central
/// character attached to `S_{ℓ,[N]}`; the proportionality constant is fixed to 1.
pub fn central_character(chi: &Oper, ell: usize, big_n: i64) -> Result<Scalar> {
    chi.coefficient(ell, big_n)
}
