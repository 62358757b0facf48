#![allow(dead_code)]

use critcenter::perm::signed_permutations;
use critcenter::{CommPoly, Gen, Laurent, Scalar};
use proptest::prelude::*;

pub fn scalar() -> impl Strategy<Value = Scalar> {
    (-6i64..=6, 1i64..=4).prop_map(|(p, q)| Scalar::new(p, q))
}

pub fn nonzero_scalar() -> impl Strategy<Value = Scalar> {
    scalar().prop_filter("nonzero", |c| !c.is_zero())
}

/// Exact series with exponents in `lo..=hi`.
pub fn laurent_in(lo: i64, hi: i64, max_terms: usize) -> impl Strategy<Value = Laurent> {
    proptest::collection::vec((lo..=hi, scalar()), 0..=max_terms).prop_map(Laurent::from_terms)
}

pub fn laurent() -> impl Strategy<Value = Laurent> {
    laurent_in(-4, 4, 4)
}

/// Series with leading term `c t^{-p}` and a few higher terms.
pub fn with_pole(p: i64) -> impl Strategy<Value = Laurent> {
    (nonzero_scalar(), laurent_in(-p + 1, 3, 3))
        .prop_map(move |(c, rest)| &Laurent::monomial(c, -p) + &rest.with_precision(4).into_exact())
}

pub fn generator(n: usize, lo: i32, hi: i32) -> impl Strategy<Value = Gen> {
    (1..=n, 1..=n, lo..=hi).prop_map(|(i, j, u)| Gen::new(i, j, u))
}

/// Irregularity from the lower convex hull of the Newton points
/// `(n - i, ν(a_i) - (n - i))`, `a_0 = 1`: the total rise of the hull.
pub fn newton_irregularity(valuations: &[Option<i64>]) -> u64 {
    let n = valuations.len() as i64;
    let mut points: Vec<(i64, i64)> = vec![(n, -n)];
    for (k, v) in valuations.iter().enumerate() {
        if let Some(v) = v {
            let i = k as i64 + 1;
            points.push((n - i, v - (n - i)));
        }
    }
    points.sort();
    // keep the lowest point per abscissa
    points.dedup_by_key(|p| p.0);
    let mut hull: Vec<(i64, i64)> = Vec::new();
    for p in points {
        while hull.len() >= 2 {
            let a = hull[hull.len() - 2];
            let b = hull[hull.len() - 1];
            let cross = (b.0 - a.0) * (p.1 - a.1) - (b.1 - a.1) * (p.0 - a.0);
            if cross <= 0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }
    hull.windows(2).map(|w| (w[1].1 - w[0].1).max(0)).sum::<i64>() as u64
}

pub fn valuations(oper: &critcenter::Oper) -> Vec<Option<i64>> {
    oper.coefficients().iter().map(|a| a.valuation().unwrap().finite()).collect()
}

/// Coefficient of `λ^{n-ℓ}` in `det(λ + X̄)`: the sum of the `ℓ×ℓ` principal
/// minors of the commutative matrix of symbols `x̄_ij[-1]`.
pub fn char_poly_coefficient(n: usize, ell: usize) -> CommPoly {
    let mut out = CommPoly::zero();
    for mask in 0u32..(1 << n) {
        if mask.count_ones() as usize != ell {
            continue;
        }
        let idx: Vec<usize> = (1..=n).filter(|&i| mask & (1 << (i - 1)) != 0).collect();
        for (perm, sign) in signed_permutations(ell) {
            let key: Vec<Gen> = (0..ell).map(|c| Gen::new(idx[perm[c]], idx[c], -1)).collect();
            out.add_term(key, Scalar::from_int(sign));
        }
    }
    out
}
