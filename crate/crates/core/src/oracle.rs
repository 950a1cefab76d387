//! Independent checks of computed valuations.
//!
//! For a unique extension `w` defined by a monic irreducible `f` of degree
//! `n`, `n·w(g) = v0(Res(f, g))` for every `g` of degree below `n`. The
//! second check samples `w(g) ≥ v_k(g)` for every truncation `v_k` of the
//! tower.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::inductive::InductiveValuation;
use crate::field::{Elem, Field};
use crate::poly::{resultant, Poly};
use crate::valued::ValuedField;
use crate::value::Value;

pub const DEFAULT_SEED: u64 = 7;
pub const DEFAULT_SAMPLES: usize = 200;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleReport {
    pub samples: usize,
    pub agreements: usize,
    /// Human-readable description of each disagreement.
    pub failures: Vec<String>,
}

impl OracleReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Nonzero polynomial of degree at most `max_deg` with random coefficients.
pub fn random_poly<R: Rng + ?Sized>(field: &ValuedField, rng: &mut R, max_deg: usize, height: i64) -> Poly {
    loop {
        let deg = rng.gen_range(0..=max_deg);
        let g = Poly::new((0..=deg).map(|_| field.random_element(rng, height)).collect());
        if !g.is_zero() {
            return g;
        }
    }
}

/// `Res(f, g)` for monic `f`, as the determinant of multiplication by `g` on
/// `K[x]/(f)`. The permutation expansion needs no inversions, which matters
/// over iterated function fields; large degrees fall back to the remainder
/// sequence.
pub fn norm_resultant(f: &Poly, g: &Poly, k: &Field) -> Result<Elem> {
    let n = f.degree().unwrap_or(0);
    if !f.is_monic(k) || n > 5 {
        return resultant(f, g, k);
    }
    let x = Poly::x(k);
    let mut column = g.rem(f, k);
    let mut matrix = Vec::with_capacity(n);
    for _ in 0..n {
        matrix.push((0..n).map(|i| column.coeff_or(i, k)).collect::<Vec<Elem>>());
        column = column.mul(&x, k).rem(f, k);
    }
    let mut det = k.zero();
    for perm in permutations(n) {
        let sign = perm.iter().enumerate().flat_map(|(i, a)| perm[i + 1..].iter().map(move |b| a > b)).filter(|&inv| inv).count();
        let term = perm.iter().enumerate().fold(k.one(), |acc, (col, &row)| k.mul(&acc, &matrix[col][row]));
        det = if sign % 2 == 0 { k.add(&det, &term) } else { k.sub(&det, &term) };
    }
    Ok(det)
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..n {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

/// `deg f · w(g)` against `v0(Res(f, g))` on random `g` with `deg g < deg f`.
pub fn resultant_oracle(w: &InductiveValuation, f: &Poly, samples: usize, seed: u64) -> Result<OracleReport> {
    let base = w.base();
    let k = base.field();
    let n = f.degree().unwrap_or(0);
    let mut rng = rng(seed);
    let mut failures = Vec::new();
    for _ in 0..samples {
        let g = random_poly(base, &mut rng, n.saturating_sub(1), 4);
        let lhs = w.value(&g).times(n as u64);
        let rhs = base.value(&norm_resultant(f, &g, &k)?);
        if lhs != rhs {
            failures.push(format!("g = {}: {lhs} vs {rhs}", w.fmt_poly(&g)));
        }
    }
    Ok(OracleReport {
        samples,
        agreements: samples - failures.len(),
        failures,
    })
}

/// `w(g) ≥ v_k(g)` for every stage `k` of `w` on random `g` of degree up to
/// `max_deg`.
pub fn stage_monotonicity(w: &InductiveValuation, max_deg: usize, samples: usize, seed: u64) -> OracleReport {
    let mut rng = rng(seed);
    let mut failures = Vec::new();
    for _ in 0..samples {
        let g = random_poly(w.base(), &mut rng, max_deg, 4);
        let top = w.value(&g);
        let values: Vec<Value> = (1..=w.height()).map(|k| w.value_at(k, &g)).collect();
        if let Some(k) = values.iter().position(|v| *v > top) {
            failures.push(format!("g = {}: stage {} gives {} above {top}", w.fmt_poly(&g), k + 1, values[k]));
        }
    }
    OracleReport {
        samples,
        agreements: samples - failures.len(),
        failures,
    }
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::approx::{resolve, DEFAULT_STAGE_BOUND};
    use crate::parse::parse_poly;

    #[test]
    fn q2_scenarios_agree() {
        let q2 = Arc::new(ValuedField::p_adic(2).unwrap());
        for src in ["x^2+1", "x^3-2", "x^2+x+1"] {
            let f = parse_poly(src, &q2.field(), "x").unwrap();
            let chains = resolve(&q2, "x", &f, DEFAULT_STAGE_BOUND).unwrap();
            let w = &chains[0].tower;
            let report = resultant_oracle(w, &f, 50, 1).unwrap();
            assert!(report.passed(), "{src}: {:?}", report.failures);
            assert!(stage_monotonicity(w, 4, 50, 2).passed());
        }
    }

    #[test]
    fn norm_matches_resultant() {
        let k = Field::Rationals;
        let f = parse_poly("x^3 - 2*x + 5", &k, "x").unwrap();
        let mut r = rng(4);
        let q = ValuedField::p_adic(3).unwrap();
        for _ in 0..20 {
            let g = random_poly(&q, &mut r, 4, 5);
            assert_eq!(norm_resultant(&f, &g, &k).unwrap(), resultant(&f, &g, &k).unwrap());
        }
    }

    #[test]
    fn wrong_tower_is_caught() {
        let q2 = Arc::new(ValuedField::p_adic(2).unwrap());
        let f = parse_poly("x^2+1", &q2.field(), "x").unwrap();
        let v = InductiveValuation::gauss_x(q2.clone(), "x", Value::zero()).unwrap();
        assert!(!resultant_oracle(&v, &f, 50, 3).unwrap().passed());
    }
}
