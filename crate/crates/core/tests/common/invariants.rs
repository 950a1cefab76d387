//! Per-tower invariant checks shared by the property suite and the
//! acceptance run. Each check draws its random data from `rng`.

use maclane::newton::NewtonPolygon;
use maclane::oracle::random_poly;
use maclane::{Poly, Rational, Value};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::Case;

pub type Check = fn(&Case, &mut ChaCha8Rng) -> Result<(), String>;

/// Every per-tower check, by name.
pub const CHECKS: &[(&str, Check)] = &[
    ("full expansion attains the value", full_expansion),
    ("low-degree values are stable", stability),
    ("minimality criterion", minimality),
    ("augmentation raises values exactly on multiples", monotonicity),
    ("accepted keys have divisible degrees", degree_divisibility),
    ("homogenization", homogenization),
    ("effective degree", effective_degree),
    ("pseudo-valuation dominates every stage", domination),
];

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

pub fn degree(p: &Poly) -> usize {
    p.degree().unwrap_or(0)
}

/// A random nonzero polynomial of degree at most `max_deg`.
pub fn sample(c: &Case, rng: &mut ChaCha8Rng, max_deg: usize) -> Poly {
    loop {
        let g = random_poly(&c.field, rng, max_deg, 6);
        if !g.is_zero() {
            return g;
        }
    }
}

fn max_deg(c: &Case) -> usize {
    degree(&c.f) + 2
}

/// `π^n · g`, a polynomial of larger value.
fn shifted(c: &Case, g: &Poly, n: i64) -> Poly {
    let k = c.field.field();
    let pi = c.field.uniformizer();
    let factor = (0..n).fold(k.one(), |acc, _| k.mul(&acc, &pi));
    g.scale(&factor, &k)
}

/// The value of the full multi-key expansion is the least term value.
pub fn full_expansion(c: &Case, r: &mut ChaCha8Rng) -> Result<(), String> {
    let v = c.finite();
    let g = sample(c, r, max_deg(c));
    let min = v.multi_expand(v.height(), &g).iter().map(|t| v.term_value(t)).min().unwrap();
    ensure!(min == v.value(&g), "{}: g = {}", c.name, v.fmt_poly(&g));
    Ok(())
}

/// Later stages agree on polynomials of degree below their keys, and every
/// stage values earlier keys at their assigned values.
pub fn stability(c: &Case, r: &mut ChaCha8Rng) -> Result<(), String> {
    let v = &c.tower;
    let n = v.height();
    for i in 1..n {
        let g = sample(c, r, degree(v.key(i + 1)) - 1);
        for k in i + 1..=n {
            ensure!(v.value_at(k, &g) == v.value_at(i, &g), "{}: g = {} at stage {k}", c.name, v.fmt_poly(&g));
        }
    }
    for k in 1..=n {
        for i in 1..=k {
            ensure!(v.value_at(k, v.key(i)) == *v.mu(i), "{}: key {i} at stage {k}", c.name);
        }
    }
    Ok(())
}

/// The minimality criterion on the top digit, and minimal polynomials divide
/// nothing of lower degree.
pub fn minimality(c: &Case, r: &mut ChaCha8Rng) -> Result<(), String> {
    let v = c.finite();
    let k = v.field();
    let g = sample(c, r, max_deg(c));
    let exp = v.phi_expand(v.height(), &g);
    let top = exp.digits.len() - 1;
    let criterion = exp.digits[top].degree() == Some(0) && exp.term_values[top] == exp.min_value();
    ensure!(v.is_minimal(&g) == criterion, "{}: g = {}", c.name, v.fmt_poly(&g));
    let unit = k.add(&k.one(), &c.field.uniformizer());
    let scaled = v.key(v.height()).scale(&unit, &k);
    ensure!(v.is_minimal(&scaled), "{}: unit multiple of the top key", c.name);
    if v.is_minimal(&g) && degree(&g) > 0 {
        let h = sample(c, r, degree(&g) - 1);
        let divides = v.equiv_divides(&g, &h).map_err(|e| e.to_string())?;
        ensure!(!divides, "{}: {} divides {}", c.name, v.fmt_poly(&g), v.fmt_poly(&h));
    }
    Ok(())
}

/// `v_k ≥ v_{k-1}`, strictly exactly when the new key divides `g` in the
/// graded algebra of the previous stage.
pub fn monotonicity(c: &Case, r: &mut ChaCha8Rng) -> Result<(), String> {
    let v = &c.tower;
    for k in 2..=v.height() {
        let prev = v.truncate(k - 1);
        let g = if r.gen_bool(0.5) {
            let room = max_deg(c).saturating_sub(degree(v.key(k)));
            sample(c, r, room).mul(v.key(k), &v.field())
        } else {
            sample(c, r, max_deg(c))
        };
        let (lo, hi) = (v.value_at(k - 1, &g), v.value_at(k, &g));
        ensure!(hi >= lo, "{}: stage {k} lowers g = {}", c.name, v.fmt_poly(&g));
        let divides = prev.equiv_divides(v.key(k), &g).map_err(|e| e.to_string())?;
        ensure!((hi > lo) == divides, "{}: stage {k} g = {}", c.name, v.fmt_poly(&g));
    }
    Ok(())
}

/// Key degrees along the tower divide each other, and so do the degrees of
/// randomly found keys over the top stage.
pub fn degree_divisibility(c: &Case, r: &mut ChaCha8Rng) -> Result<(), String> {
    let v = &c.tower;
    for k in 2..=v.height() {
        ensure!(degree(v.key(k)) % degree(v.key(k - 1)) == 0, "{}: stage {k}", c.name);
    }
    let w = c.finite();
    let field = w.field();
    let key = w.key(w.height());
    // Candidates near a power of the top key, plus arbitrary monic ones.
    let power = r.gen_range(1..=2);
    let lower = sample(c, r, degree(key) * power - 1);
    let near = key.pow(power, &field).add(&shifted(c, &lower, r.gen_range(0..=2)), &field);
    let d = r.gen_range(1..=degree(&c.f) + 1);
    let arbitrary = Poly::monomial(field.one(), d, &field).add(&sample(c, r, d - 1), &field);
    for phi in [near, arbitrary] {
        let accepted = match w.is_key(&phi) {
            Ok(b) => b,
            // Irreducibility over residue fields with transcendentals is only partly supported.
            Err(maclane::Error::UnsupportedResidueFactorization(_)) => false,
            Err(e) => return Err(format!("{}: {e}", c.name)),
        };
        if accepted {
            ensure!(degree(&phi) % degree(key) == 0, "{}: key {}", c.name, w.fmt_poly(&phi));
            if let Ok(aug) = w.augment(&phi, w.value(&phi) + Value::int(1)) {
                ensure!(degree(aug.key(aug.height())) % degree(key) == 0, "{}", c.name);
            }
        }
    }
    Ok(())
}

/// Homogenization keeps the value, is idempotent and drops only terms of
/// larger value.
pub fn homogenization(c: &Case, r: &mut ChaCha8Rng) -> Result<(), String> {
    let v = c.finite();
    let field = v.field();
    let g = sample(c, r, max_deg(c));
    let h = v.homogenize(&g);
    let name = || format!("{}: g = {}", c.name, v.fmt_poly(&g));
    ensure!(v.value(&h) == v.value(&g), "{}", name());
    ensure!(v.homogenize(&h) == h, "{}", name());
    ensure!(v.value(&g.sub(&h, &field)) > v.value(&g), "{}", name());
    ensure!(v.is_equivalent(&g, &h), "{}", name());
    Ok(())
}

/// Effective degrees add under products and ignore terms of larger value.
pub fn effective_degree(c: &Case, r: &mut ChaCha8Rng) -> Result<(), String> {
    let v = c.finite();
    let field = v.field();
    let g = sample(c, r, 2);
    let h = sample(c, r, 3);
    let gh = g.mul(&h, &field);
    for k in 1..=v.height() {
        let w = v.truncate(k);
        let (dg, dh, dgh) = (v.effective_degree(k, &g), v.effective_degree(k, &h), v.effective_degree(k, &gh));
        ensure!(dgh == dg + dh, "{}: stage {k}: {dgh} != {dg} + {dh}", c.name);
        // Perturb by `π^n · b` with `n` just large enough to exceed `w(g)`.
        let b = sample(c, r, 2);
        let d = Rational::from_integer(w.base().value_denominator().into());
        let gap: Rational = (w.value(&g).expect_finite() - w.value(&b).expect_finite()) * &d;
        let n = i64::try_from(gap.floor().to_integer()).unwrap() + 1;
        let g2 = g.add(&shifted(c, &b, n.max(0)), &field);
        ensure!(w.is_equivalent(&g, &g2), "{}: stage {k}: perturbation is not small", c.name);
        ensure!(v.effective_degree(k, &g2) == dg, "{}: stage {k}: perturbation moved the degree", c.name);
    }
    Ok(())
}

/// The pseudo-valuation bounds every stage from above and takes the key values.
pub fn domination(c: &Case, r: &mut ChaCha8Rng) -> Result<(), String> {
    let w = &c.tower;
    let g = sample(c, r, max_deg(c));
    for k in 1..w.height() {
        ensure!(w.value(&g) >= w.value_at(k, &g), "{}: stage {k} g = {}", c.name, w.fmt_poly(&g));
    }
    for i in 1..=w.height() {
        ensure!(w.value(w.key(i)) == *w.mu(i), "{}: key {i}", c.name);
    }
    Ok(())
}

/// Lower-hull vertices by brute force: a point is a vertex iff it lies
/// strictly below every chord from a point on its left to one on its right.
pub fn brute_force_hull(digits: &[Value]) -> Vec<(usize, Rational)> {
    let m = digits.len() - 1;
    let mut pts: Vec<(usize, Rational)> = digits
        .iter()
        .enumerate()
        .filter_map(|(i, v)| v.finite().map(|q| (m - i, q.clone())))
        .collect();
    pts.sort_by_key(|p| p.0);
    let r = |n: usize| Rational::from_integer(n.into());
    pts.iter()
        .filter(|p| {
            pts.iter().filter(|a| a.0 < p.0).all(|a| {
                pts.iter().filter(|b| b.0 > p.0).all(|b| {
                    let chord = &a.1 + (&b.1 - &a.1) * (r(p.0) - r(a.0)) / (r(b.0) - r(a.0));
                    p.1 < chord
                })
            })
        })
        .cloned()
        .collect()
}

/// The hull routine against the brute-force vertices, with increasing slopes
/// and segments covering the span.
pub fn hull(digits: &[Value]) -> Result<(), String> {
    let poly = NewtonPolygon::from_digit_values(digits);
    ensure!(poly.vertices == brute_force_hull(digits), "vertices differ for {digits:?}");
    for w in poly.segments.windows(2) {
        ensure!(w[0].slope < w[1].slope, "slopes not increasing for {digits:?}");
    }
    let total: usize = poly.segments.iter().map(|s| s.length).sum();
    let span = poly.vertices.last().map_or(0, |l| l.0 - poly.vertices[0].0);
    ensure!(total == span, "segments do not cover the hull for {digits:?}");
    Ok(())
}

/// Random digit values, about a fifth of them infinite.
pub fn random_digits(r: &mut ChaCha8Rng) -> Vec<Value> {
    (0..r.gen_range(1..9))
        .map(|_| {
            if r.gen_bool(0.2) {
                Value::Infinity
            } else {
                Value::Finite(Rational::new(r.gen_range(-6..12).into(), r.gen_range(1..4).into()))
            }
        })
        .collect()
}
