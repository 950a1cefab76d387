//! Repairing keys whose coefficients leave `A`, and the generating
//! sequences built from such repairs.

mod common;

use std::sync::Arc;

use maclane::approx::{resolve, DEFAULT_STAGE_BOUND};
use maclane::descent::{descend_key, generating_sequence};
use maclane::oracle::{random_poly, rng};
use maclane::parse::parse_poly;
use maclane::presets::{sqrt3_field, st_field};
use maclane::ring::{BaseRing, LocalRing};
use maclane::{InductiveValuation, Poly, Rational, Value, ValuedField};
use rand::Rng;

use common::st_ring;

struct Base {
    field: Arc<ValuedField>,
    ring: LocalRing,
    f: Poly,
    /// The stage below the key being repaired.
    below: InductiveValuation,
}

fn base(field: ValuedField, ring: LocalRing, f: &str, mu: Value) -> Base {
    let field = Arc::new(field);
    let f = parse_poly(f, &field.field(), "x").unwrap();
    let below = InductiveValuation::gauss_x(field.clone(), "x", mu).unwrap();
    Base { field, ring, f, below }
}

fn sqrt3_base() -> Base {
    let ring = LocalRing::PolyLocalized {
        coeffs: BaseRing::Integers(3),
        vars: vec!["t".into()],
    };
    base(sqrt3_field(), ring, "(x^2-t)^2 + t^3", Value::frac(1, 4))
}

fn st_base() -> Base {
    base(st_field(), st_ring(), "(x^2+s)^2 + s*t", Value::frac(1, 2))
}

fn coprime(rng: &mut impl Rng, p: i64) -> i64 {
    loop {
        let c: i64 = rng.gen_range(-7..=7);
        if c != 0 && c % p != 0 {
            return c;
        }
    }
}

/// `x^2 - t + δ` with `v(δ) > 1/2 = v(x^2 - t)` and a power of 3 in the
/// denominator of the leading perturbation term.
fn sqrt3_perturbation(rng: &mut impl Rng) -> String {
    let mut out = "x^2 - t".to_string();
    for n in 0..rng.gen_range(1..=2) {
        let j: i64 = if n == 0 { rng.gen_range(1..=2) } else { rng.gen_range(0..=2) };
        let d: i64 = rng.gen_range(0..=1);
        // a/2 - j + d/4 > 1/2
        let a = 2 * j + 2 - d + rng.gen_range(0..=2);
        out += &format!(" + ({})*t^{a}/3^{j}*x^{d}", coprime(rng, 3));
    }
    out
}

/// `x^2 + s + δ` with `v(δ) > 1 = v(x^2 + s)` and a power of `s` in the
/// denominator of the leading perturbation term.
fn st_perturbation(rng: &mut impl Rng) -> String {
    let mut out = "x^2 + s".to_string();
    for n in 0..rng.gen_range(1..=2) {
        let j: i64 = if n == 0 { rng.gen_range(1..=2) } else { rng.gen_range(0..=1) };
        let d: i64 = rng.gen_range(0..=1);
        // 3b/2 - j + d/2 > 1
        let b = (2 * j + 3 - d) / 3 + 1 + rng.gen_range(0..=1);
        out += &format!(" + ({})*t^{b}/s^{j}*x^{d}", rng.gen_range(1..=5));
    }
    out
}

fn check_repair(base: &Base, g_src: &str) {
    let k = base.field.field();
    let g = parse_poly(g_src, &k, "x").unwrap();
    let v = &base.below;
    assert!(!base.ring.contains_poly(&k, &g).unwrap(), "{g_src} is already over A");
    assert!(v.is_key(&g).unwrap(), "{g_src} is not a key");
    let (key, trace) = descend_key(v, &g, &base.f, &base.ring).unwrap();
    // membership, monic, key, equivalence
    assert!(base.ring.contains_poly(&k, &key).unwrap(), "{g_src}");
    assert!(key.is_monic(&k));
    assert!(v.is_key(&key).unwrap());
    assert!(v.is_equivalent(&key, &g));
    assert!(v.is_homogeneous(&key));
    // value margins of the power digits and of the repaired digits
    assert!(trace.power_margins.iter().all(|m| *m > Value::zero()), "{g_src}: {:?}", trace.power_margins);
    assert!(trace.digit_margins.iter().all(|m| *m > Value::zero()), "{g_src}: {:?}", trace.digit_margins);
    let mu = v.mu(v.height()).expect_finite().clone();
    let r = trace.r;
    for i in 0..=r * trace.e {
        let excess = &mu * Rational::from_integer(((r * trace.e - i) as i64).into());
        assert!(v.value(&trace.power.digits[i].sub(&trace.b[i], &k)) > Value::Finite(excess));
    }
    for j in 0..=r {
        let excess = &mu * Rational::from_integer(((r - j) as i64).into());
        assert!(v.value(&trace.a[j].sub(&trace.u[j], &k)) > Value::Finite(excess));
    }
    let rank = Value::Finite(&mu * Rational::from_integer((r as i64).into()));
    assert_eq!(v.value(&g), rank);
    assert!(v.value(&trace.candidate.sub(&g, &k)) > rank);
}

#[test]
fn seeded_perturbations_are_repaired() {
    let bases = [(sqrt3_base(), sqrt3_perturbation as fn(&mut _) -> String), (st_base(), st_perturbation)];
    let mut checked = 0;
    for (b, perturb) in &bases {
        let mut r = rng(2024);
        for _ in 0..12 {
            check_repair(b, &perturb(&mut r));
            checked += 1;
        }
    }
    assert!(checked >= 20);
}

#[test]
fn descended_towers_define_the_same_valuation() {
    let cases = [
        (Arc::new(sqrt3_field()), sqrt3_base().ring, "(x^2-t)^2 + t^3"),
        (Arc::new(st_field()), st_ring(), "(x^2+s)^2 + s*t"),
    ];
    for (field, ring, f) in cases {
        let f = parse_poly(f, &field.field(), "x").unwrap();
        let seq = generating_sequence(&ring, &field, "x", &f, DEFAULT_STAGE_BOUND).unwrap();
        let chain = resolve(&field, "x", &f, DEFAULT_STAGE_BOUND).unwrap().remove(0).tower;
        assert_eq!(seq.tower.height(), chain.height());
        for i in 1..=chain.height() {
            assert_eq!(seq.tower.mu(i), chain.mu(i));
        }
        let (a, b) = (seq.tower.truncate(seq.tower.height() - 1), chain.truncate(chain.height() - 1));
        let mut r = rng(99);
        for _ in 0..200 {
            let g = random_poly(&field, &mut r, 3, 4);
            assert_eq!(a.value(&g), b.value(&g), "g = {}", a.fmt_poly(&g));
        }
    }
}

#[test]
fn effective_degree_of_f_counts_the_remaining_stages() {
    for c in common::cases() {
        let t = &c.tower;
        let deg_f = c.f.degree().unwrap();
        for k in 1..t.height() {
            let deg_key = t.key(k).degree().unwrap();
            assert_eq!(t.effective_degree(k, &c.f), deg_f / deg_key, "{}: stage {k}", c.name);
            let next = t.key(k + 1).degree().unwrap();
            assert_eq!(deg_f / deg_key, (deg_f / next) * (next / deg_key));
        }
    }
}

#[test]
fn repairs_refuse_bad_inputs() {
    let b = sqrt3_base();
    let k = b.field.field();
    let p = |s: &str| parse_poly(s, &k, "x").unwrap();
    // Not equivalent to a power: f has no square-root-like key here.
    assert!(descend_key(&b.below, &p("x^2 + 2*t"), &p("(x^2+1)^2 + t^3"), &b.ring).is_err());
    // The tower below must already be over A.
    let off = InductiveValuation::gauss(b.field.clone(), "x", p("x + t/3"), Value::frac(1, 4)).unwrap();
    assert!(matches!(
        descend_key(&off, &p("x^2 - t"), &b.f, &b.ring),
        Err(maclane::Error::HypothesisViolated(_))
    ));
}
