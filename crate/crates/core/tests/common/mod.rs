#![allow(dead_code)]

pub mod invariants;

use std::sync::{Arc, OnceLock};

use maclane::approx::{resolve, DEFAULT_STAGE_BOUND};
use maclane::descent::generating_sequence;
use maclane::ring::{BaseRing, LocalRing};
use maclane::config::{Scenario, ScenarioConfig};
use maclane::parse::parse_poly;
use maclane::presets::{sqrt3_field, st_field};
use maclane::{InductiveValuation, Poly, ValuedField};

pub struct Case {
    pub name: &'static str,
    pub field: Arc<ValuedField>,
    pub f: Poly,
    /// The resolved branch, ending in `v(f) = ∞`.
    pub tower: InductiveValuation,
}

impl Case {
    pub fn poly(&self, src: &str) -> Poly {
        parse_poly(src, &self.field.field(), "x").unwrap()
    }

    /// The tower without its infinite last stage.
    pub fn finite(&self) -> InductiveValuation {
        self.tower.truncate(self.tower.height() - 1)
    }
}

fn case(name: &'static str, field: ValuedField, f: &str) -> Case {
    let field = Arc::new(field);
    let f = parse_poly(f, &field.field(), "x").unwrap();
    let tower = resolve(&field, "x", &f, DEFAULT_STAGE_BOUND).unwrap().remove(0).tower;
    Case { name, field, f, tower }
}

/// Same valuation, with keys replaced by their descents into `ring[x]`.
fn descended(name: &'static str, field: ValuedField, ring: LocalRing, f: &str) -> Case {
    let field = Arc::new(field);
    let f = parse_poly(f, &field.field(), "x").unwrap();
    let tower = generating_sequence(&ring, &field, "x", &f, DEFAULT_STAGE_BOUND).unwrap().tower;
    Case { name, field, f, tower }
}

pub fn st_ring() -> LocalRing {
    LocalRing::PolyLocalized {
        coeffs: BaseRing::Rationals,
        vars: vec!["s".into(), "t".into()],
    }
}

pub fn q(p: u64) -> ValuedField {
    ValuedField::p_adic(p).unwrap()
}

pub fn t_adic(p: u64) -> ValuedField {
    ValuedField::order_base(maclane::Field::prime(p).unwrap(), "t").unwrap()
}

/// Uniquely resolved scenarios over every kind of base field.
pub fn cases() -> &'static [Case] {
    static CASES: OnceLock<Vec<Case>> = OnceLock::new();
    CASES.get_or_init(|| {
        vec![
            case("q2 x^2+1", q(2), "x^2+1"),
            case("q2 x^3-2", q(2), "x^3-2"),
            case("q2 x^2+x+1", q(2), "x^2+x+1"),
            case("q2 x^4+2", q(2), "x^4+2"),
            case("q3 x^6+3", q(3), "(x^2+1)^3+3"),
            case("f3(t) x^2-t", t_adic(3), "x^2-t"),
            case("f5(t) x^3-t^2(1+t)", t_adic(5), "x^3-t^2*(1+t)"),
            case("q(s,t) x^2+s", st_field(), "x^2+s"),
            descended("q(s,t) quartic", st_field(), st_ring(), "(x^2+s)^2+s*t"),
            case("q3(t) quartic", sqrt3_field(), "(x^2-t)^2+t^3"),
        ]
    })
}

pub fn scenario(file: &str) -> Scenario {
    let path = format!("{}/../../scenarios/{file}", env!("CARGO_MANIFEST_DIR"));
    let src = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{path}: {e}"));
    ScenarioConfig::from_json(&src).unwrap().build().unwrap()
}

pub fn scenario_text(file: &str) -> String {
    let path = format!("{}/../../scenarios/{file}", env!("CARGO_MANIFEST_DIR"));
    std::fs::read_to_string(path).unwrap()
}
