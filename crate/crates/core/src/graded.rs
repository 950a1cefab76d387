//! Presentations of the graded algebra of `A[x]/(f)` and the value module.
//!
//! Generator `i` is the initial form of the key `φ_i`, of degree `v(φ_i)`.
//! Relation `i` comes from expanding `φ_{i+1}` (with `φ_n = f`) in the keys
//! `φ_1..φ_i` and keeping the terms of minimal value; every kept term has the
//! value of the leading power `φ_i^{m_i}`.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::descent::GeneratingSequence;
use crate::error::{Error, Result};
use crate::field::Elem;
use crate::inductive::InductiveValuation;
use crate::oracle::{rng, DEFAULT_SEED};
use crate::poly::Poly;
use crate::semigroup::{in_module, semigroup_of_ring, ValueSemigroup};
use crate::valued::ValuedField;
use crate::value::{fmt_rational, Rational, Value};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationTerm {
    /// Lift of the coefficient, in `A`.
    pub coeff: Elem,
    /// Exponents of `φ_1, …, φ_i`.
    pub exps: Vec<usize>,
    pub value: Value,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relation {
    /// The relation leads with a power of generator `index` (1-based).
    pub index: usize,
    pub power: usize,
    pub degree: Value,
    /// Terms other than the leading power.
    pub terms: Vec<RelationTerm>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedPresentation {
    pub tower: InductiveValuation,
    pub degrees: Vec<Value>,
    pub relations: Vec<Relation>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SemigroupModule {
    pub base: ValueSemigroup,
    /// `Σ j_i·v(φ_i)` with `0 ≤ j_i < m_i`.
    pub shifts: Vec<Value>,
    /// Whether `{0, v(φ_1), …, v(φ_{n-1})}` alone already covered every
    /// observed value.
    pub generators_alone_cover: bool,
    /// Number of observed values at or below the bound.
    pub checked: usize,
}

pub fn generator_name(i: usize) -> String {
    format!("phi{i}")
}

fn monomial_name(exps: &[usize]) -> String {
    let parts: Vec<String> = exps
        .iter()
        .enumerate()
        .filter(|(_, &e)| e > 0)
        .map(|(i, &e)| match e {
            1 => generator_name(i + 1),
            _ => format!("{}^{e}", generator_name(i + 1)),
        })
        .collect();
    if parts.is_empty() {
        "1".to_string()
    } else {
        parts.join("*")
    }
}

/// Relations of the graded algebra read off the generating sequence.
pub fn presentation(seq: &GeneratingSequence) -> GradedPresentation {
    let tower = &seq.tower;
    let n = tower.height();
    let mut relations = Vec::new();
    for i in 1..n {
        let next = tower.key(i + 1);
        let power = seq.digit_lengths[i - 1];
        let degree = tower.mu(i).times(power as u64);
        let mut terms: Vec<RelationTerm> = tower
            .multi_expand(i, next)
            .into_iter()
            .map(|t| RelationTerm {
                value: tower.term_value(&t),
                coeff: t.coeff,
                exps: t.exps,
            })
            .filter(|t| t.value == degree)
            .collect();
        terms.retain(|t| !(t.exps[i - 1] == power && t.exps[..i - 1].iter().all(|&e| e == 0)));
        terms.sort_by(|a, b| b.exps.iter().rev().cmp(a.exps.iter().rev()));
        relations.push(Relation {
            index: i,
            power,
            degree,
            terms,
        });
    }
    GradedPresentation {
        degrees: seq.values.clone(),
        tower: tower.clone(),
        relations,
    }
}

impl GradedPresentation {
    /// The relation with the generators replaced by the keys.
    pub fn lift(&self, r: &Relation) -> Poly {
        let k = self.tower.field();
        let keys: Vec<&Poly> = (1..=r.index).map(|i| self.tower.key(i)).collect();
        let monomial = |exps: &[usize]| {
            exps.iter()
                .zip(&keys)
                .fold(Poly::constant(k.one()), |acc, (&e, p)| acc.mul(&p.pow(e, &k), &k))
        };
        let mut lead = vec![0; r.index];
        lead[r.index - 1] = r.power;
        r.terms.iter().fold(monomial(&lead), |acc, t| {
            acc.add(&monomial(&t.exps).scale(&t.coeff, &k), &k)
        })
    }

    /// Every term has the degree of its relation, and every lift has a
    /// larger value in `A[x]/(f)`.
    pub fn relation_check(&self) -> Result<Vec<Value>> {
        let f = self.tower.key(self.tower.height());
        let k = self.tower.field();
        let mut lifted = Vec::new();
        for r in &self.relations {
            let stage = self.tower.truncate(r.index);
            let homogeneous = r.terms.iter().all(|t| {
                let term = crate::inductive::MultiTerm {
                    coeff: t.coeff.clone(),
                    exps: t.exps.clone(),
                };
                stage.term_value(&term) == r.degree
            });
            if !homogeneous {
                return Err(Error::RelationNotHomogeneous(r.index));
            }
            let value = self.tower.value(&self.lift(r).rem(f, &k));
            if value <= r.degree {
                return Err(Error::RelationValueTooSmall(r.index));
            }
            lifted.push(value);
        }
        Ok(lifted)
    }
}

/// Checks that the values of `A[x]/(f)` up to `bound` lie in the module
/// generated over the base semigroup by the bounded sums of key values.
pub fn semigroup_module(
    seq: &GeneratingSequence,
    field: &Arc<ValuedField>,
    bound: &Rational,
    samples: usize,
    seed: u64,
) -> Result<SemigroupModule> {
    let base = semigroup_of_ring(&seq.ring, field)?;
    let mut shifts = vec![Value::zero()];
    for (v, m) in seq.values.iter().zip(&seq.digit_lengths) {
        shifts = shifts
            .iter()
            .flat_map(|z| (0..*m).map(move |j| z.clone() + v.times(j as u64)))
            .collect();
    }
    shifts.sort();
    shifts.dedup();
    let mut small: Vec<Value> = seq.values.clone();
    small.push(Value::zero());

    let tower = &seq.tower;
    let k = field.field();
    let f = tower.key(tower.height());
    let deg_f = f.degree().unwrap();
    let mut observed = Vec::new();

    // Monomials in the ring generators and the keys.
    let gens = crate::semigroup::maximal_ideal_generators(&seq.ring, field);
    let mut coeffs = vec![k.one()];
    for g in &gens {
        let mut more = Vec::new();
        for c in &coeffs {
            let mut p = c.clone();
            while Value::Finite(bound.clone()) >= field.value(&p) {
                more.push(p.clone());
                p = k.mul(&p, g);
            }
        }
        coeffs = more;
    }
    let mut key_monomials = vec![Poly::constant(k.one())];
    for (key, m) in seq.keys.iter().zip(&seq.digit_lengths) {
        key_monomials = key_monomials
            .iter()
            .flat_map(|p| (0..2 * m).map(move |j| (p.clone(), j)))
            .map(|(p, j)| p.mul(&key.pow(j, &k), &k).rem(f, &k))
            .collect();
    }
    for c in &coeffs {
        for p in &key_monomials {
            observed.push(tower.value(&p.scale(c, &k)));
        }
    }
    let mut rng = rng(seed);
    for _ in 0..samples {
        let g = Poly::new((0..deg_f).map(|_| seq.ring.random_element(field, &mut rng, 6)).collect());
        if !g.is_zero() {
            observed.push(tower.value(&g));
        }
    }

    let bound = Value::Finite(bound.clone());
    let in_range: Vec<&Value> = observed.iter().filter(|v| **v <= bound).collect();
    if let Some(gap) = in_range.iter().find(|v| !in_module(&base, &shifts, v)) {
        return Err(Error::CoverageGapFound((*gap).clone()));
    }
    Ok(SemigroupModule {
        generators_alone_cover: in_range.iter().all(|v| in_module(&base, &small, v)),
        checked: in_range.len(),
        base,
        shifts,
    })
}

/// Default number of random elements sampled by [`semigroup_module`].
pub const DEFAULT_MODULE_SAMPLES: usize = 500;
/// Default seed for [`semigroup_module`].
pub const DEFAULT_MODULE_SEED: u64 = DEFAULT_SEED;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorJson {
    pub name: String,
    pub degree: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LeadJson {
    pub gen: String,
    pub power: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub coeff: String,
    pub monomial: String,
    pub value: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationJson {
    pub lead: LeadJson,
    pub terms: Vec<TermJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SemigroupJson {
    pub base_gens: Vec<String>,
    pub module_gens: Vec<String>,
}

/// The serialized presentation. Values are reduced fractions or
/// `infinity`, so rendering a parsed document reproduces it byte for byte.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PresentationJson {
    pub generators: Vec<GeneratorJson>,
    pub relations: Vec<RelationJson>,
    pub semigroup: SemigroupJson,
}

fn canonical_value(s: &str) -> Result<String> {
    s.parse::<Value>()
        .map(|v| v.to_string())
        .map_err(|_| Error::InvalidInput(format!("bad value '{s}'")))
}

impl PresentationJson {
    pub fn new(p: &GradedPresentation, module: &SemigroupModule) -> PresentationJson {
        let field = p.tower.base();
        PresentationJson {
            generators: p
                .degrees
                .iter()
                .enumerate()
                .map(|(i, d)| GeneratorJson {
                    name: generator_name(i + 1),
                    degree: d.to_string(),
                })
                .collect(),
            relations: p
                .relations
                .iter()
                .map(|r| RelationJson {
                    lead: LeadJson {
                        gen: generator_name(r.index),
                        power: r.power,
                    },
                    terms: r
                        .terms
                        .iter()
                        .map(|t| TermJson {
                            coeff: field.fmt_elem(&t.coeff),
                            monomial: monomial_name(&t.exps),
                            value: t.value.to_string(),
                        })
                        .collect(),
                })
                .collect(),
            semigroup: SemigroupJson {
                base_gens: module.base.generators.iter().map(fmt_rational).collect(),
                module_gens: module.shifts.iter().map(|z| z.to_string()).collect(),
            },
        }
    }

    pub fn render(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("plain data");
        s.push('\n');
        s
    }

    /// Parses a rendered presentation, rejecting non-canonical values.
    pub fn parse(src: &str) -> Result<PresentationJson> {
        let doc: PresentationJson =
            serde_json::from_str(src).map_err(|e| Error::Parse {
                line: e.line(),
                column: e.column(),
                message: e.to_string(),
            })?;
        let values = doc
            .generators
            .iter()
            .map(|g| &g.degree)
            .chain(doc.relations.iter().flat_map(|r| r.terms.iter().map(|t| &t.value)))
            .chain(&doc.semigroup.base_gens)
            .chain(&doc.semigroup.module_gens);
        for v in values {
            if canonical_value(v)? != *v {
                return Err(Error::InvalidInput(format!("value '{v}' is not in lowest terms")));
            }
        }
        Ok(doc)
    }
}
