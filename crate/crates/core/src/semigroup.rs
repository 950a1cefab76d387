//! Finitely generated semigroups of nonnegative rationals.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};

use crate::error::Result;
use crate::field::Elem;
use crate::ring::{BaseRing, LocalRing};
use crate::valued::ValuedField;
use crate::value::{lcm_denominators, Rational, Value};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValueSemigroup {
    /// Positive generators, sorted and without repetition.
    pub generators: Vec<Rational>,
}

impl ValueSemigroup {
    pub fn new(generators: impl IntoIterator<Item = Rational>) -> ValueSemigroup {
        let set: BTreeSet<Rational> = generators.into_iter().filter(|g| g.is_positive()).collect();
        ValueSemigroup {
            generators: set.into_iter().collect(),
        }
    }

    /// Common denominator of the generators.
    fn scale(&self, extra: &Rational) -> BigInt {
        lcm_denominators(self.generators.iter().chain([extra]))
    }

    /// Whether `q` is a sum of generators (the empty sum being `0`).
    pub fn contains(&self, q: &Rational) -> bool {
        if q.is_negative() {
            return false;
        }
        let d = self.scale(q);
        let target = (q * Rational::from_integer(d.clone())).to_integer().to_usize().expect("small value");
        let steps: Vec<usize> = self
            .generators
            .iter()
            .map(|g| (g * Rational::from_integer(d.clone())).to_integer().to_usize().unwrap())
            .collect();
        let mut reach = vec![false; target + 1];
        reach[0] = true;
        for n in 1..=target {
            reach[n] = steps.iter().any(|&s| s <= n && reach[n - s]);
        }
        reach[target]
    }

    /// Smallest positive element.
    pub fn min_positive(&self) -> Option<Rational> {
        self.generators.first().cloned()
    }

    /// Elements up to `bound`, increasing.
    pub fn elements_up_to(&self, bound: &Rational) -> Vec<Rational> {
        let d = Rational::from_integer(self.scale(bound));
        let n = (bound * &d).floor().to_integer().to_usize().unwrap();
        (0..=n)
            .map(|i| Rational::from_integer(i.into()) / &d)
            .filter(|q| self.contains(q))
            .collect()
    }
}

/// The semigroup generated by the values of the generators of the maximal
/// ideal of `A`.
pub fn semigroup_of_ring(ring: &LocalRing, valued: &ValuedField) -> Result<ValueSemigroup> {
    ring.check_dominated(valued)?;
    Ok(ValueSemigroup::new(
        maximal_ideal_generators(ring, valued)
            .iter()
            .map(|g| valued.value(g).expect_finite().clone()),
    ))
}

pub(crate) fn maximal_ideal_generators(ring: &LocalRing, valued: &ValuedField) -> Vec<Elem> {
    let k = valued.field();
    let mut out = Vec::new();
    if let LocalRing::IntegersAt(p) | LocalRing::PolyLocalized { coeffs: BaseRing::Integers(p), .. } = ring {
        out.push(k.from_int(*p as i64));
    }
    if let LocalRing::PolyLocalized { vars, .. } = ring {
        out.extend(vars.iter().map(|v| k.variable(v).unwrap()));
    }
    out
}

/// Whether `value` lies in `S + z` for some `z` in `shifts`.
pub fn in_module(s: &ValueSemigroup, shifts: &[Value], value: &Value) -> bool {
    match value.finite() {
        None => true,
        Some(q) => shifts.iter().any(|z| !z.is_infinite() && s.contains(&(q - z.expect_finite()))),
    }
}
