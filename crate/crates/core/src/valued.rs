//! Fields with a fixed rank-one valuation with values in `(1/d)Z`.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive};
use rand::Rng;

use crate::error::{Error, Result};
use crate::field::{Elem, Field};
use crate::inductive::InductiveValuation;
use crate::poly::Poly;
use crate::value::{Rational, Value};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ValuedField {
    /// `Q` with the `p`-adic valuation.
    PAdic { p: u64 },
    /// `k(t)` with the `t`-adic valuation, `k` being `Q` or a prime field.
    OrderBase { coeffs: Field, var: String },
    /// `K(y)` with the valuation induced by a finite inductive tower on `K[y]`.
    Extension {
        base: Arc<ValuedField>,
        tower: Arc<InductiveValuation>,
    },
}

fn p_adic_order(n: &BigInt, p: u64) -> i64 {
    let p = BigInt::from(p);
    let mut n = n.clone();
    let mut k = 0;
    while n.is_multiple_of(&p) {
        n /= &p;
        k += 1;
    }
    k
}

fn lowest_degree(p: &Poly) -> usize {
    p.coeffs().iter().position(|c| !c.is_zero()).expect("nonzero polynomial")
}

impl ValuedField {
    pub fn p_adic(p: u64) -> Result<ValuedField> {
        Field::prime(p)?;
        Ok(ValuedField::PAdic { p })
    }

    pub fn order_base(coeffs: Field, var: &str) -> Result<ValuedField> {
        match coeffs {
            Field::Rationals | Field::Prime(_) => Ok(ValuedField::OrderBase {
                coeffs,
                var: var.to_string(),
            }),
            other => Err(Error::InvalidInput(format!("unsupported coefficient field {other}"))),
        }
    }

    /// `K(y)` valued by a tower on `K[y]`; the tower must be a valuation.
    pub fn extend_by_tower(tower: InductiveValuation) -> Result<ValuedField> {
        if tower.is_pseudo() {
            return Err(Error::PseudoValuationNotAField);
        }
        Ok(ValuedField::Extension {
            base: tower.base_arc(),
            tower: Arc::new(tower),
        })
    }

    /// The underlying field.
    pub fn field(&self) -> Field {
        match self {
            ValuedField::PAdic { .. } => Field::Rationals,
            ValuedField::OrderBase { coeffs, var } => Field::rational_functions(coeffs.clone(), var),
            ValuedField::Extension { base, tower } => {
                Field::rational_functions(base.field(), tower.var())
            }
        }
    }

    /// The residue characteristic.
    pub fn residue_characteristic(&self) -> u64 {
        match self {
            ValuedField::PAdic { p } => *p,
            ValuedField::OrderBase { coeffs, .. } => coeffs.characteristic(),
            ValuedField::Extension { base, .. } => base.residue_characteristic(),
        }
    }

    /// `d` with value group `(1/d)Z`.
    pub fn value_denominator(&self) -> u64 {
        match self {
            ValuedField::PAdic { .. } | ValuedField::OrderBase { .. } => 1,
            ValuedField::Extension { tower, .. } => tower.denominator(tower.height()),
        }
    }

    pub fn value(&self, a: &Elem) -> Value {
        if a.is_zero() {
            return Value::Infinity;
        }
        match (self, a) {
            (ValuedField::PAdic { p }, Elem::Q(q)) => {
                Value::int(p_adic_order(q.numer(), *p) - p_adic_order(q.denom(), *p))
            }
            (ValuedField::OrderBase { .. }, Elem::Rf(n, d)) => {
                Value::int(lowest_degree(n) as i64 - lowest_degree(d) as i64)
            }
            (ValuedField::Extension { tower, .. }, Elem::Rf(n, d)) => {
                let vn = tower.value(n);
                let vd = tower.value(d);
                &vn - vd.expect_finite()
            }
            _ => panic!("element {a:?} does not belong to {self}"),
        }
    }

    /// An element of value `1/d`.
    pub fn uniformizer(&self) -> Elem {
        match self {
            ValuedField::PAdic { p } => Elem::Q(Rational::from_integer(BigInt::from(*p))),
            ValuedField::OrderBase { .. } => self.field().generator().unwrap(),
            ValuedField::Extension { tower, .. } => {
                let d = tower.denominator(tower.height());
                let gamma = Value::frac(1, d as i64);
                let m = tower.canonical_monomial(tower.height(), &gamma);
                tower.monomial_element(&m)
            }
        }
    }

    pub fn residue_field(&self) -> Field {
        match self {
            ValuedField::PAdic { p } => Field::Prime(*p),
            ValuedField::OrderBase { coeffs, .. } => coeffs.clone(),
            ValuedField::Extension { tower, .. } => Field::rational_functions(
                tower.residue_field(tower.height()).clone(),
                &format!("λ{}", tower.var()),
            ),
        }
    }

    /// Residue class of a value-0 element.
    pub fn residue(&self, a: &Elem) -> Result<Elem> {
        let v = self.value(a);
        if v != Value::zero() {
            return Err(Error::NotAUnit(v));
        }
        match (self, a) {
            (ValuedField::PAdic { p }, Elem::Q(q)) => {
                let k = Field::Prime(*p);
                k.div(&k.from_bigint(q.numer()), &k.from_bigint(q.denom()))
            }
            (ValuedField::OrderBase { coeffs, .. }, Elem::Rf(n, d)) => {
                let n0 = n.coeff(lowest_degree(n));
                let d0 = d.coeff(lowest_degree(d));
                coeffs.div(n0, d0)
            }
            (ValuedField::Extension { tower, .. }, Elem::Rf(n, d)) => {
                let k = tower.height();
                let rn = tower.residual_at(k, n)?;
                let rd = tower.residual_at(k, d)?;
                self.residue_field().fraction(&rn.poly, &rd.poly)
            }
            _ => unreachable!(),
        }
    }

    /// A value-0 representative of a nonzero residue class; `0` lifts to `0`.
    pub fn lift(&self, r: &Elem) -> Result<Elem> {
        if r.is_zero() {
            return Ok(self.field().zero());
        }
        match (self, r) {
            (ValuedField::PAdic { .. }, Elem::Fp(a)) => {
                Ok(Elem::Q(Rational::from_integer(BigInt::from(*a))))
            }
            (ValuedField::OrderBase { .. }, c) => Ok(self.field().from_base(c.clone())),
            (ValuedField::Extension { tower, .. }, Elem::Rf(n, d)) => {
                let k = tower.height();
                let zero = Value::zero();
                let hn = tower.lift_residual_at(k, &zero, n)?;
                let hd = tower.lift_residual_at(k, &zero, d)?;
                self.field().fraction(&hn, &hd)
            }
            _ => Err(Error::InvalidInput(format!("{r:?} is not a residue of {self}"))),
        }
    }

    /// Random element of bounded height, with a spread of values.
    pub fn random_element<R: Rng + ?Sized>(&self, rng: &mut R, height: i64) -> Elem {
        let field = self.field();
        match self {
            ValuedField::PAdic { .. } | ValuedField::OrderBase { .. } => {
                let a = field.random(rng, height);
                let k = rng.gen_range(-1..=2);
                field.mul(&a, &field.pow(&self.uniformizer(), k).unwrap())
            }
            ValuedField::Extension { base, .. } => {
                let mut poly = |max_deg: usize| {
                    let deg = rng.gen_range(0..=max_deg);
                    Poly::new((0..=deg).map(|_| base.random_element(rng, height)).collect())
                };
                // Monomial denominators keep iterated function-field
                // arithmetic cheap while still producing negative values.
                let num = poly(2);
                let k = base.field();
                let den = Poly::monomial(k.one(), rng.gen_range(0..=1), &k);
                field.fraction(&num, &den).unwrap()
            }
        }
    }

    /// Formats an element of the field.
    pub fn fmt_elem(&self, a: &Elem) -> String {
        self.field().fmt_elem(a)
    }
}

impl fmt::Display for ValuedField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ValuedField::PAdic { p } => write!(f, "Q_{p}"),
            ValuedField::OrderBase { coeffs, var } => write!(f, "{coeffs}({var}), {var}-adic"),
            ValuedField::Extension { base, tower } => {
                write!(f, "({base})({}) valued by {}", tower.var(), tower)
            }
        }
    }
}

/// `n` as a signed machine integer; panics on overflow.
pub(crate) fn small(n: &BigInt) -> i64 {
    n.to_i64().expect("exponent out of range")
}

/// `q·d` as an integer; `None` when `q ∉ (1/d)Z`.
pub(crate) fn scaled(q: &Rational, d: u64) -> Option<i64> {
    let s = q * BigInt::from(d);
    if s.is_integer() {
        Some(small(&s.to_integer()))
    } else {
        None
    }
}

/// Smallest `e ≥ 1` with `e·q ∈ (1/d)Z`.
pub(crate) fn index_in(q: &Rational, d: u64) -> u64 {
    let s = q * BigInt::from(d);
    s.denom().abs().to_u64().unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_elem;

    #[test]
    fn p_adic_values_and_residues() {
        let q2 = ValuedField::p_adic(2).unwrap();
        let k = q2.field();
        assert_eq!(q2.value(&k.from_int(12)), Value::int(2));
        assert_eq!(q2.value(&k.zero()), Value::Infinity);
        assert_eq!(q2.residue(&k.from_int(3)).unwrap(), Elem::Fp(1));
        assert!(matches!(q2.residue(&k.from_int(2)), Err(Error::NotAUnit(_))));
        let q5 = ValuedField::p_adic(5).unwrap();
        assert_eq!(q5.lift(&Elem::Fp(3)).unwrap(), q5.field().from_int(3));
    }

    #[test]
    fn t_adic_residue() {
        let f = ValuedField::order_base(Field::Prime(3), "t").unwrap();
        let k = f.field();
        let a = parse_elem("(1+t)/(1-t)", &k).unwrap();
        assert_eq!(f.residue(&a).unwrap(), Elem::Fp(1));
        assert_eq!(f.lift(&Elem::Fp(2)).unwrap(), k.from_int(2));
        assert_eq!(f.value(&parse_elem("t^3/(t+t^2)", &k).unwrap()), Value::int(2));
    }

    #[test]
    fn two_variable_field() {
        // only v(s), v(t) and the residue of t^2/s^3 are pinned down; the
        // second key value is one admissible realization
        let f = crate::presets::st_field();
        let k = f.field();
        assert_eq!(f.value(&parse_elem("s", &k).unwrap()), Value::int(1));
        assert_eq!(f.value(&parse_elem("t", &k).unwrap()), Value::frac(3, 2));
        let w = parse_elem("t^2/s^3", &k).unwrap();
        assert_eq!(f.value(&w), Value::zero());
        assert_eq!(f.residue(&w).unwrap(), f.residue_field().one());
        assert_eq!(f.lift(&f.residue_field().one()).unwrap(), k.one());
        assert_eq!(f.value_denominator(), 2);
        assert_eq!(f.value(&f.uniformizer()), Value::frac(1, 2));
    }

    #[test]
    fn gauss_type_extension() {
        let base = Arc::new(ValuedField::p_adic(2).unwrap());
        let q = Field::Rationals;
        let tower = InductiveValuation::gauss(base, "y", Poly::x(&q), Value::int(1)).unwrap();
        let f = ValuedField::extend_by_tower(tower).unwrap();
        let k = f.field();
        assert_eq!(f.value(&parse_elem("y", &k).unwrap()), Value::int(1));
        let y2 = parse_elem("y/2", &k).unwrap();
        assert_eq!(f.value(&y2), Value::zero());
        // y/2 reduces to the transcendental generator, not to a constant
        let lambda = f.residue_field().generator().unwrap();
        assert_eq!(f.residue(&y2).unwrap(), lambda);
        let shifted = parse_elem("y/2 - 1", &k).unwrap();
        assert_eq!(f.value(&shifted), Value::zero());
    }

    #[test]
    fn pseudo_valuations_are_not_fields() {
        let base = Arc::new(ValuedField::p_adic(2).unwrap());
        let q = Field::Rationals;
        let tower = InductiveValuation::gauss(base, "y", Poly::x(&q), Value::Infinity).unwrap();
        assert_eq!(ValuedField::extend_by_tower(tower), Err(Error::PseudoValuationNotAField));
    }
}
