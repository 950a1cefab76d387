//! Ready-made valued fields used by the examples, the guide and the tests.

use std::sync::Arc;

use crate::field::Field;
use crate::inductive::InductiveValuation;
use crate::parse::parse_poly;
use crate::valued::ValuedField;
use crate::value::Value;

/// `Q(s, t)` with `v(s) = 1`, `v(t) = 3/2` and `t²/s³` reducing to `1`.
///
/// The tower `[v(t) = 3/2; v(t² - s³) = 7/2]` over the `s`-adic field is one
/// realization; any second key value above `3` gives the same values up to `3`
/// and the same residue of `t²/s³`.
pub fn st_field() -> ValuedField {
    let base = ValuedField::order_base(Field::Rationals, "s").unwrap();
    let k = base.field();
    let tower = InductiveValuation::gauss(
        Arc::new(base),
        "t",
        parse_poly("t", &k, "t").unwrap(),
        Value::frac(3, 2),
    )
    .unwrap()
    .augment(&parse_poly("t^2 - s^3", &k, "t").unwrap(), Value::frac(7, 2))
    .unwrap();
    ValuedField::extend_by_tower(tower).unwrap()
}

/// `Q(t)` with `v(t) = 1/2` over the 3-adic field: value group `(1/2)Z`,
/// residue field `F3(λ)`.
pub fn sqrt3_field() -> ValuedField {
    let base = Arc::new(ValuedField::p_adic(3).unwrap());
    let tower = InductiveValuation::gauss_x(base, "t", Value::frac(1, 2)).unwrap();
    ValuedField::extend_by_tower(tower).unwrap()
}
