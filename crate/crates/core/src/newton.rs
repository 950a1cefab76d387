//! Newton polygons of `φ`-adic digit values.
//!
//! A digit `f_i` of an expansion of length `m + 1` gives the point
//! `(m - i, v(f_i))`; zero digits give no point. Slopes are
//! `Δordinate / Δabscissa` along increasing abscissa, so a segment of slope
//! `μ` collects the digits whose terms `v(f_i) + i·μ` tie.

use std::fmt;

use crate::inductive::InductiveValuation;
use crate::poly::Poly;
use crate::value::{fmt_rational, Rational, Value};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Segment {
    pub slope: Rational,
    pub length: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NewtonPolygon {
    /// `(abscissa, ordinate)`, sorted by abscissa.
    pub points: Vec<(usize, Rational)>,
    pub vertices: Vec<(usize, Rational)>,
    pub segments: Vec<Segment>,
}

fn cross(o: &(usize, Rational), a: &(usize, Rational), b: &(usize, Rational)) -> Rational {
    let (ox, ax, bx) = (Rational::from_integer(o.0.into()), Rational::from_integer(a.0.into()), Rational::from_integer(b.0.into()));
    (ax - &ox) * (&b.1 - &o.1) - (&a.1 - &o.1) * (bx - ox)
}

impl NewtonPolygon {
    /// Lower hull of the digit values `values[i] = v(f_i)`.
    pub fn from_digit_values(values: &[Value]) -> NewtonPolygon {
        let m = values.len().saturating_sub(1);
        let mut points: Vec<(usize, Rational)> = values
            .iter()
            .enumerate()
            .filter_map(|(i, v)| v.finite().map(|q| (m - i, q.clone())))
            .collect();
        points.sort_by(|a, b| a.0.cmp(&b.0));
        let mut hull: Vec<(usize, Rational)> = Vec::new();
        for p in &points {
            while hull.len() >= 2 && cross(&hull[hull.len() - 2], &hull[hull.len() - 1], p) <= Rational::from_integer(0.into()) {
                hull.pop();
            }
            hull.push(p.clone());
        }
        let segments = hull
            .windows(2)
            .map(|w| {
                let dx = w[1].0 - w[0].0;
                Segment {
                    slope: (&w[1].1 - &w[0].1) / Rational::from_integer(dx.into()),
                    length: dx,
                }
            })
            .collect();
        NewtonPolygon {
            points,
            vertices: hull,
            segments,
        }
    }

    /// Segments of slope strictly above `threshold`.
    pub fn principal_part(&self, threshold: &Value) -> Vec<Segment> {
        self.segments
            .iter()
            .filter(|s| Value::Finite(s.slope.clone()) > *threshold)
            .cloned()
            .collect()
    }

    /// The dump format: vertices, then segments flagged against `threshold`.
    pub fn dump(&self, threshold: &Value) -> String {
        self.dump_flagged(|slope| Value::Finite(slope.clone()) > *threshold)
    }

    /// The dump format with a custom test for principal slopes.
    pub fn dump_flagged(&self, principal: impl Fn(&Rational) -> bool) -> String {
        let mut out = String::new();
        for (a, v) in &self.vertices {
            out.push_str(&format!("({a}, {})\n", fmt_rational(v)));
        }
        for s in &self.segments {
            out.push_str(&format!(
                "slope={} length={} principal={}\n",
                fmt_rational(&s.slope),
                s.length,
                principal(&s.slope)
            ));
        }
        out
    }
}

impl fmt::Display for NewtonPolygon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.dump(&Value::Infinity))
    }
}

/// Polygon of `f` expanded in `phi`, digits valued by the top stage of `v`.
pub fn polygon(v: &InductiveValuation, phi: &Poly, f: &Poly) -> NewtonPolygon {
    let digits = f.phi_digits(phi, &v.field()).expect("monic pivot");
    let values: Vec<Value> = digits.iter().map(|d| v.value(d)).collect();
    NewtonPolygon::from_digit_values(&values)
}

/// Polygon of `f` in `x` with coefficient values in the base field.
pub fn base_polygon(v: &InductiveValuation, f: &Poly) -> NewtonPolygon {
    let values: Vec<Value> = f.coeffs().iter().map(|c| v.base().value(c)).collect();
    NewtonPolygon::from_digit_values(&values)
}

/// `α - β` over the digit indices attaining `v(f)` at the top stage.
pub fn projection(v: &InductiveValuation, f: &Poly) -> usize {
    v.projection_at(v.height(), f)
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::parse::parse_poly;
    use crate::valued::ValuedField;
    use crate::value::rat;

    fn v1() -> InductiveValuation {
        InductiveValuation::gauss_x(Arc::new(ValuedField::p_adic(2).unwrap()), "x", Value::zero()).unwrap()
    }

    #[test]
    fn examples() {
        let v = v1();
        let p = |s| parse_poly(s, &v.field(), "x").unwrap();
        let n = polygon(&v, &p("x+1"), &p("x^2+1"));
        assert_eq!(n.points, vec![(0, rat(0, 1)), (1, rat(1, 1)), (2, rat(1, 1))]);
        assert_eq!(n.segments, vec![Segment { slope: rat(1, 2), length: 2 }]);
        assert_eq!(n.principal_part(&Value::zero()).len(), 1);
        assert!(n.principal_part(&Value::frac(1, 2)).is_empty());

        let n = base_polygon(&v, &p("x^3-2"));
        assert_eq!(n.vertices, vec![(0, rat(0, 1)), (3, rat(1, 1))]);
        assert_eq!(n.principal_part(&Value::zero()), vec![Segment { slope: rat(1, 3), length: 3 }]);

        let n = polygon(&v, &p("x"), &p("x"));
        assert_eq!(n.points, vec![(0, rat(0, 1))]);
        assert!(n.segments.is_empty());
    }

    #[test]
    fn dump_format() {
        let v = v1();
        let p = |s| parse_poly(s, &v.field(), "x").unwrap();
        let n = polygon(&v, &p("x+1"), &p("x^2+1"));
        assert_eq!(n.dump(&Value::zero()), "(0, 0)\n(2, 1)\nslope=1/2 length=2 principal=true\n");
    }

    #[test]
    fn projections() {
        let v = v1();
        let p = |s| parse_poly(s, &v.field(), "x").unwrap();
        assert_eq!(projection(&v, &p("x^2+1")), 2);
        let w = v.augment(&p("x+1"), Value::frac(1, 2)).unwrap();
        assert_eq!(projection(&w, &p("x^2+1")), 2);
    }
}
