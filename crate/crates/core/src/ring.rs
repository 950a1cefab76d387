//! Local domains `A` with quotient field `K`, dominated by the valuation of
//! `K`, and the membership test `a ∈ A`.
//!
//! An element lies in a localization of a factorial ring exactly when the
//! denominator of its reduced fraction is a unit there, so every test below
//! reduces the fraction and inspects the denominator at the closed point.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use rand::Rng;

use crate::error::{Error, Result};
use crate::field::{Elem, Field};
use crate::poly::Poly;
use crate::valued::ValuedField;
use crate::value::Value;

/// Coefficient ring of a localized polynomial ring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BaseRing {
    Rationals,
    /// `Z`, localized at `p` together with the variables.
    Integers(u64),
    Prime(u64),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LocalRing {
    /// `Z_(p)` inside `Q`.
    IntegersAt(u64),
    /// `R[vars]` localized at the ideal generated by the variables (and `p`
    /// when `R = Z`). Variables are listed innermost first.
    PolyLocalized { coeffs: BaseRing, vars: Vec<String> },
}

impl fmt::Display for LocalRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LocalRing::IntegersAt(p) => write!(f, "Z_({p})"),
            LocalRing::PolyLocalized { coeffs, vars } => {
                let (name, mut ideal) = match coeffs {
                    BaseRing::Rationals => ("Q".to_string(), Vec::new()),
                    BaseRing::Integers(p) => ("Z".to_string(), vec![p.to_string()]),
                    BaseRing::Prime(p) => (format!("F{p}"), Vec::new()),
                };
                ideal.extend(vars.iter().cloned());
                write!(f, "{name}[{}]_({})", vars.join(", "), ideal.join(", "))
            }
        }
    }
}

fn poly_lcm(a: &Poly, b: &Poly, k: &Field) -> Poly {
    let g = a.gcd(b, k);
    let (q, _) = a.mul(b, k).div_rem(&g, k).expect("nonzero gcd");
    k.monic(&q)
}

fn rational_of(e: &Elem) -> &num_rational::BigRational {
    e.as_rational().expect("rational coefficient")
}

impl LocalRing {
    /// The residue characteristic of `A`, `0` for `Q`-algebras.
    pub fn characteristic(&self) -> u64 {
        match self {
            LocalRing::IntegersAt(p) => *p,
            LocalRing::PolyLocalized { coeffs, .. } => match coeffs {
                BaseRing::Rationals => 0,
                BaseRing::Integers(p) | BaseRing::Prime(p) => *p,
            },
        }
    }

    fn p(&self) -> Option<u64> {
        match self {
            LocalRing::IntegersAt(p) => Some(*p),
            LocalRing::PolyLocalized { coeffs: BaseRing::Integers(p), .. } => Some(*p),
            _ => None,
        }
    }

    fn vars(&self) -> &[String] {
        match self {
            LocalRing::IntegersAt(_) => &[],
            LocalRing::PolyLocalized { vars, .. } => vars,
        }
    }

    /// Checks that `K` is the quotient field of `A` and that the valuation is
    /// nonnegative on `A` and positive on its maximal ideal.
    pub fn check_dominated(&self, valued: &ValuedField) -> Result<()> {
        let k = valued.field();
        let mut field_vars = k.variables();
        field_vars.reverse();
        if field_vars != self.vars() {
            return Err(Error::UnsupportedRing(format!("{self} does not have quotient field {k}")));
        }
        let mut base = &k;
        while let Some(b) = base.base() {
            base = b;
        }
        let base_ok = matches!(
            (self, base),
            (LocalRing::IntegersAt(_), Field::Rationals)
                | (LocalRing::PolyLocalized { coeffs: BaseRing::Rationals | BaseRing::Integers(_), .. }, Field::Rationals)
        ) || matches!((self, base), (LocalRing::PolyLocalized { coeffs: BaseRing::Prime(p), .. }, Field::Prime(q)) if p == q);
        if !base_ok {
            return Err(Error::UnsupportedRing(format!("{self} does not have quotient field {k}")));
        }
        let mut generators: Vec<Elem> = self.vars().iter().map(|v| k.variable(v).unwrap()).collect();
        if let Some(p) = self.p() {
            generators.push(k.from_int(p as i64));
        }
        for g in generators {
            if valued.value(&g) <= Value::zero() {
                return Err(Error::UnsupportedRing(format!(
                    "{} lies in the maximal ideal of {self} but has value {}",
                    k.fmt_elem(&g),
                    valued.value(&g)
                )));
            }
        }
        Ok(())
    }

    /// Whether `a ∈ A`.
    pub fn contains(&self, field: &Field, a: &Elem) -> Result<bool> {
        if a.is_zero() {
            return Ok(true);
        }
        let unsupported = || Error::UnsupportedRing(format!("membership in {self} for elements of {field}"));
        match (self.vars().len(), self.p(), a) {
            (0, Some(p), Elem::Q(q)) => Ok(!q.denom().is_multiple_of(&BigInt::from(p))),
            (0, None, _) => Ok(true),
            (1, None, Elem::Rf(_, den)) => Ok(!den.coeff(0).is_zero()),
            (1, Some(p), Elem::Rf(num, den)) => {
                // Clear denominators, then remove the common integer content.
                let all = num.coeffs().iter().chain(den.coeffs()).map(rational_of);
                let l = all.clone().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
                let ints: Vec<BigInt> = all.map(|c| (c * &l).to_integer()).collect();
                let g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
                let d0 = (rational_of(den.coeff(0)) * &l).to_integer() / g;
                Ok(!d0.is_multiple_of(&BigInt::from(p)))
            }
            (2, None, Elem::Rf(num, den)) => {
                let inner = field.base().ok_or_else(unsupported)?;
                let k = inner.base().ok_or_else(unsupported)?;
                let parts = |e: &Elem| match e {
                    Elem::Rf(n, d) => Ok((n.clone(), d.clone())),
                    _ => Err(unsupported()),
                };
                let coeffs: Vec<(Poly, Poly)> =
                    num.coeffs().iter().chain(den.coeffs()).map(parts).collect::<Result<_>>()?;
                let l = coeffs.iter().fold(Poly::constant(k.one()), |acc, (_, d)| poly_lcm(&acc, d, k));
                let scaled = |(n, d): &(Poly, Poly)| n.mul(&l, k).div_rem(d, k).map(|(q, _)| q);
                let ints: Vec<Poly> = coeffs.iter().map(scaled).collect::<Result<_>>()?;
                let g = ints.iter().fold(Poly::zero(), |acc, c| acc.gcd(c, k));
                let (d0, _) = scaled(&parts(den.coeff(0))?)?.div_rem(&g, k)?;
                Ok(!d0.coeff_or(0, k).is_zero())
            }
            _ => Err(unsupported()),
        }
    }

    /// Random element: a small integer combination of monomials in the
    /// maximal-ideal generators, divided by a unit half of the time.
    pub fn random_element<R: Rng + ?Sized>(&self, valued: &ValuedField, rng: &mut R, height: i64) -> Elem {
        let k = valued.field();
        let gens = crate::semigroup::maximal_ideal_generators(self, valued);
        let monomial = |rng: &mut R| {
            gens.iter().fold(k.one(), |acc, g| {
                let n = rng.gen_range(0..=2);
                k.mul(&acc, &k.pow(g, n).unwrap())
            })
        };
        let mut num = k.zero();
        for _ in 0..3 {
            let c = k.from_int(rng.gen_range(-height..=height));
            let m = monomial(rng);
            num = k.add(&num, &k.mul(&c, &m));
        }
        if gens.is_empty() || rng.gen_bool(0.5) {
            return num;
        }
        let g = &gens[rng.gen_range(0..gens.len())];
        let unit = k.add(&k.one(), g);
        k.div(&num, &unit).expect("units are nonzero")
    }

    /// Whether every coefficient of `g` lies in `A`.
    pub fn contains_poly(&self, field: &Field, g: &Poly) -> Result<bool> {
        for c in g.coeffs() {
            if !self.contains(field, c)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}
