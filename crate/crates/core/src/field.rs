//! Exact fields: `Q`, prime fields, simple algebraic extensions and rational
//! function fields in one variable over any of these.
//!
//! Elements do not carry their field; every operation goes through the
//! [`Field`] descriptor, which knows the modulus of an algebraic extension and
//! how to normalize rational functions.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use rand::Rng;

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::value::{fmt_rational, Rational};

/// An element of some [`Field`], always in the canonical form of that field.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Elem {
    Q(Rational),
    Fp(u64),
    /// Residue class, represented by the remainder modulo the defining polynomial.
    Alg(Poly),
    /// Numerator and monic denominator, coprime.
    Rf(Poly, Poly),
}

impl Elem {
    pub fn is_zero(&self) -> bool {
        match self {
            Elem::Q(q) => q.is_zero(),
            Elem::Fp(a) => *a == 0,
            Elem::Alg(p) => p.is_zero(),
            Elem::Rf(n, _) => n.is_zero(),
        }
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        match self {
            Elem::Q(q) => Some(q),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Field {
    Rationals,
    Prime(u64),
    /// `base[name] / (modulus)`, modulus monic irreducible of degree ≥ 2.
    Algebraic {
        base: Arc<Field>,
        modulus: Poly,
        name: String,
    },
    /// `base(var)`.
    RationalFunctions { base: Arc<Field>, var: String },
}

fn mod_inverse(a: u64, p: u64) -> u64 {
    let (mut t, mut new_t) = (0i128, 1i128);
    let (mut r, mut new_r) = (p as i128, a as i128);
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    assert_eq!(r, 1, "{a} is not invertible mod {p}");
    t.rem_euclid(p as i128) as u64
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl Field {
    pub fn prime(p: u64) -> Result<Field> {
        if !is_prime(p) {
            return Err(Error::InvalidInput(format!("{p} is not prime")));
        }
        Ok(Field::Prime(p))
    }

    pub fn rational_functions(base: Field, var: &str) -> Field {
        Field::RationalFunctions {
            base: Arc::new(base),
            var: var.to_string(),
        }
    }

    /// `base[name]/(modulus)`. A linear modulus is rejected; callers keep the
    /// base field in that case.
    pub fn algebraic(base: Field, modulus: Poly, name: &str) -> Field {
        assert!(modulus.degree().unwrap_or(0) >= 2, "algebraic extension needs degree ≥ 2");
        let modulus = base.monic(&modulus);
        Field::Algebraic {
            base: Arc::new(base),
            modulus,
            name: name.to_string(),
        }
    }

    pub fn base(&self) -> Option<&Field> {
        match self {
            Field::Algebraic { base, .. } | Field::RationalFunctions { base, .. } => Some(base),
            _ => None,
        }
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            Field::Rationals => 0,
            Field::Prime(p) => *p,
            Field::Algebraic { base, .. } | Field::RationalFunctions { base, .. } => {
                base.characteristic()
            }
        }
    }

    /// Number of elements for finite fields.
    pub fn order(&self) -> Option<u64> {
        match self {
            Field::Prime(p) => Some(*p),
            Field::Algebraic { base, modulus, .. } => {
                let q = base.order()?;
                q.checked_pow(modulus.degree().unwrap() as u32)
            }
            _ => None,
        }
    }

    /// Degree over the prime field (or over `Q`); `None` for transcendental fields.
    pub fn absolute_degree(&self) -> Option<usize> {
        match self {
            Field::Rationals | Field::Prime(_) => Some(1),
            Field::Algebraic { base, modulus, .. } => {
                Some(base.absolute_degree()? * modulus.degree().unwrap())
            }
            Field::RationalFunctions { .. } => None,
        }
    }

    /// All elements of a finite field, in a fixed order.
    pub fn elements(&self) -> Option<Vec<Elem>> {
        match self {
            Field::Prime(p) => Some((0..*p).map(Elem::Fp).collect()),
            Field::Algebraic { base, modulus, .. } => {
                let base_elems = base.elements()?;
                let n = modulus.degree().unwrap();
                let mut out = vec![Vec::new()];
                for _ in 0..n {
                    let mut next = Vec::with_capacity(out.len() * base_elems.len());
                    for prefix in &out {
                        for c in &base_elems {
                            let mut v = prefix.clone();
                            v.push(c.clone());
                            next.push(v);
                        }
                    }
                    out = next;
                }
                Some(out.into_iter().map(|v| Elem::Alg(Poly::new(v))).collect())
            }
            _ => None,
        }
    }

    pub fn zero(&self) -> Elem {
        match self {
            Field::Rationals => Elem::Q(Rational::zero()),
            Field::Prime(_) => Elem::Fp(0),
            Field::Algebraic { .. } => Elem::Alg(Poly::zero()),
            Field::RationalFunctions { base, .. } => Elem::Rf(Poly::zero(), Poly::constant(base.one())),
        }
    }

    pub fn one(&self) -> Elem {
        self.from_int(1)
    }

    pub fn from_int(&self, n: i64) -> Elem {
        self.from_bigint(&BigInt::from(n))
    }

    pub fn from_bigint(&self, n: &BigInt) -> Elem {
        match self {
            Field::Rationals => Elem::Q(Rational::from_integer(n.clone())),
            Field::Prime(p) => Elem::Fp(n.mod_floor(&BigInt::from(*p)).to_u64().unwrap()),
            Field::Algebraic { base, .. } => Elem::Alg(Poly::constant(base.from_bigint(n))),
            Field::RationalFunctions { base, .. } => {
                Elem::Rf(Poly::constant(base.from_bigint(n)), Poly::constant(base.one()))
            }
        }
    }

    /// Image of a rational number; fails in characteristic `p` when `p` divides the denominator.
    pub fn from_rational(&self, q: &Rational) -> Result<Elem> {
        let n = self.from_bigint(q.numer());
        let d = self.from_bigint(q.denom());
        self.div(&n, &d)
    }

    /// Embeds an element of the immediate base field.
    pub fn from_base(&self, c: Elem) -> Elem {
        match self {
            Field::Algebraic { .. } => Elem::Alg(Poly::constant(c)),
            Field::RationalFunctions { base, .. } => Elem::Rf(Poly::constant(c), Poly::constant(base.one())),
            _ => c,
        }
    }

    /// The adjoined generator of an algebraic extension or the variable of a
    /// rational function field.
    pub fn generator(&self) -> Option<Elem> {
        match self {
            Field::Algebraic { base, .. } => {
                Some(self.reduce_alg(Poly::new(vec![base.zero(), base.one()])))
            }
            Field::RationalFunctions { base, .. } => Some(Elem::Rf(
                Poly::new(vec![base.zero(), base.one()]),
                Poly::constant(base.one()),
            )),
            _ => None,
        }
    }

    /// Constant coefficient-field element when `a` lies in the immediate base field.
    pub fn as_base_constant(&self, a: &Elem) -> Option<Elem> {
        match (self, a) {
            (Field::Algebraic { base, .. }, Elem::Alg(p)) => match p.degree() {
                None => Some(base.zero()),
                Some(0) => Some(p.coeff(0).clone()),
                _ => None,
            },
            (Field::RationalFunctions { base, .. }, Elem::Rf(n, d)) => {
                if d.degree() == Some(0) && n.degree().unwrap_or(0) == 0 {
                    Some(if n.is_zero() { base.zero() } else { n.coeff(0).clone() })
                } else {
                    None
                }
            }
            _ => None,
        }
    }

    fn reduce_alg(&self, p: Poly) -> Elem {
        match self {
            Field::Algebraic { base, modulus, .. } => {
                let (_, r) = p.div_rem(modulus, base).expect("modulus nonzero");
                Elem::Alg(r)
            }
            _ => unreachable!(),
        }
    }

    /// The quotient `num/den` in a rational function field.
    pub fn fraction(&self, num: &Poly, den: &Poly) -> Result<Elem> {
        self.make_rf(num.clone(), den.clone())
    }

    fn make_rf(&self, num: Poly, den: Poly) -> Result<Elem> {
        let Field::RationalFunctions { base, .. } = self else {
            unreachable!()
        };
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(self.zero());
        }
        // A monomial denominator `c·λ^j` cancels against the order of `num`.
        let j = den.degree().unwrap();
        if den.coeffs()[..j].iter().all(|c| c.is_zero()) {
            let inv = base.inv(den.coeff(j))?;
            let ord = num.coeffs().iter().position(|c| !c.is_zero()).unwrap().min(j);
            let n = Poly::new(num.coeffs()[ord..].to_vec()).scale(&inv, base);
            return Ok(Elem::Rf(n, Poly::monomial(base.one(), j - ord, base)));
        }
        let g = num.gcd(&den, base);
        let (n, _) = num.div_rem(&g, base)?;
        let (d, _) = den.div_rem(&g, base)?;
        let lc = d.lead().unwrap().clone();
        let inv = base.inv(&lc)?;
        Ok(Elem::Rf(n.scale(&inv, base), d.scale(&inv, base)))
    }

    /// `num/den` for coprime inputs: only the denominator is made monic.
    fn coprime_rf(base: &Field, num: Poly, den: Poly) -> Elem {
        if num.is_zero() {
            return Elem::Rf(Poly::zero(), Poly::constant(base.one()));
        }
        let inv = base.inv(den.lead().unwrap()).expect("nonzero denominator");
        if base.is_one(&inv) {
            return Elem::Rf(num, den);
        }
        Elem::Rf(num.scale(&inv, base), den.scale(&inv, base))
    }

    pub fn is_zero(&self, a: &Elem) -> bool {
        a.is_zero()
    }

    pub fn is_one(&self, a: &Elem) -> bool {
        *a == self.one()
    }

    pub fn add(&self, a: &Elem, b: &Elem) -> Elem {
        match (self, a, b) {
            (Field::Rationals, Elem::Q(x), Elem::Q(y)) => Elem::Q(x + y),
            (Field::Prime(p), Elem::Fp(x), Elem::Fp(y)) => Elem::Fp((x + y) % p),
            (Field::Algebraic { base, .. }, Elem::Alg(x), Elem::Alg(y)) => Elem::Alg(x.add(y, base)),
            (Field::RationalFunctions { base, .. }, Elem::Rf(n1, d1), Elem::Rf(n2, d2)) => {
                if d1 == d2 {
                    return self.make_rf(n1.add(n2, base), d1.clone()).unwrap();
                }
                // With g = gcd(d1, d2), only gcd(num, g) can cancel.
                let g = d1.gcd(d2, base);
                if g.degree() == Some(0) {
                    let num = n1.mul(d2, base).add(&n2.mul(d1, base), base);
                    return Self::coprime_rf(base, num, d1.mul(d2, base));
                }
                let (d1g, _) = d1.div_rem(&g, base).unwrap();
                let (d2g, _) = d2.div_rem(&g, base).unwrap();
                let num = n1.mul(&d2g, base).add(&n2.mul(&d1g, base), base);
                let den = d1.mul(&d2g, base);
                self.make_rf(num, den).unwrap()
            }
            _ => panic!("element/field mismatch in add: {a:?} + {b:?} over {self}"),
        }
    }

    pub fn neg(&self, a: &Elem) -> Elem {
        match (self, a) {
            (Field::Rationals, Elem::Q(x)) => Elem::Q(-x),
            (Field::Prime(p), Elem::Fp(x)) => Elem::Fp((p - x) % p),
            (Field::Algebraic { base, .. }, Elem::Alg(x)) => Elem::Alg(x.neg(base)),
            (Field::RationalFunctions { base, .. }, Elem::Rf(n, d)) => Elem::Rf(n.neg(base), d.clone()),
            _ => panic!("element/field mismatch in neg"),
        }
    }

    pub fn sub(&self, a: &Elem, b: &Elem) -> Elem {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &Elem, b: &Elem) -> Elem {
        match (self, a, b) {
            (Field::Rationals, Elem::Q(x), Elem::Q(y)) => Elem::Q(x * y),
            (Field::Prime(p), Elem::Fp(x), Elem::Fp(y)) => Elem::Fp(((*x as u128 * *y as u128) % *p as u128) as u64),
            (Field::Algebraic { base, .. }, Elem::Alg(x), Elem::Alg(y)) => self.reduce_alg(x.mul(y, base)),
            (Field::RationalFunctions { base, .. }, Elem::Rf(n1, d1), Elem::Rf(n2, d2)) => {
                if a.is_zero() || b.is_zero() {
                    return self.zero();
                }
                // Both inputs are reduced, so cancelling across suffices.
                let cancel = |n: &Poly, d: &Poly| {
                    if d.degree() == Some(0) || n.degree() == Some(0) {
                        return (n.clone(), d.clone());
                    }
                    let g = n.gcd(d, base);
                    if g.degree() == Some(0) {
                        return (n.clone(), d.clone());
                    }
                    (n.div_rem(&g, base).unwrap().0, d.div_rem(&g, base).unwrap().0)
                };
                let (n1, d2) = cancel(n1, d2);
                let (n2, d1) = cancel(n2, d1);
                Self::coprime_rf(base, n1.mul(&n2, base), d1.mul(&d2, base))
            }
            _ => panic!("element/field mismatch in mul: {a:?} * {b:?} over {self}"),
        }
    }

    pub fn inv(&self, a: &Elem) -> Result<Elem> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(match (self, a) {
            (Field::Rationals, Elem::Q(x)) => Elem::Q(x.recip()),
            (Field::Prime(p), Elem::Fp(x)) => Elem::Fp(mod_inverse(*x, *p)),
            (Field::Algebraic { base, modulus, .. }, Elem::Alg(x)) => {
                // x·s + m·t = g, g a nonzero constant since m is irreducible
                let (g, s, _) = x.ext_gcd(modulus, base);
                if g.degree() != Some(0) {
                    return Err(Error::InvalidInput("modulus is not irreducible".into()));
                }
                let gi = base.inv(g.lead().unwrap())?;
                self.reduce_alg(s.scale(&gi, base))
            }
            (Field::RationalFunctions { .. }, Elem::Rf(n, d)) => self.make_rf(d.clone(), n.clone())?,
            _ => panic!("element/field mismatch in inv"),
        })
    }

    pub fn div(&self, a: &Elem, b: &Elem) -> Result<Elem> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    /// `a^n` for any integer `n` (negative powers need `a ≠ 0`).
    pub fn pow(&self, a: &Elem, n: i64) -> Result<Elem> {
        let base = if n < 0 { self.inv(a)? } else { a.clone() };
        let mut e = n.unsigned_abs();
        let mut acc = self.one();
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &sq);
            }
            e >>= 1;
            if e > 0 {
                sq = self.mul(&sq, &sq);
            }
        }
        Ok(acc)
    }

    /// Monic associate of a nonzero polynomial over this field.
    pub fn monic(&self, p: &Poly) -> Poly {
        match p.lead() {
            None => p.clone(),
            Some(lc) => p.scale(&self.inv(lc).unwrap(), self),
        }
    }

    /// Random element with small "height": used by samplers and tests.
    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R, height: i64) -> Elem {
        match self {
            Field::Rationals => {
                let n = rng.gen_range(-height..=height);
                let d = rng.gen_range(1..=height.max(1));
                Elem::Q(Rational::new(BigInt::from(n), BigInt::from(d)))
            }
            Field::Prime(p) => Elem::Fp(rng.gen_range(0..*p)),
            Field::Algebraic { base, modulus, .. } => {
                let n = modulus.degree().unwrap();
                let coeffs = (0..n).map(|_| base.random(rng, height)).collect();
                Elem::Alg(Poly::new(coeffs))
            }
            Field::RationalFunctions { base, .. } => {
                let dn = rng.gen_range(0..=2);
                let dd = rng.gen_range(0..=1);
                let num = Poly::new((0..=dn).map(|_| base.random(rng, height)).collect());
                let mut den = Poly::new((0..=dd).map(|_| base.random(rng, height)).collect());
                if den.is_zero() {
                    den = Poly::constant(base.one());
                }
                self.make_rf(num, den).unwrap()
            }
        }
    }

    pub fn fmt_elem(&self, a: &Elem) -> String {
        match (self, a) {
            (Field::Rationals, Elem::Q(q)) => fmt_rational(q),
            (Field::Prime(_), Elem::Fp(x)) => x.to_string(),
            (Field::Algebraic { base, name, .. }, Elem::Alg(p)) => base.fmt_poly(p, name),
            (Field::RationalFunctions { base, var }, Elem::Rf(n, d)) => {
                let ns = base.fmt_poly(n, var);
                if d.degree() == Some(0) {
                    ns
                } else {
                    let wrap = |s: String| if is_factor(&s) { s } else { format!("({s})") };
                    format!("{}/{}", wrap(ns), wrap(base.fmt_poly(d, var)))
                }
            }
            _ => format!("{a:?}"),
        }
    }

    /// Human-readable polynomial in `var`, highest degree first.
    pub fn fmt_poly(&self, p: &Poly, var: &str) -> String {
        if p.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, c) in p.coeffs().iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mut cs = self.fmt_elem(c);
            let mut negative = false;
            if let Some(rest) = cs.strip_prefix('-') {
                if is_atomic(rest) {
                    negative = true;
                    cs = rest.to_string();
                }
            }
            if !is_atomic(&cs) && i > 0 {
                cs = format!("({cs})");
            }
            let mono = match i {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{i}"),
            };
            let term = if i == 0 {
                cs
            } else if cs == "1" {
                mono
            } else {
                format!("{cs}*{mono}")
            };
            if out.is_empty() {
                if negative {
                    out.push('-');
                }
            } else {
                out.push_str(if negative { " - " } else { " + " });
            }
            out.push_str(&term);
        }
        out
    }

    /// Names of the transcendental variables, outermost first.
    pub fn variables(&self) -> Vec<String> {
        match self {
            Field::RationalFunctions { base, var } => {
                let mut v = vec![var.clone()];
                v.extend(base.variables());
                v
            }
            _ => Vec::new(),
        }
    }

    /// The element named `name` (a transcendental variable of this field or of
    /// one of its bases).
    pub fn variable(&self, name: &str) -> Option<Elem> {
        match self {
            Field::RationalFunctions { base, var } => {
                if var == name {
                    self.generator()
                } else {
                    base.variable(name).map(|b| self.from_base(b))
                }
            }
            Field::Algebraic { base, name: n, .. } => {
                if n == name {
                    self.generator()
                } else {
                    base.variable(name).map(|b| self.from_base(b))
                }
            }
            _ => None,
        }
    }

    /// Embeds an element of a (possibly indirect) base field.
    pub fn embed_from(&self, from: &Field, a: Elem) -> Elem {
        if self == from {
            return a;
        }
        match self.base() {
            Some(b) => self.from_base(b.embed_from(from, a)),
            None => panic!("{from} is not a subfield of {self}"),
        }
    }
}

/// A lone number or identifier, safe to print as a coefficient.
fn is_atomic(s: &str) -> bool {
    !s.is_empty()
        && (s.chars().all(|c| c.is_alphanumeric() || c == '_')
            || crate::value::parse_rational(s).is_some())
}

/// A lone number, identifier or power, safe to print as numerator or denominator.
fn is_factor(s: &str) -> bool {
    is_atomic(s) || s.chars().all(|c| c.is_alphanumeric() || c == '_' || c == '^')
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rationals => write!(f, "Q"),
            Field::Prime(p) => write!(f, "F{p}"),
            Field::Algebraic { base, modulus, name } => {
                write!(f, "{base}[{name}]/({})", base.fmt_poly(modulus, name))
            }
            Field::RationalFunctions { base, var } => write!(f, "{base}({var})"),
        }
    }
}

/// Integer square-free test helper used by samplers: `|n|` as `u64`.
pub fn abs_u64(n: &BigInt) -> Option<u64> {
    n.abs().to_u64()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_arithmetic() {
        let f = Field::prime(7).unwrap();
        let a = f.from_int(3);
        let b = f.inv(&a).unwrap();
        assert_eq!(f.mul(&a, &b), f.one());
        assert_eq!(f.from_int(-1), Elem::Fp(6));
        assert_eq!(f.from_rational(&crate::value::rat(1, 2)).unwrap(), Elem::Fp(4));
        assert!(f.from_rational(&crate::value::rat(1, 7)).is_err());
    }

    #[test]
    fn algebraic_extension_inverse() {
        let f2 = Field::Prime(2);
        let m = Poly::new(vec![f2.one(), f2.one(), f2.one()]);
        let f4 = Field::algebraic(f2, m, "a");
        assert_eq!(f4.order(), Some(4));
        let a = f4.generator().unwrap();
        let ai = f4.inv(&a).unwrap();
        assert_eq!(f4.mul(&a, &ai), f4.one());
        // a^3 = 1 in F4
        assert_eq!(f4.pow(&a, 3).unwrap(), f4.one());
        assert_eq!(f4.elements().unwrap().len(), 4);
    }

    #[test]
    fn rational_functions_normalize() {
        let f = Field::rational_functions(Field::Rationals, "t");
        let t = f.generator().unwrap();
        let one = f.one();
        let a = f.sub(&f.mul(&t, &t), &one); // t^2 - 1
        let b = f.sub(&t, &one); // t - 1
        let q = f.div(&a, &b).unwrap();
        assert_eq!(q, f.add(&t, &one));
        assert_eq!(f.fmt_elem(&f.inv(&q).unwrap()), "1/(t + 1)");
    }

    #[test]
    fn nested_variables() {
        let qs = Field::rational_functions(Field::Rationals, "s");
        let qst = Field::rational_functions(qs, "t");
        assert_eq!(qst.variables(), vec!["t".to_string(), "s".to_string()]);
        let s = qst.variable("s").unwrap();
        let t = qst.variable("t").unwrap();
        let r = qst.div(&qst.mul(&t, &t), &qst.pow(&s, 3).unwrap()).unwrap();
        assert_eq!(qst.fmt_elem(&r), "(1/s^3)*t^2");
    }
}
