//! Dense univariate polynomials over a [`Field`].
//!
//! Coefficients are stored lowest degree first with trailing zeros stripped,
//! so the zero polynomial is the empty vector.

use crate::error::{Error, Result};
use crate::field::{Elem, Field};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    coeffs: Vec<Elem>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<Elem>) -> Poly {
        while coeffs.last().is_some_and(Elem::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Poly {
        Poly { coeffs: Vec::new() }
    }

    pub fn constant(c: Elem) -> Poly {
        Poly::new(vec![c])
    }

    /// `c · x^n`.
    pub fn monomial(c: Elem, n: usize, field: &Field) -> Poly {
        let mut v = vec![field.zero(); n];
        v.push(c);
        Poly::new(v)
    }

    /// The variable `x`.
    pub fn x(field: &Field) -> Poly {
        Poly::monomial(field.one(), 1, field)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[Elem] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Elem> {
        self.coeffs
    }

    pub fn lead(&self) -> Option<&Elem> {
        self.coeffs.last()
    }

    /// Coefficient of `x^i`; panics past the degree, use [`Poly::coeff_or`] there.
    pub fn coeff(&self, i: usize) -> &Elem {
        &self.coeffs[i]
    }

    pub fn coeff_or(&self, i: usize, field: &Field) -> Elem {
        self.coeffs.get(i).cloned().unwrap_or_else(|| field.zero())
    }

    pub fn is_monic(&self, field: &Field) -> bool {
        self.lead().is_some_and(|c| field.is_one(c))
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn add(&self, other: &Poly, field: &Field) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut v = Vec::with_capacity(n);
        for i in 0..n {
            v.push(match (self.coeffs.get(i), other.coeffs.get(i)) {
                (Some(a), Some(b)) => field.add(a, b),
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => unreachable!(),
            });
        }
        Poly::new(v)
    }

    pub fn neg(&self, field: &Field) -> Poly {
        Poly::new(self.coeffs.iter().map(|c| field.neg(c)).collect())
    }

    pub fn sub(&self, other: &Poly, field: &Field) -> Poly {
        self.add(&other.neg(field), field)
    }

    pub fn mul(&self, other: &Poly, field: &Field) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut v = vec![field.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                v[i + j] = field.add(&v[i + j], &field.mul(a, b));
            }
        }
        Poly::new(v)
    }

    pub fn scale(&self, c: &Elem, field: &Field) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly::new(self.coeffs.iter().map(|a| field.mul(a, c)).collect())
    }

    pub fn pow(&self, n: usize, field: &Field) -> Poly {
        let mut acc = Poly::constant(field.one());
        let mut sq = self.clone();
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&sq, field);
            }
            e >>= 1;
            if e > 0 {
                sq = sq.mul(&sq, field);
            }
        }
        acc
    }

    pub fn eval(&self, at: &Elem, field: &Field) -> Elem {
        self.coeffs
            .iter()
            .rev()
            .fold(field.zero(), |acc, c| field.add(&field.mul(&acc, at), c))
    }

    /// Composition `self(g)`.
    pub fn compose(&self, g: &Poly, field: &Field) -> Poly {
        self.coeffs.iter().rev().fold(Poly::zero(), |acc, c| {
            acc.mul(g, field).add(&Poly::constant(c.clone()), field)
        })
    }

    pub fn derivative(&self, field: &Field) -> Poly {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| field.mul(c, &field.from_int(i as i64)))
                .collect(),
        )
    }

    /// Maps every coefficient through `f`, possibly into another field.
    pub fn map(&self, f: impl FnMut(&Elem) -> Elem) -> Poly {
        Poly::new(self.coeffs.iter().map(f).collect())
    }

    /// Euclidean division by any nonzero divisor over a field.
    pub fn div_rem(&self, divisor: &Poly, field: &Field) -> Result<(Poly, Poly)> {
        let dd = divisor.degree().ok_or(Error::DivisionByZero)?;
        let lc_inv = field.inv(divisor.lead().unwrap())?;
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((Poly::zero(), self.clone()));
        }
        let mut quot = vec![field.zero(); rem.len() - dd];
        for i in (dd..rem.len()).rev() {
            let c = &rem[i];
            if c.is_zero() {
                continue;
            }
            let q = if field.is_one(&lc_inv) { c.clone() } else { field.mul(c, &lc_inv) };
            for (j, d) in divisor.coeffs.iter().enumerate() {
                if d.is_zero() {
                    continue;
                }
                let k = i - dd + j;
                rem[k] = field.sub(&rem[k], &field.mul(&q, d));
            }
            quot[i - dd] = q;
        }
        rem.truncate(dd);
        Ok((Poly::new(quot), Poly::new(rem)))
    }

    /// Division by a monic polynomial; exact over any coefficient subring.
    pub fn divmod_monic(&self, phi: &Poly, field: &Field) -> Result<(Poly, Poly)> {
        if !phi.is_monic(field) {
            return Err(Error::MonicRequired);
        }
        if phi.degree() == Some(0) {
            return Err(Error::InvalidInput("divisor must have positive degree".into()));
        }
        self.div_rem(phi, field)
    }

    pub fn rem(&self, divisor: &Poly, field: &Field) -> Poly {
        self.div_rem(divisor, field).expect("nonzero divisor").1
    }

    /// Monic gcd (zero if both inputs vanish).
    pub fn gcd(&self, other: &Poly, field: &Field) -> Poly {
        // Monic remainders keep coefficient growth down over function fields.
        let (mut a, mut b) = (field.monic(self), field.monic(other));
        while !b.is_zero() {
            let r = a.rem(&b, field);
            a = b;
            b = field.monic(&r);
        }
        field.monic(&a)
    }

    /// `(g, s, t)` with `s·self + t·other = g`, `g` not normalized.
    pub fn ext_gcd(&self, other: &Poly, field: &Field) -> (Poly, Poly, Poly) {
        let one = Poly::constant(field.one());
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (one.clone(), Poly::zero());
        let (mut t0, mut t1) = (Poly::zero(), one);
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1, field).unwrap();
            let s2 = s0.sub(&q.mul(&s1, field), field);
            let t2 = t0.sub(&q.mul(&t1, field), field);
            (r0, r1) = (r1, r);
            (s0, s1) = (s1, s2);
            (t0, t1) = (t1, t2);
        }
        (r0, s0, t0)
    }

    /// Digits of the `phi`-adic expansion, lowest first.
    pub fn phi_digits(&self, phi: &Poly, field: &Field) -> Result<Vec<Poly>> {
        let mut digits = Vec::new();
        let mut g = self.clone();
        while !g.is_zero() {
            let (q, r) = g.divmod_monic(phi, field)?;
            digits.push(r);
            g = q;
        }
        Ok(digits)
    }

    /// Inverse of [`Poly::phi_digits`].
    pub fn from_phi_digits(digits: &[Poly], phi: &Poly, field: &Field) -> Poly {
        digits
            .iter()
            .rev()
            .fold(Poly::zero(), |acc, d| acc.mul(phi, field).add(d, field))
    }
}

/// Resultant of `f` and `g`, by the Euclidean remainder sequence.
///
/// Uses `Res(f, g) = (-1)^{deg f·deg g} lc(g)^{deg f - deg r} Res(g, r)` with
/// `r = f mod g`, and `Res(f, c) = c^{deg f}` for constants.
pub fn resultant(f: &Poly, g: &Poly, field: &Field) -> Result<Elem> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if g.is_zero() {
        return Ok(field.zero());
    }
    let mut a = f.clone();
    let mut b = g.clone();
    let mut acc = field.one();
    loop {
        let da = a.degree().unwrap();
        let db = b.degree().unwrap();
        if db == 0 {
            let c = field.pow(b.lead().unwrap(), da as i64)?;
            return Ok(field.mul(&acc, &c));
        }
        let r = a.rem(&b, field);
        if r.is_zero() {
            return Ok(field.zero());
        }
        let dr = r.degree().unwrap();
        if (da * db) % 2 == 1 {
            acc = field.neg(&acc);
        }
        acc = field.mul(&acc, &field.pow(b.lead().unwrap(), (da - dr) as i64)?);
        a = b;
        b = r;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::value::rat;

    fn q(v: &[i64]) -> Poly {
        let f = Field::Rationals;
        Poly::new(v.iter().map(|&c| f.from_int(c)).collect())
    }

    #[test]
    fn divmod_examples() {
        let f = Field::Rationals;
        assert_eq!(q(&[1, 0, 1]).divmod_monic(&q(&[1, 1]), &f).unwrap(), (q(&[-1, 1]), q(&[2])));
        assert_eq!(q(&[0, 1]).divmod_monic(&q(&[0, 1]), &f).unwrap(), (q(&[1]), Poly::zero()));
        assert_eq!(q(&[-2, 0, 0, 1]).divmod_monic(&q(&[0, 1]), &f).unwrap(), (q(&[0, 0, 1]), q(&[-2])));
        assert_eq!(q(&[1, 0, 1]).divmod_monic(&q(&[1, 2]), &f), Err(Error::MonicRequired));
    }

    #[test]
    fn resultant_examples() {
        let f = Field::Rationals;
        // Res(x^2+1, x+1) = (+1)^... = f(-1) = 2
        assert_eq!(resultant(&q(&[1, 0, 1]), &q(&[1, 1]), &f).unwrap(), f.from_int(2));
        let r = resultant(&q(&[-2, 0, 0, 1]), &q(&[0, 1]), &f).unwrap();
        assert!(r == f.from_int(2) || r == f.from_int(-2));
        assert_eq!(resultant(&q(&[1, 0, 1]), &q(&[1, 0, 1]), &f).unwrap(), f.zero());
        assert_eq!(resultant(&Poly::zero(), &q(&[1]), &f), Err(Error::ZeroPolynomial));
    }

    #[test]
    fn resultant_against_root_product() {
        // f = (x-1)(x-2)(x-3), Res(f, g) = g(1) g(2) g(3) for monic f
        let f = Field::Rationals;
        let fp = q(&[-6, 11, -6, 1]);
        let g = q(&[5, -1, 3]);
        let expect = [1, 2, 3]
            .iter()
            .map(|&r| g.eval(&f.from_int(r), &f))
            .fold(f.one(), |a, b| f.mul(&a, &b));
        assert_eq!(resultant(&fp, &g, &f).unwrap(), expect);
    }

    #[test]
    fn phi_adic_roundtrip() {
        let f = Field::Rationals;
        let g = q(&[1, 0, 1]);
        let phi = q(&[1, 1]);
        let d = g.phi_digits(&phi, &f).unwrap();
        assert_eq!(d, vec![q(&[2]), q(&[-2]), q(&[1])]);
        assert_eq!(Poly::from_phi_digits(&d, &phi, &f), g);
    }

    #[test]
    fn gcd_over_q() {
        let f = Field::Rationals;
        let a = q(&[-1, 0, 1]);
        let b = q(&[1, 2, 1]);
        assert_eq!(a.gcd(&b, &f), q(&[1, 1]));
        let half = f.from_rational(&rat(1, 2)).unwrap();
        assert_eq!(q(&[2, 4]).scale(&half, &f), q(&[1, 2]));
    }
}
