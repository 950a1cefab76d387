//! Factorization of univariate polynomials over the residue fields that occur
//! in inductive towers.
//!
//! * Finite fields: exhaustive search for the smallest monic divisor. The cost
//!   is `q^{d/2}` trial divisions for degree `d` over `F_q`, fine for `q ≤ 97`
//!   and `d ≤ 12`, hopeless well beyond that.
//! * `Q`: rational roots only. A root-free remainder of degree ≤ 3 is
//!   irreducible; anything larger is reported as unsupported.
//! * `k(λ)`: polynomials with coefficients in `k` factor as over `k`, since `k`
//!   is algebraically closed in `k(λ)`. Other inputs must be linear.
//! * Algebraic extensions of `Q`: linear inputs only.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive};

use crate::error::{Error, Result};
use crate::field::{Elem, Field};
use crate::poly::Poly;
use crate::value::Rational;

/// Monic irreducible factors with multiplicities, sorted by degree.
pub type Factorization = Vec<(Poly, usize)>;

pub fn factor(g: &Poly, field: &Field) -> Result<Factorization> {
    if g.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let g = field.monic(g);
    let mut out = if g.degree() == Some(0) {
        Vec::new()
    } else if g.degree() == Some(1) {
        vec![(g.clone(), 1)]
    } else if field.order().is_some() {
        factor_finite(&g, field)
    } else {
        match field {
            Field::Rationals => factor_rationals(&g)?,
            Field::RationalFunctions { base, .. } => {
                let lowered: Option<Vec<Elem>> =
                    g.coeffs().iter().map(|c| field.as_base_constant(c)).collect();
                match lowered {
                    Some(cs) => factor(&Poly::new(cs), base)?
                        .into_iter()
                        .map(|(p, m)| (p.map(|c| field.from_base(c.clone())), m))
                        .collect(),
                    None => {
                        return Err(Error::UnsupportedResidueFactorization(format!(
                            "degree {} polynomial with transcendental coefficients over {field}",
                            g.degree().unwrap()
                        )))
                    }
                }
            }
            _ => {
                return Err(Error::UnsupportedResidueFactorization(format!(
                    "degree {} polynomial over {field}",
                    g.degree().unwrap()
                )))
            }
        }
    };
    out.sort_by_cached_key(|(p, _)| (p.degree(), field.fmt_poly(p, "y")));
    Ok(out)
}

pub fn is_irreducible(g: &Poly, field: &Field) -> Result<bool> {
    let f = factor(g, field)?;
    Ok(f.len() == 1 && f[0].1 == 1)
}

/// Multiplicity of `p` in `g`, and the cofactor.
fn strip_factor(g: &Poly, p: &Poly, field: &Field) -> (Poly, usize) {
    let mut g = g.clone();
    let mut m = 0;
    loop {
        let (q, r) = g.div_rem(p, field).unwrap();
        if !r.is_zero() {
            return (g, m);
        }
        g = q;
        m += 1;
    }
}

/// Every monic polynomial of exact degree `d` over a finite field.
fn monic_of_degree(d: usize, field: &Field) -> Vec<Poly> {
    let elems = field.elements().expect("finite field");
    let mut tails: Vec<Vec<Elem>> = vec![Vec::new()];
    for _ in 0..d {
        let mut next = Vec::with_capacity(tails.len() * elems.len());
        for t in &tails {
            for c in &elems {
                let mut v = t.clone();
                v.push(c.clone());
                next.push(v);
            }
        }
        tails = next;
    }
    tails
        .into_iter()
        .map(|mut v| {
            v.push(field.one());
            Poly::new(v)
        })
        .collect()
}

fn factor_finite(g: &Poly, field: &Field) -> Factorization {
    let mut out = Vec::new();
    let mut rest = g.clone();
    let mut d = 1;
    while rest.degree().unwrap_or(0) > 0 {
        let n = rest.degree().unwrap();
        if 2 * d > n {
            out.push((rest.clone(), 1));
            break;
        }
        for cand in monic_of_degree(d, field) {
            if rest.degree().unwrap() < d {
                break;
            }
            let (r, m) = strip_factor(&rest, &cand, field);
            if m > 0 {
                out.push((cand, m));
                rest = r;
            }
        }
        d += 1;
    }
    out
}

fn divisors(n: &BigInt) -> Vec<BigInt> {
    let n = n.abs();
    let small = n.to_u64().expect("coefficient too large for rational root search");
    let mut ds = Vec::new();
    let mut i = 1u64;
    while i * i <= small {
        if small % i == 0 {
            ds.push(BigInt::from(i));
            if i * i != small {
                ds.push(BigInt::from(small / i));
            }
        }
        i += 1;
    }
    ds
}

/// Squarefree parts `s_i` with `g = Π s_i^i`, for characteristic zero.
fn squarefree_parts(g: &Poly, field: &Field) -> Vec<(Poly, usize)> {
    let div = |a: &Poly, b: &Poly| a.div_rem(b, field).unwrap().0;
    let d = g.derivative(field);
    let a = g.gcd(&d, field);
    let mut b = div(g, &a);
    let mut c = div(&d, &a);
    let mut out = Vec::new();
    let mut i = 1;
    while b.degree().unwrap_or(0) > 0 {
        let e = c.sub(&b.derivative(field), field);
        let s = b.gcd(&e, field);
        if s.degree().unwrap_or(0) > 0 {
            out.push((s.clone(), i));
        }
        b = div(&b, &s);
        c = div(&e, &s);
        i += 1;
    }
    out
}

fn factor_rationals(g: &Poly) -> Result<Factorization> {
    let field = Field::Rationals;
    let mut out = Vec::new();
    for (s, i) in squarefree_parts(g, &field) {
        out.extend(factor_squarefree_rationals(&s)?.into_iter().map(|(p, m)| (p, m * i)));
    }
    Ok(out)
}

fn factor_squarefree_rationals(g: &Poly) -> Result<Factorization> {
    let field = Field::Rationals;
    let mut out = Vec::new();
    let mut rest = g.clone();
    // roots at zero first
    let (r, m) = strip_factor(&rest, &Poly::x(&field), &field);
    if m > 0 {
        out.push((Poly::x(&field), m));
        rest = r;
    }
    if rest.degree().unwrap_or(0) >= 2 {
        // integer primitive form: a_0 ≠ 0 now
        let denom_lcm = rest
            .coeffs()
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.as_rational().unwrap().denom()));
        let ints: Vec<BigInt> = rest
            .coeffs()
            .iter()
            .map(|c| (c.as_rational().unwrap() * &denom_lcm).to_integer())
            .collect();
        let a0 = ints.first().unwrap().clone();
        let an = ints.last().unwrap().clone();
        let mut cands = Vec::new();
        for p in divisors(&a0) {
            for q in divisors(&an) {
                let r = Rational::new(p.clone(), q);
                cands.push(r.clone());
                cands.push(-r);
            }
        }
        cands.sort();
        cands.dedup();
        for c in cands {
            if rest.degree().unwrap_or(0) < 1 {
                break;
            }
            let lin = Poly::new(vec![Elem::Q(-c.clone()), field.one()]);
            let (r, m) = strip_factor(&rest, &lin, &field);
            if m > 0 {
                out.push((lin, m));
                rest = r;
            }
        }
    }
    match rest.degree() {
        Some(0) | None => {}
        Some(1..=3) => out.push((rest, 1)),
        Some(d) => {
            return Err(Error::UnsupportedResidueFactorization(format!(
                "root-free degree {d} factor over Q"
            )))
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn over(field: &Field, v: &[i64]) -> Poly {
        Poly::new(v.iter().map(|&c| field.from_int(c)).collect())
    }

    fn product(f: &Factorization, field: &Field) -> Poly {
        f.iter().fold(Poly::constant(field.one()), |acc, (p, m)| acc.mul(&p.pow(*m, field), field))
    }

    #[test]
    fn small_prime_field_examples() {
        let f2 = Field::Prime(2);
        assert_eq!(factor(&over(&f2, &[1, 0, 1]), &f2).unwrap(), vec![(over(&f2, &[1, 1]), 2)]);
        assert_eq!(factor(&over(&f2, &[1, 1, 1]), &f2).unwrap(), vec![(over(&f2, &[1, 1, 1]), 1)]);
        let f3 = Field::Prime(3);
        assert_eq!(factor(&over(&f3, &[1, 0, 1]), &f3).unwrap(), vec![(over(&f3, &[1, 0, 1]), 1)]);
        let q = Field::Rationals;
        let sq = over(&q, &[1, 0, 1]).pow(2, &q).mul(&over(&q, &[-2, 1]), &q);
        assert_eq!(
            factor(&sq, &q).unwrap(),
            vec![(over(&q, &[-2, 1]), 1), (over(&q, &[1, 0, 1]), 2)]
        );
        let f5 = Field::Prime(5);
        let fac = factor(&over(&f5, &[1, 0, 1]), &f5).unwrap();
        assert_eq!(fac, vec![(over(&f5, &[2, 1]), 1), (over(&f5, &[3, 1]), 1)]);
    }

    #[test]
    fn exhaustive_irreducibility_brute_force() {
        // every monic cubic over F3 without roots is irreducible
        let f3 = Field::Prime(3);
        for p in monic_of_degree(3, &f3) {
            let has_root = f3.elements().unwrap().iter().any(|a| p.eval(a, &f3).is_zero());
            assert_eq!(is_irreducible(&p, &f3).unwrap(), !has_root);
            assert_eq!(product(&factor(&p, &f3).unwrap(), &f3), p);
        }
    }

    #[test]
    fn rationals() {
        let q = Field::Rationals;
        // (x-1)^2 (x^2+1)
        let p = over(&q, &[1, -2, 2, -2, 1]);
        let fac = factor(&p, &q).unwrap();
        assert_eq!(fac, vec![(over(&q, &[-1, 1]), 2), (over(&q, &[1, 0, 1]), 1)]);
        assert!(is_irreducible(&over(&q, &[2, 0, 1]), &q).unwrap());
        assert!(matches!(
            factor(&over(&q, &[2, 0, 0, 0, 1]), &q),
            Err(Error::UnsupportedResidueFactorization(_))
        ));
    }

    #[test]
    fn transcendental_extension_uses_constants() {
        let k = Field::rational_functions(Field::Rationals, "l");
        let p = over(&k, &[1, 0, 1]);
        assert!(is_irreducible(&p, &k).unwrap());
        let l = k.generator().unwrap();
        let lin = Poly::new(vec![l.clone(), k.one()]);
        assert!(is_irreducible(&lin, &k).unwrap());
        let quad = Poly::new(vec![l, k.zero(), k.one()]);
        assert!(factor(&quad, &k).is_err());
    }

    #[test]
    fn extension_of_finite_field() {
        let f2 = Field::Prime(2);
        let f4 = Field::algebraic(f2.clone(), over(&f2, &[1, 1, 1]), "a");
        // y^2 + y + 1 splits over F4
        let p = over(&f4, &[1, 1, 1]);
        let fac = factor(&p, &f4).unwrap();
        assert_eq!(fac.len(), 2);
        assert_eq!(product(&fac, &f4), p);
    }
}
