//! Replacing key polynomials with coefficients in the valuation ring by
//! equivalent homogeneous keys with coefficients in a local domain `A`.
//!
//! Write `g = Σ a_j φ^j` (`a_r = 1`) and `f = Σ b_i φ^i`, with `f ∼ g^e`.
//! The digits `c_i` of `g^e` from the multinomial expansion satisfy
//! `c_{(e-1)r+j} = e·a_j + H_j(a_{j+1}, …, a_r)`, and `c_i` is close to
//! `b_i`. Solving `e·u_j = b_{(e-1)r+j} - H_j(u_{j+1}, …, u_r)` from the top
//! down keeps every `u_j` in `A[x]` as long as `1/e ∈ A`.

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::One;

use crate::approx::{resolve, uniqueness_certificate};
use crate::error::{Error, Hypothesis, Result};
use crate::field::Field;
use crate::inductive::InductiveValuation;
use crate::poly::Poly;
use crate::ring::LocalRing;
use crate::valued::ValuedField;
use crate::value::Value;

/// Digits `c_0..c_{re}` of `g^e` in the top key, with the multi-indices
/// `l` (`Σ l = e`, `Σ j·l_j = i`) contributing to each.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PowerDigits {
    pub e: usize,
    pub digits: Vec<Poly>,
    pub provenance: Vec<Vec<Vec<usize>>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DescentTrace {
    /// Height of the tower the key was descended over.
    pub stage: usize,
    pub r: usize,
    pub e: usize,
    /// Digits of the input key.
    pub a: Vec<Poly>,
    /// Digits of `f`.
    pub b: Vec<Poly>,
    pub power: PowerDigits,
    /// `c_i mod φ`, equivalent to `c_i`.
    pub alpha: Vec<Poly>,
    /// `H_j` evaluated at the `u`s, indexed by `j`.
    pub corrections: Vec<Poly>,
    pub u: Vec<Poly>,
    /// `v(c_i - b_i) - (re - i)·μ`, all positive.
    pub power_margins: Vec<Value>,
    /// `v(a_j - u_j) - (r - j)·μ`, all positive.
    pub digit_margins: Vec<Value>,
    /// `Σ u_j φ^j` before homogenization.
    pub candidate: Poly,
    pub key: Poly,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratingSequence {
    pub ring: LocalRing,
    /// `φ_1, …, φ_{n-1}`; the next key is `f` itself.
    pub keys: Vec<Poly>,
    pub values: Vec<Value>,
    /// `deg f / deg φ_i`.
    pub exponents: Vec<usize>,
    /// `deg φ_{i+1} / deg φ_i`, with `φ_n = f`.
    pub digit_lengths: Vec<usize>,
    pub traces: Vec<DescentTrace>,
    /// The tower on the keys above, ending in `v(f) = ∞`.
    pub tower: InductiveValuation,
}

/// All `l` of length `r + 1` with `Σ l = e`, `Σ j·l_j = target` and `l_j = 0`
/// for `j < from`.
fn multi_indices(e: usize, r: usize, target: usize, from: usize) -> Vec<Vec<usize>> {
    fn go(j: usize, left: usize, target: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if j == 0 {
            if target == 0 {
                cur[0] = left;
                out.push(cur.clone());
                cur[0] = 0;
            }
            return;
        }
        let mut l = 0;
        while l <= left && l * j <= target {
            cur[j] = l;
            go(j - 1, left - l, target - l * j, cur, out);
            l += 1;
        }
        cur[j] = 0;
    }
    let mut out = Vec::new();
    go(r, e, target, &mut vec![0; r + 1], &mut out);
    out.retain(|l| l[..from].iter().all(|&x| x == 0));
    out.reverse();
    out
}

fn multinomial(l: &[usize]) -> BigInt {
    let fact = |n: usize| (1..=n).fold(BigInt::one(), |acc, k| acc * k);
    let e: usize = l.iter().sum();
    l.iter().fold(fact(e), |acc, &x| acc / fact(x))
}

fn multinomial_term(digits: &[Poly], l: &[usize], k: &Field) -> Poly {
    l.iter()
        .enumerate()
        .fold(Poly::constant(k.from_bigint(&multinomial(l))), |acc, (j, &n)| {
            if n == 0 {
                acc
            } else {
                acc.mul(&digits[j].pow(n, k), k)
            }
        })
}

fn top_digits(v: &InductiveValuation, g: &Poly) -> Result<Vec<Poly>> {
    let k = v.field();
    let digits = g.phi_digits(v.key(v.height()), &k)?;
    if digits.last().map(|d| k.monic(d) == *d && d.degree() == Some(0)) != Some(true) {
        return Err(Error::InvalidInput(format!(
            "{} does not have top digit 1 in {}",
            v.fmt_poly(g),
            v.fmt_poly(v.key(v.height()))
        )));
    }
    Ok(digits)
}

/// Multinomial digits of `g^e` in the top key of `v`.
pub fn power_digits(v: &InductiveValuation, g: &Poly, e: usize) -> Result<PowerDigits> {
    let k = v.field();
    let a = top_digits(v, g)?;
    let r = a.len() - 1;
    let mut digits = Vec::new();
    let mut provenance = Vec::new();
    for i in 0..=r * e {
        let ls = multi_indices(e, r, i, 0);
        digits.push(ls.iter().fold(Poly::zero(), |acc, l| acc.add(&multinomial_term(&a, l, &k), &k)));
        provenance.push(ls);
    }
    Ok(PowerDigits { e, digits, provenance })
}

fn margin(v: &InductiveValuation, d: &Poly, excess: usize) -> Value {
    let mu = v.mu(v.height()).expect_finite().clone();
    &v.value(d) - &(mu * num_rational::BigRational::from_integer(excess.into()))
}

fn violated(what: &str) -> Error {
    Error::MembershipFailure(what.to_string())
}

/// Replaces the key `g` of `v` by an equivalent homogeneous key in `A[x]`.
///
/// `v` must have all keys in `A[x]`, and `f ∈ A[x]` must be equivalent to
/// `g^e` with `e = deg f / deg g` invertible in `A`.
pub fn descend_key(v: &InductiveValuation, g: &Poly, f: &Poly, ring: &LocalRing) -> Result<(Poly, DescentTrace)> {
    let k = v.field();
    let height = v.height();
    let phi = v.key(height);
    for p in v.stages().iter().map(|s| &s.phi).chain([f]) {
        if !ring.contains_poly(&k, p)? {
            return Err(Error::HypothesisViolated(Hypothesis::NotInRing));
        }
    }
    let (deg_f, deg_g) = (f.degree().unwrap_or(0), g.degree().unwrap_or(0));
    if deg_g == 0 || deg_f % deg_g != 0 {
        return Err(Error::NotEquivalentPower);
    }
    let e = deg_f / deg_g;
    let inv_e = k.inv(&k.from_int(e as i64))?;
    if !ring.contains(&k, &inv_e)? {
        return Err(Error::ResidueCharDividesDegree(ring.characteristic()));
    }
    if !v.is_equivalent(f, &g.pow(e, &k)) {
        return Err(Error::NotEquivalentPower);
    }

    let a = top_digits(v, g)?;
    let r = a.len() - 1;
    let b = f.phi_digits(phi, &k)?;
    if b.len() != r * e + 1 {
        return Err(Error::NotEquivalentPower);
    }
    let power = power_digits(v, g, e)?;
    let alpha: Vec<Poly> = power.digits.iter().map(|c| c.rem(phi, &k)).collect();
    let power_margins: Vec<Value> = (0..=r * e)
        .map(|i| margin(v, &power.digits[i].sub(&b[i], &k), r * e - i))
        .collect();

    let mut u = vec![Poly::zero(); r + 1];
    let mut corrections = vec![Poly::zero(); r + 1];
    u[r] = Poly::constant(k.one());
    for j in (0..r).rev() {
        let i = (e - 1) * r + j;
        let h = multi_indices(e, r, i, j + 1)
            .iter()
            .fold(Poly::zero(), |acc, l| acc.add(&multinomial_term(&u, l, &k), &k));
        u[j] = b[i].sub(&h, &k).scale(&inv_e, &k).rem(phi, &k);
        corrections[j] = h;
        if !ring.contains_poly(&k, &u[j])? {
            return Err(violated(&format!("u_{j} has a coefficient outside {ring}")));
        }
    }
    let digit_margins: Vec<Value> = (0..=r).map(|j| margin(v, &a[j].sub(&u[j], &k), r - j)).collect();
    if let Some(j) = digit_margins.iter().position(|m| *m <= Value::zero()) {
        return Err(violated(&format!("u_{j} is not close enough to a_{j}")));
    }

    let candidate = Poly::from_phi_digits(&u, phi, &k);
    let key = v.homogenize(&candidate);
    if !key.is_monic(&k) || !ring.contains_poly(&k, &key)? {
        return Err(violated("homogenized key is not a monic polynomial over A"));
    }
    if !v.is_key(&key)? || !v.is_equivalent(&key, g) {
        return Err(violated("descended polynomial is not an equivalent key"));
    }
    let trace = DescentTrace {
        stage: height,
        r,
        e,
        a,
        b,
        power,
        alpha,
        corrections,
        u,
        power_margins,
        digit_margins,
        candidate,
        key: key.clone(),
    };
    Ok((key, trace))
}

fn check_input(ring: &LocalRing, field: &ValuedField, f: &Poly) -> Result<()> {
    ring.check_dominated(field)?;
    let k = field.field();
    if f.degree().unwrap_or(0) == 0 || !f.is_monic(&k) {
        return Err(Error::HypothesisViolated(Hypothesis::NotMonic));
    }
    if !ring.contains_poly(&k, f)? {
        return Err(Error::HypothesisViolated(Hypothesis::NotInRing));
    }
    Ok(())
}

fn unique_branch(field: &Arc<ValuedField>, var: &str, f: &Poly, stage_bound: usize) -> Result<InductiveValuation> {
    let chains = resolve(field, var, f, stage_bound)?;
    if !uniqueness_certificate(&chains, f).verdict {
        return Err(Error::HypothesisViolated(Hypothesis::NonUnique));
    }
    Ok(chains.into_iter().next().unwrap().tower)
}

fn assemble(ring: &LocalRing, tower: InductiveValuation, traces: Vec<DescentTrace>, f: &Poly) -> GeneratingSequence {
    let n = tower.height();
    let deg = |p: &Poly| p.degree().unwrap();
    let keys: Vec<Poly> = (1..n).map(|i| tower.key(i).clone()).collect();
    let values = (1..n).map(|i| tower.mu(i).clone()).collect();
    let exponents = keys.iter().map(|p| deg(f) / deg(p)).collect();
    let digit_lengths = (1..n).map(|i| deg(tower.key(i + 1)) / deg(tower.key(i))).collect();
    GeneratingSequence {
        ring: ring.clone(),
        keys,
        values,
        exponents,
        digit_lengths,
        traces,
        tower,
    }
}

/// Keys in `A[x]` for the unique extension defined by `f`, with residue
/// characteristic prime to `deg f`.
pub fn generating_sequence(
    ring: &LocalRing,
    field: &Arc<ValuedField>,
    var: &str,
    f: &Poly,
    stage_bound: usize,
) -> Result<GeneratingSequence> {
    check_input(ring, field, f)?;
    let p = field.residue_characteristic();
    if p != 0 && f.degree().unwrap() as u64 % p == 0 {
        return Err(Error::HypothesisViolated(Hypothesis::PDividesDeg));
    }
    let branch = unique_branch(field, var, f, stage_bound)?;
    let n = branch.height();
    if n == 1 {
        return Ok(assemble(ring, branch, Vec::new(), f));
    }
    let mut tower = InductiveValuation::gauss(field.clone(), var, branch.key(1).clone(), branch.mu(1).clone())?;
    let mut traces = Vec::new();
    for i in 2..n {
        let (key, trace) = descend_key(&tower, branch.key(i), f, ring)?;
        tower = tower.augment(&key, branch.mu(i).clone())?;
        traces.push(trace);
    }
    tower = tower.augment(f, Value::Infinity)?;
    Ok(assemble(ring, tower, traces, f))
}

/// The keys of the unique branch, required to lie in `A[x]` already.
///
/// Needs no condition on `deg f`, so it covers presentations where the
/// residue characteristic divides the degree but the keys happen to be
/// integral.
pub fn integral_key_sequence(
    ring: &LocalRing,
    field: &Arc<ValuedField>,
    var: &str,
    f: &Poly,
    stage_bound: usize,
) -> Result<GeneratingSequence> {
    check_input(ring, field, f)?;
    let tower = unique_branch(field, var, f, stage_bound)?;
    for s in tower.stages() {
        if !ring.contains_poly(&field.field(), &s.phi)? {
            return Err(Error::MembershipFailure(format!("key {} is not over {ring}", tower.fmt_poly(&s.phi))));
        }
    }
    Ok(assemble(ring, tower, Vec::new(), f))
}
