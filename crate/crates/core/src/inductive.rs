//! Inductive valuations `[v0; v1(φ1)=μ1; …; vk(φk)=μk]` on `K[x]`.
//!
//! Residual polynomials use a fixed normalization. Every value `γ` of the
//! stage-`i` value group has a canonical monomial
//! `M_i(γ) = π^b · φ_1^{a_1} ⋯ φ_i^{a_i}` with `0 ≤ a_j < e_j`, and stage `i`
//! carries the unit monomial `U_i = M_{i-1}(e_i μ_i)`. The residual variable is
//! `λ_i`, the class of `φ_i^{e_i} / U_i`. The stage-`i` residue field `k_i`
//! holds the coefficients of stage-`i` residual polynomials; `k_{i+1}` is `k_i`
//! with a root `z_i` of `R_i(φ_{i+1})` adjoined, and `λ_i` reduces to `z_i`
//! from stage `i + 1` on.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, KeyCondition, Result};
use crate::factor::{factor, is_irreducible};
use crate::field::{Elem, Field};
use crate::poly::Poly;
use crate::valued::{index_in, scaled, ValuedField};
use crate::value::{Rational, Value};

/// A Laurent monomial `π^pi · Π φ_i^{exps[i-1]}`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Monomial {
    pub pi: i64,
    pub exps: Vec<i64>,
}

impl Monomial {
    /// Exponent of `φ_i`, `i ≥ 1`.
    pub fn exp(&self, i: usize) -> i64 {
        self.exps.get(i - 1).copied().unwrap_or(0)
    }

    fn set_exp(&mut self, i: usize, v: i64) {
        if self.exps.len() < i {
            self.exps.resize(i, 0);
        }
        self.exps[i - 1] = v;
    }

    fn zip(&self, other: &Monomial, f: impl Fn(i64, i64) -> i64) -> Monomial {
        let n = self.exps.len().max(other.exps.len());
        Monomial {
            pi: f(self.pi, other.pi),
            exps: (1..=n).map(|i| f(self.exp(i), other.exp(i))).collect(),
        }
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        self.zip(other, |a, b| a + b)
    }

    pub fn div(&self, other: &Monomial) -> Monomial {
        self.zip(other, |a, b| a - b)
    }

    pub fn pow(&self, n: i64) -> Monomial {
        Monomial {
            pi: self.pi * n,
            exps: self.exps.iter().map(|a| a * n).collect(),
        }
    }

    /// Highest stage with a nonzero exponent, `0` for a power of `π`.
    fn top(&self) -> usize {
        self.exps.iter().rposition(|&a| a != 0).map_or(0, |i| i + 1)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Stage {
    pub phi: Poly,
    pub mu: Value,
    /// Smallest `e` with `e·μ` in the previous value group; `1` when `μ = ∞`.
    pub e: u64,
    /// The value group after this stage is `(1/d)Z`.
    pub d: u64,
    pub unit: Monomial,
    residue_field: Field,
    /// Monic residual polynomial of `φ` at the previous stage.
    pub key_residual: Option<Poly>,
    /// Root of `key_residual` in `residue_field`.
    prev_root: Option<Elem>,
    extends_residue: bool,
}

/// Digits of a `φ`-adic expansion with their values.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhiExpansion {
    pub stage: usize,
    pub digits: Vec<Poly>,
    pub digit_values: Vec<Value>,
    pub term_values: Vec<Value>,
}

impl PhiExpansion {
    pub fn min_value(&self) -> Value {
        self.term_values.iter().cloned().min().unwrap_or(Value::Infinity)
    }

    /// Indices attaining the minimal term value.
    pub fn attaining(&self) -> Vec<usize> {
        let m = self.min_value();
        (0..self.term_values.len()).filter(|&j| self.term_values[j] == m).collect()
    }
}

/// A term `a · φ_1^{m_1} ⋯ φ_k^{m_k}` of the full expansion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiTerm {
    pub coeff: Elem,
    pub exps: Vec<usize>,
}

/// Residual polynomial `P` of `g` at stage `i`, with
/// `g / M_i(value) ≡ P(λ_i)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Residual {
    pub value: Value,
    /// Exponent of `φ_i` in `M_i(value)`.
    pub phase: usize,
    /// Smallest and largest digit index attaining the value.
    pub low: usize,
    pub high: usize,
    pub poly: Poly,
}

impl Residual {
    /// `P / λ^u` with `u` the order of `P` at `0`.
    pub fn reduced(&self) -> (usize, Poly) {
        let u = self.poly.coeffs().iter().position(|c| !c.is_zero()).unwrap();
        (u, Poly::new(self.poly.coeffs()[u..].to_vec()))
    }
}

/// `f ∼ unit · φ^{phi_exponent} · Π ψ^m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquivalenceFactorization {
    pub unit: Poly,
    pub phi_exponent: usize,
    pub factors: Vec<(Poly, usize)>,
    pub residual_factors: Vec<(Poly, usize)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InductiveValuation {
    base: Arc<ValuedField>,
    var: String,
    pi: Elem,
    stages: Vec<Stage>,
}

impl InductiveValuation {
    /// The one-stage tower `[v0; v(φ)=μ]` with `φ` monic linear.
    pub fn gauss(base: Arc<ValuedField>, var: &str, phi: Poly, mu: Value) -> Result<Self> {
        let field = base.field();
        if phi.degree() != Some(1) || !phi.is_monic(&field) {
            return Err(Error::KeyConditionViolated(KeyCondition::MonicPositiveDegree));
        }
        let mut v = InductiveValuation {
            pi: base.uniformizer(),
            base,
            var: var.to_string(),
            stages: Vec::new(),
        };
        let st = v.make_stage(phi, mu, None);
        v.stages.push(st);
        Ok(v)
    }

    /// The Gauss valuation with `v(x) = μ`.
    pub fn gauss_x(base: Arc<ValuedField>, var: &str, mu: Value) -> Result<Self> {
        let x = Poly::x(&base.field());
        Self::gauss(base, var, x, mu)
    }

    fn make_stage(&self, phi: Poly, mu: Value, key_residual: Option<Poly>) -> Stage {
        let k = self.height();
        let dprev = self.denominator(k);
        let (e, d, unit) = match &mu {
            Value::Finite(q) => {
                let e = index_in(q, dprev);
                (e, dprev * e, self.canonical_rat(k, &(q * Rational::from_integer(e.into()))))
            }
            Value::Infinity => (1, dprev, Monomial::default()),
        };
        let (residue_field, prev_root, extends_residue) = match &key_residual {
            None => (self.base.residue_field(), None, false),
            Some(psi) => {
                let kk = self.residue_field(k).clone();
                if psi.degree() == Some(1) {
                    let root = kk.neg(psi.coeff(0));
                    (kk, Some(root), false)
                } else {
                    let ext = Field::algebraic(kk, psi.clone(), &format!("z{k}"));
                    let z = ext.generator().unwrap();
                    (ext, Some(z), true)
                }
            }
        };
        Stage {
            phi,
            mu,
            e,
            d,
            unit,
            residue_field,
            key_residual,
            prev_root,
            extends_residue,
        }
    }

    pub fn height(&self) -> usize {
        self.stages.len()
    }

    pub fn stages(&self) -> &[Stage] {
        &self.stages
    }

    /// Stage `k`, `1 ≤ k ≤ height`.
    pub fn stage(&self, k: usize) -> &Stage {
        &self.stages[k - 1]
    }

    pub fn key(&self, k: usize) -> &Poly {
        &self.stage(k).phi
    }

    pub fn mu(&self, k: usize) -> &Value {
        &self.stage(k).mu
    }

    pub fn base(&self) -> &ValuedField {
        &self.base
    }

    pub fn base_arc(&self) -> Arc<ValuedField> {
        self.base.clone()
    }

    pub fn var(&self) -> &str {
        &self.var
    }

    /// Coefficient field of the polynomial ring.
    pub fn field(&self) -> Field {
        self.base.field()
    }

    pub fn is_pseudo(&self) -> bool {
        self.stages.last().is_some_and(|s| s.mu.is_infinite())
    }

    /// `d_k` with stage-`k` value group `(1/d_k)Z`; `k = 0` is the base.
    pub fn denominator(&self, k: usize) -> u64 {
        if k == 0 {
            self.base.value_denominator()
        } else {
            self.stage(k).d
        }
    }

    /// The residue field `k_k` of stage-`k` residual coefficients.
    pub fn residue_field(&self, k: usize) -> &Field {
        &self.stage(k).residue_field
    }

    /// The first `k` stages.
    pub fn truncate(&self, k: usize) -> InductiveValuation {
        assert!(k >= 1 && k <= self.height());
        InductiveValuation {
            stages: self.stages[..k].to_vec(),
            ..self.clone()
        }
    }

    fn finite_mu(&self, k: usize) -> Result<&Rational> {
        self.stage(k)
            .mu
            .finite()
            .ok_or_else(|| Error::InvalidInput(format!("stage {k} has infinite key value")))
    }

    fn top_finite(&self) -> Result<usize> {
        let n = self.height();
        self.finite_mu(n)?;
        Ok(n)
    }

    pub fn fmt_poly(&self, p: &Poly) -> String {
        self.field().fmt_poly(p, &self.var)
    }

    // ---------------------------------------------------------------- values

    fn digits(&self, k: usize, g: &Poly) -> Vec<Poly> {
        g.phi_digits(self.key(k), &self.field()).expect("keys are monic")
    }

    /// `v_k(g)`; at `k = 0` only constants are accepted.
    pub fn value_at(&self, k: usize, g: &Poly) -> Value {
        if g.is_zero() {
            return Value::Infinity;
        }
        if k == 0 {
            assert_eq!(g.degree(), Some(0), "v0 is defined on constants only");
            return self.base.value(g.coeff(0));
        }
        if g.degree() < self.key(k).degree() {
            return self.value_at(k - 1, g);
        }
        self.phi_expand(k, g).min_value()
    }

    pub fn value(&self, g: &Poly) -> Value {
        self.value_at(self.height(), g)
    }

    pub fn phi_expand(&self, k: usize, g: &Poly) -> PhiExpansion {
        let digits = self.digits(k, g);
        let mu = self.mu(k);
        let digit_values: Vec<Value> = digits.iter().map(|d| self.value_at(k - 1, d)).collect();
        let term_values = digit_values
            .iter()
            .enumerate()
            .map(|(j, v)| if v.is_infinite() { Value::Infinity } else { v + &mu.times(j as u64) })
            .collect();
        PhiExpansion {
            stage: k,
            digits,
            digit_values,
            term_values,
        }
    }

    /// Full expansion in the keys of the first `k` stages.
    pub fn multi_expand(&self, k: usize, g: &Poly) -> Vec<MultiTerm> {
        if g.is_zero() {
            return Vec::new();
        }
        if k == 0 {
            return vec![MultiTerm {
                coeff: g.coeff(0).clone(),
                exps: Vec::new(),
            }];
        }
        let mut out = Vec::new();
        for (j, d) in self.digits(k, g).iter().enumerate() {
            for mut t in self.multi_expand(k - 1, d) {
                t.exps.push(j);
                out.push(t);
            }
        }
        out
    }

    pub fn term_value(&self, t: &MultiTerm) -> Value {
        t.exps.iter().enumerate().fold(self.base.value(&t.coeff), |acc, (i, &m)| {
            acc + self.mu(i + 1).times(m as u64)
        })
    }

    pub fn monomial_value(&self, m: &Monomial) -> Rational {
        let d0 = Rational::from_integer(self.denominator(0).into());
        let mut v = Rational::from_integer(m.pi.into()) / d0;
        for i in 1..=m.exps.len() {
            if m.exp(i) != 0 {
                v += self.mu(i).expect_finite() * Rational::from_integer(m.exp(i).into());
            }
        }
        v
    }

    /// The monomial as an element of `K(var)`.
    pub fn monomial_element(&self, m: &Monomial) -> Elem {
        let k = self.field();
        let ext = Field::rational_functions(k.clone(), &self.var);
        let mut num = Poly::constant(k.pow(&self.pi, m.pi).unwrap());
        let mut den = Poly::constant(k.one());
        for i in 1..=m.exps.len() {
            let a = m.exp(i);
            let p = self.key(i).pow(a.unsigned_abs() as usize, &k);
            if a > 0 {
                num = num.mul(&p, &k);
            } else if a < 0 {
                den = den.mul(&p, &k);
            }
        }
        ext.fraction(&num, &den).unwrap()
    }

    // ----------------------------------------------------- canonical monomials

    /// The `a ∈ [0, e_k)` with `γ - a·μ_k` in the stage-`(k-1)` value group.
    fn phase(&self, k: usize, g: &Rational) -> usize {
        let st = self.stage(k);
        let Value::Finite(mu) = &st.mu else { return 0 };
        let dprev = self.denominator(k - 1);
        (0..st.e as usize)
            .find(|&a| scaled(&(g - mu * Rational::from_integer(a.into())), dprev).is_some())
            .unwrap_or_else(|| panic!("{g} is outside the stage-{k} value group"))
    }

    fn canonical_rat(&self, k: usize, g: &Rational) -> Monomial {
        if k == 0 {
            let pi = scaled(g, self.denominator(0))
                .unwrap_or_else(|| panic!("{g} is outside the base value group"));
            return Monomial { pi, exps: Vec::new() };
        }
        let a = self.phase(k, g);
        let rest = match &self.stage(k).mu {
            Value::Finite(mu) => g - mu * Rational::from_integer(a.into()),
            Value::Infinity => g.clone(),
        };
        let mut m = self.canonical_rat(k - 1, &rest);
        m.set_exp(k, a as i64);
        m
    }

    /// `M_k(γ)`.
    pub fn canonical_monomial(&self, k: usize, gamma: &Value) -> Monomial {
        self.canonical_rat(k, gamma.expect_finite())
    }

    /// Residue in `k_j` of a value-0 monomial in `π, φ_1, …, φ_{j-1}`.
    fn mono_res(&self, m: &Monomial, j: usize) -> Elem {
        let kj = self.residue_field(j);
        let i = m.top();
        assert!(i < j, "monomial reaches stage {i}, residue asked at stage {j}");
        if i == 0 {
            assert_eq!(m.pi, 0, "monomial of nonzero value");
            return kj.one();
        }
        let st = self.stage(i);
        let b = m.exp(i);
        assert_eq!(b % st.e as i64, 0, "monomial of nonzero value");
        let q = b / st.e as i64;
        let mut rest = m.clone();
        rest.set_exp(i, 0);
        let rest = rest.mul(&st.unit.pow(q));
        let inner = kj.embed_from(self.residue_field(i), self.mono_res(&rest, i));
        let z = kj.embed_from(
            self.residue_field(i + 1),
            self.stage(i + 1).prev_root.clone().unwrap(),
        );
        kj.mul(&inner, &kj.pow(&z, q).unwrap())
    }

    /// Residue in `k_j` of `g / M_{j-1}(v(g))`, for `deg g < deg φ_j`.
    fn eps(&self, g: &Poly, j: usize) -> Elem {
        if j == 1 {
            let field = self.field();
            let c = g.coeff(0);
            let n = scaled(self.base.value(c).expect_finite(), self.denominator(0)).unwrap();
            let u = field.div(c, &field.pow(&self.pi, n).unwrap()).unwrap();
            return self.base.residue(&u).expect("value-0 element");
        }
        let r = self.residual_at(j - 1, g).expect("nonzero digit");
        let kj = self.residue_field(j);
        let kp = self.residue_field(j - 1);
        let z = self.stage(j).prev_root.clone().unwrap();
        r.poly.coeffs().iter().rev().fold(kj.zero(), |acc, c| {
            kj.add(&kj.mul(&acc, &z), &kj.embed_from(kp, c.clone()))
        })
    }

    // ---------------------------------------------------- residual polynomials

    /// Residual polynomial of `g` at stage `k`, over `k_k`.
    pub fn residual_at(&self, k: usize, g: &Poly) -> Result<Residual> {
        if g.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let mu = self.finite_mu(k)?.clone();
        let st = self.stage(k);
        let kk = self.residue_field(k);
        let exp = self.phi_expand(k, g);
        let gamma = exp.min_value();
        let gq = gamma.expect_finite();
        let a = self.phase(k, gq);
        let base_m = self.canonical_rat(k - 1, &(gq - &mu * Rational::from_integer(a.into())));
        let attaining = exp.attaining();
        let top = (attaining.last().unwrap() - a) / st.e as usize;
        let mut coeffs = vec![kk.zero(); top + 1];
        for &j in &attaining {
            let u = (j - a) / st.e as usize;
            let vj = exp.digit_values[j].expect_finite();
            let cm = self
                .canonical_rat(k - 1, vj)
                .mul(&st.unit.pow(u as i64))
                .div(&base_m);
            coeffs[u] = kk.mul(&self.eps(&exp.digits[j], k), &self.mono_res(&cm, k));
        }
        Ok(Residual {
            value: gamma,
            phase: a,
            low: attaining[0],
            high: *attaining.last().unwrap(),
            poly: Poly::new(coeffs),
        })
    }

    /// Residual polynomial at the top stage.
    pub fn residual_polynomial(&self, g: &Poly) -> Result<Residual> {
        self.residual_at(self.top_finite()?, g)
    }

    /// A polynomial `h` whose stage-`k` residual is `(δ, phase(δ), P)`.
    pub fn lift_residual_at(&self, k: usize, delta: &Value, p: &Poly) -> Result<Poly> {
        let field = self.field();
        let mu = self.finite_mu(k)?.clone();
        let st = self.stage(k);
        let kk = self.residue_field(k);
        let dq = delta.expect_finite();
        let a = self.phase(k, dq);
        let base_m = self.canonical_rat(k - 1, &(dq - &mu * Rational::from_integer(a.into())));
        let mut h = Poly::zero();
        for (u, c) in p.coeffs().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let j = a + u * st.e as usize;
            let vj = dq - &mu * Rational::from_integer(j.into());
            let cm = self
                .canonical_rat(k - 1, &vj)
                .mul(&st.unit.pow(u as i64))
                .div(&base_m);
            let target = kk.div(c, &self.mono_res(&cm, k))?;
            let hu = self.lift_to_stage(k, &vj, &target)?;
            h = h.add(&hu.mul(&st.phi.pow(j, &field), &field), &field);
        }
        Ok(h)
    }

    /// `h` with `deg h < deg φ_j`, `v(h) = δ` and residue `c` of `h / M_{j-1}(δ)`.
    fn lift_to_stage(&self, j: usize, delta: &Rational, c: &Elem) -> Result<Poly> {
        if c.is_zero() {
            return Ok(Poly::zero());
        }
        if j == 1 {
            let field = self.field();
            let n = scaled(delta, self.denominator(0)).expect("value in the base group");
            let lifted = self.base.lift(c)?;
            return Ok(Poly::constant(field.mul(&lifted, &field.pow(&self.pi, n)?)));
        }
        let st = self.stage(j);
        let q = if st.extends_residue {
            match c {
                Elem::Alg(p) => p.clone(),
                _ => unreachable!("element of an algebraic residue field"),
            }
        } else {
            Poly::constant(c.clone())
        };
        self.lift_residual_at(j - 1, &Value::Finite(delta.clone()), &q)
    }

    // ------------------------------------------------------ equivalence calculus

    /// Keeps the minimal-value terms of the full expansion.
    pub fn homogenize(&self, g: &Poly) -> Poly {
        self.homogenize_at(self.height(), g)
    }

    pub fn homogenize_at(&self, k: usize, g: &Poly) -> Poly {
        if g.is_zero() || k == 0 {
            return g.clone();
        }
        let field = self.field();
        let exp = self.phi_expand(k, g);
        let phi = self.key(k);
        exp.attaining().iter().fold(Poly::zero(), |acc, &j| {
            let d = self.homogenize_at(k - 1, &exp.digits[j]);
            acc.add(&d.mul(&phi.pow(j, &field), &field), &field)
        })
    }

    pub fn is_homogeneous(&self, g: &Poly) -> bool {
        self.homogenize(g) == *g
    }

    /// `g ∼ h`: `v(g - h) > min(v(g), v(h))`, or both vanish.
    pub fn is_equivalent(&self, g: &Poly, h: &Poly) -> bool {
        let vg = self.value(g);
        let vh = self.value(h);
        if vg.is_infinite() && vh.is_infinite() {
            return true;
        }
        self.value(&g.sub(h, &self.field())) > vg.min(vh)
    }

    /// Whether `g ∼ a·h` for some `a`, at the top stage.
    pub fn equiv_divides(&self, h: &Poly, g: &Poly) -> Result<bool> {
        if g.is_zero() {
            return Ok(true);
        }
        if h.is_zero() {
            return Ok(false);
        }
        let n = self.top_finite()?;
        let rh = self.residual_at(n, h)?;
        let rg = self.residual_at(n, g)?;
        if rh.low > rg.low {
            return Ok(false);
        }
        let (_, ph) = rh.reduced();
        let (_, pg) = rg.reduced();
        let (_, r) = pg.div_rem(&ph, self.residue_field(n))?;
        Ok(r.is_zero())
    }

    /// Top `φ_n`-digit constant and attaining the value.
    pub fn is_minimal(&self, g: &Poly) -> bool {
        self.is_minimal_at(self.height(), g)
    }

    fn is_minimal_at(&self, k: usize, g: &Poly) -> bool {
        if g.is_zero() {
            return false;
        }
        let exp = self.phi_expand(k, g);
        let m = exp.digits.len() - 1;
        exp.digits[m].degree() == Some(0) && exp.term_values[m] == exp.min_value()
    }

    /// `None` when `φ` is a key polynomial for the top stage, else the failed condition.
    pub fn key_check(&self, phi: &Poly) -> Result<Option<KeyCondition>> {
        let field = self.field();
        if phi.degree().unwrap_or(0) == 0 || !phi.is_monic(&field) {
            return Ok(Some(KeyCondition::MonicPositiveDegree));
        }
        let n = self.top_finite()?;
        if !self.is_minimal_at(n, phi) {
            return Ok(Some(KeyCondition::Minimal));
        }
        let r = self.residual_at(n, phi)?;
        let ok = match r.low {
            0 => is_irreducible(&r.poly, self.residue_field(n))?,
            1 => phi.degree() == self.key(n).degree(),
            _ => false,
        };
        Ok(if ok { None } else { Some(KeyCondition::EquivalenceIrreducible) })
    }

    pub fn is_key(&self, phi: &Poly) -> Result<bool> {
        Ok(self.key_check(phi)?.is_none())
    }

    /// `[self; v(φ)=μ]`.
    pub fn augment(&self, phi: &Poly, mu: Value) -> Result<InductiveValuation> {
        if self.is_pseudo() {
            return Err(Error::InvalidInput("cannot augment a pseudo-valuation".into()));
        }
        let violated = |c| Err(Error::KeyConditionViolated(c));
        let field = self.field();
        if phi.degree().unwrap_or(0) == 0 || !phi.is_monic(&field) {
            return violated(KeyCondition::MonicPositiveDegree);
        }
        let n = self.height();
        let (dn, dphi) = (self.key(n).degree().unwrap(), phi.degree().unwrap());
        if dphi < dn {
            return violated(KeyCondition::DegreeNotIncreasing);
        }
        if dphi % dn != 0 {
            return violated(KeyCondition::DegreeNotDivisible);
        }
        if !self.is_minimal_at(n, phi) {
            return violated(KeyCondition::Minimal);
        }
        if self.is_equivalent(phi, self.key(n)) {
            return violated(KeyCondition::EquivalentToPrevious);
        }
        let r = self.residual_at(n, phi)?;
        if r.low != 0 || !is_irreducible(&r.poly, self.residue_field(n))? {
            return violated(KeyCondition::EquivalenceIrreducible);
        }
        let current = self.value(phi);
        if mu <= current {
            return Err(Error::KeyValueTooSmall { mu, current });
        }
        let psi = self.residue_field(n).monic(&r.poly);
        let st = self.make_stage(phi.clone(), mu, Some(psi));
        let mut out = self.clone();
        out.stages.push(st);
        Ok(out)
    }

    /// Largest digit index attaining `v_k(g)` in the `φ_k` expansion.
    pub fn effective_degree(&self, k: usize, g: &Poly) -> usize {
        *self.phi_expand(k, g).attaining().last().expect("nonzero polynomial")
    }

    /// Spread of the digit indices attaining `v_k(g)`.
    pub fn projection_at(&self, k: usize, g: &Poly) -> usize {
        let a = self.phi_expand(k, g).attaining();
        a.last().unwrap() - a[0]
    }

    // -------------------------------------------------- equivalence factorization

    /// A key whose top-stage residual polynomial is associate to `psi`, a monic
    /// irreducible polynomial over `k_n` other than `λ`.
    pub fn lift_residual_factor(&self, psi: &Poly) -> Result<Poly> {
        let n = self.top_finite()?;
        let kk = self.residue_field(n);
        let st = self.stage(n);
        let t = psi.degree().expect("nonzero factor");
        let gamma = self.finite_mu(n)? * Rational::from_integer((t as u64 * st.e).into());
        let top = self.canonical_rat(n - 1, &gamma);
        let kappa = self.mono_res(&st.unit.pow(t as i64).div(&top), n);
        let target = psi.scale(&kk.div(&kappa, psi.lead().unwrap())?, kk);
        self.lift_residual_at(n, &Value::Finite(gamma), &target)
    }

    /// `f ∼ unit · φ_n^{m_0} · Π ψ_i^{m_i}` at the top stage.
    pub fn equivalence_factor(&self, f: &Poly) -> Result<EquivalenceFactorization> {
        let n = self.top_finite()?;
        let field = self.field();
        let kk = self.residue_field(n);
        let r = self.residual_at(n, f)?;
        let (_, reduced) = r.reduced();
        let residual_factors = factor(&reduced, kk)?;
        let mut factors = Vec::new();
        let mut product = self.key(n).pow(r.low, &field);
        for (q, m) in &residual_factors {
            let psi = self.lift_residual_factor(q)?;
            product = product.mul(&psi.pow(*m, &field), &field);
            factors.push((psi, *m));
        }
        let delta = &r.value - self.value(&product).expect_finite();
        let dq = delta.expect_finite().clone();
        let trial = self.lift_to_stage(n, &dq, &kk.one())?;
        let tr = self.residual_at(n, &trial.mul(&product, &field))?;
        let scale = kk.div(r.poly.lead().unwrap(), tr.poly.lead().unwrap())?;
        let unit = self.lift_to_stage(n, &dq, &scale)?;
        debug_assert!(
            self.value(&f.sub(&unit.mul(&product, &field), &field)) > r.value,
            "equivalence factorization does not reconstruct"
        );
        Ok(EquivalenceFactorization {
            unit,
            phi_exponent: r.low,
            factors,
            residual_factors,
        })
    }
}

impl fmt::Display for InductiveValuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[v0")?;
        for st in &self.stages {
            write!(f, "; v({}) = {}", self.fmt_poly(&st.phi), st.mu)?;
        }
        write!(f, "]")
    }
}
