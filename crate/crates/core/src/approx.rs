//! Chains of approximants to a monic irreducible `f`, ending in a
//! pseudo-valuation with `v(f) = ∞`.

use std::collections::VecDeque;
use std::sync::Arc;

use num_traits::Signed;

use crate::error::{Error, Result};
use crate::inductive::InductiveValuation;
use crate::newton::{base_polygon, polygon, projection};
use crate::poly::Poly;
use crate::valued::ValuedField;
use crate::value::Value;

pub const DEFAULT_STAGE_BOUND: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ChainStatus {
    Open,
    /// `f` became a key and `v(f) = ∞` was appended.
    Terminal,
    /// Projection `1` below the degree of `f`: every further step is a
    /// same-degree refinement, so the branch is determined but has no finite
    /// terminal tower.
    Converged,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StageRecord {
    pub projection: usize,
    /// Multiplicity of the stage key in the factorization that produced it.
    pub multiplicity: usize,
    pub value_of_f: Value,
    /// The branching at this stage had a single candidate covering all of `f`.
    pub single_factor: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ApproximantChain {
    pub tower: InductiveValuation,
    pub records: Vec<StageRecord>,
    pub status: ChainStatus,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StageCheck {
    pub single_factor: bool,
    pub full_projection: bool,
    pub full_multiplicity: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniquenessCertificate {
    pub stages: Vec<StageCheck>,
    pub branches: usize,
    pub verdict: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ExtensionInvariants {
    pub e: u64,
    pub f: u64,
    /// `deg f / (e·f)`, known only for a unique extension.
    pub defect: Option<u64>,
}

fn check_integral_monic(field: &ValuedField, f: &Poly) -> Result<()> {
    let k = field.field();
    if f.degree().unwrap_or(0) == 0 || !f.is_monic(&k) {
        return Err(Error::InvalidInput("f must be monic of positive degree".into()));
    }
    if f.coeffs().iter().any(|c| field.value(c) < Value::zero()) {
        return Err(Error::InvalidInput("f must have integral coefficients".into()));
    }
    Ok(())
}

/// Candidate first key values `μ` with the length of their polygon segment.
pub fn first_approximants(field: &Arc<ValuedField>, var: &str, f: &Poly) -> Result<Vec<(Value, usize)>> {
    check_integral_monic(field, f)?;
    if f.degree().unwrap() > 1 && f.coeff(0).is_zero() {
        return Err(Error::ReducibleInput("x divides f".into()));
    }
    let v0 = InductiveValuation::gauss_x(field.clone(), var, Value::zero())?;
    let n = base_polygon(&v0, f);
    Ok(n
        .segments
        .iter()
        .filter(|s| !s.slope.is_negative())
        .map(|s| (Value::Finite(s.slope.clone()), s.length))
        .collect())
}

fn terminal(v: &InductiveValuation, f: &Poly, records: &[StageRecord]) -> Result<ApproximantChain> {
    let mut records = records.to_vec();
    records.push(StageRecord {
        projection: 1,
        multiplicity: 1,
        value_of_f: Value::Infinity,
        single_factor: true,
    });
    Ok(ApproximantChain {
        tower: v.augment(f, Value::Infinity)?,
        records,
        status: ChainStatus::Terminal,
    })
}

/// Extensions of an open chain by one stage.
pub fn next_approximants(chain: &ApproximantChain, f: &Poly) -> Result<Vec<ApproximantChain>> {
    let v = &chain.tower;
    let field = v.field();
    let deg_f = f.degree().unwrap();
    if v.is_key(f)? {
        return Ok(vec![terminal(v, f, &chain.records)?]);
    }
    let n = v.height();
    if projection(v, f) == 1 && v.key(n).degree().unwrap() < deg_f {
        return Ok(vec![ApproximantChain {
            status: ChainStatus::Converged,
            ..chain.clone()
        }]);
    }
    let ef = v.equivalence_factor(f)?;
    let mut factors = ef.factors.clone();
    factors.sort_by_cached_key(|(psi, _)| (psi.degree(), v.fmt_poly(psi)));
    let mut out = Vec::new();
    for (psi, m) in &factors {
        if psi != f && f.rem(psi, &field).is_zero() {
            return Err(Error::ReducibleInput(format!("{} divides f", v.fmt_poly(psi))));
        }
        let threshold = v.value(psi);
        let mut principal = polygon(v, psi, f).principal_part(&threshold);
        principal.sort_by(|a, b| a.slope.cmp(&b.slope));
        let forced = factors.len() == 1
            && ef.phi_exponent == 0
            && m * psi.degree().unwrap() == deg_f
            && principal.len() == 1;
        for seg in principal {
            let w = v.augment(psi, Value::Finite(seg.slope.clone()))?;
            let mut records = chain.records.clone();
            records.push(StageRecord {
                projection: projection(&w, f),
                multiplicity: *m,
                value_of_f: w.value(f),
                single_factor: forced,
            });
            out.push(ApproximantChain {
                tower: w,
                records,
                status: ChainStatus::Open,
            });
        }
    }
    if out.is_empty() {
        return Err(Error::LimitRequired(format!("no continuation of {v}")));
    }
    Ok(out)
}

/// All branches of the resolution of `f`, breadth first.
pub fn resolve(field: &Arc<ValuedField>, var: &str, f: &Poly, stage_bound: usize) -> Result<Vec<ApproximantChain>> {
    check_integral_monic(field, f)?;
    let deg_f = f.degree().unwrap();
    if deg_f == 1 {
        let tower = InductiveValuation::gauss(field.clone(), var, f.clone(), Value::Infinity)?;
        return Ok(vec![ApproximantChain {
            tower,
            records: vec![StageRecord {
                projection: 1,
                multiplicity: 1,
                value_of_f: Value::Infinity,
                single_factor: true,
            }],
            status: ChainStatus::Terminal,
        }]);
    }
    let firsts = first_approximants(field, var, f)?;
    let single = firsts.len() == 1 && firsts[0].1 == deg_f;
    let mut queue = VecDeque::new();
    for (mu, len) in firsts {
        let tower = InductiveValuation::gauss_x(field.clone(), var, mu)?;
        let rec = StageRecord {
            projection: projection(&tower, f),
            multiplicity: len,
            value_of_f: tower.value(f),
            single_factor: single,
        };
        queue.push_back(ApproximantChain {
            tower,
            records: vec![rec],
            status: ChainStatus::Open,
        });
    }
    let mut done = Vec::new();
    while let Some(chain) = queue.pop_front() {
        if chain.tower.height() > stage_bound {
            return Err(Error::StageBoundExceeded(stage_bound));
        }
        for next in next_approximants(&chain, f)? {
            match next.status {
                ChainStatus::Open => queue.push_back(next),
                _ => done.push(next),
            }
        }
    }
    Ok(done)
}

/// Stage-wise checks that the resolution has a single branch of full degree.
pub fn uniqueness_certificate(chains: &[ApproximantChain], f: &Poly) -> UniquenessCertificate {
    let deg_f = f.degree().unwrap();
    let stages = match chains {
        [c] => c
            .records
            .iter()
            .enumerate()
            .map(|(i, r)| {
                let deg = c.tower.key(i + 1).degree().unwrap();
                StageCheck {
                    single_factor: r.single_factor,
                    full_projection: r.projection * deg == deg_f,
                    full_multiplicity: r.multiplicity * deg == deg_f,
                }
            })
            .collect(),
        _ => Vec::new(),
    };
    let verdict = chains.len() == 1
        && chains[0].status == ChainStatus::Terminal
        && stages
            .iter()
            .all(|s| s.single_factor && s.full_projection && s.full_multiplicity);
    UniquenessCertificate {
        stages,
        branches: chains.len(),
        verdict,
    }
}

/// Ramification index and residue degree of one branch.
pub fn branch_invariants(chain: &ApproximantChain) -> (u64, u64) {
    let t = &chain.tower;
    let e = t.denominator(t.height()) / t.denominator(0);
    let f = t
        .stages()
        .iter()
        .filter_map(|s| s.key_residual.as_ref())
        .map(|p| p.degree().unwrap() as u64)
        .product();
    (e, f)
}

/// `(e, f, δ)` of the unique extension defined by `f`.
pub fn extension_invariants(chains: &[ApproximantChain], f: &Poly) -> Result<ExtensionInvariants> {
    if !uniqueness_certificate(chains, f).verdict {
        return Err(Error::NonUniqueExtension);
    }
    let (e, res) = branch_invariants(&chains[0]);
    let n = f.degree().unwrap() as u64;
    Ok(ExtensionInvariants {
        e,
        f: res,
        defect: Some(n / (e * res)),
    })
}
