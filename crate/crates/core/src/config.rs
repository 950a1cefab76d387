//! JSON scenario files: a valued field, an optional local ring and `f`.
//!
//! ```json
//! {
//!   "field": { "kind": "order", "coeffs": "Q", "var": "s" },
//!   "extensions": [
//!     { "var": "t", "keys": [ { "key": "t", "value": "3/2" },
//!                             { "key": "t^2 - s^3", "value": "7/2" } ] }
//!   ],
//!   "ring": { "kind": "localized", "coeffs": "Q", "vars": ["s", "t"] },
//!   "f": "x^2 + s"
//! }
//! ```

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::inductive::InductiveValuation;
use crate::parse::parse_poly;
use crate::poly::Poly;
use crate::ring::{BaseRing, LocalRing};
use crate::valued::ValuedField;
use crate::value::Value;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum FieldSpec {
    PAdic { p: u64 },
    /// `coeffs(var)` with the `var`-adic valuation; `coeffs` is `Q` or `F<p>`.
    Order { coeffs: String, var: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KeySpec {
    pub key: String,
    pub value: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExtensionSpec {
    pub var: String,
    pub keys: Vec<KeySpec>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum RingSpec {
    IntegersAt { p: u64 },
    /// `coeffs` is `Q`, `Z` (then `p` is required) or `F<p>`.
    Localized {
        coeffs: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        p: Option<u64>,
        vars: Vec<String>,
    },
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Options {
    pub stage_bound: Option<usize>,
    pub samples: Option<usize>,
    pub seed: Option<u64>,
    pub bound: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub field: FieldSpec,
    #[serde(default)]
    pub extensions: Vec<ExtensionSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ring: Option<RingSpec>,
    pub f: String,
    #[serde(default = "default_var")]
    pub var: String,
    #[serde(default)]
    pub options: Options,
}

fn default_var() -> String {
    "x".to_string()
}

/// A parsed and validated scenario.
#[derive(Clone, Debug)]
pub struct Scenario {
    pub field: Arc<ValuedField>,
    pub ring: Option<LocalRing>,
    pub f: Poly,
    pub var: String,
    pub options: Options,
}

fn coefficient_field(name: &str) -> Result<Field> {
    match name {
        "Q" => Ok(Field::Rationals),
        _ => match name.strip_prefix('F').and_then(|p| p.parse().ok()) {
            Some(p) => Field::prime(p),
            None => Err(Error::InvalidInput(format!("unknown coefficient field '{name}'"))),
        },
    }
}

fn parse_value(s: &str) -> Result<Value> {
    s.parse().map_err(|_| Error::InvalidInput(format!("bad value '{s}'")))
}

impl ScenarioConfig {
    pub fn from_json(src: &str) -> Result<ScenarioConfig> {
        serde_json::from_str(src).map_err(|e| Error::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })
    }

    pub fn build(&self) -> Result<Scenario> {
        let mut field = match &self.field {
            FieldSpec::PAdic { p } => ValuedField::p_adic(*p)?,
            FieldSpec::Order { coeffs, var } => ValuedField::order_base(coefficient_field(coeffs)?, var)?,
        };
        for ext in &self.extensions {
            let base = Arc::new(field);
            let k = base.field();
            let mut keys = ext.keys.iter();
            let first = keys
                .next()
                .ok_or_else(|| Error::InvalidInput(format!("extension by {} has no keys", ext.var)))?;
            let mut tower = InductiveValuation::gauss(
                base.clone(),
                &ext.var,
                parse_poly(&first.key, &k, &ext.var)?,
                parse_value(&first.value)?,
            )?;
            for key in keys {
                tower = tower.augment(&parse_poly(&key.key, &k, &ext.var)?, parse_value(&key.value)?)?;
            }
            field = ValuedField::extend_by_tower(tower)?;
        }
        let ring = match &self.ring {
            None => None,
            Some(RingSpec::IntegersAt { p }) => Some(LocalRing::IntegersAt(*p)),
            Some(RingSpec::Localized { coeffs, p, vars }) => {
                let coeffs = match (coeffs.as_str(), p) {
                    ("Z", Some(p)) => BaseRing::Integers(*p),
                    ("Z", None) => return Err(Error::InvalidInput("ring over Z needs a prime p".into())),
                    (name, _) => match coefficient_field(name)? {
                        Field::Prime(p) => BaseRing::Prime(p),
                        _ => BaseRing::Rationals,
                    },
                };
                Some(LocalRing::PolyLocalized {
                    coeffs,
                    vars: vars.clone(),
                })
            }
        };
        if let Some(r) = &ring {
            r.check_dominated(&field)?;
        }
        let f = parse_poly(&self.f, &field.field(), &self.var)?;
        if f.degree().unwrap_or(0) == 0 || !f.is_monic(&field.field()) {
            return Err(Error::InvalidInput(format!("f = {} is not monic of positive degree", self.f)));
        }
        Ok(Scenario {
            field: Arc::new(field),
            ring,
            f,
            var: self.var.clone(),
            options: self.options.clone(),
        })
    }
}

impl Scenario {
    pub fn fmt_poly(&self, p: &Poly) -> String {
        self.field.field().fmt_poly(p, &self.var)
    }

    pub fn parse_poly(&self, src: &str) -> Result<Poly> {
        parse_poly(src, &self.field.field(), &self.var)
    }
}
