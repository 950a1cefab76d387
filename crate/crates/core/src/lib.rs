pub mod approx;
pub mod cli;
pub mod config;
pub mod descent;
pub mod error;
pub mod factor;
pub mod graded;
pub mod field;
pub mod inductive;
pub mod newton;
pub mod oracle;
pub mod parse;
pub mod poly;
pub mod presets;
pub mod ring;
pub mod semigroup;
pub mod valued;
pub mod value;

pub use error::{Error, Result};
pub use field::{Elem, Field};
pub use inductive::InductiveValuation;
pub use poly::Poly;
pub use valued::ValuedField;
pub use value::{Rational, Value};

// The guide's snippets run as doctests.
#[cfg(doctest)]
#[doc = include_str!("../../../book/src/introduction.md")]
pub struct GuideIntroduction;
#[cfg(doctest)]
#[doc = include_str!("../../../book/src/valued-fields.md")]
pub struct GuideValuedFields;
#[cfg(doctest)]
#[doc = include_str!("../../../book/src/towers.md")]
pub struct GuideTowers;
#[cfg(doctest)]
#[doc = include_str!("../../../book/src/polygons.md")]
pub struct GuidePolygons;
#[cfg(doctest)]
#[doc = include_str!("../../../book/src/approximants.md")]
pub struct GuideApproximants;
#[cfg(doctest)]
#[doc = include_str!("../../../book/src/descent.md")]
pub struct GuideDescent;
#[cfg(doctest)]
#[doc = include_str!("../../../book/src/graded.md")]
pub struct GuideGraded;
#[cfg(doctest)]
#[doc = include_str!("../../../book/src/cli.md")]
pub struct GuideCli;
