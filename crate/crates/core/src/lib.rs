pub mod codes;
pub mod error;
pub mod gf;
pub mod harness;
pub mod json;
pub mod quadform;
pub mod spectrum;
pub mod symmat;

pub use codes::{CodeId, CodeParams, Variant};
pub use error::{Error, Result};
pub use gf::{Fe, FieldSpec, SquareClass};
pub use quadform::{FormKind, QuadFormClass};
pub use symmat::{Matrix, RankCensus, SymMatrix};
