//! Certified zero-free sectors and lens-shaped regions for integer
//! polynomials, and irreducibility certificates built on them.

pub mod arith;
pub mod bounded;
pub mod certify;
pub mod error;
pub mod parse;
pub mod lens;
pub mod oracle;
pub mod poly;
pub mod sector;

pub use bounded::{BoundedReal, Precision};
pub use certify::{certificate_verify, search_m, Certificate, Certifier, Criterion, Family, SearchOptions};
pub use error::{Error, ParseError, Result};
pub use lens::{lens_of, Lens, LensOutcome};
pub use poly::Polynomial;
pub use sector::{best_sector, Sector, SectorMethod};
