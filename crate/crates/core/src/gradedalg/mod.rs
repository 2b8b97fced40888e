//! Weighted Koszul CDGAs, semifree complexes over them, and a truncated
//! weight-space homology oracle.

pub mod cdga;
pub mod complex;
pub mod homology;
pub mod linalg;
pub mod parse;
pub mod poly;

pub use cdga::{CdgaElement, EvenGen, KoszulCdga, Mono, OddGen, VarMap};
pub use complex::{ComplexGen, FreeComplex};
pub use homology::{weight0_truncated_homology, weight_truncated_homology, HomologyResult};
pub use parse::{parse_element, parse_poly};
pub use poly::MultiPoly;
