//! Θ-stratifications of linear torus actions: optimal destabilizers, derived
//! stratum presentations and the ordering/closure axioms.

pub mod destabilizer;
pub mod stratify;
pub mod stratum;

pub use destabilizer::{optimal_destabilizer, support_indices, Destabilization};
pub use stratify::{classify_supports, git_stratify, semistable_supports, validate_stratification, Violation, SUPPORT_LIMIT};
pub use stratum::{classify, stratum_from_cocharacter, Mu, StratumFlags, ThetaStratum};
