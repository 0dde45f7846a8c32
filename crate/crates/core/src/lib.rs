//! Frame pairs, coherence, and support-measure uncertainty bounds.
//!
//! The crate builds reconstructing frame systems on finite-dimensional lp
//! spaces and truncated weighted sequence spaces (including unbounded
//! diagonal systems whose functionals grow polynomially), computes cross
//! coherences, and verifies that weighted support measures of a vector's two
//! analysis transforms obey the product, transfer, mixed-norm, one-sided, and
//! Hilbert-chain lower bounds. An exhaustive pattern-enumeration oracle
//! certifies tightness on small dimensions.

pub mod error;
pub mod extremal;
pub mod frames;
pub mod generators;
mod linalg;
pub mod spaces;
pub mod uncertainty;

pub use error::{Error, Result};
pub use extremal::{
    dirac_comb, min_support_product, pattern_feasible, ExtremalResult, FeasibilityCertificate,
    MAX_ENUMERATION, MAX_FEASIBILITY_DIM,
};
pub use frames::{
    analyze, in_domain, is_reconstructing, synthesize, CoefficientFunction, FrameSystem,
    ReconstructionReport, Repr, TailDescriptor, DEFAULT_SUPPORT_TOL,
};
pub use generators::{
    dft_pair, identity, make, random_parseval, random_reconstructing,
    random_reconstructing_pair, random_vectors, unbounded_diagonal, validate_parseval, Family,
    GeneratorSpec, ParsevalReport,
};
pub use spaces::{lp_norm, measure_of, Exponent, Field, IndexSet, MeasureSpace, Scalar, Vector};
pub use uncertainty::{
    check_hilbert_chain, check_mixed_norm_bound, check_one_sided_bounds, check_product_bound,
    check_transfer_inequalities, coherence, cross_gram, support_of, BoundId, BoundReport,
    CrossGram, Direction, HilbertChain, SupportReport, CHECK_TOL, EQUALITY_TOL,
};
