//! Minimal graded projective resolutions, Ext, dimension verdicts, and the
//! verifiers comparing injective dimensions across a change of grading.

mod dimension;
mod ext;
mod free;
mod resolution;

pub use dimension::{
    graded_injective_dimension, graded_injectives, is_graded_injective, projective_dimension, AcyclicityReport,
    CheckOutcome, DimensionVerdict, InequalityReport,
};
pub use ext::{ext_dims, ext_from_resolution, graded_ext, ExtResult};
pub use free::FreeModule;
pub use resolution::{minimal_resolution, top_and_radical, MinimalResolution, ResolutionStatus, TopAndRadical};
