//! Average-case reductions as executable transforms, with statistical checks
//! that transformed samples follow their target laws.

mod detect;
mod pad;
mod spr;
mod validate;

pub use detect::{detect_via_recovery, detection_statistic, psi_statistic, PsiResult, DETECTION_THRESHOLD, PSI_DEFAULT_BUDGET};
pub use pad::{pad_embed, pad_instance, pad_target, pad_width, unpad_estimates, PadConfig, PermutationRecord};
pub use spr::{spr_null, spr_sample, spr_transform, SprMode};
pub use validate::{summarize_draw, validate_reduction, DrawSummary, NamedTest, ValidationReport};
