//! Exact low-degree chi-square evaluation and the Hermite machinery behind it.

pub mod chi2;
pub mod exact;
pub mod hermite;
pub mod oracle;
pub mod overlap;

pub use chi2::{chi2, chi2_sbmslrd, chi2_slrd, chi2_sym_unbalanced, Arithmetic, ChiRegime, ChiSqConfig, ChiSqResult, ExactChi};
pub use hermite::{hermite_eval, hermite_orthonormality_check, hermite_orthonormality_grid, OrthonormalityReport};
pub use oracle::chi2_bruteforce_oracle;
pub use overlap::{compositions, compositions_exact, inner_moment, inner_moment_exact, overlap_pmf, overlap_pmf_exact, UnitValues};
