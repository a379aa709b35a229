//! Symbols `φ`, `ψ` and the scalar spectral measure `μ_f`.

mod admissibility;
mod format;
mod integral;
mod measure;
mod symbol;

pub use crate::numerics::IndexSet;
pub use admissibility::{
    check_admissibility, check_admissibility_with, AdmissibilityReport, L2Condition,
};
pub use integral::{kernel_tail, norm_phi_f, spectral_integral, SpectralIntegral, TailRate};
pub use measure::{Atom, Density, LatticeWeights, SpectralMeasure};
pub use symbol::{rational_kernel, Asymptotic, Symbol};
