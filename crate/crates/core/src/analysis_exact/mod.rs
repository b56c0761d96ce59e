//! Exact analytical track: Ψ kernel ring sums, Laplace transforms of the
//! aggregate interference with their derivatives, and coverage probabilities.

mod atoms;
mod coverage;
mod functional;
mod kernel;
pub mod psi;
mod serving;
mod table;

pub use atoms::{point_atom, power_atoms, PowerAtom};
pub use coverage::{conditional_coverage, coverage_gue_exact, coverage_u2u_exact};
pub(crate) use coverage::serving_integral;
pub use functional::{
    gue_atoms, gue_order, interference_functional_gg, interference_functional_ug, interference_functional_uu_gu,
    laplacian_derivatives, laplacian_gue, laplacian_u2u, leibniz_scaled, mean_uav_atom, u2u_order, uav_atoms,
    Evaluation, Family, FamilySpec, LaplacianEvaluation, LaplacianModel,
};
pub use kernel::RingKernel;
pub use psi::{psi_kernel, psi_reference, PsiKernel};
pub use serving::{array_null_radii, interfering_gue_density, ServingLink};
pub use table::LogChebTable;
