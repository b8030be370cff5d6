//! Weak-solution pipelines: the minimum of an evolved generating family, the
//! variational operator, its iteration toward the viscosity operator, the
//! Hopf and Lax–Oleinik formulas, a monotone finite-difference oracle, and the
//! ordering comparison between them.

mod compare;
mod fd;
mod field;
mod hopf;
mod inf_family;
mod iterated;
mod lax_oleinik;
mod variational;

pub use compare::{compare_solutions, OrderingReport, PairReport};
pub use fd::fd_viscosity_oracle;
pub use field::{ActiveMember, FamilyBacking, Provenance, SolutionField};
pub use hopf::{
    hopf_solution, legendre_concave_dual, legendre_concave_dual_at, DualFunction, HopfFamily,
};
pub use inf_family::{inf_family_solution, EvolveParams, EvolvedFamily};
pub use iterated::iterated_variational;
pub use lax_oleinik::lax_oleinik;
pub use variational::{
    semigroup_inequality_check, variational_solution, SemigroupReport, VariationalParams,
};
