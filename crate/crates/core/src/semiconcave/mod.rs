//! Semi-concave functions as finite minima of C² generators: the radial cap
//! construction, superdifferentials and their convex hulls.

mod family;
mod generator;
pub mod hull;
mod phi;
mod sampled;
mod superdiff;

pub use family::{
    build_family_f0, SemiConcaveFn, SuperdifferentiableFn, ACTIVATION_TOL, CLUSTER_TOL,
};
pub use generator::{sym_max_eigen, sym_norm, AnalyticForm, Generator, GeneratorKind, Sym};
pub use hull::Hull;
pub use phi::{build_phi, hessian_norm_radial, PhiProfile};
pub use sampled::{SampledFn1d, ESTIMATE_MAX, ESTIMATE_MIN};
pub use superdiff::{SuperDifferential, SuperVertex};
