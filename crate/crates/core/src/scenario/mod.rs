//! Scenario files: a TOML description of a Hamiltonian, initial data, grid,
//! times, solvers and checks, and the runner that writes field tables and
//! reports for them.

mod config;
mod initial;
mod run;

pub use config::{
    AxisSpec, CheckSpec, EntropySpec, GridSpec, HamiltonianSpec, InitialSpec, ScenarioConfig,
    SolverKind, SolverSpec,
};
pub use initial::InitialCondition;
pub use run::{fields_file_name, run_scenario, Check, RunError, RunOutcome};

/// Scenarios shipped with the crate, by name.
const BUNDLED: &[(&str, &str)] = &[
    (
        "anti-burgers-rarefaction",
        include_str!("../../scenarios/anti-burgers-rarefaction.toml"),
    ),
    (
        "burgers-shock",
        include_str!("../../scenarios/burgers-shock.toml"),
    ),
    (
        "concave-quadratic",
        include_str!("../../scenarios/concave-quadratic.toml"),
    ),
    ("saddle-2d", include_str!("../../scenarios/saddle-2d.toml")),
];

/// Text of a bundled scenario.
pub fn bundled(name: &str) -> Option<&'static str> {
    BUNDLED.iter().find(|(n, _)| *n == name).map(|(_, s)| *s)
}

/// Names of the bundled scenarios, sorted.
pub fn bundled_names() -> Vec<&'static str> {
    BUNDLED.iter().map(|(n, _)| *n).collect()
}

/// Model ids, initial-condition ids and bundled scenarios with their schemas,
/// one per line, sorted within each section.
pub fn list_builtins() -> String {
    let mut out = String::from("hamiltonians:\n");
    for (id, schema) in crate::hamiltonian::HamiltonianModel::builtin_ids() {
        out.push_str(&format!("  {id:<14} {schema}\n"));
    }
    out.push_str("initial conditions:\n");
    for (id, schema) in InitialCondition::builtin_ids() {
        out.push_str(&format!("  {id:<14} {schema}\n"));
    }
    out.push_str("scenarios:\n");
    for name in bundled_names() {
        out.push_str(&format!("  {name}\n"));
    }
    out
}
