//! Open subgroups, commensurators, double cosets and the irreducible
//! representations `Ind_{G_B}^G(σ)` of the automorphism group of a homogeneous
//! structure.
//!
//! Elements of the infinite group are never built. Cosets and double cosets are
//! handled through joint configurations of finite substructures, which
//! homogeneity makes equivalent to orbit data.

mod catalog;
mod power;
mod subgroup;
#[cfg(test)]
mod tests;

pub use catalog::{
    decompose_quasiregular, induced_equivalent, irrep_catalog, Decomposition, IrrepLabel, TableCache,
};
pub use power::{decompose_power, tensor_recursion_check, PowerDecomposition, RecursionReport, SummandKey};
pub use subgroup::{
    commensurator, double_coset_profile, enumerate_open_subgroups, finitely_many_left_cosets,
    joint_configurations, make_open_subgroup, CosetFiniteness, DoubleCosetProfile, JointConfiguration,
    OpenSubgroup, OpenSubgroupExport,
};
