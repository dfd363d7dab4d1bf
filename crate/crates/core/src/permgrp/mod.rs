//! Exact finite permutation groups: stabilizer chains, conjugacy classes,
//! subgroup classes and coset actions.

mod classes;
mod coset;
mod group;
mod perm;
mod subgroups;

pub use classes::{class_partition, conjugacy_classes, ClassPartition, ConjClass};
pub use coset::{coset_action, CosetAction};
pub use group::{ElementTable, PermGroup};
pub use perm::Perm;
pub use subgroups::{subgroup_class_key, subgroups_up_to_conjugacy};
