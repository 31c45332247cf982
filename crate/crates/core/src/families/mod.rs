//! Families of subgroups, diagrams of subfamilies over small posets, and
//! the checks for compatible families factoring through finite groups.

mod diagram;
mod family;
mod poset;
mod quadruple;
mod types;

pub use diagram::{almost_strongly_connected, is_cyclic_prime_power, strongly_connected, SubfamilyDiagram};
pub use family::{family_trivial_intersection, SubgroupFamily};
pub use poset::PosetDiagram;
pub use quadruple::{
    check_assignment_compatibility, check_compatible_family, check_diagram_of_reps, check_factorization,
    CompatibleFamily, QuadrupleBundle,
};
pub use types::{
    build_jackson_subfamilies, classify_types, type_e_max_elementary, Classification, ElementaryList, TypeInfo,
    TypeTag,
};
