//! Exact verification engine for the finite-algebra side of free p-group
//! actions on products of spheres: table groups, subgroup lattices, exact
//! character theory, families of subgroups over finite posets, and the
//! constructions checked on top of them.

// SubgroupSet caches its standalone group; ordering and hashing use the bitset only
#![allow(clippy::mutable_key_type)]

pub mod biset;
pub mod bits;
pub mod catalog;
pub mod character_table;
pub mod constructions;
pub mod class_function;
pub mod conjugacy;
pub mod cyclotomic;
pub mod embedding;
pub mod families;
pub mod error;
pub mod group;
pub mod modp;
pub mod report;
pub mod subgroup;
pub mod verdict;

pub use bits::Bitset;
pub use catalog::GroupSpec;
pub use character_table::{CharacterTable, Multiplicities};
pub use class_function::ClassFunction;
pub use conjugacy::ConjugacyPartition;
pub use cyclotomic::Cyclotomic;
pub use embedding::{EmbeddingKind, GroupEmbedding};
pub use error::{Error, Result};
pub use group::Group;
pub use subgroup::SubgroupSet;
pub use verdict::{Status, Verdict};
