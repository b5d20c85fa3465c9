//! Partitions, permutations, conjugacy classes and characters of `S_N`.

pub mod character;
pub mod partition;
pub mod permutation;

pub use character::{character, CharTable, CharTables};
pub use partition::{contents, hook_product, partitions_of, z_mu, Partition};
pub use permutation::{class_elements, cycle_type, is_transitive, Permutation};
