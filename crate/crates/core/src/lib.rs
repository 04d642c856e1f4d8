//! Block-transitive 2-designs with k² points: parameter screening for
//! groups with socle PSL(n,q), and exhaustive search, verification and
//! isomorphism classification of the designs admitted by PSL(3,3) and
//! PGL(3,3) on 144 points.

pub mod bitset;
pub mod data;
pub mod design;
pub mod equivalence;
pub mod error;
pub mod group;
pub mod iso;
pub mod params;
pub mod perm;
pub mod screen;
pub mod search;
pub mod subgroups;

pub use design::Design;
pub use error::{Error, Result};
pub use group::{GeneratorFile, GroupTable, Subgroup};
pub use perm::{parse_cycles, print_cycles, Permutation};
