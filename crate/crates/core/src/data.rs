//! Generator files shipped with the crate.

use crate::group::GeneratorFile;

/// PSL(3,3) acting on 144 points.
pub const PSL33_GENS: &str = include_str!("../data/psl33.gens");
/// PGL(3,3) acting on 144 points.
pub const PGL33_GENS: &str = include_str!("../data/pgl33.gens");

pub fn psl33() -> GeneratorFile {
    GeneratorFile::parse(PSL33_GENS).expect("shipped generator file parses")
}

pub fn pgl33() -> GeneratorFile {
    GeneratorFile::parse(PGL33_GENS).expect("shipped generator file parses")
}
