//! Benchmark problems shared by the criterion suite.

use cubesolve::{parse_cube, CubeFile, Goal, SolverConfig};

pub const SQUARE_TO_CUBE: &str = include_str!("../../../problems/square_to_cube.cube");
pub const ECKMANN_HILTON: &str = include_str!("../../../problems/eckmann_hilton.cube");
pub const SQ_TO_COMP: &str = include_str!("../../../problems/sq_to_comp.cube");
pub const ASSOCIATIVITY: &str = include_str!("../../../problems/associativity.cube");
pub const INVERSION: &str = include_str!("../../../problems/inversion.cube");

pub fn load(src: &str) -> CubeFile {
    parse_cube(src).expect("bundled problem parses")
}

/// The solver settings written in the goal, with no time limit.
pub fn config(g: &Goal) -> SolverConfig {
    let mut cfg = SolverConfig {
        theory: g.options.theory,
        timeout: None,
        ..SolverConfig::default()
    };
    if let Some(d) = g.options.depth {
        cfg.max_depth = d;
    }
    cfg
}
