//! Boundary problems for a small cubical language: contortions, Kan
//! fillers, a checker, and a printer to Cubical Agda.

pub mod agda;
pub mod contort;
pub mod cube;
pub mod dim;
pub mod group;
pub mod kan;
pub mod poset;
pub mod syntax;

pub use cube::{
    cell_boundary, check, constrain_context, wf_boundary, wf_cell, Atom, Boundary, Cell, CellCtx, CellDecl,
    CubeError, Face, Fill,
};
pub use dim::{
    classify, dim_equal, enumerate_nf, eval_dim, normalize_dim, subst_dim, Contortion, DimCtx, DimError,
    DimTerm, Endpoint, Lit, Name, Nf, Subst, Theory,
};
pub use poset::{formula_to_pm, pm_to_formula, Mode, PosetMap, Ppm};
pub use syntax::{parse_cell, parse_cube, parse_dim_term, print_cube, CubeFile, CubeFileError, Goal, ParseError};
pub use agda::{check_agda_syntax, print_agda, print_agda_unchecked, AgdaError};
pub use contort::{brute_force_contort, contort, contort_with, ContortError, ContortOptions, Deadline, Stats};
pub use kan::{default_theory, kan_fill, kan_solver, solve, Side, Solution, SolveError, SolverConfig};
