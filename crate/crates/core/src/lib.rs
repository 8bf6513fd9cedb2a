//! Exact computations for GIT quotients of affine space by a split torus.

pub mod gitcore;
pub mod gradedmod;
pub mod linalg;
pub mod polyhedra;
pub mod rational;
pub mod vgit;
pub mod windows;

pub use polyhedra::{
    cone_contains, cone_interior_contains, cone_relint_contains, minimize_norm,
    primitive_direction, Cone, InnerProduct, Membership, PolyhedraError, QpOptimum, QpProblem,
    RationalVector,
};
pub use rational::{IntVector, Rational};
pub use gitcore::{
    classify_support, kn_stratification, optimal_destabilizer, stratum_invariants, GitError,
    NumericalInvariant, Stratification, Stratum, Support, SupportClass, TorusActionProblem,
};
pub use vgit::{
    classify_linearization, git_fan, wall_crossing_report, Chamber, GitFan, LinearizationClass,
    StratumPair, Verdict, VgitError, Wall, WallCrossingReport,
};
pub use windows::{
    enumerate_window_characters, match_windows_across_wall, window_contains_character,
    WindowCharacterSet, WindowError, WindowMatch, WindowRelation, WindowRule, WindowSpec,
};
