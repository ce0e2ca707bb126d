//! Lattice analysis: minimal vectors, point groups, orthogonal symmetry.

mod point_group;
mod shortest;
mod symmetric;

pub use point_group::{lattice_isometry, point_group, reduce_basis, PointGroup};
pub use shortest::{enumerate_within, shortest_vectors, ShortestVectorSet};
pub use symmetric::{
    angle_bound_check, classify_2d, classify_3d, dual_lattice, frame_operator, invariant_form,
    is_orthogonally_symmetric, match_vector_sets, orthogonal_symmetry, root_lattice, tight_frame_check, Class2d,
    Class3d, FailedCondition, OsVerdict, RootKind, Witness,
};
