//! Filling permutations and minimally intersecting filling pairs on closed
//! orientable surfaces.

pub mod crossing;
pub mod enumeration;
pub mod filling;
pub mod gluing;
pub mod hyperbolic;
pub mod perm;
pub mod zpiece;

pub use filling::{
    canonical_class_rep, twisting_group, CanonicalPerms, Curve, Direction, FillingError, FillingFailure,
    FillingPermutation, GenusContext, OrbitClass, SurfaceReport, SymbolInfo, TwistingClosure,
};
pub use perm::{PermError, Permutation};
