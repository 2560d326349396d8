//! Exact rational cones, norm balls and the cone bookkeeping built on them.

mod ball;
pub(crate) mod cone;
mod correspondence;
mod kernel;

pub use ball::{
    cover_pullback_norm, face_lattice, in_open_cone, locate, norm_cones, projective_dual, projective_dual_of_cone,
    thurston_norm, thurston_norm_int, ConeFace, NormBall, NormCone, ProjectiveDualPolytope,
};
pub use cone::{projective_normal, RationalCone};
pub use correspondence::{cone_correspondence, match_cones, ConePair, Correspondence, CorrespondenceFailure};
pub use kernel::{lattice_kernel, lattice_kernel_int, LatticeKernel};
