//! Exact computation of invariants attached to fibered 3-manifolds and their
//! profinite comparisons.
//!
//! The crate is split by subject:
//!
//! * [`exact`]: Laurent polynomials, integer/rational matrices, Smith normal
//!   form, resultants and module orders.
//! * [`profinite`]: truncated profinite integers, matrix coefficient modules,
//!   finite group-ring quotients and the reciprocal polynomial comparison.
//! * [`fibered`]: twisted homology of surfaces, monodromy actions, twisted
//!   Alexander polynomials and Reidemeister torsion of mapping tori.
//! * [`cones`]: exact rational cones, Thurston-norm balls and their cones,
//!   projective duals and lattice kernels.
//! * [`dynamics`]: transition graphs, periodic orbit tables, Nielsen numbers,
//!   twisted Lefschetz numbers, zeta series and power-map classes of finite
//!   groups.
//!
//! All arithmetic is exact; coefficients are arbitrary-precision integers or
//! rationals.

pub mod cones;
pub mod dynamics;
pub mod error;
pub mod exact;
pub mod fibered;
pub mod group;
pub mod profinite;

pub use error::{Error, Result};
pub use exact::{BigInt, BigRational, IntMatrix, LaurentPoly, Matrix, QLaurent, RatMatrix};
