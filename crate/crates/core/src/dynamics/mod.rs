//! Symbolic dynamics of suspension flows: transition graphs and their
//! cycles, orbit tables, Nielsen and Lefschetz numbers, zeta series and
//! power-map classes of finite quotients.

mod graph;
mod omega;
mod orbits;
mod zeta;

pub use graph::{
    balanced_polytope, fried_cone, primitive_cycles, support_graph, BalancedPolytope, DynamicalCycle, Edge,
    FriedCone, PolytopeFace, TransitionGraph,
};
pub use omega::{hit_census, nielsen_bound, omega_classes, omega_lefschetz, NielsenBound, OmegaClasses};
pub use orbits::{
    lefschetz, nielsen_numbers, orbit_partition, periodic_index, root_lower_bound, stretch_estimate,
    twisted_lefschetz, LinearModel, ModelQuotient, NielsenNumbers, OrbitRecord, OrbitTable, StretchEntry,
};
pub use zeta::{exp_lefschetz, rational_fit, zeta_series, zeta_series_graph, ZetaSeries};
