//! Ultrafilters on pocsets and the cube complexes they span.

mod complex;
mod ultrafilter;
mod vgp;

pub use complex::{build_cubing, compare_modes, halfspace_vertex_set, Cube, CubeComplex, CubeEdge, CubingCaps, Hyperplane};
pub use ultrafilter::{
    basic_ultrafilter, closure, closure_failure, construct_dcc_ultrafilter, is_ultrafilter, AuditEntry, BasicOutcome,
    DccResult, PartialSelection, Ultrafilter,
};
pub use vgp::{reposition_vgp, Point, VgpMembership, VgpResult};
