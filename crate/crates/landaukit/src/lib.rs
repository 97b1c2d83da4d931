//! landaukit: singularity analysis for soft-photon-dressed triangle graphs.
//!
//! The crate mechanizes the pole-decomposition treatment of infrared-dressed
//! triangle diagrams: exact interior kinematics, nested radial coordinates
//! over magnitude-ordered sectors, symbolic singularity (Landau) matrices
//! with pole residues, an exact-rational feasibility decision (distortion
//! certificate or singularity solution), contraction-cascade checking, and
//! singularity-diagram construction, plus a deterministic report pipeline.

pub mod diagrams;
pub mod feasibility;
pub mod graphfile;
pub mod report;
pub mod fixtures;
pub mod graphs;
pub mod kinematics;
pub mod radial;
pub mod rat;
pub mod symbolic;
