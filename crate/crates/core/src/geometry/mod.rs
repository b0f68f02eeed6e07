//! Geometry of the PGL2 action on the tree: automorphism classification,
//! constructive transitivity witnesses, the geometric analogues of the
//! classical decompositions, and the finite-ball local-agreement test.

mod classify;
mod decomp;
mod ghat;
mod localaut;
mod witness;

pub use classify::{
    alpha_tau, classify, edge_end_orientation, fixes_standard_apartment, AutClass,
    EdgeEndOrientation,
};
pub use decomp::{
    bruhat_geo, cartan_geo, elliptic_fixed_index, geo_member, iwahori_geo, iwasawa_geo,
    k_double_coset, levi_geo, nk_orbit_check, GeoDecomposition, GeoGroup, NkOrbitReport,
};
pub use ghat::{ghat_local_test, pgl2_match_on_ball, GhatVerdict};
pub use localaut::{BallCenter, LocalAut};
pub use witness::{end_pair_witness, sphere_witness, vertex_to_standard, weak2_witness};

use thiserror::Error;

use crate::field::FieldError;
use crate::gl2::Gl2Error;
use crate::tree::TreeError;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GeoError {
    #[error("distance mismatch between source and target configurations")]
    DistanceMismatch,
    #[error("vertex does not lie on the requested apartment")]
    VertexNotOnApartment,
    #[error("input is not in the required subgroup: {0}")]
    NotInSubgroup(&'static str),
    #[error("local automorphism domain does not cover the required ball")]
    DomainTooSmall,
    #[error("domain radius too small for the requested level")]
    RadiusTooSmall,
    #[error("enumeration capacity exceeded for this (p, e) combination")]
    Capacity,
    #[error("invalid local automorphism: {0}")]
    InvalidLocalAut(String),
    #[error("internal invariant violated: {0}")]
    Internal(&'static str),
    #[error(transparent)]
    Tree(#[from] TreeError),
    #[error(transparent)]
    Gl2(#[from] Gl2Error),
    #[error(transparent)]
    Field(#[from] FieldError),
}
