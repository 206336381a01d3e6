//! Exact moment-polygon and almost-toric base-diagram toolkit for a
//! non-recurrent symplectomorphism of the one-point blow-up of `S^2 x S^2`.
//!
//! Everything is computed in exact arithmetic over `Q` or a real quadratic
//! field `Q(sqrt d)`; see [`exact_arith::QField`].

pub mod affine_plane;
pub mod applicability;
pub mod atf_base;
pub mod catalog;
pub mod delzant;
pub mod error;
pub mod exact_arith;
pub mod exec;
pub mod io;
pub mod mcg_homology;
pub mod orbit;
pub mod recurrence_map;
pub mod render;
pub mod suite;

pub use affine_plane::{HalfPlane, LatticeVector, PiecewiseMap, Point, UnimodularAffineMap};
pub use delzant::{build_blowup_polygon, ConstructionParams, DelzantPolygon, RationalPolygon};
pub use error::{Error, Result};
pub use exact_arith::QField;
