//! Construction and certification of discrete two-generator Möbius groups
//! of non-separating disjoint circle (NSDC) type.
//!
//! A marked group `⟨A, B⟩` is split into three half-turn lines
//! `A = H_{L_A} H_L`, `B = H_{L_B} H_L` ([`orthoend`]). If the six ends of
//! those lines lie on three pairwise disjoint (or tangent) circles, none
//! separating the other two, the group is discrete ([`certify`]). Every
//! other choice of lines on the same three hemispheres is discrete too;
//! [`family`] reaches each of them by rotation/translation moves `(d, τ)`,
//! and [`hexagon`] turns those moves into classical trace coordinates
//! through right-angled hexagon trigonometry.

pub mod certify;
pub mod circle;
pub mod error;
pub mod family;
pub mod geometry;
pub mod hexagon;
pub mod io;
pub mod mobius;
pub mod orthoend;
pub mod tolerance;

pub use certify::{certify, CircleRelation, FailureReport, NsdcCertificate};
pub use circle::{GeneralizedCircle, PullbackPlane};
pub use error::{Error, Result};
pub use family::{MoveParams, PlanarFamily};
pub use geometry::Geodesic;
pub use hexagon::{SkewHexagon, TraceCoords};
pub use mobius::{Classification, H3Point, MoebiusMap, SpherePoint, C64};
pub use orthoend::{MarkedGroup, OrthoEnd, ThreeGenGroup};
pub use tolerance::Tolerances;

use std::f64::consts::{PI, TAU};

/// Reduce an angle to (−π, π].
pub fn normalize_angle(x: f64) -> f64 {
    let mut y = x.rem_euclid(TAU);
    if y > PI {
        y -= TAU;
    }
    y
}
