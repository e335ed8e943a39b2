//! Oriented geodesics in upper half-space, half-turns, rotations and
//! translations about them, common perpendiculars and complex distances.
//!
//! Complex distances are measured *along* an oriented line `s` between two
//! lines `p` and `n` that both meet `s` orthogonally: after moving `s` to
//! `[0, ∞]`, `p` and `n` become `[-w_p, w_p]` and `[-w_n, w_n]` and the
//! distance is `log(w_n / w_p)` with imaginary part in (−π, π]. Reversing
//! `s` negates the value; reversing `p` or `n` shifts it by `iπ`.

use crate::error::{Error, Result};
use crate::mobius::{c, Classification, H3Point, MoebiusMap, SpherePoint, C64};
use crate::tolerance::EPS_EQ;

/// Relative tolerance used when checking that two lines meet at right angles.
pub const PERP_TOL: f64 = 1e-7;

#[derive(Debug, Clone, Copy)]
pub struct Geodesic {
    start: SpherePoint,
    stop: SpherePoint,
    improper: bool,
}

impl Geodesic {
    pub fn new(start: SpherePoint, stop: SpherePoint) -> Self {
        let improper = start.approx_eq(&stop, EPS_EQ);
        Self {
            start,
            stop,
            improper,
        }
    }

    pub fn between(start: impl Into<SpherePoint>, stop: impl Into<SpherePoint>) -> Self {
        Self::new(start.into(), stop.into())
    }

    pub fn start(&self) -> SpherePoint {
        self.start
    }

    pub fn stop(&self) -> SpherePoint {
        self.stop
    }

    pub fn ends(&self) -> (SpherePoint, SpherePoint) {
        (self.start, self.stop)
    }

    pub fn is_improper(&self) -> bool {
        self.improper
    }

    pub fn reversed(&self) -> Self {
        Self {
            start: self.stop,
            stop: self.start,
            improper: self.improper,
        }
    }

    pub fn image(&self, m: &MoebiusMap) -> Self {
        Self::new(m.apply_sphere(&self.start), m.apply_sphere(&self.stop))
    }

    /// Same oriented line.
    pub fn approx_eq(&self, other: &Geodesic, tol: f64) -> bool {
        self.start.approx_eq(&other.start, tol) && self.stop.approx_eq(&other.stop, tol)
    }

    /// Same line, ignoring orientation.
    pub fn same_line(&self, other: &Geodesic, tol: f64) -> bool {
        self.approx_eq(other, tol) || self.approx_eq(&other.reversed(), tol)
    }

    /// Map sending `[0, ∞]` onto this line, `0 ↦ start`, `∞ ↦ stop`.
    pub fn frame(&self) -> Result<MoebiusMap> {
        if self.improper {
            return Err(Error::ImproperLine);
        }
        MoebiusMap::frame(&self.start, &self.stop)
    }

    pub fn contains(&self, x: &H3Point, tol: f64) -> bool {
        match self.frame() {
            Ok(f) => {
                let y = f.inverse().apply_h3(x);
                y.z.norm() <= tol * y.h
            }
            Err(_) => false,
        }
    }
}

pub fn half_turn(line: &Geodesic) -> Result<MoebiusMap> {
    rotation_about(line, std::f64::consts::PI)
}

/// Rotation by `tau` about `axis`, counter-clockwise when viewed from the
/// stop end. Equals `half_turn(axis)` at `tau = π`.
pub fn rotation_about(axis: &Geodesic, tau: f64) -> Result<MoebiusMap> {
    let f = axis.frame()?;
    Ok(MoebiusMap::diag(C64::from_polar(1.0, tau / 2.0)).conjugate_by(&f))
}

/// Pure translation by `d` along `axis`, towards its stop end.
pub fn translation_along(axis: &Geodesic, d: f64) -> Result<MoebiusMap> {
    let f = axis.frame()?;
    Ok(MoebiusMap::diag(c((d / 2.0).exp(), 0.0)).conjugate_by(&f))
}

/// The common perpendicular, oriented from `l1` towards `l2`.
///
/// When the lines meet, the perpendicular passes through the meeting point
/// and is oriented so that the angle from `l1` to `l2` about it lies in
/// (0, π). Asymptotic lines yield the improper line at the shared end.
pub fn common_perpendicular(l1: &Geodesic, l2: &Geodesic) -> Result<Geodesic> {
    match (l1.is_improper(), l2.is_improper()) {
        (true, true) => {
            if l1.start.approx_eq(&l2.start, EPS_EQ) {
                Err(Error::PerpendicularNotUnique)
            } else {
                Ok(Geodesic::new(l1.start, l2.start))
            }
        }
        (true, false) => {
            let u = l1.start;
            if u.approx_eq(&l2.start, EPS_EQ) || u.approx_eq(&l2.stop, EPS_EQ) {
                return Err(Error::PerpendicularNotUnique);
            }
            Ok(Geodesic::new(u, half_turn(l2)?.apply_sphere(&u)))
        }
        (false, true) => {
            let u = l2.start;
            if u.approx_eq(&l1.start, EPS_EQ) || u.approx_eq(&l1.stop, EPS_EQ) {
                return Err(Error::PerpendicularNotUnique);
            }
            Ok(Geodesic::new(half_turn(l1)?.apply_sphere(&u), u))
        }
        (false, false) => {
            if l1.same_line(l2, EPS_EQ) {
                return Err(Error::PerpendicularNotUnique);
            }
            let m = half_turn(l2)? * half_turn(l1)?;
            match m.classify() {
                Classification::Identity => Err(Error::PerpendicularNotUnique),
                Classification::Parabolic => {
                    let shared = [l1.start, l1.stop]
                        .into_iter()
                        .find(|p| p.approx_eq(&l2.start, 1e-7) || p.approx_eq(&l2.stop, 1e-7))
                        .unwrap_or(m.axis()?.line.start());
                    Ok(Geodesic::new(shared, shared))
                }
                Classification::Loxodromic => Ok(m.axis()?.line),
                Classification::Elliptic => {
                    let n = m.axis()?.line;
                    let delta = along_distance(&n, l1, l2)?;
                    Ok(if delta.im < 0.0 { n.reversed() } else { n })
                }
            }
        }
    }
}

/// Stop end of `line` after moving `side` to `[0, ∞]`, provided `line`
/// meets `side` orthogonally.
fn normal_coordinate(inv_frame: &MoebiusMap, line: &Geodesic) -> Result<C64> {
    let p = inv_frame.apply_sphere(&line.start).to_complex();
    let q = inv_frame.apply_sphere(&line.stop).to_complex();
    match (p, q) {
        (Some(p), Some(q)) if q.norm() > 0.0 && p.norm() > 0.0 => {
            if (p + q).norm() > PERP_TOL * q.norm().max(p.norm()) {
                return Err(Error::NotPerpendicular);
            }
            Ok((q - p) / 2.0)
        }
        _ => Err(Error::NotPerpendicular),
    }
}

/// Complex distance along the oriented line `side` from `prev` to `next`;
/// both must meet `side` orthogonally.
pub fn along_distance(side: &Geodesic, prev: &Geodesic, next: &Geodesic) -> Result<C64> {
    let inv = side.frame()?.inverse();
    let wp = normal_coordinate(&inv, prev)?;
    let wn = normal_coordinate(&inv, next)?;
    Ok((wn / wp).ln())
}

/// Complex distance from `l1` to `l2` measured along their common
/// perpendicular (oriented from `l1` to `l2`), so the real part is ≥ 0.
pub fn complex_distance(l1: &Geodesic, l2: &Geodesic) -> Result<C64> {
    if l1.is_improper() || l2.is_improper() {
        return Err(Error::ImproperLine);
    }
    let n = common_perpendicular(l1, l2)?;
    if n.is_improper() {
        return Err(Error::PerpendicularNotUnique);
    }
    along_distance(&n, l1, l2)
}

/// `cosh` of the complex distance between two oriented lines, from the
/// trace of the product of their half-turns.
pub fn cosh_distance(l1: &Geodesic, l2: &Geodesic) -> Result<C64> {
    Ok(-(half_turn(l1)? * half_turn(l2)?).trace() / 2.0)
}

/// The point of `l1` nearest to `l2`: the foot of their common perpendicular
/// (or the meeting point when they intersect).
pub fn foot_on(l1: &Geodesic, l2: &Geodesic) -> Result<H3Point> {
    let f = l1.frame()?;
    let inv = f.inverse();
    let p = inv.apply_sphere(&l2.start).to_complex();
    let q = inv.apply_sphere(&l2.stop).to_complex();
    match (p, q) {
        (Some(p), Some(q)) if p.norm() > 0.0 && q.norm() > 0.0 => {
            let h = (p.norm() * q.norm()).sqrt();
            Ok(f.apply_h3(&H3Point::new(c(0.0, 0.0), h)))
        }
        _ => Err(Error::PerpendicularNotUnique),
    }
}

/// Interior intersection point of two proper lines, if they meet.
pub fn intersect(l1: &Geodesic, l2: &Geodesic) -> Option<H3Point> {
    let f = l1.frame().ok()?;
    if l2.is_improper() {
        return None;
    }
    let inv = f.inverse();
    let p = inv.apply_sphere(&l2.start).to_complex()?;
    let q = inv.apply_sphere(&l2.stop).to_complex()?;
    if p.norm() < 1e-14 || q.norm() < 1e-14 {
        return None;
    }
    let ratio = p / q;
    if ratio.re < 0.0 && ratio.im.abs() <= EPS_EQ * ratio.norm() {
        let h = (p.norm() * q.norm()).sqrt();
        Some(f.apply_h3(&H3Point::new(c(0.0, 0.0), h)))
    } else {
        None
    }
}

/// The geodesic through two distinct points, oriented from `x` to `y`.
pub fn geodesic_through(x: &H3Point, y: &H3Point) -> Result<Geodesic> {
    let dz = y.z - x.z;
    let scale = x.h.max(y.h);
    if dz.norm() <= 1e-14 * scale {
        if (x.h - y.h).abs() <= 1e-14 * scale {
            return Err(Error::Consistency(
                "geodesic through coincident points".into(),
            ));
        }
        let foot = SpherePoint::finite(x.z);
        return Ok(if y.h > x.h {
            Geodesic::new(foot, SpherePoint::infinity())
        } else {
            Geodesic::new(SpherePoint::infinity(), foot)
        });
    }
    let s = dz.norm();
    let u = dz / s;
    let m = (s * s + y.h * y.h - x.h * x.h) / (2.0 * s);
    let rho = (m * m + x.h * x.h).sqrt();
    Ok(Geodesic::between(x.z + u * (m - rho), x.z + u * (m + rho)))
}
