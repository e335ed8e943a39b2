//! Generalized circles on the sphere and the hyperbolic planes they bound,
//! parameterized by two marked boundary points and a pull-back angle.

use std::f64::consts::FRAC_PI_2;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{common_perpendicular, Geodesic};
use crate::mobius::{c, H3Point, MoebiusMap, SpherePoint, C64};

/// The locus `A|z|² + B z̄ + B̄ z + C = 0`, with `A`, `C` real.
///
/// The sign is meaningful: the region where the form is negative is the
/// disk the circle bounds, so images under Möbius maps keep track of it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeneralizedCircle {
    pub a: f64,
    pub b: [f64; 2],
    pub c: f64,
}

impl GeneralizedCircle {
    pub fn from_center_radius(center: C64, radius: f64) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) || !center.is_finite() {
            return Err(Error::DegenerateCircle);
        }
        Ok(Self {
            a: 1.0,
            b: [-center.re, -center.im],
            c: center.norm_sqr() - radius * radius,
        })
    }

    fn b(&self) -> C64 {
        c(self.b[0], self.b[1])
    }

    pub fn discriminant(&self) -> f64 {
        self.b().norm_sqr() - self.a * self.c
    }

    pub fn is_line(&self) -> bool {
        self.a.abs() <= 1e-12 * self.b().norm().max(self.c.abs())
    }

    /// Center and radius; fails for lines and degenerate forms.
    pub fn center_radius(&self) -> Result<(C64, f64)> {
        if self.discriminant() <= 0.0 || self.is_line() {
            return Err(Error::DegenerateCircle);
        }
        let center = -self.b() / self.a;
        let radius = self.discriminant().sqrt() / self.a.abs();
        Ok((center, radius))
    }

    /// Value of the Hermitian form at `z`.
    pub fn eval(&self, z: C64) -> f64 {
        self.a * z.norm_sqr() + 2.0 * (self.b() * z.conj()).re + self.c
    }

    /// Euclidean distance from `z` to the circle.
    pub fn distance_to(&self, z: C64) -> Result<f64> {
        let (center, radius) = self.center_radius()?;
        Ok(((z - center).norm() - radius).abs())
    }

    pub fn passes_through(&self, p: &SpherePoint, tol: f64) -> bool {
        match p.to_complex() {
            Some(z) => self.distance_to(z).map(|d| d <= tol).unwrap_or(false),
            None => self.is_line(),
        }
    }

    /// Image under a Möbius map, by congruence of the Hermitian matrix.
    pub fn image(&self, m: &MoebiusMap) -> Self {
        // Q' = (M⁻¹)* Q M⁻¹
        let n = m.inverse();
        let q = [
            [c(self.a, 0.0), self.b()],
            [self.b().conj(), c(self.c, 0.0)],
        ];
        let nm = [[n.a, n.b], [n.c, n.d]];
        let mut out = [[c(0.0, 0.0); 2]; 2];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                let mut acc = c(0.0, 0.0);
                for k in 0..2 {
                    for l in 0..2 {
                        acc += nm[k][i].conj() * q[k][l] * nm[l][j];
                    }
                }
                *cell = acc;
            }
        }
        let scale = out[0][0]
            .re
            .abs()
            .max(out[0][1].norm())
            .max(out[1][1].re.abs());
        Self {
            a: out[0][0].re / scale,
            b: [out[0][1].re / scale, out[0][1].im / scale],
            c: out[1][1].re / scale,
        }
    }
}

/// A hyperbolic plane whose horizon is the circle through `end1`, `end2`
/// with the given pull-back angle.
#[derive(Debug, Clone, Copy)]
pub struct PullbackPlane {
    end1: C64,
    end2: C64,
    angle: f64,
    center: C64,
    radius: f64,
}

/// Center and radius of the circle through `k`, `k′` with pull-back angle
/// `theta`: the center sits on the perpendicular bisector, pulled back by
/// `tan θ` half-chords.
pub fn pullback_center_radius(k: C64, kp: C64, theta: f64) -> Result<(C64, f64)> {
    if !(theta > -FRAC_PI_2 && theta < FRAC_PI_2) {
        return Err(Error::DegeneratePullback(theta));
    }
    let chord = k - kp;
    if chord.norm() == 0.0 || !chord.is_finite() {
        return Err(Error::DegeneratePullbackEnds);
    }
    let center = (k + kp) / 2.0 + c(0.0, 1.0) * chord / 2.0 * theta.tan();
    let radius = chord.norm() / (2.0 * theta.cos());
    Ok((center, radius))
}

pub fn pullback_circle(k: &SpherePoint, kp: &SpherePoint, theta: f64) -> Result<GeneralizedCircle> {
    let plane = PullbackPlane::new(k, kp, theta)?;
    GeneralizedCircle::from_center_radius(plane.center, plane.radius)
}

/// Pull-back angle of the circle with the given center through `k`, `k′`
/// (the inverse of [`pullback_center_radius`]).
pub fn pullback_angle(k: C64, kp: C64, center: C64) -> f64 {
    let chord = k - kp;
    let offset = (center - (k + kp) / 2.0) / (c(0.0, 1.0) * chord / 2.0);
    offset.re.atan()
}

impl PullbackPlane {
    pub fn new(end1: &SpherePoint, end2: &SpherePoint, angle: f64) -> Result<Self> {
        let (Some(k), Some(kp)) = (end1.to_complex(), end2.to_complex()) else {
            return Err(Error::DegeneratePullbackEnds);
        };
        let (center, radius) = pullback_center_radius(k, kp, angle)?;
        Ok(Self {
            end1: k,
            end2: kp,
            angle,
            center,
            radius,
        })
    }

    pub fn through(line: &Geodesic, angle: f64) -> Result<Self> {
        Self::new(&line.start(), &line.stop(), angle)
    }

    pub fn ends(&self) -> (C64, C64) {
        (self.end1, self.end2)
    }

    pub fn angle(&self) -> f64 {
        self.angle
    }

    pub fn center(&self) -> C64 {
        self.center
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn horizon(&self) -> GeneralizedCircle {
        GeneralizedCircle::from_center_radius(self.center, self.radius).expect("valid plane")
    }

    /// Distance of a boundary point from the horizon (∞ is never on it).
    pub fn boundary_offset(&self, p: &SpherePoint) -> f64 {
        match p.to_complex() {
            Some(z) => ((z - self.center).norm() - self.radius).abs(),
            None => f64::INFINITY,
        }
    }

    pub fn point_offset(&self, x: &H3Point) -> f64 {
        ((x.z - self.center).norm_sqr() + x.h * x.h).sqrt() - self.radius
    }

    pub fn contains_point(&self, x: &H3Point, tol: f64) -> bool {
        self.point_offset(x).abs() <= tol * self.radius.max(1.0)
    }

    pub fn contains_line(&self, line: &Geodesic, tol: f64) -> bool {
        let scale = self.radius.max(1.0);
        self.boundary_offset(&line.start()) <= tol * scale
            && self.boundary_offset(&line.stop()) <= tol * scale
    }

    fn check_point(&self, x: &H3Point) -> Result<()> {
        let off = self.point_offset(x);
        if off.abs() > 1e-7 * self.radius.max(1.0) {
            return Err(Error::OffPlane(off));
        }
        Ok(())
    }

    /// The line through `x` meeting the plane orthogonally, oriented from
    /// inside the hemisphere to outside.
    ///
    /// In the vertical half-plane through the horizon center and `x`, this
    /// is the semicircle through `x` whose ends are inverse to each other
    /// in the horizon.
    pub fn perpendicular_at(&self, x: &H3Point) -> Result<Geodesic> {
        self.check_point(x)?;
        let offset = x.z - self.center;
        let s = offset.norm();
        if s <= 1e-12 * self.radius {
            return Ok(Geodesic::new(
                SpherePoint::finite(self.center),
                SpherePoint::infinity(),
            ));
        }
        let u = offset / s;
        let m = self.radius * self.radius / s;
        let rho = (m * m - self.radius * self.radius).max(0.0).sqrt();
        Ok(Geodesic::between(
            self.center + u * (m - rho),
            self.center + u * (m + rho),
        ))
    }

    /// The line on the plane through `x` that meets `line` orthogonally.
    pub fn in_plane_perpendicular(&self, line: &Geodesic, x: &H3Point) -> Result<Geodesic> {
        if !self.contains_line(line, 1e-7) {
            return Err(Error::OffPlane(
                self.boundary_offset(&line.start())
                    .max(self.boundary_offset(&line.stop())),
            ));
        }
        if !line.contains(x, 1e-7) {
            return Err(Error::OffPlane(f64::NAN));
        }
        let normal = self.perpendicular_at(x)?;
        common_perpendicular(line, &normal)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_4, SQRT_2};

    fn sp(re: f64, im: f64) -> SpherePoint {
        SpherePoint::finite(c(re, im))
    }

    #[test]
    fn pullback_examples() {
        let (cen, r) = PullbackPlane::new(&sp(1.0, 0.0), &sp(-1.0, 0.0), 0.0)
            .map(|p| (p.center(), p.radius()))
            .unwrap();
        assert!(cen.norm() < 1e-15 && (r - 1.0).abs() < 1e-15);

        let p = PullbackPlane::new(&sp(1.0, 0.0), &sp(-1.0, 0.0), FRAC_PI_4).unwrap();
        assert!((p.center() - c(0.0, 1.0)).norm() < 1e-15);
        assert!((p.radius() - SQRT_2).abs() < 1e-15);

        let p = PullbackPlane::new(&sp(2.0, 1.0), &sp(0.0, 1.0), 0.0).unwrap();
        assert!((p.center() - c(1.0, 1.0)).norm() < 1e-15 && (p.radius() - 1.0).abs() < 1e-15);

        assert_eq!(
            pullback_circle(&sp(1.0, 0.0), &sp(-1.0, 0.0), -FRAC_PI_2).unwrap_err(),
            Error::DegeneratePullback(-FRAC_PI_2)
        );
        assert!(PullbackPlane::new(&sp(1.0, 0.0), &SpherePoint::infinity(), 0.0).is_err());
        assert!(PullbackPlane::new(&sp(1.0, 0.0), &sp(1.0, 0.0), 0.0).is_err());
    }

    #[test]
    fn pullback_angle_inverts() {
        let (k, kp) = (c(0.3, -1.2), c(2.0, 0.7));
        for theta in [-1.2, -0.3, 0.0, 0.9, 1.4] {
            let (center, _) = pullback_center_radius(k, kp, theta).unwrap();
            assert!((pullback_angle(k, kp, center) - theta).abs() < 1e-12);
        }
    }

    #[test]
    fn hermitian_form_and_images() {
        let circ = GeneralizedCircle::from_center_radius(c(1.0, 2.0), 3.0).unwrap();
        assert!(circ.eval(c(4.0, 2.0)).abs() < 1e-12);
        assert!(circ.eval(c(1.0, 2.0)) < 0.0);
        let m = MoebiusMap::new(c(1.0, 1.0), c(0.5, 0.0), c(0.2, -0.1), c(1.0, 0.0)).unwrap();
        let img = circ.image(&m);
        for t in 0..12 {
            let z = c(1.0, 2.0) + C64::from_polar(3.0, t as f64 * 0.5);
            let w = m.apply(z).unwrap();
            assert!(img.eval(w).abs() < 1e-10, "{}", img.eval(w));
        }
        // the bounded disk is tracked through the map
        let inside = m.apply(c(1.0, 2.0)).unwrap();
        assert!(img.eval(inside) < 0.0);
    }

    #[test]
    fn perpendicular_examples() {
        let unit = PullbackPlane::new(&sp(-1.0, 0.0), &sp(1.0, 0.0), 0.0).unwrap();
        let apex = H3Point::new(c(0.0, 0.0), 1.0);
        let v = unit.perpendicular_at(&apex).unwrap();
        assert!(v.start().approx_eq(&sp(0.0, 0.0), 1e-15) && v.stop().is_infinite());

        let m = unit
            .in_plane_perpendicular(&Geodesic::between(-1.0, 1.0), &apex)
            .unwrap();
        let i = sp(0.0, 1.0);
        assert!(m.start().approx_eq(&i, 1e-12) || m.stop().approx_eq(&i, 1e-12));
        assert!(unit.contains_line(&m, 1e-12));

        // plane over the circle of radius 1 about −4, foot of the axis of
        // H_{[−5,−3]} H_{[−1,1]}
        let r3 = 3f64.sqrt();
        let p = PullbackPlane::new(&sp(-5.0, 0.0), &sp(-3.0, 0.0), 0.0).unwrap();
        let x = H3Point::new(c(-3.5, 0.0), r3 / 2.0);
        let v = p.perpendicular_at(&x).unwrap();
        assert!(v.contains(&x, 1e-12));
        assert!(v.same_line(&Geodesic::between(-2.0 - r3, -2.0 + r3), 1e-12));
        // the normal is inverted into itself by the horizon
        let (a, b) = (
            v.start().to_complex().unwrap(),
            v.stop().to_complex().unwrap(),
        );
        assert!((((a + 4.0) * (b + 4.0).conj()) - 1.0).norm() < 1e-12);

        assert!(p
            .perpendicular_at(&H3Point::new(c(-3.5, 0.0), 2.0))
            .is_err());
    }
}
