//! Riemann-sphere points, unit-determinant complex 2×2 matrices and their
//! action on the sphere and on upper half-space.

use std::fmt;
use std::ops::Mul;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geometry::Geodesic;
use crate::tolerance::{Tolerances, EPS_EQ};

pub type C64 = Complex64;

#[cfg(test)]
pub(crate) const I: C64 = C64::new(0.0, 1.0);

#[inline]
pub(crate) fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// A point of the Riemann sphere in homogeneous coordinates `[z0 : z1]`.
///
/// The representative is scaled so that its larger coordinate has modulus
/// one; `z1 == 0` is the point at infinity.
#[derive(Debug, Clone, Copy)]
pub struct SpherePoint {
    z0: C64,
    z1: C64,
}

impl SpherePoint {
    pub fn new(z0: C64, z1: C64) -> Self {
        let m = z0.norm().max(z1.norm());
        assert!(
            m > 0.0 && m.is_finite(),
            "homogeneous coordinates must not both vanish"
        );
        Self {
            z0: z0 / m,
            z1: z1 / m,
        }
    }

    /// `[z : 1]`, kept unscaled so `to_complex` returns `z` exactly.
    pub fn finite(z: C64) -> Self {
        assert!(z.is_finite(), "finite point expected");
        Self {
            z0: z,
            z1: C64::new(1.0, 0.0),
        }
    }

    pub fn real(x: f64) -> Self {
        Self::finite(c(x, 0.0))
    }

    pub fn infinity() -> Self {
        Self {
            z0: C64::new(1.0, 0.0),
            z1: C64::new(0.0, 0.0),
        }
    }

    pub fn coords(&self) -> (C64, C64) {
        (self.z0, self.z1)
    }

    pub fn is_infinite(&self) -> bool {
        self.z1.norm() <= f64::EPSILON * self.z0.norm()
    }

    /// The affine coordinate, or `None` at infinity.
    pub fn to_complex(&self) -> Option<C64> {
        if self.is_infinite() {
            None
        } else {
            Some(self.z0 / self.z1)
        }
    }

    /// Chordal distance on the unit sphere (0 ≤ d ≤ 1 after scaling by ½).
    pub fn chordal_distance(&self, other: &SpherePoint) -> f64 {
        let num = (self.z0 * other.z1 - self.z1 * other.z0).norm();
        let den = (self.z0.norm_sqr() + self.z1.norm_sqr()).sqrt()
            * (other.z0.norm_sqr() + other.z1.norm_sqr()).sqrt();
        num / den
    }

    pub fn approx_eq(&self, other: &SpherePoint, tol: f64) -> bool {
        self.chordal_distance(other) <= tol
    }
}

impl PartialEq for SpherePoint {
    fn eq(&self, other: &Self) -> bool {
        self.approx_eq(other, EPS_EQ)
    }
}

impl From<C64> for SpherePoint {
    fn from(z: C64) -> Self {
        SpherePoint::finite(z)
    }
}

impl From<f64> for SpherePoint {
    fn from(x: f64) -> Self {
        SpherePoint::real(x)
    }
}

impl fmt::Display for SpherePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.to_complex() {
            None => write!(f, "inf"),
            Some(z) => write!(f, "{}{:+}i", z.re, z.im),
        }
    }
}

/// A point of hyperbolic 3-space in the upper half-space model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct H3Point {
    pub z: C64,
    pub h: f64,
}

impl H3Point {
    pub fn new(z: C64, h: f64) -> Self {
        assert!(h > 0.0, "height must be positive");
        Self { z, h }
    }

    /// Hyperbolic distance.
    pub fn distance(&self, other: &H3Point) -> f64 {
        let num = (self.z - other.z).norm_sqr() + (self.h - other.h).powi(2);
        (1.0 + num / (2.0 * self.h * other.h)).acosh()
    }

    /// Relative closeness test, scale-invariant in the half-space model.
    pub fn approx_eq(&self, other: &H3Point, tol: f64) -> bool {
        self.distance(other) <= tol
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Classification {
    Identity,
    Parabolic,
    Elliptic,
    Loxodromic,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FixedPoints {
    One(SpherePoint),
    /// For loxodromic maps the order is (repelling, attracting).
    Two(SpherePoint, SpherePoint),
}

/// Axis of a non-identity map.
#[derive(Debug, Clone, Copy)]
pub struct Axis {
    pub line: Geodesic,
    /// Elliptic axes have no preferred direction; the line is oriented so the
    /// map is a rotation by an angle in (0, π] about it, and a half-turn
    /// cannot be disambiguated at all.
    pub orientation_ambiguous: bool,
}

/// A unit-determinant complex 2×2 matrix, taken up to sign.
#[derive(Debug, Clone, Copy)]
pub struct MoebiusMap {
    pub a: C64,
    pub b: C64,
    pub c: C64,
    pub d: C64,
}

impl MoebiusMap {
    /// Normalizes `[[a, b], [c, d]]` to determinant one.
    pub fn new(a: C64, b: C64, c: C64, d: C64) -> Result<Self> {
        let det = a * d - b * c;
        if !det.is_finite() || det.norm() == 0.0 {
            return Err(Error::Consistency("singular matrix".into()));
        }
        let s = det.sqrt();
        Ok(Self {
            a: a / s,
            b: b / s,
            c: c / s,
            d: d / s,
        })
    }

    pub(crate) fn normalized(a: C64, b: C64, c: C64, d: C64) -> Self {
        Self::new(a, b, c, d).expect("non-singular by construction")
    }

    pub fn identity() -> Self {
        let one = C64::new(1.0, 0.0);
        let zero = C64::new(0.0, 0.0);
        Self {
            a: one,
            b: zero,
            c: zero,
            d: one,
        }
    }

    pub fn diag(lambda: C64) -> Self {
        let zero = C64::new(0.0, 0.0);
        Self::normalized(lambda, zero, zero, lambda.inv())
    }

    pub fn from_real(m: [[f64; 2]; 2]) -> Result<Self> {
        Self::new(
            c(m[0][0], 0.0),
            c(m[0][1], 0.0),
            c(m[1][0], 0.0),
            c(m[1][1], 0.0),
        )
    }

    /// Map sending `0 ↦ p` and `∞ ↦ q`.
    pub fn frame(p: &SpherePoint, q: &SpherePoint) -> Result<Self> {
        let (q0, q1) = q.coords();
        let (p0, p1) = p.coords();
        let det = q0 * p1 - p0 * q1;
        if det.norm() < 1e-14 {
            return Err(Error::ImproperLine);
        }
        Self::new(q0, p0, q1, p1)
    }

    pub fn entries(&self) -> [C64; 4] {
        [self.a, self.b, self.c, self.d]
    }

    pub fn det(&self) -> C64 {
        self.a * self.d - self.b * self.c
    }

    pub fn trace(&self) -> C64 {
        self.a + self.d
    }

    /// Inverse; for unit determinant this is the adjugate.
    pub fn inverse(&self) -> Self {
        Self {
            a: self.d,
            b: -self.b,
            c: -self.c,
            d: self.a,
        }
    }

    pub fn neg(&self) -> Self {
        Self {
            a: -self.a,
            b: -self.b,
            c: -self.c,
            d: -self.d,
        }
    }

    /// `g · self · g⁻¹`.
    pub fn conjugate_by(&self, g: &MoebiusMap) -> Self {
        *g * *self * g.inverse()
    }

    /// Entrywise Euclidean distance, ignoring the overall sign.
    pub fn distance_up_to_sign(&self, other: &MoebiusMap) -> f64 {
        let minus = frob(self.entries(), other.entries(), 1.0);
        let plus = frob(self.entries(), other.entries(), -1.0);
        minus.min(plus)
    }

    pub fn approx_eq(&self, other: &MoebiusMap, tol: f64) -> bool {
        self.distance_up_to_sign(other) < tol
    }

    pub fn is_identity(&self, tol: f64) -> bool {
        self.approx_eq(&Self::identity(), tol)
    }

    pub fn classify(&self) -> Classification {
        self.classify_with(&Tolerances::default())
    }

    pub fn classify_with(&self, tol: &Tolerances) -> Classification {
        if self.is_identity(tol.eq) {
            return Classification::Identity;
        }
        let t2 = self.trace() * self.trace();
        if (t2 - 4.0).norm() <= tol.class * 4.0 {
            Classification::Parabolic
        } else if t2.im.abs() <= tol.class * t2.norm().max(1.0)
            && t2.re >= -tol.class
            && t2.re < 4.0
        {
            Classification::Elliptic
        } else {
            Classification::Loxodromic
        }
    }

    /// Eigenvector for eigenvalue `lambda`, as a sphere point.
    fn eigen_point(&self, lambda: C64) -> SpherePoint {
        let v1 = (self.b, lambda - self.a);
        let v2 = (lambda - self.d, self.c);
        let n1 = v1.0.norm_sqr() + v1.1.norm_sqr();
        let n2 = v2.0.norm_sqr() + v2.1.norm_sqr();
        if n1 >= n2 {
            SpherePoint::new(v1.0, v1.1)
        } else {
            SpherePoint::new(v2.0, v2.1)
        }
    }

    /// Eigenvalues `(λ, 1/λ)` with `|λ| ≥ 1`.
    fn eigenvalues(&self) -> (C64, C64) {
        let t = self.trace();
        let s = (t * t - 4.0).sqrt();
        let l1 = if (t + s).norm() >= (t - s).norm() {
            (t + s) / 2.0
        } else {
            (t - s) / 2.0
        };
        (l1, l1.inv())
    }

    pub fn fixed_points(&self) -> Result<FixedPoints> {
        self.fixed_points_with(&Tolerances::default())
    }

    pub fn fixed_points_with(&self, tol: &Tolerances) -> Result<FixedPoints> {
        match self.classify_with(tol) {
            Classification::Identity => Err(Error::NoIsolatedFixedPoints),
            Classification::Parabolic => Ok(FixedPoints::One(self.eigen_point(self.trace() / 2.0))),
            _ => {
                let (big, small) = self.eigenvalues();
                // The derivative at the fixed point of eigenvalue λ is 1/λ²,
                // so the small eigenvalue belongs to the repelling point.
                Ok(FixedPoints::Two(
                    self.eigen_point(small),
                    self.eigen_point(big),
                ))
            }
        }
    }

    pub fn axis(&self) -> Result<Axis> {
        self.axis_with(&Tolerances::default())
    }

    pub fn axis_with(&self, tol: &Tolerances) -> Result<Axis> {
        match self.classify_with(tol) {
            Classification::Identity => Err(Error::NoIsolatedFixedPoints),
            Classification::Parabolic => {
                let p = self.eigen_point(self.trace() / 2.0);
                Ok(Axis {
                    line: Geodesic::new(p, p),
                    orientation_ambiguous: false,
                })
            }
            Classification::Loxodromic => {
                let (big, small) = self.eigenvalues();
                Ok(Axis {
                    line: Geodesic::new(self.eigen_point(small), self.eigen_point(big)),
                    orientation_ambiguous: false,
                })
            }
            Classification::Elliptic => {
                let (l1, l2) = self.eigenvalues();
                // rotation_about([p, q], τ) has eigenvalue e^{iτ/2} at q
                let angle = |l: C64| crate::normalize_angle(2.0 * l.arg());
                let (p, q) = if angle(l1) > 0.0 { (l2, l1) } else { (l1, l2) };
                Ok(Axis {
                    line: Geodesic::new(self.eigen_point(p), self.eigen_point(q)),
                    orientation_ambiguous: true,
                })
            }
        }
    }

    pub fn apply(&self, z: C64) -> Option<C64> {
        self.apply_sphere(&SpherePoint::finite(z)).to_complex()
    }

    pub fn apply_sphere(&self, p: &SpherePoint) -> SpherePoint {
        let (z0, z1) = p.coords();
        SpherePoint::new(self.a * z0 + self.b * z1, self.c * z0 + self.d * z1)
    }

    /// Poincaré extension to upper half-space.
    pub fn apply_h3(&self, q: &H3Point) -> H3Point {
        let h2 = q.h * q.h;
        let w = self.c * q.z + self.d;
        let den = w.norm_sqr() + self.c.norm_sqr() * h2;
        let z = ((self.a * q.z + self.b) * w.conj() + self.a * self.c.conj() * h2) / den;
        H3Point { z, h: q.h / den }
    }
}

fn frob(x: [C64; 4], y: [C64; 4], sign: f64) -> f64 {
    x.iter()
        .zip(y.iter())
        .map(|(p, q)| (p - q * sign).norm_sqr())
        .sum::<f64>()
        .sqrt()
}

impl Mul for MoebiusMap {
    type Output = MoebiusMap;

    fn mul(self, r: MoebiusMap) -> MoebiusMap {
        MoebiusMap {
            a: self.a * r.a + self.b * r.c,
            b: self.a * r.b + self.b * r.d,
            c: self.c * r.a + self.d * r.c,
            d: self.c * r.b + self.d * r.d,
        }
    }
}

impl fmt::Display for MoebiusMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.a, self.b, self.c, self.d)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn real(m: [[f64; 2]; 2]) -> MoebiusMap {
        MoebiusMap::from_real(m).unwrap()
    }

    #[test]
    fn classification_examples() {
        assert_eq!(
            real([[2.0, 0.0], [0.0, 0.5]]).classify(),
            Classification::Loxodromic
        );
        assert_eq!(
            real([[1.0, 1.0], [0.0, 1.0]]).classify(),
            Classification::Parabolic
        );
        let e = MoebiusMap::diag(C64::from_polar(1.0, PI / 4.0));
        assert_eq!(e.classify(), Classification::Elliptic);
        assert_eq!(
            MoebiusMap::identity().neg().classify(),
            Classification::Identity
        );
    }

    #[test]
    fn fixed_points_diag() {
        let m = real([[3.0, 0.0], [0.0, 1.0 / 3.0]]);
        match m.fixed_points().unwrap() {
            FixedPoints::Two(rep, att) => {
                assert!(rep.approx_eq(&SpherePoint::real(0.0), 1e-14));
                assert!(att.is_infinite());
            }
            other => panic!("{other:?}"),
        }
        match real([[1.0, 1.0], [0.0, 1.0]]).fixed_points().unwrap() {
            FixedPoints::One(p) => assert!(p.is_infinite()),
            other => panic!("{other:?}"),
        }
        assert_eq!(
            MoebiusMap::identity().fixed_points(),
            Err(Error::NoIsolatedFixedPoints)
        );
    }

    #[test]
    fn fixed_points_quadratic() {
        // 15z² − 80z + 60 = 0
        let m = real([[72.0, -60.0], [15.0, -8.0]]);
        let r7 = 7f64.sqrt();
        let expected = [(8.0 - 2.0 * r7) / 3.0, (8.0 + 2.0 * r7) / 3.0];
        let FixedPoints::Two(p, q) = m.fixed_points().unwrap() else {
            panic!()
        };
        let mut got = [p.to_complex().unwrap().re, q.to_complex().unwrap().re];
        got.sort_by(f64::total_cmp);
        for (g, e) in got.iter().zip(expected) {
            assert!((g - e).abs() < 1e-12, "{g} vs {e}");
        }
        assert!(p.approx_eq(&m.apply_sphere(&p), 1e-12));
    }

    #[test]
    fn axes() {
        let ax = real([[3.0, 0.0], [0.0, 1.0 / 3.0]]).axis().unwrap();
        assert!(ax.line.start().approx_eq(&SpherePoint::real(0.0), 1e-14));
        assert!(ax.line.stop().is_infinite());
        assert!(!ax.orientation_ambiguous);

        let ax = real([[1.0, 1.0], [0.0, 1.0]]).axis().unwrap();
        assert!(ax.line.is_improper());
        assert!(ax.line.start().is_infinite());

        // z ↦ 1/z
        let inv = MoebiusMap::new(c(0.0, 0.0), I, I, c(0.0, 0.0)).unwrap();
        let ax = inv.axis().unwrap();
        assert!(ax.orientation_ambiguous);
        let mut ends = [
            ax.line.start().to_complex().unwrap().re,
            ax.line.stop().to_complex().unwrap().re,
        ];
        ends.sort_by(f64::total_cmp);
        assert!((ends[0] + 1.0).abs() < 1e-14 && (ends[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn actions() {
        let m = real([[3.0, 0.0], [0.0, 1.0 / 3.0]]);
        assert!((m.apply(c(1.0, 0.0)).unwrap() - 9.0).norm() < 1e-12);
        let o = H3Point::new(c(0.0, 0.0), 1.0);
        assert_eq!(MoebiusMap::identity().apply_h3(&o), o);
        let q = m.apply_h3(&o);
        assert!(q.z.norm() < 1e-14 && (q.h - 9.0).abs() < 1e-12);
        // ∞ is handled without special cases
        assert!(m.apply_sphere(&SpherePoint::infinity()).is_infinite());
        let flip = MoebiusMap::new(c(0.0, 0.0), c(1.0, 0.0), c(-1.0, 0.0), c(0.0, 0.0)).unwrap();
        assert!(flip
            .apply_sphere(&SpherePoint::infinity())
            .approx_eq(&SpherePoint::real(0.0), 1e-15));
    }

    #[test]
    fn h3_extension_matches_quaternion_oracle() {
        // Oracle: (a q + b)(c q + d)^{-1} with q = z + h j in the quaternions.
        type Q = [f64; 4];
        fn qmul(x: Q, y: Q) -> Q {
            [
                x[0] * y[0] - x[1] * y[1] - x[2] * y[2] - x[3] * y[3],
                x[0] * y[1] + x[1] * y[0] + x[2] * y[3] - x[3] * y[2],
                x[0] * y[2] - x[1] * y[3] + x[2] * y[0] + x[3] * y[1],
                x[0] * y[3] + x[1] * y[2] - x[2] * y[1] + x[3] * y[0],
            ]
        }
        fn qinv(x: Q) -> Q {
            let n: f64 = x.iter().map(|v| v * v).sum();
            [x[0] / n, -x[1] / n, -x[2] / n, -x[3] / n]
        }
        fn cq(z: C64) -> Q {
            [z.re, z.im, 0.0, 0.0]
        }
        let m = MoebiusMap::new(c(1.0, 2.0), c(-0.5, 0.3), c(0.7, -1.1), c(2.0, 0.1)).unwrap();
        let p = H3Point::new(c(0.3, -0.8), 1.7);
        let q: Q = [p.z.re, p.z.im, p.h, 0.0];
        let num = qmul(cq(m.a), q);
        let num = [num[0] + m.b.re, num[1] + m.b.im, num[2], num[3]];
        let den = qmul(cq(m.c), q);
        let den = [den[0] + m.d.re, den[1] + m.d.im, den[2], den[3]];
        let r = qmul(num, qinv(den));
        let got = m.apply_h3(&p);
        assert!((got.z - c(r[0], r[1])).norm() < 1e-12);
        assert!((got.h - r[2]).abs() < 1e-12 && r[3].abs() < 1e-12);
    }

    #[test]
    fn sphere_point_equality() {
        assert_eq!(
            SpherePoint::new(c(2.0, 0.0), c(0.0, 0.0)),
            SpherePoint::infinity()
        );
        assert_eq!(
            SpherePoint::new(c(2.0, 2.0), c(2.0, 0.0)),
            SpherePoint::finite(c(1.0, 1.0))
        );
        assert_ne!(SpherePoint::real(1.0), SpherePoint::real(1.001));
    }
}
