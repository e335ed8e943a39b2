//! Planar families: every marked group whose half-turn lines stay on the
//! three certified planes, reached from the base by `(d, τ)` moves.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::certify::{certify_with, Certification, NsdcCertificate};
use crate::circle::PullbackPlane;
use crate::error::{Error, Result};
use crate::geometry::{foot_on, geodesic_through, rotation_about, translation_along, Geodesic};
use crate::mobius::{c, H3Point, MoebiusMap, SpherePoint, C64};
use crate::normalize_angle;
use crate::orthoend::{compose, decompose, MarkedGroup, OrthoEnd, ThreeGenGroup};
use crate::tolerance::Tolerances;

/// Relative distance from a horizon below which a point counts as on it.
pub const HORIZON_TOL: f64 = 1e-8;

/// Moves `(d_A, τ_A)`, `(d, τ)`, `(d_B, τ_B)` with `d ≥ 0`, `τ ∈ (−π, π]`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct MoveParams {
    pub d_a: f64,
    pub tau_a: f64,
    pub d: f64,
    pub tau: f64,
    pub d_b: f64,
    pub tau_b: f64,
}

/// Bring `(d, τ)` into range. A negative translation is the positive one
/// along the reversed axis, which is the axis rotated by π; the moved line
/// then comes out with the opposite orientation, so the half-turn (and the
/// group element) only changes sign.
pub fn normalize_move(d: f64, tau: f64) -> (f64, f64) {
    if d < 0.0 {
        (-d, normalize_angle(tau + PI))
    } else {
        (d, normalize_angle(tau))
    }
}

impl MoveParams {
    pub fn new(d_a: f64, tau_a: f64, d: f64, tau: f64, d_b: f64, tau_b: f64) -> Self {
        Self::from_array([d_a, tau_a, d, tau, d_b, tau_b])
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_array(v: [f64; 6]) -> Self {
        let (d_a, tau_a) = normalize_move(v[0], v[1]);
        let (d, tau) = normalize_move(v[2], v[3]);
        let (d_b, tau_b) = normalize_move(v[4], v[5]);
        Self {
            d_a,
            tau_a,
            d,
            tau,
            d_b,
            tau_b,
        }
    }

    pub fn to_array(&self) -> [f64; 6] {
        [self.d_a, self.tau_a, self.d, self.tau, self.d_b, self.tau_b]
    }

    /// The three moves in plane order `ℙ_A, ℙ, ℙ_B`.
    pub fn pairs(&self) -> [(f64, f64); 3] {
        [
            (self.d_a, self.tau_a),
            (self.d, self.tau),
            (self.d_b, self.tau_b),
        ]
    }

    pub fn is_normalized(&self) -> bool {
        self.pairs()
            .iter()
            .all(|&(d, t)| d >= 0.0 && t > -PI && t <= PI)
    }
}

/// Base points `v ∈ L`, `v_A ∈ L_A`, `v_B ∈ L_B`: the feet of the
/// common perpendiculars `Ax_A` (of `L_A`, `L`) and `Ax_B` (of `L`, `L_B`).
#[derive(Debug, Clone, Copy)]
pub struct BasePointData {
    pub v: H3Point,
    pub v_a: H3Point,
    pub v_b: H3Point,
}

impl BasePointData {
    pub fn of(l_a: &Geodesic, l: &Geodesic, l_b: &Geodesic) -> Result<Self> {
        Ok(Self {
            v: foot_on(l, l_a).map_err(Error::at("base point v"))?,
            v_a: foot_on(l_a, l).map_err(Error::at("base point v_A"))?,
            v_b: foot_on(l_b, l).map_err(Error::at("base point v_B"))?,
        })
    }

    /// In plane order `ℙ_A, ℙ, ℙ_B`.
    pub fn in_plane_order(&self) -> [H3Point; 3] {
        [self.v_a, self.v, self.v_b]
    }
}

/// `(T_{X,d} ∘ R_{V,τ})(base_line)` with `V` the normal to `plane` at
/// `base_point` and `X = R_{V,τ}(M)`, `M` the in-plane perpendicular to
/// `base_line` at `base_point`.
pub fn move_line(
    plane: &PullbackPlane,
    base_line: &Geodesic,
    base_point: &H3Point,
    d: f64,
    tau: f64,
) -> Result<Geodesic> {
    let v = plane.perpendicular_at(base_point)?;
    let m = plane.in_plane_perpendicular(base_line, base_point)?;
    let r = rotation_about(&v, tau)?;
    let x = m.image(&r);
    let y = base_line.image(&r);
    Ok(y.image(&translation_along(&x, d)?))
}

/// Inverse of [`move_line`]: the `(d, τ)` carrying `base_line` onto
/// `target`.
///
/// With `d > 0` only lines with one of their two orientations are
/// reachable, so `target` is matched as an unoriented line. When `target`
/// passes through `base_point` the answer is `(0, τ)` and orientation is
/// respected.
pub fn recover_move(
    plane: &PullbackPlane,
    base_line: &Geodesic,
    base_point: &H3Point,
    target: &Geodesic,
) -> Result<(f64, f64)> {
    if !plane.contains_line(target, 1e-7) {
        return Err(Error::OffPlane(
            plane
                .boundary_offset(&target.start())
                .max(plane.boundary_offset(&target.stop())),
        ));
    }
    let v = plane.perpendicular_at(base_point)?;
    let m = plane.in_plane_perpendicular(base_line, base_point)?;
    let reflected = crate::geometry::half_turn(target)?.apply_h3(base_point);
    let d = base_point.distance(&reflected) / 2.0;
    if d <= 1e-12 {
        let tau = crate::geometry::along_distance(&v, base_line, target)?.im;
        return Ok((0.0, normalize_angle(tau)));
    }
    let x = geodesic_through(base_point, &reflected)?;
    let tau = crate::geometry::along_distance(&v, &m, &x)?.im;
    Ok((d, normalize_angle(tau)))
}

/// A certified base group together with its three planes.
///
/// When the base ortho-end contains ∞ all plane data live in the chart
/// recorded by the certificate; groups and ortho-ends handed in or out are
/// always in the original coordinates.
#[derive(Debug, Clone)]
pub struct PlanarFamily {
    base: MarkedGroup,
    three: ThreeGenGroup,
    ortho_end: OrthoEnd,
    work: ThreeGenGroup,
    planes: [PullbackPlane; 3],
    certificate: NsdcCertificate,
    base_points: BasePointData,
}

impl PlanarFamily {
    pub fn from_group(g: &MarkedGroup, angles: [f64; 3]) -> Result<Self> {
        Self::from_group_with(g, angles, &Tolerances::default())
    }

    pub fn from_group_with(g: &MarkedGroup, angles: [f64; 3], tol: &Tolerances) -> Result<Self> {
        let (three, ortho_end) = decompose(g)?;
        let certificate = match certify_with(&ortho_end, angles, tol)? {
            Certification::Certified(cert) => cert,
            Certification::Failed(report) => return Err(Error::NotCertified(Box::new(report))),
        };
        let work = match &certificate.chart {
            Some(chart) => ThreeGenGroup::from_lines(
                three.l_a.image(chart),
                three.l.image(chart),
                three.l_b.image(chart),
            )?,
            None => three,
        };
        let mut planes = Vec::with_capacity(3);
        for (line, angle) in [work.l_a, work.l, work.l_b].iter().zip(angles) {
            planes.push(PullbackPlane::through(line, angle)?);
        }
        let base_points = BasePointData::of(&work.l_a, &work.l, &work.l_b)?;
        Ok(Self {
            base: *g,
            three,
            ortho_end,
            work,
            planes: [planes[0], planes[1], planes[2]],
            certificate,
            base_points,
        })
    }

    pub fn from_ortho_end(oe: &OrthoEnd, angles: [f64; 3]) -> Result<Self> {
        let g = compose(&oe.l_a(), &oe.l(), &oe.l_b())?;
        Self::from_group(&g, angles)
    }

    pub fn base(&self) -> &MarkedGroup {
        &self.base
    }

    pub fn three_gen(&self) -> &ThreeGenGroup {
        &self.three
    }

    pub fn ortho_end(&self) -> &OrthoEnd {
        &self.ortho_end
    }

    pub fn certificate(&self) -> &NsdcCertificate {
        &self.certificate
    }

    pub fn angles(&self) -> [f64; 3] {
        self.certificate.angles
    }

    /// Chart the plane data are expressed in, if any.
    pub fn chart(&self) -> Option<&MoebiusMap> {
        self.certificate.chart.as_ref()
    }

    /// `ℙ_A, ℙ, ℙ_B` (in chart coordinates).
    pub fn planes(&self) -> &[PullbackPlane; 3] {
        &self.planes
    }

    /// Base lines `L_A, L, L_B` (in chart coordinates).
    pub fn base_lines(&self) -> [Geodesic; 3] {
        [self.work.l_a, self.work.l, self.work.l_b]
    }

    pub fn base_points(&self) -> &BasePointData {
        &self.base_points
    }

    /// Moved lines `L_{A′}, L′, L_{B′}` (in chart coordinates).
    pub fn moved_lines(&self, m: &MoveParams) -> Result<[Geodesic; 3]> {
        let lines = self.base_lines();
        let points = self.base_points.in_plane_order();
        let steps = ["move L_A", "move L", "move L_B"];
        let mut out = lines;
        for k in 0..3 {
            let (d, tau) = m.pairs()[k];
            out[k] = move_line(&self.planes[k], &lines[k], &points[k], d, tau)
                .map_err(Error::at(steps[k]))?;
        }
        Ok(out)
    }

    fn to_original(&self, line: &Geodesic) -> Geodesic {
        match self.chart() {
            Some(chart) => line.image(&chart.inverse()),
            None => *line,
        }
    }

    /// `G′ = ⟨H_{L_{A′}} H_{L′}, H_{L_{B′}} H_{L′}⟩` and its ortho-end.
    pub fn family_member(&self, m: &MoveParams) -> Result<(MarkedGroup, OrthoEnd)> {
        let [la, l, lb] = self.moved_lines(m)?.map(|x| self.to_original(&x));
        let g = compose(&la, &l, &lb).map_err(|_| Error::DegenerateGenerator)?;
        Ok((g, OrthoEnd::from_lines(&la, &l, &lb)))
    }

    /// Moves carrying the base lines onto the half-turn lines of `g`.
    pub fn recover_params(&self, g: &MarkedGroup) -> Result<MoveParams> {
        let (t, _) = decompose(g)?;
        let lines = [t.l_a, t.l, t.l_b].map(|x| match self.chart() {
            Some(chart) => x.image(chart),
            None => x,
        });
        let base = self.base_lines();
        let points = self.base_points.in_plane_order();
        let mut v = [0.0; 6];
        for k in 0..3 {
            let (d, tau) = recover_move(&self.planes[k], &base[k], &points[k], &lines[k])?;
            v[2 * k] = d;
            v[2 * k + 1] = tau;
        }
        Ok(MoveParams::from_array(v))
    }

    /// Whether `candidate` is the ortho-end of a member of this family,
    /// plane by plane.
    pub fn membership_test(&self, candidate: &OrthoEnd) -> Result<Membership> {
        let cand = match self.chart() {
            Some(chart) => candidate.image(chart),
            None => *candidate,
        };
        let pts = cand.points();
        let mut planes = Vec::with_capacity(3);
        for k in 0..3 {
            planes.push(plane_membership(
                &self.planes[k],
                &pts[2 * k],
                &pts[2 * k + 1],
            )?);
        }
        Ok(Membership {
            planes: [planes[0], planes[1], planes[2]],
        })
    }
}

/// Per-plane outcome of [`PlanarFamily::membership_test`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PlaneMembership {
    /// Both candidate ends lie on the horizon.
    pub on_horizon: bool,
    /// Distances of the two candidate ends from the horizon.
    pub offsets: [f64; 2],
    /// `t′` solving `c = (α+α′)/2 + i(α−α′)t′/2` for the horizon center `c`.
    pub t_prime: C64,
    /// `t′` is real and `|c − α| = r`.
    pub real_t_prime: bool,
    /// `t` of the base pair, `tan θ`.
    pub t_base: f64,
    /// `((a+a′) − (α+α′) − i(a−a′)|a−a′| tan θ / 2) / (i(α−α′))`.
    pub printed_ratio: C64,
    pub printed_ratio_real: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Membership {
    pub planes: [PlaneMembership; 3],
}

impl Membership {
    pub fn is_member(&self) -> bool {
        self.planes.iter().all(|p| p.on_horizon)
    }

    /// Whether the center-equality and real-`t′` decisions coincide.
    pub fn paths_agree(&self) -> bool {
        self.planes.iter().all(|p| p.on_horizon == p.real_t_prime)
    }
}

fn plane_membership(
    plane: &PullbackPlane,
    alpha: &SpherePoint,
    alpha_p: &SpherePoint,
) -> Result<PlaneMembership> {
    let (Some(al), Some(alp)) = (alpha.to_complex(), alpha_p.to_complex()) else {
        return Err(Error::Input(
            "membership candidate has an infinite entry".into(),
        ));
    };
    if (al - alp).norm() <= 1e-14 * al.norm().max(1.0) {
        return Err(Error::DegenerateCandidate);
    }
    let (center, r) = (plane.center(), plane.radius());
    let scale = r.max(1.0);
    let offsets = [
        ((al - center).norm() - r).abs(),
        ((alp - center).norm() - r).abs(),
    ];
    let on_horizon = offsets.iter().all(|&o| o <= HORIZON_TOL * scale);

    let i = c(0.0, 1.0);
    let t_prime = (center - (al + alp) / 2.0) / (i * (al - alp) / 2.0);
    let real_t_prime = t_prime.im.abs() <= HORIZON_TOL * t_prime.norm().max(1.0)
        && offsets[0] <= HORIZON_TOL * scale;

    let (a, ap) = plane.ends();
    let theta = plane.angle();
    let numerator = (a + ap) - (al + alp) - i * (a - ap) * (a - ap).norm() / 2.0 * theta.tan();
    let printed_ratio = numerator / (i * (al - alp));
    let printed_ratio_real = printed_ratio.im.abs() <= HORIZON_TOL * printed_ratio.norm().max(1.0);
    Ok(PlaneMembership {
        on_horizon,
        offsets,
        t_prime,
        real_t_prime,
        t_base: theta.tan(),
        printed_ratio,
        printed_ratio_real,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fuchsian() -> PlanarFamily {
        let oe = OrthoEnd::new([-5.0, -3.0, -1.0, 1.0, 3.0, 5.0].map(SpherePoint::real));
        PlanarFamily::from_ortho_end(&oe, [0.0; 3]).unwrap()
    }

    fn on_circle(p: &SpherePoint, center: f64, r: f64) -> f64 {
        ((p.to_complex().unwrap() - c(center, 0.0)).norm() - r).abs()
    }

    #[test]
    fn normalization() {
        let m = MoveParams::new(-1.0, 0.5, 0.0, 3.0 * PI, 2.0, -PI);
        assert_eq!(m.d_a, 1.0);
        assert!((m.tau_a - (0.5 - PI)).abs() < 1e-15);
        assert!((m.tau - PI).abs() < 1e-12);
        assert_eq!(m.tau_b, PI);
        assert!(m.is_normalized());
    }

    #[test]
    fn identity_move() {
        let f = fuchsian();
        let [la, l, lb] = f.base_lines();
        let [va, v, vb] = f.base_points().in_plane_order();
        assert!(move_line(&f.planes()[0], &la, &va, 0.0, 0.0)
            .unwrap()
            .approx_eq(&la, 1e-12));
        assert!(move_line(&f.planes()[1], &l, &v, 0.0, 0.0)
            .unwrap()
            .approx_eq(&l, 1e-12));
        assert!(move_line(&f.planes()[2], &lb, &vb, 0.0, 0.0)
            .unwrap()
            .approx_eq(&lb, 1e-12));
        let (g, _) = f.family_member(&MoveParams::zero()).unwrap();
        assert!(g.approx_eq(f.base(), 1e-12));
    }

    #[test]
    fn base_points_of_fuchsian() {
        let f = fuchsian();
        let v = f.base_points().v_a;
        assert!((v.z - c(-3.5, 0.0)).norm() < 1e-12);
        assert!((v.h - 3f64.sqrt() / 2.0).abs() < 1e-12);
        let v = f.base_points().v;
        assert!((v.z - c(-0.5, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn rotation_about_apex() {
        let plane =
            PullbackPlane::new(&SpherePoint::real(-1.0), &SpherePoint::real(1.0), 0.0).unwrap();
        let line = Geodesic::between(-1.0, 1.0);
        let apex = H3Point::new(c(0.0, 0.0), 1.0);
        let tau = 0.8;
        let moved = move_line(&plane, &line, &apex, 0.0, tau).unwrap();
        let ends = [
            moved.start().to_complex().unwrap(),
            moved.stop().to_complex().unwrap(),
        ];
        for e in ends {
            assert!((e.norm() - 1.0).abs() < 1e-12);
        }
        assert!((ends[1] - C64::from_polar(1.0, tau)).norm() < 1e-12);
    }

    #[test]
    fn moves_stay_on_plane() {
        let f = fuchsian();
        let plane = f.planes()[0];
        let [la, ..] = f.base_lines();
        for (d, tau) in [(0.3, 0.1), (2.0, -2.5), (1.3, 2.0), (0.0, PI)] {
            let moved = move_line(&plane, &la, &f.base_points().v_a, d, tau).unwrap();
            assert!(on_circle(&moved.start(), -4.0, 1.0) < 1e-10);
            assert!(on_circle(&moved.stop(), -4.0, 1.0) < 1e-10);
        }
    }

    #[test]
    fn member_with_b_move() {
        let f = fuchsian();
        let (g, oe) = f
            .family_member(&MoveParams::new(0.0, 0.0, 0.0, 0.0, 0.7, 0.0))
            .unwrap();
        assert!(g.b().distance_up_to_sign(&f.base().b()) > 1e-3);
        assert!(on_circle(&oe.points()[4], 4.0, 1.0) < 1e-10);
        assert!(on_circle(&oe.points()[5], 4.0, 1.0) < 1e-10);
        let cert = certify_with(&oe, [0.0; 3], &Tolerances::default()).unwrap();
        assert!(cert.is_certified());
    }

    #[test]
    fn recover_examples() {
        let f = fuchsian();
        let plane = f.planes()[0];
        let [la, ..] = f.base_lines();
        let va = f.base_points().v_a;
        assert_eq!(recover_move(&plane, &la, &va, &la).unwrap(), (0.0, 0.0));
        let target = move_line(&plane, &la, &va, 1.3, 2.0).unwrap();
        let (d, tau) = recover_move(&plane, &la, &va, &target).unwrap();
        assert!((d - 1.3).abs() < 1e-8 && (tau - 2.0).abs() < 1e-8);
        let through = move_line(&plane, &la, &va, 0.0, -1.1).unwrap();
        let (d, tau) = recover_move(&plane, &la, &va, &through).unwrap();
        assert!(d.abs() < 1e-12 && (tau + 1.1).abs() < 1e-10);
        let off = Geodesic::between(-5.0, -2.0);
        assert!(matches!(
            recover_move(&plane, &la, &va, &off),
            Err(Error::OffPlane(_))
        ));
    }

    #[test]
    fn membership_examples() {
        let f = fuchsian();
        let m = f.membership_test(f.ortho_end()).unwrap();
        assert!(m.is_member() && m.paths_agree());
        assert!(m.planes[0].t_prime.norm() < 1e-12 && m.planes[0].t_base == 0.0);

        let (_, oe) = f
            .family_member(&MoveParams::new(0.4, 1.0, 0.2, -0.3, 1.1, 2.9))
            .unwrap();
        assert!(f.membership_test(&oe).unwrap().is_member());

        let mut pts = oe.points();
        pts[0] = SpherePoint::finite(pts[0].to_complex().unwrap() * 1.01);
        let m = f.membership_test(&OrthoEnd::new(pts)).unwrap();
        assert!(!m.planes[0].on_horizon && !m.is_member() && m.paths_agree());
        assert!(m.planes[1].on_horizon && m.planes[2].on_horizon);

        let mut pts = oe.points();
        pts[1] = pts[0];
        assert_eq!(
            f.membership_test(&OrthoEnd::new(pts)).unwrap_err(),
            Error::DegenerateCandidate
        );
    }

    #[test]
    fn tilted_base_points_on_lines() {
        let oe = OrthoEnd::new([-5.0, -3.0, -1.0, 1.0, 3.0, 5.0].map(SpherePoint::real));
        let f = PlanarFamily::from_ortho_end(&oe, [0.3, -0.2, 0.1]).unwrap();
        let [la, l, lb] = f.base_lines();
        let b = f.base_points();
        assert!(la.contains(&b.v_a, 1e-9) && l.contains(&b.v, 1e-9) && lb.contains(&b.v_b, 1e-9));
        let m = MoveParams::new(0.5, 0.7, 1.5, -2.0, 0.2, 3.0);
        let (g, _) = f.family_member(&m).unwrap();
        let back = f.recover_params(&g).unwrap();
        for (x, y) in back.to_array().iter().zip(m.to_array()) {
            assert!((x - y).abs() < 1e-8, "{back:?} vs {m:?}");
        }
    }

    #[test]
    fn uncertified_base_is_rejected() {
        let oe = OrthoEnd::new([-1.5, 0.5, -1.0, 1.0, 3.0, 5.0].map(SpherePoint::real));
        assert!(matches!(
            PlanarFamily::from_ortho_end(&oe, [0.0; 3]),
            Err(Error::NotCertified(_))
        ));
    }
}
