//! Splitting a marked group into half-turns about three lines, and back.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{common_perpendicular, half_turn, Geodesic};
use crate::mobius::{MoebiusMap, SpherePoint};
use crate::tolerance::EPS_EQ;

/// Ends `(a, a′, n, n′, b, b′)` of the lines `L_A`, `L`, `L_B`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrthoEnd {
    pub a: SpherePoint,
    pub a_prime: SpherePoint,
    pub n: SpherePoint,
    pub n_prime: SpherePoint,
    pub b: SpherePoint,
    pub b_prime: SpherePoint,
}

impl OrthoEnd {
    pub fn new(points: [SpherePoint; 6]) -> Self {
        let [a, a_prime, n, n_prime, b, b_prime] = points;
        Self {
            a,
            a_prime,
            n,
            n_prime,
            b,
            b_prime,
        }
    }

    pub fn from_lines(l_a: &Geodesic, l: &Geodesic, l_b: &Geodesic) -> Self {
        Self::new([
            l_a.start(),
            l_a.stop(),
            l.start(),
            l.stop(),
            l_b.start(),
            l_b.stop(),
        ])
    }

    pub fn points(&self) -> [SpherePoint; 6] {
        [
            self.a,
            self.a_prime,
            self.n,
            self.n_prime,
            self.b,
            self.b_prime,
        ]
    }

    pub fn l_a(&self) -> Geodesic {
        Geodesic::new(self.a, self.a_prime)
    }

    pub fn l(&self) -> Geodesic {
        Geodesic::new(self.n, self.n_prime)
    }

    pub fn l_b(&self) -> Geodesic {
        Geodesic::new(self.b, self.b_prime)
    }

    pub fn lines(&self) -> [Geodesic; 3] {
        [self.l_a(), self.l(), self.l_b()]
    }

    pub fn is_finite(&self) -> bool {
        self.points().iter().all(|p| !p.is_infinite())
    }

    pub fn image(&self, m: &MoebiusMap) -> Self {
        Self::new(self.points().map(|p| m.apply_sphere(&p)))
    }
}

/// A marked two-generator group `⟨A, B⟩`.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(try_from = "GeneratorPair", into = "GeneratorPair")]
pub struct MarkedGroup {
    gen_a: MoebiusMap,
    gen_b: MoebiusMap,
}

impl MarkedGroup {
    pub fn new(gen_a: MoebiusMap, gen_b: MoebiusMap) -> Result<Self> {
        if gen_a.is_identity(EPS_EQ) || gen_b.is_identity(EPS_EQ) {
            return Err(Error::DegenerateGenerator);
        }
        let (ax_a, ax_b) = (gen_a.axis()?.line, gen_b.axis()?.line);
        if ax_a.same_line(&ax_b, EPS_EQ) {
            return Err(Error::PerpendicularNotUnique);
        }
        Ok(Self { gen_a, gen_b })
    }

    pub fn a(&self) -> MoebiusMap {
        self.gen_a
    }

    pub fn b(&self) -> MoebiusMap {
        self.gen_b
    }

    /// `⟨g A g⁻¹, g B g⁻¹⟩`.
    pub fn conjugate_by(&self, g: &MoebiusMap) -> Self {
        Self {
            gen_a: self.gen_a.conjugate_by(g),
            gen_b: self.gen_b.conjugate_by(g),
        }
    }

    /// `A B⁻¹`.
    pub fn a_b_inv(&self) -> MoebiusMap {
        self.gen_a * self.gen_b.inverse()
    }

    /// The marked pair, compared up to the sign of each generator.
    pub fn approx_eq(&self, other: &MarkedGroup, tol: f64) -> bool {
        self.gen_a.approx_eq(&other.gen_a, tol) && self.gen_b.approx_eq(&other.gen_b, tol)
    }
}

// serde helper so deserialized groups are validated
#[derive(Serialize, Deserialize)]
struct GeneratorPair {
    a: [[f64; 2]; 4],
    b: [[f64; 2]; 4],
}

impl From<MarkedGroup> for GeneratorPair {
    fn from(g: MarkedGroup) -> Self {
        let flat = |m: MoebiusMap| m.entries().map(|z| [z.re, z.im]);
        Self {
            a: flat(g.gen_a),
            b: flat(g.gen_b),
        }
    }
}

impl TryFrom<GeneratorPair> for MarkedGroup {
    type Error = Error;

    fn try_from(p: GeneratorPair) -> Result<Self> {
        let build = |e: [[f64; 2]; 4]| {
            let z = e.map(|[re, im]| crate::mobius::c(re, im));
            MoebiusMap::new(z[0], z[1], z[2], z[3])
        };
        MarkedGroup::new(build(p.a)?, build(p.b)?)
    }
}

/// `𝕋G = ⟨H_{L_A}, H_L, H_{L_B}⟩` together with its lines.
#[derive(Debug, Clone, Copy)]
pub struct ThreeGenGroup {
    pub h_a: MoebiusMap,
    pub h: MoebiusMap,
    pub h_b: MoebiusMap,
    pub l_a: Geodesic,
    pub l: Geodesic,
    pub l_b: Geodesic,
}

impl ThreeGenGroup {
    pub fn from_lines(l_a: Geodesic, l: Geodesic, l_b: Geodesic) -> Result<Self> {
        Ok(Self {
            h_a: half_turn(&l_a)?,
            h: half_turn(&l)?,
            h_b: half_turn(&l_b)?,
            l_a,
            l,
            l_b,
        })
    }

    pub fn ortho_end(&self) -> OrthoEnd {
        OrthoEnd::from_lines(&self.l_a, &self.l, &self.l_b)
    }

    pub fn marked_group(&self) -> Result<MarkedGroup> {
        compose(&self.l_a, &self.l, &self.l_b)
    }
}

/// Orient `line` like `reference` when the two are the same line.
fn align(line: Geodesic, reference: Result<Geodesic>) -> Geodesic {
    match reference {
        Ok(r) if !r.is_improper() && line.approx_eq(&r.reversed(), 1e-7) => line.reversed(),
        _ => line,
    }
}

/// Involution `g · H_L` and its fixed line, checking the trace vanishes.
fn partner_line(g: &MoebiusMap, h_l: &MoebiusMap) -> Result<Geodesic> {
    let inv = *g * *h_l;
    let scale = inv.entries().iter().map(|z| z.norm()).fold(1.0, f64::max);
    if inv.trace().norm() > 1e-7 * scale {
        return Err(Error::Consistency(format!(
            "g·H_L is not an involution (trace {})",
            inv.trace()
        )));
    }
    Ok(inv.axis()?.line)
}

/// `G ↦ (𝕋G, ortho-end)`.
///
/// `L` is the common perpendicular of the axes, oriented from `Ax_A` to
/// `Ax_B`; `L_A` runs from `Ax_A` towards `Ax_{AB⁻¹}` and `L_B` from
/// `Ax_{AB⁻¹}` towards `Ax_B` whenever those perpendiculars are defined.
pub fn decompose(g: &MarkedGroup) -> Result<(ThreeGenGroup, OrthoEnd)> {
    let ax_a = g.a().axis()?.line;
    let ax_b = g.b().axis()?.line;
    let l = common_perpendicular(&ax_a, &ax_b)?;
    if l.is_improper() {
        return Err(Error::PerpendicularNotUnique);
    }
    let h_l = half_turn(&l)?;
    let mut l_a = partner_line(&g.a(), &h_l)?;
    let mut l_b = partner_line(&g.b(), &h_l)?;
    if let Ok(ax_c) = g.a_b_inv().axis().map(|a| a.line) {
        l_a = align(l_a, common_perpendicular(&ax_a, &ax_c));
        l_b = align(l_b, common_perpendicular(&ax_c, &ax_b));
    }
    let t = ThreeGenGroup::from_lines(l_a, l, l_b)?;
    let tol = 1e-7
        * g.a()
            .entries()
            .iter()
            .chain(g.b().entries().iter())
            .map(|z| z.norm())
            .fold(1.0, f64::max);
    if !(t.h_a * t.h).approx_eq(&g.a(), tol) || !(t.h_b * t.h).approx_eq(&g.b(), tol) {
        return Err(Error::Consistency(
            "half-turn factorization does not reproduce G".into(),
        ));
    }
    let oe = t.ortho_end();
    Ok((t, oe))
}

/// `(L_A, L, L_B) ↦ ⟨H_{L_A} H_L, H_{L_B} H_L⟩`.
pub fn compose(l_a: &Geodesic, l: &Geodesic, l_b: &Geodesic) -> Result<MarkedGroup> {
    let h = half_turn(l)?;
    let a = half_turn(l_a)? * h;
    let b = half_turn(l_b)? * h;
    if a.is_identity(EPS_EQ) || b.is_identity(EPS_EQ) {
        return Err(Error::DegenerateGenerator);
    }
    MarkedGroup::new(a, b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::common_perpendicular;
    use crate::mobius::c;

    fn real_ends(l: &Geodesic) -> [f64; 2] {
        let mut e = [
            l.start().to_complex().unwrap().re,
            l.stop().to_complex().unwrap().re,
        ];
        e.sort_by(f64::total_cmp);
        e
    }

    #[test]
    fn decompose_diagonal_generator() {
        let a = MoebiusMap::from_real([[3.0, 0.0], [0.0, 1.0 / 3.0]]).unwrap();
        // any B with axis [1, 4]
        let axis_b = Geodesic::between(1.0, 4.0);
        let b = crate::geometry::translation_along(&axis_b, 0.7).unwrap();
        let g = MarkedGroup::new(a, b).unwrap();
        let (t, _) = decompose(&g).unwrap();
        let e = real_ends(&t.l);
        assert!((e[0] + 2.0).abs() < 1e-12 && (e[1] - 2.0).abs() < 1e-12);
        let e = real_ends(&t.l_a);
        assert!((e[0] + 6.0).abs() < 1e-12 && (e[1] - 6.0).abs() < 1e-12);
        // L oriented from Ax_A towards Ax_B
        let expected = common_perpendicular(&a.axis().unwrap().line, &axis_b).unwrap();
        assert!(t.l.approx_eq(&expected, 1e-12));
    }

    #[test]
    fn compose_examples() {
        let g = compose(
            &Geodesic::between(-6.0, 6.0),
            &Geodesic::between(-2.0, 2.0),
            &Geodesic::between(3.0, 5.0),
        )
        .unwrap();
        let diag = MoebiusMap::from_real([[3.0, 0.0], [0.0, 1.0 / 3.0]]).unwrap();
        assert!(g.a().approx_eq(&diag, 1e-12));

        let g = compose(
            &Geodesic::between(-5.0, -3.0),
            &Geodesic::between(-1.0, 1.0),
            &Geodesic::between(3.0, 5.0),
        )
        .unwrap();
        for z in g.a().entries() {
            assert!(z.im.abs() < 1e-12 || z.re.abs() < 1e-12);
        }
        let r3 = 3f64.sqrt();
        let e = real_ends(&g.a().axis().unwrap().line);
        assert!((e[0] + 2.0 + r3).abs() < 1e-12 && (e[1] + 2.0 - r3).abs() < 1e-12);

        let l = Geodesic::between(-1.0, 1.0);
        assert_eq!(
            compose(&l, &l, &Geodesic::between(3.0, 5.0)).unwrap_err(),
            Error::DegenerateGenerator
        );
        assert_eq!(
            compose(&Geodesic::between(2.0, 2.0), &l, &l).unwrap_err(),
            Error::ImproperLine
        );
    }

    #[test]
    fn round_trip_lines() {
        let lines = [
            Geodesic::between(c(-4.0, 1.0), c(-3.0, -0.5)),
            Geodesic::between(c(-0.5, 0.2), c(1.1, -0.3)),
            Geodesic::between(c(3.0, 2.0), c(4.5, 1.0)),
        ];
        let g = compose(&lines[0], &lines[1], &lines[2]).unwrap();
        let (t, oe) = decompose(&g).unwrap();
        assert!(t.l_a.same_line(&lines[0], 1e-9));
        assert!(t.l.same_line(&lines[1], 1e-9));
        assert!(t.l_b.same_line(&lines[2], 1e-9));
        assert!(oe.l_a().same_line(&lines[0], 1e-9));
        assert!(t.marked_group().unwrap().approx_eq(&g, 1e-9));
    }

    #[test]
    fn serde_validates() {
        let g = compose(
            &Geodesic::between(-5.0, -3.0),
            &Geodesic::between(-1.0, 1.0),
            &Geodesic::between(3.0, 5.0),
        )
        .unwrap();
        let json = serde_json::to_string(&g).unwrap();
        let back: MarkedGroup = serde_json::from_str(&json).unwrap();
        assert!(back.approx_eq(&g, 1e-12));
        let bad = r#"{"a":[[1,0],[0,0],[0,0],[1,0]],"b":[[2,0],[0,0],[0,0],[0.5,0]]}"#;
        assert!(serde_json::from_str::<MarkedGroup>(bad).is_err());
    }
}
