//! Skew right-angled hexagons, their cosine rule, and trace coordinates of
//! planar family members computed from move parameters.
//!
//! Side `s_i` carries the complex length `δ_i = along_distance(s_i; s_{i−1},
//! s_{i+1})`. With that convention
//!
//! ```text
//! cosh δ_{i+4} = cosh δ_i cosh δ_{i+2} + cosh δ_{i+1} sinh δ_i sinh δ_{i+2}
//! ```
//!
//! holds for every orientation of the six sides.

use nalgebra::{Matrix6, Vector6};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::circle::PullbackPlane;
use crate::error::{Error, Result};
use crate::family::{move_line, MoveParams, PlanarFamily};
use crate::geometry::{along_distance, common_perpendicular, half_turn, Geodesic};
use crate::mobius::{c, H3Point, C64};
use crate::orthoend::{decompose, MarkedGroup};

/// Normalize a complex length to `Im ∈ (−π, π]`.
pub fn normalize_length(delta: C64) -> C64 {
    c(delta.re, crate::normalize_angle(delta.im))
}

/// `2 cosh δ`.
pub fn trace_from_length(delta: C64) -> C64 {
    2.0 * delta.cosh()
}

/// `acosh` on the branch with `Re ≥ 0`, imaginary part in (−π, π].
pub fn acosh_branch(z: C64) -> C64 {
    let w = z.acosh();
    normalize_length(if w.re < 0.0 { -w } else { w })
}

#[derive(Debug, Clone, Copy)]
pub struct SkewHexagon {
    pub sides: [Geodesic; 6],
    pub lengths: [C64; 6],
}

impl SkewHexagon {
    /// Hexagon on the given sides, each consecutive pair meeting at right
    /// angles.
    pub fn from_sides(sides: [Geodesic; 6]) -> Result<Self> {
        let mut lengths = [C64::default(); 6];
        for i in 0..6 {
            let delta = along_distance(&sides[i], &sides[(i + 5) % 6], &sides[(i + 1) % 6])?;
            lengths[i] = normalize_length(delta);
        }
        Ok(Self { sides, lengths })
    }

    /// Reverse every side whose length has negative real part.
    fn traversed(self) -> Result<Self> {
        let mut sides = self.sides;
        for i in 0..6 {
            if self.lengths[i].re < 0.0 {
                sides[i] = sides[i].reversed();
            }
        }
        Self::from_sides(sides)
    }

    /// `cosh δ_{i+4} − [cosh δ_i cosh δ_{i+2} + cosh δ_{i+1} sinh δ_i sinh δ_{i+2}]`.
    pub fn cosine_rule_residual(&self, i: usize) -> C64 {
        cosine_residual(&self.lengths, i)
    }

    pub fn max_cosine_residual(&self) -> f64 {
        (0..6)
            .map(|i| self.cosine_rule_residual(i).norm())
            .fold(0.0, f64::max)
    }

    /// Residuals divided by the size of the largest term in each rule, for
    /// hexagons with long sides.
    pub fn max_relative_cosine_residual(&self) -> f64 {
        let d = &self.lengths;
        let at = |k: usize| d[k % 6];
        (0..6)
            .map(|i| {
                let scale = [
                    at(i + 4).cosh().norm(),
                    (at(i).cosh() * at(i + 2).cosh()).norm(),
                    (at(i + 1).cosh() * at(i).sinh() * at(i + 2).sinh()).norm(),
                ]
                .into_iter()
                .fold(1.0, f64::max);
                cosine_residual(d, i).norm() / scale
            })
            .fold(0.0, f64::max)
    }

    /// Largest `|tr(H_{s_i} H_{s_{i+1}})|`, which vanishes for orthogonal
    /// consecutive sides.
    pub fn orthogonality_defect(&self) -> Result<f64> {
        let mut worst: f64 = 0.0;
        for i in 0..6 {
            let t = (half_turn(&self.sides[i])? * half_turn(&self.sides[(i + 1) % 6])?).trace();
            worst = worst.max(t.re.abs());
        }
        Ok(worst)
    }
}

fn cosine_residual(d: &[C64; 6], i: usize) -> C64 {
    let at = |k: usize| d[k % 6];
    at(i + 4).cosh()
        - (at(i).cosh() * at(i + 2).cosh() + at(i + 1).cosh() * at(i).sinh() * at(i + 2).sinh())
}

fn max_residual(d: &[C64; 6]) -> f64 {
    (0..6)
        .map(|i| cosine_residual(d, i).norm())
        .fold(0.0, f64::max)
}

/// The hexagon with sides `L_A, Ax_A, L, Ax_B, L_B, Ax_{AB⁻¹}`, each side
/// oriented so that its length has non-negative real part.
pub fn hexagon_of(g: &MarkedGroup) -> Result<SkewHexagon> {
    let (t, _) = decompose(g)?;
    let ax_a = common_perpendicular(&t.l_a, &t.l).map_err(Error::at("Ax_A"))?;
    let ax_b = common_perpendicular(&t.l, &t.l_b).map_err(Error::at("Ax_B"))?;
    let ax_c = common_perpendicular(&t.l_b, &t.l_a).map_err(Error::at("Ax_AB^-1"))?;
    if ax_c.is_improper() || ax_a.is_improper() || ax_b.is_improper() {
        return Err(Error::PerpendicularNotUnique);
    }
    SkewHexagon::from_sides([t.l_a, ax_a, t.l, ax_b, t.l_b, ax_c])?.traversed()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Pattern {
    /// Known lengths at positions 1, 3, 5.
    Alternating,
    /// Known lengths at positions 1, 2, 3.
    Adjacent,
}

fn divide(num: C64, den: C64, what: &str) -> Result<C64> {
    if den.norm() < 1e-12 {
        return Err(Error::IndeterminateCompletion(format!(
            "sinh vanishes in {what}"
        )));
    }
    Ok(num / den)
}

fn complete_alternating(d1: C64, d3: C64, d5: C64) -> Result<[C64; 6]> {
    let ch2 = divide(
        d5.cosh() - d1.cosh() * d3.cosh(),
        d1.sinh() * d3.sinh(),
        "δ₂",
    )?;
    let ch4 = divide(
        d1.cosh() - d3.cosh() * d5.cosh(),
        d3.sinh() * d5.sinh(),
        "δ₄",
    )?;
    let ch6 = divide(
        d3.cosh() - d5.cosh() * d1.cosh(),
        d5.sinh() * d1.sinh(),
        "δ₆",
    )?;
    let (e2, e4, e6) = (acosh_branch(ch2), acosh_branch(ch4), acosh_branch(ch6));
    // flipping all three unknown signs leaves every rule unchanged, so δ₂
    // keeps its principal branch
    let mut best = None;
    for s4 in [1.0, -1.0] {
        for s6 in [1.0, -1.0] {
            let cand = [d1, e2, d3, e4 * s4, d5, e6 * s6].map(normalize_length);
            let r = max_residual(&cand);
            if best.is_none_or(|(br, _)| r < br) {
                best = Some((r, cand));
            }
        }
    }
    Ok(best.expect("four candidates").1)
}

/// The remaining three complex lengths from three known ones.
pub fn complete_hexagon(known: [C64; 3], pattern: Pattern) -> Result<[C64; 6]> {
    match pattern {
        Pattern::Alternating => complete_alternating(known[0], known[1], known[2]),
        Pattern::Adjacent => {
            let [d1, d2, d3] = known;
            let ch5 = d1.cosh() * d3.cosh() + d2.cosh() * d1.sinh() * d3.sinh();
            let e5 = acosh_branch(ch5);
            let mut best: Option<(f64, [C64; 6])> = None;
            for s5 in [1.0, -1.0] {
                let mut cand = complete_alternating(d1, d3, e5 * s5)?;
                if (cand[1] - d2).norm() > (cand[1] + d2).norm() {
                    for k in [1, 3, 5] {
                        cand[k] = normalize_length(-cand[k]);
                    }
                }
                let r = max_residual(&cand)
                    + (cand[1].cosh() - d2.cosh()).norm()
                    + (cand[1].sinh() - d2.sinh()).norm();
                if best.is_none_or(|(br, _)| r < br) {
                    best = Some((r, cand));
                }
            }
            let mut out = best.expect("two candidates").1;
            out[1] = normalize_length(d2);
            Ok(out)
        }
    }
}

/// Classical coordinates `(tr A, tr B, tr AB⁻¹)`, each meaningful up to
/// sign.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TraceCoords {
    pub tr_a: C64,
    pub tr_b: C64,
    pub tr_ab_inv: C64,
}

impl TraceCoords {
    pub fn of_group(g: &MarkedGroup) -> Self {
        Self {
            tr_a: g.a().trace(),
            tr_b: g.b().trace(),
            tr_ab_inv: g.a_b_inv().trace(),
        }
    }

    pub fn to_array(&self) -> [C64; 3] {
        [self.tr_a, self.tr_b, self.tr_ab_inv]
    }

    /// `(Re, Im)` of the three traces.
    pub fn to_reals(&self) -> [f64; 6] {
        [
            self.tr_a.re,
            self.tr_a.im,
            self.tr_b.re,
            self.tr_b.im,
            self.tr_ab_inv.re,
            self.tr_ab_inv.im,
        ]
    }

    /// Largest entrywise difference after the best sign choice per entry.
    pub fn deviation_up_to_sign(&self, other: &TraceCoords) -> f64 {
        self.to_array()
            .iter()
            .zip(other.to_array())
            .map(|(x, y)| (x - y).norm().min((x + y).norm()))
            .fold(0.0, f64::max)
    }
}

/// Matrix traces of a family member, for comparison with the hexagon route.
pub fn matrix_trace_coords(f: &PlanarFamily, m: &MoveParams) -> Result<TraceCoords> {
    let (g, _) = f.family_member(m)?;
    Ok(TraceCoords::of_group(&g))
}

/// `cosh` of the complex distance from `fixed` to the line obtained by
/// moving `base_line` by `(d, τ)` on `plane` at `point`.
///
/// Uses the hexagon with sides `fixed, N, V, X, moved, ·`: `V` is the
/// normal at `point`, `N` the common perpendicular of `fixed` and `V`, and
/// `X` the translation axis. The move enters only through
/// `δ(V) = δ₀(V) + iτ` and `δ(X) = δ₀(X) + d`; when `fixed` meets `V` the
/// side `N` has length `±iπ/2` and the hexagon degenerates to a pentagon.
fn moved_cosh_distance(
    plane: &PullbackPlane,
    base_line: &Geodesic,
    point: &H3Point,
    fixed: &Geodesic,
    d: f64,
    tau: f64,
) -> Result<C64> {
    let v = plane.perpendicular_at(point)?;
    let m = plane.in_plane_perpendicular(base_line, point)?;
    let n = common_perpendicular(fixed, &v)?;
    if n.is_improper() {
        return Err(Error::PerpendicularNotUnique);
    }
    let s_n = along_distance(&n, fixed, &v)?;
    let s_v = along_distance(&v, &n, &m)? + c(0.0, tau);
    let s_x = along_distance(&m, &v, base_line)? + d;
    Ok(s_n.cosh() * s_x.cosh() + s_v.cosh() * s_n.sinh() * s_x.sinh())
}

/// `tr A′` after moving only `L_A` by `(d_A, τ_A)`.
pub fn pentagon_traces(f: &PlanarFamily, d_a: f64, tau_a: f64) -> Result<C64> {
    let [l_a, l, _] = f.base_lines();
    let cosh = moved_cosh_distance(&f.planes()[0], &l_a, &f.base_points().v_a, &l, d_a, tau_a)
        .map_err(Error::at("pentagon for L_A"))?;
    Ok(-2.0 * cosh)
}

/// Trace coordinates of the member reached by `m`, from hexagon
/// trigonometry alone.
///
/// `L_A` moves first, then `L_B` (distance to `L_{A′}` gives `tr A′B′⁻¹`),
/// then `L` (distances to `L_{A′}` and `L_{B′}` give `tr A′`, `tr B′`).
/// Signs agree with the matrices of [`PlanarFamily::family_member`].
pub fn trace_coords_via_moves(f: &PlanarFamily, m: &MoveParams) -> Result<TraceCoords> {
    let cosh = trace_cosh_via_moves(f, m)?;
    Ok(TraceCoords {
        tr_a: -2.0 * cosh[0],
        tr_b: -2.0 * cosh[1],
        tr_ab_inv: 2.0 * cosh[2],
    })
}

/// `cosh` of the distances `(L_{A′}, L′)`, `(L_{B′}, L′)`, `(L_{A′}, L_{B′})`.
fn trace_cosh_via_moves(f: &PlanarFamily, m: &MoveParams) -> Result<[C64; 3]> {
    let [p_a, p, p_b] = f.planes();
    let [l_a, l, l_b] = f.base_lines();
    let base = f.base_points();
    let l_a2 = move_line(p_a, &l_a, &base.v_a, m.d_a, m.tau_a).map_err(Error::at("move L_A"))?;
    let cosh_ab = moved_cosh_distance(p_b, &l_b, &base.v_b, &l_a2, m.d_b, m.tau_b)
        .map_err(Error::at("hexagon L_A', L_B'"))?;
    let l_b2 = move_line(p_b, &l_b, &base.v_b, m.d_b, m.tau_b).map_err(Error::at("move L_B"))?;
    let cosh_a = moved_cosh_distance(p, &l, &base.v, &l_a2, m.d, m.tau)
        .map_err(Error::at("hexagon L_A', L'"))?;
    let cosh_b = moved_cosh_distance(p, &l, &base.v, &l_b2, m.d, m.tau)
        .map_err(Error::at("hexagon L_B', L'"))?;
    Ok([cosh_a, cosh_b, cosh_ab])
}

/// Complex lengths of the member's hexagon `L_{A′}, Ax_{A′}, L′, Ax_{B′},
/// L_{B′}, Ax_{A′B′⁻¹}`, completing from the three axis lengths.
pub fn hexagon_lengths_via_moves(f: &PlanarFamily, m: &MoveParams) -> Result<[C64; 6]> {
    let [cosh_a, cosh_b, cosh_ab] = trace_cosh_via_moves(f, m)?;
    let known = [
        acosh_branch(cosh_a),
        acosh_branch(cosh_b),
        acosh_branch(cosh_ab),
    ];
    // positions Ax_A, Ax_B, Ax_AB⁻¹ are alternating; rotate so they come first
    let rotated =
        complete_hexagon(known, Pattern::Alternating).map_err(Error::at("complete hexagon"))?;
    Ok([
        rotated[5], rotated[0], rotated[1], rotated[2], rotated[3], rotated[4],
    ])
}

/// Trace coordinates of a batch of moves, in order.
pub fn classical_embedding(f: &PlanarFamily, samples: &[MoveParams]) -> Result<Vec<TraceCoords>> {
    samples
        .par_iter()
        .map(|m| trace_coords_via_moves(f, m))
        .collect()
}

/// Central-difference Jacobian of `MoveParams ↦ (Re, Im)` of the traces.
pub fn trace_jacobian(f: &PlanarFamily, m: &MoveParams, step: f64) -> Result<Matrix6<f64>> {
    let x = m.to_array();
    let eval = |v: [f64; 6]| -> Result<Vector6<f64>> {
        let p = MoveParams {
            d_a: v[0],
            tau_a: v[1],
            d: v[2],
            tau: v[3],
            d_b: v[4],
            tau_b: v[5],
        };
        Ok(Vector6::from(trace_coords_via_moves(f, &p)?.to_reals()))
    };
    let mut j = Matrix6::zeros();
    for k in 0..6 {
        let (mut plus, mut minus) = (x, x);
        plus[k] += step;
        minus[k] -= step;
        let col = (eval(plus)? - eval(minus)?) / (2.0 * step);
        j.set_column(k, &col);
    }
    Ok(j)
}

pub fn singular_values(j: &Matrix6<f64>) -> [f64; 6] {
    let mut s: Vec<f64> = j.singular_values().iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    [s[0], s[1], s[2], s[3], s[4], s[5]]
}

/// Number of singular values above `tol`.
pub fn numerical_rank(j: &Matrix6<f64>, tol: f64) -> usize {
    singular_values(j).iter().filter(|&&s| s > tol).count()
}

/// Half-turn trace relation `tr A = ±2 cosh δ(Ax_A)` residual, for checks.
pub fn axis_trace_defect(g: &MarkedGroup, h: &SkewHexagon) -> f64 {
    let want = [g.a().trace(), g.b().trace(), g.a_b_inv().trace()];
    let have = [h.lengths[1], h.lengths[3], h.lengths[5]].map(trace_from_length);
    want.iter()
        .zip(have)
        .map(|(x, y)| (x - y).norm().min((x + y).norm()))
        .fold(0.0, f64::max)
}
