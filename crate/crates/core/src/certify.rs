//! The non-separating disjoint circle test and its discreteness certificate.

use std::f64::consts::FRAC_PI_2;
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::circle::{GeneralizedCircle, PullbackPlane};
use crate::error::{Error, Result};
use crate::mobius::{c, MoebiusMap, C64};
use crate::orthoend::{MarkedGroup, OrthoEnd};
use crate::tolerance::Tolerances;

pub const CIRCLE_NAMES: [&str; 3] = ["C_A", "C_D", "C_B"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CircleRelation {
    Disjoint,
    Tangent,
    Overlapping,
    NestedDisjoint,
}

impl CircleRelation {
    /// Disjoint or tangent on the sphere.
    pub fn is_admissible(self) -> bool {
        self != CircleRelation::Overlapping
    }
}

impl fmt::Display for CircleRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            CircleRelation::Disjoint => "disjoint",
            CircleRelation::Tangent => "tangent",
            CircleRelation::Overlapping => "overlapping",
            CircleRelation::NestedDisjoint => "nested_disjoint",
        };
        f.write_str(s)
    }
}

/// Signed slack before two circles cross: positive when disjoint (side by
/// side or nested), zero at tangency, negative when they overlap.
pub fn overlap_margin(c1: &GeneralizedCircle, c2: &GeneralizedCircle) -> Result<f64> {
    let (z1, r1) = c1.center_radius()?;
    let (z2, r2) = c2.center_radius()?;
    let d = (z1 - z2).norm();
    Ok((d - (r1 + r2)).max((r1 - r2).abs() - d))
}

pub fn circle_relation(
    c1: &GeneralizedCircle,
    c2: &GeneralizedCircle,
    eps_tan: f64,
) -> Result<CircleRelation> {
    let (z1, r1) = c1.center_radius()?;
    let (z2, r2) = c2.center_radius()?;
    let d = (z1 - z2).norm();
    Ok(if d > r1 + r2 + eps_tan {
        CircleRelation::Disjoint
    } else if (d - (r1 + r2)).abs() <= eps_tan || (d - (r1 - r2).abs()).abs() <= eps_tan {
        CircleRelation::Tangent
    } else if d < (r1 - r2).abs() - eps_tan {
        CircleRelation::NestedDisjoint
    } else {
        CircleRelation::Overlapping
    })
}

/// Whether `inner` lies in the bounded disk of `outer` (both circles
/// assumed not to cross).
fn lies_inside(inner: (C64, f64), outer: (C64, f64)) -> bool {
    (inner.0 - outer.0).norm() < outer.1 && inner.1 < outer.1
}

/// True iff `c1` and `c2` sit in different complementary components of `c`.
pub fn separates(
    c: &GeneralizedCircle,
    c1: &GeneralizedCircle,
    c2: &GeneralizedCircle,
    eps_tan: f64,
) -> Result<bool> {
    for (x, y) in [(c, c1), (c, c2), (c1, c2)] {
        if circle_relation(x, y, eps_tan)? == CircleRelation::Overlapping {
            return Err(Error::SeparationUndefined);
        }
    }
    let outer = c.center_radius()?;
    let in1 = lies_inside(c1.center_radius()?, outer);
    let in2 = lies_inside(c2.center_radius()?, outer);
    Ok(in1 != in2)
}

/// A machine-checkable witness that an ortho-end has the non-separating
/// disjoint circle property.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NsdcCertificate {
    /// `C_A`, `C_D`, `C_B` in the input coordinates.
    pub circles: [GeneralizedCircle; 3],
    pub angles: [f64; 3],
    /// Relations of the pairs (C_A, C_D), (C_A, C_B), (C_D, C_B).
    pub pairwise: [CircleRelation; 3],
    pub margins: [f64; 3],
    /// Whether C_A, C_D, C_B (in turn) separates the other two; all false.
    pub separation: [bool; 3],
    /// Chart `z ↦ 1/(z − p)` used when the ortho-end contained ∞; the
    /// angles refer to that chart.
    #[serde(skip)]
    pub chart: Option<MoebiusMap>,
}

pub const PAIRS: [(usize, usize); 3] = [(0, 1), (0, 2), (1, 2)];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Failure {
    Overlap {
        pair: [String; 2],
        relation: CircleRelation,
        margin: f64,
    },
    Separation {
        separator: String,
        inside: String,
        outside: String,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FailureReport {
    pub angles: [f64; 3],
    pub failures: Vec<Failure>,
}

impl FailureReport {
    /// Whether a failure names both circles.
    pub fn blames(&self, first: &str, second: &str) -> bool {
        self.failures.iter().any(|f| match f {
            Failure::Overlap { pair, .. } => {
                (pair[0] == first && pair[1] == second) || (pair[0] == second && pair[1] == first)
            }
            Failure::Separation {
                separator,
                inside,
                outside,
            } => {
                let names = [separator.as_str(), inside.as_str(), outside.as_str()];
                names.contains(&first) && names.contains(&second)
            }
        })
    }

    pub fn has_overlap(&self) -> bool {
        self.failures
            .iter()
            .any(|f| matches!(f, Failure::Overlap { .. }))
    }

    pub fn has_separation(&self) -> bool {
        self.failures
            .iter()
            .any(|f| matches!(f, Failure::Separation { .. }))
    }
}

impl fmt::Display for FailureReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "no certificate at angles ({}, {}, {})",
            self.angles[0], self.angles[1], self.angles[2]
        )?;
        for failure in &self.failures {
            match failure {
                Failure::Overlap {
                    pair,
                    relation,
                    margin,
                } => writeln!(
                    f,
                    "  {}/{} {}, margin {:.6}",
                    pair[0], pair[1], relation, margin
                )?,
                Failure::Separation {
                    separator,
                    inside,
                    outside,
                } => writeln!(
                    f,
                    "  {separator} separates {inside} (inside) from {outside} (outside)"
                )?,
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub enum Certification {
    Certified(NsdcCertificate),
    Failed(FailureReport),
}

impl Certification {
    pub fn certificate(&self) -> Option<&NsdcCertificate> {
        match self {
            Certification::Certified(c) => Some(c),
            Certification::Failed(_) => None,
        }
    }

    pub fn failure(&self) -> Option<&FailureReport> {
        match self {
            Certification::Certified(_) => None,
            Certification::Failed(r) => Some(r),
        }
    }

    pub fn is_certified(&self) -> bool {
        matches!(self, Certification::Certified(_))
    }
}

/// Chart moving ∞ off the six-tuple: `z ↦ 1/(z − p)` with `p` away from
/// every finite entry.
fn chart_for(oe: &OrthoEnd) -> MoebiusMap {
    let spread = oe
        .points()
        .iter()
        .filter_map(|p| p.to_complex())
        .map(|z| z.norm())
        .fold(1.0, f64::max);
    let p = c(2.0 * spread + 1.0, 0.5 * spread + 0.25);
    MoebiusMap::normalized(c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), -p)
}

pub fn certify(oe: &OrthoEnd, theta_a: f64, theta: f64, theta_b: f64) -> Result<Certification> {
    certify_with(oe, [theta_a, theta, theta_b], &Tolerances::default())
}

pub fn certify_with(oe: &OrthoEnd, angles: [f64; 3], tol: &Tolerances) -> Result<Certification> {
    let (work, chart) = if oe.is_finite() {
        (*oe, None)
    } else {
        let g = chart_for(oe);
        (oe.image(&g), Some(g))
    };
    let lines = work.lines();
    let mut circles = [GeneralizedCircle::from_center_radius(c(0.0, 0.0), 1.0)?; 3];
    for (k, line) in lines.iter().enumerate() {
        circles[k] = PullbackPlane::through(line, angles[k])?.horizon();
    }
    let mut failures = Vec::new();
    let mut pairwise = [CircleRelation::Disjoint; 3];
    let mut margins = [0.0; 3];
    for (slot, &(i, j)) in PAIRS.iter().enumerate() {
        pairwise[slot] = circle_relation(&circles[i], &circles[j], tol.tan)?;
        margins[slot] = overlap_margin(&circles[i], &circles[j])?;
        if !pairwise[slot].is_admissible() {
            failures.push(Failure::Overlap {
                pair: [CIRCLE_NAMES[i].into(), CIRCLE_NAMES[j].into()],
                relation: pairwise[slot],
                margin: margins[slot],
            });
        }
    }
    let mut separation = [false; 3];
    if failures.is_empty() {
        for k in 0..3 {
            let (i, j) = ((k + 1) % 3, (k + 2) % 3);
            separation[k] = separates(&circles[k], &circles[i], &circles[j], tol.tan)?;
            if separation[k] {
                let outer = circles[k].center_radius()?;
                let (inside, outside) = if lies_inside(circles[i].center_radius()?, outer) {
                    (i, j)
                } else {
                    (j, i)
                };
                failures.push(Failure::Separation {
                    separator: CIRCLE_NAMES[k].into(),
                    inside: CIRCLE_NAMES[inside].into(),
                    outside: CIRCLE_NAMES[outside].into(),
                });
            }
        }
    }
    if !failures.is_empty() {
        return Ok(Certification::Failed(FailureReport { angles, failures }));
    }
    let circles = match chart {
        Some(g) => circles.map(|circ| circ.image(&g.inverse())),
        None => circles,
    };
    Ok(Certification::Certified(NsdcCertificate {
        circles,
        angles,
        pairwise,
        margins,
        separation,
        chart,
    }))
}

/// Angles tried by [`search_angles`] on each axis: `grid_n` points evenly
/// spaced strictly inside (−π/2, π/2).
pub fn angle_grid(grid_n: usize) -> Vec<f64> {
    let step = std::f64::consts::PI / (grid_n as f64 + 1.0);
    (1..=grid_n).map(|j| -FRAC_PI_2 + j as f64 * step).collect()
}

/// First angle triple (lexicographic in `(θ_A, θ, θ_B)`) on the grid whose
/// certification succeeds.
pub fn search_angles(oe: &OrthoEnd, grid_n: usize) -> Option<[f64; 3]> {
    search_angles_with(oe, grid_n, &Tolerances::default())
}

pub fn search_angles_with(oe: &OrthoEnd, grid_n: usize, tol: &Tolerances) -> Option<[f64; 3]> {
    let grid = angle_grid(grid_n.max(2));
    let n = grid.len();
    (0..n * n * n).into_par_iter().find_map_first(|idx| {
        let angles = [grid[idx / (n * n)], grid[(idx / n) % n], grid[idx % n]];
        match certify_with(oe, angles, tol) {
            Ok(Certification::Certified(_)) => Some(angles),
            _ => None,
        }
    })
}

/// Reduced words in `A, B, A⁻¹, B⁻¹` of length at most `max_len`,
/// including the empty word.
fn reduced_words(g: &MarkedGroup, max_len: usize) -> Vec<MoebiusMap> {
    let letters = [g.a(), g.b(), g.a().inverse(), g.b().inverse()];
    let mut out = vec![MoebiusMap::identity()];
    let mut frontier: Vec<(MoebiusMap, usize)> =
        letters.iter().enumerate().map(|(k, m)| (*m, k)).collect();
    for _ in 0..max_len {
        out.extend(frontier.iter().map(|(m, _)| *m));
        let mut next = Vec::with_capacity(frontier.len() * 3);
        for (m, last) in &frontier {
            for (k, letter) in letters.iter().enumerate() {
                if k == (last + 2) % 4 {
                    continue;
                }
                next.push((*m * *letter, k));
            }
        }
        frontier = next;
    }
    out
}

/// Jørgensen's quantity `|tr²X − 4| + |tr[X, Y] − 2|`.
pub fn jorgensen_quantity(x: &MoebiusMap, y: &MoebiusMap) -> f64 {
    let commutator = *x * *y * x.inverse() * y.inverse();
    let t = x.trace();
    (t * t - 4.0).norm() + (commutator.trace() - 2.0).norm()
}

/// Necessary condition for discreteness, checked on `(A, B)` and on the
/// pairs `(A, W B W⁻¹)`, `(B, W A W⁻¹)` for reduced words `W` of length at
/// most `max_word_len`. Pairs with a common fixed point (`tr[X,Y] = 2`)
/// generate elementary groups and are skipped.
pub fn jorgensen_witness(g: &MarkedGroup, max_word_len: usize) -> bool {
    const EPS: f64 = 1e-9;
    let (a, b) = (g.a(), g.b());
    reduced_words(g, max_word_len).iter().all(|w| {
        let w_inv = w.inverse();
        [(a, *w * b * w_inv), (b, *w * a * w_inv)]
            .iter()
            .all(|(x, y)| {
                let commutator = *x * *y * x.inverse() * y.inverse();
                if (commutator.trace() - 2.0).norm() < EPS {
                    return true;
                }
                jorgensen_quantity(x, y) >= 1.0 - EPS
            })
    })
}
