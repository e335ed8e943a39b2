//! Input documents, command implementations, CSV sweeps and SVG rendering.
//!
//! Commands return an [`Outcome`] (exit code plus text) so they can be
//! driven from tests as well as from the `nsdc` binary.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Write;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::certify::{
    certify_with, search_angles_with, Certification, CircleRelation, Failure, CIRCLE_NAMES, PAIRS,
};
use crate::circle::{GeneralizedCircle, PullbackPlane};
use crate::error::{Error, Result};
use crate::family::{MoveParams, PlanarFamily};
use crate::hexagon::{
    matrix_trace_coords, numerical_rank, singular_values, trace_coords_via_moves, trace_jacobian,
};
use crate::mobius::{c, MoebiusMap, SpherePoint, C64};
use crate::orthoend::{decompose, MarkedGroup, OrthoEnd};
use crate::tolerance::Tolerances;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_MATH: i32 = 2;

/// Angle grid size used when only generators are given.
pub const DEFAULT_GRID: usize = 9;

/// A boundary point as written in input files: `[re, im]` or `"inf"`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
enum PointRepr {
    Pair([f64; 2]),
    Token(String),
}

impl PointRepr {
    fn from_point(p: &SpherePoint) -> Self {
        match p.to_complex() {
            Some(z) => PointRepr::Pair([z.re, z.im]),
            None => PointRepr::Token("inf".into()),
        }
    }

    fn to_point(&self) -> Result<SpherePoint> {
        match self {
            PointRepr::Pair([re, im]) if re.is_finite() && im.is_finite() => {
                Ok(SpherePoint::finite(c(*re, *im)))
            }
            PointRepr::Pair(_) => Err(Error::Input(
                "non-finite coordinate; write \"inf\" for ∞".into(),
            )),
            PointRepr::Token(t) if t == "inf" => Ok(SpherePoint::infinity()),
            PointRepr::Token(t) => Err(Error::Input(format!("unknown point token `{t}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AxisRange {
    pub lo: f64,
    pub hi: f64,
    pub count: usize,
}

impl AxisRange {
    pub fn values(&self) -> Vec<f64> {
        if self.count <= 1 {
            return vec![self.lo];
        }
        let step = (self.hi - self.lo) / (self.count - 1) as f64;
        (0..self.count).map(|k| self.lo + k as f64 * step).collect()
    }
}

/// Grid over the six move parameters; rows run in lexicographic order with
/// `d_a` varying slowest.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub d_a: AxisRange,
    pub tau_a: AxisRange,
    pub d: AxisRange,
    pub tau: AxisRange,
    pub d_b: AxisRange,
    pub tau_b: AxisRange,
}

impl SweepSpec {
    /// `n` points per axis, `d ∈ [0, 1]` and `τ ∈ [−π/2, π/2]`.
    pub fn uniform(n: usize) -> Self {
        let d = AxisRange {
            lo: 0.0,
            hi: 1.0,
            count: n,
        };
        let t = AxisRange {
            lo: -std::f64::consts::FRAC_PI_2,
            hi: std::f64::consts::FRAC_PI_2,
            count: n,
        };
        Self {
            d_a: d,
            tau_a: t,
            d,
            tau: t,
            d_b: d,
            tau_b: t,
        }
    }

    pub fn axes(&self) -> [AxisRange; 6] {
        [self.d_a, self.tau_a, self.d, self.tau, self.d_b, self.tau_b]
    }

    pub fn validate(&self) -> Result<()> {
        for (k, axis) in self.axes().iter().enumerate() {
            if axis.count == 0 {
                return Err(Error::Input(format!(
                    "sweep axis {} has count 0",
                    COLUMNS[k]
                )));
            }
            if !(axis.lo.is_finite() && axis.hi.is_finite()) || axis.lo > axis.hi {
                return Err(Error::Input(format!(
                    "sweep axis {} has a bad range",
                    COLUMNS[k]
                )));
            }
            let ok = if k % 2 == 0 {
                axis.lo >= 0.0
            } else {
                axis.lo > -std::f64::consts::PI && axis.hi <= std::f64::consts::PI
            };
            if !ok {
                return Err(Error::Input(format!(
                    "sweep axis {} leaves the move domain",
                    COLUMNS[k]
                )));
            }
        }
        Ok(())
    }

    pub fn points(&self) -> Vec<MoveParams> {
        let axes = self.axes().map(|a| a.values());
        let mut out = Vec::with_capacity(axes.iter().map(Vec::len).product());
        let mut idx = [0usize; 6];
        loop {
            let v: [f64; 6] = std::array::from_fn(|k| axes[k][idx[k]]);
            out.push(MoveParams {
                d_a: v[0],
                tau_a: v[1],
                d: v[2],
                tau: v[3],
                d_b: v[4],
                tau_b: v[5],
            });
            let mut k = 6;
            loop {
                if k == 0 {
                    return out;
                }
                k -= 1;
                idx[k] += 1;
                if idx[k] < axes[k].len() {
                    break;
                }
                idx[k] = 0;
            }
        }
    }
}

#[derive(Debug, Clone)]
pub enum GroupInput {
    OrthoEnd {
        points: [SpherePoint; 6],
        angles: Option<[f64; 3]>,
    },
    Generators {
        group: MarkedGroup,
        angles: Option<[f64; 3]>,
    },
}

/// A parsed input document.
#[derive(Debug, Clone)]
pub struct GroupSpec {
    pub input: GroupInput,
    pub tolerances: BTreeMap<String, f64>,
    pub sweep: Option<SweepSpec>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpec {
    #[serde(skip_serializing_if = "Option::is_none")]
    ortho_end: Option<Vec<PointRepr>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    generators: Option<MarkedGroup>,
    #[serde(skip_serializing_if = "Option::is_none")]
    angles: Option<[f64; 3]>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    tolerances: BTreeMap<String, f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    sweep: Option<SweepSpec>,
}

impl GroupSpec {
    pub fn parse(text: &str) -> Result<Self> {
        let raw: RawSpec = serde_json::from_str(text).map_err(|e| Error::Input(e.to_string()))?;
        let input = match (raw.ortho_end, raw.generators) {
            (Some(points), None) => {
                if points.len() != 6 {
                    return Err(Error::Input(format!(
                        "ortho_end needs 6 points, got {}",
                        points.len()
                    )));
                }
                let mut out = [SpherePoint::infinity(); 6];
                for (k, p) in points.iter().enumerate() {
                    out[k] = p
                        .to_point()
                        .map_err(|e| Error::Input(format!("ortho_end[{k}]: {e}")))?;
                }
                GroupInput::OrthoEnd {
                    points: out,
                    angles: raw.angles,
                }
            }
            (None, Some(group)) => GroupInput::Generators {
                group,
                angles: raw.angles,
            },
            (Some(_), Some(_)) => {
                return Err(Error::Input(
                    "give either ortho_end or generators, not both".into(),
                ))
            }
            (None, None) => return Err(Error::Input("missing ortho_end or generators".into())),
        };
        let spec = Self {
            input,
            tolerances: raw.tolerances,
            sweep: raw.sweep,
        };
        spec.tolerances()?;
        if let Some(s) = &spec.sweep {
            s.validate()?;
        }
        Ok(spec)
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Input(format!("{}: {e}", path.display())))?;
        Self::parse(&text).map_err(|e| match e {
            Error::Input(msg) => Error::Input(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    pub fn to_json(&self) -> String {
        let (ortho_end, generators, angles) = match &self.input {
            GroupInput::OrthoEnd { points, angles } => (
                Some(points.iter().map(PointRepr::from_point).collect()),
                None,
                *angles,
            ),
            GroupInput::Generators { group, angles } => (None, Some(*group), *angles),
        };
        let raw = RawSpec {
            ortho_end,
            generators,
            angles,
            tolerances: self.tolerances.clone(),
            sweep: self.sweep,
        };
        serde_json::to_string_pretty(&raw).expect("plain data serializes")
    }

    pub fn tolerances(&self) -> Result<Tolerances> {
        let mut tol = Tolerances::default();
        for (name, value) in &self.tolerances {
            tol.set(name, *value)?;
        }
        Ok(tol)
    }

    pub fn angles(&self) -> Option<[f64; 3]> {
        match &self.input {
            GroupInput::OrthoEnd { angles, .. } | GroupInput::Generators { angles, .. } => *angles,
        }
    }

    pub fn set_angles(&mut self, new: [f64; 3]) {
        match &mut self.input {
            GroupInput::OrthoEnd { angles, .. } | GroupInput::Generators { angles, .. } => {
                *angles = Some(new)
            }
        }
    }

    /// The ortho-end, decomposing generators when needed.
    pub fn ortho_end(&self) -> Result<OrthoEnd> {
        match &self.input {
            GroupInput::OrthoEnd { points, .. } => Ok(OrthoEnd::new(*points)),
            GroupInput::Generators { group, .. } => Ok(decompose(group)?.1),
        }
    }

    /// Angles to certify with: the given ones, or the first that works on
    /// the search grid.
    pub fn resolve_angles(&self, grid_n: usize, tol: &Tolerances) -> Result<Option<[f64; 3]>> {
        match self.angles() {
            Some(a) => Ok(Some(a)),
            None => Ok(search_angles_with(&self.ortho_end()?, grid_n, tol)),
        }
    }

    pub fn family(&self, angles: [f64; 3], tol: &Tolerances) -> Result<PlanarFamily> {
        match &self.input {
            GroupInput::Generators { group, .. } => {
                PlanarFamily::from_group_with(group, angles, tol)
            }
            GroupInput::OrthoEnd { points, .. } => {
                let oe = OrthoEnd::new(*points);
                let g = crate::orthoend::compose(&oe.l_a(), &oe.l(), &oe.l_b())?;
                PlanarFamily::from_group_with(&g, angles, tol)
            }
        }
    }
}

/// Result of a command: process exit code and what to print.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Self {
            code: EXIT_OK,
            stdout,
            stderr: String::new(),
        }
    }

    fn fail(code: i32, stdout: String, stderr: String) -> Self {
        Self {
            code,
            stdout,
            stderr,
        }
    }

    pub fn from_error(e: &Error) -> Self {
        let code = match e {
            Error::Input(_) | Error::Io(_) => EXIT_INPUT,
            _ => EXIT_MATH,
        };
        Self {
            code,
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        }
    }
}

fn fmt_c(z: C64) -> String {
    format!(
        "{} {} {}i",
        z.re,
        if z.im < 0.0 { '-' } else { '+' },
        z.im.abs()
    )
}

fn fmt_matrix(name: &str, m: &MoebiusMap) -> String {
    let [a, b, cc, d] = m.entries();
    format!(
        "{name} = [[{}, {}], [{}, {}]]\n",
        fmt_c(a),
        fmt_c(b),
        fmt_c(cc),
        fmt_c(d)
    )
}

fn fmt_ortho_end(oe: &OrthoEnd) -> String {
    let names = ["a", "a'", "n", "n'", "b", "b'"];
    let mut s = String::from("ortho-end:\n");
    for (name, p) in names.iter().zip(oe.points()) {
        let _ = writeln!(s, "  {name:<2} = {p}");
    }
    s
}

/// Round to 12 decimals for human-facing reports.
fn tidy(x: f64) -> f64 {
    let y = (x * 1e12).round() / 1e12;
    if y == 0.0 {
        0.0
    } else {
        y
    }
}

pub fn certificate_report(cert: &crate::certify::NsdcCertificate) -> String {
    let mut s = format!(
        "certified at angles ({}, {}, {})\n",
        cert.angles[0], cert.angles[1], cert.angles[2]
    );
    for (name, circle) in CIRCLE_NAMES.iter().zip(&cert.circles) {
        match circle.center_radius() {
            Ok((z, r)) => {
                let _ = writeln!(
                    s,
                    "  {name}: center {} radius {}",
                    fmt_c(c(tidy(z.re), tidy(z.im))),
                    tidy(r)
                );
            }
            Err(_) => {
                let _ = writeln!(s, "  {name}: line {:?}", circle);
            }
        }
    }
    for (slot, &(i, j)) in PAIRS.iter().enumerate() {
        let _ = writeln!(
            s,
            "  {}/{} {}, margin {:.6}",
            CIRCLE_NAMES[i], CIRCLE_NAMES[j], cert.pairwise[slot], cert.margins[slot]
        );
    }
    if cert.chart.is_some() {
        s.push_str(
            "  (angles refer to the chart z -> 1/(z - p) moving infinity off the ortho-end)\n",
        );
    }
    s
}

/// `certify`: print a certificate (exit 0) or a failure report (exit 2).
pub fn cmd_certify(spec: &GroupSpec, grid_n: Option<usize>) -> Outcome {
    let run = || -> Result<Outcome> {
        let tol = spec.tolerances()?;
        let oe = spec.ortho_end()?;
        let Some(angles) = spec.resolve_angles(grid_n.unwrap_or(DEFAULT_GRID), &tol)? else {
            return Ok(Outcome::fail(
                EXIT_MATH,
                "no certificate found on the angle grid\n".into(),
                String::new(),
            ));
        };
        Ok(match certify_with(&oe, angles, &tol)? {
            Certification::Certified(cert) => Outcome::ok(certificate_report(&cert)),
            Certification::Failed(report) => {
                Outcome::fail(EXIT_MATH, report.to_string(), String::new())
            }
        })
    };
    run().unwrap_or_else(|e| Outcome::from_error(&e))
}

fn family_of(spec: &GroupSpec, grid_n: Option<usize>) -> Result<PlanarFamily> {
    let tol = spec.tolerances()?;
    let angles = spec
        .resolve_angles(grid_n.unwrap_or(DEFAULT_GRID), &tol)?
        .ok_or_else(|| Error::Consistency("no certificate found on the angle grid".into()))?;
    spec.family(angles, &tol)
}

/// `family`: the member reached by `moves`, with self-checks.
pub fn cmd_family(spec: &GroupSpec, moves: [f64; 6], grid_n: Option<usize>) -> Outcome {
    let run = || -> Result<Outcome> {
        let f = family_of(spec, grid_n)?;
        let m = MoveParams::from_array(moves);
        let mut stderr = String::new();
        if m.to_array() != moves {
            let _ = writeln!(stderr, "warning: moves normalized to {:?}", m.to_array());
        }
        let (g, oe) = f.family_member(&m)?;
        let membership = f.membership_test(&oe)?;
        let hex = trace_coords_via_moves(&f, &m)?;
        let mat = TraceCoordsRef::of(&g);
        let mut s = String::new();
        let _ = writeln!(
            s,
            "moves (d_a, tau_a, d, tau, d_b, tau_b) = {:?}",
            m.to_array()
        );
        s.push_str(&fmt_matrix("A'", &g.a()));
        s.push_str(&fmt_matrix("B'", &g.b()));
        s.push_str(&fmt_ortho_end(&oe));
        let _ = writeln!(s, "membership: {}", membership.is_member());
        for (name, tr_h, tr_m) in [
            ("tr A'", hex.tr_a, mat.0[0]),
            ("tr B'", hex.tr_b, mat.0[1]),
            ("tr A'B'^-1", hex.tr_ab_inv, mat.0[2]),
        ] {
            let _ = writeln!(s, "{name}: hexagon {}  matrix {}", fmt_c(tr_h), fmt_c(tr_m));
        }
        let _ = writeln!(
            s,
            "hexagon vs matrix deviation (up to sign): {:e}",
            hex.deviation_up_to_sign(&mat.coords())
        );
        Ok(Outcome {
            code: EXIT_OK,
            stdout: s,
            stderr,
        })
    };
    run().unwrap_or_else(|e| Outcome::from_error(&e))
}

struct TraceCoordsRef([C64; 3]);

impl TraceCoordsRef {
    fn of(g: &MarkedGroup) -> Self {
        Self([g.a().trace(), g.b().trace(), g.a_b_inv().trace()])
    }

    fn coords(&self) -> crate::hexagon::TraceCoords {
        crate::hexagon::TraceCoords {
            tr_a: self.0[0],
            tr_b: self.0[1],
            tr_ab_inv: self.0[2],
        }
    }
}

/// `traces`: trace coordinates at `moves` and the rank of the trace map there.
pub fn cmd_traces(spec: &GroupSpec, moves: [f64; 6], grid_n: Option<usize>) -> Outcome {
    let run = || -> Result<Outcome> {
        let f = family_of(spec, grid_n)?;
        let m = MoveParams::from_array(moves);
        let hex = trace_coords_via_moves(&f, &m)?;
        let mat = matrix_trace_coords(&f, &m)?;
        let j = trace_jacobian(&f, &m, 1e-5)?;
        let sv = singular_values(&j);
        let mut s = String::new();
        let _ = writeln!(s, "tr A = {}", fmt_c(hex.tr_a));
        let _ = writeln!(s, "tr B = {}", fmt_c(hex.tr_b));
        let _ = writeln!(s, "tr AB^-1 = {}", fmt_c(hex.tr_ab_inv));
        let _ = writeln!(
            s,
            "matrix deviation (up to sign): {:e}",
            hex.deviation_up_to_sign(&mat)
        );
        let _ = writeln!(s, "jacobian singular values: {sv:?}");
        let _ = writeln!(s, "numerical rank: {}", numerical_rank(&j, 1e-6));
        Ok(Outcome::ok(s))
    };
    run().unwrap_or_else(|e| Outcome::from_error(&e))
}

/// Column names of the sweep CSV, in order.
pub const COLUMNS: [&str; 13] = [
    "d_a",
    "tau_a",
    "d",
    "tau",
    "d_b",
    "tau_b",
    "tr_a_re",
    "tr_a_im",
    "tr_b_re",
    "tr_b_im",
    "tr_abinv_re",
    "tr_abinv_im",
    "hex_vs_matrix_dev",
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub moves: MoveParams,
    pub traces: crate::hexagon::TraceCoords,
    pub deviation: f64,
}

pub fn sweep_rows(f: &PlanarFamily, spec: &SweepSpec) -> Result<Vec<SweepRow>> {
    spec.points()
        .par_iter()
        .map(|m| {
            let traces = trace_coords_via_moves(f, m)?;
            let deviation = traces.deviation_up_to_sign(&matrix_trace_coords(f, m)?);
            Ok(SweepRow {
                moves: *m,
                traces,
                deviation,
            })
        })
        .collect()
}

pub fn write_sweep_csv<W: Write>(rows: &[SweepRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let io = |e: csv::Error| Error::Io(e.to_string());
    w.write_record(COLUMNS).map_err(io)?;
    for row in rows {
        let vals = row
            .moves
            .to_array()
            .into_iter()
            .chain(row.traces.to_reals())
            .chain([row.deviation]);
        w.write_record(vals.map(|x| x.to_string())).map_err(io)?;
    }
    w.flush()?;
    Ok(())
}

/// `sweep`: trace coordinates over a move grid, as CSV to `out`.
pub fn cmd_sweep(
    spec: &GroupSpec,
    grid: Option<usize>,
    out: Option<&Path>,
    grid_n: Option<usize>,
) -> Outcome {
    let run = || -> Result<Outcome> {
        let sweep = match (grid, spec.sweep) {
            (Some(n), _) => SweepSpec::uniform(n),
            (None, Some(s)) => s,
            (None, None) => SweepSpec::uniform(2),
        };
        sweep.validate()?;
        let f = family_of(spec, grid_n)?;
        let rows = sweep_rows(&f, &sweep)?;
        match out {
            Some(path) => {
                let file = std::fs::File::create(path)
                    .map_err(|e| Error::Input(format!("cannot write {}: {e}", path.display())))?;
                write_sweep_csv(&rows, file)?;
                Ok(Outcome::ok(format!(
                    "wrote {} rows to {}\n",
                    rows.len(),
                    path.display()
                )))
            }
            None => {
                let mut buf = Vec::new();
                write_sweep_csv(&rows, &mut buf)?;
                Ok(Outcome::ok(String::from_utf8(buf).expect("csv is utf-8")))
            }
        }
    };
    run().unwrap_or_else(|e| Outcome::from_error(&e))
}

/// Boundary-plane picture: horizon circles, ortho-end points, moved ends.
#[derive(Debug, Clone)]
pub struct Scene {
    pub circles: Vec<SceneCircle>,
    pub points: Vec<(String, C64)>,
    pub moved: Vec<(String, C64)>,
    pub tangencies: Vec<C64>,
    pub failures: Vec<String>,
}

#[derive(Debug, Clone)]
pub struct SceneCircle {
    pub label: String,
    pub center: C64,
    pub radius: f64,
    pub failing: bool,
}

pub fn build_scene(
    oe: &OrthoEnd,
    angles: [f64; 3],
    moves: Option<&MoveParams>,
    tol: &Tolerances,
) -> Result<Scene> {
    let certification = certify_with(oe, angles, tol)?;
    let circles: Vec<GeneralizedCircle> = match &certification {
        Certification::Certified(cert) => cert.circles.to_vec(),
        Certification::Failed(_) => {
            let mut v = Vec::new();
            for (line, angle) in oe.lines().iter().zip(angles) {
                v.push(PullbackPlane::through(line, angle)?.horizon());
            }
            v
        }
    };
    let mut failing = [false; 3];
    let mut failures = Vec::new();
    if let Certification::Failed(report) = &certification {
        for f in &report.failures {
            let names: Vec<&str> = match f {
                Failure::Overlap { pair, .. } => pair.iter().map(String::as_str).collect(),
                Failure::Separation {
                    separator,
                    inside,
                    outside,
                } => vec![separator, inside, outside],
            };
            for (k, name) in CIRCLE_NAMES.iter().enumerate() {
                failing[k] |= names.contains(name);
            }
        }
        failures = report
            .to_string()
            .lines()
            .skip(1)
            .map(|l| l.trim().to_string())
            .collect();
    }
    let mut scene_circles = Vec::new();
    let mut tangencies = Vec::new();
    let mut cr = Vec::new();
    for (k, circle) in circles.iter().enumerate() {
        let (center, radius) = circle.center_radius().map_err(|_| {
            Error::Input(
                "cannot render a horizon through infinity; move infinity off the ortho-end".into(),
            )
        })?;
        cr.push((center, radius));
        scene_circles.push(SceneCircle {
            label: CIRCLE_NAMES[k].into(),
            center,
            radius,
            failing: failing[k],
        });
    }
    for &(i, j) in &PAIRS {
        if crate::certify::circle_relation(&circles[i], &circles[j], tol.tan)?
            == CircleRelation::Tangent
        {
            let ((c1, r1), (c2, r2)) = (cr[i], cr[j]);
            let dist = (c2 - c1).norm();
            if dist > 0.0 {
                let u = (c2 - c1) / dist;
                let p = if dist > r1.max(r2) || r1 >= r2 {
                    c1 + u * r1
                } else {
                    c2 - u * r2
                };
                tangencies.push(p);
            }
        }
    }
    let names = ["a", "a'", "n", "n'", "b", "b'"];
    let finite = |pts: [SpherePoint; 6], suffix: &str| -> Vec<(String, C64)> {
        names
            .iter()
            .zip(pts)
            .filter_map(|(n, p)| p.to_complex().map(|z| (format!("{n}{suffix}"), z)))
            .collect()
    };
    let points = finite(oe.points(), "");
    let moved = match (moves, certification.is_certified()) {
        (Some(m), true) => {
            let g = crate::orthoend::compose(&oe.l_a(), &oe.l(), &oe.l_b())?;
            let f = PlanarFamily::from_group_with(&g, angles, tol)?;
            finite(f.family_member(m)?.1.points(), "*")
        }
        _ => Vec::new(),
    };
    Ok(Scene {
        circles: scene_circles,
        points,
        moved,
        tangencies,
        failures,
    })
}

pub fn render_svg(scene: &Scene) -> String {
    let mut lo = c(f64::INFINITY, f64::INFINITY);
    let mut hi = c(f64::NEG_INFINITY, f64::NEG_INFINITY);
    let mut grow = |z: C64, r: f64| {
        lo = c(lo.re.min(z.re - r), lo.im.min(z.im - r));
        hi = c(hi.re.max(z.re + r), hi.im.max(z.im + r));
    };
    for circ in &scene.circles {
        grow(circ.center, circ.radius);
    }
    for (_, z) in scene.points.iter().chain(&scene.moved) {
        grow(*z, 0.0);
    }
    let span = (hi.re - lo.re).max(hi.im - lo.im).max(1e-9);
    let (w, h) = (hi.re - lo.re, hi.im - lo.im);
    let margin = 0.1 * span;
    let (x0, y0) = (lo.re - margin, -hi.im - margin);
    let (vw, vh) = (w + 2.0 * margin, h + 2.0 * margin);
    let stroke = span * 0.004;
    let font = span * 0.035;
    let dot = span * 0.008;
    let pixels = 800.0;
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{}" height="{}" viewBox="{x0} {y0} {vw} {vh}">"#,
        pixels,
        (pixels * vh / vw).round()
    );
    let _ = writeln!(
        s,
        r#"<rect x="{x0}" y="{y0}" width="{vw}" height="{vh}" fill="white"/>"#
    );
    for circ in &scene.circles {
        let colour = if circ.failing { "crimson" } else { "steelblue" };
        let _ = writeln!(
            s,
            r#"<circle cx="{}" cy="{}" r="{}" fill="none" stroke="{colour}" stroke-width="{stroke}"/>"#,
            circ.center.re, -circ.center.im, circ.radius
        );
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}" font-size="{font}" fill="{colour}" text-anchor="middle">{}</text>"#,
            circ.center.re,
            -(circ.center.im + circ.radius) - font * 0.4,
            circ.label
        );
    }
    for p in &scene.tangencies {
        let _ = writeln!(
            s,
            r#"<circle cx="{}" cy="{}" r="{}" fill="orange"/><text x="{}" y="{}" font-size="{}" fill="orange">tangent</text>"#,
            p.re,
            -p.im,
            dot * 1.5,
            p.re + dot * 2.0,
            -p.im - dot * 2.0,
            font * 0.7
        );
    }
    for (label, z) in &scene.points {
        let _ = writeln!(
            s,
            r#"<circle cx="{}" cy="{}" r="{dot}" fill="black"/><text x="{}" y="{}" font-size="{}">{label}</text>"#,
            z.re,
            -z.im,
            z.re + dot * 1.5,
            -z.im + font,
            font * 0.7
        );
    }
    for (label, z) in &scene.moved {
        let _ = writeln!(
            s,
            r#"<circle cx="{}" cy="{}" r="{dot}" fill="seagreen"/><text x="{}" y="{}" font-size="{}" fill="seagreen">{label}</text>"#,
            z.re,
            -z.im,
            z.re + dot * 1.5,
            -z.im - dot * 1.5,
            font * 0.7
        );
    }
    for (k, line) in scene.failures.iter().enumerate() {
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}" font-size="{}" fill="crimson">{line}</text>"#,
            x0 + margin * 0.2,
            y0 + font * (k as f64 + 1.0),
            font * 0.8
        );
    }
    s.push_str("</svg>\n");
    s
}

/// `render`: SVG of the circle configuration (and moved ends, if given).
pub fn cmd_render(
    spec: &GroupSpec,
    moves: Option<[f64; 6]>,
    out: Option<&Path>,
    grid_n: Option<usize>,
) -> Outcome {
    let run = || -> Result<Outcome> {
        let tol = spec.tolerances()?;
        let oe = spec.ortho_end()?;
        let angles = spec
            .resolve_angles(grid_n.unwrap_or(DEFAULT_GRID), &tol)?
            .unwrap_or([0.0; 3]);
        let m = moves.map(MoveParams::from_array);
        let scene = build_scene(&oe, angles, m.as_ref(), &tol)?;
        let svg = render_svg(&scene);
        let code = if scene.failures.is_empty() {
            EXIT_OK
        } else {
            EXIT_MATH
        };
        match out {
            Some(path) => {
                std::fs::write(path, &svg)
                    .map_err(|e| Error::Input(format!("cannot write {}: {e}", path.display())))?;
                Ok(Outcome::fail(
                    code,
                    format!("wrote {}\n", path.display()),
                    String::new(),
                ))
            }
            None => Ok(Outcome::fail(code, svg, String::new())),
        }
    };
    run().unwrap_or_else(|e| Outcome::from_error(&e))
}

/// Parse `x,y,z,...` into exactly `N` reals.
pub fn parse_reals<const N: usize>(text: &str) -> Result<[f64; N]> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    if parts.len() != N {
        return Err(Error::Input(format!(
            "expected {N} comma-separated numbers, got `{text}`"
        )));
    }
    let mut out = [0.0; N];
    for (k, p) in parts.iter().enumerate() {
        out[k] = p
            .parse()
            .map_err(|_| Error::Input(format!("bad number `{p}` in `{text}`")))?;
    }
    Ok(out)
}
