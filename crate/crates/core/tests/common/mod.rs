#![allow(dead_code)]

use std::f64::consts::PI;

use nsdc::certify::certify;
use nsdc::{
    Classification, MarkedGroup, MoebiusMap, MoveParams, OrthoEnd, PlanarFamily, SpherePoint, C64,
};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn complex(rng: &mut impl Rng, scale: f64) -> C64 {
    C64::new(rng.gen_range(-scale..scale), rng.gen_range(-scale..scale))
}

pub fn random_loxodromic(rng: &mut impl Rng) -> MoebiusMap {
    loop {
        let (a, b, c) = (complex(rng, 2.0), complex(rng, 2.0), complex(rng, 2.0));
        if a.norm() < 0.3 {
            continue;
        }
        let d = (1.0 + b * c) / a;
        let Ok(m) = MoebiusMap::new(a, b, c, d) else {
            continue;
        };
        let t = m.trace();
        // stay clear of the elliptic/parabolic boundary
        if m.classify() == Classification::Loxodromic
            && (t * t - 4.0).norm() > 0.1
            && (t * t).im.abs() > 1e-3
        {
            return m;
        }
    }
}

pub fn random_pair(rng: &mut impl Rng) -> MarkedGroup {
    loop {
        let (a, b) = (random_loxodromic(rng), random_loxodromic(rng));
        if let Ok(g) = MarkedGroup::new(a, b) {
            if nsdc::orthoend::decompose(&g).is_ok() {
                return g;
            }
        }
    }
}

/// Ends of a chord of the circle `(center, r)` with pull-back angle `theta`
/// and chord direction `phi`.
pub fn chord(center: C64, r: f64, theta: f64, phi: f64) -> (SpherePoint, SpherePoint) {
    let half = C64::from_polar(r * theta.cos(), phi);
    let mid = center - C64::i() * half * theta.tan();
    (
        SpherePoint::finite(mid + half),
        SpherePoint::finite(mid - half),
    )
}

/// A certified ortho-end on three jittered circles near −4, 0, 4 and its
/// angles.
pub fn random_certified(rng: &mut impl Rng) -> (OrthoEnd, [f64; 3]) {
    loop {
        let mut pts = [SpherePoint::infinity(); 6];
        let mut angles = [0.0; 3];
        for (k, x) in [-4.0, 0.0, 4.0].iter().enumerate() {
            let center = C64::new(x + rng.gen_range(-0.5..0.5), rng.gen_range(-0.5..0.5));
            let r = rng.gen_range(0.6..1.2);
            angles[k] = rng.gen_range(-0.6..0.6);
            let (p, q) = chord(center, r, angles[k], rng.gen_range(-PI..PI));
            pts[2 * k] = p;
            pts[2 * k + 1] = q;
        }
        let oe = OrthoEnd::new(pts);
        if let Ok(c) = certify(&oe, angles[0], angles[1], angles[2]) {
            if c.is_certified() {
                return (oe, angles);
            }
        }
    }
}

pub fn random_family(rng: &mut impl Rng) -> PlanarFamily {
    loop {
        let (oe, angles) = random_certified(rng);
        if let Ok(f) = PlanarFamily::from_ortho_end(&oe, angles) {
            return f;
        }
    }
}

pub fn random_moves(rng: &mut impl Rng, max_d: f64) -> MoveParams {
    let mut v = [0.0; 6];
    for k in 0..3 {
        v[2 * k] = rng.gen_range(0.0..max_d);
        v[2 * k + 1] = rng.gen_range(-PI..PI);
    }
    MoveParams::from_array(v)
}

pub fn fuchsian() -> OrthoEnd {
    OrthoEnd::new([-5.0, -3.0, -1.0, 1.0, 3.0, 5.0].map(SpherePoint::real))
}

pub fn horizon_offset(plane: &nsdc::PullbackPlane, p: &SpherePoint) -> f64 {
    plane.boundary_offset(p)
}

/// Frobenius distance up to sign.
pub fn distance_pm(x: &MoebiusMap, y: &MoebiusMap) -> f64 {
    x.distance_up_to_sign(y)
}
