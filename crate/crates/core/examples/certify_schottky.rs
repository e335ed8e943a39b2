//! Certify ortho-ends: a Fuchsian example, an overlap, a separation, and
//! a search over pull-back angles.

use nsdc::certify::{certify, search_angles, Certification};
use nsdc::{OrthoEnd, SpherePoint};

fn ortho_end(v: [f64; 6]) -> OrthoEnd {
    OrthoEnd::new(v.map(SpherePoint::real))
}

fn show(label: &str, c: &Certification) {
    match c {
        Certification::Certified(cert) => {
            println!("{label}: certified");
            for (circle, rel) in cert.circles.iter().zip(cert.pairwise) {
                let (z, r) = circle.center_radius().unwrap();
                println!("  circle center {z:.3} radius {r:.3}; pair relation {rel}");
            }
        }
        Certification::Failed(report) => print!("{label}: {report}"),
    }
}

fn main() -> nsdc::Result<()> {
    show(
        "fuchsian",
        &certify(&ortho_end([-5.0, -3.0, -1.0, 1.0, 3.0, 5.0]), 0.0, 0.0, 0.0)?,
    );
    show(
        "overlap",
        &certify(&ortho_end([-1.5, 0.5, -1.0, 1.0, 3.0, 5.0]), 0.0, 0.0, 0.0)?,
    );
    show(
        "separation",
        &certify(&ortho_end([-2.0, 2.0, -1.0, 1.0, 3.0, 5.0]), 0.0, 0.0, 0.0)?,
    );

    // tilted chords need non-zero pull-back angles
    let tilted = OrthoEnd::new([
        SpherePoint::finite(nsdc::C64::new(-5.0, 0.5)),
        SpherePoint::real(-3.0),
        SpherePoint::real(-1.0),
        SpherePoint::real(1.0),
        SpherePoint::real(3.0),
        SpherePoint::finite(nsdc::C64::new(5.0, -0.5)),
    ]);
    match search_angles(&tilted, 9) {
        Some(angles) => println!("tilted: first certifying angles {angles:.3?}"),
        None => println!("tilted: no certificate on the grid"),
    }
    Ok(())
}
