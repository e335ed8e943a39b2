//! Finite-difference Jacobian of the move-to-trace map and its rank.

use nsdc::hexagon::{numerical_rank, singular_values, trace_jacobian};
use nsdc::{MoveParams, OrthoEnd, PlanarFamily, SpherePoint};

fn main() -> nsdc::Result<()> {
    let base = OrthoEnd::new([-5.0, -3.0, -1.0, 1.0, 3.0, 5.0].map(SpherePoint::real));
    let family = PlanarFamily::from_ortho_end(&base, [0.1, -0.2, 0.3])?;
    for m in [
        MoveParams::new(0.4, 0.9, 0.7, -1.3, 0.5, 2.1),
        MoveParams::new(1.5, -2.0, 0.2, 0.4, 0.9, -0.7),
    ] {
        let j = trace_jacobian(&family, &m, 1e-5)?;
        let sv = singular_values(&j);
        println!(
            "at {:?}: rank {}, singular values {sv:.4?}",
            m.to_array(),
            numerical_rank(&j, 1e-6)
        );
    }
    Ok(())
}
