//! Trace coordinates of family members from hexagon trigonometry, checked
//! against the matrices.

use nsdc::hexagon::{hexagon_of, matrix_trace_coords, trace_coords_via_moves};
use nsdc::{MoveParams, OrthoEnd, PlanarFamily, SpherePoint};

fn main() -> nsdc::Result<()> {
    let base = OrthoEnd::new([-5.0, -3.0, -1.0, 1.0, 3.0, 5.0].map(SpherePoint::real));
    let family = PlanarFamily::from_ortho_end(&base, [0.0; 3])?;

    let hex = hexagon_of(family.base())?;
    for (k, d) in hex.lengths.iter().enumerate() {
        println!("delta_{} = {d:.6}", k + 1);
    }
    println!(
        "largest cosine-rule residual: {:e}",
        hex.max_cosine_residual()
    );

    for m in [
        MoveParams::zero(),
        MoveParams::new(0.5, 1.0, 0.0, 0.0, 0.0, 0.0),
        MoveParams::new(0.3, -2.0, 1.1, 0.7, 0.2, 3.0),
    ] {
        let hexagon = trace_coords_via_moves(&family, &m)?;
        let matrix = matrix_trace_coords(&family, &m)?;
        println!(
            "{:?}\n  tr A = {:.6}, tr B = {:.6}, tr AB^-1 = {:.6}, deviation {:e}",
            m.to_array(),
            hexagon.tr_a,
            hexagon.tr_b,
            hexagon.tr_ab_inv,
            hexagon.deviation_up_to_sign(&matrix)
        );
    }
    Ok(())
}
