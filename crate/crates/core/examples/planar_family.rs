//! Move the half-turn lines of a certified group around its planes and
//! recover the moves again.

use nsdc::family::recover_move;
use nsdc::{MoveParams, OrthoEnd, PlanarFamily, SpherePoint};

fn main() -> nsdc::Result<()> {
    let base = OrthoEnd::new([-5.0, -3.0, -1.0, 1.0, 3.0, 5.0].map(SpherePoint::real));
    let family = PlanarFamily::from_ortho_end(&base, [0.2, 0.0, -0.3])?;

    let m = MoveParams::new(0.6, 1.2, 0.3, -0.4, 1.1, 2.5);
    let (g, oe) = family.family_member(&m)?;
    println!("A' = {}", g.a());
    println!("B' = {}", g.b());
    println!("moved ortho-end: {:?}", oe.points().map(|p| p.to_string()));

    let membership = family.membership_test(&oe)?;
    println!("member of the family: {}", membership.is_member());

    let lines = family.moved_lines(&m)?;
    let (d, tau) = recover_move(
        &family.planes()[0],
        &family.base_lines()[0],
        &family.base_points().v_a,
        &lines[0],
    )?;
    println!("recovered (d_a, tau_a) = ({d:.12}, {tau:.12})");
    println!(
        "all moves recovered: {:?}",
        family.recover_params(&g)?.to_array()
    );
    Ok(())
}
