//! Decide whether six points form the ortho-end of a family member.

use nsdc::{MoveParams, OrthoEnd, PlanarFamily, SpherePoint};

fn main() -> nsdc::Result<()> {
    let base = OrthoEnd::new([-5.0, -3.0, -1.0, 1.0, 3.0, 5.0].map(SpherePoint::real));
    let family = PlanarFamily::from_ortho_end(&base, [0.0; 3])?;
    let (_, member) = family.family_member(&MoveParams::new(0.4, 1.0, 0.2, -0.3, 1.1, 2.9))?;

    let mut pts = member.points();
    pts[0] = SpherePoint::finite(pts[0].to_complex().unwrap() * 1.01);
    let perturbed = OrthoEnd::new(pts);

    for (label, candidate) in [("base", base), ("member", member), ("perturbed", perturbed)] {
        let m = family.membership_test(&candidate)?;
        println!(
            "{label}: member = {}, paths agree = {}",
            m.is_member(),
            m.paths_agree()
        );
        for (name, p) in ["P_A", "P", "P_B"].iter().zip(m.planes) {
            println!(
                "  {name}: offsets [{:.2e}, {:.2e}], t' = {:.6}, printed ratio real = {}",
                p.offsets[0], p.offsets[1], p.t_prime, p.printed_ratio_real
            );
        }
    }
    Ok(())
}
