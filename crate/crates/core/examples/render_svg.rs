//! Write SVG pictures of a certified, a tangent and a failing configuration.

use nsdc::io::{build_scene, render_svg};
use nsdc::{MoveParams, OrthoEnd, SpherePoint, Tolerances};

fn main() -> nsdc::Result<()> {
    let dir = std::env::temp_dir();
    let cases = [
        (
            "fuchsian",
            [-5.0, -3.0, -1.0, 1.0, 3.0, 5.0],
            Some(MoveParams::new(0.5, 0.8, 0.2, 0.0, 0.4, -1.0)),
        ),
        ("tangent", [-3.0, -1.0, -1.0, 1.0, 3.0, 5.0], None),
        ("overlap", [-1.5, 0.5, -1.0, 1.0, 3.0, 5.0], None),
    ];
    for (name, ends, moves) in cases {
        let oe = OrthoEnd::new(ends.map(SpherePoint::real));
        let scene = build_scene(&oe, [0.0; 3], moves.as_ref(), &Tolerances::default())?;
        let path = dir.join(format!("nsdc_{name}.svg"));
        std::fs::write(&path, render_svg(&scene))?;
        println!(
            "{name}: {} ({} failure notes)",
            path.display(),
            scene.failures.len()
        );
    }
    Ok(())
}
