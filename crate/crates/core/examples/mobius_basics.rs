//! Classify a few maps, find fixed points and axes, and build half-turns.

use nsdc::geometry::{common_perpendicular, complex_distance, half_turn};
use nsdc::{Geodesic, H3Point, MoebiusMap, C64};

fn main() -> nsdc::Result<()> {
    let maps = [
        (
            "loxodromic",
            MoebiusMap::from_real([[3.0, 0.0], [0.0, 1.0 / 3.0]])?,
        ),
        (
            "parabolic",
            MoebiusMap::from_real([[1.0, 1.0], [0.0, 1.0]])?,
        ),
        ("elliptic", MoebiusMap::diag(C64::from_polar(1.0, 0.4))),
    ];
    for (name, m) in &maps {
        println!("{name}: class {:?}, trace {}", m.classify(), m.trace());
        if let Ok(axis) = m.axis() {
            println!("  axis {} -> {}", axis.line.start(), axis.line.stop());
        }
    }

    let l = Geodesic::between(-1.0, 1.0);
    let h = half_turn(&l)?;
    println!("half-turn about [-1, 1]: {h}");
    let apex = H3Point::new(C64::new(0.0, 0.0), 1.0);
    println!(
        "fixes the apex: {}",
        h.apply_h3(&apex).approx_eq(&apex, 1e-12)
    );

    let far = Geodesic::between(3.0, 5.0);
    let perp = common_perpendicular(&l, &far)?;
    println!(
        "common perpendicular of [-1,1] and [3,5]: {} -> {}",
        perp.start(),
        perp.stop()
    );
    println!("complex distance: {}", complex_distance(&l, &far)?);
    Ok(())
}
