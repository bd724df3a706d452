use msholo::params::MassParams;
use msholo::walk::{build_g, one_point_spinor};

fn main() {
    let params = MassParams::from_mass(0.25, -1.0).unwrap();
    let op = one_point_spinor(7.0, params);
    let g = build_g(&op);
    for y in (-6..=6).rev().step_by(2) {
        for x in (-17..=17).step_by(2) {
            let c = (x as i32, y as i32);
            if msholo::geom::corner_type(c) != Some(msholo::geom::CornerType::One) { continue; }
            if y == 0 && x < 0 { continue; }
            if let Some(r) = g.slit_lap_residual(c) {
                if r > 1e-8 {
                    println!("G lap bad at {:?}: {:.3e}  (G={:+.6})", c, r, g.values[&c]);
                }
            }
        }
    }
}
