use msholo::geom::{site_kind, SiteKind};
use msholo::params::MassParams;
use msholo::walk::one_point_spinor;

fn main() {
    let params = MassParams::from_mass(0.25, -1.0).unwrap();
    for radius in [6.0, 8.0, 10.0] {
        let op = one_point_spinor(radius, params);
        for win in [2.0f64, 3.0, 4.0] {
            let wh = (2.0 * win / 0.25) as i32;
            let mut max_r = 0.0f64;
            for (c, _) in op.field.sites() {
                if site_kind(c) != SiteKind::CornerMid { continue; }
                if c == (1, 0) || c == (-1, 0) { continue; }
                if c.0 * c.0 + c.1 * c.1 > wh * wh { continue; }
                if let Some(r) = op.field.sholo_residual(c) {
                    max_r = max_r.max(r);
                }
            }
            print!("R={radius} win={win}: {:.2e}   ", max_r);
        }
        println!();
    }
}
