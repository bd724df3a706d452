use msholo::params::MassParams;
use msholo::walk::{build_g, one_point_spinor};

fn main() {
    let params = MassParams::from_mass(0.25, -1.0).unwrap();
    let op = one_point_spinor(7.0, params);
    let g = build_g(&op);
    let gamma = params.gamma_weight();
    let m2 = params.m_h_sq();
    let f = |c: (i32, i32)| op.field.value(c).map(|v| v.re);
    // slit-lap of F itself at ray sites (should vanish except x=3)
    for x in [3i32, 7, 11, 15] {
        let up = f((x + 2, 2)).unwrap() + f((x - 2, 2)).unwrap();
        let dn = f((x + 2, -2)).unwrap() + f((x - 2, -2)).unwrap();
        let lapf = up - dn - (4.0 + m2) * f((x, 0)).unwrap();
        println!("slit-lapF({x},0) = {:+.3e}", lapf);
    }
    let mut prev = None;
    for x in [3i32, 7, 11, 15, 19] {
        let lap = {
            let g0 = g.values[&(x, 0)];
            let mut acc = -(4.0 + m2) * g0;
            acc += g.values[&(x + 2, 2)] + g.values[&(x - 2, 2)];
            acc -= g.values[&(x + 2, -2)] + g.values[&(x - 2, -2)];
            acc
        };
        if let Some(p) = prev {
            println!("lapG({x},0) = {:+.9e}; ratio to prev = {:.9} (Gamma = {:.9})", lap, lap / p, gamma);
        } else {
            println!("lapG({x},0) = {:+.9e}", lap);
        }
        prev = Some(lap);
    }
}
