use msholo::params::MassParams;
use msholo::walk::{build_g, one_point_spinor};

fn main() {
    let params = MassParams::from_mass(0.25, -1.0).unwrap();
    let op = one_point_spinor(7.0, params);
    let g = build_g(&op);
    let m2 = {
        let s = (2.0 * params.theta).sin();
        8.0 * s * s / (4.0 * params.theta).cos()
    };
    let f = |c: (i32, i32)| op.field.value(c).map(|v| v.re).unwrap_or(0.0);
    // plain defects along the x-marching sites of the ray-lap of G at (3,0)
    let gamma = params.gamma_weight();
    let mut total = 0.0;
    let mut w = params.delta;
    let mut j = 0;
    loop {
        let x = 3 - 4 * j;
        if (x * x) as f64 > (4.0 * 7.0 / 0.25) * 28.0 { break; }
        let center = (x, 0);
        let up = f((x + 2, 2)) + f((x - 2, 2));
        let dn_canon = f((x + 2, -2)) + f((x - 2, -2));
        // plain X+ frame: lower-half values are -canonical
        let dn_xplus = -dn_canon;
        let defect = up + dn_xplus - (4.0 + m2) * f(center);
        println!("j={j} x={x}: F={:+.6} plain defect {:+.6}, w*defect {:+.3e}", f(center), defect, w * defect);
        total += w * defect;
        w *= gamma;
        j += 1;
        if j > 14 { break; }
    }
    println!("sum = {:+.6e}   measured lapG(3,0) = {:+.6e}", total, g.slit_lap_residual((3,0)).unwrap());
}
