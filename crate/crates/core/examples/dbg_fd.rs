use msholo::formal::*;
use num_complex::Complex64;

fn main() {
    let id = FormalPowerId { nu: 0.5, kind: Kind::One, m: -1.0 };
    let z = Complex64::from_polar(0.8, 1.3);
    let h = 1e-3;
    let f = |z: Complex64| formal_power_at(id, z);
    let fx = (f(z + Complex64::new(h, 0.0)) - f(z - Complex64::new(h, 0.0))) / (2.0 * h);
    let fy = (f(z + Complex64::new(0.0, h)) - f(z - Complex64::new(0.0, h))) / (2.0 * h);
    let dbar = 0.5 * (fx + Complex64::new(0.0, 1.0) * fy);
    println!("dbar     = {:+.9} {:+.9}i", dbar.re, dbar.im);
    println!("m conj f = {:+.9} {:+.9}i", (-1.0 * f(z).conj()).re, (-1.0 * f(z).conj()).im);
    println!("ratio {:?}", dbar / f(z).conj());
}
