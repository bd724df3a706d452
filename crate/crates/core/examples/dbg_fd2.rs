use msholo::formal::*;
use num_complex::Complex64;

fn main() {
    let id = FormalPowerId { nu: 0.5, kind: Kind::One, m: -1.0 };
    let f = |z: Complex64| formal_power_at(id, z);
    for k in 0..20 {
        let z = Complex64::from_polar(0.6 + 0.02 * k as f64, 1.0 + 0.07 * k as f64);
        let r = masshol_residual_fd(&f, -1.0, &[z], 1e-3);
        if r > 1e-5 {
            println!("k={k} z={:?} resid {:.3e}", z, r);
        }
    }
    let pts: Vec<Complex64> = (0..20)
        .map(|k| Complex64::from_polar(0.6 + 0.02 * k as f64, 1.0 + 0.07 * k as f64))
        .collect();
    println!("r1 = {:.3e}", masshol_residual_fd(&f, -1.0, &pts, 1e-3));
    println!("r2 = {:.3e}", masshol_residual_fd(&f, -1.0, &pts, 5e-4));
    let fc = |z: Complex64| f(z.conj()).conj();
    println!("rc(-m) = {:.3e}", masshol_residual_fd(&fc, 1.0, &pts, 1e-3));
    println!("rc(+m) = {:.3e}", masshol_residual_fd(&fc, -1.0, &pts, 1e-3));
}
