use msholo::cover::build_double_cover;
use msholo::lattice::build_rect_domain;
use msholo::params::{MassParams, BETA_C};
use msholo::solver::{build_square_integral, solve_fermion, SolverOptions};
use std::sync::Arc;

fn main() {
    let dom = Arc::new(build_rect_domain(6, 6, 1.0).unwrap());
    let cover = build_double_cover(dom.clone(), &[[3.0, 1.0]]).unwrap();
    let params = MassParams::from_beta(1.0, BETA_C + 0.05).unwrap();
    let field = solve_fermion(&cover, params, &SolverOptions::default()).unwrap();
    let sf = field.spinor_field();
    let h = build_square_integral(&field);
    let a1 = cover.branch[0];
    println!("a1 = {:?}, sing vertex = {:?}", a1, (a1.0 + 2, a1.1));
    for &x in dom.faces.iter() {
        if let Some((l, r, resid)) = h.laplacian_h_identity(&field, &sf, x) {
            if resid > 1e-9 {
                println!("face {:?}: lhs {:+.6} rhs {:+.6} resid {:.3e}", x, l, r, resid);
            }
        }
    }
    for &x in dom.vertices.iter() {
        if x == (a1.0 + 2, a1.1) { continue; }
        if let Some((l, r, resid)) = h.laplacian_h_identity(&field, &sf, x) {
            if resid > 1e-9 {
                println!("vertex {:?}: lhs {:+.6} rhs {:+.6} resid {:.3e}", x, l, r, resid);
            }
        }
    }
}
