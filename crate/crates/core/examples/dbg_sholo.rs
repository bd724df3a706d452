use msholo::cover::{build_double_cover, LiftedSite};
use msholo::field::SpinorField;
use msholo::lattice::build_rect_domain;
use msholo::oracle::ContourFermion;
use msholo::params::BETA_C;
use std::sync::Arc;

fn main() {
    let dom = Arc::new(build_rect_domain(2, 2, 1.0).unwrap());
    let cover = build_double_cover(dom.clone(), &[[0.0, 0.0]]).unwrap();
    let c0 = cover.singular_corner().unwrap();
    for beta in [BETA_C, BETA_C + 0.07] {
        let f = ContourFermion::new(cover.clone(), beta).unwrap();
        let mut fld = SpinorField::new(1.0, f.params.theta, cover.branch.clone());
        for &e in dom.edges.iter().chain(dom.boundary_edges.iter()) {
            fld.insert(e, f.value(LiftedSite::canonical(e)).unwrap());
        }
        for c in dom.all_corners() {
            if c != c0 {
                fld.insert(c, f.value(LiftedSite::canonical(c)).unwrap());
            }
        }
        println!("=== beta = {beta} (theta = {})", f.params.theta);
        for c in dom.all_corners() {
            if c == c0 { continue; }
            if let Some(r) = fld.sholo_residual(c) {
                let tag = if r > 1e-12 { " <-- BAD" } else { "" };
                let proj = fld.corner_from_edges(c).unwrap();
                let direct = fld.value(c).unwrap();
                println!(
                    "corner {:?} type {:?}: resid {:.3e} | proj {:.6} {:+.6}i direct {:.6} {:+.6}i{}",
                    c, msholo::geom::corner_type(c).unwrap(), r, proj.re, proj.im, direct.re, direct.im, tag
                );
            }
        }
    }
}
