use msholo::cover::{build_double_cover, LiftedSite};
use msholo::field::{a_theta, b_theta, SpinorField};
use msholo::lattice::build_rect_domain;
use msholo::oracle::ContourFermion;
use msholo::params::BETA_C;
use std::sync::Arc;

fn main() {
    let dom = Arc::new(build_rect_domain(3, 3, 1.0).unwrap());
    let cover = build_double_cover(dom.clone(), &[[2.0, 0.0]]).unwrap();
    let c0 = cover.singular_corner().unwrap();
    let f = ContourFermion::new(cover.clone(), BETA_C + 0.07).unwrap();
    let th = f.params.theta;
    let mut fld = SpinorField::new(1.0, th, cover.branch.clone());
    for &e in dom.edges.iter().chain(dom.boundary_edges.iter()) {
        fld.insert(e, f.value(LiftedSite::canonical(e)).unwrap());
    }
    for c in dom.all_corners() {
        if c != c0 {
            fld.insert(c, f.value(LiftedSite::canonical(c)).unwrap());
        }
    }
    let a1 = cover.branch[0];
    for &x in dom.faces.iter().chain(dom.vertices.iter()).take(30) {
        if x == (a1.0 + 2, a1.1) { continue; }
        let (Some(lhs), Some(sum), Some(dc)) = (fld.dbar_sq_at(x), fld.corner_sq_sum(x), fld.dbar_conj_at(x)) else { continue };
        let dc2 = dc.norm_sqr();
        let kind = msholo::geom::site_kind(x);
        println!("{:?} {:?}: lhs={:+.9}{:+.9}i", kind, x, lhs.re, lhs.im);
        for (tag, a, b, s) in [
            ("+A(+t)+B(+t)", a_theta(th), b_theta(th), 1.0),
            ("+A(-t)+B(-t)", a_theta(-th), b_theta(-th), 1.0),
            ("-A(+t)-B(+t)", a_theta(th), b_theta(th), -1.0),
            ("-A(-t)-B(-t)", a_theta(-th), b_theta(-th), -1.0),
        ] {
            let rhs = s * (a * sum + b * dc2);
            println!("   {tag}: rhs={:+.9} resid={:.3e}", rhs, (lhs.re - rhs).abs());
        }
    }
}
