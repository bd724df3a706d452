use msholo::cover::{build_double_cover, LiftedSite};
use msholo::field::SpinorField;
use msholo::lattice::build_rect_domain;
use msholo::oracle::ContourFermion;
use msholo::geom::SiteKind;
use std::sync::Arc;

fn main() {
    let dom = Arc::new(build_rect_domain(3, 3, 1.0).unwrap());
    let cover = build_double_cover(dom.clone(), &[[2.0, 0.0]]).unwrap();
    let c0 = cover.singular_corner().unwrap();
    for theta in [-0.02f64, -0.05, -0.09, 0.04] {
        let p = msholo::params::MassParams::from_theta(1.0, theta).unwrap();
        let f = ContourFermion::new(cover.clone(), p.beta).unwrap();
        let mut fld = SpinorField::new(1.0, theta, cover.branch.clone());
        for &e in dom.edges.iter().chain(dom.boundary_edges.iter()) {
            fld.insert(e, f.value(LiftedSite::canonical(e)).unwrap());
        }
        for c in dom.all_corners() {
            if c != c0 {
                fld.insert(c, f.value(LiftedSite::canonical(c)).unwrap());
            }
        }
        let a1 = cover.branch[0];
        for kind in [SiteKind::Face, SiteKind::Vertex] {
            let bt = 1.0 / (2.0 * 2.0f64.sqrt() * theta.cos().powi(2));
            let bsign = if kind == SiteKind::Face { 1.0 } else { -1.0 };
            let sites: Vec<_> = if kind == SiteKind::Face { dom.faces.clone() } else { dom.vertices.clone() };
            let (mut num, mut den, mut spread_lo, mut spread_hi) = (0.0f64, 0.0f64, f64::MAX, f64::MIN);
            for &x in &sites {
                if x == (a1.0 + 2, a1.1) { continue; }
                let (Some(lhs), Some(sum), Some(dc)) = (fld.dbar_sq_at(x), fld.corner_sq_sum(x), fld.dbar_conj_at(x)) else { continue };
                let a_here = (lhs.re - bsign * bt * dc.norm_sqr()) / sum;
                spread_lo = spread_lo.min(a_here);
                spread_hi = spread_hi.max(a_here);
                num += a_here; den += 1.0;
                assert!(lhs.im.abs() < 1e-13);
            }
            println!("theta={theta:+.4} {kind:?}: a = {:.15} (spread {:.3e})", num / den, spread_hi - spread_lo);
        }
    }
}
