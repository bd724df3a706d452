use msholo::cover::{build_double_cover, LiftedSite};
use msholo::field::SpinorField;
use msholo::lattice::build_rect_domain;
use msholo::oracle::ContourFermion;
use msholo::params::BETA_C;
use msholo::geom::SiteKind;
use std::sync::Arc;

fn main() {
    let dom = Arc::new(build_rect_domain(3, 3, 1.0).unwrap());
    let cover = build_double_cover(dom.clone(), &[[2.0, 0.0]]).unwrap();
    let c0 = cover.singular_corner().unwrap();
    for beta in [BETA_C + 0.04, BETA_C + 0.07] {
        let f = ContourFermion::new(cover.clone(), beta).unwrap();
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
        // Fit lhs = a*sum + b*dc2 separately on faces and vertices.
        for kind in [SiteKind::Face, SiteKind::Vertex] {
            let (mut s11, mut s12, mut s22, mut r1, mut r2) = (0.0f64, 0.0, 0.0, 0.0, 0.0);
            let sites: Vec<_> = if kind == SiteKind::Face { dom.faces.clone() } else { dom.vertices.clone() };
            for &x in &sites {
                if x == (a1.0 + 2, a1.1) { continue; }
                let (Some(lhs), Some(sum), Some(dc)) = (fld.dbar_sq_at(x), fld.corner_sq_sum(x), fld.dbar_conj_at(x)) else { continue };
                let d = dc.norm_sqr();
                s11 += sum * sum; s12 += sum * d; s22 += d * d;
                r1 += sum * lhs.re; r2 += d * lhs.re;
            }
            let det = s11 * s22 - s12 * s12;
            let a = (r1 * s22 - r2 * s12) / det;
            let b = (s11 * r2 - s12 * r1) / det;
            println!("theta={th:.6} {kind:?}: fitted a={a:.12} b={b:.12}");
            // candidate closed forms
            let c = th.cos();
            let c2t = (2.0*th).cos();
            let cp = (std::f64::consts::FRAC_PI_4 + 2.0*th).cos();
            let cm = (std::f64::consts::FRAC_PI_4 - 2.0*th).cos();
            let r2_ = 2.0f64.sqrt();
            println!("   A cands: cos2t_den={:.12} cost_den={:.12}",
                2.0*(r2_*cm - 1.0)/(r2_*c2t*c2t*cp*cp),
                2.0*(r2_*cm - 1.0)/(r2_*c*c*cp*cp));
            println!("   B cands: 1/(2r2 cos^2 t)={:.12} 1/(2r2 cos^2 2t)={:.12} 1/(2r2)={:.12} 1/(2r2 cos4t)={:.12} cos2t/(2r2 cos4t)={:.12}",
                1.0/(2.0*r2_*c*c), 1.0/(2.0*r2_*c2t*c2t), 1.0/(2.0*r2_), 1.0/(2.0*r2_*(4.0*th).cos()), c2t/(2.0*r2_*(4.0*th).cos()));
        }
    }
}
