use msholo::cover::{build_double_cover, LiftedSite};
use msholo::lattice::build_rect_domain;
use msholo::oracle::ContourFermion;
use msholo::params::BETA_C;
use num_complex::Complex64;
use std::sync::Arc;

fn main() {
    let dom = Arc::new(build_rect_domain(3, 3, 1.0).unwrap());
    let cover = build_double_cover(dom.clone(), &[[2.0, 0.0]]).unwrap();
    let a1 = cover.branch[0];
    for beta in [BETA_C, BETA_C + 0.07] {
        let f = ContourFermion::new(cover.clone(), beta).unwrap();
        let th = f.params.theta;
        let e_n = (a1.0 + 1, a1.1 + 1);
        let e_s = (a1.0 + 1, a1.1 - 1);
        let fn_ = f.value(LiftedSite::canonical(e_n)).unwrap();
        let fs_ = f.value(LiftedSite::canonical(e_s)).unwrap();
        // Adjacency signs of canonical lifts relative to the fixed origin lift.
        let c0 = cover.singular_corner().unwrap();
        let sn = if cover.seg_crossings(c0, e_n) % 2 == 0 { 1.0 } else { -1.0 };
        let ss = if cover.seg_crossings(c0, e_s) % 2 == 0 { 1.0 } else { -1.0 };
        println!("beta={beta:.4} theta={th:.5} sn={sn} ss={ss}");
        for (name, v) in [("N", sn * fn_), ("S", ss * fs_)] {
            for (rot, rname) in [(Complex64::from_polar(1.0, th), "+"), (Complex64::from_polar(1.0, -th), "-")] {
                println!("  edge {name}: Im(e^{{{rname}iT}} F_fixedadj) = {:+.12}", (rot * v).im);
            }
        }
    }
}
