//! Double covers of discrete domains ramified at marked interior faces.
//!
//! Each branch face `a_j` carries a horizontal cut just below its row,
//! extending to the right: a lattice segment from height `y_j` to `y_j - 1`
//! crosses the cut of `a_j` iff its midpoint lies strictly right of `x_j`.
//! The canonical lift of a site is the one reached from the fixed lift of
//! `a_1 + δ/2` by paths crossing the cuts an even number of times; this puts
//! the fixed lift on the upper side of the ray `a_1 + R_{>0}` and matches the
//! slit conventions of the one-point spinor.

use crate::geom::{site_kind, Coord, SiteKind};
use crate::lattice::{DiscreteDomain, DomainError};
use std::sync::Arc;

/// Sheet label: 0 is the canonical sheet.
pub type Sheet = u8;

/// Cuts crossed by a straight axis-parallel or diagonal lattice segment,
/// given the branch faces. The cut of a branch face `(bx, by)` sits between
/// heights `by - 1` and `by`, strictly right of `bx`.
pub fn cut_crossings(branch: &[Coord], p: Coord, q: Coord) -> u32 {
    let dx = q.0 - p.0;
    let dy = q.1 - p.1;
    if dy == 0 {
        return 0;
    }
    assert!(
        dx == 0 || dx.abs() == dy.abs(),
        "segment {:?} -> {:?} is neither axis-parallel nor diagonal",
        p,
        q
    );
    let (ylo, yhi) = if dy > 0 { (p.1, q.1) } else { (q.1, p.1) };
    let mut n = 0;
    for &(bx, by) in branch {
        if ylo <= by - 1 && by <= yhi {
            // Doubled x-coordinate at the crossing height by - 1/2.
            let xc2 = if dx == 0 {
                2 * p.0
            } else {
                2 * p.0 + (2 * by - 1 - 2 * p.1) * if dx * dy > 0 { 1 } else { -1 }
            };
            if xc2 > 2 * bx {
                n += 1;
            }
        }
    }
    n
}

/// A lifted site of the double cover.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct LiftedSite {
    pub site: Coord,
    pub sheet: Sheet,
}

impl LiftedSite {
    pub fn canonical(site: Coord) -> Self {
        LiftedSite { site, sheet: 0 }
    }

    /// The other lift of the same base site.
    pub fn antipode(self) -> Self {
        LiftedSite {
            site: self.site,
            sheet: 1 - self.sheet,
        }
    }
}

#[derive(Debug, Clone)]
pub struct DoubleCover {
    pub dom: Arc<DiscreteDomain>,
    /// Branch faces `a_1, ..., a_n` in the order given.
    pub branch: Vec<Coord>,
    /// The fixed lift of `a_1 + δ/2`, canonical by convention.
    pub fixed_origin_lift: LiftedSite,
}

pub fn build_double_cover(
    dom: Arc<DiscreteDomain>,
    branch_points: &[[f64; 2]],
) -> Result<DoubleCover, DomainError> {
    let mut branch = Vec::with_capacity(branch_points.len());
    for &[x, y] in branch_points {
        let f = dom
            .snap_to_face(x, y)
            .ok_or(DomainError::BranchOutside(x, y))?;
        if branch.contains(&f) {
            return Err(DomainError::BranchCollision);
        }
        branch.push(f);
    }
    let origin = branch
        .first()
        .map(|&(x, y)| (x + 1, y))
        .unwrap_or((1, 0));
    Ok(DoubleCover {
        dom,
        branch,
        fixed_origin_lift: LiftedSite::canonical(origin),
    })
}

impl DoubleCover {
    /// The singular corner `a_1 + δ/2`, when there is at least one branch face.
    pub fn singular_corner(&self) -> Option<Coord> {
        self.branch.first().map(|&(x, y)| (x + 1, y))
    }

    /// Number of cuts crossed by a straight lattice segment. The segment must
    /// be axis-parallel or diagonal (|Δx| ∈ {0, |Δy|}), which covers every
    /// step appearing in lattice paths.
    pub fn seg_crossings(&self, p: Coord, q: Coord) -> u32 {
        cut_crossings(&self.branch, p, q)
    }

    /// Crossing count along a straight segment between two points given in
    /// half-unit coordinates (used when sampling off-lattice curves).
    pub fn straight_crossings(&self, p: (f64, f64), q: (f64, f64)) -> u32 {
        let mut n = 0;
        for &(bx, by) in &self.branch {
            let line = by as f64 - 0.5;
            if (p.1 - line) * (q.1 - line) < 0.0 {
                let t = (line - p.1) / (q.1 - p.1);
                let xc = p.0 + t * (q.0 - p.0);
                if xc > bx as f64 {
                    n += 1;
                }
            }
        }
        n
    }

    /// Relative sheet sign of two adjacent sites: +1 when the canonical lifts
    /// are adjacent on the cover.
    pub fn adjacency_sign(&self, p: Coord, q: Coord) -> f64 {
        if self.seg_crossings(p, q) % 2 == 0 {
            1.0
        } else {
            -1.0
        }
    }

    /// Lift a connected base path starting from a given lift. Returns the end
    /// lift together with the sheet sign, which is +1 iff the end lift is the
    /// canonical lift of the endpoint.
    pub fn lift_path(
        &self,
        path: &[Coord],
        start: LiftedSite,
    ) -> Result<(LiftedSite, i8), &'static str> {
        let first = *path.first().ok_or("empty path")?;
        if first != start.site {
            return Err("path does not start at the given lift");
        }
        let mut parity = 0u32;
        for &p in path {
            if site_kind(p) == SiteKind::Face && self.branch.contains(&p) {
                return Err("path passes through a branch face");
            }
        }
        for w in path.windows(2) {
            let (p, q) = (w[0], w[1]);
            let step = (q.0 - p.0, q.1 - p.1);
            if step == (0, 0) || !(step.0 == 0 || step.1 == 0 || step.0.abs() == step.1.abs()) {
                return Err("path is not connected in the base lattice");
            }
            parity += self.seg_crossings(p, q);
        }
        let end_sheet = (start.sheet + (parity % 2) as u8) % 2;
        let end = LiftedSite {
            site: *path.last().unwrap(),
            sheet: end_sheet,
        };
        Ok((end, if end_sheet == 0 { 1 } else { -1 }))
    }
}
