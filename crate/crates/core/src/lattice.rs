//! Discrete domains on the rotated square lattice and their boundary
//! decorations.
//!
//! A domain is described by its set of interior faces; vertices, edges,
//! corners and all boundary classes are derived from it. Edges are exactly
//! the duals of Ising bonds: pairs of faces at distance `√2 δ` with at least
//! one interior member.

use crate::geom::{self, corner_type, site_kind, Coord, CornerType, SiteKind};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::collections::{HashMap, HashSet, VecDeque};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum DomainError {
    #[error("domain dimensions must be at least 1, got {0}x{1}")]
    EmptyRect(usize, usize),
    #[error("disc radius {0} too small to contain a face")]
    EmptyDisc(f64),
    #[error("edge graph is disconnected or not simply connected")]
    BadTopology,
    #[error("branch point ({0}, {1}) snaps outside the domain")]
    BranchOutside(f64, f64),
    #[error("branch points snap to coincident faces")]
    BranchCollision,
}

/// Serializable description of a domain, the external interface used by the
/// CLI (`--domain spec.json`).
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(tag = "shape", rename_all = "lowercase")]
pub enum DomainSpec {
    Rect {
        dims: [usize; 2],
        delta: f64,
        #[serde(default)]
        branch: Vec<[f64; 2]>,
    },
    Disc {
        radius: f64,
        delta: f64,
        #[serde(default)]
        branch: Vec<[f64; 2]>,
    },
}

impl DomainSpec {
    pub fn build(&self) -> Result<DiscreteDomain, DomainError> {
        match *self {
            DomainSpec::Rect { dims, delta, .. } => build_rect_domain(dims[0], dims[1], delta),
            DomainSpec::Disc { radius, delta, .. } => build_disc_domain(radius, delta),
        }
    }

    pub fn branch_points(&self) -> &[[f64; 2]] {
        match self {
            DomainSpec::Rect { branch, .. } | DomainSpec::Disc { branch, .. } => branch,
        }
    }
}

/// A finite discretised domain with all site classes and boundary data.
#[derive(Debug, Clone)]
pub struct DiscreteDomain {
    pub delta: f64,
    pub faces: Vec<Coord>,
    pub vertices: Vec<Coord>,
    pub edges: Vec<Coord>,
    pub corners: Vec<Coord>,
    pub boundary_faces: Vec<Coord>,
    pub boundary_vertices: Vec<Coord>,
    pub boundary_edges: Vec<Coord>,
    pub boundary_corners: Vec<Coord>,
    /// Outward unit normal per boundary edge, aligned with `boundary_edges`.
    pub nu_out: Vec<Complex64>,
    face_ids: HashMap<Coord, u32>,
    vertex_set: HashSet<Coord>,
    bvertex_set: HashSet<Coord>,
    edge_ids: HashMap<Coord, u32>,
    bedge_ids: HashMap<Coord, u32>,
    bface_ids: HashMap<Coord, u32>,
}

/// Rectangle of `width x height` faces spanned by the lattice directions
/// `δ(1+i)` and `δ(1-i)`.
pub fn build_rect_domain(
    width: usize,
    height: usize,
    delta: f64,
) -> Result<DiscreteDomain, DomainError> {
    if width == 0 || height == 0 {
        return Err(DomainError::EmptyRect(width, height));
    }
    let mut faces = Vec::with_capacity(width * height);
    for j in 0..width as i32 {
        for k in 0..height as i32 {
            faces.push((2 * (j + k), 2 * (j - k)));
        }
    }
    DiscreteDomain::from_faces(faces, delta)
}

/// Lattice ball: all faces within distance `radius` of the origin face.
pub fn build_disc_domain(radius: f64, delta: f64) -> Result<DiscreteDomain, DomainError> {
    if !(radius >= delta) {
        return Err(DomainError::EmptyDisc(radius));
    }
    let r_half = 2.0 * radius / delta;
    let n = r_half.ceil() as i32 + 2;
    let r2 = r_half * r_half;
    let mut faces = Vec::new();
    for x in -n..=n {
        for y in -n..=n {
            if geom::is_face((x, y)) && (x * x + y * y) as f64 <= r2 {
                faces.push((x, y));
            }
        }
    }
    DiscreteDomain::from_faces(faces, delta)
}

impl DiscreteDomain {
    pub fn from_faces(mut faces: Vec<Coord>, delta: f64) -> Result<Self, DomainError> {
        faces.sort_unstable();
        faces.dedup();
        let face_ids: HashMap<Coord, u32> = faces
            .iter()
            .enumerate()
            .map(|(i, &c)| (c, i as u32))
            .collect();

        let mut vertex_set = HashSet::new();
        for &(x, y) in &faces {
            for d in [(2, 0), (-2, 0), (0, 2), (0, -2)] {
                vertex_set.insert((x + d.0, y + d.1));
            }
        }
        let mut vertices: Vec<Coord> = vertex_set.iter().copied().collect();
        vertices.sort_unstable();

        // Interior edges: duals of bonds between faces at distance sqrt(2) δ
        // with at least one interior face.
        let mut edge_set = HashSet::new();
        for &(x, y) in &faces {
            for d in [(1, 1), (1, -1), (-1, 1), (-1, -1)] {
                edge_set.insert((x + d.0, y + d.1));
            }
        }
        let mut edges: Vec<Coord> = edge_set.into_iter().collect();
        edges.sort_unstable();
        let edge_ids: HashMap<Coord, u32> = edges
            .iter()
            .enumerate()
            .map(|(i, &c)| (c, i as u32))
            .collect();

        // Interior corners: four per face.
        let mut corners = Vec::with_capacity(4 * faces.len());
        for &(x, y) in &faces {
            for d in [(1, 0), (-1, 0), (0, 1), (0, -1)] {
                corners.push((x + d.0, y + d.1));
            }
        }
        corners.sort_unstable();

        // Boundary faces: non-interior faces at axis distance δ from a vertex.
        let mut bface_set = HashSet::new();
        for &(x, y) in &vertices {
            for d in [(2, 0), (-2, 0), (0, 2), (0, -2)] {
                let f = (x + d.0, y + d.1);
                if !face_ids.contains_key(&f) {
                    bface_set.insert(f);
                }
            }
        }
        let mut boundary_faces: Vec<Coord> = bface_set.into_iter().collect();
        boundary_faces.sort_unstable();
        let bface_ids: HashMap<Coord, u32> = boundary_faces
            .iter()
            .enumerate()
            .map(|(i, &c)| (c, i as u32))
            .collect();

        // Boundary edges and vertices.
        let mut bedges = Vec::new();
        let mut bvertex_set = HashSet::new();
        for &(x, y) in &vertices {
            for d in [(2, 2), (2, -2), (-2, 2), (-2, -2)] {
                let w = (x + d.0, y + d.1);
                if !vertex_set.contains(&w) {
                    bvertex_set.insert(w);
                    bedges.push(((x + d.0 / 2, y + d.1 / 2), (x, y), w));
                }
            }
        }
        bedges.sort_unstable();
        let boundary_edges: Vec<Coord> = bedges.iter().map(|&(m, _, _)| m).collect();
        let nu_out: Vec<Complex64> = bedges
            .iter()
            .map(|&(_, v, w)| {
                let d = Complex64::new((w.0 - v.0) as f64, (w.1 - v.1) as f64);
                d / d.norm()
            })
            .collect();
        let bedge_ids: HashMap<Coord, u32> = boundary_edges
            .iter()
            .enumerate()
            .map(|(i, &c)| (c, i as u32))
            .collect();
        let mut boundary_vertices: Vec<Coord> = bvertex_set.iter().copied().collect();
        boundary_vertices.sort_unstable();

        // Boundary corners: interior vertex next to a boundary face.
        let mut boundary_corners = Vec::new();
        for &(x, y) in &boundary_faces {
            for d in [(2, 0), (-2, 0), (0, 2), (0, -2)] {
                let v = (x + d.0, y + d.1);
                if vertex_set.contains(&v) {
                    boundary_corners.push((x + d.0 / 2, y + d.1 / 2));
                }
            }
        }
        boundary_corners.sort_unstable();

        let dom = DiscreteDomain {
            delta,
            faces,
            vertices,
            edges,
            corners,
            boundary_faces,
            boundary_vertices,
            boundary_edges,
            boundary_corners,
            nu_out,
            face_ids,
            vertex_set,
            bvertex_set,
            edge_ids,
            bedge_ids,
            bface_ids,
        };
        dom.check_topology()?;
        Ok(dom)
    }

    /// Simply-connectedness in the form the contour enumeration relies on:
    /// connected edge graph with cycle space spanned by the face loops.
    fn check_topology(&self) -> Result<(), DomainError> {
        let e = self.edges.len() as i64;
        let v = self.vertices.len() as i64;
        let f = self.faces.len() as i64;
        if e - v + 1 != f {
            return Err(DomainError::BadTopology);
        }
        // Connectivity of the vertex graph through interior edges.
        let mut seen = HashSet::new();
        let mut queue = VecDeque::new();
        queue.push_back(self.vertices[0]);
        seen.insert(self.vertices[0]);
        while let Some((x, y)) = queue.pop_front() {
            for d in [(2, 2), (2, -2), (-2, 2), (-2, -2)] {
                let w = (x + d.0, y + d.1);
                if self.edge_ids.contains_key(&(x + d.0 / 2, y + d.1 / 2))
                    && self.vertex_set.contains(&w)
                    && seen.insert(w)
                {
                    queue.push_back(w);
                }
            }
        }
        if seen.len() != self.vertices.len() {
            return Err(DomainError::BadTopology);
        }
        Ok(())
    }

    pub fn is_face(&self, c: Coord) -> bool {
        self.face_ids.contains_key(&c)
    }

    pub fn face_id(&self, c: Coord) -> Option<u32> {
        self.face_ids.get(&c).copied()
    }

    pub fn boundary_face_id(&self, c: Coord) -> Option<u32> {
        self.bface_ids.get(&c).copied()
    }

    pub fn is_vertex(&self, c: Coord) -> bool {
        self.vertex_set.contains(&c)
    }

    pub fn is_boundary_vertex(&self, c: Coord) -> bool {
        self.bvertex_set.contains(&c)
    }

    pub fn edge_id(&self, c: Coord) -> Option<u32> {
        self.edge_ids.get(&c).copied()
    }

    pub fn boundary_edge_id(&self, c: Coord) -> Option<u32> {
        self.bedge_ids.get(&c).copied()
    }

    /// Is this edge midpoint an interior or boundary edge of the domain?
    pub fn has_edge(&self, c: Coord) -> bool {
        self.edge_ids.contains_key(&c) || self.bedge_ids.contains_key(&c)
    }

    /// All corners (interior then boundary).
    pub fn all_corners(&self) -> impl Iterator<Item = Coord> + '_ {
        self.corners
            .iter()
            .chain(self.boundary_corners.iter())
            .copied()
    }

    /// Outward normal of a boundary edge.
    pub fn nu_out_at(&self, e: Coord) -> Option<Complex64> {
        self.bedge_ids.get(&e).map(|&i| self.nu_out[i as usize])
    }

    /// Complex position of a site in length units.
    pub fn position(&self, c: Coord) -> Complex64 {
        geom::position(c, self.delta)
    }

    /// Snap a point in length units to the nearest interior face, ties
    /// broken toward the lexicographically smaller coordinate.
    pub fn snap_to_face(&self, x: f64, y: f64) -> Option<Coord> {
        let hx = 2.0 * x / self.delta;
        let hy = 2.0 * y / self.delta;
        let mut best: Option<(f64, Coord)> = None;
        let cx = hx.floor() as i32;
        let cy = hy.floor() as i32;
        for dx in -2..=3 {
            for dy in -2..=3 {
                let c = (cx + dx, cy + dy);
                if site_kind(c) == SiteKind::Face && self.is_face(c) {
                    let d2 = (hx - c.0 as f64).powi(2) + (hy - c.1 as f64).powi(2);
                    let better = match best {
                        None => true,
                        Some((bd, bc)) => {
                            d2 < bd - 1e-12 || ((d2 - bd).abs() <= 1e-12 && c < bc)
                        }
                    };
                    if better {
                        best = Some((d2, c));
                    }
                }
            }
        }
        best.map(|(_, c)| c)
    }

    /// Corner type tag, exposed for convenience.
    pub fn corner_type(&self, c: Coord) -> Option<CornerType> {
        corner_type(c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn smallest_rect_counts() {
        let d = build_rect_domain(1, 1, 0.5).unwrap();
        assert_eq!(d.faces.len(), 1);
        assert_eq!(d.vertices.len(), 4);
        assert_eq!(d.edges.len(), 4);
        assert_eq!(d.corners.len(), 4);
        // Four axis neighbours plus four diagonal ones are all within δ of a
        // vertex of the single face.
        assert_eq!(d.boundary_faces.len(), 8);
        assert_eq!(d.boundary_edges.len(), 8);
    }

    #[test]
    fn rect_counts_by_hand() {
        let d = build_rect_domain(2, 2, 1.0).unwrap();
        assert_eq!(d.faces.len(), 4);
        assert_eq!(d.vertices.len(), 9);
        assert_eq!(d.edges.len(), 12);
        assert_eq!(d.corners.len(), 16);

        let d = build_rect_domain(3, 1, 1.0).unwrap();
        assert_eq!(d.faces.len(), 3);
        assert_eq!(d.vertices.len(), 8);
        assert_eq!(d.edges.len(), 10);
        assert_eq!(d.corners.len(), 12);
    }

    #[test]
    fn corner_count_is_four_per_face() {
        for (w, h) in [(1, 1), (2, 3), (4, 2), (3, 3)] {
            let d = build_rect_domain(w, h, 1.0).unwrap();
            assert_eq!(d.corners.len(), 4 * d.faces.len());
        }
    }

    #[test]
    fn zero_sized_rect_rejected() {
        assert!(build_rect_domain(0, 3, 1.0).is_err());
    }

    #[test]
    fn nu_out_is_unit_and_flips_under_reflection() {
        let d = build_rect_domain(2, 2, 1.0).unwrap();
        let reflected = DiscreteDomain::from_faces(
            d.faces.iter().map(|&(x, y)| (-x, -y)).collect(),
            1.0,
        )
        .unwrap();
        for (i, &e) in d.boundary_edges.iter().enumerate() {
            assert!((d.nu_out[i].norm() - 1.0).abs() < 1e-15);
            let m = (-e.0, -e.1);
            let nu_m = reflected.nu_out_at(m).unwrap();
            assert!((nu_m + d.nu_out[i]).norm() < 1e-15);
        }
    }

    #[test]
    fn disc_domain_is_ball() {
        let d = build_disc_domain(3.0, 1.0).unwrap();
        assert!(!d.faces.is_empty());
        for &f in &d.faces {
            assert!(d.position(f).norm() <= 3.0 + 1e-12);
        }
        assert_eq!(d.edges.len() as i64 - d.vertices.len() as i64 + 1, d.faces.len() as i64);
    }

    #[test]
    fn domain_spec_roundtrip() {
        let spec = DomainSpec::Rect {
            dims: [3, 2],
            delta: 0.25,
            branch: vec![[0.5, 0.0]],
        };
        let json = serde_json::to_string(&spec).unwrap();
        let back: DomainSpec = serde_json::from_str(&json).unwrap();
        assert_eq!(spec, back);
        assert!(back.build().is_ok());
    }

    #[test]
    fn snapping_prefers_lexicographically_smaller() {
        let d = build_rect_domain(2, 2, 1.0).unwrap();
        // (1, 0) in length units is equidistant from faces (0,0) and (2,2)x...
        let f = d.snap_to_face(0.5, 0.5).unwrap();
        assert!(d.is_face(f));
    }
}
