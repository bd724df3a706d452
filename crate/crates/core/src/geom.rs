//! Integer geometry of the rotated square lattice `δ(1+i)Z^2`.
//!
//! Every site class lives on the half-mesh grid `(δ/2)Z^2`, so sites are
//! stored as integer pairs (units of δ/2) and all geometric predicates are
//! exact:
//!
//! * faces: both coordinates even, `x + y ≡ 0 (mod 4)`;
//! * vertices: both even, `x + y ≡ 2 (mod 4)`;
//! * edge midpoints: both odd;
//! * corner midpoints: exactly one coordinate odd.

use num_complex::Complex64;

/// Lattice coordinate in units of δ/2.
pub type Coord = (i32, i32);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SiteKind {
    Face,
    Vertex,
    EdgeMid,
    CornerMid,
}

/// Corner type τ: the nearest vertex lies in the direction −τ⁻².
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CornerType {
    /// τ = 1, vertex to the west (real corners).
    One,
    /// τ = i, vertex to the east (imaginary corners).
    I,
    /// τ = λ = e^{iπ/4}, vertex to the north.
    Lambda,
    /// τ = λ̄, vertex to the south.
    LambdaBar,
}

impl CornerType {
    /// The unit complex τ itself (with λ on the upper half-plane).
    pub fn tau(self) -> Complex64 {
        let r = std::f64::consts::FRAC_1_SQRT_2;
        match self {
            CornerType::One => Complex64::new(1.0, 0.0),
            CornerType::I => Complex64::new(0.0, 1.0),
            CornerType::Lambda => Complex64::new(r, r),
            CornerType::LambdaBar => Complex64::new(r, -r),
        }
    }

    /// Offset from the corner midpoint to its vertex, in half-units.
    pub fn vertex_offset(self) -> Coord {
        match self {
            CornerType::One => (-1, 0),
            CornerType::I => (1, 0),
            CornerType::Lambda => (0, 1),
            CornerType::LambdaBar => (0, -1),
        }
    }

    pub fn is_real_or_imaginary(self) -> bool {
        matches!(self, CornerType::One | CornerType::I)
    }
}

pub fn site_kind(c: Coord) -> SiteKind {
    let (x, y) = c;
    match (x & 1, y & 1) {
        (0, 0) => {
            if (x + y).rem_euclid(4) == 0 {
                SiteKind::Face
            } else {
                SiteKind::Vertex
            }
        }
        (1, 1) => SiteKind::EdgeMid,
        _ => SiteKind::CornerMid,
    }
}

pub fn is_face(c: Coord) -> bool {
    site_kind(c) == SiteKind::Face
}

pub fn is_vertex(c: Coord) -> bool {
    site_kind(c) == SiteKind::Vertex
}

/// Corner type from the midpoint coordinate alone.
///
/// A corner midpoint has exactly one odd coordinate; the vertex sits at the
/// axis neighbour whose coordinate sum is `≡ 2 (mod 4)`.
pub fn corner_type(c: Coord) -> Option<CornerType> {
    let (x, y) = c;
    if site_kind(c) != SiteKind::CornerMid {
        return None;
    }
    if x & 1 == 1 {
        if (x - 1 + y).rem_euclid(4) == 2 {
            Some(CornerType::One)
        } else {
            Some(CornerType::I)
        }
    } else if (x + y + 1).rem_euclid(4) == 2 {
        Some(CornerType::Lambda)
    } else {
        Some(CornerType::LambdaBar)
    }
}

/// The two edge midpoints adjacent to a corner, ordered as `(e_minus, e_plus)`
/// where `e_minus = c - τ⁻² i δ/2` enters the `e^{+iΘ}`-rotated projection of
/// the s-holomorphicity relation (the orientation satisfied by the contour
/// fermion).
pub fn corner_edges(c: Coord) -> Option<(Coord, Coord)> {
    let t = corner_type(c)?;
    let (x, y) = c;
    Some(match t {
        // τ⁻² i = i: e∓ = c ∓ (0, 1)
        CornerType::One => ((x, y - 1), (x, y + 1)),
        // τ⁻² i = -i: e∓ = c ± (0, 1)
        CornerType::I => ((x, y + 1), (x, y - 1)),
        // τ⁻² i = 1: e∓ = c ∓ (1, 0)
        CornerType::Lambda => ((x - 1, y), (x + 1, y)),
        // τ⁻² i = -1: e∓ = c ± (1, 0)
        CornerType::LambdaBar => ((x + 1, y), (x - 1, y)),
    })
}

/// Endpoints (vertices) of the edge with the given midpoint.
pub fn edge_endpoints(e: Coord) -> Option<(Coord, Coord)> {
    let (x, y) = e;
    if site_kind(e) != SiteKind::EdgeMid {
        return None;
    }
    // Exactly one of the two diagonals has vertex-parity endpoints.
    let a = (x + 1, y + 1);
    if is_vertex(a) {
        Some(((x - 1, y - 1), a))
    } else {
        Some(((x - 1, y + 1), (x + 1, y - 1)))
    }
}

/// The two faces flanking an edge (one may lie outside a domain).
pub fn edge_faces(e: Coord) -> Option<(Coord, Coord)> {
    let (x, y) = e;
    if site_kind(e) != SiteKind::EdgeMid {
        return None;
    }
    let a = (x + 1, y + 1);
    if is_vertex(a) {
        Some(((x - 1, y + 1), (x + 1, y - 1)))
    } else {
        Some(((x - 1, y - 1), (x + 1, y + 1)))
    }
}

/// Complex position of a site given the mesh size.
pub fn position(c: Coord, delta: f64) -> Complex64 {
    Complex64::new(0.5 * delta * c.0 as f64, 0.5 * delta * c.1 as f64)
}
