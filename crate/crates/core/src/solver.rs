//! Sparse solver for the massive s-holomorphicity boundary value problem,
//! the square integral `H`, and the identity diagnostics built on them.
//!
//! Unknowns are the complex values on interior edges (two reals each) plus
//! one real per boundary edge along the line `nu_out^{-1/2} R`. Every corner
//! contributes one real equation — equality of the two phase-rotated
//! projections — except the singular corner `a_1 + δ/2`, which instead
//! prescribes the two projections of its adjacent edges. The system is
//! solved dense (SVD) when small and by LSQR otherwise.

use crate::cover::{DoubleCover, LiftedSite};
use crate::field::{a_theta, b_theta, SpinorField};
use crate::geom::{self, corner_type, site_kind, Coord, SiteKind};
use crate::params::MassParams;
use crate::sparse::{lsqr, Csr, CsrBuilder};
use num_complex::Complex64;
use std::collections::{HashMap, VecDeque};
use std::f64::consts::{FRAC_PI_4, FRAC_PI_8};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SolverError {
    #[error("cover has no branch face; the fermion needs a monodromy")]
    NoBranch,
    #[error("corner {0:?} misses an adjacent edge")]
    MissingEdge(Coord),
    #[error("linear solve failed: {0}")]
    LinAlg(String),
    #[error("solution residual {0:.3e} above tolerance {1:.3e}")]
    NotConverged(f64, f64),
}

#[derive(Debug, Clone, Copy)]
pub struct SolverOptions {
    /// Relative tolerance of the iterative solve.
    pub atol: f64,
    pub max_iter: usize,
    /// Unknown-count threshold below which a dense SVD is used.
    pub dense_threshold: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            atol: 1e-13,
            max_iter: 200_000,
            dense_threshold: 1600,
        }
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct SolveReport {
    pub unknowns: usize,
    pub rows: usize,
    pub iterations: usize,
    /// ‖Ax − b‖ of the assembled system.
    pub residual: f64,
}

/// Solution of the discrete boundary value problem.
pub struct FermionField {
    pub params: MassParams,
    pub cover: DoubleCover,
    edge_vals: Vec<Complex64>,
    bedge_vals: Vec<Complex64>,
    pub report: SolveReport,
}

/// One real s-holomorphicity row: Re[τ̄ e^{iΘ} s₋ F(e₋)] = Re[τ̄ e^{-iΘ} s₊ F(e₊)].
fn corner_row(
    cover: &DoubleCover,
    theta: f64,
    c: Coord,
) -> Result<Vec<(Coord, Complex64)>, SolverError> {
    let tau = corner_type(c).ok_or(SolverError::MissingEdge(c))?.tau();
    let (em, ep) = geom::corner_edges(c).ok_or(SolverError::MissingEdge(c))?;
    let sm = cover.adjacency_sign(c, em);
    let sp = cover.adjacency_sign(c, ep);
    let qm = tau.conj() * Complex64::from_polar(1.0, theta) * sm;
    let qp = tau.conj() * Complex64::from_polar(1.0, -theta) * sp;
    Ok(vec![(em, qm), (ep, -qp)])
}

pub fn solve_fermion(
    cover: &DoubleCover,
    params: MassParams,
    opts: &SolverOptions,
) -> Result<FermionField, SolverError> {
    let dom = &cover.dom;
    let c0 = cover.singular_corner().ok_or(SolverError::NoBranch)?;
    let theta = params.theta;
    let n_e = dom.edges.len();
    let n_b = dom.boundary_edges.len();
    let ncols = 2 * n_e + n_b;

    // Fixed square-root branch of each boundary normal.
    let nu_inv_sqrt: Vec<Complex64> = dom
        .nu_out
        .iter()
        .map(|nu| Complex64::from_polar(1.0, -0.5 * nu.arg()))
        .collect();

    // Column coefficients of Re[q F(e)] or Im[q F(e)] for one edge.
    let cols_of = |e: Coord, q: Complex64, imag: bool| -> Vec<(u32, f64)> {
        let q = if imag {
            // Im[q w] = Re[-i q w]
            q * Complex64::new(0.0, -1.0)
        } else {
            q
        };
        if let Some(i) = dom.edge_id(e) {
            vec![
                (2 * i, q.re),
                (2 * i + 1, -q.im),
            ]
        } else if let Some(k) = dom.boundary_edge_id(e) {
            let w = nu_inv_sqrt[k as usize];
            vec![((2 * n_e) as u32 + k, (q * w).re)]
        } else {
            vec![]
        }
    };

    let mut builder = CsrBuilder::new(ncols);
    let mut rhs = Vec::new();
    for c in dom.all_corners() {
        if c == c0 {
            continue;
        }
        let mut row = Vec::new();
        for (e, q) in corner_row(cover, theta, c)? {
            let cols = cols_of(e, q, false);
            if cols.is_empty() {
                return Err(SolverError::MissingEdge(c));
            }
            row.extend(cols);
        }
        builder.push_row(&row);
        rhs.push(0.0);
    }
    // Singularity rows on the lifts adjacent to the fixed origin lift:
    // Im[e^{iΘ} F(e_N)] = -1 and Im[e^{-iΘ} F(e_S)] = +1.
    let e_n = (c0.0, c0.1 + 1);
    let e_s = (c0.0, c0.1 - 1);
    let sn = cover.adjacency_sign(c0, e_n);
    let ss = cover.adjacency_sign(c0, e_s);
    builder.push_row(&cols_of(e_n, Complex64::from_polar(1.0, theta) * sn, true));
    rhs.push(-1.0);
    builder.push_row(&cols_of(e_s, Complex64::from_polar(1.0, -theta) * ss, true));
    rhs.push(1.0);

    let a = builder.finish();
    let nrows = a.nrows;

    let (x, iterations, residual) = if ncols <= opts.dense_threshold {
        solve_dense(&a, &rhs)?
    } else {
        let at = a.transpose();
        let (x, info) = lsqr(&a, &at, &rhs, opts.atol, opts.max_iter);
        (x, info.iterations, info.residual)
    };

    let rhs_norm = crate::sparse::norm2(&rhs);
    if !(residual <= 1e-8 * rhs_norm.max(1.0)) {
        return Err(SolverError::NotConverged(residual, 1e-8));
    }

    let edge_vals: Vec<Complex64> = (0..n_e)
        .map(|i| Complex64::new(x[2 * i], x[2 * i + 1]))
        .collect();
    let bedge_vals: Vec<Complex64> = (0..n_b)
        .map(|k| nu_inv_sqrt[k] * x[2 * n_e + k])
        .collect();

    Ok(FermionField {
        params,
        cover: cover.clone(),
        edge_vals,
        bedge_vals,
        report: SolveReport {
            unknowns: ncols,
            rows: nrows,
            iterations,
            residual,
        },
    })
}

fn solve_dense(a: &Csr, rhs: &[f64]) -> Result<(Vec<f64>, usize, f64), SolverError> {
    let mut m = nalgebra::DMatrix::<f64>::zeros(a.nrows, a.ncols);
    for i in 0..a.nrows {
        for k in a.indptr[i]..a.indptr[i + 1] {
            m[(i, a.indices[k] as usize)] += a.data[k];
        }
    }
    let b = nalgebra::DVector::from_column_slice(rhs);
    let svd = m.clone().svd(true, true);
    let x = svd
        .solve(&b, 1e-12)
        .map_err(|e| SolverError::LinAlg(e.to_string()))?;
    let r = (&m * &x - &b).norm();
    Ok((x.as_slice().to_vec(), 1, r))
}

impl FermionField {
    /// Canonical-lift value on an interior or boundary edge.
    pub fn edge_value(&self, e: Coord) -> Option<Complex64> {
        let dom = &self.cover.dom;
        if let Some(i) = dom.edge_id(e) {
            Some(self.edge_vals[i as usize])
        } else {
            dom.boundary_edge_id(e)
                .map(|k| self.bedge_vals[k as usize])
        }
    }

    /// Value at any lifted edge or corner (corners are derived projections;
    /// the singular corner carries no value).
    pub fn value(&self, z: LiftedSite) -> Option<Complex64> {
        let v = match site_kind(z.site) {
            SiteKind::EdgeMid => self.edge_value(z.site)?,
            SiteKind::CornerMid => {
                if Some(z.site) == self.cover.singular_corner() {
                    return None;
                }
                let tau = corner_type(z.site)?.tau();
                let (em, _) = geom::corner_edges(z.site)?;
                let s = self.cover.adjacency_sign(z.site, em);
                let f = self.edge_value(em)? * s;
                let rot = Complex64::from_polar(1.0, self.params.theta);
                tau * (tau.conj() * rot * f).re
            }
            _ => return None,
        };
        Some(if z.sheet == 0 { v } else { -v })
    }

    /// Flatten into a coordinate-keyed field (edges, boundary edges, corners).
    pub fn spinor_field(&self) -> SpinorField {
        let dom = &self.cover.dom;
        let mut f = SpinorField::new(dom.delta, self.params.theta, self.cover.branch.clone());
        for &e in dom.edges.iter().chain(dom.boundary_edges.iter()) {
            f.insert(e, self.edge_value(e).unwrap());
        }
        let c0 = self.cover.singular_corner();
        for c in dom.all_corners() {
            if Some(c) != c0 {
                f.insert(c, self.value(LiftedSite::canonical(c)).unwrap());
            }
        }
        f
    }

    /// Maximum s-holomorphicity residual over regular corners.
    pub fn max_sholo_residual(&self) -> f64 {
        let f = self.spinor_field();
        let c0 = self.cover.singular_corner();
        self.cover
            .dom
            .all_corners()
            .filter(|&c| Some(c) != c0)
            .filter_map(|c| f.sholo_residual(c))
            .fold(0.0, f64::max)
    }

    /// The two prescribed projections re-extracted from the solved edges,
    /// as (north, south); they should be (-1, +1).
    pub fn singular_projections(&self) -> (f64, f64) {
        let c0 = self.cover.singular_corner().unwrap();
        let th = self.params.theta;
        let e_n = (c0.0, c0.1 + 1);
        let e_s = (c0.0, c0.1 - 1);
        let vn = self.edge_value(e_n).unwrap() * self.cover.adjacency_sign(c0, e_n);
        let vs = self.edge_value(e_s).unwrap() * self.cover.adjacency_sign(c0, e_s);
        (
            (Complex64::from_polar(1.0, th) * vn).im,
            (Complex64::from_polar(1.0, -th) * vs).im,
        )
    }
}

/// The square integral: `H°` on faces (interior and boundary) and `H•` on
/// vertices, with both boundary constants pinned to zero.
pub struct SquareIntegral {
    pub h_faces: HashMap<Coord, f64>,
    pub h_vertices: HashMap<Coord, f64>,
    /// Maximum increment mismatch over all (face, vertex) incidences.
    pub loop_residual: f64,
    /// Maximum |H°| over boundary faces (constancy of the boundary value).
    pub boundary_face_spread: f64,
}

/// Squared corner amplitude entering the `H` increments; the singular corner
/// carries the prescribed unit modulus.
fn corner_amp_sq(field: &FermionField, c: Coord) -> Option<f64> {
    if Some(c) == field.cover.singular_corner() {
        return Some(1.0);
    }
    field
        .value(LiftedSite::canonical(c))
        .map(|v| v.norm_sqr())
}

pub fn build_square_integral(field: &FermionField) -> SquareIntegral {
    let dom = &field.cover.dom;
    let delta = dom.delta;
    let mut h_faces: HashMap<Coord, f64> = HashMap::new();
    let mut h_vertices: HashMap<Coord, f64> = HashMap::new();

    // Breadth-first integration from one boundary face set to zero.
    let start = dom.boundary_faces[0];
    h_faces.insert(start, 0.0);
    let mut queue = VecDeque::new();
    queue.push_back(start);
    while let Some(site) = queue.pop_front() {
        let is_face = site_kind(site) == SiteKind::Face;
        let h_here = if is_face {
            h_faces[&site]
        } else {
            h_vertices[&site]
        };
        for d in [(2, 0), (-2, 0), (0, 2), (0, -2)] {
            let other = (site.0 + d.0, site.1 + d.1);
            let corner = (site.0 + d.0 / 2, site.1 + d.1 / 2);
            let (known, their) = if is_face {
                if !dom.is_vertex(other) {
                    continue;
                }
                (h_vertices.contains_key(&other), &mut h_vertices)
            } else {
                if !(dom.is_face(other) || dom.boundary_face_id(other).is_some()) {
                    continue;
                }
                (h_faces.contains_key(&other), &mut h_faces)
            };
            if known {
                continue;
            }
            let Some(amp) = corner_amp_sq(field, corner) else {
                continue;
            };
            let inc = 2.0 * delta * amp;
            // H°(face) − H•(vertex) = inc.
            let h_other = if is_face { h_here - inc } else { h_here + inc };
            their.insert(other, h_other);
            queue.push_back(other);
        }
    }

    // Closure over every incidence.
    let mut loop_residual = 0.0f64;
    for c in dom.all_corners() {
        let t = corner_type(c).unwrap();
        let (vo, fo) = (t.vertex_offset(), t.vertex_offset());
        let v = (c.0 + vo.0, c.1 + vo.1);
        let f = (c.0 - fo.0, c.1 - fo.1);
        let (Some(&hf), Some(&hv)) = (h_faces.get(&f), h_vertices.get(&v)) else {
            continue;
        };
        if let Some(amp) = corner_amp_sq(field, c) {
            loop_residual = loop_residual.max((hf - hv - 2.0 * delta * amp).abs());
        }
    }
    let boundary_face_spread = dom
        .boundary_faces
        .iter()
        .filter_map(|c| h_faces.get(c))
        .fold(0.0f64, |m, &h| m.max(h.abs()));

    SquareIntegral {
        h_faces,
        h_vertices,
        loop_residual,
        boundary_face_spread,
    }
}

impl SquareIntegral {
    /// H• with the zero extension to boundary vertices.
    pub fn h_vertex(&self, dom: &crate::lattice::DiscreteDomain, v: Coord) -> Option<f64> {
        if let Some(&h) = self.h_vertices.get(&v) {
            Some(h)
        } else if dom.is_boundary_vertex(v) {
            Some(0.0)
        } else {
            None
        }
    }

    /// Discrete Laplacian of H with the boundary-modified conductances on
    /// the vertex lattice.
    pub fn lap_h(&self, field: &FermionField, x: Coord) -> Option<f64> {
        let dom = &field.cover.dom;
        let theta = field.params.theta;
        let c_bnd = (FRAC_PI_4 - 2.0 * theta).sin() / (FRAC_PI_8 + theta).cos().powi(2);
        let mut acc = 0.0;
        match site_kind(x) {
            SiteKind::Face => {
                let h0 = *self.h_faces.get(&x)?;
                for d in [(2, 2), (-2, 2), (-2, -2), (2, -2)] {
                    let hn = *self.h_faces.get(&(x.0 + d.0, x.1 + d.1))?;
                    acc += hn - h0;
                }
            }
            SiteKind::Vertex => {
                let h0 = *self.h_vertices.get(&x)?;
                for d in [(2, 2), (-2, 2), (-2, -2), (2, -2)] {
                    let w = (x.0 + d.0, x.1 + d.1);
                    if dom.is_vertex(w) {
                        acc += self.h_vertices.get(&w)? - h0;
                    } else if dom.is_boundary_vertex(w) {
                        acc += c_bnd * (0.0 - h0);
                    } else {
                        return None;
                    }
                }
            }
            _ => return None,
        }
        Some(acc)
    }

    /// (lhs, rhs, |lhs − rhs|) of the Laplacian identity eq. squareint_lap,
    /// using the verified closed-form coefficients.
    pub fn laplacian_h_identity(
        &self,
        field: &FermionField,
        sf: &SpinorField,
        x: Coord,
    ) -> Option<(f64, f64, f64)> {
        let lhs = self.lap_h(field, x)?;
        let delta = field.cover.dom.delta;
        let theta = field.params.theta;
        let sum = corner_sq_sum_with_singular(field, sf, x)?;
        let dconj = sf.dbar_conj_at(x)?.norm_sqr();
        let rhs = match site_kind(x) {
            SiteKind::Face => {
                2.0 * (FRAC_PI_4 + 2.0 * theta).sin()
                    * delta
                    * (a_theta(theta) * sum + b_theta(theta) * dconj)
            }
            SiteKind::Vertex => {
                2.0 * (FRAC_PI_4 - 2.0 * theta).sin()
                    * delta
                    * (-a_theta(-theta) * sum - b_theta(-theta) * dconj)
            }
            _ => return None,
        };
        Some((lhs, rhs, (lhs - rhs).abs()))
    }

    /// Face-pair increment identity eq. squareint.
    pub fn face_increment_residual(&self, field: &FermionField, f1: Coord, f2: Coord) -> Option<f64> {
        let e = ((f1.0 + f2.0) / 2, (f1.1 + f2.1) / 2);
        let fe = field.edge_value(e)?;
        let dom = &field.cover.dom;
        let dz = dom.position(f1) - dom.position(f2);
        let lhs = self.h_faces.get(&f1)? - self.h_faces.get(&f2)?;
        let rhs = 2.0_f64.sqrt()
            * (FRAC_PI_4 + 2.0 * field.params.theta).sin()
            * (fe * fe * dz).re;
        Some((lhs - rhs).abs())
    }

    /// Vertex-pair increment identity eq. squareint2.
    pub fn vertex_increment_residual(
        &self,
        field: &FermionField,
        v1: Coord,
        v2: Coord,
    ) -> Option<f64> {
        let e = ((v1.0 + v2.0) / 2, (v1.1 + v2.1) / 2);
        let fe = field.edge_value(e)?;
        let dom = &field.cover.dom;
        let dz = dom.position(v1) - dom.position(v2);
        let lhs = self.h_vertex(dom, v1)? - self.h_vertex(dom, v2)?;
        let rhs = 2.0_f64.sqrt()
            * (FRAC_PI_4 - 2.0 * field.params.theta).sin()
            * (fe * fe * dz).re;
        Some((lhs - rhs).abs())
    }

    /// Outer-normal relation across boundary edges: returns the maximum
    /// |equality residual| and the minimum of the normal increments.
    pub fn outer_normal(&self, field: &FermionField) -> (f64, f64) {
        let dom = &field.cover.dom;
        let theta = field.params.theta;
        let coef = 2.0 * (FRAC_PI_8 + theta).cos().powi(2) * dom.delta;
        let mut max_resid = 0.0f64;
        let mut min_inc = f64::MAX;
        for (k, &e) in dom.boundary_edges.iter().enumerate() {
            let (a, b) = geom::edge_endpoints(e).unwrap();
            let a_int = if dom.is_vertex(a) { a } else { b };
            let h = self.h_vertices.get(&a_int).copied().unwrap_or(0.0);
            let inc = -h;
            min_inc = min_inc.min(inc);
            let fe = field.bedge_vals[k].norm_sqr();
            max_resid = max_resid.max((inc - coef * fe).abs());
        }
        (max_resid, min_inc)
    }

    /// Both sides of the discrete Green's formula
    /// `Σ_V Δ^δ H• = [sin(π/4−2Θ)/cos²(π/8+Θ)] Σ_{∂E} ∂_ν H•`.
    pub fn greens_balance(&self, field: &FermionField) -> (f64, f64) {
        let dom = &field.cover.dom;
        let theta = field.params.theta;
        let lhs: f64 = dom
            .vertices
            .iter()
            .filter_map(|&v| self.lap_h(field, v))
            .sum();
        let mut flux = 0.0;
        for &e in &dom.boundary_edges {
            let (a, b) = geom::edge_endpoints(e).unwrap();
            let a_int = if dom.is_vertex(a) { a } else { b };
            flux += -self.h_vertices.get(&a_int).copied().unwrap_or(0.0);
        }
        let rhs = (FRAC_PI_4 - 2.0 * theta).sin() / (FRAC_PI_8 + theta).cos().powi(2) * flux;
        (lhs, rhs)
    }

    /// The discrete L² diagnostic: Σ δ A_{-Θ} |f(c)|² over corners away from
    /// the singular vertex, together with δ⁻¹ Δ^δ H•(a_1 + δ).
    pub fn l2_diagnostic(&self, field: &FermionField, sf: &SpinorField) -> (f64, f64) {
        let dom = &field.cover.dom;
        let delta = dom.delta;
        let a1 = field.cover.branch[0];
        let sing_vertex = (a1.0 + 2, a1.1);
        let scale = std::f64::consts::FRAC_2_PI * delta;
        let mut sum = 0.0;
        for c in dom.all_corners() {
            let t = corner_type(c).unwrap();
            let vo = t.vertex_offset();
            if (c.0 + vo.0, c.1 + vo.1) == sing_vertex {
                continue;
            }
            if let Some(v) = sf.value(c) {
                sum += delta * a_theta(-field.params.theta) * v.norm_sqr() / scale;
            }
        }
        let lap = self
            .lap_h(field, sing_vertex)
            .map(|l| l / delta)
            .unwrap_or(f64::NAN);
        (sum, lap)
    }
}

/// Corner square sum where the singular corner counts with unit modulus.
fn corner_sq_sum_with_singular(
    field: &FermionField,
    sf: &SpinorField,
    x: Coord,
) -> Option<f64> {
    let mut s = 0.0;
    for d in [(1, 0), (0, 1), (-1, 0), (0, -1)] {
        let c = (x.0 + d.0, x.1 + d.1);
        if Some(c) == field.cover.singular_corner() {
            s += 1.0;
        } else {
            s += sf.value(c)?.norm_sqr();
        }
    }
    Some(s)
}
