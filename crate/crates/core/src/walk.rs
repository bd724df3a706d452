//! Killed (extinguished) random walks and the fields they represent.
//!
//! The Θ-massive harmonic measure is the hitting probability of a simple
//! random walk killed at each step with probability `q/(1+q)`,
//! `q = 2sin²(2Θ)/cos(4Θ)`; it solves `(4+4q) u = Σ_nb u` with `u = 1` at
//! the target and `0` on the rest of the boundary. The slit-plane measure
//! yields the explicit one-point spinor, and its weighted line sum along
//! rows gives the square-root-like `G` spinor.

use crate::cover::cut_crossings;
use crate::field::SpinorField;
use crate::geom::{corner_type, site_kind, Coord, SiteKind};
use crate::params::MassParams;
use crate::sparse::{cg, CgResult};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum WalkError {
    #[error("site {0:?} is not part of the walk graph")]
    BadSite((i32, i32)),
    #[error("walk graph is empty")]
    Empty,
}

/// Killed-walk parameters derived from the phase angle.
#[derive(Debug, Clone, Copy)]
pub struct KilledWalkParams {
    pub theta: f64,
}

impl KilledWalkParams {
    pub fn q(&self) -> f64 {
        let s = (2.0 * self.theta).sin();
        2.0 * s * s / (4.0 * self.theta).cos()
    }

    /// Extinction probability per step, `q/(1+q)`.
    pub fn kill_prob(&self) -> f64 {
        let q = self.q();
        q / (1.0 + q)
    }
}

const OUTSIDE: i32 = -1;
const TARGET: i32 = -2;

/// Finite walk graph on Z² with one unit-value target site and zero
/// absorption elsewhere on the boundary.
pub struct WalkGraph {
    min: (i32, i32),
    dims: (usize, usize),
    code: Vec<i32>,
    pub sites: Vec<(i32, i32)>,
    pub target: (i32, i32),
    adj: Vec<[i32; 4]>,
}

impl WalkGraph {
    /// The slit plane: sites of the re-indexed walk lattice within the given
    /// radius (measured in lattice units of the ambient `(1+i)Z²` lattice),
    /// slit along the negative real axis, target at the origin.
    pub fn slit_plane(radius: f64) -> WalkGraph {
        let r2 = radius * radius / 2.0;
        let n = (radius / 2.0_f64.sqrt()).ceil() as i32 + 1;
        let mut sites = Vec::new();
        for p in -n..=n {
            for q in -n..=n {
                if (p * p + q * q) as f64 <= r2
                    && !(p == 0 && q == 0)
                    && !(p < 0 && q == -p)
                {
                    sites.push((p, q));
                }
            }
        }
        WalkGraph::from_sites(sites, (0, 0))
    }

    /// Build from an explicit interior-site list; every lattice neighbour
    /// outside the list is absorbing with value zero, except the target.
    pub fn from_sites(mut sites: Vec<(i32, i32)>, target: (i32, i32)) -> WalkGraph {
        sites.sort_unstable();
        sites.dedup();
        sites.retain(|&s| s != target);
        let min_p = sites.iter().map(|s| s.0).min().unwrap_or(0).min(target.0) - 1;
        let min_q = sites.iter().map(|s| s.1).min().unwrap_or(0).min(target.1) - 1;
        let max_p = sites.iter().map(|s| s.0).max().unwrap_or(0).max(target.0) + 1;
        let max_q = sites.iter().map(|s| s.1).max().unwrap_or(0).max(target.1) + 1;
        let dims = (
            (max_p - min_p + 1) as usize,
            (max_q - min_q + 1) as usize,
        );
        let mut code = vec![OUTSIDE; dims.0 * dims.1];
        let at = |p: i32, q: i32| (p - min_p) as usize * dims.1 + (q - min_q) as usize;
        for (i, &(p, q)) in sites.iter().enumerate() {
            code[at(p, q)] = i as i32;
        }
        code[at(target.0, target.1)] = TARGET;
        let adj: Vec<[i32; 4]> = sites
            .iter()
            .map(|&(p, q)| {
                [(1, 0), (-1, 0), (0, 1), (0, -1)].map(|d| {
                    let (np, nq) = (p + d.0, q + d.1);
                    if np <= min_p || np >= min_p + dims.0 as i32
                        || nq <= min_q || nq >= min_q + dims.1 as i32
                    {
                        OUTSIDE
                    } else {
                        code[at(np, nq)]
                    }
                })
            })
            .collect();
        WalkGraph {
            min: (min_p, min_q),
            dims,
            code,
            sites,
            target,
            adj,
        }
    }

    fn code_at(&self, p: i32, q: i32) -> i32 {
        if p < self.min.0
            || q < self.min.1
            || p >= self.min.0 + self.dims.0 as i32
            || q >= self.min.1 + self.dims.1 as i32
        {
            OUTSIDE
        } else {
            self.code[(p - self.min.0) as usize * self.dims.1 + (q - self.min.1) as usize]
        }
    }

    /// Exact massive harmonic measure of the target, by conjugate gradients.
    pub fn solve(&self, params: KilledWalkParams, tol: f64) -> (Vec<f64>, CgResult) {
        let q4 = 4.0 + 4.0 * params.q();
        let adj = &self.adj;
        let apply = |x: &[f64], y: &mut [f64]| {
            y.par_iter_mut().enumerate().for_each(|(i, yi)| {
                let mut s = q4 * x[i];
                for &n in &adj[i] {
                    if n >= 0 {
                        s -= x[n as usize];
                    }
                }
                *yi = s;
            });
        };
        let mut b = vec![0.0; self.sites.len()];
        for (i, row) in adj.iter().enumerate() {
            b[i] = row.iter().filter(|&&n| n == TARGET).count() as f64;
        }
        cg(apply, &b, tol, 100 * (self.sites.len() as f64).sqrt() as usize + 1000)
    }

    /// Field value at any lattice site: solved value inside, 1 at the target,
    /// 0 outside.
    pub fn value_at(&self, sol: &[f64], site: (i32, i32)) -> f64 {
        match self.code_at(site.0, site.1) {
            TARGET => 1.0,
            OUTSIDE => 0.0,
            i => sol[i as usize],
        }
    }

    /// Is the site stored (interior or target)?
    pub fn contains(&self, site: (i32, i32)) -> bool {
        self.code_at(site.0, site.1) != OUTSIDE
    }

    /// Monte Carlo estimate of the hitting probability from `start`.
    /// Returns (estimate, standard error). Walks are seeded individually
    /// from `(seed, walk_index)` so the result is independent of scheduling.
    pub fn monte_carlo(
        &self,
        params: KilledWalkParams,
        start: (i32, i32),
        n_walks: u64,
        seed: u64,
    ) -> Result<(f64, f64), WalkError> {
        match self.code_at(start.0, start.1) {
            TARGET => return Ok((1.0, 0.0)),
            OUTSIDE => return Err(WalkError::BadSite(start)),
            _ => {}
        }
        let kill = params.kill_prob();
        let hits: u64 = (0..n_walks)
            .into_par_iter()
            .map(|w| {
                let mut rng = ChaCha8Rng::seed_from_u64(mix(seed, w));
                let mut pos = start;
                loop {
                    if kill > 0.0 && rng.gen::<f64>() < kill {
                        return 0u64;
                    }
                    let dir = rng.gen_range(0..4u8);
                    let d = [(1, 0), (-1, 0), (0, 1), (0, -1)][dir as usize];
                    pos = (pos.0 + d.0, pos.1 + d.1);
                    match self.code_at(pos.0, pos.1) {
                        TARGET => return 1u64,
                        OUTSIDE => return 0u64,
                        _ => {}
                    }
                }
            })
            .sum();
        let p = hits as f64 / n_walks as f64;
        let stderr = (p * (1.0 - p) / n_walks as f64).sqrt();
        Ok((p, stderr))
    }
}

fn mix(seed: u64, idx: u64) -> u64 {
    // SplitMix64 over the pair.
    let mut z = seed ^ idx.wrapping_mul(0x9E3779B97F4A7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
    z ^ (z >> 31)
}

/// Exact one-dimensional survival probability: the killed walk on Z started
/// at distance `j` from the target hits it with probability
/// `min(Γ, 1/Γ)^{j/2}` with `Γ = tan²(π/4 + 2Θ)`.
pub fn survival_1d(theta: f64, j: u32) -> f64 {
    let g = (std::f64::consts::FRAC_PI_4 + 2.0 * theta).tan().powi(2);
    let root = if g <= 1.0 { g.sqrt() } else { g.sqrt().recip() };
    root.powi(j as i32)
}

/// Monte Carlo version of `survival_1d` with a far absorbing floor.
pub fn survival_1d_mc(theta: f64, j: u32, n_walks: u64, seed: u64) -> (f64, f64) {
    let kill = KilledWalkParams { theta }.kill_prob();
    let floor = -(10 * j as i64 + 400);
    let hits: u64 = (0..n_walks)
        .into_par_iter()
        .map(|w| {
            let mut rng = ChaCha8Rng::seed_from_u64(mix(seed, w));
            let mut pos = -(j as i64);
            loop {
                if kill > 0.0 && rng.gen::<f64>() < kill {
                    return 0u64;
                }
                pos += if rng.gen::<bool>() { 1 } else { -1 };
                if pos == 0 {
                    return 1u64;
                }
                if pos <= floor {
                    return 0u64;
                }
            }
        })
        .sum();
    let p = hits as f64 / n_walks as f64;
    (p, (p * (1.0 - p) / n_walks as f64).sqrt())
}

/// The explicit full-plane one-point spinor on `[C_δ, 0]`, truncated at
/// `radius` (in length units) with zero data beyond.
pub struct OnePointSpinor {
    pub params: MassParams,
    pub radius: f64,
    /// Canonical-lift values on corners and edges, branch face at the origin.
    pub field: SpinorField,
    pub cg_info: CgResult,
}

/// Walk-lattice coordinates of a real corner, when it is of type C¹.
pub fn real_corner_to_walk(c: Coord) -> Option<(i32, i32)> {
    let (x, y) = c;
    if corner_type(c) != Some(crate::geom::CornerType::One) {
        return None;
    }
    Some(((x + y - 3) / 4, (y - x + 3) / 4))
}

/// Walk-lattice coordinates of the reflected argument for a Cⁱ corner.
pub fn imag_corner_to_walk(c: Coord) -> Option<(i32, i32)> {
    let (x, y) = c;
    if corner_type(c) != Some(crate::geom::CornerType::I) {
        return None;
    }
    Some(((1 - x - y) / 4, (x - y - 1) / 4))
}

pub fn one_point_spinor(radius: f64, params: MassParams) -> OnePointSpinor {
    let delta = params.delta;
    let r_lat = radius / delta;
    let graph = WalkGraph::slit_plane(r_lat);
    let (sol, cg_info) = graph.solve(KilledWalkParams { theta: params.theta }, 1e-13);

    let mut field = SpinorField::new(delta, params.theta, vec![(0, 0)]);
    let half_extent = (2.0 * r_lat).ceil() as i32 + 4;
    // Corner values from the harmonic measure.
    for x in -half_extent..=half_extent {
        for y in -half_extent..=half_extent {
            let c = (x, y);
            if site_kind(c) != SiteKind::CornerMid {
                continue;
            }
            if c == (1, 0) {
                continue; // the singular corner carries no value
            }
            if let Some(w) = real_corner_to_walk(c) {
                if graph.contains(w) || (w.0 < 0 && w.1 == -w.0) {
                    // The X⁺ section is continuous across the negative axis;
                    // expressed in canonical values (cut along the positive
                    // ray) the lower half-plane flips sign.
                    let sign = if y < 0 { -1.0 } else { 1.0 };
                    field.insert(c, Complex64::new(sign * graph.value_at(&sol, w), 0.0));
                }
            } else if let Some(w) = imag_corner_to_walk(c) {
                if graph.contains(w) || (w.0 < 0 && w.1 == -w.0) {
                    field.insert(
                        c,
                        Complex64::new(0.0, -graph.value_at(&sol, w)),
                    );
                }
            }
        }
    }
    // Edges from the two flanking real/imaginary corners, then the remaining
    // corner types by projection.
    let branch = [(0, 0)];
    let mut edge_vals = Vec::new();
    for x in -half_extent..=half_extent {
        for y in -half_extent..=half_extent {
            let e = (x, y);
            if site_kind(e) != SiteKind::EdgeMid {
                continue;
            }
            let cn = (x, y + 1);
            let cs = (x, y - 1);
            let (Some(vn), Some(vs)) = (field.value(cn), field.value(cs)) else {
                continue;
            };
            let sn = if cut_crossings(&branch, e, cn) % 2 == 0 { 1.0 } else { -1.0 };
            let ss = if cut_crossings(&branch, e, cs) % 2 == 0 { 1.0 } else { -1.0 };
            // Minus-class edges (x+y ≡ 2 mod 4) recombine with e^{-iΘ}.
            let rot = if (x + y).rem_euclid(4) == 2 {
                Complex64::from_polar(1.0, -params.theta)
            } else {
                Complex64::from_polar(1.0, params.theta)
            };
            edge_vals.push((e, rot * (sn * vn + ss * vs)));
        }
    }
    for (e, v) in edge_vals {
        field.insert(e, v);
    }
    // The two edges at the singular corner recombine the regular flanking
    // corner with the ascribed value −i (its from-below counterpart enters
    // through the antipodal lift, giving −i again in canonical terms).
    let minus_i = Complex64::new(0.0, -1.0);
    if let Some(vn) = field.value((1, 2)) {
        field.insert(
            (1, 1),
            Complex64::from_polar(1.0, -params.theta) * (vn + minus_i),
        );
    }
    if let Some(vs) = field.value((1, -2)) {
        field.insert(
            (1, -1),
            Complex64::from_polar(1.0, params.theta) * (vs + minus_i),
        );
    }
    let mut lam_vals = Vec::new();
    for x in -half_extent..=half_extent {
        for y in -half_extent..=half_extent {
            let c = (x, y);
            if corner_type(c).map_or(true, |t| t.is_real_or_imaginary()) {
                continue;
            }
            if let Some(v) = field.corner_from_edges(c) {
                lam_vals.push((c, v));
            }
        }
    }
    for (c, v) in lam_vals {
        field.insert(c, v);
    }

    OnePointSpinor {
        params,
        radius,
        field,
        cg_info,
    }
}

/// The square-root-like spinor `G(z) = δ Σ_j Γ^j F(z − 2jδ)` on the real
/// corners, with the sheet rule realised through canonical values.
pub struct GSpinor {
    pub params: MassParams,
    pub gamma: f64,
    pub values: std::collections::HashMap<Coord, f64>,
}

pub fn build_g(op: &OnePointSpinor) -> GSpinor {
    let gamma = op.params.gamma_weight();
    let delta = op.params.delta;
    let mut values = std::collections::HashMap::new();
    for (c, v) in op.field.sites() {
        if corner_type(c) != Some(crate::geom::CornerType::One) {
            continue;
        }
        let mut sum = 0.0;
        let mut weight = delta;
        let mut site = c;
        loop {
            match op.field.value(site) {
                Some(f) => sum += weight * f.re,
                None => break,
            }
            weight *= gamma;
            if weight.abs() < 1e-16 * delta {
                break;
            }
            site = (site.0 - 4, site.1);
        }
        let _ = v;
        values.insert(c, sum);
    }
    GSpinor {
        params: op.params,
        gamma,
        values,
    }
}

impl GSpinor {
    /// Residual of `(Δ^δ − M_H²) G = 0` on the slit domain X⁺, where the
    /// neighbour values across the branch cut enter with a flipped sign.
    pub fn slit_lap_residual(&self, c: Coord) -> Option<f64> {
        let branch = [(0, 0)];
        let g0 = *self.values.get(&c)?;
        let s = (2.0 * self.params.theta).sin();
        let m2 = 8.0 * s * s / (4.0 * self.params.theta).cos();
        let mut acc = -(4.0 + m2) * g0;
        for d in [(2, 2), (-2, 2), (-2, -2), (2, -2)] {
            let n = (c.0 + d.0, c.1 + d.1);
            let gn = *self.values.get(&n)?;
            let sign = if cut_crossings(&branch, c, n) % 2 == 0 {
                1.0
            } else {
                -1.0
            };
            acc += sign * gn;
        }
        Some(acc.abs())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hm_target_adjacent_in_unit_interval() {
        let g = WalkGraph::slit_plane(24.0);
        let (sol, info) = g.solve(KilledWalkParams { theta: -0.05 }, 1e-13);
        assert!(info.residual < 1e-12);
        let v = g.value_at(&sol, (1, 0));
        assert!(v > 0.0 && v < 1.0);
        // Maximum principle.
        let max = sol.iter().cloned().fold(0.0f64, f64::max);
        assert!(max <= 1.0 + 1e-12);
    }

    #[test]
    fn killing_reduces_hitting_probability() {
        let g = WalkGraph::slit_plane(24.0);
        let (m0, _) = g.solve(KilledWalkParams { theta: 0.0 }, 1e-13);
        let (mm, _) = g.solve(KilledWalkParams { theta: -0.06 }, 1e-13);
        for i in 0..m0.len() {
            assert!(mm[i] <= m0[i] + 1e-12);
        }
    }

    #[test]
    fn massless_profile_has_square_root_tip() {
        // u(d) ~ d^{-1/2} along the positive axis away from truncation.
        let g = WalkGraph::slit_plane(512.0);
        let (sol, _) = g.solve(KilledWalkParams { theta: 0.0 }, 1e-12);
        // Walk sites on the positive real axis are (k, k)... the axis in
        // (p, q) coordinates is p = q ≥ 1 (u = 2p). Fit the log-log slope.
        let mut pts = Vec::new();
        for k in [2, 4, 8, 16] {
            let v = g.value_at(&sol, (k, k));
            assert!(v > 0.0);
            pts.push(((2.0 * (k as f64)).ln(), v.ln()));
        }
        let n = pts.len() as f64;
        let sx: f64 = pts.iter().map(|p| p.0).sum();
        let sy: f64 = pts.iter().map(|p| p.1).sum();
        let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
        let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
        let slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
        assert!(
            (slope + 0.5).abs() < 0.1,
            "tip exponent {} not ~ -1/2",
            slope
        );
    }

    #[test]
    fn monte_carlo_agrees_with_exact() {
        let g = WalkGraph::slit_plane(16.0);
        let p = KilledWalkParams { theta: -0.08 };
        let (sol, _) = g.solve(p, 1e-13);
        for &start in &[(1, 0), (3, 2), (-2, 3)] {
            let exact = g.value_at(&sol, start);
            let (est, se) = g.monte_carlo(p, start, 40_000, 7).unwrap();
            assert!(
                (est - exact).abs() <= 4.0 * se.max(1e-4),
                "start {:?}: {} vs {} (se {})",
                start,
                est,
                exact,
                se
            );
        }
        // Target itself is exact.
        assert_eq!(g.monte_carlo(p, (0, 0), 10, 1).unwrap(), (1.0, 0.0));
    }

    #[test]
    fn monte_carlo_is_deterministic() {
        let g = WalkGraph::slit_plane(12.0);
        let p = KilledWalkParams { theta: -0.05 };
        let a = g.monte_carlo(p, (2, 1), 20_000, 42).unwrap();
        let b = g.monte_carlo(p, (2, 1), 20_000, 42).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn one_dimensional_survival_closed_form() {
        // Massless walk always arrives.
        assert!((survival_1d(0.0, 7) - 1.0).abs() < 1e-15);
        let theta = -0.07;
        for j in [1u32, 3, 8, 20] {
            let exact = survival_1d(theta, j);
            let (est, se) = survival_1d_mc(theta, j, 60_000, 11);
            assert!(
                (est - exact).abs() <= 4.0 * se.max(1e-4),
                "j={}: {} vs {} (se {})",
                j,
                est,
                exact,
                se
            );
        }
    }

    #[test]
    fn one_point_tip_and_slit_values() {
        let params = MassParams::from_mass(0.25, -1.0).unwrap();
        let op = one_point_spinor(6.0, params);
        // F(3δ/2) = 1 on the canonical sheet.
        let tip = op.field.value((3, 0)).unwrap();
        assert!((tip.re - 1.0).abs() < 1e-12 && tip.im.abs() < 1e-14);
        // Zero on the real-corner lift of the negative axis.
        for x in [-1, -5, -9] {
            let v = op.field.value((x, 0)).unwrap();
            assert!(v.norm() < 1e-14);
        }
        // Imaginary corners on the positive axis vanish too.
        let v = op.field.value((5, 0)).unwrap();
        assert!(v.norm() < 1e-14);
    }

    #[test]
    fn one_point_is_s_holomorphic() {
        let params = MassParams::from_mass(0.25, -1.0).unwrap();
        let op = one_point_spinor(10.0, params);
        // Truncation effects decay exponentially inward; within |z| <= 3 the
        // residuals sit at the conjugate-gradient tolerance.
        let mut max_r = 0.0f64;
        let mut checked = 0;
        for (c, _) in op.field.sites() {
            if site_kind(c) != SiteKind::CornerMid {
                continue;
            }
            if c == (1, 0) || c == (-1, 0) {
                continue;
            }
            if c.0 * c.0 + c.1 * c.1 > 24 * 24 {
                continue;
            }
            if let Some(r) = op.field.sholo_residual(c) {
                checked += 1;
                if r > max_r {
                    max_r = r;
                }
            }
        }
        assert!(checked > 500);
        assert!(max_r < 1e-9, "sholo residual {}", max_r);
        // The prescribed singular projections come out of the measure.
        let th = params.theta;
        let e_n = op.field.value((1, 1)).unwrap();
        let pn = (Complex64::from_polar(1.0, th) * e_n).im;
        assert!((pn + 1.0).abs() < 1e-9, "north projection {}", pn);
    }

    #[test]
    fn one_point_truncation_stability() {
        let params = MassParams::from_mass(0.5, -1.0).unwrap();
        let a = one_point_spinor(10.0, params);
        let b = one_point_spinor(20.0, params);
        let mut max_d = 0.0f64;
        for (c, va) in a.field.sites() {
            if c.0 * c.0 + c.1 * c.1 > 4 * 4 {
                continue;
            }
            if let Some(vb) = b.field.value(c) {
                max_d = max_d.max((va - vb).norm());
            }
        }
        assert!(max_d < 1e-10, "doubling R moved near-origin values by {}", max_d);
    }

    #[test]
    fn g_spinor_is_massive_harmonic_across_the_cut() {
        let params = MassParams::from_mass(0.25, -1.0).unwrap();
        let op = one_point_spinor(8.0, params);
        let g = build_g(&op);
        // Away from the positive ray the telescoping cancels termwise; this
        // includes the rows hugging the Dirichlet slit on the negative axis.
        let mut max_r = 0.0f64;
        let mut n = 0;
        for x in (-17..=17).step_by(1) {
            for y in -8..=8 {
                let c = (x, y);
                if corner_type(c) != Some(crate::geom::CornerType::One) {
                    continue;
                }
                if y == 0 {
                    continue;
                }
                if let Some(r) = g.slit_lap_residual(c) {
                    max_r = max_r.max(r);
                    n += 1;
                }
            }
        }
        assert!(n > 20, "checked only {} sites", n);
        assert!(max_r < 1e-8, "G lap residual off the ray {}", max_r);
        // G vanishes on the slit itself, where its defect would sit.
        for x in [-1, -5] {
            assert!(g.values.get(&(x, 0)).unwrap().abs() < 1e-14);
        }
        // On the ray the telescoping collapses everything onto the tip
        // defect, which then propagates geometrically: the residual of
        // lap G(x + 2δ) = Γ · lap G(x) is at solver tolerance.
        let lap = |x: i32| {
            let m2 = params.m_h_sq();
            let mut acc = -(4.0 + m2) * g.values[&(x, 0)];
            acc += g.values[&(x + 2, 2)] + g.values[&(x - 2, 2)];
            acc -= g.values[&(x + 2, -2)] + g.values[&(x - 2, -2)];
            acc
        };
        let gamma = params.gamma_weight();
        for x in [3i32, 7, 11, 15] {
            let cascade = (lap(x + 4) - gamma * lap(x)).abs();
            assert!(cascade < 1e-10, "cascade residual {} at x={}", cascade, x);
        }
        assert!(lap(3).abs() > 1e-3, "tip defect should be visible");
    }
}
