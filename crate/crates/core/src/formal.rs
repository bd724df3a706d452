//! Massive formal powers `Z_ν^{1,i}` and the coefficient machinery built on
//! them: Cauchy-type extraction on circles, rotation action, derivative
//! identities and finite-difference residuals of `∂_z̄ f = m f̄`.
//!
//! Spinor evaluations take `(r, θ)` with a caller-chosen branch; the helper
//! [`canonical_arg`] maps a point to θ ∈ [0, 2π), the branch cut along the
//! positive real axis used everywhere else in this crate.

use crate::bessel::{bessel_i_half, gamma_half_shifted};
use num_complex::Complex64;
use std::f64::consts::{PI, TAU};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    One,
    I,
}

/// Identity card of a formal power.
#[derive(Debug, Clone, Copy)]
pub struct FormalPowerId {
    pub nu: f64,
    pub kind: Kind,
    pub m: f64,
}

/// Branch θ ∈ [0, 2π) with the cut along the positive real axis.
pub fn canonical_arg(z: Complex64) -> f64 {
    let t = z.im.atan2(z.re);
    if t < 0.0 {
        t + TAU
    } else {
        t
    }
}

/// `Z_ν^1(re^{iθ}) = Γ(ν+1)|m|^{-ν}[e^{iνθ} I_ν(2|m|r) + sgn(m) e^{-i(ν+1)θ} I_{ν+1}(2|m|r)]`
/// and the `i`-partner with weights `i, -i`.
pub fn formal_power(id: FormalPowerId, r: f64, theta: f64) -> Complex64 {
    assert!(r > 0.0, "formal powers are singular at the origin");
    let am = id.m.abs();
    let sgn = if id.m >= 0.0 { 1.0 } else { -1.0 };
    let x = 2.0 * am * r;
    let pref = gamma_half_shifted(id.nu) * am.powf(-id.nu);
    let w_nu = Complex64::from_polar(1.0, id.nu * theta) * bessel_i_half(id.nu, x);
    let w_next =
        Complex64::from_polar(1.0, -(id.nu + 1.0) * theta) * bessel_i_half(id.nu + 1.0, x);
    match id.kind {
        Kind::One => pref * (w_nu + sgn * w_next),
        Kind::I => Complex64::new(0.0, 1.0) * pref * (w_nu - sgn * w_next),
    }
}

/// Evaluate at a complex point on the canonical branch.
pub fn formal_power_at(id: FormalPowerId, z: Complex64) -> Complex64 {
    formal_power(id, z.norm(), canonical_arg(z))
}

/// Trapezoid nodes used for circle quadrature; offset to avoid the branch
/// cut exactly.
pub fn circle_nodes(n: usize) -> Vec<f64> {
    (0..n).map(|k| TAU * (k as f64 + 0.5) / n as f64).collect()
}

/// `Re ∮ f g dz` over the circle of radius `r`, with samples of `f·g` at
/// the `circle_nodes` angles around the centre.
pub fn circle_integral_re(fg: &[Complex64], r: f64) -> f64 {
    let n = fg.len() as f64;
    let mut acc = Complex64::new(0.0, 0.0);
    for (k, v) in fg.iter().enumerate() {
        let phi = TAU * (k as f64 + 0.5) / n;
        let dz = Complex64::new(0.0, 1.0) * Complex64::from_polar(r, phi) * (TAU / n);
        acc += v * dz;
    }
    acc.re
}

/// The coefficient of `Z_ν^{kind}(z − a)` in the expansion of a massive
/// holomorphic spinor sampled on a circle of radius `r` around `a`.
///
/// `samples[k] = f(a + r e^{iφ_k})` on the branch θ = φ_k ∈ [0, 2π).
/// The extraction pairs `Z_ν^1` with `Z_{-1-ν}^i` and vice versa; the
/// orthogonality constant is `Re ∮ Z_ν^1 Z_{ν'}^i dz = -2π δ_{ν+ν', -1}`.
pub fn extract_coefficient(
    samples: &[Complex64],
    r: f64,
    nu: f64,
    kind: Kind,
    m: f64,
) -> f64 {
    let partner = FormalPowerId {
        nu: -1.0 - nu,
        kind: match kind {
            Kind::One => Kind::I,
            Kind::I => Kind::One,
        },
        m,
    };
    let n = samples.len();
    let fg: Vec<Complex64> = circle_nodes(n)
        .iter()
        .zip(samples)
        .map(|(&phi, &f)| f * formal_power(partner, r, phi))
        .collect();
    -circle_integral_re(&fg, r) / (2.0 * PI)
}

/// Rotation action on coefficient pairs: under `R_φ f(z) = e^{-iφ/2} f(e^{-iφ} z)`
/// the basis transforms as `R_φ Z_ν^1 = cos((ν+½)φ) Z_ν^1 − sin((ν+½)φ) Z_ν^i`
/// and `R_φ Z_ν^i = cos((ν+½)φ) Z_ν^i + sin((ν+½)φ) Z_ν^1`, so the pair
/// `(A_ν^1, A_ν^i)` rotates by `(ν+½)φ`.
pub fn rotation_transform(coeffs: &[(f64, f64, f64)], phi: f64) -> Vec<(f64, f64, f64)> {
    coeffs
        .iter()
        .map(|&(nu, a1, ai)| {
            let ang = (nu + 0.5) * phi;
            let (s, c) = ang.sin_cos();
            (nu, c * a1 + s * ai, -s * a1 + c * ai)
        })
        .collect()
}

/// Max of `|∂_z̄ f − m f̄|` by central differences of step `h` over a grid of
/// points, all assumed to avoid the branch cut.
pub fn masshol_residual_fd<F>(f: F, m: f64, pts: &[Complex64], h: f64) -> f64
where
    F: Fn(Complex64) -> Complex64,
{
    let mut max_r = 0.0f64;
    for &z in pts {
        let fx = (f(z + Complex64::new(h, 0.0)) - f(z - Complex64::new(h, 0.0))) / (2.0 * h);
        let fy = (f(z + Complex64::new(0.0, h)) - f(z - Complex64::new(0.0, h))) / (2.0 * h);
        let dbar = 0.5 * (fx + Complex64::new(0.0, 1.0) * fy);
        max_r = max_r.max((dbar - m * f(z).conj()).norm());
    }
    max_r
}

/// Max residual of the four derivative identities
/// `∂_x Z_ν^1 = ν Z_{ν-1}^1 + m²/(ν+1) Z_{ν+1}^1`, etc., by central
/// differences of step `h`.
pub fn derivative_identity_residual(nu: f64, kind: Kind, m: f64, pts: &[Complex64], h: f64) -> f64 {
    let id = FormalPowerId { nu, kind, m };
    let below = FormalPowerId {
        nu: nu - 1.0,
        kind,
        m,
    };
    let above = FormalPowerId {
        nu: nu + 1.0,
        kind,
        m,
    };
    let other = |k: Kind| match k {
        Kind::One => Kind::I,
        Kind::I => Kind::One,
    };
    let below_other = FormalPowerId {
        nu: nu - 1.0,
        kind: other(kind),
        m,
    };
    let above_other = FormalPowerId {
        nu: nu + 1.0,
        kind: other(kind),
        m,
    };
    let ksign = match kind {
        Kind::One => 1.0,
        Kind::I => -1.0,
    };
    let mut max_r = 0.0f64;
    for &z in pts {
        let dx = (formal_power_at(id, z + Complex64::new(h, 0.0))
            - formal_power_at(id, z - Complex64::new(h, 0.0)))
            / (2.0 * h);
        let dy = (formal_power_at(id, z + Complex64::new(0.0, h))
            - formal_power_at(id, z - Complex64::new(0.0, h)))
            / (2.0 * h);
        let dx_exact =
            nu * formal_power_at(below, z) + m * m / (nu + 1.0) * formal_power_at(above, z);
        // ∂_y Z_ν^1 = ν Z_{ν-1}^i − m²/(ν+1) Z_{ν+1}^i,
        // ∂_y Z_ν^i = −ν Z_{ν-1}^1 + m²/(ν+1) Z_{ν+1}^1.
        let dy_exact = ksign
            * (nu * formal_power_at(below_other, z)
                - m * m / (nu + 1.0) * formal_power_at(above_other, z));
        max_r = max_r.max((dx - dx_exact).norm()).max((dy - dy_exact).norm());
    }
    max_r
}

/// Report of the continuum boundary-value-problem diagnostics on sampled
/// fields.
#[derive(Debug, Clone)]
pub struct BvpReport {
    /// max |Im(ν_out^{1/2} f)| over the boundary samples.
    pub boundary_line: f64,
    /// |∮ f² dz − 4mi ∬ |f|²| over the annulus (Green–Riemann balance).
    pub green_riemann: f64,
    /// Inner-monodromy coefficients −(2π)⁻¹ ∮ f² dz / i at the branch
    /// circles, which tend to `B_j²` as the radius shrinks.
    pub monodromy: Vec<f64>,
}

/// Green–Riemann balance on an annulus `r_in ≤ |z − a| ≤ r_out`: the loop
/// integral difference of f² against `4mi ∬ |f|² dA`, both by quadrature
/// (trapezoid in angle, Simpson in radius).
pub fn green_riemann_balance<F>(
    f: F,
    a: Complex64,
    r_in: f64,
    r_out: f64,
    n_angle: usize,
    n_radial: usize,
) -> (Complex64, Complex64)
where
    F: Fn(f64, f64) -> Complex64, // (r, θ) on the canonical branch around a
{
    let _ = a;
    let sq = |r: f64| -> Vec<Complex64> {
        circle_nodes(n_angle)
            .iter()
            .map(|&phi| {
                let v = f(r, phi);
                v * v
            })
            .collect()
    };
    let loop_int = |r: f64| -> Complex64 {
        let n = n_angle as f64;
        let mut acc = Complex64::new(0.0, 0.0);
        for (k, v) in sq(r).iter().enumerate() {
            let phi = TAU * (k as f64 + 0.5) / n;
            let dz = Complex64::new(0.0, 1.0) * Complex64::from_polar(r, phi) * (TAU / n);
            acc += v * dz;
        }
        acc
    };
    let outer = loop_int(r_out);
    let inner = loop_int(r_in);
    // Simpson in r of the angular means of |f|² r.
    let n_r = if n_radial % 2 == 0 { n_radial } else { n_radial + 1 };
    let hr = (r_out - r_in) / n_r as f64;
    let mut area = 0.0;
    for j in 0..=n_r {
        let r = r_in + j as f64 * hr;
        let mean: f64 = circle_nodes(n_angle)
            .iter()
            .map(|&phi| f(r, phi).norm_sqr())
            .sum::<f64>()
            / n_angle as f64;
        let w = if j == 0 || j == n_r {
            1.0
        } else if j % 2 == 1 {
            4.0
        } else {
            2.0
        };
        area += w * mean * r;
    }
    area *= hr / 3.0 * TAU;
    (
        outer - inner,
        Complex64::new(0.0, 4.0 * 1.0) * area, // caller multiplies by m
    )
}
