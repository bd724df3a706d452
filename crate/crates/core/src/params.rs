//! Mass parametrisations of the near-critical regime.
//!
//! The deviation from criticality can be measured by the discrete mass
//! `M = beta_c - beta`, the continuous mass `m = 2M/delta`, the phase angle
//! `Theta` with `exp(2 beta) = cot(pi/8 + Theta)`, or the massive-harmonicity
//! coefficient `M_H`. All four are kept coupled in [`MassParams`].

use thiserror::Error;

/// Critical inverse temperature of the square-lattice Ising model,
/// `ln(1 + sqrt 2) / 2`.
pub const BETA_C: f64 = 0.44068679350977147;

#[derive(Debug, Error)]
pub enum ParamError {
    #[error("mesh size must be positive, got {0}")]
    BadDelta(f64),
    #[error("beta must be positive, got {0}")]
    BadBeta(f64),
    #[error("Theta = {0} outside the admissible interval (-pi/8, pi/8)")]
    ThetaOutOfRange(f64),
}

/// Coupled parametrisation (δ, m, β, Θ, M, M_H) of a near-critical model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MassParams {
    /// Mesh size δ > 0.
    pub delta: f64,
    /// Continuous mass `m = 2(beta_c - beta)/delta`; negative below T_c.
    pub m: f64,
    /// Inverse temperature.
    pub beta: f64,
    /// Phase angle with `exp(2 beta) = cot(pi/8 + Theta)`.
    pub theta: f64,
    /// Discrete mass `M = beta_c - beta = m delta / 2`.
    pub m_discrete: f64,
    /// Massive-harmonicity coefficient `2 sin(2Θ) sqrt(2 / cos 4Θ)`.
    pub m_h: f64,
}

impl MassParams {
    /// Build from an inverse temperature.
    pub fn from_beta(delta: f64, beta: f64) -> Result<Self, ParamError> {
        if !(delta > 0.0) {
            return Err(ParamError::BadDelta(delta));
        }
        if !(beta > 0.0) {
            return Err(ParamError::BadBeta(beta));
        }
        let theta = (-2.0 * beta).exp().atan() - std::f64::consts::FRAC_PI_8;
        Self::assemble(delta, beta, theta)
    }

    /// Build from the phase angle Θ ∈ (−π/8, π/8).
    pub fn from_theta(delta: f64, theta: f64) -> Result<Self, ParamError> {
        if !(delta > 0.0) {
            return Err(ParamError::BadDelta(delta));
        }
        let beta = 0.5 * (std::f64::consts::FRAC_PI_8 + theta).tan().recip().ln();
        Self::assemble(delta, beta, theta)
    }

    /// Build from the continuous mass via the scaling `beta = beta_c - m delta / 2`.
    pub fn from_mass(delta: f64, m: f64) -> Result<Self, ParamError> {
        Self::from_beta(delta, BETA_C - 0.5 * m * delta)
    }

    fn assemble(delta: f64, beta: f64, theta: f64) -> Result<Self, ParamError> {
        if !(theta.abs() < std::f64::consts::FRAC_PI_8) {
            return Err(ParamError::ThetaOutOfRange(theta));
        }
        let m_discrete = BETA_C - beta;
        let m_h = 2.0 * (2.0 * theta).sin() * (2.0 / (4.0 * theta).cos()).sqrt();
        Ok(Self {
            delta,
            m: 2.0 * m_discrete / delta,
            beta,
            theta,
            m_discrete,
            m_h,
        })
    }

    /// `M_H^2 = 8 sin^2(2Θ) / cos(4Θ)`, the coefficient in `Δ^δ u = M_H^2 u`.
    pub fn m_h_sq(&self) -> f64 {
        let s = (2.0 * self.theta).sin();
        8.0 * s * s / (4.0 * self.theta).cos()
    }

    /// Per-edge weight `1/cos(pi/8 + Theta)` carried by fermion values on edges.
    pub fn edge_weight(&self) -> f64 {
        (std::f64::consts::FRAC_PI_8 + self.theta).cos().recip()
    }

    /// Dual inverse temperature, `tanh(beta_dual) = exp(-2 beta)`.
    pub fn beta_dual(&self) -> f64 {
        (-2.0 * self.beta).exp().atanh()
    }

    /// Killed-walk single-step weight `q = 2 sin^2(2Θ)/cos(4Θ)`, so that the
    /// extinction probability per step is `q/(1+q)` and `M_H^2 = 4q`.
    pub fn walk_q(&self) -> f64 {
        let s = (2.0 * self.theta).sin();
        2.0 * s * s / (4.0 * self.theta).cos()
    }

    /// Geometric weight `Γ = tan^2(pi/4 + 2Θ)` of the `G`-spinor sum.
    pub fn gamma_weight(&self) -> f64 {
        let t = (std::f64::consts::FRAC_PI_4 + 2.0 * self.theta).tan();
        t * t
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_4, FRAC_PI_8};

    #[test]
    fn beta_c_matches_closed_form() {
        assert!((BETA_C - 0.5 * (1.0 + 2.0_f64.sqrt()).ln()).abs() < 1e-16);
    }

    #[test]
    fn beta_theta_coupling() {
        for &beta in &[0.3, BETA_C, 0.5, 0.6] {
            let p = MassParams::from_beta(1.0, beta).unwrap();
            assert!(((2.0 * beta).exp() - (FRAC_PI_8 + p.theta).tan().recip()).abs() < 1e-12);
        }
    }

    #[test]
    fn sign_equivalences() {
        let sub = MassParams::from_mass(0.1, -1.0).unwrap();
        assert!(sub.m < 0.0 && sub.theta < 0.0 && sub.beta > BETA_C);
        let crit = MassParams::from_mass(0.1, 0.0).unwrap();
        assert!(crit.theta.abs() < 1e-15 && (crit.beta - BETA_C).abs() < 1e-15);
        assert!(crit.m_h_sq() < 1e-15);
    }

    #[test]
    fn discrete_mass_scaling() {
        let p = MassParams::from_mass(0.25, -0.8).unwrap();
        assert!((p.m_discrete - p.m * p.delta / 2.0).abs() < 1e-15);
        assert!((p.m_discrete - (BETA_C - p.beta)).abs() < 1e-15);
    }

    #[test]
    fn m_h_closed_forms_agree() {
        let p = MassParams::from_theta(1.0, -0.05).unwrap();
        assert!((p.m_h * p.m_h - p.m_h_sq()).abs() < 1e-15);
        // High-precision evaluation of 8 sin^2(0.1)/cos(0.2).
        assert!((p.m_h_sq() - 0.08135537976477077).abs() < 1e-15);
        assert!((p.m_h_sq() - 0.0813555).abs() < 2.5e-7);
        assert!(p.m_h < 0.0);
    }

    #[test]
    fn theta_domain_enforced() {
        assert!(MassParams::from_theta(1.0, FRAC_PI_8).is_err());
        assert!(MassParams::from_theta(1.0, -FRAC_PI_8).is_err());
        assert!(MassParams::from_beta(1.0, -0.1).is_err());
    }

    #[test]
    fn gamma_weight_massless_is_one() {
        let p = MassParams::from_theta(1.0, 0.0).unwrap();
        assert!((p.gamma_weight() - 1.0).abs() < 1e-15);
        let q = MassParams::from_theta(1.0, -0.03).unwrap();
        assert!(q.gamma_weight() < 1.0);
        assert!(
            (q.gamma_weight() - (FRAC_PI_4 + 2.0 * -0.03).tan().powi(2)).abs() < 1e-15
        );
    }

    #[test]
    fn kill_probability_consistent_with_m_h() {
        for &t in &[-0.1, -0.02, 0.0, 0.05] {
            let p = MassParams::from_theta(1.0, t).unwrap();
            assert!((4.0 * p.walk_q() - p.m_h_sq()).abs() < 1e-14);
            let kill = p.walk_q() / (1.0 + p.walk_q());
            assert!((kill == 0.0) == (t == 0.0));
        }
    }
}
