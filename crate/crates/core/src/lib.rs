//! Numerical laboratory for the massive (near-critical) fermion of the 2D
//! Ising model on the rotated square lattice.
//!
//! The crate is organised around the objects it computes:
//!
//! * [`params`] — the coupled mass parametrisations (δ, m, β, Θ, M, M_H).
//! * [`lattice`] / [`cover`] — discrete domains, boundary structure, and
//!   double covers ramified at marked faces.
//! * [`oracle`] — exact low-temperature / direct-sum ground truth on tiny
//!   domains, including the contour-sum fermion with its winding, loop and
//!   sheet phases.
//! * [`solver`] — the sparse massive s-holomorphicity solver, the square
//!   integral `H`, and residual operators for every lattice identity.
//! * [`walk`] — killed random walks: massive harmonic measure (exact and
//!   Monte Carlo), the explicit slit-plane one-point spinor, and the
//!   square-root-like `G` spinor.
//! * [`bessel`] / [`formal`] — modified Bessel evaluation and the massive
//!   formal powers `Z_nu^{1,i}` with Cauchy-type coefficient extraction.
//! * [`painleve`] — the radial Painlevé III connection problem and the
//!   full-plane two-point function.

pub mod bessel;
pub mod cover;
pub mod field;
pub mod formal;
pub mod geom;
pub mod lattice;
pub mod oracle;
pub mod painleve;
pub mod params;
pub mod solver;
pub mod sparse;
pub mod walk;

pub use cover::DoubleCover;
pub use lattice::{DiscreteDomain, DomainSpec};
pub use params::MassParams;
