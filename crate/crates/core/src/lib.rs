//! Spectral machinery for the two-dimensional Schrödinger equation with an
//! inverse-square potential, written in polar coordinates.
//!
//! Each angular mode `k` of a field `f(r,θ) = Σ f_k(r) e^{ikθ}` evolves
//! independently under the radial operator `A_ν = -∂²_r - (1/r)∂_r + ν²/r²`
//! with effective Bessel order `ν(k) = √(a² + k²)`, where `a` is the potential
//! strength. The Hankel transform of order ν diagonalises `A_ν`, so evolution
//! is exact in time: one forward transform, a unimodular multiplier
//! `e^{is²t}`, and one inverse transform per output time.
//!
//! On top of the solver sit the measurement tools: the angularly averaged
//! spacetime norm `L²_t L^∞_r L_θ`, its ratio against the initial `L²` mass,
//! the dyadic Bessel-kernel decomposition with its explicit bounding
//! functions, and a discrete Hardy–Littlewood maximal operator.
//!
//! Modules mirror that structure: [`bessel`] (special functions), [`hankel`]
//! (grids and transforms), [`harmonics`] (angular analysis), [`propagator`]
//! (time evolution), [`kernels`] (cutoffs, oscillatory kernels and bound
//! scans), [`norms`] (spacetime norms and maximal function) and [`runner`]
//! (CLI experiments, configs, reports).

pub mod bessel;
pub mod error;
pub mod hankel;
pub mod harmonics;
pub mod kernels;
pub mod norms;
pub mod propagator;
pub mod quad;
pub mod runner;

pub use error::{Error, Result};
pub use num_complex::Complex64;
