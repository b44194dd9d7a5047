//! High-precision evaluation and verification of a gamma-function ratio
//! attached to a positive matrix.
//!
//! Given an m×n matrix Λ = (λᵢⱼ) of positive reals with row sums αᵢ and
//! column sums βⱼ, the central object is
//!
//! ```text
//!            ∏ᵢ Γ(1 + αᵢ t) · ∏ⱼ Γ(1 + βⱼ t)
//! f(t)  =  ─────────────────────────────────────,        t ≥ 0,
//!               [ ∏ᵢⱼ Γ(1 + λᵢⱼ t) ]^ρ
//! ```
//!
//! a ratio that interpolates between elementary positivity statements at
//! ρ = 0 and a sharp threshold at ρ = 2: for ρ ≤ 2 the second logarithmic
//! derivative of f is completely monotone, [ln f]′ is a Bernstein function
//! exactly at ρ = 2, and no ρ > 2 works for every matrix. The crate
//! provides
//!
//! - [`specfun`]: ln Γ, ψ, and higher polygamma functions from scratch
//!   (shift-and-asymptotic-series, relative accuracy near 1e-13), since the
//!   whole verification chain rests on them;
//! - [`ratio`]: evaluation of ln f, f, and logarithmic derivatives up to
//!   order 8, closed-form limits at t → 0⁺ and t → ∞, the Lévy/Laplace
//!   densities of the integral representations, numerical reconstruction of
//!   the representing measures with certified truncation tails, and the
//!   minimum of f on (0, ∞) when ρ < 2;
//! - [`inequality`]: the elementary superadditivity inequality
//!   Σᵢh(x/αᵢ) + Σⱼh(x/βⱼ) ≥ 2 Σᵢⱼh(x/λᵢⱼ) with h(x) = 1/(eˣ − 1) that
//!   drives everything, plus a randomized search probing sharpness of the
//!   constant 2;
//! - [`combinatorics`]: the finite-parameter shadow — multinomial
//!   coefficients, multivariate beta functions, and the product-form ratio
//!   f₂ they assemble into, with the associated convexity inequalities;
//! - [`cm_harness`]: grid-based finite-order checks of complete
//!   monotonicity, Bernstein structure, logarithmic complete monotonicity,
//!   and log-convexity for arbitrary derivative handles;
//! - [`quadrature`], [`matrix`], [`sampling`]: adaptive Gauss–Kronrod
//!   integration, the validated positive-matrix type, and deterministic
//!   seeded sampling used by the verification harnesses.
//!
//! The crate is `no_std` (it allocates, so `alloc` is required); all
//! floating-point primitives route through [`libm`] so results are
//! bit-identical across platforms and build configurations.
//!
//! # Example
//!
//! ```
//! use gamma_ratio_core::{matrix::PositiveMatrix, ratio};
//!
//! let lambda = PositiveMatrix::new(1, 2, vec![1.0, 1.0])?;
//! let config = ratio::RatioConfig::new(lambda, 2.0)?;
//! // Row sums (2), column sums (1, 1): f(1) = Γ(3)/Γ(2)² = 2.
//! let value = ratio::f(&config, 1.0)?;
//! assert!((value - 2.0).abs() < 1e-12);
//! // [ln f]′ increases toward Σα ln α + Σβ ln β − 2Σλ ln λ = 2 ln 2.
//! let ceiling = ratio::sup_limit(&config)?;
//! assert!((ceiling - 2.0 * 2.0_f64.ln()).abs() < 1e-12);
//! assert!(ratio::dlog_f(&config, 50.0)? < ceiling);
//! # Ok::<(), gamma_ratio_core::Error>(())
//! ```

#![cfg_attr(not(test), no_std)]
#![deny(unsafe_code)]

extern crate alloc;

pub mod cm_harness;
pub mod combinatorics;
mod error;
pub mod inequality;
pub(crate) mod math;
pub mod matrix;
pub mod quadrature;
pub mod ratio;
pub mod sampling;
pub mod specfun;

pub use error::{Error, Result};
pub use matrix::PositiveMatrix;
pub use ratio::RatioConfig;
