//! Exact symbolic model of the integral cohomology of abelian varieties.
//!
//! The cohomology ring `H^*(A)` of an abelian variety of dimension `g` is an
//! exterior algebra on a rank-`2g` lattice. This crate implements that model
//! with exact big-rational coefficients and builds on it:
//!
//! * [`numerology`] — the universal gcds `w_{i,j} = gcd_{m≠0}(m^i − m^j)`
//!   and the derived bounds `N_i`, `M`, with certification.
//! * [`extalg`] — sparse exterior-algebra arithmetic: wedge, grading,
//!   multiplication actions, Poincaré duality, divided powers.
//! * [`corr`] — correspondence calculus on product spaces: composition,
//!   transpose, diagonal and Künneth projectors, graphs of homomorphisms.
//! * [`torsion`] — the square-zero extension ring `R ⊕ T` with `T` the
//!   torsion bimodule `⊕ Hom(H^i, H^{i−1}) ⊗ ℚ/ℤ`: idempotent lifting by
//!   squaring, cocycle extraction and correction, Hochschild checks.
//! * [`beaufourier`] — theta and Poincaré classes, the Fourier transform
//!   `e^ℓ`, Pontryagin products and their divided powers, the Scholl and
//!   Suh projector formulas, Beauville grading.
//! * [`suites`] — seeded, reproducible verification suites over all of the
//!   above, with JSON reports.
//!
//! Everything is exact: no floating point anywhere. Identities either hold
//! on the nose or fail with a witness.

pub mod beaufourier;
pub mod corr;
pub mod extalg;
pub mod numerology;
pub mod report;
pub mod suites;
pub mod torsion;

pub use extalg::{AlgebraError, Homomorphism, MultiVector, Space};
