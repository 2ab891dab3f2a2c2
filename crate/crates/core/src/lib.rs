//! Exact q-expansion arithmetic for weak Jacobi forms on the root lattices
//! D₂ … D₈.
//!
//! The crate builds, as truncated Fourier expansions over exact rationals,
//! the generators of the bigraded rings of orthogonal-group-invariant weak
//! Jacobi forms along the Dₙ tower: the theta-discriminants
//! `ω^{Dₙ}₋ₙ,₁ = ϑ(z₁)···ϑ(zₙ)/η^{3n}`, the lattice theta series of `E₈`
//! and `D₁₆⁺`, the index-one generators of weights 0, -2, -4 on `D₈`, the
//! index-two family from the `nA₁` sublattice, and the `D₂` family in
//! half-sum coordinates. On top of the constructors sit the Hecke operator
//! `T₋(2)`, the modular differential operator `H_k`, an exact-rational
//! relation solver, and verification suites that recheck every identity the
//! constructions are expected to satisfy.
//!
//! Layout:
//!
//! * [`laurent`] — sparse multivariate Laurent polynomials, half-integer
//!   exponents stored doubled; the arithmetic kernel.
//! * [`qexp`] — truncated q-series with Laurent coefficients, fractional
//!   q-exponents over 24, and weight/index metadata.
//! * [`symmetry`] — signed permutation groups `W(Dₙ)`, `O(Dₙ)`, `O′(D₄)`,
//!   invariance tests, lattice enumeration.
//! * [`blocks`] — η, Δ, E₄, E₆, G₂, ϑ, characteristic thetas, the
//!   Eichler–Zagier pair.
//! * [`forms`] — every named Jacobi form of the tower.
//! * [`operators`] — `T₋(2)`, `H_k`, division by powers of Δ.
//! * [`relations`] — identity checking, exact nullspace solving, rank
//!   certificates, divisibility probes.
//! * [`verify`] — the named suites wiring all of the above together.
//!
//! No floating point is used anywhere; every coefficient is a reduced
//! fraction of arbitrary-precision integers.

pub mod blocks;
pub mod cache;
pub mod error;
pub mod forms;
pub mod laurent;
pub mod operators;
pub mod qexp;
pub mod rational;
pub mod relations;
pub mod symmetry;
pub mod verify;

pub use error::{Error, Result};
pub use laurent::{ExponentVec, LaurentPoly, RatMatrix};
pub use qexp::{trunc_through_order, JacobiFormMeta, LatticeLabel, QExpansion, SupportKind, SymmetryClass};
pub use rational::Rational;
pub use symmetry::{GroupTag, Lattice, SignedPermutation};
