//! Toolkit for anti-diagonal toric generalized Kähler structures of
//! symplectic type.
//!
//! The library is organized around the data that describes such a structure
//! on a compact toric symplectic manifold:
//!
//! * a Delzant polytope Δ ([`polytope`]),
//! * a symplectic potential τ on the interior of Δ whose Hessian φ_s is the
//!   symmetric part of the structure matrix ([`potential`]),
//! * a constant anti-symmetric matrix C, the anti-symmetric part ([`gk`]).
//!
//! From a pair (φ_s, C) evaluated at an interior point, [`gk`] assembles the
//! full set of tensor matrix forms (J±, J₀, g, b, Ω, β₁, b₁ and the
//! holomorphic Poisson coefficients) in admissible coordinates and verifies
//! the algebraic identities tying them together.  [`boundary`] probes whether
//! interior-defined tensor data extends over the faces of Δ, and [`delzant`]
//! implements the generalized Delzant reduction bookkeeping (the facet map ς,
//! its integer kernel, lifts of C and the reduction fixtures).
//!
//! Exact arithmetic (`BigRational`) is used for everything lattice-like or
//! combinatorial; floating point enters only for sampling and tensor
//! numerics.  The numerical kernels are generic over the scalar type so the
//! same code path serves both.

pub mod boundary;
pub mod cpn;
pub mod delzant;
pub mod fixtures;
pub mod gk;
pub mod golden;
pub mod intlin;
pub mod mat;
pub mod num;
pub mod polytope;
pub mod potential;
pub mod rng;
pub mod testkit;

/// Exact rational scalar used for all lattice and combinatorial data.
pub type Rat = num_rational::BigRational;
/// Arbitrary precision integer used for lattice data.
pub type Int = num_bigint::BigInt;
/// Dense double precision matrix.
pub type MatF = mat::Mat<f64>;
/// Dense exact rational matrix.
pub type MatQ = mat::Mat<Rat>;
/// Dense integer matrix (facet normals, kernel bases).
pub type MatZ = mat::Mat<Int>;

pub use gk::{AntiSymMatrix, GkFrame};
pub use polytope::{DelzantPolytope, FaceData};
pub use potential::SymplecticPotential;
