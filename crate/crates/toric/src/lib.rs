//! Exact computational toolkit for toric varieties.
//!
//! The library works with fans of strongly convex rational cones and the toric
//! varieties they define. On top of the lattice-and-cone core it provides:
//!
//! - torus-invariant divisors: class groups, Cartier data, global sections,
//!   and exact linear-programming certificates for divisoriality;
//! - quotient presentations of a toric variety as a good quotient of an open
//!   subset of affine space, both the classical quotient by the class-group
//!   torus and presentations built from a finitely generated group of ample
//!   divisors on invariant charts (the affine conoid construction);
//! - closed embeddings of a toric variety into a smooth toric variety, with
//!   machine-checkable certificates;
//! - the combinatorics of finite orbit spaces: which subsets of a variety
//!   admit common affine (or quasi-projective) neighborhoods for k-tuples of
//!   points, and the maximal open subsets with that property.
//!
//! All arithmetic is exact (arbitrary-precision integers and rationals); no
//! floating point is used anywhere.

pub mod akset;
pub mod arith;
pub mod cone;
pub mod conoid;
pub mod corpus;
pub mod divisor;
pub mod embed;
pub mod fan;
pub mod files;
pub mod hilbert;
pub mod lattice;
pub mod lp;
pub mod par;
pub mod serde_int;
