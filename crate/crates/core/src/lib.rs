//! Public-key encryption from the free monoid `SL2(N)`.
//!
//! * [`modring`]: residues and matrices modulo `2^k`.
//! * [`monoid`]: exact words, matrices and the Euclidean factorizer.
//! * [`scheme`]: key generation, encryption, decryption and file formats.
//! * [`attacks`]: key recovery for the `n = 1`, `l = 1` variant, trace
//!   leakage, the determinism distinguisher and ciphertext malleability.
//! * [`analysis`]: trace / sup-norm statistics over all words of a length.
//!
//! This is research code. Nothing is constant-time and the scheme itself
//! has known weaknesses (see the attacks module).

pub mod analysis;
pub mod attacks;
pub mod error;
pub mod modring;
pub mod monoid;
pub mod rng;
pub mod scheme;

pub use error::{Error, FactorReject, Reject, Result};
pub use modring::{Modulus, Residue, ResidueMatrix};
pub use monoid::{Letter, NatMatrix, Word};
pub use scheme::{Ciphertext, Params, PublicKey, SecretKey};
