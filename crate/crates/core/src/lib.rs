//! Hadamard codes obtained as Gray images of additive codes over mixed
//! alphabets.
//!
//! The library builds generator matrices for three families of additive
//! codes whose Gray images are binary Hadamard codes (length `n`, `2n`
//! codewords, minimum distance `n/2`):
//!
//! * subgroups of `Z2^a1 x Z4^a2 x Z8^a3` ([`constructions::build_248`]),
//! * subgroups of `Z2^a1 x Z4^a2` ([`constructions::build_z2z4`]),
//! * subgroups of `Z_{2^s}^n` for `s >= 2` ([`constructions::build_z2s`]).
//!
//! Codes are expanded to explicit codeword sets ([`codeset`]), mapped to
//! binary through the generalized Gray map ([`graymap`]), and analyzed with
//! bit-packed GF(2) linear algebra ([`binlinear`]): rank, kernel dimension,
//! distance, and the refined invariants used to separate nonequivalent
//! codes ([`classify`]).
//!
//! ```
//! use hadz::constructions::build_248;
//! use hadz::codeset::enumerate_mixed;
//!
//! let matrix = build_248(1, 0, 1).unwrap();
//! let code = enumerate_mixed(&matrix).unwrap();
//! let image = code.gray_image().unwrap();
//! assert!(image.is_hadamard().ok);
//! ```

pub mod alphabet;
pub mod binlinear;
pub mod classify;
pub mod codeset;
pub mod constructions;
pub mod error;
pub mod graymap;

pub use alphabet::{MixedVector, RingVector};
pub use codeset::{AdditiveCode, BinaryCode};
pub use constructions::{Family, GeneratorMatrix, TypeSignature};
pub use error::{Error, Result};
pub use graymap::BinaryWord;
