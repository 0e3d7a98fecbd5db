//! Genus-0 Belyi maps with prescribed monodromy.
//!
//! The crate is organized around the pipeline
//! permutation triple → fundamental domain → conformal welding →
//! Newton refinement → algebraic recognition, plus exact verification of
//! candidate maps over finite fields and number fields.
//!
//! The crate is `no_std`-compatible (with `alloc`); the companion CLI crate
//! carries all IO and file formats.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod bigfloat;
pub mod domain;
pub mod factor;
pub mod galois;
pub mod lll;
pub mod map;
pub mod monodromy;
pub mod newton;
pub mod numfield;
pub mod perm;
pub mod poly;
pub mod ring;
pub mod rng;
pub mod solve;
pub mod triangle;
pub mod weld;
pub mod zipper;
