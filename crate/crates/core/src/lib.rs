//! Core algorithms for a one-dimensional layered-occlusion image model.
//!
//! Images are built by stacking latent "objects" (color strings) onto a
//! canvas, front objects occluding back ones, over a background row. This
//! crate provides:
//!
//! - [`model`]: objects, scenes, the view operator, and seeded image
//!   generation under the closed/open room and depth-order variants;
//! - [`structure`]: object generation (random / semi-random) and checkers
//!   for the well-structuredness properties that make substrings usable as
//!   signatures, plus windowed Hamming matching;
//! - [`learning`]: dictionary recovery from image samples: greedy overlap
//!   sequencing, endpoint-marker recovery, and frequency-threshold learning
//!   without markers, with the associated sample-size calculators;
//! - [`inference`]: per-pixel explanations of an image given a known object
//!   set: a minimal-object-count dynamic program with a brute-force oracle,
//!   and a greedy correct-on-most-pixels segmenter with a noise-robust
//!   variant;
//! - [`adversary`]: windowed pixel-corruption budgets and samplers;
//! - [`hardness`]: the set-splitting reduction showing the unconstrained
//!   learning problem is NP-hard, with instance builders and verifiers.
//!
//! The crate is `no_std` + `alloc`; everything is deterministic given an
//! explicit RNG state ([`rng::Xoshiro256StarStar`]). File formats, CLI, and
//! the experiment harness live in the companion `occlusion-cli` crate.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod adversary;
pub mod frac;
pub mod hardness;
pub mod inference;
pub mod learning;
pub mod model;
pub mod rng;
pub mod structure;

pub use frac::Frac;
pub use model::{
    BackgroundModel, Color, DepthModel, DepthOrdering, Explanation, GenConfig, GenParams,
    GroundTruth, Image, Object, ObjectSet, Placement, RoomModel, Scene, Source,
};
pub use rng::Xoshiro256StarStar;
