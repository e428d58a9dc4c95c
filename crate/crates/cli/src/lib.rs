//! File formats, the experiment harness, and fixture builders for the
//! occlusion toolkit. The `occlusion` binary in this crate fronts all of
//! it; the algorithms live in `occlusion-core`.

pub mod experiments;
pub mod fixtures;
pub mod harness;
pub mod json;
