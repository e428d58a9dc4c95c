//! Structural properties of object sets.
//!
//! A set is w-well-structured when no two length-w windows anywhere in the
//! set (across objects, or within one object at different offsets) are
//! identical; the strong variant additionally forbids near-matches. These
//! properties make any w pixels of an object a signature for it, which is
//! what both the learning and inference algorithms lean on.
//!
//! Checkers here are exhaustive window comparisons. That is deliberate:
//! they double as the ground-truth oracle for everything else, and desk
//! scale keeps the quadratic cost irrelevant.

use crate::frac::Frac;
use crate::model::{random_color, Color, ModelError, Object, ObjectSet};
use crate::rng::Xoshiro256StarStar;
use alloc::vec::Vec;
use core::fmt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StructureError {
    ZeroWidth,
    BadEpsilon,
    LengthMismatch { a: usize, b: usize },
    WindowTooShort { len: usize, w_alg: usize },
    Model(ModelError),
    BadSizes,
    BadProbability,
}

impl fmt::Display for StructureError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StructureError::ZeroWidth => write!(f, "window width must be >= 1"),
            StructureError::BadEpsilon => write!(f, "epsilon must satisfy 0 < eps <= 1"),
            StructureError::LengthMismatch { a, b } => {
                write!(f, "sequence lengths differ: {a} vs {b}")
            }
            StructureError::WindowTooShort { len, w_alg } => {
                write!(f, "sequences of length {len} cannot host a window of {w_alg}")
            }
            StructureError::Model(e) => write!(f, "{e}"),
            StructureError::BadSizes => write!(f, "sizes list must be nonempty"),
            StructureError::BadProbability => write!(f, "p must satisfy 0 <= p <= 1"),
        }
    }
}

impl core::error::Error for StructureError {}

impl From<ModelError> for StructureError {
    fn from(e: ModelError) -> Self {
        StructureError::Model(e)
    }
}

/// Why a set failed a well-structuredness check.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WsViolation {
    /// Condition 1: an object shorter than the window width.
    TooShort { object_id: usize, len: usize },
    /// Conditions 2/3: two windows that (nearly) coincide, as
    /// `(object_id, offset)` locations. Lexicographically smallest pair.
    WindowCollision { first: (usize, usize), second: (usize, usize) },
}

/// Verdict of a structure check, with a deterministic witness on failure.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StructureReport {
    pub holds: bool,
    pub w: usize,
    pub epsilon: Option<Frac>,
    pub witness: Option<WsViolation>,
}

impl StructureReport {
    fn ok(w: usize, epsilon: Option<Frac>) -> Self {
        StructureReport { holds: true, w, epsilon, witness: None }
    }

    fn fail(w: usize, epsilon: Option<Frac>, witness: WsViolation) -> Self {
        StructureReport { holds: false, w, epsilon, witness: Some(witness) }
    }
}

fn agreement(a: &[Color], b: &[Color]) -> usize {
    a.iter().zip(b).filter(|(x, y)| x == y).count()
}

/// Shared scan for both checkers: `violates` decides whether a window pair
/// counts as a collision. Enumeration order makes the first hit the
/// lexicographically smallest violating `(id1, off1, id2, off2)`.
fn scan_windows(
    objects: &ObjectSet,
    w: usize,
    epsilon: Option<Frac>,
    violates: impl Fn(&[Color], &[Color]) -> bool,
) -> StructureReport {
    for o in objects.objects() {
        if o.len() < w {
            return StructureReport::fail(
                w,
                epsilon,
                WsViolation::TooShort { object_id: o.id, len: o.len() },
            );
        }
    }
    if let Some(witness) = find_collision(objects, w, &violates) {
        return StructureReport::fail(w, epsilon, witness);
    }
    StructureReport::ok(w, epsilon)
}

fn find_collision(
    objects: &ObjectSet,
    w: usize,
    violates: &impl Fn(&[Color], &[Color]) -> bool,
) -> Option<WsViolation> {
    let objs = objects.objects();
    for (i1, o1) in objs.iter().enumerate() {
        if o1.len() < w {
            continue;
        }
        for off1 in 0..=o1.len() - w {
            let win1 = &o1.pixels[off1..off1 + w];
            for (i2, o2) in objs.iter().enumerate().skip(i1) {
                if o2.len() < w {
                    continue;
                }
                let start2 = if i2 == i1 { off1 + 1 } else { 0 };
                for off2 in start2..=o2.len() - w {
                    let win2 = &o2.pixels[off2..off2 + w];
                    if violates(win1, win2) {
                        return Some(WsViolation::WindowCollision {
                            first: (o1.id, off1),
                            second: (o2.id, off2),
                        });
                    }
                }
            }
        }
    }
    None
}

/// Checks w-well-structuredness: every object at least w long, and no two
/// length-w windows identical.
pub fn check_ws(objects: &ObjectSet, w: usize) -> Result<StructureReport, StructureError> {
    if w == 0 {
        return Err(StructureError::ZeroWidth);
    }
    Ok(scan_windows(objects, w, None, |a, b| a == b))
}

/// Checks the strong variant: no two length-w windows agree on at least
/// `(1 - eps) * w` positions, the threshold taken as an exact integer
/// ceiling (agreement >= ceil((1-eps)w) is a violation).
pub fn check_strong_ws(
    objects: &ObjectSet,
    w: usize,
    epsilon: Frac,
) -> Result<StructureReport, StructureError> {
    if w == 0 {
        return Err(StructureError::ZeroWidth);
    }
    if epsilon.is_zero() || epsilon > Frac::ONE {
        return Err(StructureError::BadEpsilon);
    }
    let threshold = epsilon.complement_mul_ceil(w as u64) as usize;
    Ok(scan_windows(objects, w, Some(epsilon), |a, b| agreement(a, b) >= threshold))
}

/// The collision conditions alone, ignoring object lengths: true when no
/// two existing length-w windows coincide. Vacuously true when `w` exceeds
/// every object, which is how the random-generation probability
/// experiments use it at widths beyond the object size.
pub fn ws_collision_free(objects: &ObjectSet, w: usize) -> bool {
    w >= 1 && find_collision(objects, w, &|a: &[Color], b: &[Color]| a == b).is_none()
}

/// Smallest w making the set w-well-structured, by upward scan; `None`
/// when no width up to the shortest object works.
pub fn min_ws_width(objects: &ObjectSet) -> Option<usize> {
    let cap = objects.objects().iter().map(Object::len).min()?;
    (1..=cap).find(|&w| check_ws(objects, w).map(|r| r.holds).unwrap_or(false))
}

/// Draws objects with the given sizes, pixels i.i.d. uniform over `c`
/// colors.
pub fn gen_random_objects(
    sizes: &[usize],
    c: u16,
    rng: &mut Xoshiro256StarStar,
) -> Result<ObjectSet, StructureError> {
    if sizes.is_empty() {
        return Err(StructureError::BadSizes);
    }
    let rows = sizes
        .iter()
        .map(|&s| (0..s).map(|_| random_color(c, rng)).collect())
        .collect();
    Ok(ObjectSet::new(rows, c)?)
}

/// An adversary's proposed object set plus the per-pixel rerandomization
/// probability. `p = 0` is representable only so that the identity
/// behaviour of [`gen_semirandom_objects`] can be exercised; the model
/// proper assumes `p > 0`.
#[derive(Clone, Debug)]
pub struct AdversaryBase {
    pub objects: ObjectSet,
    pub p: Frac,
}

impl AdversaryBase {
    pub fn new(objects: ObjectSet, p: Frac) -> Result<Self, StructureError> {
        if p > Frac::ONE {
            return Err(StructureError::BadProbability);
        }
        Ok(AdversaryBase { objects, p })
    }
}

/// Rerandomizes each pixel of the base independently with probability `p`
/// (the replacement is uniform over all `c` colors, so it may repeat the
/// original).
pub fn gen_semirandom_objects(base: &AdversaryBase, rng: &mut Xoshiro256StarStar) -> ObjectSet {
    let c = base.objects.c();
    let rows = base
        .objects
        .objects()
        .iter()
        .map(|o| {
            o.pixels
                .iter()
                .map(|&pxl| if rng.chance(base.p) { random_color(c, rng) } else { pxl })
                .collect()
        })
        .collect();
    ObjectSet::new(rows, c).expect("base was valid")
}

/// Hamming distance between equal-length sequences.
pub fn window_distance(a: &[Color], b: &[Color]) -> Result<usize, StructureError> {
    if a.len() != b.len() {
        return Err(StructureError::LengthMismatch { a: a.len(), b: b.len() });
    }
    Ok(a.iter().zip(b).filter(|(x, y)| x != y).count())
}

/// Windowed approximate match: true when every length-`w_alg` window of
/// `sigma` is within Hamming distance `alpha * w_alg` of the corresponding
/// window of `sigma_star`.
pub fn approx_match(
    sigma: &[Color],
    sigma_star: &[Color],
    alpha: Frac,
    w_alg: usize,
) -> Result<bool, StructureError> {
    if w_alg == 0 {
        return Err(StructureError::ZeroWidth);
    }
    if sigma.len() != sigma_star.len() {
        return Err(StructureError::LengthMismatch { a: sigma.len(), b: sigma_star.len() });
    }
    if sigma.len() < w_alg {
        return Err(StructureError::WindowTooShort { len: sigma.len(), w_alg });
    }
    // Sliding mismatch count via prefix sums.
    let mut prefix = Vec::with_capacity(sigma.len() + 1);
    prefix.push(0usize);
    for (x, y) in sigma.iter().zip(sigma_star) {
        prefix.push(prefix.last().unwrap() + usize::from(x != y));
    }
    for i in 0..=sigma.len() - w_alg {
        let dist = prefix[i + w_alg] - prefix[i];
        if !alpha.ge_scaled(dist as u64, w_alg as u64) {
            return Ok(false);
        }
    }
    Ok(true)
}
