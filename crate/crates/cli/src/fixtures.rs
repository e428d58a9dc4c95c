//! Constructed instances on which exact-match inference blows up while the
//! noise-aware route stays cheap.
//!
//! Two families:
//!
//! - `DpNoise`: an alternating two-color background with a short object
//!   placed one pixel in. One flipped pixel drives the minimal exact
//!   explanation from 1 instance to at least d/2.
//! - `ExactMatchFamily`: two canvas-length strongly well-structured binary
//!   objects; one interior bit flip forces every exact explanation to use
//!   at least d/(4w) + 1 instances, while approximate matching names the
//!   single true source and pinpoints the flip.

use anyhow::{bail, Result};
use occlusion_core::adversary::CorruptionPlan;
use occlusion_core::model::{BackgroundModel, Color, Image, ObjectSet, RoomModel};
use occlusion_core::structure::check_strong_ws;
use occlusion_core::{Frac, Xoshiro256StarStar};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FixtureKind {
    DpNoise,
    ExactMatchFamily,
}

impl FixtureKind {
    pub fn as_str(self) -> &'static str {
        match self {
            FixtureKind::DpNoise => "dp-noise",
            FixtureKind::ExactMatchFamily => "exact-match-family",
        }
    }
}

#[derive(Clone, Debug)]
pub struct BreakerFixture {
    pub kind: FixtureKind,
    pub d: usize,
    pub w: usize,
    pub objects: ObjectSet,
    pub background: BackgroundModel,
    pub room: RoomModel,
    pub clean: Image,
    pub corrupted: Image,
    pub plan: CorruptionPlan,
    /// Strong well-structuredness parameter of the family (exact-match
    /// family only).
    pub epsilon: Option<Frac>,
}

/// The exact-match family's strong structure parameter.
pub const FAMILY_EPSILON: (u64, u64) = (1, 8);

pub fn make_breaker_fixture(
    kind: FixtureKind,
    d: usize,
    w: usize,
    seed: u64,
    flip_at: Option<usize>,
) -> Result<BreakerFixture> {
    match kind {
        FixtureKind::DpNoise => dp_noise(d, w),
        FixtureKind::ExactMatchFamily => exact_match_family(d, w, seed, flip_at),
    }
}

/// Background `C B A B A B A ...`, objects `BAAAA` and `ABBBB`, the first
/// placed one pixel in; the adversary flips image pixel 1 from B to A.
fn dp_noise(d: usize, w: usize) -> Result<BreakerFixture> {
    if d < 12 || !d.is_multiple_of(2) {
        bail!("dp-noise fixture needs an even canvas of at least 12 pixels");
    }
    if w == 0 {
        bail!("w must be >= 1");
    }
    let a = Color::Obj(0);
    let b = Color::Obj(1);
    let c = Color::Obj(2);
    let mut background = vec![c];
    for i in 0..d - 1 {
        background.push(if i % 2 == 0 { b } else { a });
    }
    let objects = ObjectSet::new(vec![vec![b, a, a, a, a], vec![a, b, b, b, b]], 3)?;
    let mut clean = background.clone();
    clean[1..6].copy_from_slice(&objects.objects()[0].pixels);
    let mut corrupted = clean.clone();
    corrupted[1] = a;
    let plan = CorruptionPlan {
        flips: vec![(1, a)],
        alpha: Frac::new(1, d as u64).unwrap(),
        window: d,
    };
    Ok(BreakerFixture {
        kind: FixtureKind::DpNoise,
        d,
        w,
        objects,
        background: BackgroundModel::WellStructured(background),
        room: RoomModel::Open,
        clean: Image { pixels: clean },
        corrupted: Image { pixels: corrupted },
        plan,
        epsilon: None,
    })
}

/// Two random binary objects of length `d` (distinct first pixels),
/// resampled until (1/8)-strongly w-well-structured; the clean image shows
/// the first object in full, and one bit strictly inside the middle half
/// is flipped.
fn exact_match_family(
    d: usize,
    w: usize,
    seed: u64,
    flip_at: Option<usize>,
) -> Result<BreakerFixture> {
    if !d.is_multiple_of(4) || d < 8 * w {
        bail!("exact-match family needs 4 | d and d >= 8w");
    }
    if w < 48 {
        // Binary strings cannot be (1/8)-strongly well-structured at
        // narrower windows with non-negligible probability.
        bail!("exact-match family needs w >= 48");
    }
    let epsilon = Frac::new(FAMILY_EPSILON.0, FAMILY_EPSILON.1).unwrap();
    let alpha = Frac::new(1, w as u64).unwrap(); // < epsilon/4 once w > 32
    let mut rng = Xoshiro256StarStar::seed_from_u64(seed);
    let objects = loop {
        let mut first: Vec<Color> =
            (0..d).map(|_| Color::Obj(rng.next_below(2) as u16)).collect();
        let mut second: Vec<Color> =
            (0..d).map(|_| Color::Obj(rng.next_below(2) as u16)).collect();
        first[0] = Color::Obj(0);
        second[0] = Color::Obj(1);
        let set = ObjectSet::new(vec![first, second], 2)?;
        if check_strong_ws(&set, w, epsilon)?.holds {
            break set;
        }
    };
    let flip = match flip_at {
        Some(i) => i,
        None => {
            let lo = d / 4 + 1;
            let hi = 3 * d / 4 - 1;
            lo + rng.next_below((hi - lo + 1) as u64) as usize
        }
    };
    if flip <= d / 4 || flip >= 3 * d / 4 {
        bail!("flip position {flip} must lie strictly inside the middle half of {d}");
    }
    let clean = Image { pixels: objects.objects()[0].pixels.clone() };
    let mut corrupted = clean.clone();
    let new = match corrupted.pixels[flip] {
        Color::Obj(v) => Color::Obj(1 - v),
        _ => unreachable!("family pixels are binary object colors"),
    };
    corrupted.pixels[flip] = new;
    let plan = CorruptionPlan { flips: vec![(flip, new)], alpha, window: w };
    Ok(BreakerFixture {
        kind: FixtureKind::ExactMatchFamily,
        d,
        w,
        objects,
        background: BackgroundModel::Distinct,
        room: RoomModel::Open,
        clean,
        corrupted,
        plan,
        epsilon: Some(epsilon),
    })
}
