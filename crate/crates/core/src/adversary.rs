//! Windowed pixel corruption.
//!
//! An adversary of strength `(alpha, W)` may flip at most `floor(alpha*W)`
//! pixels inside every window of `W` consecutive positions. Two samplers
//! are provided: a uniform one for statistical robustness runs, and a
//! clustering one that saturates the per-window budget to stress the
//! matcher's guard margins. Flips always land on object colors; the
//! distinct-background sentinel is never introduced (it would make the
//! corruption trivially detectable).

use crate::frac::Frac;
use crate::model::{Color, Image};
use crate::rng::Xoshiro256StarStar;
use alloc::vec::Vec;
use core::fmt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AdversaryError {
    AlphaRange,
    WindowRange { window: usize, d: usize },
    /// `floor(alpha * W) = 0` while flips were requested.
    BudgetTooSmall,
    ColorCountTooSmall,
}

impl fmt::Display for AdversaryError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AdversaryError::AlphaRange => write!(f, "alpha must satisfy 0 <= alpha < 1"),
            AdversaryError::WindowRange { window, d } => {
                write!(f, "window {window} must satisfy 1 <= W <= d = {d}")
            }
            AdversaryError::BudgetTooSmall => {
                write!(f, "alpha * W < 1 cannot accommodate any flip")
            }
            AdversaryError::ColorCountTooSmall => write!(f, "need at least two object colors"),
        }
    }
}

impl core::error::Error for AdversaryError {}

/// How the adversary spends its budget.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BudgetStrategy {
    /// Random positions, rejecting any pick that would overfill a window.
    UniformRandom,
    /// Packs `floor(alpha*W)` consecutive flips into windows spaced `W`
    /// apart, saturating the constraint.
    WorstCaseCluster,
}

/// The realized corruption: flip positions with their new colors, plus the
/// strength it was drawn under. Every length-`window` range contains at
/// most `floor(alpha*window)` flips, and each new color differs from the
/// original pixel.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorruptionPlan {
    pub flips: Vec<(usize, Color)>,
    pub alpha: Frac,
    pub window: usize,
}

impl CorruptionPlan {
    /// Exhaustive sliding-window audit of the budget invariant against an
    /// image of width `d`.
    pub fn audit(&self, d: usize) -> bool {
        if self.window == 0 || self.window > d {
            return false;
        }
        if self.flips.iter().any(|&(i, _)| i >= d) {
            return false;
        }
        let budget = self.alpha.mul_floor(self.window as u64);
        let mut marks = alloc::vec![false; d];
        for &(i, _) in &self.flips {
            if marks[i] {
                return false; // duplicate index
            }
            marks[i] = true;
        }
        let mut in_window: u64 = marks[..self.window].iter().map(|&b| b as u64).sum();
        if in_window > budget {
            return false;
        }
        for start in 1..=d - self.window {
            in_window -= marks[start - 1] as u64;
            in_window += marks[start + self.window - 1] as u64;
            if in_window > budget {
                return false;
            }
        }
        true
    }
}

fn flip_color(original: Color, c: u16, rng: &mut Xoshiro256StarStar) -> Color {
    match original {
        Color::Obj(v) => {
            // Uniform over the other c-1 object colors.
            let draw = rng.next_below(c as u64 - 1) as u16;
            Color::Obj(if draw >= v { draw + 1 } else { draw })
        }
        // Background (or marker) pixels corrupt to any object color.
        _ => Color::Obj(rng.next_below(c as u64) as u16),
    }
}

/// Corrupts an image within an `(alpha, window)` budget. Pixels outside
/// the returned plan's flips are bit-identical to the input.
pub fn corrupt(
    image: &Image,
    alpha: Frac,
    window: usize,
    c: u16,
    strategy: BudgetStrategy,
    rng: &mut Xoshiro256StarStar,
) -> Result<(Image, CorruptionPlan), AdversaryError> {
    let d = image.d();
    if alpha >= Frac::ONE {
        return Err(AdversaryError::AlphaRange);
    }
    if window == 0 || window > d {
        return Err(AdversaryError::WindowRange { window, d });
    }
    if c < 2 {
        return Err(AdversaryError::ColorCountTooSmall);
    }
    if alpha.is_zero() {
        return Ok((
            image.clone(),
            CorruptionPlan { flips: Vec::new(), alpha, window },
        ));
    }
    let per_window = alpha.mul_floor(window as u64);
    if per_window == 0 {
        return Err(AdversaryError::BudgetTooSmall);
    }

    let mut positions: Vec<usize> = Vec::new();
    match strategy {
        BudgetStrategy::UniformRandom => {
            let target = alpha.mul_floor(d as u64) as usize;
            let mut order: Vec<usize> = (0..d).collect();
            rng.shuffle(&mut order);
            let mut marks = alloc::vec![false; d];
            for &i in &order {
                if positions.len() >= target {
                    break;
                }
                // Reject the pick if some window through i would overfill.
                let lo = i.saturating_sub(window - 1).min(d - window);
                let hi = i.min(d - window);
                let ok = (lo..=hi).all(|start| {
                    let count: u64 =
                        marks[start..start + window].iter().map(|&b| b as u64).sum();
                    count < per_window
                });
                if ok {
                    marks[i] = true;
                    positions.push(i);
                }
            }
        }
        BudgetStrategy::WorstCaseCluster => {
            // Clusters of exactly `per_window` consecutive flips, one per
            // stride of W; a window never straddles more than one full
            // budget's worth.
            let phase = rng.next_below(window as u64) as usize;
            let mut start = phase.min(d - per_window as usize);
            loop {
                for i in start..start + per_window as usize {
                    positions.push(i);
                }
                match start.checked_add(window) {
                    Some(next) if next + per_window as usize <= d => start = next,
                    _ => break,
                }
            }
        }
    }
    positions.sort_unstable();

    let mut pixels = image.pixels.clone();
    let mut flips = Vec::with_capacity(positions.len());
    for i in positions {
        let new = flip_color(pixels[i], c, rng);
        debug_assert_ne!(new, pixels[i]);
        pixels[i] = new;
        flips.push((i, new));
    }
    let plan = CorruptionPlan { flips, alpha, window };
    debug_assert!(plan.audit(d));
    Ok((Image { pixels }, plan))
}
