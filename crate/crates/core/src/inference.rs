//! Explaining an image from a known object set.
//!
//! Two regimes:
//!
//! - Arbitrary equal-length objects, noiseless image: [`dp_min_objects`]
//!   finds an explanation using the minimum number of object instances via
//!   a left-to-right dynamic program over (object, object pixel, column)
//!   states. [`brute_force_min_objects`] is the independent enumeration
//!   oracle it is checked against.
//! - Well-structured objects: [`greedy_infer`] repeatedly takes the largest
//!   region that exactly matches a single object (or the background),
//!   assigns only its interior (a `k*w` guard band on each side protects
//!   against overlap masquerade at the edges), blanks it, and recurses.
//!   Everything it assigns is correct; what it cannot certify stays
//!   `Unknown`. [`greedy_infer_noisy`] is the same loop under windowed
//!   approximate matching, which also pinpoints corrupted pixels inside
//!   explained regions.

use crate::frac::Frac;
use crate::model::{
    BackgroundModel, Color, Explanation, Image, ModelError, ObjectSet, RoomModel, Source,
};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum InferError {
    /// The minimal-count DP requires all objects to share one length.
    UnequalObjectLengths,
    BackgroundLength { expected: usize, got: usize },
    ZeroWidth,
    ZeroK,
    BadEpsilon,
    /// The noisy matcher requires `alpha < epsilon / 4`.
    AlphaNotBelowQuarterEpsilon,
    BadWindow,
    /// Enumeration abandoned after too many candidate renders.
    BudgetExceeded { renders: u64 },
    Model(ModelError),
}

impl fmt::Display for InferError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InferError::UnequalObjectLengths => {
                write!(f, "objects must all have the same length")
            }
            InferError::BackgroundLength { expected, got } => {
                write!(f, "background length {got}, expected {expected}")
            }
            InferError::ZeroWidth => write!(f, "signature width must be >= 1"),
            InferError::ZeroK => write!(f, "k must be >= 1"),
            InferError::BadEpsilon => write!(f, "epsilon must satisfy 0 < eps <= 1"),
            InferError::AlphaNotBelowQuarterEpsilon => {
                write!(f, "alpha must be strictly below epsilon/4")
            }
            InferError::BadWindow => write!(f, "adversary window must be >= 1"),
            InferError::BudgetExceeded { renders } => {
                write!(f, "enumeration budget exceeded after {renders} renders")
            }
            InferError::Model(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for InferError {}

impl From<ModelError> for InferError {
    fn from(e: ModelError) -> Self {
        InferError::Model(e)
    }
}

const INF: u32 = u32::MAX;
const BRUTE_FORCE_RENDER_BUDGET: u64 = 5_000_000;

/// Minimal-object-count explanation of a noiseless image.
///
/// Table entry `(o, j, i)` holds the fewest instances needed to produce the
/// image through column `i` with column `i` explained by pixel `j` of
/// object `o`; a parallel row does the same for the background. A column
/// is explained by continuing the previous source, starting a fresh
/// instance (counted), or letting an occluded instance emerge after the
/// front one ends (counted; with equal lengths an interrupted instance can
/// never resume, so every emergence is a new instance). In the closed room
/// a state is admissible only if its instance's full extent fits the
/// canvas.
///
/// Returns `None` when no generative explanation exists.
pub fn dp_min_objects(
    image: &Image,
    objects: &ObjectSet,
    background: &[Color],
    room: RoomModel,
) -> Result<Option<Explanation>, InferError> {
    let d = image.d();
    if background.len() != d {
        return Err(InferError::BackgroundLength { expected: d, got: background.len() });
    }
    if d == 0 {
        return Err(InferError::Model(ModelError::ZeroCanvas));
    }
    let m = objects.m();
    if m == 0 {
        // Only the background can explain anything.
        return Ok((background == image.pixels.as_slice()).then(|| {
            let sources = (0..d).map(|i| Source::Background { index: i }).collect();
            Explanation { sources, object_count: Some(0) }
        }));
    }
    let s = objects.objects()[0].len();
    if objects.objects().iter().any(|o| o.len() != s) {
        return Err(InferError::UnequalObjectLengths);
    }

    let valid = |i: usize, j: usize| match room {
        RoomModel::Open => true,
        // Extent [i-j, i-j+s) must fit in [0, d).
        RoomModel::Closed => i >= j && i + s <= d + j,
    };

    let idx = |i: usize, o: usize, j: usize| (i * m + o) * s + j;
    let mut t = vec![INF; d * m * s];
    let mut b = vec![INF; d];
    let mut col_min = vec![INF; d];
    let mut end_min = vec![INF; d];

    for (o, obj) in objects.objects().iter().enumerate() {
        for j in 0..s {
            if valid(0, j) && obj.pixels[j] == image.pixels[0] {
                t[idx(0, o, j)] = 1;
                col_min[0] = col_min[0].min(1);
                if j == s - 1 {
                    end_min[0] = end_min[0].min(1);
                }
            }
        }
    }
    if background[0] == image.pixels[0] {
        b[0] = 0;
    }

    for i in 1..d {
        let start_base = col_min[i - 1].min(b[i - 1]);
        for (o, obj) in objects.objects().iter().enumerate() {
            for j in 0..s {
                if !valid(i, j) || obj.pixels[j] != image.pixels[i] {
                    continue;
                }
                let v = if j == 0 {
                    start_base.saturating_add(1)
                } else {
                    let cont = t[idx(i - 1, o, j - 1)];
                    cont.min(end_min[i - 1].saturating_add(1))
                };
                if v < INF {
                    t[idx(i, o, j)] = v;
                    col_min[i] = col_min[i].min(v);
                    if j == s - 1 {
                        end_min[i] = end_min[i].min(v);
                    }
                }
            }
        }
        if background[i] == image.pixels[i] {
            b[i] = b[i - 1].min(end_min[i - 1]);
        }
    }

    let last = d - 1;
    let best = b[last].min(col_min[last]);
    if best == INF {
        return Ok(None);
    }

    // Backtrack, preferring to continue the current source, then the
    // background, then the smallest object id.
    #[derive(Clone, Copy)]
    enum Cur {
        Bg,
        Obj(usize, usize),
    }
    let mut cur = if b[last] == best {
        Cur::Bg
    } else {
        let mut pick = None;
        'outer: for o in 0..m {
            for j in 0..s {
                if t[idx(last, o, j)] == best {
                    pick = Some(Cur::Obj(o, j));
                    break 'outer;
                }
            }
        }
        pick.expect("a state achieved the optimum")
    };

    let mut sources = vec![Source::Unknown; d];
    for i in (0..d).rev() {
        match cur {
            Cur::Bg => {
                sources[i] = Source::Background { index: i };
                if i == 0 {
                    break;
                }
                if b[i - 1] == b[i] {
                    cur = Cur::Bg;
                } else {
                    let o = (0..m)
                        .find(|&o| t[idx(i - 1, o, s - 1)] == b[i])
                        .expect("emergence predecessor");
                    cur = Cur::Obj(o, s - 1);
                }
            }
            Cur::Obj(o, j) => {
                sources[i] = Source::Object { id: o, index: j };
                if i == 0 {
                    break;
                }
                let v = t[idx(i, o, j)];
                if j > 0 && t[idx(i - 1, o, j - 1)] == v {
                    cur = Cur::Obj(o, j - 1);
                } else if j == 0 {
                    if b[i - 1] == v - 1 {
                        cur = Cur::Bg;
                    } else {
                        let mut pick = None;
                        'outer: for o2 in 0..m {
                            for j2 in 0..s {
                                if t[idx(i - 1, o2, j2)] == v - 1 {
                                    pick = Some(Cur::Obj(o2, j2));
                                    break 'outer;
                                }
                            }
                        }
                        cur = pick.expect("start predecessor");
                    }
                } else {
                    let o2 = (0..m)
                        .find(|&o2| t[idx(i - 1, o2, s - 1)] == v - 1)
                        .expect("emergence predecessor");
                    cur = Cur::Obj(o2, s - 1);
                }
            }
        }
    }

    Ok(Some(Explanation { sources, object_count: Some(best as usize) }))
}

/// Enumerates placements of 0, 1, 2, ... instances (objects may repeat,
/// every legal left endpoint, every depth order) until one renders the
/// image; the smallest such count is returned, or `None` if nothing within
/// `k_max` works. Independent of the DP by construction.
pub fn brute_force_min_objects(
    image: &Image,
    objects: &ObjectSet,
    background: &[Color],
    room: RoomModel,
    k_max: usize,
) -> Result<Option<usize>, InferError> {
    let d = image.d();
    if background.len() != d {
        return Err(InferError::BackgroundLength { expected: d, got: background.len() });
    }
    // All (object, left) singles, reused at every tuple position.
    let mut singles: Vec<(usize, i64)> = Vec::new();
    for o in objects.objects() {
        if let Some((lo, hi)) = room.left_range(o.len(), d) {
            for left in lo..=hi {
                singles.push((o.id, left));
            }
        }
    }

    let mut renders: u64 = 0;
    let mut canvas = vec![Color::Background; d];
    for count in 0..=k_max {
        if count > 0 && singles.is_empty() {
            break;
        }
        let mut stack: Vec<usize> = vec![0; count];
        // Odometer over ordered tuples; tuple order is front-to-back.
        loop {
            renders += 1;
            if renders > BRUTE_FORCE_RENDER_BUDGET {
                return Err(InferError::BudgetExceeded { renders });
            }
            canvas.copy_from_slice(background);
            for &si in stack.iter().rev() {
                let (oid, left) = singles[si];
                let pixels = &objects.get(oid).unwrap().pixels;
                for (off, px) in pixels.iter().enumerate() {
                    let col = left + off as i64;
                    if col >= 0 && (col as usize) < d {
                        canvas[col as usize] = *px;
                    }
                }
            }
            if canvas == image.pixels {
                return Ok(Some(count));
            }
            // Advance the odometer.
            let mut pos = count;
            loop {
                if pos == 0 {
                    break;
                }
                stack[pos - 1] += 1;
                if stack[pos - 1] < singles.len() {
                    break;
                }
                stack[pos - 1] = 0;
                pos -= 1;
            }
            if pos == 0 {
                break;
            }
        }
    }
    Ok(None)
}

/// How a region is matched against the dictionary.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MatchMode {
    Exact,
    Approx { alpha: Frac, w_alg: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MatchSource {
    /// `offset` is the object pixel index aligned with `start`.
    Object { id: usize, offset: usize },
    Background,
}

/// A contiguous remnant region matching a single source; `end` inclusive.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MatchRegion {
    pub start: usize,
    pub end: usize,
    pub source: MatchSource,
    pub approx: bool,
}

impl MatchRegion {
    /// Number of pixels covered; regions are never empty.
    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.end - self.start + 1
    }
}

/// Candidate ranking: longest, then leftmost, then smallest object id with
/// the background after all objects, then smallest object offset.
fn better(a: &MatchRegion, b: &MatchRegion) -> bool {
    let key = |r: &MatchRegion| {
        let (src, off) = match r.source {
            MatchSource::Object { id, offset } => (id, offset),
            MatchSource::Background => (usize::MAX, 0),
        };
        (usize::MAX - r.len(), r.start, src, off)
    };
    key(a) < key(b)
}

/// Longest sentinel-free region of the remnant that matches a single object
/// (at some alignment) or the background (at its own indices), exactly or
/// window-approximately.
pub fn find_largest_match(
    remnant: &[Option<Color>],
    objects: &ObjectSet,
    background_row: &[Color],
    mode: MatchMode,
) -> Option<MatchRegion> {
    let d = remnant.len();
    let mut best: Option<MatchRegion> = None;
    let mut offer = |cand: MatchRegion| {
        if best.as_ref().is_none_or(|b| better(&cand, b)) {
            best = Some(cand);
        }
    };

    // Maximal sentinel-free fragments.
    let mut fs = 0;
    while fs < d {
        if remnant[fs].is_none() {
            fs += 1;
            continue;
        }
        let mut fe = fs;
        while fe < d && remnant[fe].is_some() {
            fe += 1;
        }
        let frag: Vec<Color> = remnant[fs..fe].iter().map(|c| c.unwrap()).collect();

        // Background: aligned at identity.
        let bg_ref: Vec<Color> = background_row[fs..fe].to_vec();
        for cand in diagonal_candidates(&frag, &bg_ref, fs, 0, mode, |_, _| MatchSource::Background)
        {
            offer(cand);
        }

        // Objects: every alignment.
        for obj in objects.objects() {
            let s = obj.len();
            let flen = fe - fs;
            // delta = image position - object index, relative to fragment start.
            for delta in -(s as i64 - 1)..flen as i64 {
                let p0 = delta.max(0) as usize;
                let p1 = (flen as i64).min(delta + s as i64) as usize;
                if p0 >= p1 {
                    continue;
                }
                let sub_frag = &frag[p0..p1];
                let obj_start = (p0 as i64 - delta) as usize;
                let sub_obj = &obj.pixels[obj_start..obj_start + (p1 - p0)];
                let id = obj.id;
                for cand in diagonal_candidates(
                    sub_frag,
                    sub_obj,
                    fs + p0,
                    obj_start,
                    mode,
                    move |region_start, base| MatchSource::Object {
                        id,
                        offset: base + (region_start),
                    },
                ) {
                    offer(cand);
                }
            }
        }
        fs = fe;
    }
    best
}

/// Maximal matching runs of `frag` against `reference` (same length,
/// aligned), reported in image coordinates. `image_base` is the image
/// position of `frag[0]`; `ref_base` the reference-side index of
/// `reference[0]` (object pixel index, or unused for background).
fn diagonal_candidates(
    frag: &[Color],
    reference: &[Color],
    image_base: usize,
    ref_base: usize,
    mode: MatchMode,
    make_source: impl Fn(usize, usize) -> MatchSource,
) -> Vec<MatchRegion> {
    debug_assert_eq!(frag.len(), reference.len());
    let n = frag.len();
    let mut out = Vec::new();
    match mode {
        MatchMode::Exact => {
            let mut i = 0;
            while i < n {
                if frag[i] != reference[i] {
                    i += 1;
                    continue;
                }
                let mut j = i;
                while j < n && frag[j] == reference[j] {
                    j += 1;
                }
                out.push(MatchRegion {
                    start: image_base + i,
                    end: image_base + j - 1,
                    source: make_source(i, ref_base),
                    approx: false,
                });
                i = j;
            }
        }
        MatchMode::Approx { alpha, w_alg } => {
            if n < w_alg {
                return out;
            }
            // Window w at offset i is admissible iff its mismatch count is
            // within alpha * w_alg; a region is a maximal run of
            // consecutive admissible windows plus the window tail.
            let mut prefix = Vec::with_capacity(n + 1);
            prefix.push(0usize);
            for (x, y) in frag.iter().zip(reference) {
                prefix.push(prefix.last().unwrap() + usize::from(x != y));
            }
            let windows = n - w_alg + 1;
            let ok = |i: usize| {
                let dist = (prefix[i + w_alg] - prefix[i]) as u64;
                alpha.ge_scaled(dist, w_alg as u64)
            };
            let mut i = 0;
            while i < windows {
                if !ok(i) {
                    i += 1;
                    continue;
                }
                let mut j = i;
                while j < windows && ok(j) {
                    j += 1;
                }
                out.push(MatchRegion {
                    start: image_base + i,
                    end: image_base + j - 1 + w_alg - 1,
                    source: make_source(i, ref_base),
                    approx: true,
                });
                i = j;
            }
        }
    }
    out
}

fn source_color(
    source: MatchSource,
    region_start: usize,
    p: usize,
    objects: &ObjectSet,
    background_row: &[Color],
) -> Color {
    match source {
        MatchSource::Background => background_row[p],
        MatchSource::Object { id, offset } => {
            objects.get(id).unwrap().pixels[offset + (p - region_start)]
        }
    }
}

fn greedy_loop(
    image: &Image,
    objects: &ObjectSet,
    background_row: &[Color],
    mode: MatchMode,
    guard: usize,
    stop_len: usize,
) -> (Explanation, Vec<(usize, Color)>) {
    let d = image.d();
    let mut remnant: Vec<Option<Color>> = image.pixels.iter().copied().map(Some).collect();
    let mut sources = vec![Source::Unknown; d];
    let mut corrected = Vec::new();

    while let Some(region) = find_largest_match(&remnant, objects, background_row, mode) {
        if region.len() <= stop_len {
            break;
        }
        let lo = region.start + guard;
        let hi = region.end - guard;
        for p in lo..=hi {
            let truth = source_color(region.source, region.start, p, objects, background_row);
            sources[p] = match region.source {
                MatchSource::Background => Source::Background { index: p },
                MatchSource::Object { id, offset } => {
                    Source::Object { id, index: offset + (p - region.start) }
                }
            };
            if image.pixels[p] != truth {
                corrected.push((p, truth));
            }
            remnant[p] = None;
        }
    }
    corrected.sort_unstable_by_key(|&(p, _)| p);
    (Explanation { sources, object_count: None }, corrected)
}

/// Greedy exact-match segmentation for w-well-structured objects. Assigned
/// pixels are always correct; regions of length at most `2kw` are left
/// `Unknown` (at most `4k^2 w + 2kw` pixels in total).
pub fn greedy_infer(
    image: &Image,
    objects: &ObjectSet,
    background: &BackgroundModel,
    w: usize,
    k: usize,
) -> Result<Explanation, InferError> {
    if w == 0 {
        return Err(InferError::ZeroWidth);
    }
    if k == 0 {
        return Err(InferError::ZeroK);
    }
    let background_row = background.row(image.d())?;
    let (explanation, corrected) =
        greedy_loop(image, objects, &background_row, MatchMode::Exact, k * w, 2 * k * w);
    debug_assert!(corrected.is_empty(), "exact matching cannot correct pixels");
    Ok(explanation)
}

/// Output of the noise-tolerant segmenter: the explanation names the true
/// source of every assigned pixel, and `corrected` lists the positions
/// inside explained regions where the observed pixel disagrees with that
/// source, paired with the source's (uncorrupted) color.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NoisyInference {
    pub explanation: Explanation,
    pub corrected: Vec<(usize, Color)>,
}

/// Greedy segmentation under an `(alpha, W)`-bounded adversary, for
/// epsilon-strongly w-well-structured objects with `alpha < epsilon/4`.
/// Matching uses windows of `w_alg = max(w, W)`; guard bands and the stop
/// threshold widen accordingly.
#[allow(clippy::too_many_arguments)]
pub fn greedy_infer_noisy(
    image: &Image,
    objects: &ObjectSet,
    background: &BackgroundModel,
    w: usize,
    epsilon: Frac,
    alpha: Frac,
    window: usize,
    k: usize,
) -> Result<NoisyInference, InferError> {
    if w == 0 {
        return Err(InferError::ZeroWidth);
    }
    if k == 0 {
        return Err(InferError::ZeroK);
    }
    if window == 0 {
        return Err(InferError::BadWindow);
    }
    if epsilon.is_zero() || epsilon > Frac::ONE {
        return Err(InferError::BadEpsilon);
    }
    // alpha < epsilon / 4, exactly.
    let quarter_eps = epsilon.halved().halved();
    if alpha >= quarter_eps {
        return Err(InferError::AlphaNotBelowQuarterEpsilon);
    }
    let w_alg = w.max(window);
    let background_row = background.row(image.d())?;
    let (explanation, corrected) = greedy_loop(
        image,
        objects,
        &background_row,
        MatchMode::Approx { alpha, w_alg },
        k * w_alg,
        2 * k * w_alg,
    );
    Ok(NoisyInference { explanation, corrected })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::px;

    fn set(rows: &[&[u16]], c: u16) -> ObjectSet {
        ObjectSet::new(rows.iter().map(|r| px(r)).collect(), c).unwrap()
    }

    fn distinct_bg(d: usize) -> Vec<Color> {
        vec![Color::Background; d]
    }

    #[test]
    fn background_only_image_needs_zero_objects() {
        let objects = set(&[&[1, 0, 1]], 2);
        let bg = distinct_bg(6);
        let image = Image { pixels: bg.clone() };
        for room in [RoomModel::Closed, RoomModel::Open] {
            let e = dp_min_objects(&image, &objects, &bg, room).unwrap().unwrap();
            assert_eq!(e.object_count, Some(0));
            assert!(e.sources.iter().all(|s| matches!(s, Source::Background { .. })));
            let bf = brute_force_min_objects(&image, &objects, &bg, room, 2).unwrap();
            assert_eq!(bf, Some(0));
        }
    }

    #[test]
    fn single_visible_object_needs_one() {
        let objects = set(&[&[1, 0, 1]], 2);
        let bg = distinct_bg(6);
        let mut pixels = distinct_bg(6);
        pixels[2..5].copy_from_slice(&px(&[1, 0, 1]));
        let image = Image { pixels };
        let e = dp_min_objects(&image, &objects, &bg, RoomModel::Closed).unwrap().unwrap();
        assert_eq!(e.object_count, Some(1));
        assert_eq!(e.sources[2], Source::Object { id: 0, index: 0 });
        assert_eq!(e.sources[4], Source::Object { id: 0, index: 2 });
        let bf = brute_force_min_objects(&image, &objects, &bg, RoomModel::Closed, 2).unwrap();
        assert_eq!(bf, Some(1));
    }

    #[test]
    fn infeasible_image_reports_none() {
        let objects = set(&[&[1, 1, 1]], 2);
        let bg = distinct_bg(4);
        let image = Image { pixels: px(&[0, 0, 0, 0]) };
        assert_eq!(dp_min_objects(&image, &objects, &bg, RoomModel::Open).unwrap(), None);
        assert_eq!(
            brute_force_min_objects(&image, &objects, &bg, RoomModel::Open, 3).unwrap(),
            None
        );
    }

    #[test]
    fn closed_room_rejects_overhanging_explanations() {
        // Image tail matches the object's head only; open room can hang it
        // off the right edge, closed room cannot.
        let objects = set(&[&[1, 0, 1, 1]], 2);
        let bg = distinct_bg(6);
        let mut pixels = distinct_bg(6);
        pixels[4] = Color::Obj(1);
        pixels[5] = Color::Obj(0);
        let image = Image { pixels };
        let open = dp_min_objects(&image, &objects, &bg, RoomModel::Open).unwrap();
        assert_eq!(open.unwrap().object_count, Some(1));
        assert_eq!(dp_min_objects(&image, &objects, &bg, RoomModel::Closed).unwrap(), None);
    }

    #[test]
    fn brute_force_budget_is_enforced() {
        // Open room, three length-2 objects on a wide canvas, k_max = 4:
        // the odometer space dwarfs the render budget.
        let objects = set(&[&[0, 1], &[1, 0], &[1, 1]], 2);
        let bg = distinct_bg(30);
        let image = Image { pixels: px(&[0; 30]) };
        assert!(matches!(
            brute_force_min_objects(&image, &objects, &bg, RoomModel::Open, 4),
            Err(InferError::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn unequal_lengths_rejected() {
        let objects = set(&[&[1, 0], &[1, 0, 1]], 2);
        let bg = distinct_bg(4);
        let image = Image { pixels: px(&[1, 0, 1, 0]) };
        assert!(matches!(
            dp_min_objects(&image, &objects, &bg, RoomModel::Open),
            Err(InferError::UnequalObjectLengths)
        ));
    }

    #[test]
    fn dp_paper_style_example_counts_one() {
        // Background CBABABABAB..., object BAAAA placed one pixel in.
        let d = 12;
        let mut bg = vec![Color::Obj(2)]; // C
        for i in 0..d - 1 {
            bg.push(if i % 2 == 0 { Color::Obj(1) } else { Color::Obj(0) }); // B A B A ...
        }
        let object = px(&[1, 0, 0, 0, 0]); // BAAAA
        let objects = ObjectSet::new(vec![object.clone(), px(&[0, 1, 1, 1, 1])], 3).unwrap();
        let mut pixels = bg.clone();
        pixels[1..6].copy_from_slice(&object);
        let image = Image { pixels };
        let e = dp_min_objects(&image, &objects, &bg, RoomModel::Open).unwrap().unwrap();
        assert_eq!(e.object_count, Some(1));
    }

    #[test]
    fn find_largest_match_prefers_longest_then_leftmost() {
        let objects = set(&[&[1, 1, 1], &[0, 0, 0]], 2);
        let bg = distinct_bg(10);
        // Two equal-length candidate object runs; leftmost must win.
        let mut remnant: Vec<Option<Color>> = vec![None; 10];
        remnant[1..4].fill(Some(Color::Obj(0)));
        remnant[6..9].fill(Some(Color::Obj(1)));
        let r = find_largest_match(&remnant, &objects, &bg, MatchMode::Exact).unwrap();
        assert_eq!((r.start, r.end), (1, 3));
        assert_eq!(r.source, MatchSource::Object { id: 1, offset: 0 });
        // All-sentinel remnant: nothing to match.
        let empty: Vec<Option<Color>> = vec![None; 10];
        assert!(find_largest_match(&empty, &objects, &bg, MatchMode::Exact).is_none());
    }

    #[test]
    fn background_ranks_after_objects_on_ties() {
        let objects = set(&[&[1, 1, 1]], 2);
        let bg = distinct_bg(8);
        let mut remnant: Vec<Option<Color>> = vec![None; 8];
        remnant[0..3].fill(Some(Color::Obj(1)));
        remnant[4..7].fill(Some(Color::Background));
        let r = find_largest_match(&remnant, &objects, &bg, MatchMode::Exact).unwrap();
        assert_eq!(r.source, MatchSource::Object { id: 0, offset: 0 });
    }

    #[test]
    fn greedy_assigns_interior_and_leaves_guard_bands() {
        // One object fully visible on a distinct background; k = 1, w = 1.
        let objects = set(&[&[1, 0, 1, 1, 0, 1, 0]], 2);
        let bg = BackgroundModel::Distinct;
        let mut pixels = distinct_bg(15);
        pixels[4..11].copy_from_slice(&objects.objects()[0].pixels);
        let image = Image { pixels };
        let e = greedy_infer(&image, &objects, &bg, 1, 1).unwrap();
        // No incorrect assignments.
        for (i, s) in e.sources.iter().enumerate() {
            match s {
                Source::Object { id, index } => {
                    assert_eq!(*id, 0);
                    assert_eq!(i, 4 + index);
                }
                Source::Background { index } => {
                    assert_eq!(*index, i);
                    assert!(!(4..11).contains(&i));
                }
                Source::Unknown => {}
            }
        }
        // Unknowns bounded by 4k^2 w + 2kw = 6.
        assert!(e.unknown_count() <= 6, "unknowns = {}", e.unknown_count());
    }

    #[test]
    fn greedy_stops_on_short_regions_without_guessing() {
        // Region lengths never exceed 2kw: everything stays Unknown.
        let objects = set(&[&[1, 0], &[0, 1]], 2);
        let bg = BackgroundModel::Distinct;
        let image = Image { pixels: px(&[1, 0, 0, 1]) };
        let e = greedy_infer(&image, &objects, &bg, 2, 2).unwrap();
        assert_eq!(e.unknown_count(), 4);
    }

    #[test]
    fn noisy_rejects_alpha_at_quarter_epsilon() {
        let objects = set(&[&[1, 0, 1, 1, 0, 1, 0, 0]], 2);
        let image = Image { pixels: distinct_bg(20) };
        let eps = Frac::new(1, 4).unwrap();
        let err = greedy_infer_noisy(
            &image,
            &objects,
            &BackgroundModel::Distinct,
            2,
            eps,
            Frac::new(1, 16).unwrap(),
            4,
            1,
        );
        assert!(matches!(err, Err(InferError::AlphaNotBelowQuarterEpsilon)));
        assert!(greedy_infer_noisy(
            &image,
            &objects,
            &BackgroundModel::Distinct,
            2,
            eps,
            Frac::new(1, 17).unwrap(),
            4,
            1,
        )
        .is_ok());
    }

    #[test]
    fn noisy_zero_corruption_matches_exact_with_widened_guards() {
        // Build a deterministic image from one long well-structured object.
        let obj: Vec<u16> = (0..24u16).map(|i| (i * 7 + i * i) % 5).collect();
        let objects = set(&[&obj], 5);
        let mut pixels = distinct_bg(40);
        pixels[6..30].copy_from_slice(&objects.objects()[0].pixels);
        let image = Image { pixels };
        let eps = Frac::new(1, 2).unwrap();
        let alpha = Frac::new(1, 10).unwrap();
        let (w, window, k) = (3, 3, 1);
        let noisy = greedy_infer_noisy(
            &image,
            &objects,
            &BackgroundModel::Distinct,
            w,
            eps,
            alpha,
            window,
            k,
        )
        .unwrap();
        assert!(noisy.corrected.is_empty());
        let w_alg = w.max(window);
        let exact = greedy_infer(&image, &objects, &BackgroundModel::Distinct, w_alg, k).unwrap();
        assert_eq!(noisy.explanation, exact);
    }

    #[test]
    fn noisy_detects_an_interior_corruption() {
        let obj: Vec<u16> = (0..32u16).map(|i| (i * 11 + 3) % 7).collect();
        let objects = set(&[&obj], 7);
        let mut pixels = distinct_bg(48);
        pixels[8..40].copy_from_slice(&objects.objects()[0].pixels);
        // Corrupt one pixel well inside the object.
        let target = 24;
        let original = pixels[target];
        pixels[target] = match original {
            Color::Obj(v) => Color::Obj((v + 1) % 7),
            _ => unreachable!(),
        };
        let image = Image { pixels };
        // One flip per 8-window is inside the budget: alpha * w_alg = 1.
        let eps = Frac::new(3, 4).unwrap();
        let alpha = Frac::new(1, 8).unwrap();
        let noisy = greedy_infer_noisy(
            &image,
            &objects,
            &BackgroundModel::Distinct,
            8,
            eps,
            alpha,
            8,
            1,
        )
        .unwrap();
        assert_eq!(noisy.corrected, vec![(target, original)]);
        // The assigned sources name the true object.
        for (i, s) in noisy.explanation.sources.iter().enumerate() {
            if let Source::Object { id, index } = s {
                assert_eq!(*id, 0);
                assert_eq!(i, 8 + index);
            }
        }
    }
}
