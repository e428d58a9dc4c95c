//! Dictionary recovery from image samples.
//!
//! Three routes back to the objects:
//!
//! 1. [`sequence`]: greedy shotgun stitching: repeatedly merge the two
//!    segments with the longest overlap (at least the signature width `w`).
//!    With a w-well-structured source set and full coverage this rebuilds
//!    the objects exactly.
//! 2. [`recover_with_markers`]: when objects carry in-band endpoint
//!    markers, split images at markers; marker-delimited chunks are whole
//!    objects, the rest are pieces for sequencing.
//! 3. [`learn_no_markers`]: without markers, gather every background-free
//!    length-L window that clears a frequency threshold `tau * S`, keep
//!    only the middle L/2 of each (the ends may straddle two objects), or
//!    sequence the middles, then recover each object's ends from the
//!    shortest background-delimited extension seen in any sample.
//!
//! The sample-size calculators translate the visibility probability of a
//! fixed L-pixel piece into the number of samples needed to see every
//! required piece with probability 9/10.

use crate::frac::Frac;
use crate::model::{Color, Image, ModelError, ObjectSet};
use alloc::vec::Vec;
use core::fmt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LearnError {
    ZeroWidth,
    /// L must be a positive multiple of 4 no larger than the canvas.
    BadBlockLength { l: usize },
    WindowExceedsImage { l: usize, d: usize },
    EmptySamples,
    MixedImageWidths,
    SentinelInSegment,
    EmptySegment,
    /// A regime validity check failed; the payload names the inequality.
    SeparationCheck(&'static str),
    BadParameter(&'static str),
    Model(ModelError),
}

impl fmt::Display for LearnError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LearnError::ZeroWidth => write!(f, "signature width must be >= 1"),
            LearnError::BadBlockLength { l } => {
                write!(f, "window length {l} must be a positive multiple of 4")
            }
            LearnError::WindowExceedsImage { l, d } => {
                write!(f, "window length {l} exceeds image width {d}")
            }
            LearnError::EmptySamples => write!(f, "at least one sample is required"),
            LearnError::MixedImageWidths => write!(f, "samples must share one canvas width"),
            LearnError::SentinelInSegment => write!(f, "segments must contain object colors only"),
            LearnError::EmptySegment => write!(f, "segments must be nonempty"),
            LearnError::SeparationCheck(what) => write!(f, "validity check failed: {what}"),
            LearnError::BadParameter(what) => write!(f, "bad parameter: {what}"),
            LearnError::Model(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for LearnError {}

impl From<ModelError> for LearnError {
    fn from(e: ModelError) -> Self {
        LearnError::Model(e)
    }
}

/// A background-free piece of some object, with its observed multiplicity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Segment {
    pub pixels: Vec<Color>,
    pub multiplicity: u64,
}

impl Segment {
    pub fn new(pixels: Vec<Color>) -> Self {
        Segment { pixels, multiplicity: 1 }
    }
}

/// Which markerless parameterization is in force.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Regime {
    /// Two objects per image: `L = 4w`, `tau = 1/(16m)`.
    TwoObject,
    /// k objects per image: `L = 8wk`, `tau = k/(C m 2^k)`.
    KObject,
}

/// Parameters of a markerless learning run.
#[derive(Clone, Copy, Debug)]
pub struct LearnParams {
    pub regime: Regime,
    pub w: usize,
    pub l: usize,
    pub tau: Frac,
    /// Planned sample count (the calculators' output); the learner itself
    /// thresholds against the actual number of samples it is handed.
    pub samples: usize,
    pub k: usize,
    pub m: usize,
    pub d: usize,
    pub s: usize,
}

impl LearnParams {
    /// Two-objects-per-image parameters: `L = 4w`, `tau = 1/(16m)`.
    pub fn two_object(
        w: usize,
        m: usize,
        d: usize,
        s: usize,
        samples: usize,
    ) -> Result<Self, LearnError> {
        let tau = Frac::new(1, 16 * m as u64).map_err(|_| LearnError::BadParameter("m >= 1"))?;
        let p = LearnParams { regime: Regime::TwoObject, w, l: 4 * w, tau, samples, k: 2, m, d, s };
        p.validate()?;
        Ok(p)
    }

    /// k-objects-per-image parameters: `L = 8wk`, `tau = k/(c_tau m 2^k)`.
    pub fn k_object(
        w: usize,
        k: usize,
        m: usize,
        d: usize,
        s: usize,
        samples: usize,
        c_tau: u64,
    ) -> Result<Self, LearnError> {
        if k < 2 {
            return Err(LearnError::BadParameter("k >= 2"));
        }
        let two_k = 1u64
            .checked_shl(k as u32)
            .ok_or(LearnError::BadParameter("k too large"))?;
        let den = c_tau
            .checked_mul(m as u64)
            .and_then(|x| x.checked_mul(two_k))
            .ok_or(LearnError::BadParameter("tau denominator overflow"))?;
        let tau = Frac::new(k as u64, den).map_err(|_| LearnError::BadParameter("c_tau >= 1"))?;
        let p = LearnParams { regime: Regime::KObject, w, l: 8 * w * k, tau, samples, k, m, d, s };
        p.validate()?;
        Ok(p)
    }

    /// Explicit parameters (CLI path); validity is still enforced.
    #[allow(clippy::too_many_arguments)]
    pub fn custom(
        regime: Regime,
        w: usize,
        l: usize,
        tau: Frac,
        samples: usize,
        k: usize,
        m: usize,
        d: usize,
        s: usize,
    ) -> Result<Self, LearnError> {
        let p = LearnParams { regime, w, l, tau, samples, k, m, d, s };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<(), LearnError> {
        if self.w == 0 {
            return Err(LearnError::ZeroWidth);
        }
        if self.l == 0 || !self.l.is_multiple_of(4) {
            return Err(LearnError::BadBlockLength { l: self.l });
        }
        if self.l > self.d {
            return Err(LearnError::WindowExceedsImage { l: self.l, d: self.d });
        }
        if self.m == 0 || self.k == 0 || self.s == 0 {
            return Err(LearnError::BadParameter("m, k, s >= 1"));
        }
        if self.tau > Frac::ONE {
            return Err(LearnError::BadParameter("tau <= 1"));
        }
        let d_prime = self.d + self.s - 2;
        match self.regime {
            Regime::TwoObject => {
                if self.m * d_prime < 128 {
                    return Err(LearnError::SeparationCheck("m * d' >= 128"));
                }
                if 2 * (self.s + 2 * self.l) >= 3 * self.d {
                    return Err(LearnError::SeparationCheck("s + 2L < 3d/2"));
                }
            }
            Regime::KObject => {
                let bound = 16u128 * self.m as u128 * self.k as u128 * (1u128 << self.k);
                if (d_prime as u128) < bound {
                    return Err(LearnError::SeparationCheck("d' >= 16 * m * k * 2^k"));
                }
                if 2 * self.l >= self.d {
                    return Err(LearnError::SeparationCheck("L < d/2"));
                }
            }
        }
        Ok(())
    }

    /// Lower bound on the probability of seeing a fixed L-piece per image.
    pub fn visibility_prob(&self) -> Result<f64, LearnError> {
        compute_visibility_prob(self.d, self.s, self.l, self.k, self.m)
    }

    /// The separator between good-string and overlap-string frequencies.
    pub fn p_mid(&self) -> Frac {
        match self.regime {
            Regime::TwoObject => Frac::new(1, 16 * self.m as u64).unwrap(),
            Regime::KObject => {
                Frac::new(self.k as u64, 16 * self.m as u64 * (1u64 << self.k)).unwrap()
            }
        }
    }
}

fn image_width(samples: &[Image]) -> Result<usize, LearnError> {
    let d = samples.first().ok_or(LearnError::EmptySamples)?.d();
    if samples.iter().any(|s| s.d() != d) {
        return Err(LearnError::MixedImageWidths);
    }
    Ok(d)
}

/// Sorted distinct background-free windows with multiplicities, as slices
/// into the sample images (nothing is copied until a caller decides to
/// keep a window).
fn window_multiplicities(
    samples: &[Image],
    l: usize,
) -> Result<Vec<(&[Color], u64)>, LearnError> {
    if l == 0 {
        return Err(LearnError::ZeroWidth);
    }
    if samples.is_empty() {
        return Ok(Vec::new());
    }
    let d = image_width(samples)?;
    if l > d {
        return Err(LearnError::WindowExceedsImage { l, d });
    }
    let mut refs: Vec<&[Color]> = Vec::new();
    for image in samples {
        for window in image.pixels.windows(l) {
            if window.iter().all(|c| c.is_object()) {
                refs.push(window);
            }
        }
    }
    refs.sort_unstable();
    let mut out: Vec<(&[Color], u64)> = Vec::new();
    for win in refs {
        match out.last_mut() {
            Some((prev, n)) if *prev == win => *n += 1,
            _ => out.push((win, 1)),
        }
    }
    Ok(out)
}

/// Multiplicities of every background-free (object colors only) length-L
/// window across all samples, sorted by pixel string.
pub fn count_windows(samples: &[Image], l: usize) -> Result<Vec<Segment>, LearnError> {
    Ok(window_multiplicities(samples, l)?
        .into_iter()
        .map(|(pixels, multiplicity)| Segment { pixels: pixels.to_vec(), multiplicity })
        .collect())
}

/// KMP prefix function.
fn prefix_function(p: &[Color]) -> Vec<usize> {
    let mut pf = alloc::vec![0usize; p.len()];
    for i in 1..p.len() {
        let mut k = pf[i - 1];
        while k > 0 && p[i] != p[k] {
            k = pf[k - 1];
        }
        if p[i] == p[k] {
            k += 1;
        }
        pf[i] = k;
    }
    pf
}

/// Best way to append `b` after `a`: `(overlap, containment)` where
/// `overlap` is the number of shared pixels. Containment means `b` occurs
/// inside `a`, in which case the merge is just `a`.
fn merge_overlap(a: &[Color], b: &[Color], pf_b: &[usize]) -> (usize, bool) {
    let mut state = 0usize;
    let mut contained = false;
    for &ch in a {
        while state > 0 && (state == b.len() || b[state] != ch) {
            state = pf_b[state - 1];
        }
        if b[state] == ch {
            state += 1;
        }
        if state == b.len() {
            contained = true;
        }
    }
    if contained {
        (b.len(), true)
    } else {
        (state, false)
    }
}

/// Greedy shotgun assembly. Repeatedly merges the pair of segments with the
/// longest overlap (suffix/prefix or containment) of at least `w` pixels
/// until no pair qualifies, then returns the distinct results as an object
/// set (ids in lexicographic order, `c` inferred from the pixels).
///
/// The working list starts sorted lexicographically and ties among
/// maximal-overlap pairs break toward the smallest index pair, so the merge
/// order (and any failure mode on degraded input) is reproducible.
pub fn sequence(segments: &[Segment], w: usize) -> Result<ObjectSet, LearnError> {
    if w == 0 {
        return Err(LearnError::ZeroWidth);
    }
    for s in segments {
        if s.pixels.is_empty() {
            return Err(LearnError::EmptySegment);
        }
        if s.pixels.iter().any(|c| !c.is_object()) {
            return Err(LearnError::SentinelInSegment);
        }
    }
    let mut work: Vec<Vec<Color>> = segments.iter().map(|s| s.pixels.clone()).collect();
    work.sort_unstable();
    work.dedup();

    let mut pf: Vec<Vec<usize>> = work.iter().map(|s| prefix_function(s)).collect();
    let n0 = work.len();
    let mut ov: Vec<Vec<(usize, bool)>> = alloc::vec![alloc::vec![(0, false); n0]; n0];
    for i in 0..n0 {
        for j in 0..n0 {
            if i != j {
                ov[i][j] = merge_overlap(&work[i], &work[j], &pf[j]);
            }
        }
    }

    while work.len() > 1 {
        let mut best: Option<(usize, usize, usize, bool)> = None;
        #[allow(clippy::needless_range_loop)]
        for i in 0..work.len() {
            for j in 0..work.len() {
                if i == j {
                    continue;
                }
                let (o, cont) = ov[i][j];
                if o >= w && best.is_none_or(|(bo, _, _, _)| o > bo) {
                    best = Some((o, i, j, cont));
                }
            }
        }
        let Some((o, i, j, cont)) = best else { break };
        let merged = if cont {
            work[i].clone()
        } else {
            let mut m = work[i].clone();
            m.extend_from_slice(&work[j][o..]);
            m
        };
        // Replace i with the merge, drop j, refresh i's row and column.
        work.remove(j);
        pf.remove(j);
        ov.remove(j);
        for row in &mut ov {
            row.remove(j);
        }
        let i = if i > j { i - 1 } else { i };
        work[i] = merged;
        pf[i] = prefix_function(&work[i]);
        for x in 0..work.len() {
            if x != i {
                ov[i][x] = merge_overlap(&work[i], &work[x], &pf[x]);
                ov[x][i] = merge_overlap(&work[x], &work[i], &pf[i]);
            }
        }
    }

    work.sort_unstable();
    work.dedup();
    let c = inferred_color_count(&work);
    Ok(ObjectSet::new(work, c)?)
}

fn inferred_color_count(rows: &[Vec<Color>]) -> u16 {
    let max = rows
        .iter()
        .flatten()
        .filter_map(|c| match c {
            Color::Obj(v) => Some(*v),
            _ => None,
        })
        .max()
        .unwrap_or(0);
    (max + 1).max(2)
}

/// Splits marker-mode images at markers and recovers the object set:
/// chunks delimited by a left marker and a right marker are whole objects;
/// other background-free chunks of length at least `l` are sequenced with
/// signature width `w`. Returns the union, with sequenced strings that are
/// substrings of a whole-chunk object absorbed into it (a partial merge of
/// pieces carries no information once the whole object has been seen).
pub fn recover_with_markers(
    samples: &[Image],
    l: usize,
    w: usize,
) -> Result<ObjectSet, LearnError> {
    if w == 0 || l == 0 {
        return Err(LearnError::ZeroWidth);
    }
    if samples.is_empty() {
        return Err(LearnError::EmptySamples);
    }
    image_width(samples)?;

    let mut wholes: Vec<Vec<Color>> = Vec::new();
    let mut pieces: Vec<Vec<Color>> = Vec::new();
    for image in samples {
        let mut current: Vec<Color> = Vec::new();
        let mut left_mark: Option<Color> = None;
        let mut flush = |left: Option<Color>, right: Option<Color>, chunk: &mut Vec<Color>| {
            let body = core::mem::take(chunk);
            if body.is_empty() || !body.iter().all(|c| c.is_object()) {
                return;
            }
            if left == Some(Color::MarkL) && right == Some(Color::MarkR) {
                wholes.push(body);
            } else if body.len() >= l {
                pieces.push(body);
            }
        };
        for &px in &image.pixels {
            if px.is_marker() {
                flush(left_mark, Some(px), &mut current);
                left_mark = Some(px);
            } else {
                current.push(px);
            }
        }
        flush(left_mark, None, &mut current);
    }

    let piece_segments: Vec<Segment> = {
        pieces.sort_unstable();
        pieces.dedup();
        pieces.into_iter().map(Segment::new).collect()
    };
    let sequenced = sequence(&piece_segments, w)?;

    let mut rows: Vec<Vec<Color>> = wholes;
    let contained = |needle: &[Color], hay: &[Color]| {
        hay.len() >= needle.len() && hay.windows(needle.len()).any(|win| win == needle)
    };
    for merged in sequenced.objects() {
        if !rows.iter().any(|whole| contained(&merged.pixels, whole)) {
            rows.push(merged.pixels.clone());
        }
    }
    rows.sort_unstable();
    rows.dedup();
    let c = inferred_color_count(&rows);
    Ok(ObjectSet::new(rows, c)?)
}

/// Outcome of a markerless run, with the intermediate stages exposed so
/// tests can audit the kept windows and the pre-end-recovery cores.
#[derive(Clone, Debug)]
pub struct NoMarkerRecovery {
    /// Window strings that cleared the `tau * S` threshold.
    pub kept: Vec<Segment>,
    /// Sequenced middles, before end recovery.
    pub cores: Vec<Vec<Color>>,
    pub objects: ObjectSet,
}

/// Frequency-threshold learning without markers; see the module docs.
pub fn learn_no_markers(samples: &[Image], params: &LearnParams) -> Result<ObjectSet, LearnError> {
    Ok(learn_no_markers_detailed(samples, params)?.objects)
}

pub fn learn_no_markers_detailed(
    samples: &[Image],
    params: &LearnParams,
) -> Result<NoMarkerRecovery, LearnError> {
    params.validate()?;
    if samples.is_empty() {
        return Err(LearnError::EmptySamples);
    }
    let d = image_width(samples)?;
    if d != params.d {
        return Err(LearnError::BadParameter("samples disagree with params.d"));
    }
    let total = samples.len() as u64;
    let l = params.l;

    // Threshold before materializing: the distinct-window universe can be
    // large, the survivors are few.
    let kept: Vec<Segment> = window_multiplicities(samples, l)?
        .into_iter()
        .filter(|&(_, n)| params.tau.le_scaled(n, total))
        .map(|(pixels, multiplicity)| Segment { pixels: pixels.to_vec(), multiplicity })
        .collect();

    let mut middles: Vec<Vec<Color>> = kept
        .iter()
        .map(|seg| seg.pixels[l / 4..3 * l / 4].to_vec())
        .collect();
    middles.sort_unstable();
    middles.dedup();
    let middle_segments: Vec<Segment> = middles.into_iter().map(Segment::new).collect();
    let cores_set = sequence(&middle_segments, params.w)?;
    let cores: Vec<Vec<Color>> = cores_set.objects().iter().map(|o| o.pixels.clone()).collect();

    let mut rows = Vec::with_capacity(cores.len());
    for core in &cores {
        if core.len() < params.w {
            rows.push(core.clone());
            continue;
        }
        let sleft = &core[..params.w];
        let sright = &core[core.len() - params.w..];
        let left_ext = shortest_extension(samples, sleft, Side::Left);
        let right_ext = shortest_extension(samples, sright, Side::Right);
        let mut full = left_ext.unwrap_or_default();
        full.extend_from_slice(core);
        full.extend_from_slice(&right_ext.unwrap_or_default());
        rows.push(full);
    }
    rows.sort_unstable();
    rows.dedup();
    let c = inferred_color_count(&rows);
    Ok(NoMarkerRecovery { kept, cores, objects: ObjectSet::new(rows, c)? })
}

enum Side {
    Left,
    Right,
}

/// Shortest string standing between a background pixel and an occurrence of
/// `signature`, over all samples. `Side::Left` looks for
/// `background, x, signature`; `Side::Right` for `signature, x, background`.
/// Ties break toward the lexicographically smallest candidate.
fn shortest_extension(samples: &[Image], signature: &[Color], side: Side) -> Option<Vec<Color>> {
    let w = signature.len();
    let mut best: Option<Vec<Color>> = None;
    for image in samples {
        let pixels = &image.pixels;
        if pixels.len() < w {
            continue;
        }
        for start in 0..=pixels.len() - w {
            if &pixels[start..start + w] != signature {
                continue;
            }
            let candidate = match side {
                Side::Left => {
                    let mut j = start as i64 - 1;
                    while j >= 0 && pixels[j as usize].is_object() {
                        j -= 1;
                    }
                    if j < 0 || pixels[j as usize] != Color::Background {
                        continue;
                    }
                    pixels[(j + 1) as usize..start].to_vec()
                }
                Side::Right => {
                    let mut j = start + w;
                    while j < pixels.len() && pixels[j].is_object() {
                        j += 1;
                    }
                    if j == pixels.len() || pixels[j] != Color::Background {
                        continue;
                    }
                    pixels[start + w..j].to_vec()
                }
            };
            let better = match &best {
                None => true,
                Some(b) => {
                    candidate.len() < b.len() || (candidate.len() == b.len() && candidate < *b)
                }
            };
            if better {
                best = Some(candidate);
            }
        }
    }
    best
}

fn powi(x: f64, n: usize) -> f64 {
    let mut out = 1.0;
    for _ in 0..n {
        out *= x;
    }
    out
}

/// Probability lower bound for a fixed L-pixel piece of a fixed object
/// being visible in one image:
/// `(1 - (s+L-1)/d')^(k-1) * (d+1-L)/d' * k/m` with `d' = d+s-2`.
pub fn compute_visibility_prob(
    d: usize,
    s: usize,
    l: usize,
    k: usize,
    m: usize,
) -> Result<f64, LearnError> {
    if l == 0 || l > d {
        return Err(LearnError::BadParameter("1 <= L <= d"));
    }
    if s == 0 || s >= d {
        return Err(LearnError::BadParameter("1 <= s < d"));
    }
    if k == 0 || m == 0 || k > m {
        return Err(LearnError::BadParameter("1 <= k <= m"));
    }
    let d_prime = (d + s - 2) as f64;
    if d_prime <= 0.0 {
        return Err(LearnError::BadParameter("d' > 0"));
    }
    let obscured = (s + l - 1) as f64 / d_prime;
    if obscured > 1.0 {
        return Err(LearnError::BadParameter("(s+L-1)/d' <= 1"));
    }
    let fit = (d + 1 - l) as f64 / d_prime;
    Ok(powi(1.0 - obscured, k - 1) * fit * (k as f64 / m as f64))
}

/// Samples needed for marker-mode recovery with success probability 9/10:
/// `ceil(ln(20 m s / L) / a)`, with `a` the visibility probability above.
pub fn required_samples_markers(
    d: usize,
    s: usize,
    l: usize,
    k: usize,
    m: usize,
) -> Result<usize, LearnError> {
    let a = compute_visibility_prob(d, s, l, k, m)?;
    if a <= 0.0 {
        return Err(LearnError::BadParameter("visibility probability is zero"));
    }
    let needed = libm::log(20.0 * m as f64 * s as f64 / l as f64) / a;
    Ok((libm::ceil(needed) as isize).max(1) as usize)
}

/// `ceil(pilot_c * m * ln(m s))`: the two-object sample bound with its
/// hidden constant made explicit.
pub fn samples_two_object(pilot_c: f64, m: usize, s: usize) -> usize {
    let v = pilot_c * m as f64 * libm::log((m * s) as f64);
    (libm::ceil(v) as isize).max(1) as usize
}

/// `ceil(pilot_c * 2^k * m * ln(m s))`: the k-object sample bound.
pub fn samples_k_object(pilot_c: f64, k: usize, m: usize, s: usize) -> usize {
    let v = pilot_c * powi(2.0, k) * m as f64 * libm::log((m * s) as f64);
    (libm::ceil(v) as isize).max(1) as usize
}
