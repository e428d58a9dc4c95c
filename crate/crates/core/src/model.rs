//! The generative image model.
//!
//! A scene stacks `k` placed objects over a background row on a canvas of
//! width `d`; the view operator projects each column to its topmost visible
//! pixel. Placement follows one of two room models (objects confined to the
//! canvas, or allowed to spill off its edges), depth order is either fully
//! random or constrained by a partial order, and the `k`-subset of objects
//! is drawn uniformly.
//!
//! All public positions are 0-based and ranges are half-open.

use crate::rng::Xoshiro256StarStar;
use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

/// A pixel color. Object pixels carry a value in `0..c`; the remaining
/// variants are reserved sentinels that never occur inside an object:
/// the distinct background, and the left/right endpoint markers.
///
/// A scene cell additionally distinguishes "nothing here", represented as
/// `Option<Color>` with `None` for the blank.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Color {
    Obj(u16),
    Background,
    MarkL,
    MarkR,
}

impl Color {
    pub fn is_object(self) -> bool {
        matches!(self, Color::Obj(_))
    }

    pub fn is_marker(self) -> bool {
        matches!(self, Color::MarkL | Color::MarkR)
    }
}

impl fmt::Display for Color {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Color::Obj(v) => write!(f, "{v}"),
            Color::Background => write!(f, "b"),
            Color::MarkL => write!(f, "<"),
            Color::MarkR => write!(f, ">"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ModelError {
    /// Fewer than two object colors.
    ColorCountTooSmall,
    /// An object pixel is a reserved sentinel or out of `0..c`.
    InvalidObjectPixel { object_id: usize, index: usize },
    /// Object length outside the declared `[s_min, s]` bounds.
    ObjectLengthOutOfBounds { object_id: usize, len: usize },
    EmptyObject { object_id: usize },
    BadSizeBounds,
    /// Placement outside the legal range for the room model.
    PlacementOutOfRange { object_id: usize, left: i64 },
    DuplicateDepth { depth: usize },
    /// Depths are not a permutation of `1..=k`.
    BadDepths,
    UnknownObjectId { object_id: usize },
    BackgroundLength { expected: usize, got: usize },
    /// Background pixels must be object colors in the well-structured model.
    BadBackgroundPixel { index: usize },
    KExceedsM { k: usize, m: usize },
    /// Closed room cannot place an object longer than the canvas.
    ObjectTooLargeForRoom { object_id: usize, len: usize, d: usize },
    /// Two objects share the same pixel string, which would make ground
    /// truth ambiguous; image generation refuses such sets.
    DuplicateObjectStrings { first: usize, second: usize },
    CyclicDepthConstraints,
    BadConstraintId { object_id: usize },
    /// `d > 8w` is required when a signature width is in force.
    CanvasTooSmallForSignature { d: usize, w: usize },
    /// `s < d/2` is required by the learning setting.
    ObjectTooLargeForLearning { s: usize, d: usize },
    ZeroCanvas,
}

impl fmt::Display for ModelError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use ModelError::*;
        match self {
            ColorCountTooSmall => write!(f, "at least two object colors are required"),
            InvalidObjectPixel { object_id, index } => {
                write!(f, "object {object_id} pixel {index} is not a valid object color")
            }
            ObjectLengthOutOfBounds { object_id, len } => {
                write!(f, "object {object_id} length {len} outside [s_min, s]")
            }
            EmptyObject { object_id } => write!(f, "object {object_id} is empty"),
            BadSizeBounds => write!(f, "s_min must be >= 1 and <= s"),
            PlacementOutOfRange { object_id, left } => {
                write!(f, "placement of object {object_id} at {left} outside the room")
            }
            DuplicateDepth { depth } => write!(f, "duplicate depth rank {depth}"),
            BadDepths => write!(f, "depths must form a permutation of 1..=k"),
            UnknownObjectId { object_id } => write!(f, "unknown object id {object_id}"),
            BackgroundLength { expected, got } => {
                write!(f, "background length {got}, expected {expected}")
            }
            BadBackgroundPixel { index } => {
                write!(f, "background pixel {index} is not an object color")
            }
            KExceedsM { k, m } => write!(f, "k = {k} exceeds m = {m}"),
            ObjectTooLargeForRoom { object_id, len, d } => {
                write!(f, "object {object_id} (length {len}) cannot fit closed room of width {d}")
            }
            DuplicateObjectStrings { first, second } => {
                write!(f, "objects {first} and {second} have identical pixels")
            }
            CyclicDepthConstraints => write!(f, "depth ordering constraints contain a cycle"),
            BadConstraintId { object_id } => {
                write!(f, "depth constraint names unknown object {object_id}")
            }
            CanvasTooSmallForSignature { d, w } => {
                write!(f, "canvas {d} must exceed 8w = {}", 8 * w)
            }
            ObjectTooLargeForLearning { s, d } => {
                write!(f, "object size {s} must be below d/2 = {}", d / 2)
            }
            ZeroCanvas => write!(f, "canvas width must be >= 1"),
        }
    }
}

impl core::error::Error for ModelError {}

/// A latent dictionary atom: a string of object colors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Object {
    pub id: usize,
    pub pixels: Vec<Color>,
}

impl Object {
    pub fn len(&self) -> usize {
        self.pixels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pixels.is_empty()
    }
}

/// The dictionary: `m` objects over `c` colors with lengths in
/// `[s_min, s_max]`. Ids are `0..m` in storage order.
///
/// Duplicate pixel strings are representable (semi-random generation can
/// produce them), but [`generate_image`] refuses them because identical
/// objects would make per-pixel ground truth ambiguous.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ObjectSet {
    objects: Vec<Object>,
    c: u16,
    s_min: usize,
    s_max: usize,
}

impl ObjectSet {
    /// Builds a set from raw pixel rows, with tight size bounds.
    pub fn new(rows: Vec<Vec<Color>>, c: u16) -> Result<Self, ModelError> {
        let s_min = rows.iter().map(Vec::len).min().unwrap_or(1);
        let s_max = rows.iter().map(Vec::len).max().unwrap_or(1);
        Self::with_bounds(rows, c, s_min, s_max)
    }

    /// Builds a set with explicit declared bounds.
    pub fn with_bounds(
        rows: Vec<Vec<Color>>,
        c: u16,
        s_min: usize,
        s_max: usize,
    ) -> Result<Self, ModelError> {
        if c < 2 {
            return Err(ModelError::ColorCountTooSmall);
        }
        if s_min == 0 || s_min > s_max {
            return Err(ModelError::BadSizeBounds);
        }
        let mut objects = Vec::with_capacity(rows.len());
        for (id, pixels) in rows.into_iter().enumerate() {
            if pixels.is_empty() {
                return Err(ModelError::EmptyObject { object_id: id });
            }
            if pixels.len() < s_min || pixels.len() > s_max {
                return Err(ModelError::ObjectLengthOutOfBounds { object_id: id, len: pixels.len() });
            }
            for (index, px) in pixels.iter().enumerate() {
                match px {
                    Color::Obj(v) if *v < c => {}
                    _ => return Err(ModelError::InvalidObjectPixel { object_id: id, index }),
                }
            }
            objects.push(Object { id, pixels });
        }
        Ok(ObjectSet { objects, c, s_min, s_max })
    }

    pub fn m(&self) -> usize {
        self.objects.len()
    }

    pub fn c(&self) -> u16 {
        self.c
    }

    pub fn s_min(&self) -> usize {
        self.s_min
    }

    pub fn s_max(&self) -> usize {
        self.s_max
    }

    pub fn objects(&self) -> &[Object] {
        &self.objects
    }

    pub fn get(&self, id: usize) -> Option<&Object> {
        self.objects.get(id)
    }

    /// Ids of any pair of objects with identical pixel strings.
    pub fn duplicate_strings(&self) -> Option<(usize, usize)> {
        for i in 0..self.objects.len() {
            for j in i + 1..self.objects.len() {
                if self.objects[i].pixels == self.objects[j].pixels {
                    return Some((i, j));
                }
            }
        }
        None
    }

    /// True when the two sets contain the same multiset of pixel strings,
    /// ignoring ids and declared bounds. This is the exact-recovery test
    /// used throughout the learning experiments.
    pub fn same_strings(&self, other: &ObjectSet) -> bool {
        let mut a: Vec<&[Color]> = self.objects.iter().map(|o| o.pixels.as_slice()).collect();
        let mut b: Vec<&[Color]> = other.objects.iter().map(|o| o.pixels.as_slice()).collect();
        a.sort_unstable();
        b.sort_unstable();
        a == b
    }
}

/// Whether objects must lie fully on the canvas or may spill off it.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RoomModel {
    Closed,
    Open,
}

impl RoomModel {
    /// Legal inclusive range of left endpoints for an object of length
    /// `len` on a canvas of width `d`. Closed: `0..=d-len`; open:
    /// `-(len-1)..=d`.
    pub fn left_range(self, len: usize, d: usize) -> Option<(i64, i64)> {
        match self {
            RoomModel::Closed => {
                if len > d {
                    None
                } else {
                    Some((0, (d - len) as i64))
                }
            }
            RoomModel::Open => Some((-(len as i64) + 1, d as i64)),
        }
    }
}

/// One placed object instance: where its first pixel sits and its depth
/// rank (1 = frontmost).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Placement {
    pub object_id: usize,
    pub left: i64,
    pub depth: usize,
}

/// Pairwise depth constraints: `(behind, front)` means that whenever both
/// objects appear in an image, `behind` gets the larger depth rank.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DepthOrdering {
    constraints: Vec<(usize, usize)>,
}

impl DepthOrdering {
    pub fn new(constraints: Vec<(usize, usize)>, m: usize) -> Result<Self, ModelError> {
        for &(a, b) in &constraints {
            if a >= m {
                return Err(ModelError::BadConstraintId { object_id: a });
            }
            if b >= m {
                return Err(ModelError::BadConstraintId { object_id: b });
            }
        }
        let ord = DepthOrdering { constraints };
        if ord.has_cycle(m) {
            return Err(ModelError::CyclicDepthConstraints);
        }
        Ok(ord)
    }

    /// A total order: `order[0]` frontmost, last element backmost.
    pub fn total(order: &[usize], m: usize) -> Result<Self, ModelError> {
        let mut constraints = Vec::new();
        for w in order.windows(2) {
            constraints.push((w[1], w[0]));
        }
        Self::new(constraints, m)
    }

    pub fn constraints(&self) -> &[(usize, usize)] {
        &self.constraints
    }

    fn has_cycle(&self, m: usize) -> bool {
        // Kahn's algorithm over the constraint digraph.
        let mut indeg = vec![0usize; m];
        for &(_, front) in &self.constraints {
            indeg[front] += 1;
        }
        let mut queue: Vec<usize> = (0..m).filter(|&v| indeg[v] == 0).collect();
        let mut seen = 0;
        while let Some(v) = queue.pop() {
            seen += 1;
            for &(behind, front) in &self.constraints {
                if behind == v {
                    indeg[front] -= 1;
                    if indeg[front] == 0 {
                        queue.push(front);
                    }
                }
            }
        }
        seen < m
    }

    /// Checks a front-to-back arrangement of chosen ids against the
    /// constraints (ignoring constraints about absent objects).
    pub fn permits(&self, front_to_back: &[usize]) -> bool {
        for &(behind, front) in &self.constraints {
            let pb = front_to_back.iter().position(|&x| x == behind);
            let pf = front_to_back.iter().position(|&x| x == front);
            if let (Some(pb), Some(pf)) = (pb, pf) {
                if pb < pf {
                    return false;
                }
            }
        }
        true
    }
}

/// How depth ranks are assigned to the chosen objects.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DepthModel {
    FullyRandom,
    /// Uniform over the linear extensions of the given partial order,drawn
    /// by rejection sampling.
    PartiallyRandom(DepthOrdering),
}

/// The background of the canvas: a distinct sentinel color, or an explicit
/// string of object colors of length >= d (its first d pixels are used).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BackgroundModel {
    Distinct,
    WellStructured(Vec<Color>),
}

impl BackgroundModel {
    /// The background row for a canvas of width `d`.
    pub fn row(&self, d: usize) -> Result<Vec<Color>, ModelError> {
        match self {
            BackgroundModel::Distinct => Ok(vec![Color::Background; d]),
            BackgroundModel::WellStructured(px) => {
                if px.len() < d {
                    return Err(ModelError::BackgroundLength { expected: d, got: px.len() });
                }
                for (index, p) in px[..d].iter().enumerate() {
                    if !p.is_object() {
                        return Err(ModelError::BadBackgroundPixel { index });
                    }
                }
                Ok(px[..d].to_vec())
            }
        }
    }
}

/// Full description of the sampling distribution for one image.
#[derive(Clone, Debug)]
pub struct GenConfig {
    pub room: RoomModel,
    pub depth: DepthModel,
    /// Number of objects per image, chosen as a uniform k-subset.
    pub k: usize,
    pub background: BackgroundModel,
    /// When set, each object is placed with an in-band left/right endpoint
    /// marker appended (so its placed length is `s_i + 2`). Markers may
    /// fall off-canvas in the open room like any other pixel.
    pub markers: bool,
    pub seed: u64,
}

/// Derived read-only parameters of a generation setting.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GenParams {
    pub d: usize,
    pub d_prime: usize,
    pub k: usize,
    pub m: usize,
    pub s: usize,
    pub w: Option<usize>,
}

impl GenParams {
    /// Derives `d' = d + s - 2` and validates the signature-width
    /// assumptions (`d > 8w`, `s < d/2`) when `w` is supplied.
    pub fn derive(
        objects: &ObjectSet,
        cfg: &GenConfig,
        d: usize,
        w: Option<usize>,
    ) -> Result<Self, ModelError> {
        if d == 0 {
            return Err(ModelError::ZeroCanvas);
        }
        let s = objects.s_max();
        if let Some(w) = w {
            if d <= 8 * w {
                return Err(ModelError::CanvasTooSmallForSignature { d, w });
            }
            if 2 * s >= d {
                return Err(ModelError::ObjectTooLargeForLearning { s, d });
            }
        }
        Ok(GenParams {
            d,
            d_prime: d + s - 2,
            k: cfg.k,
            m: objects.m(),
            s,
            w,
        })
    }
}

/// The `(k+1) x d` layered matrix: rows `0..k` hold the clipped objects
/// (row 0 = depth 1 = frontmost, `None` = blank), row `k` the background.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Scene {
    rows: Vec<Vec<Option<Color>>>,
}

impl Scene {
    pub fn rows(&self) -> &[Vec<Option<Color>>] {
        &self.rows
    }

    pub fn d(&self) -> usize {
        self.rows.last().map(Vec::len).unwrap_or(0)
    }

    /// Number of object rows (k).
    pub fn k(&self) -> usize {
        self.rows.len() - 1
    }
}

/// A visible projection: `d` pixels, never blank.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Image {
    pub pixels: Vec<Color>,
}

impl Image {
    pub fn d(&self) -> usize {
        self.pixels.len()
    }
}

/// Per-pixel provenance.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Source {
    Object { id: usize, index: usize },
    Background { index: usize },
    Unknown,
}

/// A per-pixel provenance map. `object_count` is populated only by the
/// minimal-explanation dynamic program.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Explanation {
    pub sources: Vec<Source>,
    pub object_count: Option<usize>,
}

impl Explanation {
    pub fn unknown(d: usize) -> Self {
        Explanation { sources: vec![Source::Unknown; d], object_count: None }
    }

    pub fn unknown_count(&self) -> usize {
        self.sources.iter().filter(|s| matches!(s, Source::Unknown)).count()
    }

    /// True when every non-Unknown source reproduces the image pixel it is
    /// assigned to. `index` for object sources refers to the placed pixel
    /// sequence (marker pixels included when markers were in force).
    pub fn consistent_with(
        &self,
        image: &Image,
        objects: &ObjectSet,
        background_row: &[Color],
        markers: bool,
    ) -> bool {
        if self.sources.len() != image.d() || background_row.len() != image.d() {
            return false;
        }
        self.sources.iter().zip(&image.pixels).enumerate().all(|(i, (src, px))| match src {
            Source::Unknown => true,
            Source::Background { index } => *index == i && background_row[i] == *px,
            Source::Object { id, index } => match objects.get(*id) {
                None => false,
                Some(o) => {
                    let placed = if markers { add_markers(o) } else { o.pixels.clone() };
                    placed.get(*index) == Some(px)
                }
            },
        })
    }
}

/// Placements plus the exact per-pixel explanation of a generated image.
/// Object-source indices refer to the placed sequence, i.e. include the
/// marker pixels when marker mode was on.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroundTruth {
    pub placements: Vec<Placement>,
    pub explanation: Explanation,
}

/// Extends an object by `b` background pixels on each side.
pub fn pad(object: &Object, b: usize) -> Vec<Color> {
    let mut out = Vec::with_capacity(object.len() + 2 * b);
    out.extend(core::iter::repeat_n(Color::Background, b));
    out.extend_from_slice(&object.pixels);
    out.extend(core::iter::repeat_n(Color::Background, b));
    out
}

/// The marked pixel sequence: left marker, object pixels, right marker.
pub fn add_markers(object: &Object) -> Vec<Color> {
    let mut out = Vec::with_capacity(object.len() + 2);
    out.push(Color::MarkL);
    out.extend_from_slice(&object.pixels);
    out.push(Color::MarkR);
    out
}

/// Places pre-rendered pixel sequences (ordered front to back) over a
/// background row, clipping to `0..d`.
fn render_scene(front_to_back: &[(i64, &[Color])], background_row: Vec<Color>, d: usize) -> Scene {
    let mut rows = Vec::with_capacity(front_to_back.len() + 1);
    for &(left, pixels) in front_to_back {
        let mut row = vec![None; d];
        for (offset, px) in pixels.iter().enumerate() {
            let col = left + offset as i64;
            if col >= 0 && (col as usize) < d {
                row[col as usize] = Some(*px);
            }
        }
        rows.push(row);
    }
    rows.push(background_row.into_iter().map(Some).collect());
    Scene { rows }
}

/// Builds the scene matrix from plain (unmarked) placements. Depth ranks
/// must be a permutation of `1..=placements.len()`; placements must be
/// legal for the room model. Multiple placements may reference the same
/// object id (distinct instances).
pub fn build_scene(
    objects: &ObjectSet,
    placements: &[Placement],
    background: &[Color],
    d: usize,
    room: RoomModel,
) -> Result<Scene, ModelError> {
    if d == 0 {
        return Err(ModelError::ZeroCanvas);
    }
    if background.len() != d {
        return Err(ModelError::BackgroundLength { expected: d, got: background.len() });
    }
    let mut seen = BTreeSet::new();
    for p in placements {
        if p.depth == 0 || p.depth > placements.len() {
            return Err(ModelError::BadDepths);
        }
        if !seen.insert(p.depth) {
            return Err(ModelError::DuplicateDepth { depth: p.depth });
        }
    }
    let mut ordered: Vec<&Placement> = placements.iter().collect();
    ordered.sort_by_key(|p| p.depth);
    let mut front_to_back = Vec::with_capacity(ordered.len());
    for p in ordered {
        let obj = objects
            .get(p.object_id)
            .ok_or(ModelError::UnknownObjectId { object_id: p.object_id })?;
        let (lo, hi) = room
            .left_range(obj.len(), d)
            .ok_or(ModelError::ObjectTooLargeForRoom { object_id: p.object_id, len: obj.len(), d })?;
        if p.left < lo || p.left > hi {
            return Err(ModelError::PlacementOutOfRange { object_id: p.object_id, left: p.left });
        }
        front_to_back.push((p.left, obj.pixels.as_slice()));
    }
    Ok(render_scene(&front_to_back, background.to_vec(), d))
}

/// Projects each column to its topmost non-blank entry. Total because the
/// background row has no blanks.
pub fn view(scene: &Scene) -> Image {
    let d = scene.d();
    let mut pixels = Vec::with_capacity(d);
    for col in 0..d {
        let px = scene
            .rows
            .iter()
            .find_map(|row| row[col])
            .expect("background row guarantees a visible pixel");
        pixels.push(px);
    }
    Image { pixels }
}

fn sample_depth_order(
    chosen: &[usize],
    depth: &DepthModel,
    rng: &mut Xoshiro256StarStar,
) -> Vec<usize> {
    let mut order: Vec<usize> = chosen.to_vec();
    match depth {
        DepthModel::FullyRandom => rng.shuffle(&mut order),
        DepthModel::PartiallyRandom(constraints) => loop {
            rng.shuffle(&mut order);
            if constraints.permits(&order) {
                break;
            }
        },
    }
    order
}

/// Draws one image: uniform k-subset, uniform left endpoint per the room
/// model, depth order per the depth model. Returns the image together with
/// the placements and exact per-pixel provenance.
pub fn generate_image(
    objects: &ObjectSet,
    cfg: &GenConfig,
    d: usize,
    rng: &mut Xoshiro256StarStar,
) -> Result<(Image, GroundTruth), ModelError> {
    if d == 0 {
        return Err(ModelError::ZeroCanvas);
    }
    if cfg.k > objects.m() {
        return Err(ModelError::KExceedsM { k: cfg.k, m: objects.m() });
    }
    if let Some((first, second)) = objects.duplicate_strings() {
        return Err(ModelError::DuplicateObjectStrings { first, second });
    }
    let background_row = cfg.background.row(d)?;

    let chosen = rng.subset(objects.m(), cfg.k);
    let front_to_back_ids = sample_depth_order(&chosen, &cfg.depth, rng);

    // Sample left endpoints in front-to-back order, then realize the rows.
    let mut placed: Vec<(usize, i64, Vec<Color>)> = Vec::with_capacity(cfg.k);
    for &id in &front_to_back_ids {
        let obj = objects.get(id).expect("chosen id");
        let pixels = if cfg.markers { add_markers(obj) } else { obj.pixels.clone() };
        let (lo, hi) = cfg.room.left_range(pixels.len(), d).ok_or(
            ModelError::ObjectTooLargeForRoom { object_id: id, len: pixels.len(), d },
        )?;
        let left = rng.range_inclusive(lo, hi);
        placed.push((id, left, pixels));
    }

    let refs: Vec<(i64, &[Color])> = placed.iter().map(|(_, l, px)| (*l, px.as_slice())).collect();
    let scene = render_scene(&refs, background_row.clone(), d);
    let image = view(&scene);

    // Provenance: first placed row covering each column, else background.
    let mut sources = Vec::with_capacity(d);
    'col: for col in 0..d {
        for (row, (id, left, pixels)) in placed.iter().enumerate() {
            let rel = col as i64 - left;
            if rel >= 0 && (rel as usize) < pixels.len() {
                debug_assert_eq!(scene.rows[row][col], Some(pixels[rel as usize]));
                sources.push(Source::Object { id: *id, index: rel as usize });
                continue 'col;
            }
        }
        sources.push(Source::Background { index: col });
    }

    let placements = placed
        .iter()
        .enumerate()
        .map(|(rank, (id, left, _))| Placement { object_id: *id, left: *left, depth: rank + 1 })
        .collect();
    let truth = GroundTruth {
        placements,
        explanation: Explanation { sources, object_count: None },
    };
    Ok((image, truth))
}

/// Draws `n` images from a generator seeded by `cfg.seed`.
pub fn sample_images(
    objects: &ObjectSet,
    cfg: &GenConfig,
    d: usize,
    n: usize,
) -> Result<Vec<(Image, GroundTruth)>, ModelError> {
    let mut rng = Xoshiro256StarStar::seed_from_u64(cfg.seed);
    (0..n).map(|_| generate_image(objects, cfg, d, &mut rng)).collect()
}

/// Re-renders a ground truth through `build_scene` + `view` semantics,
/// applying markers as the config dictates. Used to check that recorded
/// placements reproduce the observed image bit-exactly.
pub fn replay_ground_truth(
    objects: &ObjectSet,
    cfg: &GenConfig,
    truth: &GroundTruth,
    d: usize,
) -> Result<Image, ModelError> {
    let background_row = cfg.background.row(d)?;
    let mut ordered: Vec<&Placement> = truth.placements.iter().collect();
    ordered.sort_by_key(|p| p.depth);
    let mut rendered: Vec<(i64, Vec<Color>)> = Vec::with_capacity(ordered.len());
    for p in ordered {
        let obj = objects
            .get(p.object_id)
            .ok_or(ModelError::UnknownObjectId { object_id: p.object_id })?;
        let pixels = if cfg.markers { add_markers(obj) } else { obj.pixels.clone() };
        rendered.push((p.left, pixels));
    }
    let refs: Vec<(i64, &[Color])> = rendered.iter().map(|(l, px)| (*l, px.as_slice())).collect();
    Ok(view(&render_scene(&refs, background_row, d)))
}

/// Maximal runs of same-source pixels in a ground-truth explanation.
pub fn pure_segment_count(truth: &GroundTruth) -> usize {
    let mut count = 0;
    let mut prev: Option<(bool, usize)> = None; // (is_object, id-or-col-run marker)
    for src in &truth.explanation.sources {
        let key = match src {
            Source::Object { id, .. } => Some((true, *id)),
            Source::Background { .. } => Some((false, 0)),
            Source::Unknown => None,
        };
        if key != prev {
            count += 1;
            prev = key;
        }
    }
    count
}

/// Convenience: shorthand for building object pixels from integer codes.
pub fn px(codes: &[u16]) -> Vec<Color> {
    codes.iter().map(|&v| Color::Obj(v)).collect()
}

/// A uniform object color in `0..c`.
pub(crate) fn random_color(c: u16, rng: &mut Xoshiro256StarStar) -> Color {
    Color::Obj(rng.next_below(c as u64) as u16)
}
