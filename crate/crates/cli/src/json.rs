//! JSON documents for every on-disk artifact.
//!
//! Pixel encoding: object colors are their nonnegative value, the distinct
//! background is -1, the left/right endpoint markers are -2 and -3.
//! Fractions are exact `"num/den"` strings. Document structs mirror the
//! wire shape; conversions to core types validate on the way in.

use anyhow::{anyhow, bail, Context, Result};
use occlusion_core::adversary::CorruptionPlan;
use occlusion_core::hardness::{OlInstance, OlTriple, SsInstance};
use occlusion_core::model::{
    Color, Explanation, GroundTruth, Image, ObjectSet, Placement, RoomModel, Source,
};
use occlusion_core::structure::{StructureReport, WsViolation};
use occlusion_core::Frac;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

pub fn encode_color(c: Color) -> i64 {
    match c {
        Color::Obj(v) => v as i64,
        Color::Background => -1,
        Color::MarkL => -2,
        Color::MarkR => -3,
    }
}

pub fn decode_color(v: i64) -> Result<Color> {
    match v {
        -1 => Ok(Color::Background),
        -2 => Ok(Color::MarkL),
        -3 => Ok(Color::MarkR),
        v if v >= 0 && v <= u16::MAX as i64 => Ok(Color::Obj(v as u16)),
        other => bail!("pixel value {other} is not a legal color code"),
    }
}

pub fn encode_pixels(px: &[Color]) -> Vec<i64> {
    px.iter().copied().map(encode_color).collect()
}

pub fn decode_pixels(px: &[i64]) -> Result<Vec<Color>> {
    px.iter().map(|&v| decode_color(v)).collect()
}

/// Parses `"a/b"`, plain integers, and plain decimals (`"0.25"` becomes
/// 25/100) into an exact fraction.
pub fn parse_frac(text: &str) -> Result<Frac> {
    let text = text.trim();
    if let Some((num, den)) = text.split_once('/') {
        let num: u64 = num.trim().parse().context("fraction numerator")?;
        let den: u64 = den.trim().parse().context("fraction denominator")?;
        return Frac::new(num, den).map_err(|e| anyhow!("{e}"));
    }
    if let Some((whole, frac)) = text.split_once('.') {
        let digits = frac.len() as u32;
        if digits == 0 || digits > 18 {
            bail!("decimal fraction must have 1..=18 digits");
        }
        let whole: u64 = if whole.is_empty() { 0 } else { whole.parse().context("fraction")? };
        let frac: u64 = frac.parse().context("fraction")?;
        let den = 10u64.pow(digits);
        let num = whole
            .checked_mul(den)
            .and_then(|w| w.checked_add(frac))
            .ok_or_else(|| anyhow!("fraction out of range"))?;
        return Frac::new(num, den).map_err(|e| anyhow!("{e}"));
    }
    let num: u64 = text.parse().context("fraction")?;
    Frac::new(num, 1).map_err(|e| anyhow!("{e}"))
}

pub fn frac_string(f: Frac) -> String {
    format!("{}/{}", f.num(), f.den())
}

#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct ObjectDoc {
    pub id: usize,
    pub pixels: Vec<i64>,
}

#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct ObjectSetDoc {
    pub c: u16,
    pub s_min: usize,
    pub s: usize,
    pub objects: Vec<ObjectDoc>,
}

pub fn object_set_to_doc(set: &ObjectSet) -> ObjectSetDoc {
    ObjectSetDoc {
        c: set.c(),
        s_min: set.s_min(),
        s: set.s_max(),
        objects: set
            .objects()
            .iter()
            .map(|o| ObjectDoc { id: o.id, pixels: encode_pixels(&o.pixels) })
            .collect(),
    }
}

pub fn object_set_from_doc(doc: &ObjectSetDoc) -> Result<ObjectSet> {
    for (i, o) in doc.objects.iter().enumerate() {
        if o.id != i {
            bail!("object ids must be 0..m-1 in order; found {} at position {i}", o.id);
        }
    }
    let rows = doc
        .objects
        .iter()
        .map(|o| decode_pixels(&o.pixels))
        .collect::<Result<Vec<_>>>()?;
    ObjectSet::with_bounds(rows, doc.c, doc.s_min, doc.s).map_err(|e| anyhow!("{e}"))
}

#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct ImageDoc {
    pub d: usize,
    pub pixels: Vec<i64>,
}

pub fn image_to_doc(image: &Image) -> ImageDoc {
    ImageDoc { d: image.d(), pixels: encode_pixels(&image.pixels) }
}

pub fn image_from_doc(doc: &ImageDoc) -> Result<Image> {
    if doc.pixels.len() != doc.d {
        bail!("image declares d = {} but has {} pixels", doc.d, doc.pixels.len());
    }
    Ok(Image { pixels: decode_pixels(&doc.pixels)? })
}

#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct PlacementDoc {
    pub object_id: usize,
    pub left: i64,
    pub depth: usize,
}

/// Wire form of a pixel source: `{"obj":[id,idx]}`, `{"bg":idx}`, or the
/// string `"unknown"`.
#[derive(Serialize, Deserialize, Debug, Clone)]
#[serde(untagged)]
pub enum SourceDoc {
    Obj { obj: (usize, usize) },
    Bg { bg: usize },
    Tag(String),
}

pub fn source_to_doc(src: &Source) -> SourceDoc {
    match src {
        Source::Object { id, index } => SourceDoc::Obj { obj: (*id, *index) },
        Source::Background { index } => SourceDoc::Bg { bg: *index },
        Source::Unknown => SourceDoc::Tag("unknown".to_string()),
    }
}

pub fn source_from_doc(doc: &SourceDoc) -> Result<Source> {
    Ok(match doc {
        SourceDoc::Obj { obj } => Source::Object { id: obj.0, index: obj.1 },
        SourceDoc::Bg { bg } => Source::Background { index: *bg },
        SourceDoc::Tag(tag) if tag == "unknown" => Source::Unknown,
        SourceDoc::Tag(tag) => bail!("unrecognized source tag {tag:?}"),
    })
}

#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct GroundTruthDoc {
    pub placements: Vec<PlacementDoc>,
    pub explanation: Vec<SourceDoc>,
}

pub fn ground_truth_to_doc(truth: &GroundTruth) -> GroundTruthDoc {
    GroundTruthDoc {
        placements: truth
            .placements
            .iter()
            .map(|p| PlacementDoc { object_id: p.object_id, left: p.left, depth: p.depth })
            .collect(),
        explanation: truth.explanation.sources.iter().map(source_to_doc).collect(),
    }
}

pub fn ground_truth_from_doc(doc: &GroundTruthDoc) -> Result<GroundTruth> {
    Ok(GroundTruth {
        placements: doc
            .placements
            .iter()
            .map(|p| Placement { object_id: p.object_id, left: p.left, depth: p.depth })
            .collect(),
        explanation: Explanation {
            sources: doc.explanation.iter().map(source_from_doc).collect::<Result<_>>()?,
            object_count: None,
        },
    })
}

#[derive(Serialize, Deserialize, Debug, Clone)]
#[serde(untagged)]
pub enum WitnessDoc {
    TooShort { too_short: TooShortDoc },
    Collision { first: (usize, usize), second: (usize, usize) },
}

#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct TooShortDoc {
    pub object_id: usize,
    pub len: usize,
}

#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct StructureReportDoc {
    pub holds: bool,
    pub w: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<WitnessDoc>,
}

pub fn structure_report_to_doc(report: &StructureReport) -> StructureReportDoc {
    StructureReportDoc {
        holds: report.holds,
        w: report.w,
        epsilon: report.epsilon.map(frac_string),
        witness: report.witness.map(|v| match v {
            WsViolation::TooShort { object_id, len } => {
                WitnessDoc::TooShort { too_short: TooShortDoc { object_id, len } }
            }
            WsViolation::WindowCollision { first, second } => {
                WitnessDoc::Collision { first, second }
            }
        }),
    }
}

/// How one batch of samples was generated; everything a rerun needs.
#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct GenMetaDoc {
    pub seed: u64,
    pub d: usize,
    pub k: usize,
    pub room: String,
    pub depth: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub constraints: Vec<(usize, usize)>,
    pub markers: bool,
    /// "distinct" or an explicit pixel string.
    pub background: BackgroundDoc,
}

#[derive(Serialize, Deserialize, Debug, Clone)]
#[serde(untagged)]
pub enum BackgroundDoc {
    Named(String),
    Pixels(Vec<i64>),
}

#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct SampleDoc {
    pub image: ImageDoc,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub truth: Option<GroundTruthDoc>,
}

#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct SamplesDoc {
    pub meta: GenMetaDoc,
    pub samples: Vec<SampleDoc>,
}

pub fn images_from_samples(doc: &SamplesDoc) -> Result<Vec<Image>> {
    doc.samples.iter().map(|s| image_from_doc(&s.image)).collect()
}

/// Inference output: the explanation, plus the DP's instance count and the
/// noisy segmenter's corrections when applicable. `feasible` is false only
/// when the DP proved the image ungeneratable.
#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct InferenceDoc {
    pub feasible: bool,
    pub explanation: Vec<SourceDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub object_count: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub corrected: Option<Vec<(usize, i64)>>,
}

#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct PlanDoc {
    pub alpha: String,
    pub window: usize,
    pub flips: Vec<(usize, i64)>,
}

pub fn plan_to_doc(plan: &CorruptionPlan) -> PlanDoc {
    PlanDoc {
        alpha: frac_string(plan.alpha),
        window: plan.window,
        flips: plan.flips.iter().map(|&(i, c)| (i, encode_color(c))).collect(),
    }
}

pub fn plan_from_doc(doc: &PlanDoc) -> Result<CorruptionPlan> {
    Ok(CorruptionPlan {
        flips: doc
            .flips
            .iter()
            .map(|&(i, c)| Ok((i, decode_color(c)?)))
            .collect::<Result<Vec<_>>>()?,
        alpha: parse_frac(&doc.alpha)?,
        window: doc.window,
    })
}

#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct CorruptDoc {
    pub image: ImageDoc,
    pub plan: PlanDoc,
}

#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct SsDoc {
    pub n: usize,
    pub clauses: Vec<Vec<usize>>,
}

pub fn ss_from_doc(doc: &SsDoc) -> Result<SsInstance> {
    SsInstance::new(doc.n, doc.clauses.clone()).map_err(|e| anyhow!("{e}"))
}

#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct OlTripleDoc {
    pub image: ImageDoc,
    pub l1: usize,
    pub l2: usize,
}

#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct OlInstanceDoc {
    pub n_obj: usize,
    pub d: usize,
    pub triples: Vec<OlTripleDoc>,
}

pub fn ol_to_doc(ol: &OlInstance) -> OlInstanceDoc {
    OlInstanceDoc {
        n_obj: ol.n_obj,
        d: ol.d,
        triples: ol
            .triples
            .iter()
            .map(|t| OlTripleDoc { image: image_to_doc(&t.image), l1: t.l1, l2: t.l2 })
            .collect(),
    }
}

pub fn ol_from_doc(doc: &OlInstanceDoc) -> Result<OlInstance> {
    Ok(OlInstance {
        n_obj: doc.n_obj,
        d: doc.d,
        triples: doc
            .triples
            .iter()
            .map(|t| {
                Ok(OlTriple { image: image_from_doc(&t.image)?, l1: t.l1, l2: t.l2 })
            })
            .collect::<Result<Vec<_>>>()?,
    })
}

#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct TrialDoc {
    pub index: usize,
    pub seed: u64,
    pub success: bool,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub metrics: BTreeMap<String, f64>,
}

/// Canonical experiment artifact. Wall time deliberately lives outside
/// this document so a rerun with the same spec is byte-identical.
#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct ExperimentResultDoc {
    pub name: String,
    pub predicate: String,
    pub base_seed: u64,
    pub trials: usize,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub params: BTreeMap<String, String>,
    pub records: Vec<TrialDoc>,
    pub successes: usize,
    pub success_rate: f64,
    pub wilson95: (f64, f64),
}

pub fn to_json_pretty<T: Serialize>(value: &T) -> Result<String> {
    let mut out = serde_json::to_string_pretty(value)?;
    out.push('\n');
    Ok(out)
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &std::path::Path) -> Result<T> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

pub fn room_to_str(room: RoomModel) -> &'static str {
    match room {
        RoomModel::Closed => "closed",
        RoomModel::Open => "open",
    }
}

pub fn room_from_str(s: &str) -> Result<RoomModel> {
    match s {
        "closed" => Ok(RoomModel::Closed),
        "open" => Ok(RoomModel::Open),
        other => bail!("unknown room model {other:?} (want closed|open)"),
    }
}
