//! Command-line front end.
//!
//! Exit codes: 0 on success, 1 when a predicate fails (a structure check
//! does not hold, an object set fails verification, an experiment misses
//! its threshold), 2 on invalid input.

use anyhow::{anyhow, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use occlusion_cli::experiments;
use occlusion_cli::fixtures::{make_breaker_fixture, FixtureKind};
use occlusion_cli::json::{self, BackgroundDoc, CorruptDoc, GenMetaDoc, SampleDoc, SamplesDoc};
use occlusion_core::adversary::{corrupt, BudgetStrategy};
use occlusion_core::hardness::{reduce, verify_ol};
use occlusion_core::inference::{dp_min_objects, greedy_infer, greedy_infer_noisy};
use occlusion_core::learning::{
    learn_no_markers, recover_with_markers, LearnParams, Regime,
};
use occlusion_core::model::{
    sample_images, BackgroundModel, DepthModel, DepthOrdering, GenConfig, Image, RoomModel,
};
use occlusion_core::structure::{
    check_strong_ws, check_ws, gen_random_objects, gen_semirandom_objects, AdversaryBase,
};
use occlusion_core::Xoshiro256StarStar;
use std::path::PathBuf;

#[derive(Parser)]
#[command(
    name = "occlusion",
    about = "Layered 1-D occlusion model: generation, learning, inference, hardness",
    version
)]
struct Cli {
    /// Base seed recorded in every artifact this run produces.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Output file (stdout when omitted).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Output format for experiment results.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum RoomArg {
    Closed,
    Open,
}

impl From<RoomArg> for RoomModel {
    fn from(r: RoomArg) -> Self {
        match r {
            RoomArg::Closed => RoomModel::Closed,
            RoomArg::Open => RoomModel::Open,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Draw a random object set, or rerandomize an adversarial base.
    GenObjects {
        /// Number of objects (random mode).
        #[arg(long, default_value_t = 5)]
        m: usize,
        /// One size for every object (random mode).
        #[arg(long, conflicts_with = "sizes")]
        size: Option<usize>,
        /// Comma-separated per-object sizes (random mode).
        #[arg(long, value_delimiter = ',')]
        sizes: Vec<usize>,
        /// Number of object colors.
        #[arg(long, default_value_t = 8)]
        colors: u16,
        /// Semi-random mode: rerandomize this base object set instead.
        #[arg(long)]
        base: Option<PathBuf>,
        /// Per-pixel rerandomization probability (semi-random mode).
        #[arg(long)]
        p: Option<String>,
    },
    /// Sample images (with ground truth) from an object set.
    GenImages {
        #[arg(long)]
        objects: PathBuf,
        #[arg(long, default_value_t = 10)]
        count: usize,
        #[arg(long)]
        d: usize,
        #[arg(long, value_enum, default_value_t = RoomArg::Open)]
        room: RoomArg,
        #[arg(long, default_value_t = 2)]
        k: usize,
        /// Depth constraints "behind:front" making the depth model
        /// partially random; omit for the fully random model.
        #[arg(long = "constraint")]
        constraints: Vec<String>,
        #[arg(long)]
        markers: bool,
        /// Well-structured background pixels (image JSON); distinct when
        /// omitted.
        #[arg(long)]
        background: Option<PathBuf>,
        /// Strip ground truth from the output.
        #[arg(long)]
        no_truth: bool,
    },
    /// Check (strong) well-structuredness; exit 1 when it does not hold.
    CheckStructure {
        #[arg(long)]
        objects: PathBuf,
        #[arg(long)]
        w: usize,
        #[arg(long)]
        epsilon: Option<String>,
    },
    /// Recover an object set from samples.
    Learn {
        #[arg(long, value_enum)]
        mode: LearnMode,
        #[arg(long)]
        samples: PathBuf,
        #[arg(long)]
        w: usize,
        /// Window length; defaults to the mode's formula (2w, 4w, 8wk).
        #[arg(long = "L")]
        l: Option<usize>,
        /// Frequency threshold as a fraction; defaults to the mode's
        /// formula.
        #[arg(long)]
        tau: Option<String>,
        /// Objects per image (markerless modes).
        #[arg(long)]
        k: Option<usize>,
        /// Dictionary size, for the validity checks (markerless modes).
        #[arg(long)]
        m: Option<usize>,
        /// Maximum object size, for the validity checks (markerless modes).
        #[arg(long)]
        s: Option<usize>,
    },
    /// Explain an image from a known object set.
    Infer {
        #[arg(long, value_enum)]
        algo: Algo,
        #[arg(long)]
        objects: PathBuf,
        #[arg(long)]
        image: PathBuf,
        #[arg(long)]
        w: Option<usize>,
        #[arg(long)]
        epsilon: Option<String>,
        #[arg(long)]
        alpha: Option<String>,
        /// Adversary window size W (greedy-noisy).
        #[arg(long)]
        window: Option<usize>,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long, value_enum, default_value_t = RoomArg::Open)]
        room: RoomArg,
        /// Well-structured background pixels (image JSON); distinct when
        /// omitted.
        #[arg(long)]
        background: Option<PathBuf>,
    },
    /// Corrupt an image within an (alpha, W) window budget.
    Corrupt {
        #[arg(long)]
        image: PathBuf,
        #[arg(long)]
        alpha: String,
        #[arg(long)]
        window: usize,
        #[arg(long, value_enum, default_value_t = StrategyArg::UniformRandom)]
        strategy: StrategyArg,
        /// Number of object colors flips may use.
        #[arg(long, default_value_t = 2)]
        colors: u16,
    },
    /// Compile a set-splitting instance into an object-learning instance.
    Reduce {
        #[arg(long)]
        ss: PathBuf,
    },
    /// Verify an object set against an object-learning instance; exit 0/1.
    VerifyOl {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        objects: PathBuf,
    },
    /// Run a named experiment; exit 1 when its criterion fails.
    Experiment {
        #[arg(long, required_unless_present = "list")]
        name: Option<String>,
        #[arg(long)]
        trials: Option<usize>,
        /// List known experiment names and exit.
        #[arg(long)]
        list: bool,
    },
    /// Emit a constructed failure-family fixture.
    Fixture {
        #[arg(long, value_enum)]
        kind: FixtureArg,
        #[arg(long)]
        d: usize,
        #[arg(long)]
        w: usize,
        /// Pin the corrupted position (exact-match family).
        #[arg(long)]
        flip_at: Option<usize>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum LearnMode {
    Markers,
    #[value(name = "no-markers-2")]
    NoMarkers2,
    #[value(name = "no-markers-k")]
    NoMarkersK,
}

#[derive(Clone, Copy, ValueEnum)]
enum Algo {
    Dp,
    Greedy,
    GreedyNoisy,
}

#[derive(Clone, Copy, ValueEnum)]
enum StrategyArg {
    UniformRandom,
    WorstCaseCluster,
}

#[derive(Clone, Copy, ValueEnum)]
enum FixtureArg {
    DpNoise,
    ExactMatchFamily,
}

fn main() {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => std::process::exit(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            std::process::exit(2);
        }
    }
}

fn write_output(out: &Option<PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text)
            .with_context(|| format!("writing {}", path.display()))?,
        None => print!("{text}"),
    }
    Ok(())
}

fn load_background(path: &Option<PathBuf>) -> Result<BackgroundModel> {
    match path {
        None => Ok(BackgroundModel::Distinct),
        Some(p) => {
            let doc: json::ImageDoc = json::read_json(p)?;
            Ok(BackgroundModel::WellStructured(json::decode_pixels(&doc.pixels)?))
        }
    }
}

fn run(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::GenObjects { m, size, sizes, colors, base, p } => {
            let mut rng = Xoshiro256StarStar::seed_from_u64(cli.seed);
            let set = match base {
                Some(path) => {
                    let doc: json::ObjectSetDoc = json::read_json(&path)?;
                    let objects = json::object_set_from_doc(&doc)?;
                    let p = json::parse_frac(
                        p.as_deref().ok_or_else(|| anyhow!("--p is required with --base"))?,
                    )?;
                    let base = AdversaryBase::new(objects, p).map_err(|e| anyhow!("{e}"))?;
                    gen_semirandom_objects(&base, &mut rng)
                }
                None => {
                    let sizes = if !sizes.is_empty() {
                        sizes
                    } else {
                        vec![size.unwrap_or(10); m]
                    };
                    gen_random_objects(&sizes, colors, &mut rng).map_err(|e| anyhow!("{e}"))?
                }
            };
            write_output(&cli.out, &json::to_json_pretty(&json::object_set_to_doc(&set))?)?;
            Ok(0)
        }

        Command::GenImages {
            objects,
            count,
            d,
            room,
            k,
            constraints,
            markers,
            background,
            no_truth,
        } => {
            let doc: json::ObjectSetDoc = json::read_json(&objects)?;
            let set = json::object_set_from_doc(&doc)?;
            let parsed: Vec<(usize, usize)> = constraints
                .iter()
                .map(|c| {
                    let (a, b) = c
                        .split_once(':')
                        .ok_or_else(|| anyhow!("constraint {c:?} is not behind:front"))?;
                    Ok((a.trim().parse()?, b.trim().parse()?))
                })
                .collect::<Result<_>>()?;
            let depth = if parsed.is_empty() {
                DepthModel::FullyRandom
            } else {
                DepthModel::PartiallyRandom(
                    DepthOrdering::new(parsed.clone(), set.m()).map_err(|e| anyhow!("{e}"))?,
                )
            };
            let bg = load_background(&background)?;
            let cfg = GenConfig {
                room: room.into(),
                depth,
                k,
                background: bg.clone(),
                markers,
                seed: cli.seed,
            };
            let samples = sample_images(&set, &cfg, d, count).map_err(|e| anyhow!("{e}"))?;
            let doc = SamplesDoc {
                meta: GenMetaDoc {
                    seed: cli.seed,
                    d,
                    k,
                    room: json::room_to_str(cfg.room).to_string(),
                    depth: if parsed.is_empty() { "fully-random" } else { "partially-random" }
                        .to_string(),
                    constraints: parsed,
                    markers,
                    background: match &bg {
                        BackgroundModel::Distinct => BackgroundDoc::Named("distinct".into()),
                        BackgroundModel::WellStructured(px) => {
                            BackgroundDoc::Pixels(json::encode_pixels(px))
                        }
                    },
                },
                samples: samples
                    .iter()
                    .map(|(image, truth)| SampleDoc {
                        image: json::image_to_doc(image),
                        truth: (!no_truth).then(|| json::ground_truth_to_doc(truth)),
                    })
                    .collect(),
            };
            write_output(&cli.out, &json::to_json_pretty(&doc)?)?;
            Ok(0)
        }

        Command::CheckStructure { objects, w, epsilon } => {
            let doc: json::ObjectSetDoc = json::read_json(&objects)?;
            let set = json::object_set_from_doc(&doc)?;
            let report = match epsilon {
                None => check_ws(&set, w).map_err(|e| anyhow!("{e}"))?,
                Some(e) => check_strong_ws(&set, w, json::parse_frac(&e)?)
                    .map_err(|e| anyhow!("{e}"))?,
            };
            write_output(&cli.out, &json::to_json_pretty(&json::structure_report_to_doc(&report))?)?;
            Ok(if report.holds { 0 } else { 1 })
        }

        Command::Learn { mode, samples, w, l, tau, k, m, s } => {
            let doc: SamplesDoc = json::read_json(&samples)?;
            let images = json::images_from_samples(&doc)?;
            let d = images.first().map(Image::d).unwrap_or(0);
            let set = match mode {
                LearnMode::Markers => {
                    let l = l.unwrap_or(2 * w);
                    recover_with_markers(&images, l, w).map_err(|e| anyhow!("{e}"))?
                }
                LearnMode::NoMarkers2 | LearnMode::NoMarkersK => {
                    let m = m.ok_or_else(|| anyhow!("--m is required for markerless modes"))?;
                    let s = s.ok_or_else(|| anyhow!("--s is required for markerless modes"))?;
                    let params = match mode {
                        LearnMode::NoMarkers2 => match (l, &tau) {
                            (None, None) => LearnParams::two_object(w, m, d, s, images.len()),
                            _ => LearnParams::custom(
                                Regime::TwoObject,
                                w,
                                l.unwrap_or(4 * w),
                                tau.as_deref()
                                    .map(json::parse_frac)
                                    .transpose()?
                                    .unwrap_or(occlusion_core::Frac::new(1, 16 * m as u64).unwrap()),
                                images.len(),
                                2,
                                m,
                                d,
                                s,
                            ),
                        },
                        _ => {
                            let k = k.ok_or_else(|| {
                                anyhow!("--k is required for no-markers-k")
                            })?;
                            match (l, &tau) {
                                (None, None) => LearnParams::k_object(
                                    w,
                                    k,
                                    m,
                                    d,
                                    s,
                                    images.len(),
                                    experiments::K_OBJECT_TAU_C,
                                ),
                                _ => LearnParams::custom(
                                    Regime::KObject,
                                    w,
                                    l.unwrap_or(8 * w * k),
                                    tau.as_deref()
                                        .map(json::parse_frac)
                                        .transpose()?
                                        .ok_or_else(|| anyhow!("--tau required with --l"))?,
                                    images.len(),
                                    k,
                                    m,
                                    d,
                                    s,
                                ),
                            }
                        }
                    }
                    .map_err(|e| anyhow!("parameter validity: {e}"))?;
                    learn_no_markers(&images, &params).map_err(|e| anyhow!("{e}"))?
                }
            };
            write_output(&cli.out, &json::to_json_pretty(&json::object_set_to_doc(&set))?)?;
            Ok(0)
        }

        Command::Infer { algo, objects, image, w, epsilon, alpha, window, k, room, background } => {
            let set = json::object_set_from_doc(&json::read_json(&objects)?)?;
            let image = json::image_from_doc(&json::read_json(&image)?)?;
            let bg = load_background(&background)?;
            let out_doc = match algo {
                Algo::Dp => {
                    let row = bg.row(image.d()).map_err(|e| anyhow!("{e}"))?;
                    match dp_min_objects(&image, &set, &row, room.into())
                        .map_err(|e| anyhow!("{e}"))?
                    {
                        None => json::InferenceDoc {
                            feasible: false,
                            explanation: Vec::new(),
                            object_count: None,
                            corrected: None,
                        },
                        Some(expl) => json::InferenceDoc {
                            feasible: true,
                            explanation: expl.sources.iter().map(json::source_to_doc).collect(),
                            object_count: expl.object_count,
                            corrected: None,
                        },
                    }
                }
                Algo::Greedy => {
                    let w = w.ok_or_else(|| anyhow!("--w is required for greedy"))?;
                    let k = k.ok_or_else(|| anyhow!("--k is required for greedy"))?;
                    let expl =
                        greedy_infer(&image, &set, &bg, w, k).map_err(|e| anyhow!("{e}"))?;
                    json::InferenceDoc {
                        feasible: true,
                        explanation: expl.sources.iter().map(json::source_to_doc).collect(),
                        object_count: None,
                        corrected: None,
                    }
                }
                Algo::GreedyNoisy => {
                    let w = w.ok_or_else(|| anyhow!("--w is required for greedy-noisy"))?;
                    let k = k.ok_or_else(|| anyhow!("--k is required for greedy-noisy"))?;
                    let eps = json::parse_frac(
                        epsilon.as_deref().ok_or_else(|| anyhow!("--epsilon required"))?,
                    )?;
                    let alpha = json::parse_frac(
                        alpha.as_deref().ok_or_else(|| anyhow!("--alpha required"))?,
                    )?;
                    let window =
                        window.ok_or_else(|| anyhow!("--window required for greedy-noisy"))?;
                    let out = greedy_infer_noisy(&image, &set, &bg, w, eps, alpha, window, k)
                        .map_err(|e| anyhow!("{e}"))?;
                    json::InferenceDoc {
                        feasible: true,
                        explanation: out
                            .explanation
                            .sources
                            .iter()
                            .map(json::source_to_doc)
                            .collect(),
                        object_count: None,
                        corrected: Some(
                            out.corrected
                                .iter()
                                .map(|&(i, c)| (i, json::encode_color(c)))
                                .collect(),
                        ),
                    }
                }
            };
            write_output(&cli.out, &json::to_json_pretty(&out_doc)?)?;
            Ok(0)
        }

        Command::Corrupt { image, alpha, window, strategy, colors } => {
            let image = json::image_from_doc(&json::read_json(&image)?)?;
            let alpha = json::parse_frac(&alpha)?;
            let strategy = match strategy {
                StrategyArg::UniformRandom => BudgetStrategy::UniformRandom,
                StrategyArg::WorstCaseCluster => BudgetStrategy::WorstCaseCluster,
            };
            let mut rng = Xoshiro256StarStar::seed_from_u64(cli.seed);
            let (corrupted, plan) = corrupt(&image, alpha, window, colors, strategy, &mut rng)
                .map_err(|e| anyhow!("{e}"))?;
            let doc = CorruptDoc {
                image: json::image_to_doc(&corrupted),
                plan: json::plan_to_doc(&plan),
            };
            write_output(&cli.out, &json::to_json_pretty(&doc)?)?;
            Ok(0)
        }

        Command::Reduce { ss } => {
            let ss = json::ss_from_doc(&json::read_json(&ss)?)?;
            let ol = reduce(&ss).map_err(|e| anyhow!("{e}"))?;
            write_output(&cli.out, &json::to_json_pretty(&json::ol_to_doc(&ol))?)?;
            Ok(0)
        }

        Command::VerifyOl { instance, objects } => {
            let instance = json::ol_from_doc(&json::read_json(&instance)?)?;
            let set = json::object_set_from_doc(&json::read_json(&objects)?)?;
            let rows: Vec<Vec<occlusion_core::Color>> =
                set.objects().iter().map(|o| o.pixels.clone()).collect();
            let ok = verify_ol(&instance, &rows);
            eprintln!("verify-ol: {}", if ok { "accepted" } else { "rejected" });
            Ok(if ok { 0 } else { 1 })
        }

        Command::Experiment { name, trials, list } => {
            if list {
                let mut text = String::new();
                for n in experiments::EXPERIMENT_NAMES {
                    text.push_str(n);
                    text.push('\n');
                }
                write_output(&cli.out, &text)?;
                return Ok(0);
            }
            let name = name.expect("clap requires --name without --list");
            let seed = if cli.seed == 0 { None } else { Some(cli.seed) };
            let outcome = experiments::run_named(&name, trials, seed)?;
            eprintln!(
                "{}: {} ({})",
                outcome.id,
                if outcome.passed { "PASS" } else { "FAIL" },
                outcome.detail
            );
            let text = match cli.format {
                Format::Json => {
                    let docs: Vec<_> = outcome.results.iter().map(|r| r.to_doc()).collect();
                    json::to_json_pretty(&docs)?
                }
                Format::Csv => {
                    let mut text = String::new();
                    for r in &outcome.results {
                        text.push_str(&format!("# {}\n", r.spec.name));
                        text.push_str(&r.to_csv());
                    }
                    text
                }
            };
            write_output(&cli.out, &text)?;
            Ok(if outcome.passed { 0 } else { 1 })
        }

        Command::Fixture { kind, d, w, flip_at } => {
            let kind = match kind {
                FixtureArg::DpNoise => FixtureKind::DpNoise,
                FixtureArg::ExactMatchFamily => FixtureKind::ExactMatchFamily,
            };
            let fixture = make_breaker_fixture(kind, d, w, cli.seed, flip_at)?;
            #[derive(serde::Serialize)]
            struct FixtureDoc {
                kind: &'static str,
                d: usize,
                w: usize,
                seed: u64,
                room: &'static str,
                objects: json::ObjectSetDoc,
                background: Vec<i64>,
                clean: json::ImageDoc,
                image: json::ImageDoc,
                plan: json::PlanDoc,
                #[serde(skip_serializing_if = "Option::is_none")]
                epsilon: Option<String>,
            }
            let background = fixture.background.row(fixture.d).map_err(|e| anyhow!("{e}"))?;
            let doc = FixtureDoc {
                kind: fixture.kind.as_str(),
                d: fixture.d,
                w: fixture.w,
                seed: cli.seed,
                room: json::room_to_str(fixture.room),
                objects: json::object_set_to_doc(&fixture.objects),
                background: json::encode_pixels(&background),
                clean: json::image_to_doc(&fixture.clean),
                image: json::image_to_doc(&fixture.corrupted),
                plan: json::plan_to_doc(&fixture.plan),
                epsilon: fixture.epsilon.map(json::frac_string),
            };
            write_output(&cli.out, &json::to_json_pretty(&doc)?)?;
            Ok(0)
        }
    }
}
