//! The named experiments behind the acceptance gate.
//!
//! Each criterion is a function over `(trials, base_seed)` returning its
//! trial records plus a verdict against the criterion's own threshold.
//! Experiment names are stable identifiers; success predicates are
//! versioned so result artifacts stay meaningful if thresholds ever move.

use crate::fixtures::{make_breaker_fixture, BreakerFixture, FixtureKind};
use crate::harness::{run_experiment, ExperimentResult, ExperimentSpec, TrialOutcome};
use anyhow::{bail, Result};
use occlusion_core::adversary::{corrupt, BudgetStrategy};
use occlusion_core::hardness::{
    assignment_to_objects, brute_force_ss, column_count, reduce, verify_ol, SsInstance,
};
use occlusion_core::inference::{
    brute_force_min_objects, dp_min_objects, greedy_infer, greedy_infer_noisy,
};
use occlusion_core::learning::{
    learn_no_markers, learn_no_markers_detailed, recover_with_markers,
    required_samples_markers, samples_k_object, samples_two_object, LearnParams,
};
use occlusion_core::model::{
    build_scene, generate_image, view, BackgroundModel, Color, DepthModel, DepthOrdering,
    GenConfig, Image, ObjectSet, Placement, RoomModel, Source,
};
use occlusion_core::structure::{
    check_strong_ws, check_ws, gen_random_objects, gen_semirandom_objects, ws_collision_free,
    AdversaryBase,
};
use occlusion_core::{Frac, Xoshiro256StarStar};
use std::collections::HashSet;

/// Hidden constant of the two-object sample bound `S = c * m * ln(ms)`,
/// frozen by `pilot_two_object`: binary search for the smallest integer
/// constant reaching 18/20 recoveries on the reference seed block, doubled.
pub const TWO_OBJECT_PILOT_C: f64 = 14.0;

/// Hidden constant of the k-object bound `S = c' * 2^k * m * ln(ms)`,
/// frozen the same way by `pilot_k_object`.
pub const K_OBJECT_PILOT_C: f64 = 4.0;

/// The tau denominator constant of the k-object threshold
/// `tau = k / (C * m * 2^k)`; the value the two-object analysis uses.
pub const K_OBJECT_TAU_C: u64 = 16;

pub struct CriterionOutcome {
    pub id: &'static str,
    pub title: &'static str,
    pub passed: bool,
    pub detail: String,
    pub results: Vec<ExperimentResult>,
}

fn random_ws_set(
    sizes: &[usize],
    c: u16,
    w: usize,
    rng: &mut Xoshiro256StarStar,
) -> ObjectSet {
    loop {
        let set = gen_random_objects(sizes, c, rng).unwrap();
        if check_ws(&set, w).unwrap().holds && set.duplicate_strings().is_none() {
            return set;
        }
    }
}

fn back_pinned(m: usize) -> DepthModel {
    let constraints = (1..m).map(|j| (0usize, j)).collect();
    DepthModel::PartiallyRandom(DepthOrdering::new(constraints, m).unwrap())
}

fn images_of(samples: Vec<(Image, occlusion_core::model::GroundTruth)>) -> Vec<Image> {
    samples.into_iter().map(|(img, _)| img).collect()
}

// --- criterion 1 ---------------------------------------------------------

/// The scene/view worked example, then seeded random round trips: every
/// generated image must replay bit-exactly from its ground truth.
pub fn view_fidelity(trials: usize, base_seed: u64) -> CriterionOutcome {
    use occlusion_core::model::{pad, px, replay_ground_truth};
    let _ = pad; // referenced by the CLI; the fidelity check itself is below

    // Worked example: objects 10111 (front, left 0) and 0001 (left 3) on a
    // width-8 distinct background.
    let objects = ObjectSet::new(vec![px(&[1, 0, 1, 1, 1]), px(&[0, 0, 0, 1])], 2).unwrap();
    let placements = [
        Placement { object_id: 0, left: 0, depth: 1 },
        Placement { object_id: 1, left: 3, depth: 2 },
    ];
    let background = vec![Color::Background; 8];
    let scene =
        build_scene(&objects, &placements, &background, 8, RoomModel::Closed).unwrap();
    let mut expected = px(&[1, 0, 1, 1, 1, 0, 1]);
    expected.push(Color::Background);
    let example_ok = view(&scene).pixels == expected;

    let spec = ExperimentSpec::new("view-fidelity", "replay-bit-exact@v1", trials, base_seed)
        .param("d", 48)
        .param("m", 5);
    let result = run_experiment(spec, |seed, index| {
        let mut rng = Xoshiro256StarStar::seed_from_u64(seed);
        let set = loop {
            let set = gen_random_objects(&[12, 9, 12, 7, 12], 8, &mut rng).unwrap();
            if set.duplicate_strings().is_none() {
                break set;
            }
        };
        let cfg = GenConfig {
            room: if index % 2 == 0 { RoomModel::Open } else { RoomModel::Closed },
            depth: DepthModel::FullyRandom,
            k: 1 + index % 3,
            background: BackgroundModel::Distinct,
            markers: index % 4 == 1,
            seed: 0,
        };
        match generate_image(&set, &cfg, 48, &mut rng) {
            Err(_) => TrialOutcome::of(false),
            Ok((image, truth)) => {
                let replayed = replay_ground_truth(&set, &cfg, &truth, 48).unwrap();
                TrialOutcome::of(replayed == image)
            }
        }
    });
    let passed = example_ok && result.all_passed();
    let detail = format!(
        "worked example {}; {}/{} round trips exact",
        if example_ok { "exact" } else { "MISMATCH" },
        result.successes,
        result.records.len()
    );
    CriterionOutcome {
        id: "view-fidelity",
        title: "view operator fidelity",
        passed,
        detail,
        results: vec![result],
    }
}

// --- criterion 2 ---------------------------------------------------------

/// Random and semi-random generation hit the predicted well-structuredness
/// rates. At the stated m=5, s=20, c=2, w=24 the window width exceeds the
/// object length, so the collision conditions are checked (vacuously clean
/// there); the semi-random run uses s=64 with the bound-implied w=51,
/// where the full checker applies.
pub fn ws_probability(trials: usize, base_seed: u64) -> CriterionOutcome {
    let spec_random =
        ExperimentSpec::new("ws-probability-random", "ws-rate@v1", trials, base_seed)
            .param("m", 5)
            .param("s", 20)
            .param("c", 2)
            .param("w", 24);
    let random = run_experiment(spec_random, |seed, _| {
        let mut rng = Xoshiro256StarStar::seed_from_u64(seed);
        let set = gen_random_objects(&[20; 5], 2, &mut rng).unwrap();
        TrialOutcome::of(ws_collision_free(&set, 24))
    });

    let spec_semi =
        ExperimentSpec::new("ws-probability-semirandom", "ws-rate@v1", trials, base_seed ^ 1)
            .param("m", 3)
            .param("s", 64)
            .param("c", 2)
            .param("p", "1/2")
            .param("w", 51);
    let semi = run_experiment(spec_semi, |seed, _| {
        let mut rng = Xoshiro256StarStar::seed_from_u64(seed);
        let base = AdversaryBase::new(
            ObjectSet::new(vec![vec![Color::Obj(0); 64]; 3], 2).unwrap(),
            Frac::new(1, 2).unwrap(),
        )
        .unwrap();
        let set = gen_semirandom_objects(&base, &mut rng);
        TrialOutcome::of(check_ws(&set, 51).unwrap().holds)
    });

    let rate_random = random.success_rate();
    let rate_semi = semi.success_rate();
    let passed = rate_random >= 0.99 && rate_semi >= 0.95;
    let detail = format!(
        "random rate {rate_random:.4} (need 0.99, bound 0.99821); semi-random rate {rate_semi:.4} (need 0.95)"
    );
    CriterionOutcome {
        id: "ws-probability",
        title: "well-structuredness probability",
        passed,
        detail,
        results: vec![random, semi],
    }
}

// --- criterion 3 ---------------------------------------------------------

/// Endpoint-marker learning at the computed sample size: open room,
/// partially random with one object pinned to the back, exact recovery in
/// at least 9/10 of the seeds.
pub fn marker_learning(trials: usize, base_seed: u64) -> CriterionOutcome {
    let (m, s, d, w, k) = (5usize, 10usize, 100usize, 4usize, 2usize);
    let l = 2 * w;
    let s_required = required_samples_markers(d, s, l, k, m).unwrap();
    let spec =
        ExperimentSpec::new("marker-learning", "exact-recovery@v1", trials, base_seed)
            .param("m", m)
            .param("s", s)
            .param("d", d)
            .param("w", w)
            .param("L", l)
            .param("k", k)
            .param("samples", s_required);
    let result = run_experiment(spec, |seed, _| {
        let mut rng = Xoshiro256StarStar::seed_from_u64(seed);
        let set = random_ws_set(&[s; 5], 32, w, &mut rng);
        let cfg = GenConfig {
            room: RoomModel::Open,
            depth: back_pinned(m),
            k,
            background: BackgroundModel::Distinct,
            markers: true,
            seed: rng.next_u64(),
        };
        let images =
            images_of(occlusion_core::model::sample_images(&set, &cfg, d, s_required).unwrap());
        let recovered = recover_with_markers(&images, l, w).unwrap();
        TrialOutcome::of(recovered.same_strings(&set))
            .metric("objects_recovered", recovered.m() as f64)
    });
    let need = (trials * 9).div_ceil(10);
    let passed = result.successes >= need;
    let detail = format!(
        "S = {s_required}: exact recovery in {}/{} seeds (need {need})",
        result.successes,
        result.records.len()
    );
    CriterionOutcome {
        id: "marker-learning",
        title: "endpoint-marker learning",
        passed,
        detail,
        results: vec![result],
    }
}

// --- criteria 4 and 5 ----------------------------------------------------

struct MarkerlessSetup {
    params: LearnParams,
    c: u16,
    depth: DepthModel,
}

fn two_object_setup(samples: usize) -> MarkerlessSetup {
    let (w, m, d, s) = (4usize, 5usize, 200usize, 24usize);
    MarkerlessSetup {
        params: LearnParams::two_object(w, m, d, s, samples).unwrap(),
        c: 32,
        depth: back_pinned(m),
    }
}

fn k_object_setup(samples: usize) -> MarkerlessSetup {
    let (w, k, m, d, s) = (2usize, 3usize, 4usize, 3_000usize, 64usize);
    MarkerlessSetup {
        params: LearnParams::k_object(w, k, m, d, s, samples, K_OBJECT_TAU_C).unwrap(),
        c: 1024,
        depth: back_pinned(m),
    }
}

fn markerless_trial(setup: &MarkerlessSetup, seed: u64, audit: bool) -> TrialOutcome {
    let p = &setup.params;
    let mut rng = Xoshiro256StarStar::seed_from_u64(seed);
    let set = random_ws_set(&vec![p.s; p.m], setup.c, p.w, &mut rng);
    let cfg = GenConfig {
        room: RoomModel::Open,
        depth: setup.depth.clone(),
        k: p.k,
        background: BackgroundModel::Distinct,
        markers: false,
        seed: rng.next_u64(),
    };
    let images =
        images_of(occlusion_core::model::sample_images(&set, &cfg, p.d, p.samples).unwrap());
    if !audit {
        let recovered = learn_no_markers(&images, p).unwrap();
        return TrialOutcome::of(recovered.same_strings(&set));
    }
    let detail = learn_no_markers_detailed(&images, p).unwrap();
    let recovered = detail.objects.same_strings(&set);

    // Frequency separation: the rarest needed single-object window must
    // outnumber the most frequent window not drawn from a single object.
    let mut needed: Vec<&[Color]> = Vec::new();
    for o in set.objects() {
        let mut off = 0;
        while off + p.l <= o.len() {
            needed.push(&o.pixels[off..off + p.l]);
            off += p.w;
        }
        needed.push(&o.pixels[o.len() - p.l..]);
    }
    let single: HashSet<&[Color]> = set
        .objects()
        .iter()
        .flat_map(|o| o.pixels.windows(p.l))
        .collect();
    let counts = occlusion_core::learning::count_windows(&images, p.l).unwrap();
    let mut min_needed = u64::MAX;
    let mut max_impostor = 0u64;
    for seg in &counts {
        if single.contains(seg.pixels.as_slice()) {
            if needed.contains(&seg.pixels.as_slice()) {
                min_needed = min_needed.min(seg.multiplicity);
            }
        } else {
            max_impostor = max_impostor.max(seg.multiplicity);
        }
    }
    for n in &needed {
        if !counts.iter().any(|seg| seg.pixels.as_slice() == *n) {
            min_needed = 0;
        }
    }
    let separated = min_needed > max_impostor;
    TrialOutcome::of(recovered)
        .metric("min_needed_count", min_needed as f64)
        .metric("max_impostor_count", max_impostor as f64)
        .metric("separated", f64::from(u8::from(separated)))
}

/// Markerless learning with two objects per image, with the sample
/// constant frozen by the pilot.
pub fn two_object_learning(trials: usize, base_seed: u64) -> CriterionOutcome {
    let samples = samples_two_object(TWO_OBJECT_PILOT_C, 5, 24);
    let setup = two_object_setup(samples);
    let spec =
        ExperimentSpec::new("two-object-learning", "exact-recovery@v1", trials, base_seed)
            .param("w", setup.params.w)
            .param("L", setup.params.l)
            .param("m", setup.params.m)
            .param("s", setup.params.s)
            .param("d", setup.params.d)
            .param("tau", format!("{}", setup.params.tau))
            .param("pilot_c", TWO_OBJECT_PILOT_C)
            .param("samples", samples);
    let result = run_experiment(spec, |seed, _| markerless_trial(&setup, seed, true));
    let need = (trials * 9).div_ceil(10);
    let separated = result
        .records
        .iter()
        .filter(|(_, _, o)| o.metrics.get("separated") == Some(&1.0))
        .count();
    let passed = result.successes >= need && separated >= need;
    let detail = format!(
        "S = {samples}: exact recovery in {}/{} seeds, frequency separation in {separated}/{} (need {need})",
        result.successes,
        result.records.len(),
        result.records.len()
    );
    CriterionOutcome {
        id: "two-object-learning",
        title: "markerless two-object learning",
        passed,
        detail,
        results: vec![result],
    }
}

/// Markerless learning with k = 3 objects per image.
pub fn k_object_learning(trials: usize, base_seed: u64) -> CriterionOutcome {
    let samples = samples_k_object(K_OBJECT_PILOT_C, 3, 4, 64);
    let setup = k_object_setup(samples);
    let spec =
        ExperimentSpec::new("k-object-learning", "exact-recovery@v1", trials, base_seed)
            .param("w", setup.params.w)
            .param("L", setup.params.l)
            .param("k", setup.params.k)
            .param("m", setup.params.m)
            .param("s", setup.params.s)
            .param("d", setup.params.d)
            .param("tau", format!("{}", setup.params.tau))
            .param("pilot_c", K_OBJECT_PILOT_C)
            .param("samples", samples);
    let result = run_experiment(spec, |seed, _| markerless_trial(&setup, seed, false));
    let need = (trials * 9).div_ceil(10);
    let passed = result.successes >= need;
    let detail = format!(
        "S = {samples}: exact recovery in {}/{} seeds (need {need})",
        result.successes,
        result.records.len()
    );
    CriterionOutcome {
        id: "k-object-learning",
        title: "markerless k-object learning",
        passed,
        detail,
        results: vec![result],
    }
}

// --- criterion 6 ---------------------------------------------------------

/// Exhaustive DP-vs-enumeration agreement: for deterministic families of
/// small object sets, every image producible by up to two instances (and a
/// sprinkle of unproducible ones) gets the same verdict from the dynamic
/// program and the brute-force oracle, in both rooms.
pub fn dp_oracle_agreement(base_seed: u64) -> CriterionOutcome {
    // Every m <= 3, s <= 4, d <= 10, c in {2, 3}, both rooms; objects share
    // one length (the DP's setting).
    let mut configs = Vec::new();
    for m in 1..=3usize {
        for s in 2..=4usize {
            for c in [2u16, 3] {
                for d in 2..=10usize {
                    configs.push((m, s, c, d));
                }
            }
        }
    }
    let trials = configs.len() * 2;
    let spec =
        ExperimentSpec::new("dp-oracle", "dp-equals-oracle@v1", trials, base_seed)
            .param("d_max", 10)
            .param("k_max", 2);
    let result = run_experiment(spec, |seed, index| {
        let (m, s, c, d) = configs[index / 2];
        let room = if index % 2 == 0 { RoomModel::Closed } else { RoomModel::Open };
        let mut rng = Xoshiro256StarStar::seed_from_u64(seed);
        let set = gen_random_objects(&vec![s; m], c, &mut rng).unwrap();
        let background = vec![Color::Background; d];

        // Enumerate all distinct producible images with <= 2 instances.
        let mut singles: Vec<(usize, i64)> = Vec::new();
        for o in set.objects() {
            if let Some((lo, hi)) = room.left_range(o.len(), d) {
                for left in lo..=hi {
                    singles.push((o.id, left));
                }
            }
        }
        let mut canvas = vec![Color::Background; d];
        let mut images: HashSet<Vec<Color>> = HashSet::new();
        images.insert(background.clone());
        let paint = |stack: &[(usize, i64)], canvas: &mut Vec<Color>| {
            canvas.copy_from_slice(&background);
            for &(oid, left) in stack.iter().rev() {
                for (off, pxl) in set.get(oid).unwrap().pixels.iter().enumerate() {
                    let col = left + off as i64;
                    if col >= 0 && (col as usize) < d {
                        canvas[col as usize] = *pxl;
                    }
                }
            }
        };
        for &a in &singles {
            paint(&[a], &mut canvas);
            images.insert(canvas.clone());
        }
        for &a in &singles {
            for &b in &singles {
                paint(&[a, b], &mut canvas);
                images.insert(canvas.clone());
            }
        }
        // A few unproducible pixels patterns keep the infeasible branch honest.
        images.insert(vec![Color::Obj(c); d]);

        let mut disagreements = 0u64;
        let mut checked = 0u64;
        for pixels in &images {
            let image = Image { pixels: pixels.clone() };
            let dp = dp_min_objects(&image, &set, &background, room).unwrap();
            let bf = brute_force_min_objects(&image, &set, &background, room, 2).unwrap();
            checked += 1;
            match (dp, bf) {
                (Some(expl), Some(count)) if expl.object_count == Some(count) => {}
                (None, None) => {}
                // The DP may legitimately find counts above k_max; the
                // oracle capped at 2 reports None there.
                (Some(expl), None) if expl.object_count.unwrap() > 2 => {}
                _ => disagreements += 1,
            }
        }
        TrialOutcome::of(disagreements == 0)
            .metric("images_checked", checked as f64)
            .metric("disagreements", disagreements as f64)
    });
    let passed = result.all_passed();
    let images_total: f64 = result
        .records
        .iter()
        .filter_map(|(_, _, o)| o.metrics.get("images_checked"))
        .sum();
    let detail = format!(
        "{}/{} set/room configurations agree over {images_total} images",
        result.successes,
        result.records.len()
    );
    CriterionOutcome {
        id: "dp-oracle",
        title: "DP minimality vs enumeration oracle",
        passed,
        detail,
        results: vec![result],
    }
}

// --- criterion 7 ---------------------------------------------------------

/// Greedy segmentation on random noiseless instances: zero incorrect
/// assignments ever, and unknowns within `4k^2 w + 2kw`.
pub fn greedy_coverage(trials: usize, base_seed: u64) -> CriterionOutcome {
    let (w, m, s, d, c) = (3usize, 4usize, 24usize, 160usize, 16u16);
    let spec = ExperimentSpec::new("greedy-coverage", "coverage-bound@v1", trials, base_seed)
        .param("w", w)
        .param("m", m)
        .param("s", s)
        .param("d", d);
    let result = run_experiment(spec, |seed, index| {
        let k = 1 + index % 3;
        let mut rng = Xoshiro256StarStar::seed_from_u64(seed);
        let set = random_ws_set(&[s; 4], c, w, &mut rng);
        let room = if index % 2 == 0 { RoomModel::Open } else { RoomModel::Closed };
        let cfg = GenConfig {
            room,
            depth: DepthModel::FullyRandom,
            k,
            background: BackgroundModel::Distinct,
            markers: false,
            seed: 0,
        };
        let (image, truth) = generate_image(&set, &cfg, d, &mut rng).unwrap();
        let expl = greedy_infer(&image, &set, &BackgroundModel::Distinct, w, k).unwrap();
        let mut incorrect = 0u64;
        for (got, want) in expl.sources.iter().zip(&truth.explanation.sources) {
            if !matches!(got, Source::Unknown) && got != want {
                incorrect += 1;
            }
        }
        let unknowns = expl.unknown_count();
        let bound = 4 * k * k * w + 2 * k * w;
        TrialOutcome::of(incorrect == 0 && unknowns <= bound)
            .metric("incorrect", incorrect as f64)
            .metric("unknowns", unknowns as f64)
            .metric("bound", bound as f64)
    });
    let passed = result.all_passed();
    let detail = format!(
        "{}/{} trials with zero incorrect pixels and unknowns within 4k^2w + 2kw",
        result.successes,
        result.records.len()
    );
    CriterionOutcome {
        id: "greedy-coverage",
        title: "greedy segmentation coverage",
        passed,
        detail,
        results: vec![result],
    }
}

// --- criterion 8 ---------------------------------------------------------

/// Noise-tolerant segmentation under both adversary strategies: sound
/// assignments, bounded unknowns, and exact corruption reporting inside
/// explained regions.
pub fn noisy_robustness(trials: usize, base_seed: u64) -> CriterionOutcome {
    let eps = Frac::new(1, 4).unwrap();
    let alpha = Frac::new(1, 20).unwrap();
    let (w, window, s, d, c) = (12usize, 20usize, 120usize, 800usize, 8u16);
    let w_alg = w.max(window);
    let spec = ExperimentSpec::new("noisy-robustness", "noisy-sound@v1", trials, base_seed)
        .param("epsilon", "1/4")
        .param("alpha", "1/20")
        .param("W", window)
        .param("w", w)
        .param("d", d);
    let result = run_experiment(spec, |seed, index| {
        let k = 1 + index % 2;
        let mut rng = Xoshiro256StarStar::seed_from_u64(seed);
        let set = loop {
            let set = gen_random_objects(&[s; 3], c, &mut rng).unwrap();
            if check_strong_ws(&set, w, eps).unwrap().holds {
                break set;
            }
        };
        let cfg = GenConfig {
            room: RoomModel::Open,
            depth: DepthModel::FullyRandom,
            k,
            background: BackgroundModel::Distinct,
            markers: false,
            seed: 0,
        };
        let (clean, truth) = generate_image(&set, &cfg, d, &mut rng).unwrap();
        let strategy = if index % 2 == 0 {
            BudgetStrategy::UniformRandom
        } else {
            BudgetStrategy::WorstCaseCluster
        };
        let (noisy, plan) = corrupt(&clean, alpha, window, c, strategy, &mut rng).unwrap();
        let out = greedy_infer_noisy(
            &noisy,
            &set,
            &BackgroundModel::Distinct,
            w,
            eps,
            alpha,
            window,
            k,
        )
        .unwrap();

        let mut incorrect = 0u64;
        for (got, want) in out.explanation.sources.iter().zip(&truth.explanation.sources) {
            if !matches!(got, Source::Unknown) && got != want {
                incorrect += 1;
            }
        }
        let unknowns = out.explanation.unknown_count();
        let bound = 2 * w_alg * k * (2 * k + 1);
        let flipped: std::collections::BTreeSet<usize> =
            plan.flips.iter().map(|&(i, _)| i).collect();
        let mut reporting_ok = true;
        for (i, src) in out.explanation.sources.iter().enumerate() {
            let reported = out.corrected.iter().any(|&(p, _)| p == i);
            match src {
                Source::Unknown => reporting_ok &= !reported,
                _ => reporting_ok &= reported == flipped.contains(&i),
            }
        }
        for &(p, restored) in &out.corrected {
            reporting_ok &= clean.pixels[p] == restored;
        }
        TrialOutcome::of(incorrect == 0 && unknowns <= bound && reporting_ok)
            .metric("incorrect", incorrect as f64)
            .metric("unknowns", unknowns as f64)
            .metric("flips", plan.flips.len() as f64)
    });
    let passed = result.all_passed();
    let detail = format!(
        "{}/{} trials sound, covered, and fully reported (both strategies)",
        result.successes,
        result.records.len()
    );
    CriterionOutcome {
        id: "noisy-robustness",
        title: "noisy segmentation robustness",
        passed,
        detail,
        results: vec![result],
    }
}

// --- criterion 9 ---------------------------------------------------------

fn dp_count(image: &Image, fixture: &BreakerFixture) -> Option<usize> {
    let background = fixture.background.row(fixture.d).unwrap();
    dp_min_objects(image, &fixture.objects, &background, fixture.room)
        .unwrap()
        .and_then(|e| e.object_count)
}

/// The constructed failure families blow up exact inference exactly as
/// predicted while the noise-aware route names the single true source.
pub fn breaker_fixtures(base_seed: u64) -> CriterionOutcome {
    let spec = ExperimentSpec::new("breaker-fixtures", "fixture-blowup@v1", 3, base_seed);
    let result = run_experiment(spec, |seed, index| {
        match index {
            // dp-noise at the literal size and scaled up.
            0 | 1 => {
                let d = if index == 0 { 12 } else { 40 };
                let f = make_breaker_fixture(FixtureKind::DpNoise, d, 2, seed, None).unwrap();
                let clean = dp_count(&f.clean, &f);
                let corrupted = dp_count(&f.corrupted, &f);
                let ok = clean == Some(1)
                    && corrupted.is_some_and(|n| n >= d / 2);
                TrialOutcome::of(ok)
                    .metric("clean_count", clean.unwrap_or(0) as f64)
                    .metric("corrupted_count", corrupted.unwrap_or(0) as f64)
                    .metric("d_over_2", (d / 2) as f64)
            }
            // exact-match family: DP needs >= d/(4w) + 1 instances on the
            // corrupted image; noisy greedy explains with the one true
            // source and pinpoints the flip.
            _ => {
                let (d, w) = (512usize, 64usize);
                let f =
                    make_breaker_fixture(FixtureKind::ExactMatchFamily, d, w, seed, None)
                        .unwrap();
                let clean = dp_count(&f.clean, &f);
                let corrupted = dp_count(&f.corrupted, &f);
                let lower = d / (4 * w) + 1;
                // The corrupted image stays feasible (fresh instances can
                // tile any binary string one pixel at a time), so the DP
                // must return a finite count at or above the bound.
                let blowup_ok =
                    clean == Some(1) && corrupted.is_some_and(|n| n >= lower);
                let eps = f.epsilon.unwrap();
                let out = greedy_infer_noisy(
                    &f.corrupted,
                    &f.objects,
                    &f.background,
                    w,
                    eps,
                    f.plan.alpha,
                    f.plan.window,
                    1,
                )
                .unwrap();
                // Everything the segmenter assigns must be object 0 at
                // the identity alignment (the clean image is that object
                // in full).
                let single_source =
                    out.explanation.sources.iter().enumerate().all(|(p, s)| match s {
                        Source::Object { id, index } => *id == 0 && *index == p,
                        Source::Background { .. } => false,
                        Source::Unknown => true,
                    });
                let explained = out
                    .explanation
                    .sources
                    .iter()
                    .filter(|s| !matches!(s, Source::Unknown))
                    .count();
                let flip = f.plan.flips[0].0;
                let corrected_ok = out.corrected.len() == 1
                    && out.corrected[0].0 == flip
                    && out.corrected[0].1 == f.clean.pixels[flip];
                let boundary_rejected = make_breaker_fixture(
                    FixtureKind::ExactMatchFamily,
                    d,
                    w,
                    seed,
                    Some(d / 4),
                )
                .is_err();
                TrialOutcome::of(
                    blowup_ok && single_source && corrected_ok && boundary_rejected
                        && explained > d / 2,
                )
                .metric("clean_count", clean.unwrap_or(0) as f64)
                .metric("corrupted_count", corrupted.unwrap_or(0) as f64)
                .metric("lower_bound", lower as f64)
                .metric("explained", explained as f64)
            }
        }
    });
    let passed = result.all_passed();
    let detail = format!(
        "{}/{} fixture checks (dp-noise literal + scaled, exact-match family)",
        result.successes,
        result.records.len()
    );
    CriterionOutcome {
        id: "breaker-fixtures",
        title: "exact-match failure fixtures",
        passed,
        detail,
        results: vec![result],
    }
}

// --- criterion 10 --------------------------------------------------------

/// The full n = 3 family: every subset of the four possible clauses.
/// Structural audits, the forward direction for every satisfying
/// assignment, negative controls for violating assignments, and the
/// reverse direction by exhaustive candidate enumeration.
pub fn hardness_reduction(base_seed: u64) -> CriterionOutcome {
    let n = 3usize;
    let all_clauses: Vec<Vec<usize>> =
        vec![vec![0, 1], vec![0, 2], vec![1, 2], vec![0, 1, 2]];
    let spec = ExperimentSpec::new("hardness-reduction", "reduction-correct@v1", 16, base_seed);
    let result = run_experiment(spec, |_seed, index| {
        let chosen: Vec<Vec<usize>> = (0..4)
            .filter(|bit| index >> bit & 1 == 1)
            .map(|bit| all_clauses[bit].clone())
            .collect();
        let clause_count = chosen.len();
        let ss = SsInstance::new(n, chosen).unwrap();
        let ol = reduce(&ss).unwrap();

        // Structural audit.
        let big_k = column_count(n);
        let audit = ol.n_obj == 2 * n + big_k
            && ol.d == 2 * big_k + 5
            && ol.triples.len() == 2 * n + 2 * clause_count + (big_k - 1)
            && ol.triples.iter().all(|t| t.image.d() == ol.d);

        let mut forward_ok = true;
        let mut negative_ok = true;
        let mut any_sat = false;
        let mut any_candidate_passes = false;
        for mask in 0u8..1 << n {
            let assignment: Vec<bool> = (0..n).map(|i| mask >> i & 1 == 1).collect();
            let objects = assignment_to_objects(&ss, &assignment).unwrap();
            let verdict = verify_ol(&ol, &objects);
            // The eight assignment-shaped sets are exactly the candidate
            // object sets the variable images allow.
            any_candidate_passes |= verdict;
            if ss.satisfied_by(&assignment) {
                any_sat = true;
                forward_ok &= verdict;
            } else {
                negative_ok &= !verdict;
            }
        }
        let reverse_ok = any_sat == any_candidate_passes;
        let brute = brute_force_ss(&ss).unwrap();
        let brute_consistent = brute.is_some() == any_sat;
        TrialOutcome::of(audit && forward_ok && negative_ok && reverse_ok && brute_consistent)
            .metric("clauses", clause_count as f64)
            .metric("satisfiable", f64::from(u8::from(any_sat)))
    });
    let passed = result.all_passed();
    let sat_count = result
        .records
        .iter()
        .filter(|(_, _, o)| o.metrics.get("satisfiable") == Some(&1.0))
        .count();
    let detail = format!(
        "{}/16 clause subsets verified ({sat_count} satisfiable, including the unsatisfiable triangle family)",
        result.successes
    );
    CriterionOutcome {
        id: "hardness-reduction",
        title: "set-splitting reduction",
        passed,
        detail,
        results: vec![result],
    }
}

// --- pilots ---------------------------------------------------------------

/// The documented freezing procedure for the hidden sample constants:
/// binary search the smallest integer `c` whose sample count reaches 18/20
/// exact recoveries on the reference seed block, then double it.
fn pilot_search(
    reference_seed: u64,
    samples_for: impl Fn(f64) -> usize,
    setup_for: impl Fn(usize) -> MarkerlessSetup,
) -> f64 {
    let succeeds = |c: f64| {
        let setup = setup_for(samples_for(c));
        let result = run_experiment(
            ExperimentSpec::new("pilot", "exact-recovery@v1", 20, reference_seed),
            |seed, _| markerless_trial(&setup, seed, false),
        );
        result.successes >= 18
    };
    let mut hi = 1u64;
    while !succeeds(hi as f64) {
        hi *= 2;
        assert!(hi <= 1 << 12, "pilot diverged");
    }
    let mut lo = 0u64; // smallest failing known is > lo
    let mut best = hi;
    while lo + 1 < best {
        let mid = (lo + best) / 2;
        if succeeds(mid as f64) {
            best = mid;
        } else {
            lo = mid;
        }
    }
    (best * 2) as f64
}

pub const PILOT_REFERENCE_SEED: u64 = 0x0CC1;

pub fn pilot_two_object() -> f64 {
    pilot_search(PILOT_REFERENCE_SEED, |c| samples_two_object(c, 5, 24), two_object_setup)
}

pub fn pilot_k_object() -> f64 {
    pilot_search(PILOT_REFERENCE_SEED ^ 5, |c| samples_k_object(c, 3, 4, 64), k_object_setup)
}

// --- registry --------------------------------------------------------------

pub const EXPERIMENT_NAMES: &[&str] = &[
    "view-fidelity",
    "ws-probability",
    "marker-learning",
    "two-object-learning",
    "k-object-learning",
    "dp-oracle",
    "greedy-coverage",
    "noisy-robustness",
    "breaker-fixtures",
    "hardness-reduction",
];

/// Runs a named experiment with its acceptance-grade defaults (overridable
/// trial count and seed).
pub fn run_named(
    name: &str,
    trials: Option<usize>,
    seed: Option<u64>,
) -> Result<CriterionOutcome> {
    if trials == Some(0) {
        bail!("an experiment needs at least one trial");
    }
    let outcome = match name {
        "view-fidelity" => view_fidelity(trials.unwrap_or(10_000), seed.unwrap_or(0xA001)),
        "ws-probability" => ws_probability(trials.unwrap_or(1_000), seed.unwrap_or(0xA002)),
        "marker-learning" => marker_learning(trials.unwrap_or(20), seed.unwrap_or(0xA003)),
        "two-object-learning" => {
            two_object_learning(trials.unwrap_or(20), seed.unwrap_or(0xA004))
        }
        "k-object-learning" => {
            k_object_learning(trials.unwrap_or(20), seed.unwrap_or(0xA005))
        }
        "dp-oracle" => dp_oracle_agreement(seed.unwrap_or(0xA006)),
        "greedy-coverage" => greedy_coverage(trials.unwrap_or(1_000), seed.unwrap_or(0xA007)),
        "noisy-robustness" => noisy_robustness(trials.unwrap_or(500), seed.unwrap_or(0xA008)),
        "breaker-fixtures" => breaker_fixtures(seed.unwrap_or(0xA009)),
        "hardness-reduction" => hardness_reduction(seed.unwrap_or(0xA00A)),
        other => bail!(
            "unknown experiment {other:?}; known: {}",
            EXPERIMENT_NAMES.join(", ")
        ),
    };
    Ok(outcome)
}
