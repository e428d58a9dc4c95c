//! Statistical and structural properties of the generative model.

use occlusion_core::model::{
    generate_image, pure_segment_count, replay_ground_truth, BackgroundModel, DepthModel,
    GenConfig, ObjectSet, RoomModel, Source,
};
use occlusion_core::structure::gen_random_objects;
use occlusion_core::Xoshiro256StarStar;

fn base_cfg(k: usize, room: RoomModel, markers: bool, seed: u64) -> GenConfig {
    GenConfig {
        room,
        depth: DepthModel::FullyRandom,
        k,
        background: BackgroundModel::Distinct,
        markers,
        seed,
    }
}

fn random_set(m: usize, s: usize, c: u16, seed: u64) -> ObjectSet {
    let mut rng = Xoshiro256StarStar::seed_from_u64(seed);
    loop {
        let set = gen_random_objects(&vec![s; m], c, &mut rng).unwrap();
        if set.duplicate_strings().is_none() {
            return set;
        }
    }
}

#[test]
fn replay_reproduces_ten_thousand_images() {
    let objects = random_set(5, 12, 8, 1);
    let d = 48;
    let mut rng = Xoshiro256StarStar::seed_from_u64(2);
    for trial in 0..10_000 {
        let markers = trial % 2 == 0;
        let room = if trial % 4 < 2 { RoomModel::Open } else { RoomModel::Closed };
        let cfg = base_cfg(3, room, markers, 0);
        let (image, truth) = generate_image(&objects, &cfg, d, &mut rng).unwrap();
        let replayed = replay_ground_truth(&objects, &cfg, &truth, d).unwrap();
        assert_eq!(image, replayed, "trial {trial}");
    }
}

#[test]
fn room_models_bound_placements() {
    let objects = random_set(4, 9, 6, 3);
    let d = 40;
    let mut rng = Xoshiro256StarStar::seed_from_u64(4);
    let closed = base_cfg(2, RoomModel::Closed, false, 0);
    let open = base_cfg(2, RoomModel::Open, false, 0);
    for _ in 0..5_000 {
        let (_, truth) = generate_image(&objects, &closed, d, &mut rng).unwrap();
        for p in &truth.placements {
            let len = objects.get(p.object_id).unwrap().len() as i64;
            assert!(p.left >= 0 && p.left + len <= d as i64);
        }
        let (_, truth) = generate_image(&objects, &open, d, &mut rng).unwrap();
        for p in &truth.placements {
            let len = objects.get(p.object_id).unwrap().len() as i64;
            assert!(p.left >= -(len - 1) && p.left <= d as i64);
        }
        // Visible runs of one object are contiguous substrings of it:
        // adjacent columns from the same object advance by exactly one
        // object pixel (separate runs are never adjacent).
        let mut prev: Option<(usize, usize)> = None;
        for src in &truth.explanation.sources {
            match src {
                Source::Object { id, index } => {
                    if let Some((pid, pidx)) = prev {
                        if pid == *id {
                            assert_eq!(*index, pidx + 1, "run must advance by one pixel");
                        }
                    }
                    prev = Some((*id, *index));
                }
                _ => prev = None,
            }
        }
    }
}

#[test]
fn pure_segments_bounded_by_2k_plus_1() {
    let objects = random_set(6, 10, 8, 5);
    let d = 64;
    let mut rng = Xoshiro256StarStar::seed_from_u64(6);
    for trial in 0..10_000 {
        let k = 1 + trial % 3;
        let room = if trial % 2 == 0 { RoomModel::Open } else { RoomModel::Closed };
        let cfg = base_cfg(k, room, false, 0);
        let (_, truth) = generate_image(&objects, &cfg, d, &mut rng).unwrap();
        assert!(
            pure_segment_count(&truth) <= 2 * k + 1,
            "trial {trial}: {} segments with k = {k}",
            pure_segment_count(&truth)
        );
    }
}

/// Chi-squared critical value at significance 0.001 (Wilson-Hilferty).
fn chi2_crit_p001(dof: usize) -> f64 {
    let v = dof as f64;
    let z = 3.090_232; // standard normal quantile at 0.999
    let t = 1.0 - 2.0 / (9.0 * v) + z * (2.0 / (9.0 * v)).sqrt();
    v * t * t * t
}

fn chi2_stat(observed: &[u64], total: u64) -> f64 {
    let expected = total as f64 / observed.len() as f64;
    observed.iter().map(|&o| (o as f64 - expected).powi(2) / expected).sum()
}

#[test]
fn object_subset_selection_is_uniform() {
    // m = 6, k = 2: 15 subsets, 100k draws, GOF at p = 0.001.
    let objects = random_set(6, 5, 8, 7);
    let d = 24;
    let cfg = base_cfg(2, RoomModel::Open, false, 0);
    let mut rng = Xoshiro256StarStar::seed_from_u64(8);
    let mut counts = vec![0u64; 15];
    let pair_index = |a: usize, b: usize| -> usize {
        // Lexicographic rank of {a < b} among 2-subsets of 0..6.
        let mut rank = 0;
        for x in 0..a {
            rank += 5 - x;
        }
        rank + (b - a - 1)
    };
    let n = 100_000;
    for _ in 0..n {
        let (_, truth) = generate_image(&objects, &cfg, d, &mut rng).unwrap();
        let mut ids: Vec<usize> = truth.placements.iter().map(|p| p.object_id).collect();
        ids.sort_unstable();
        counts[pair_index(ids[0], ids[1])] += 1;
    }
    let stat = chi2_stat(&counts, n);
    let crit = chi2_crit_p001(14);
    assert!(stat < crit, "chi2 = {stat:.2} >= {crit:.2}");
}

#[test]
fn left_endpoints_are_uniform_in_both_rooms() {
    let objects = random_set(1, 4, 8, 9);
    let d = 20;
    let n = 100_000;
    // Closed room: 17 cells.
    let cfg = base_cfg(1, RoomModel::Closed, false, 0);
    let mut rng = Xoshiro256StarStar::seed_from_u64(10);
    let mut counts = vec![0u64; d - 4 + 1];
    for _ in 0..n {
        let (_, truth) = generate_image(&objects, &cfg, d, &mut rng).unwrap();
        counts[truth.placements[0].left as usize] += 1;
    }
    let stat = chi2_stat(&counts, n);
    assert!(stat < chi2_crit_p001(counts.len() - 1), "closed: chi2 = {stat:.2}");

    // Open room: left ranges over -(s-1)..=d, 24 cells.
    let cfg = base_cfg(1, RoomModel::Open, false, 0);
    let mut counts = vec![0u64; d + 4];
    for _ in 0..n {
        let (_, truth) = generate_image(&objects, &cfg, d, &mut rng).unwrap();
        counts[(truth.placements[0].left + 3) as usize] += 1;
    }
    let stat = chi2_stat(&counts, n);
    assert!(stat < chi2_crit_p001(counts.len() - 1), "open: chi2 = {stat:.2}");
}

#[test]
fn fixed_pixel_visibility_matches_enumerated_probability() {
    // One object in the open room: a fixed object pixel is visible at a
    // fixed canvas position for exactly one of the d + s left endpoints.
    let (d, s) = (100usize, 10usize);
    let objects = random_set(1, s, 8, 11);
    let cfg = base_cfg(1, RoomModel::Open, false, 0);
    let (pixel_idx, canvas_pos) = (4usize, 50usize);
    let mut rng = Xoshiro256StarStar::seed_from_u64(12);
    let n = 100_000u64;
    let mut hits = 0u64;
    for _ in 0..n {
        let (_, truth) = generate_image(&objects, &cfg, d, &mut rng).unwrap();
        if truth.explanation.sources[canvas_pos]
            == (Source::Object { id: 0, index: pixel_idx })
        {
            hits += 1;
        }
    }
    let empirical = hits as f64 / n as f64;
    let exact = 1.0 / (d + s) as f64;
    let approx = 1.0 / (d + s - 2) as f64; // 1/d'
    let sigma = (approx * (1.0 - approx) / n as f64).sqrt();
    assert!(
        (empirical - exact).abs() <= 3.0 * sigma,
        "empirical {empirical:.6} vs exact {exact:.6}"
    );
    assert!(
        (empirical - approx).abs() <= 3.0 * sigma,
        "empirical {empirical:.6} vs 1/d' {approx:.6}"
    );
}

#[test]
fn forced_back_object_always_loses_overlaps() {
    use occlusion_core::model::DepthOrdering;
    let objects = random_set(3, 8, 8, 13);
    let ordering = DepthOrdering::new(vec![(0, 1), (0, 2)], 3).unwrap();
    let cfg = GenConfig {
        room: RoomModel::Open,
        depth: DepthModel::PartiallyRandom(ordering),
        k: 2,
        background: BackgroundModel::Distinct,
        markers: false,
        seed: 0,
    };
    let mut rng = Xoshiro256StarStar::seed_from_u64(14);
    for _ in 0..2_000 {
        let (_, truth) = generate_image(&objects, &cfg, 32, &mut rng).unwrap();
        let p0 = truth.placements.iter().find(|p| p.object_id == 0);
        if let Some(p0) = p0 {
            for other in truth.placements.iter().filter(|p| p.object_id != 0) {
                assert!(p0.depth > other.depth, "object 0 must sit behind");
            }
        }
    }
}
