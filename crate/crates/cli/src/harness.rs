//! The experiment engine: independent seeded trials, parallel execution,
//! deterministic artifacts.
//!
//! All randomness flows from one base seed. Trial `i` runs on
//! `derive_trial_seed(base, i)`, so any single trial can be reproduced in
//! isolation and the aggregate is independent of scheduling order.

use crate::json::{ExperimentResultDoc, TrialDoc};
use rayon::prelude::*;
use std::collections::BTreeMap;
use std::time::Instant;

#[derive(Clone, Debug)]
pub struct ExperimentSpec {
    pub name: String,
    /// Versioned success predicate id, e.g. `exact-recovery@v1`.
    pub predicate: String,
    pub trials: usize,
    pub base_seed: u64,
    /// Free-form parameter record embedded in the artifact.
    pub params: BTreeMap<String, String>,
}

impl ExperimentSpec {
    pub fn new(name: &str, predicate: &str, trials: usize, base_seed: u64) -> Self {
        ExperimentSpec {
            name: name.to_string(),
            predicate: predicate.to_string(),
            trials,
            base_seed,
            params: BTreeMap::new(),
        }
    }

    pub fn param(mut self, key: &str, value: impl ToString) -> Self {
        self.params.insert(key.to_string(), value.to_string());
        self
    }
}

#[derive(Clone, Debug)]
pub struct TrialOutcome {
    pub success: bool,
    pub metrics: BTreeMap<String, f64>,
}

impl TrialOutcome {
    pub fn pass() -> Self {
        TrialOutcome { success: true, metrics: BTreeMap::new() }
    }

    pub fn of(success: bool) -> Self {
        TrialOutcome { success, metrics: BTreeMap::new() }
    }

    pub fn metric(mut self, key: &str, value: f64) -> Self {
        self.metrics.insert(key.to_string(), value);
        self
    }
}

#[derive(Clone, Debug)]
pub struct ExperimentResult {
    pub spec: ExperimentSpec,
    pub records: Vec<(usize, u64, TrialOutcome)>,
    pub successes: usize,
    pub wall_ms: u128,
}

impl ExperimentResult {
    pub fn success_rate(&self) -> f64 {
        if self.records.is_empty() {
            0.0
        } else {
            self.successes as f64 / self.records.len() as f64
        }
    }

    pub fn all_passed(&self) -> bool {
        self.successes == self.records.len()
    }

    /// The canonical artifact (wall time excluded so reruns are identical).
    pub fn to_doc(&self) -> ExperimentResultDoc {
        ExperimentResultDoc {
            name: self.spec.name.clone(),
            predicate: self.spec.predicate.clone(),
            base_seed: self.spec.base_seed,
            trials: self.spec.trials,
            params: self.spec.params.clone(),
            records: self
                .records
                .iter()
                .map(|(index, seed, outcome)| TrialDoc {
                    index: *index,
                    seed: *seed,
                    success: outcome.success,
                    metrics: outcome.metrics.clone(),
                })
                .collect(),
            successes: self.successes,
            success_rate: self.success_rate(),
            wilson95: wilson95(self.successes, self.records.len()),
        }
    }

    pub fn to_csv(&self) -> String {
        let mut keys: Vec<&str> = self
            .records
            .iter()
            .flat_map(|(_, _, o)| o.metrics.keys().map(String::as_str))
            .collect();
        keys.sort_unstable();
        keys.dedup();
        let mut out = String::from("trial,seed,success");
        for k in &keys {
            out.push(',');
            out.push_str(k);
        }
        out.push('\n');
        for (index, seed, outcome) in &self.records {
            out.push_str(&format!("{index},{seed},{}", u8::from(outcome.success)));
            for k in &keys {
                out.push(',');
                if let Some(v) = outcome.metrics.get(*k) {
                    out.push_str(&format!("{v}"));
                }
            }
            out.push('\n');
        }
        out
    }
}

/// SplitMix64 over `base + (i+1) * golden-gamma`: well-spread, documented,
/// and independent of trial execution order.
pub fn derive_trial_seed(base_seed: u64, index: usize) -> u64 {
    let mut state = base_seed.wrapping_add((index as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    occlusion_core::rng::splitmix64(&mut state)
}

/// Runs `trials` independent trials in parallel and aggregates.
pub fn run_experiment(
    spec: ExperimentSpec,
    trial: impl Fn(u64, usize) -> TrialOutcome + Sync,
) -> ExperimentResult {
    let started = Instant::now();
    let records: Vec<(usize, u64, TrialOutcome)> = (0..spec.trials)
        .into_par_iter()
        .map(|index| {
            let seed = derive_trial_seed(spec.base_seed, index);
            (index, seed, trial(seed, index))
        })
        .collect();
    let successes = records.iter().filter(|(_, _, o)| o.success).count();
    ExperimentResult { spec, records, successes, wall_ms: started.elapsed().as_millis() }
}

/// Wilson score interval at 95%.
pub fn wilson95(successes: usize, trials: usize) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let p = successes as f64 / n;
    let z = 1.959_964;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    ((center - half).max(0.0), (center + half).min(1.0))
}
