//! Benchmark-level experiments.
//!
//! * diversity: how many variants and how many distinct minimal suites each
//!   benchmark expression yields;
//! * resilience: forbid one randomly chosen row of the baseline suite and
//!   check whether the rearranged family still contains a clean suite.
//!
//! Every trial draws from its own ChaCha8 stream, selected by entry and
//! trial index under the master seed, so results do not depend on how work
//! is scheduled.

use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expr::{validate_sbe, Expr};
use crate::par;
use crate::parse::parse;
use crate::selection::{filter_family, ConstraintSet};
use crate::suite::{baseline_normalize, generate_family, generate_suite};
use crate::variants::VariantOptions;

pub const DEFAULT_TRIALS: usize = 100;

/// One `{ "name": ..., "expr": ... }` record of a benchmark file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BenchmarkRecord {
    pub name: String,
    pub expr: String,
}

#[derive(Debug, Clone)]
pub struct BenchmarkEntry {
    pub name: String,
    pub text: String,
    pub expr: Expr,
    pub n: usize,
}

#[derive(Debug)]
pub struct RejectedEntry {
    pub index: usize,
    pub name: String,
    pub error: Error,
}

#[derive(Debug, Default)]
pub struct Benchmark {
    pub entries: Vec<BenchmarkEntry>,
    /// Records that failed to parse or are not SBEs.
    pub rejected: Vec<RejectedEntry>,
}

impl Benchmark {
    pub fn from_records(records: Vec<BenchmarkRecord>) -> Self {
        let mut b = Benchmark::default();
        for (index, r) in records.into_iter().enumerate() {
            let checked = parse(&r.expr).and_then(|e| validate_sbe(&e).map(|t| (e, t.len())));
            match checked {
                Ok((expr, n)) => b.entries.push(BenchmarkEntry {
                    name: r.name,
                    text: r.expr,
                    expr,
                    n,
                }),
                Err(error) => b.rejected.push(RejectedEntry {
                    index,
                    name: r.name,
                    error,
                }),
            }
        }
        b
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let records: Vec<BenchmarkRecord> = serde_json::from_str(text)?;
        Ok(Benchmark::from_records(records))
    }
}

pub fn load_benchmark(path: impl AsRef<Path>) -> Result<Benchmark> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    Benchmark::from_json(&text)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiversityRow {
    pub name: String,
    pub n: usize,
    pub variants: usize,
    pub space_size: u128,
    pub truncated: bool,
    pub distinct_suites: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiversityReport {
    pub options: VariantOptions,
    pub entries: Vec<DiversityRow>,
}

pub fn run_rq1(b: &Benchmark, opts: &VariantOptions) -> Result<DiversityReport> {
    let rows = par::map(&b.entries, |entry| -> Result<DiversityRow> {
        let family = generate_family(&entry.expr, opts)?;
        Ok(DiversityRow {
            name: entry.name.clone(),
            n: entry.n,
            variants: family.variant_count,
            space_size: family.space_size,
            truncated: family.truncated,
            distinct_suites: family.distinct_count(),
        })
    });
    Ok(DiversityReport {
        options: *opts,
        entries: rows.into_iter().collect::<Result<_>>()?,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TrialRecord {
    pub trial: usize,
    /// One-based row of the baseline suite declared illegal.
    pub illegal_test_case: usize,
    pub success: bool,
    /// Variant index of the first clean suite, when one exists.
    pub witness_variant: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResilienceRow {
    pub name: String,
    pub n: usize,
    pub variants: usize,
    pub distinct_suites: usize,
    pub trials: usize,
    pub successes: usize,
    pub success_rate: f64,
    pub records: Vec<TrialRecord>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResilienceReport {
    pub seed: u64,
    pub trials: usize,
    pub options: VariantOptions,
    pub entries: Vec<ResilienceRow>,
}

/// The RNG for one (entry, trial) cell.
pub fn trial_rng(seed: u64, entry: usize, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((entry as u64) << 32) ^ trial as u64);
    rng
}

pub fn run_rq2(
    b: &Benchmark,
    trials: usize,
    seed: u64,
    opts: &VariantOptions,
) -> Result<ResilienceReport> {
    if trials == 0 {
        return Err(Error::InvalidOptions("trials must be at least 1".into()));
    }
    let mut entries = Vec::with_capacity(b.entries.len());
    for (entry_index, entry) in b.entries.iter().enumerate() {
        let baseline = generate_suite(&baseline_normalize(&entry.expr)?)?;
        // identical for every trial, so built once
        let family = generate_family(&entry.expr, opts)?;

        let records = par::map_range(trials, |trial| -> Result<TrialRecord> {
            let mut rng = trial_rng(seed, entry_index, trial);
            let pick = rng.gen_range(0..baseline.size());
            let cs = ConstraintSet::default().forbid_vector(&baseline.tests[pick].vector);
            let filtered = filter_family(&family, &cs)?;
            let witness = filtered
                .valid
                .first()
                .map(|&m| family.members[m].variant_index);
            Ok(TrialRecord {
                trial,
                illegal_test_case: pick + 1,
                success: witness.is_some(),
                witness_variant: witness,
            })
        });
        let records: Vec<TrialRecord> = records.into_iter().collect::<Result<_>>()?;
        let successes = records.iter().filter(|r| r.success).count();
        entries.push(ResilienceRow {
            name: entry.name.clone(),
            n: entry.n,
            variants: family.variant_count,
            distinct_suites: family.distinct_count(),
            trials,
            successes,
            success_rate: successes as f64 / trials as f64,
            records,
        });
    }
    Ok(ResilienceReport {
        seed,
        trials,
        options: *opts,
        entries,
    })
}
