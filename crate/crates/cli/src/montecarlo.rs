//! Replicated maximum-likelihood experiments against the Cramer-Rao bound.

use rayon::prelude::*;
use serde_json::{json, Value};
use wva_core::oracle::{mc_replica, summarize, McResult};
use wva_core::ExperimentConfig;

use crate::error::{CliError, Result};
use crate::output::Table;
use crate::record::fmt_f64;

/// Below this many shots per replica the summary statistics are skipped.
pub const MIN_SUMMARY_SHOTS: u64 = 1_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct McSpec {
    pub shots: u64,
    pub replicas: u64,
    pub seed: u64,
}

pub struct McOutput {
    pub results: Vec<McResult>,
    pub table: Table,
    pub summary: Value,
}

pub fn run_mc(cfg: &ExperimentConfig, spec: McSpec, pool: &rayon::ThreadPool) -> Result<McOutput> {
    if spec.shots == 0 || spec.replicas == 0 {
        return Err(CliError::Validation(
            "--shots and --replicas must be positive".into(),
        ));
    }
    let results: Vec<McResult> = pool.install(|| {
        (0..spec.replicas)
            .into_par_iter()
            .map(|k| mc_replica(cfg, spec.shots, spec.seed, k))
            .collect::<wva_core::Result<_>>()
    })?;

    let mut table = Table::new([
        "replica",
        "seed",
        "shots",
        "count_right",
        "count_left",
        "count_discard",
        "g_hat",
        "se_hat",
        "status",
    ]);
    for r in &results {
        table.push(vec![
            r.replica.to_string(),
            r.seed.to_string(),
            r.shots.to_string(),
            r.counts.right.to_string(),
            r.counts.left.to_string(),
            r.counts.discard.to_string(),
            r.g_hat.map(fmt_f64).unwrap_or_default(),
            r.se_hat.map(fmt_f64).unwrap_or_default(),
            r.failure.clone().unwrap_or_else(|| "ok".to_string()),
        ]);
    }

    let raw = cfg.raw();
    let failed = results.iter().filter(|r| r.g_hat.is_none()).count();
    let (summary, reason) = if spec.shots < MIN_SUMMARY_SHOTS {
        (
            Value::Null,
            Some(format!("fewer than {MIN_SUMMARY_SHOTS} shots per replica")),
        )
    } else {
        match summarize(cfg, spec.shots, &results) {
            Ok(s) => (serde_json::to_value(s).expect("summary serializes"), None),
            Err(e) => (Value::Null, Some(e.to_string())),
        }
    };
    let summary = json!({
        "config": raw,
        "shots": spec.shots,
        "replicas": spec.replicas,
        "seed": spec.seed,
        "failed_replicas": failed,
        "summary": summary,
        "reason": reason,
    });
    Ok(McOutput {
        results,
        table,
        summary,
    })
}
