//! The four pipelines behind the subcommands.

use std::fmt::Write as _;

use anyhow::{bail, Context, Result};
use cobacs_core::decision::{Archetype, ConfidencePolicy, TypeTwoThresholds};
use cobacs_core::experiment::{
    bootstrap_filter_analysis, dk_effect_analysis, ingest_csv, rt_confidence_analysis,
    score_subjects, BootstrapParams, TestOutcome,
};
use cobacs_core::population::{run_population, sweep, FilterGrid};
use cobacs_core::{
    expected_error_cobacs, expected_error_rebacs, performance_to_mu, stats, type1_roc, type2_roc,
    PopulationMoments, Task, TrialRecord, WorkerModel,
};
use rayon::prelude::*;

use crate::config::{hash_bytes, AnalyzeSection, PredictSection, RocSection, SweepSection};
use crate::output::{fmt, fmt_pct, OutputDir};

fn test_outcome_json(outcome: &TestOutcome) -> serde_json::Value {
    match outcome {
        TestOutcome::PValue(p) => serde_json::json!(p),
        TestOutcome::NoEffect => serde_json::json!("no-effect"),
        TestOutcome::Unavailable => serde_json::json!("unavailable"),
    }
}

fn test_outcome_csv(outcome: &TestOutcome) -> String {
    match outcome {
        TestOutcome::PValue(p) => format!("{p:.6e}"),
        TestOutcome::NoEffect => "no-effect".into(),
        TestOutcome::Unavailable => "".into(),
    }
}

// ---------------------------------------------------------------------------
// sweep
// ---------------------------------------------------------------------------

pub fn cmd_sweep(section: &SweepSection, out: &mut OutputDir) -> Result<()> {
    if section.replicates == 0 {
        bail!("replicates must be at least 1");
    }
    let spec = section.population_spec(out.seed)?;
    let grid = FilterGrid::new(
        section.perf_thresholds.clone(),
        section.meta_thresholds.clone(),
    )?;
    let result = sweep(&spec, &grid, section.replicates, out.seed)?;

    let provenance = out.provenance(&[
        ("perf_dist", section.perf_dist.describe()),
        ("replicates", section.replicates.to_string()),
    ]);

    // One row per filter cell.
    let mut cells_csv = provenance.clone();
    cells_csv.push_str(
        "perf_min,meta_min,viable_replicates,mean_survivors,rebacs_mean_error,rebacs_sd_error,\
         cobacs_mean_error,cobacs_sd_error,wins,ties,win_fraction,available\n",
    );
    for cell in &result.cells {
        writeln!(
            cells_csv,
            "{},{},{},{},{},{},{},{},{},{},{},{}",
            fmt(cell.perf_min),
            fmt(cell.meta_min),
            cell.viable_replicates,
            fmt(cell.mean_survivors),
            fmt(cell.mean_rebacs_error),
            fmt(cell.sd_rebacs_error),
            fmt(cell.mean_cobacs_error),
            fmt(cell.sd_cobacs_error),
            cell.wins,
            cell.ties,
            cell.win_fraction.map(fmt).unwrap_or_default(),
            cell.available(),
        )?;
    }
    out.write_file("sweep_cells.csv", &cells_csv)?;

    // Win-fraction matrix, heatmap-ready: meta thresholds down the rows,
    // performance thresholds across the columns, "-" for unavailable.
    let mut matrix_csv = provenance.clone();
    matrix_csv.push_str("meta_min");
    for p in &result.perf_thresholds {
        write!(matrix_csv, ",perf_{}", fmt(*p))?;
    }
    matrix_csv.push('\n');
    for (meta_idx, m) in result.meta_thresholds.iter().enumerate() {
        write!(matrix_csv, "{}", fmt(*m))?;
        for perf_idx in 0..result.perf_thresholds.len() {
            let cell = result.cell(perf_idx, meta_idx);
            match cell.win_fraction {
                Some(w) => write!(matrix_csv, ",{}", fmt(w))?,
                None => write!(matrix_csv, ",-")?,
            }
        }
        matrix_csv.push('\n');
    }
    out.write_file("sweep_win_matrix.csv", &matrix_csv)?;

    let cells_json: Vec<serde_json::Value> = result
        .cells
        .iter()
        .map(|c| {
            serde_json::json!({
                "perf_min": c.perf_min,
                "meta_min": c.meta_min,
                "viable_replicates": c.viable_replicates,
                "mean_survivors": c.mean_survivors,
                "rebacs_mean_error": nan_null(c.mean_rebacs_error),
                "rebacs_sd_error": nan_null(c.sd_rebacs_error),
                "cobacs_mean_error": nan_null(c.mean_cobacs_error),
                "cobacs_sd_error": nan_null(c.sd_cobacs_error),
                "wins": c.wins,
                "ties": c.ties,
                "win_fraction": c.win_fraction,
                "available": c.available(),
            })
        })
        .collect();
    let summary = serde_json::json!({
        "command": "sweep",
        "config": serde_json::to_value(section)?,
        "n_replicates": result.n_replicates,
        "cells": cells_json,
    });
    out.write_manifest(summary)?;
    Ok(())
}

fn nan_null(v: f64) -> serde_json::Value {
    if v.is_nan() {
        serde_json::Value::Null
    } else {
        serde_json::json!(v)
    }
}

// ---------------------------------------------------------------------------
// analyze
// ---------------------------------------------------------------------------

pub fn cmd_analyze(section: &AnalyzeSection, out: &mut OutputDir) -> Result<()> {
    let input = section
        .input
        .as_deref()
        .context("analyze needs an input trials CSV (--input or [analyze].input)")?;
    let input_bytes =
        std::fs::read(input).with_context(|| format!("reading {}", input.display()))?;
    let input_hash = hash_bytes(&input_bytes);
    let rows = ingest_csv(input)?;
    if rows.is_empty() {
        eprintln!("warning: {} has no data rows", input.display());
    }
    let subjects: std::collections::BTreeSet<&str> =
        rows.iter().map(|r| r.subject_id.as_str()).collect();
    eprintln!(
        "ingested {} trials from {} subjects",
        rows.len(),
        subjects.len()
    );
    let scoring = score_subjects(&rows, section.score_split)?;
    for note in &scoring.notes {
        eprintln!("note: {note}");
    }

    let params = BootstrapParams {
        n_resamples: section.resamples,
        sample_fraction: section.sample_fraction,
        perf_filters: section.perf_filters.clone(),
        meta_filters: section.meta_filters.clone(),
        holdout_after: section.score_split,
        seed: out.seed,
    };
    let report = bootstrap_filter_analysis(&rows, &scoring.cards, &params)?;

    let provenance = out.provenance(&[
        ("input", input.display().to_string()),
        ("input_hash", format!("{input_hash:016x}")),
    ]);

    // Error comparison table (percent, one decimal).
    let mut table3 = provenance.clone();
    table3.push_str(
        "perf_min,meta_min,rebacs_mean_pct,rebacs_sd_pct,cobacs_mean_pct,cobacs_sd_pct,\
         viable_resamples,p_value,available\n",
    );
    for cell in &report.cells {
        writeln!(
            table3,
            "{},{},{},{},{},{},{},{},{}",
            fmt(cell.perf_min),
            fmt(cell.meta_min),
            fmt_pct(cell.rebacs_mean_pct),
            fmt_pct(cell.rebacs_sd_pct),
            fmt_pct(cell.cobacs_mean_pct),
            fmt_pct(cell.cobacs_sd_pct),
            cell.viable_resamples,
            test_outcome_csv(&cell.test),
            cell.available(),
        )?;
    }
    out.write_file("error_table.csv", &table3)?;

    // Survivor-count table.
    let mut table4 = provenance.clone();
    table4.push_str("perf_min,meta_min,mean_survivors\n");
    for cell in &report.cells {
        writeln!(
            table4,
            "{},{},{}",
            fmt(cell.perf_min),
            fmt(cell.meta_min),
            fmt_pct(cell.mean_survivors)
        )?;
    }
    out.write_file("survivor_table.csv", &table4)?;

    // Self-estimate bands.
    let dk = dk_effect_analysis(&scoring.cards);
    if dk.bands.is_empty() {
        eprintln!("warning: no self estimates present; band table is empty");
    }
    let mut dk_csv = provenance.clone();
    dk_csv.push_str("band_lo_pct,band_hi_pct,mean_actual_accuracy,count\n");
    for band in &dk.bands {
        writeln!(
            dk_csv,
            "{},{},{},{}",
            fmt_pct(band.lo),
            fmt_pct(band.hi),
            fmt(band.mean_actual_accuracy),
            band.count
        )?;
    }
    out.write_file("dk_bands.csv", &dk_csv)?;

    // Response-time / confidence correlations.
    let rt = rt_confidence_analysis(&rows);
    let mut rt_csv = provenance.clone();
    rt_csv.push_str("task,subject_id,correlation,p_value,significant_negative\n");
    for summary in &rt {
        for subject in &summary.per_subject {
            writeln!(
                rt_csv,
                "{},{},{},{},{}",
                summary.task.as_str(),
                subject.subject_id,
                fmt(subject.correlation),
                fmt(subject.p_value),
                subject.correlation < 0.0 && subject.p_value < 0.05
            )?;
        }
    }
    out.write_file("rt_summary.csv", &rt_csv)?;

    let cells_json: Vec<serde_json::Value> = report
        .cells
        .iter()
        .map(|c| {
            serde_json::json!({
                "perf_min": c.perf_min,
                "meta_min": c.meta_min,
                "rebacs_mean_pct": nan_null(c.rebacs_mean_pct),
                "rebacs_sd_pct": nan_null(c.rebacs_sd_pct),
                "cobacs_mean_pct": nan_null(c.cobacs_mean_pct),
                "cobacs_sd_pct": nan_null(c.cobacs_sd_pct),
                "mean_survivors": c.mean_survivors,
                "viable_resamples": c.viable_resamples,
                "p_value": test_outcome_json(&c.test),
                "available": c.available(),
            })
        })
        .collect();
    let rt_json: Vec<serde_json::Value> = rt
        .iter()
        .map(|s| {
            serde_json::json!({
                "task": s.task.as_str(),
                "tested": s.per_subject.len(),
                "negative": s.n_negative,
                "significant_negative": s.n_significant_negative,
                "excluded": s.n_excluded,
            })
        })
        .collect();
    out.write_manifest(serde_json::json!({
        "command": "analyze",
        "config": serde_json::to_value(section)?,
        "input_hash": format!("{input_hash:016x}"),
        "n_trials": rows.len(),
        "n_subjects": report.n_subjects,
        "split_half_correlation": scoring.split_half_correlation,
        "pooled_p": test_outcome_json(&report.pooled),
        "cells": cells_json,
        "dk_correlation": dk.correlation,
        "rt": rt_json,
        "notes": scoring.notes,
    }))?;
    Ok(())
}

// ---------------------------------------------------------------------------
// predict
// ---------------------------------------------------------------------------

fn policy_for(section: &PredictSection) -> Result<ConfidencePolicy> {
    Ok(match section.policy.as_str() {
        "low" => ConfidencePolicy::archetype(Archetype::Low, section.c_max)?,
        "medium" => ConfidencePolicy::archetype(Archetype::Medium, section.c_max)?,
        "high" => ConfidencePolicy::archetype(Archetype::High, section.c_max)?,
        "thresholds" => ConfidencePolicy::Thresholds(TypeTwoThresholds::symmetric(
            0.0,
            &section.threshold_offsets,
        )?),
        other => bail!("policy must be low|medium|high|thresholds, got {other:?}"),
    })
}

pub fn cmd_predict(section: &PredictSection, out: &mut OutputDir) -> Result<()> {
    if section.replicates == 0 {
        bail!("replicates must be at least 1");
    }
    if section.perfs.is_empty() || section.n_users.is_empty() {
        bail!("predict needs at least one performance and one crowd size");
    }
    for &perf in &section.perfs {
        if !(perf > 0.0 && perf < 1.0) {
            bail!("performance values must be in (0, 1), got {perf}");
        }
    }
    let policy = policy_for(section)?;
    let prior = [section.prior_a1, 1.0 - section.prior_a1];

    let mut rows_out: Vec<(f64, usize, f64, f64, f64, f64)> = Vec::new();
    for &perf in &section.perfs {
        for &n in &section.n_users {
            let workers: Vec<WorkerModel> = (0..n)
                .map(|id| {
                    Ok(WorkerModel::new(
                        id,
                        performance_to_mu(perf)?,
                        policy.clone(),
                    ))
                })
                .collect::<cobacs_core::Result<_>>()?;
            let pm = PopulationMoments::from_worker(&workers[0], n, prior)?;
            let analytic_re = expected_error_rebacs(&pm)?;
            let analytic_co = expected_error_cobacs(&pm)?;

            let point_seed = stats::derive_seed(out.seed, &[perf.to_bits(), n as u64]);
            let sums: Vec<(f64, f64)> = (0..section.replicates as u64)
                .into_par_iter()
                .map(|rep| {
                    run_population(
                        &workers,
                        section.n_questions,
                        section.prior_a1,
                        stats::derive_seed(point_seed, &[rep]),
                    )
                    .expect("population runs on validated inputs")
                })
                .collect();
            let mc_re =
                sums.iter().map(|s| s.0).sum::<f64>() / section.replicates as f64;
            let mc_co =
                sums.iter().map(|s| s.1).sum::<f64>() / section.replicates as f64;
            rows_out.push((perf, n, analytic_re, mc_re, analytic_co, mc_co));
        }
    }

    let provenance = out.provenance(&[
        ("policy", section.policy.clone()),
        ("replicates", section.replicates.to_string()),
        ("n_questions", section.n_questions.to_string()),
    ]);
    let mut csv = provenance;
    csv.push_str(
        "perf,n_users,analytic_rebacs,mc_rebacs,abs_diff_rebacs,\
         analytic_cobacs,mc_cobacs,abs_diff_cobacs\n",
    );
    for (perf, n, are, mre, aco, mco) in &rows_out {
        writeln!(
            csv,
            "{},{},{},{},{},{},{},{}",
            fmt(*perf),
            n,
            fmt(*are),
            fmt(*mre),
            fmt((are - mre).abs()),
            fmt(*aco),
            fmt(*mco),
            fmt((aco - mco).abs()),
        )?;
    }
    out.write_file("predict.csv", &csv)?;

    out.write_manifest(serde_json::json!({
        "command": "predict",
        "config": serde_json::to_value(section)?,
        "rows": rows_out.len(),
    }))?;
    Ok(())
}

// ---------------------------------------------------------------------------
// roc
// ---------------------------------------------------------------------------

pub fn cmd_roc(section: &RocSection, out: &mut OutputDir) -> Result<()> {
    let input = section
        .input
        .as_deref()
        .context("roc needs an input trials CSV (--input or [roc].input)")?;
    let input_bytes =
        std::fs::read(input).with_context(|| format!("reading {}", input.display()))?;
    let input_hash = hash_bytes(&input_bytes);
    let rows = ingest_csv(input)?;

    let mut by_subject_task: std::collections::BTreeMap<(String, Task), Vec<TrialRecord>> =
        std::collections::BTreeMap::new();
    for row in &rows {
        by_subject_task
            .entry((row.subject_id.clone(), row.task))
            .or_default()
            .push(TrialRecord::new(row.response, row.true_answer, row.confidence));
    }

    let provenance = out.provenance(&[
        ("input", input.display().to_string()),
        ("input_hash", format!("{input_hash:016x}")),
    ]);
    let mut scores = provenance.clone();
    scores.push_str("subject_id,task,n_trials,auroc1,auroc2\n");
    let mut points = provenance;
    points.push_str("subject_id,task,curve,far,hr\n");

    let c_max = cobacs_core::experiment::STUDY_C_MAX;
    for ((subject, task), trials) in &by_subject_task {
        let curve1 = type1_roc(trials, c_max);
        let curve2 = type2_roc(trials, c_max);
        writeln!(
            scores,
            "{},{},{},{},{}",
            subject,
            task.as_str(),
            trials.len(),
            curve1.as_ref().map(|c| fmt(c.auc)).unwrap_or_default(),
            curve2.as_ref().map(|c| fmt(c.auc)).unwrap_or_default(),
        )?;
        for (name, curve) in [("type1", &curve1), ("type2", &curve2)] {
            if let Ok(curve) = curve {
                for (far, hr) in &curve.points {
                    writeln!(
                        points,
                        "{},{},{},{},{}",
                        subject,
                        task.as_str(),
                        name,
                        fmt(*far),
                        fmt(*hr)
                    )?;
                }
            }
        }
    }
    out.write_file("roc_scores.csv", &scores)?;
    out.write_file("roc_points.csv", &points)?;

    out.write_manifest(serde_json::json!({
        "command": "roc",
        "config": serde_json::to_value(section)?,
        "input_hash": format!("{input_hash:016x}"),
        "subject_task_groups": by_subject_task.len(),
    }))?;
    Ok(())
}
