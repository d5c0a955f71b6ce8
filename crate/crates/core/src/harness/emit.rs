//! CSV emission. Every file is UTF-8 with LF line endings; reals are written
//! with 10 significant digits (`%.10g` style) so reruns are byte-identical.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::theory::{ExactDistribution, FixedPointResult};

use super::run::{AggregateRow, ExperimentOutput, HubReport, RunSummary, Table1, UrnReport};

pub const TRAJECTORY_HEADER: &str = "seed,n,M,L,leader,change_count,scaled_metric";
pub const SUMMARY_HEADER: &str = "n,median_scaled,min_scaled,max_scaled";

/// `x` with 10 significant digits: fixed notation for exponents in
/// `[-5, 10)`, scientific otherwise, trailing zeros removed.
pub fn format_real(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{x:.9e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-5..10).contains(&exp) {
        let mantissa = trim_fraction(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        return format!("{mantissa}e{sign}{:02}", exp.abs());
    }
    let decimals = (9 - exp).max(0) as usize;
    trim_fraction(&format!("{x:.decimals$}")).to_string()
}

fn trim_fraction(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

pub fn trajectory_csv(summaries: &[RunSummary]) -> String {
    let mut out = String::from(TRAJECTORY_HEADER);
    out.push('\n');
    for s in summaries {
        for snap in &s.snapshots {
            writeln!(
                out,
                "{},{},{},{},{},{},{}",
                s.seed,
                snap.n,
                snap.max_degree,
                snap.max_count,
                snap.leader,
                snap.change_count,
                format_real(snap.scaled_metric)
            )
            .unwrap();
        }
    }
    out
}

pub fn summary_csv(aggregate: &[AggregateRow]) -> String {
    let mut out = String::from(SUMMARY_HEADER);
    out.push('\n');
    for row in aggregate {
        writeln!(
            out,
            "{},{},{},{}",
            row.n,
            format_real(row.median),
            format_real(row.min),
            format_real(row.max)
        )
        .unwrap();
    }
    out
}

fn write_file(dir: &Path, name: &str, contents: &str) -> Result<PathBuf> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let path = dir.join(name);
    fs::write(&path, contents).map_err(|e| Error::io(&path, e))?;
    Ok(path)
}

/// Writes `trajectory.csv` and `summary.csv` into `dir`.
pub fn emit_csv(summaries: &[RunSummary], aggregate: &[AggregateRow], dir: &Path) -> Result<Vec<PathBuf>> {
    Ok(vec![
        write_file(dir, "trajectory.csv", &trajectory_csv(summaries))?,
        write_file(dir, "summary.csv", &summary_csv(aggregate))?,
    ])
}

pub fn urn_csv(report: &UrnReport) -> String {
    let mut out = String::from("seed,n,black_fraction\n");
    for run in &report.runs {
        for &(n, frac) in &run.points {
            writeln!(out, "{},{},{}", run.seed, n, format_real(frac)).unwrap();
        }
    }
    out
}

pub fn emit_urn(report: &UrnReport, dir: &Path) -> Result<Vec<PathBuf>> {
    Ok(vec![
        write_file(dir, "urn.csv", &urn_csv(report))?,
        write_file(dir, "summary.csv", &summary_csv(&report.aggregate))?,
    ])
}

pub fn xstar_csv(r: &FixedPointResult) -> String {
    format!(
        "d,x_star,residual,derivative,iterations\n{},{},{},{},{}\n",
        r.d,
        format_real(r.x_star),
        format_real(r.residual),
        format_real(r.derivative),
        r.iterations
    )
}

pub fn exact_max_csv(dist: &ExactDistribution) -> String {
    let mut out = String::from("n,M,probability\n");
    for (m, p) in dist.max_law_f64() {
        writeln!(out, "{},{},{}", dist.n_target, m, format_real(p)).unwrap();
    }
    out
}

pub fn exact_multisets_csv(dist: &ExactDistribution) -> String {
    let mut out = String::from("n,degrees,probability\n");
    for (degrees, p) in dist.multisets_f64() {
        let degrees: Vec<String> = degrees.iter().map(u32::to_string).collect();
        writeln!(out, "{},{},{}", dist.n_target, degrees.join(" "), format_real(p)).unwrap();
    }
    out
}

pub fn table1_csv(table: &Table1) -> String {
    let mut out = String::from("attachment,rule,d,n,median_M,min_M,max_M,predicted_order,predicted_leading\n");
    for cell in &table.cells {
        let row = cell.final_row();
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            cell.attachment,
            cell.rule,
            table.d,
            row.n,
            format_real(row.median),
            format_real(row.min),
            format_real(row.max),
            cell.predicted_order,
            format_real(cell.predicted_leading)
        )
        .unwrap();
    }
    out
}

/// Median `M` of every cell at every checkpoint, long format.
pub fn table1_checkpoints_csv(table: &Table1) -> String {
    let mut out = String::from("attachment,rule,n,median_M,min_M,max_M\n");
    for cell in &table.cells {
        for row in &cell.by_checkpoint {
            writeln!(
                out,
                "{},{},{},{},{},{}",
                cell.attachment,
                cell.rule,
                row.n,
                format_real(row.median),
                format_real(row.min),
                format_real(row.max)
            )
            .unwrap();
        }
    }
    out
}

pub fn emit_table1(table: &Table1, dir: &Path) -> Result<Vec<PathBuf>> {
    Ok(vec![
        write_file(dir, "table1.csv", &table1_csv(table))?,
        write_file(dir, "table1_checkpoints.csv", &table1_checkpoints_csv(table))?,
    ])
}

pub fn hub_csv(report: &HubReport) -> String {
    let mut out = String::from("seed,n,leader,last_change_step,change_count\n");
    for row in &report.rows {
        for (&n, &leader) in report.checkpoints.iter().zip(&row.leaders) {
            writeln!(out, "{},{},{},{},{}", row.seed, n, leader, row.last_change_step, row.change_count).unwrap();
        }
    }
    out
}

pub fn hub_summary_csv(report: &HubReport) -> String {
    let mut out = String::from("n,fraction_stable\n");
    for (&n, &f) in report.checkpoints.iter().zip(&report.fraction_stable) {
        writeln!(out, "{},{}", n, format_real(f)).unwrap();
    }
    out
}

pub fn emit_hub_report(report: &HubReport, dir: &Path) -> Result<Vec<PathBuf>> {
    Ok(vec![
        write_file(dir, "hub.csv", &hub_csv(report))?,
        write_file(dir, "hub_summary.csv", &hub_summary_csv(report))?,
    ])
}

/// Writes whichever files belong to `output` into `dir`.
pub fn write_outputs(output: &ExperimentOutput, dir: &Path) -> Result<Vec<PathBuf>> {
    match output {
        ExperimentOutput::Grow(r) => emit_csv(&r.summaries, &r.aggregate, dir),
        ExperimentOutput::Urn(r) => emit_urn(r, dir),
        ExperimentOutput::XStar(r) => Ok(vec![write_file(dir, "xstar.csv", &xstar_csv(r))?]),
        ExperimentOutput::Exact(d) => Ok(vec![
            write_file(dir, "exact_max.csv", &exact_max_csv(d))?,
            write_file(dir, "exact_multisets.csv", &exact_multisets_csv(d))?,
        ]),
        ExperimentOutput::Table1(t) => emit_table1(t, dir),
        ExperimentOutput::Hub(h) => emit_hub_report(h, dir),
    }
}
