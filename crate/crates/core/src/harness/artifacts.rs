//! CSV and JSON writers. Floats are written with 17 significant digits so
//! every value reads back to the same double.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use serde::Serialize;

use crate::certificates::CertificateReport;
use crate::solvers::Trace;

pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

fn opt(v: Option<f64>) -> String {
    v.map(fmt_f64).unwrap_or_default()
}

fn csv_writer(path: &Path) -> std::io::Result<csv::Writer<BufWriter<File>>> {
    Ok(csv::Writer::from_writer(BufWriter::new(File::create(path)?)))
}

fn into_io(e: csv::Error) -> std::io::Error {
    match e.into_kind() {
        csv::ErrorKind::Io(e) => e,
        other => std::io::Error::other(format!("{other:?}")),
    }
}

/// Columns `k, step_norm, omega_residual, dist_to_xstar`; the last column is
/// present only when the problem has a known solution.
pub fn write_trace_csv(path: &Path, trace: &Trace) -> std::io::Result<()> {
    let with_dist = trace.records.iter().any(|r| r.dist_to_solution.is_some());
    let mut w = csv_writer(path)?;
    let mut header = vec!["k", "step_norm", "omega_residual"];
    if with_dist {
        header.push("dist_to_xstar");
    }
    w.write_record(&header).map_err(into_io)?;
    for r in &trace.records {
        let mut row = vec![r.k.to_string(), fmt_f64(r.step_norm), fmt_f64(r.omega_residual)];
        if with_dist {
            row.push(opt(r.dist_to_solution));
        }
        w.write_record(&row).map_err(into_io)?;
    }
    w.flush()
}

/// One row per sample of a flow, in the trace format with `t` in place of `k`.
pub struct FlowRow {
    pub t: f64,
    pub step_norm: f64,
    pub omega_residual: f64,
    pub dist_to_xstar: Option<f64>,
}

pub fn write_flow_csv(path: &Path, rows: &[FlowRow]) -> std::io::Result<()> {
    let with_dist = rows.iter().any(|r| r.dist_to_xstar.is_some());
    let mut w = csv_writer(path)?;
    let mut header = vec!["t", "step_norm", "omega_residual"];
    if with_dist {
        header.push("dist_to_xstar");
    }
    w.write_record(&header).map_err(into_io)?;
    for r in rows {
        let mut row = vec![fmt_f64(r.t), fmt_f64(r.step_norm), fmt_f64(r.omega_residual)];
        if with_dist {
            row.push(opt(r.dist_to_xstar));
        }
        w.write_record(&row).map_err(into_io)?;
    }
    w.flush()
}

/// Per-index certificate series: `k, lemma_slack, phi, descent_violation,
/// lower_bound_violation`. The final row carries `φ_N` only.
pub fn write_certificate_csv(path: &Path, rep: &CertificateReport) -> std::io::Result<()> {
    let mut w = csv_writer(path)?;
    w.write_record(["k", "warmup", "lemma_slack", "phi", "descent_violation", "lower_bound_violation"])
        .map_err(into_io)?;
    for (k, phi) in rep.phi.iter().enumerate() {
        w.write_record([
            k.to_string(),
            u8::from(k < rep.warmup).to_string(),
            opt(rep.lemma_slacks.get(k).copied()),
            fmt_f64(*phi),
            opt(rep.descent.violations.get(k).copied()),
            fmt_f64(rep.lower_bound_violations[k]),
        ])
        .map_err(into_io)?;
    }
    w.flush()
}

/// One row of a stepsize sweep.
#[derive(Debug, Clone, Serialize)]
pub struct SweepRow {
    pub method: String,
    pub lambda: f64,
    pub fraction: Option<f64>,
    /// `converged`, `max_iters` or `diverged`.
    pub status: String,
    pub iterations: usize,
    pub final_omega_residual: Option<f64>,
}

pub fn write_sweep_csv(path: &Path, rows: &[SweepRow]) -> std::io::Result<()> {
    let mut w = csv_writer(path)?;
    w.write_record(["method", "lambda", "fraction", "status", "iterations", "iterations_to_tol", "final_omega_residual"])
        .map_err(into_io)?;
    for r in rows {
        let to_tol = if r.status == "converged" { r.iterations.to_string() } else { String::new() };
        w.write_record([
            r.method.clone(),
            fmt_f64(r.lambda),
            opt(r.fraction),
            r.status.clone(),
            r.iterations.to_string(),
            to_tol,
            opt(r.final_omega_residual),
        ])
        .map_err(into_io)?;
    }
    w.flush()
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> std::io::Result<()> {
    let mut f = BufWriter::new(File::create(path)?);
    serde_json::to_writer_pretty(&mut f, value).map_err(std::io::Error::other)?;
    f.write_all(b"\n")?;
    f.flush()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problems::make_affine_instance;
    use crate::solvers::{run, Method, SolverConfig};
    use crate::Vector;

    #[test]
    fn trace_csv_round_trips_doubles() {
        let inst = make_affine_instance(5, 1, 0.8).unwrap();
        let p = inst.problem().unwrap();
        let t = run(&p, SolverConfig::new(Method::Bforb, 0.1, Vector::zeros(5)).max_iters(20)).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("t.csv");
        write_trace_csv(&path, &t).unwrap();
        let mut rd = csv::Reader::from_path(&path).unwrap();
        assert_eq!(rd.headers().unwrap(), vec!["k", "step_norm", "omega_residual", "dist_to_xstar"]);
        for (row, rec) in rd.records().zip(&t.records) {
            let row = row.unwrap();
            assert_eq!(row[0].parse::<usize>().unwrap(), rec.k);
            assert_eq!(row[1].parse::<f64>().unwrap().to_bits(), rec.step_norm.to_bits());
            assert_eq!(row[2].parse::<f64>().unwrap().to_bits(), rec.omega_residual.to_bits());
            assert_eq!(row[3].parse::<f64>().unwrap().to_bits(), rec.dist_to_solution.unwrap().to_bits());
        }
    }

    #[test]
    fn seventeen_significant_digits() {
        assert_eq!(fmt_f64(0.1), "1.0000000000000001e-1");
        assert_eq!(fmt_f64(0.0), "0.0000000000000000e0");
        for v in [std::f64::consts::PI, 1e-300, -2.5e17, f64::MIN_POSITIVE] {
            assert_eq!(fmt_f64(v).parse::<f64>().unwrap(), v);
        }
    }
}
