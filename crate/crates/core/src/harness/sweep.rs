//! The k-sweep: schedule, recovery over `E(ρ)`, `H^{−1}` assembly and the
//! reference bound for every `(k, δ)` pair.

use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::{Config, DeltaMode};
use super::plot::{loglog_svg, Series};
use super::schedule::{bound_value, parameter_schedule, ScheduleParams};
use crate::cauchy::{boundary_traces, cauchy_dist_proxy, BoundaryMesh};
use crate::cgo::{axis_zeta, build_cgo, CgoEvaluator, Derivatives};
use crate::error::{Error, Result};
use crate::recon::{assemble_hminus1, csv_err, write_estimates_csv, FrequencyBox, Reconstructor, TraceNoise};
use crate::reflection::{DomainSpec, Potential, Reflected};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StabilityRecord {
    pub schedule: ScheduleParams,
    /// Assembled `H^{−1}` estimate of `q₁ − q₂`.
    pub err_hminus1: f64,
    pub bound_value: f64,
    pub pairing_source: String,
    pub delta_mode: String,
    pub runtime_s: f64,
    /// Nodes of `E(ρ)` used.
    pub nodes: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RowFailure {
    pub k: f64,
    pub delta: f64,
    pub reason: String,
    pub exit_code: i32,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepOutcome {
    pub records: Vec<StabilityRecord>,
    pub failures: Vec<RowFailure>,
    pub csv_path: Option<PathBuf>,
    pub plot_path: Option<PathBuf>,
}

/// Cauchy-trace distance between the reflected solutions for `q₁` and `q₂`
/// built with the same `ζ = (√(k² + a²), ia, 0, …)`.
pub fn measured_delta(q1: &Potential, q2: &Potential, dom: &DomainSpec, k: f64, a: f64, cfg: &Config) -> Result<f64> {
    let res = &cfg.resolution;
    let opts = crate::cgo::CgoOptions { kappa: dom.kappa(), ..res.cgo() };
    let zeta = axis_zeta(dom.dim, k, a);
    let mesh = BoundaryMesh::gamma(dom, &res.quad());
    let traces = |q: &Potential| -> Result<_> {
        let sol = build_cgo(&q.even_extension()?, &zeta, k, &opts)?;
        let u = Reflected::new(CgoEvaluator::new(&sol, Derivatives::Full, res.spread));
        boundary_traces(&u, &mesh, k)
    };
    cauchy_dist_proxy(&traces(q1)?, &traces(q2)?, res.band)
}

/// Runs one `(k, δ)` row.
pub fn run_row(cfg: &Config, k: f64, delta: f64) -> Result<(StabilityRecord, Vec<crate::recon::FourierEstimate>)> {
    let start = Instant::now();
    let dom = cfg.domain_spec()?;
    let (q1, q2) = cfg.potentials()?;
    let sc = &cfg.schedule;
    let radius = sc.r.unwrap_or_else(|| dom.enclosing_radius());
    let mut opts = cfg.resolution.recon();
    let delta = match sc.delta_mode {
        DeltaMode::Noise => {
            opts.noise = Some(TraceNoise { delta, seed: sc.seed });
            delta
        }
        DeltaMode::Proxy => {
            // any admissible decay rate works for the matched pairs; a = max(k, 1/κ-floor)
            let a = k.max(1.05 * dom.kappa());
            let d = measured_delta(&q1, &q2, &dom, k, a, cfg)?;
            d.clamp(f64::MIN_POSITIVE, (-1f64).exp() * (1.0 - 1e-9))
        }
    };
    opts.delta = delta;
    let mut sched = parameter_schedule(k, delta, sc.s, dom.dim, sc.m, radius, sc.c0)?;
    if let Some(a) = sc.a {
        sched.a = a;
    }
    if let Some(rho) = sc.rho {
        sched.rho = rho;
    }
    if let Some(tau) = sc.tau {
        sched.tau = tau;
    }
    let fbox = FrequencyBox::new(dom.dim, sched.rho.max(1.0), cfg.resolution.cells)?;
    let recon = Reconstructor::new(&q1, &q2, &dom, &opts)?;
    let estimates = recon.estimate_box(&fbox, k, sched.a)?;
    let err = assemble_hminus1(&estimates, &fbox, recon.tail_constant())?;
    let record = StabilityRecord {
        schedule: sched,
        err_hminus1: err,
        bound_value: bound_value(k, delta, sched.alpha, sc.c),
        pairing_source: opts.source.tag().to_string(),
        delta_mode: sc.delta_mode.tag().to_string(),
        runtime_s: start.elapsed().as_secs_f64(),
        nodes: estimates.len(),
    };
    Ok((record, estimates))
}

/// `k,delta,a,tau,rho,alpha,err_hminus1,bound_value,pairing_source,runtime_s`.
pub fn write_sweep_csv(w: impl Write, records: &[StabilityRecord]) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["k", "delta", "a", "tau", "rho", "alpha", "err_hminus1", "bound_value", "pairing_source", "runtime_s"])
        .map_err(csv_err)?;
    for r in records {
        let s = &r.schedule;
        let nums = [s.k, s.delta, s.a, s.tau, s.rho, s.alpha, r.err_hminus1, r.bound_value];
        let mut row: Vec<String> = nums.iter().map(|v| format!("{v:.12e}")).collect();
        row.push(format!("{}/{}", r.pairing_source, r.delta_mode));
        row.push(format!("{:.3}", r.runtime_s));
        out.write_record(&row).map_err(csv_err)?;
    }
    out.flush()?;
    Ok(())
}

pub fn sweep_plot(records: &[StabilityRecord]) -> String {
    let mut deltas: Vec<f64> = records.iter().map(|r| r.schedule.delta).collect();
    deltas.sort_by(f64::total_cmp);
    deltas.dedup();
    let colors = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];
    let mut labels = Vec::new();
    for d in &deltas {
        labels.push((format!("error, δ={d:.1e}"), format!("bound, δ={d:.1e}"), *d));
    }
    let series: Vec<Series> = labels
        .iter()
        .enumerate()
        .flat_map(|(i, (le, lb, d))| {
            let rows: Vec<&StabilityRecord> = records.iter().filter(|r| r.schedule.delta == *d).collect();
            [
                Series { label: le, color: colors[(2 * i) % colors.len()], points: rows.iter().map(|r| (r.schedule.k, r.err_hminus1)).collect() },
                Series { label: lb, color: colors[(2 * i + 1) % colors.len()], points: rows.iter().map(|r| (r.schedule.k, r.bound_value)).collect() },
            ]
        })
        .collect();
    loglog_svg("H^-1 error and reference bound", "k", "value", &series)
}

/// Runs every `(k, δ)` row concurrently; rows come back ordered by `(k, δ)`.
/// Failed rows are reported and skipped.
pub fn run_sweep(cfg: &Config, write_files: bool) -> Result<SweepOutcome> {
    cfg.validate()?;
    let mut pairs: Vec<(f64, f64)> = Vec::new();
    let mut ks = cfg.schedule.k.clone();
    ks.sort_by(f64::total_cmp);
    let mut ds = cfg.schedule.delta.values();
    ds.sort_by(f64::total_cmp);
    for k in &ks {
        for d in &ds {
            pairs.push((*k, *d));
        }
    }
    let results: Vec<_> = pairs.par_iter().map(|(k, d)| (*k, *d, run_row(cfg, *k, *d))).collect();
    let mut records = Vec::new();
    let mut failures = Vec::new();
    let mut tables = Vec::new();
    for (k, delta, r) in results {
        match r {
            Ok((rec, est)) => {
                tables.push((k, delta, est));
                records.push(rec);
            }
            Err(e) => {
                eprintln!("row k={k} δ={delta:e} failed: {e}");
                failures.push(RowFailure { k, delta, reason: e.to_string(), exit_code: e.exit_code() });
            }
        }
    }
    let (mut csv_path, mut plot_path) = (None, None);
    if write_files {
        let dir = &cfg.output.dir;
        std::fs::create_dir_all(dir)?;
        let p = dir.join(&cfg.output.csv);
        write_sweep_csv(std::fs::File::create(&p)?, &records)?;
        csv_path = Some(p);
        let p = dir.join(&cfg.output.plot);
        std::fs::write(&p, sweep_plot(&records))?;
        plot_path = Some(p);
        if cfg.output.estimates {
            for (k, delta, est) in &tables {
                let p = dir.join(format!("estimates_k{k}_d{delta:e}.csv"));
                write_estimates_csv(std::fs::File::create(p)?, est)?;
            }
        }
    }
    if records.is_empty() && !failures.is_empty() {
        let first = &failures[0];
        return Err(match first.exit_code {
            2 => Error::Config(first.reason.clone()),
            4 => Error::IterationLimit { iterations: 0, gap: f64::NAN },
            _ => Error::ParameterRange(format!("every row failed; first: {}", first.reason)),
        });
    }
    Ok(SweepOutcome { records, failures, csv_path, plot_path })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_header_and_rows() {
        let sched = parameter_schedule(1.0, 1e-3, 0.25, 3, 1.0, 1.0, 1.0).unwrap();
        let rec = StabilityRecord {
            schedule: sched,
            err_hminus1: 0.5,
            bound_value: 1.0,
            pairing_source: "oracle".into(),
            delta_mode: "noise".into(),
            runtime_s: 0.1,
            nodes: 4,
        };
        let mut buf = Vec::new();
        write_sweep_csv(&mut buf, &[rec]).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), "k,delta,a,tau,rho,alpha,err_hminus1,bound_value,pairing_source,runtime_s");
        assert!(lines.next().unwrap().ends_with("oracle/noise,0.100"));
    }
}
