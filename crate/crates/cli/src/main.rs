//! `gfs`: exact Fourier coefficients and multiplier diagnostics from the shell.
//!
//! Every run writes `<out>.csv` and `<out>.meta.json`; the sidecar echoes
//! every parameter (defaults included) next to the headline results.

mod args;
mod inputs;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::Parser;
use serde_json::{json, Value};

use gfs_core::multiplier::{
    convergence_probe, lemma_decomposition, plateau_probe, ratio_sweep, t_n, u_n_functional,
    weighted_log_sum,
};
use gfs_core::ons::gram_matrix;
use gfs_core::report::{fmt_f64, DiagnosticsReport, ReportRow};
use gfs_core::subseq::{
    decay_check, hn_admissible, parseval_prefix, remapped_log_sum, select_subsequence_capped,
};
use gfs_core::{catalog, coefficient_vector, plateau, SystemId};

use args::{Cli, Command};

#[derive(Debug)]
enum Failure {
    Usage(String),
    Numeric(gfs_core::Error),
    Io(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Numeric(_) => 3,
            Failure::Io(_) => 1,
        }
    }
}

impl From<gfs_core::Error> for Failure {
    fn from(e: gfs_core::Error) -> Self {
        use gfs_core::Error::*;
        match e {
            Parse(m) | InvalidFunction(m) => Failure::Usage(m),
            other => Failure::Numeric(other),
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Usage(m) => write!(f, "usage error: {m}"),
            Failure::Numeric(e) => write!(f, "{e}"),
            Failure::Io(m) => write!(f, "i/o error: {m}"),
        }
    }
}

type Outcome<T> = Result<T, Failure>;

/// What a subcommand produced: the CSV body, extra results for the sidecar,
/// and optional additional JSON artifacts `(suffix, value)`.
struct Artifacts {
    stem: String,
    csv: String,
    results: Value,
    extra: Vec<(&'static str, Value)>,
}

fn thread_count(raw: &str) -> Outcome<usize> {
    raw.trim()
        .parse()
        .map_err(|_| Failure::Usage(format!("GFS_THREADS={raw:?} is not a count")))
}

fn configure_threads() -> Outcome<()> {
    let Ok(raw) = std::env::var("GFS_THREADS") else {
        return Ok(());
    };
    rayon::ThreadPoolBuilder::new()
        .num_threads(thread_count(&raw)?)
        .build_global()
        .map_err(|e| Failure::Usage(e.to_string()))
}

fn report_results(report: &DiagnosticsReport) -> Value {
    json!({
        "max_ratio": report.max_ratio(),
        "warnings": report.warnings,
        "consistent_with_convergence": report.consistent_with_convergence,
        "metadata": report.metadata,
    })
}

fn s_report(system: String, s: &[f64]) -> DiagnosticsReport {
    let rows = s
        .iter()
        .enumerate()
        .map(|(i, &v)| ReportRow {
            n: i + 1,
            s: Some(v),
            ..Default::default()
        })
        .collect();
    DiagnosticsReport {
        rows,
        metadata: gfs_core::report::ReportMetadata {
            system,
            ..Default::default()
        },
        ..Default::default()
    }
}

fn run(command: &Command) -> Outcome<Artifacts> {
    Ok(match command {
        Command::Coeffs(a) => {
            let (name, f) = inputs::function(&a.function)?;
            let cv = coefficient_vector(&f, &name, a.system, a.len)?;
            Artifacts {
                stem: cv.file_stem(),
                csv: cv.to_csv(),
                results: json!({ "bessel_sum": cv.bessel_sum(), "method": cv.method, "tol": cv.tol }),
                extra: vec![("json", serde_json::to_value(&cv).expect("serializable"))],
            }
        }
        Command::Gram(a) => {
            let g = gram_matrix(a.system, a.len)?;
            let mut csv = String::from("i,j,value\n");
            for i in 1..=a.len {
                for j in 1..=a.len {
                    csv.push_str(&format!("{i},{j},{}\n", fmt_f64(g.get(i, j))));
                }
            }
            Artifacts {
                stem: format!("gram__{}__N{}", a.system, a.len),
                csv,
                results: json!({ "max_deviation_from_identity": g.max_deviation_from_identity() }),
                extra: vec![],
            }
        }
        Command::Decay(a) => {
            let d = decay_check(a.system, a.len)?;
            Artifacts {
                stem: format!("decay__{}__N{}", a.system, a.len),
                csv: d.to_csv(),
                results: json!({ "max": d.max, "argmax": d.argmax }),
                extra: vec![],
            }
        }
        Command::Ratio(a) => {
            let weighting = a.weights.weighting()?;
            let len = a.n_list.iter().copied().max().unwrap_or(0);
            let seq = a.sequence.build(len)?;
            let mut report = ratio_sweep(&a.system, &weighting, seq.as_ref(), &a.n_list)?;
            report.metadata.sequence = Some(seq.descriptor.to_string());
            report.metadata.seed = a.sequence.seed_if_random();
            Artifacts {
                stem: format!(
                    "ratio__{}__{}",
                    a.system,
                    seq.descriptor.to_string().replace([':', ',', '='], "_")
                ),
                csv: report.to_csv(),
                results: report_results(&report),
                extra: vec![],
            }
        }
        Command::Logsum(a) => {
            let (name, f) = inputs::function(&a.function)?;
            let weighting = a.weights.weighting()?;
            let s = weighted_log_sum(&f, &a.system, &weighting, a.len)?;
            let mut report = s_report(a.system.to_string(), &s);
            report.metadata.function = Some(name.clone());
            report.metadata.multiplier = Some(weighting.multiplier.to_string());
            report.metadata.weight_mode = Some(weighting.mode.to_string());
            Artifacts {
                stem: format!("logsum__{name}__{}__N{}", a.system, a.len),
                csv: report.to_csv(),
                results: json!({ "S_N": s.last() }),
                extra: vec![],
            }
        }
        Command::Converge(a) => {
            let (name, f) = inputs::function(&a.function)?;
            let weighting = a.weights.weighting()?;
            let mut report = convergence_probe(&f, &a.system, &weighting, &a.n_list, a.grid_size)?;
            report.metadata.function = Some(name.clone());
            let mut results = report_results(&report);
            results["gaps"] = json!(report.gaps());
            Artifacts {
                stem: format!("converge__{name}__{}", a.system),
                csv: report.to_csv(),
                results,
                extra: vec![],
            }
        }
        Command::Lemma(a) => {
            let functions = match &a.function {
                Some(spec) => vec![inputs::function(spec)?],
                None => catalog()
                    .into_iter()
                    .map(|e| (e.name.to_string(), e.function))
                    .collect(),
            };
            let systems = match a.system {
                Some(s) => vec![s],
                None => vec![SystemId::TRIG, SystemId::WALSH, SystemId::HAAR],
            };
            let specs: Vec<String> = match &a.g {
                Some(g) => vec![g.clone()],
                None => (1..=8)
                    .map(|k| format!("phi:{k}"))
                    .chain(["pn:8".to_string()])
                    .collect(),
            };
            let mut csv = String::from("function,g,n,lhs,term1,term2,term3,residual\n");
            let mut worst = 0.0_f64;
            for (name, f) in &functions {
                for &system in &systems {
                    for spec in &specs {
                        let g = inputs::integrand(spec, f, system)?;
                        for &n in &a.n {
                            let d = lemma_decomposition(f, &g, n)?;
                            worst = worst.max(d.residual.abs());
                            csv.push_str(&format!(
                                "{name},{system}/{spec},{n},{},{},{},{},{}\n",
                                fmt_f64(d.lhs),
                                fmt_f64(d.term1),
                                fmt_f64(d.term2),
                                fmt_f64(d.term3),
                                fmt_f64(d.residual)
                            ));
                        }
                    }
                }
            }
            let rows = csv.lines().count() - 1;
            Artifacts {
                stem: "lemma".into(),
                csv,
                results: json!({ "rows": rows, "max_abs_residual": worst }),
                extra: vec![],
            }
        }
        Command::Plateau(a) => {
            let f = plateau(a.n, a.i)?;
            let mut csv = String::from("node,left,right\n");
            let (nodes, left, right) = (f.nodes(), f.left_values(), f.right_values());
            for (j, x) in nodes.iter().enumerate() {
                let l = j
                    .checked_sub(1)
                    .map(|k| fmt_f64(left[k]))
                    .unwrap_or_default();
                let r = right.get(j).map(|&v| fmt_f64(v)).unwrap_or_default();
                csv.push_str(&format!("{},{l},{r}\n", fmt_f64(*x)));
            }
            Artifacts {
                stem: format!("plateau__n{}__i{}", a.n, a.i),
                csv,
                results: json!({
                    "norm_A": f.norm_a()?,
                    "total_variation": f.total_variation(),
                    "sup_norm": f.sup_norm(),
                    "function": f,
                }),
                extra: vec![],
            }
        }
        Command::Probe(a) => {
            let weighting = a.weights.weighting()?;
            let seq = a.sequence.build(a.n)?;
            let p = plateau_probe(&a.system, &weighting, seq.as_ref(), a.n)?;
            let csv = format!(
                "n,i_n,G,T,per_cell,U,lower_bound\n{},{},{},{},{},{},{}\n",
                p.n,
                p.i_n,
                fmt_f64(p.g),
                fmt_f64(p.t),
                fmt_f64(p.per_cell),
                fmt_f64(p.u),
                fmt_f64(p.lower_bound)
            );
            Artifacts {
                stem: format!("probe__{}__n{}", a.system, a.n),
                csv,
                results: json!({ "sequence": seq.descriptor.to_string(), "i_n": p.i_n, "U": p.u, "lower_bound": p.lower_bound }),
                extra: vec![],
            }
        }
        Command::Subseq(a) => {
            let sel = select_subsequence_capped(a.system, a.count, a.cap)?;
            let sums = match &a.function {
                Some(spec) => {
                    let (_, f) = inputs::function(spec)?;
                    Some(remapped_log_sum(&f, &sel, &a.weights.weighting()?)?)
                }
                None => None,
            };
            let mut csv = String::from("k,n_k,witness,S\n");
            for (k, (n, w)) in sel.indices.iter().zip(&sel.witnesses).enumerate() {
                let s = sums.as_ref().map(|s| fmt_f64(s[k])).unwrap_or_default();
                csv.push_str(&format!("{},{n},{},{s}\n", k + 1, fmt_f64(*w)));
            }
            Artifacts {
                stem: format!("subseq__{}__K{}", a.system, a.count),
                csv,
                results: json!({ "indices": sel.indices, "remapped_log_sum": sums.as_ref().and_then(|s| s.last()) }),
                extra: vec![("json", serde_json::to_value(&sel).expect("serializable"))],
            }
        }
        Command::Parseval(a) => {
            let lens = if a.n_list.is_empty() {
                vec![a.len]
            } else {
                a.n_list.clone()
            };
            let mut csv = String::from("N,prefix\n");
            let mut last = 0.0;
            for &n in &lens {
                last = parseval_prefix(a.system, a.x, n)?;
                csv.push_str(&format!("{n},{}\n", fmt_f64(last)));
            }
            Artifacts {
                stem: format!("parseval__{}__x{}", a.system, a.x),
                csv,
                results: json!({ "prefix": last, "target": a.x.min(1.0) }),
                extra: vec![],
            }
        }
        Command::Un(a) => {
            let (name, f) = inputs::function(&a.function)?;
            let weighting = a.weights.weighting()?;
            let len = a.n_list.iter().copied().max().unwrap_or(0);
            let seq = a.sequence.build(len)?;
            let mut csv = String::from("n,U,T\n");
            for &n in &a.n_list {
                let u = u_n_functional(&f, &a.system, &weighting, seq.as_ref(), n)?;
                let t = t_n(&weighting, seq.as_ref(), n)?;
                csv.push_str(&format!("{n},{},{}\n", fmt_f64(u), fmt_f64(t)));
            }
            Artifacts {
                stem: format!("un__{name}__{}", a.system),
                csv,
                results: json!({ "sequence": seq.descriptor.to_string() }),
                extra: vec![],
            }
        }
        Command::Admissible(a) => {
            let h = inputs::multiplier(&a.h)?;
            let adm = hn_admissible(&h, a.len)?;
            let mut csv = String::from("n,margin\n");
            for (i, m) in adm.margins.iter().enumerate() {
                csv.push_str(&format!("{},{}\n", i + 1, fmt_f64(*m)));
            }
            Artifacts {
                stem: format!("admissible__N{}", a.len),
                csv,
                results: json!({ "admissible": adm.admissible, "constant": adm.constant }),
                extra: vec![],
            }
        }
    })
}

fn write(path: &Path, body: &str) -> Outcome<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| Failure::Io(format!("{}: {e}", dir.display())))?;
    }
    fs::write(path, body).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn with_suffix(base: &Path, suffix: &str) -> PathBuf {
    let mut s = base.as_os_str().to_owned();
    s.push(".");
    s.push(suffix);
    PathBuf::from(s)
}

/// Runs one subcommand and writes its files; returns the CSV path.
fn execute(command: &Command) -> Outcome<PathBuf> {
    let art = run(command)?;
    let base = command
        .out()
        .cloned()
        .unwrap_or_else(|| PathBuf::from(&art.stem));
    write(&with_suffix(&base, "csv"), &art.csv)?;
    for (suffix, value) in &art.extra {
        write(
            &with_suffix(&base, suffix),
            &(serde_json::to_string_pretty(value).expect("json") + "\n"),
        )?;
    }
    let meta = json!({
        "tool": "gfs",
        "version": env!("CARGO_PKG_VERSION"),
        "invocation": command,
        "results": art.results,
    });
    write(
        &with_suffix(&base, "meta.json"),
        &(serde_json::to_string_pretty(&meta).expect("json") + "\n"),
    )?;
    Ok(with_suffix(&base, "csv"))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match configure_threads().and_then(|()| execute(&cli.command)) {
        Ok(csv) => {
            println!("{}", csv.display());
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("gfs: {e}");
            ExitCode::from(e.code())
        }
    }
}
