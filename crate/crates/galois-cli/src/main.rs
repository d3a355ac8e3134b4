use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use galois_cli::input::{load_group_data, parse_point, InputError};
use galois_cli::pipeline::{local_data, proposition, CertificateError, PipelineError, PipelineOptions};
use galois_cli::report::{c3, DualParamSummary, LocalRow, SCHEMA_VERSION};
use galois_cli::{load_curve, run_pipeline, svg};
use galois_core::algebra::to_c64_3;
use galois_core::curve::normalize_point;
use galois_core::localgeom::{branches_at, check_r_conditions, dual_parametrization_check, local_degree_check, multiplicity_at};
use serde::Serialize;

#[derive(Parser)]
#[command(name = "galois", version, about = "Monodromy of the dualizing covering of a plane curve")]
struct Cli {
    /// Worker threads for loop tracking (0 = all cores).
    #[arg(long, global = true, env = "GALOIS_THREADS", default_value_t = 0)]
    threads: usize,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Full pipeline: branch points, loops, generators, group and checks.
    Compute {
        #[arg(long)]
        curve: PathBuf,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        /// Report path; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        svg: Option<PathBuf>,
        /// Include wall-clock timings (makes the report non-reproducible).
        #[arg(long)]
        timings: bool,
        /// Re-track every loop with doubled samples and compare.
        #[arg(long)]
        double_check: bool,
    },
    /// Loop exchanging sheets I and J and fixing all others.
    Transpose {
        #[arg(long)]
        curve: PathBuf,
        #[arg(long)]
        i: usize,
        #[arg(long)]
        j: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Singular points, flexes and branch invariants, or the branches at one point.
    Local {
        #[arg(long)]
        curve: PathBuf,
        /// Projective point "x,y,z" with rational entries.
        #[arg(long)]
        point: Option<String>,
    },
    /// Lemma and proposition conditions on raw generators.
    CheckGroup {
        #[arg(long)]
        generators: PathBuf,
        #[arg(long)]
        partitions: PathBuf,
    },
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{0}")]
    Input(#[from] InputError),
    #[error("{0}")]
    Pipeline(#[from] PipelineError),
    #[error("{0}")]
    Local(#[from] galois_core::localgeom::LocalError),
    #[error("{0}")]
    Perm(#[from] galois_core::permgroup::PermError),
    #[error("cannot write {0}: {1}")]
    Write(PathBuf, std::io::Error),
    #[error("{0}")]
    Certificate(CertificateError),
    #[error("{0}")]
    Usage(String),
}

enum Outcome {
    Pass,
    Fail,
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::Write(p.to_path_buf(), e)),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

#[derive(Serialize)]
struct PointOut {
    point: [[f64; 2]; 3],
    #[serde(skip_serializing_if = "Option::is_none")]
    exact: Option<[String; 3]>,
    multiplicity: usize,
}

#[derive(Serialize)]
struct LocalOut {
    schema_version: &'static str,
    singular_points: Vec<PointOut>,
    flexes: Vec<PointOut>,
    branches: Vec<LocalRow>,
    r_conditions: [bool; 3],
    #[serde(skip_serializing_if = "Option::is_none")]
    dual_parametrization: Option<DualParamSummary>,
}

fn local(curve_path: &Path, point: Option<&str>) -> Result<Outcome, CliError> {
    let curve = load_curve(curve_path)?;
    let strs = |e: &[galois_core::algebra::QI; 3]| [e[0].to_string(), e[1].to_string(), e[2].to_string()];
    let out = match point {
        None => {
            let data = local_data(&curve)?;
            let r = check_r_conditions(&curve, &data.all_branches)?;
            let pt = |p: &galois_core::localgeom::CurvePoint| PointOut {
                point: c3(&p.point),
                exact: p.exact.as_ref().map(strs),
                multiplicity: multiplicity_at(&curve, &p.point, p.exact.as_ref()),
            };
            LocalOut {
                schema_version: SCHEMA_VERSION,
                singular_points: data.singular.iter().map(pt).collect(),
                flexes: data.flexes.iter().map(|(_, p)| pt(p)).collect(),
                branches: data.rows,
                r_conditions: [r.r0, r.r1, r.r2],
                dual_parametrization: None,
            }
        }
        Some(text) => {
            let exact = parse_point(text).ok_or_else(|| CliError::Usage(format!("cannot parse point {text:?}; expected \"x,y,z\"")))?;
            let x = normalize_point(&to_c64_3(&exact));
            let branches = branches_at(&curve, &x, Some(&exact))?;
            let r = check_r_conditions(&curve, &branches)?;
            let mut rows = Vec::new();
            let mut dual: Option<DualParamSummary> = None;
            for (k, b) in branches.iter().enumerate() {
                let rep = local_degree_check(b, 8, 1e-8);
                rows.push(LocalRow {
                    kind: "point".into(),
                    point: c3(&b.point),
                    exact: b.exact_point.as_ref().map(strs),
                    component: b.component + 1,
                    branch: k + 1,
                    r: b.r,
                    s: b.s,
                    tangent: c3(&b.tangent),
                    error: rep.as_ref().err().map(ToString::to_string),
                    local_degree: rep.ok().map(|rep| galois_cli::report::LocalDegreeSummary {
                        passes: rep.passes(),
                        near_q: rep.near_q,
                        on_fiber: rep.on_fiber,
                        near_section: rep.near_section,
                    }),
                });
                if b.r == 1 {
                    let rep = dual_parametrization_check(&curve, b, 16, 1e-9)?;
                    let d = dual.get_or_insert(DualParamSummary { points: 0, samples: 0, max_incidence: 0.0, max_tangency: 0.0, max_discriminant: 0.0 });
                    d.points += 1;
                    d.samples += rep.samples;
                    d.max_incidence = d.max_incidence.max(rep.incidence);
                    d.max_tangency = d.max_tangency.max(rep.tangency);
                    d.max_discriminant = d.max_discriminant.max(rep.discriminant);
                }
            }
            LocalOut {
                schema_version: SCHEMA_VERSION,
                singular_points: Vec::new(),
                flexes: Vec::new(),
                branches: rows,
                r_conditions: [r.r0, r.r1, r.r2],
                dual_parametrization: dual,
            }
        }
    };
    emit(None, &json(&out))?;
    let ok = out.branches.iter().all(|r| r.local_degree.as_ref().is_some_and(|l| l.passes)) && out.r_conditions.iter().all(|&c| c);
    Ok(if ok { Outcome::Pass } else { Outcome::Fail })
}

fn run(cli: Cli) -> Result<Outcome, CliError> {
    match cli.cmd {
        Cmd::Compute { curve, seed, tol, out, svg: svg_path, timings, double_check } => {
            let c = load_curve(&curve)?;
            let opts = PipelineOptions { seed, tol, threads: cli.threads, timings, sample_doubling: double_check };
            let run = run_pipeline(&c, &opts)?;
            let rep = &run.report;
            emit(out.as_deref(), &rep.to_json())?;
            if let Some(p) = svg_path {
                emit(Some(&p), &svg::render(rep))?;
            }
            eprintln!(
                "degree {}, {} branch points, group order {}, verdict {}, checks {}",
                rep.curve.degree,
                rep.branch_points.len(),
                rep.group.order,
                rep.verdict,
                if rep.checks.all() { "pass" } else { "FAIL" }
            );
            Ok(if rep.passes() { Outcome::Pass } else { Outcome::Fail })
        }
        Cmd::Transpose { curve, i, j, seed, tol, out } => {
            let c = load_curve(&curve)?;
            let opts = PipelineOptions { seed, tol, threads: cli.threads, ..PipelineOptions::default() };
            let run = run_pipeline(&c, &opts)?;
            match run.certificate(i, j) {
                Ok(cert) => {
                    emit(out.as_deref(), &json(&cert))?;
                    Ok(if cert.validated { Outcome::Pass } else { Outcome::Fail })
                }
                Err(e) if e.is_finding() => {
                    eprintln!("error: {e}");
                    Ok(Outcome::Fail)
                }
                Err(e) => Err(CliError::Certificate(e)),
            }
        }
        Cmd::Local { curve, point } => local(&curve, point.as_deref()),
        Cmd::CheckGroup { generators, partitions } => {
            let g = load_group_data(&generators, &partitions)?;
            let rep = proposition(&g.generators, &g.families, g.candidate.as_ref())?;
            emit(None, &json(&rep))?;
            Ok(if rep.passes { Outcome::Pass } else { Outcome::Fail })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(Outcome::Pass) => ExitCode::SUCCESS,
        Ok(Outcome::Fail) => ExitCode::from(2),
        Err(e) => {
            let code = match &e {
                CliError::Input(i) => format!(" [{}]", i.code()),
                _ => String::new(),
            };
            eprintln!("error{code}: {e}");
            ExitCode::from(1)
        }
    }
}
