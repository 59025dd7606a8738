//! Command-line front end.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::Error;
use crate::experiments::{gap_scan, recognize, DeformationFamily, Thresholds};
use crate::geometry::{first_fundamental, intrinsic_curvature, PointGeometry};
use crate::identities::{full_residual_suite, ResidualReport};
use crate::integrate::{energy_report, map_nodes, quadrature_nodes, QuadratureSpec};
use crate::jets::{fd_step, jet_selftest, DEFAULT_ORDER, MAX_ORDER};
use crate::surface::{build_surface, lagrangian_defect, ParamPoint, SurfaceAtlas, SurfaceSpec};

pub const EXIT_OK: i32 = 0;
pub const EXIT_TOLERANCE: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_SINGULAR: i32 = 3;

/// Smallest accepted `--nodes`.
pub const MIN_CLI_NODES: usize = 8;

#[derive(Debug, Parser)]
#[command(
    name = "lagrangian-lab",
    version,
    about = "Curvature, identity and energy checks for Lagrangian surfaces in C^2"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate every identity residual at the quadrature nodes.
    Verify(VerifyArgs),
    /// Integrate the curvature energies.
    Energy(EnergyArgs),
    /// Energies along a family of symplectic deformations of a closed seed.
    Scan(ScanArgs),
    /// Per-node curvature scalars.
    DefectMap(SurfaceArgs),
    /// Classify a surface as a plane, a Whitney sphere or neither.
    Recognize(RecognizeArgs),
    /// Compare jet derivatives of the immersion with finite differences.
    JetsSelftest(SelftestArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Args)]
pub struct SurfaceArgs {
    /// Surface spec file (JSON).
    #[arg(long)]
    pub spec: PathBuf,
    /// Quadrature nodes along the first parameter direction.
    #[arg(long, default_value_t = 32)]
    pub nodes: usize,
    /// Seed for pseudo-random point sets.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Write the report here instead of standard output.
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub surface: SurfaceArgs,
    /// Largest accepted relative residual.
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,
}

#[derive(Debug, Args)]
pub struct EnergyArgs {
    #[command(flatten)]
    pub surface: SurfaceArgs,
    /// Also integrate with doubled node counts and report the difference.
    #[arg(long)]
    pub richardson: bool,
}

#[derive(Debug, Args)]
pub struct RecognizeArgs {
    #[command(flatten)]
    pub surface: SurfaceArgs,
    /// Threshold on the energy of `A`.
    #[arg(long, default_value_t = 1e-6)]
    pub tau_a: f64,
    /// Threshold on the energy of `Ǎ`.
    #[arg(long = "tau-checka", default_value_t = 1e-6)]
    pub tau_check_a: f64,
}

#[derive(Debug, Args)]
pub struct SelftestArgs {
    #[command(flatten)]
    pub surface: SurfaceArgs,
    /// Largest accepted jet/finite-difference discrepancy.
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,
    /// Random interior points per chart.
    #[arg(long, default_value_t = 50)]
    pub points: usize,
    /// Jet order of the comparison.
    #[arg(long, default_value_t = DEFAULT_ORDER)]
    pub order: usize,
}

#[derive(Debug, Args)]
pub struct ScanArgs {
    /// Spec file of the closed seed surface.
    #[arg(long)]
    pub seed: PathBuf,
    /// Symplectomorphism spec with free parameter `t`.
    #[arg(long)]
    pub deform: PathBuf,
    /// Comma-separated deformation magnitudes.
    #[arg(long, value_delimiter = ',', required = true)]
    pub grid: Vec<f64>,
    /// Quadrature nodes along the first parameter direction.
    #[arg(long, default_value_t = 32)]
    pub nodes: usize,
    /// Also integrate with doubled node counts and report the difference.
    #[arg(long)]
    pub richardson: bool,
    /// Write the report here instead of standard output.
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

/// What a run produced: the report text and the process exit status.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub report: String,
    pub code: i32,
    /// Diagnostic for standard error.
    pub message: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::NotLagrangian { .. } => EXIT_TOLERANCE,
            Error::SingularEvaluation { .. } | Error::RankDeficient { .. } | Error::Jet(_) => {
                EXIT_SINGULAR
            }
            Error::OutsideChart { .. }
            | Error::InvalidParameter { .. }
            | Error::NotSymplectic(_)
            | Error::NotClosed(_)
            | Error::Parse(_) => EXIT_PARSE,
        };
        let message = match &e {
            Error::NotLagrangian { .. } => format!("lagrangian_defect: {e}"),
            _ => e.to_string(),
        };
        CliError { code, message }
    }
}

fn parse_error(message: String) -> CliError {
    CliError {
        code: EXIT_PARSE,
        message,
    }
}

fn read_file(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path)
        .map_err(|e| parse_error(format!("cannot read {}: {e}", path.display())))
}

pub fn load_spec(path: &Path) -> Result<(SurfaceSpec, SurfaceAtlas), CliError> {
    let text = read_file(path)?;
    let spec: SurfaceSpec =
        serde_json::from_str(&text).map_err(|e| parse_error(format!("{}: {e}", path.display())))?;
    let atlas = build_surface(&spec)?;
    Ok((spec, atlas))
}

fn quadrature(atlas: &SurfaceAtlas, nodes: usize) -> Result<QuadratureSpec, CliError> {
    if nodes < MIN_CLI_NODES {
        return Err(parse_error(format!(
            "invalid parameter `nodes`: must be >= {MIN_CLI_NODES}, got {nodes}"
        )));
    }
    Ok(QuadratureSpec::from_nodes(atlas, nodes)?)
}

fn check_tol(field: &str, tol: f64) -> Result<(), CliError> {
    if tol > 0.0 && tol.is_finite() {
        Ok(())
    } else {
        Err(parse_error(format!(
            "invalid parameter `{field}`: must be a positive number, got {tol}"
        )))
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

fn fmt_point(p: &Option<ParamPoint>) -> String {
    match p {
        Some(p) => format!("chart {} ({}, {})", p.chart, p.u, p.v),
        None => "no point".to_string(),
    }
}

#[derive(Debug, Serialize)]
struct VerifyOutput<'a> {
    surface_label: &'a str,
    nodes: [usize; 2],
    tol: f64,
    passed: bool,
    verdicts: BTreeMap<&'a str, &'static str>,
    report: &'a ResidualReport,
}

fn verify(args: &VerifyArgs) -> Result<Outcome, CliError> {
    check_tol("tol", args.tol)?;
    let (_, atlas) = load_spec(&args.surface.spec)?;
    let q = quadrature(&atlas, args.surface.nodes)?;
    let points: Vec<ParamPoint> = quadrature_nodes(&atlas, &q)
        .iter()
        .map(|n| n.point)
        .collect();
    let report = full_residual_suite(&atlas, &points)?;
    let failures = report.failures(args.tol);
    let verdicts = report
        .entries
        .iter()
        .map(|(k, e)| (k.as_str(), if e.passes(args.tol) { "pass" } else { "fail" }))
        .collect();
    let text = match args.surface.format.unwrap_or(Format::Json) {
        Format::Json => to_json(&VerifyOutput {
            surface_label: &report.surface_label,
            nodes: [q.n_u, q.n_v],
            tol: args.tol,
            passed: failures.is_empty(),
            verdicts,
            report: &report,
        }),
        Format::Csv => {
            let mut s = String::from("identity,max_abs,max_rel,chart,u,v,verdict\n");
            for (k, e) in &report.entries {
                let (c, u, v) = match e.argmax_point {
                    Some(p) => (
                        p.chart.to_string(),
                        format!("{:?}", p.u),
                        format!("{:?}", p.v),
                    ),
                    None => (String::new(), String::new(), String::new()),
                };
                let verdict = if e.passes(args.tol) { "pass" } else { "fail" };
                let _ = writeln!(
                    s,
                    "{k},{:?},{:?},{c},{u},{v},{verdict}",
                    e.max_abs, e.max_rel
                );
            }
            s
        }
    };
    let message = (!failures.is_empty()).then(|| {
        failures
            .iter()
            .map(|(k, e)| {
                format!(
                    "{k}: max_rel {:e} > {:e} at {}",
                    e.max_rel,
                    args.tol,
                    fmt_point(&e.argmax_point)
                )
            })
            .collect::<Vec<_>>()
            .join("\n")
    });
    Ok(Outcome {
        report: text,
        code: if failures.is_empty() {
            EXIT_OK
        } else {
            EXIT_TOLERANCE
        },
        message,
    })
}

fn energy(args: &EnergyArgs) -> Result<Outcome, CliError> {
    let (_, atlas) = load_spec(&args.surface.spec)?;
    let q = quadrature(&atlas, args.surface.nodes)?.with_richardson(args.richardson);
    let r = energy_report(&atlas, &q)?;
    let text = match args.surface.format.unwrap_or(Format::Json) {
        Format::Json => to_json(&r),
        Format::Csv => {
            let value = serde_json::to_value(r).expect("reports serialize");
            let mut s = String::from("quantity,value\n");
            if let serde_json::Value::Object(m) = value {
                for (k, v) in m {
                    let _ = writeln!(
                        s,
                        "{k},{}",
                        if v.is_null() {
                            String::new()
                        } else {
                            v.to_string()
                        }
                    );
                }
            }
            s
        }
    };
    Ok(Outcome {
        report: text,
        code: EXIT_OK,
        message: None,
    })
}

#[derive(Debug, Serialize)]
struct DefectRow {
    u: f64,
    v: f64,
    #[serde(rename = "K")]
    k: f64,
    #[serde(rename = "normH2")]
    norm_h2: f64,
    #[serde(rename = "normA2")]
    norm_a2: f64,
    #[serde(rename = "normCheckA2")]
    norm_check_a2: f64,
    #[serde(rename = "normT2")]
    norm_t2: f64,
    lagrangian_defect: f64,
}

fn defect_map(args: &SurfaceArgs) -> Result<Outcome, CliError> {
    let (_, atlas) = load_spec(&args.spec)?;
    let q = quadrature(&atlas, args.nodes)?;
    let nodes = quadrature_nodes(&atlas, &q);
    let rows = map_nodes(&nodes, |n| {
        let p = n.point;
        match PointGeometry::compute(&atlas, p) {
            Ok(pg) => Ok(DefectRow {
                u: p.u,
                v: p.v,
                k: pg.k_intrinsic,
                norm_h2: pg.norm_h2,
                norm_a2: pg.norm_a2,
                norm_check_a2: pg.norm_check_a2,
                norm_t2: pg.norm_t2,
                lagrangian_defect: pg.lagrangian_defect,
            }),
            Err(Error::NotLagrangian { .. }) => {
                let m = first_fundamental(&atlas, p)?;
                Ok(DefectRow {
                    u: p.u,
                    v: p.v,
                    k: intrinsic_curvature(&m.g, &m.gamma, &m.dgamma),
                    norm_h2: f64::NAN,
                    norm_a2: f64::NAN,
                    norm_check_a2: f64::NAN,
                    norm_t2: f64::NAN,
                    lagrangian_defect: lagrangian_defect(&atlas, p)?,
                })
            }
            Err(e) => Err(e),
        }
    })?;
    let text = match args.format.unwrap_or(Format::Csv) {
        Format::Csv => {
            let mut s = String::from("u,v,K,normH2,normA2,normCheckA2,normT2,lagrangian_defect\n");
            for r in &rows {
                let _ = writeln!(
                    s,
                    "{:?},{:?},{:?},{:?},{:?},{:?},{:?},{:?}",
                    r.u,
                    r.v,
                    r.k,
                    r.norm_h2,
                    r.norm_a2,
                    r.norm_check_a2,
                    r.norm_t2,
                    r.lagrangian_defect
                );
            }
            s
        }
        Format::Json => to_json(&rows),
    };
    Ok(Outcome {
        report: text,
        code: EXIT_OK,
        message: None,
    })
}

fn recognize_cmd(args: &RecognizeArgs) -> Result<Outcome, CliError> {
    check_tol("tau-a", args.tau_a)?;
    check_tol("tau-checka", args.tau_check_a)?;
    let (_, atlas) = load_spec(&args.surface.spec)?;
    let q = quadrature(&atlas, args.surface.nodes)?;
    let r = recognize(
        &atlas,
        &q,
        Thresholds {
            tau_a: args.tau_a,
            tau_check_a: args.tau_check_a,
        },
    )?;
    Ok(Outcome {
        report: to_json(&r),
        code: EXIT_OK,
        message: None,
    })
}

#[derive(Debug, Serialize)]
struct SelftestOutput {
    surface_label: String,
    order: usize,
    points: usize,
    max_discrepancy: f64,
    worst_point: Option<ParamPoint>,
    tol: f64,
    passed: bool,
}

/// `count` seeded points per chart, at least `10·h` inside the chart and
/// clear of its degenerate edges.
pub fn selftest_points(
    atlas: &SurfaceAtlas,
    order: usize,
    count: usize,
    seed: u64,
) -> Vec<ParamPoint> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let margin = 10.0 * fd_step(order.clamp(1, 3));
    let mut out = Vec::with_capacity(count * atlas.charts.len());
    for (ci, c) in atlas.charts.iter().enumerate() {
        let lo_hi = |k: usize| {
            let m = margin
                + if c.singular_edges[k] {
                    c.exclusion_margin
                } else {
                    0.0
                };
            (c.domain[k][0] + m, c.domain[k][1] - m)
        };
        let (u0, u1) = lo_hi(0);
        let (v0, v1) = lo_hi(1);
        for _ in 0..count {
            out.push(ParamPoint {
                chart: ci,
                u: rng.gen_range(u0..u1),
                v: rng.gen_range(v0..v1),
            });
        }
    }
    out
}

fn jets_selftest(args: &SelftestArgs) -> Result<Outcome, CliError> {
    check_tol("tol", args.tol)?;
    if args.order == 0 || args.order > MAX_ORDER {
        return Err(parse_error(format!(
            "invalid parameter `order`: must be in 1..={MAX_ORDER}"
        )));
    }
    let (_, atlas) = load_spec(&args.surface.spec)?;
    let pts = selftest_points(&atlas, args.order, args.points, args.surface.seed);
    let mut worst = 0.0;
    let mut worst_point = None;
    for p in &pts {
        let d = jet_selftest(&atlas, p.chart, p.uv(), args.order)?;
        if worst_point.is_none() || !(d <= worst) {
            worst = d;
            worst_point = Some(*p);
        }
    }
    let passed = worst <= args.tol;
    let out = SelftestOutput {
        surface_label: atlas.label.clone(),
        order: args.order,
        points: pts.len(),
        max_discrepancy: worst,
        worst_point,
        tol: args.tol,
        passed,
    };
    Ok(Outcome {
        report: to_json(&out),
        code: if passed { EXIT_OK } else { EXIT_TOLERANCE },
        message: (!passed).then(|| {
            format!(
                "jets-selftest: discrepancy {worst:e} > {:e} at {}",
                args.tol,
                fmt_point(&worst_point)
            )
        }),
    })
}

fn scan(args: &ScanArgs) -> Result<Outcome, CliError> {
    let (seed, atlas) = load_spec(&args.seed)?;
    let family = DeformationFamily::from_json(&read_file(&args.deform)?)
        .map_err(|e| parse_error(format!("{}: {e}", args.deform.display())))?;
    let q = quadrature(&atlas, args.nodes)?.with_richardson(args.richardson);
    let rows = gap_scan(&seed, &family, &args.grid, &q)?;
    let text = match args.format.unwrap_or(Format::Csv) {
        Format::Csv => {
            let mut s = String::from(crate::experiments::ScanRow::CSV_HEADER);
            s.push('\n');
            for r in &rows {
                s.push_str(&r.csv_line());
                s.push('\n');
            }
            s
        }
        Format::Json => to_json(&rows),
    };
    let failed: Vec<String> = rows
        .iter()
        .filter_map(|r| r.error.as_ref().map(|e| format!("t = {}: {e}", r.t)))
        .collect();
    Ok(Outcome {
        report: text,
        code: EXIT_OK,
        message: (!failed.is_empty()).then(|| failed.join("\n")),
    })
}

/// Executes one command. The report is returned rather than written.
pub fn run(cli: &Cli) -> Result<Outcome, CliError> {
    match &cli.command {
        Command::Verify(a) => verify(a),
        Command::Energy(a) => energy(a),
        Command::Scan(a) => scan(a),
        Command::DefectMap(a) => defect_map(a),
        Command::Recognize(a) => recognize_cmd(a),
        Command::JetsSelftest(a) => jets_selftest(a),
    }
}

/// The output path of a command, if any.
pub fn output_path(cli: &Cli) -> Option<&Path> {
    match &cli.command {
        Command::Verify(a) => a.surface.output.as_deref(),
        Command::Energy(a) => a.surface.output.as_deref(),
        Command::DefectMap(a) => a.output.as_deref(),
        Command::Recognize(a) => a.surface.output.as_deref(),
        Command::JetsSelftest(a) => a.surface.output.as_deref(),
        Command::Scan(a) => a.output.as_deref(),
    }
}

/// Parses `LAB_THREADS`; `None` means machine parallelism.
pub fn thread_cap(value: Option<&str>) -> Result<Option<usize>, CliError> {
    match value.map(str::trim) {
        None | Some("") => Ok(None),
        Some(s) => match s.parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(parse_error(format!(
                "LAB_THREADS must be a positive integer, got {s:?}"
            ))),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn write_spec(dir: &tempfile::TempDir, name: &str, body: &str) -> PathBuf {
        let p = dir.path().join(name);
        std::fs::write(&p, body).unwrap();
        p
    }

    fn parse(args: &[&str]) -> Cli {
        Cli::try_parse_from(std::iter::once("lagrangian-lab").chain(args.iter().copied())).unwrap()
    }

    #[test]
    fn exit_code_mapping() {
        let e: CliError = Error::Parse("x".into()).into();
        assert_eq!(e.code, EXIT_PARSE);
        let e: CliError = Error::RankDeficient {
            chart: 0,
            u: 0.0,
            v: 0.0,
            sqrt_det: 0.0,
        }
        .into();
        assert_eq!(e.code, EXIT_SINGULAR);
        let e: CliError = Error::NotLagrangian {
            u: 0.0,
            v: 0.0,
            defect: 1.0,
            limit: 1e-8,
        }
        .into();
        assert_eq!(e.code, EXIT_TOLERANCE);
        assert!(e.message.contains("lagrangian_defect"));
    }

    #[test]
    fn thread_cap_parsing() {
        assert_eq!(thread_cap(None).unwrap(), None);
        assert_eq!(thread_cap(Some("4")).unwrap(), Some(4));
        assert!(thread_cap(Some("0")).is_err());
        assert!(thread_cap(Some("many")).is_err());
    }

    #[test]
    fn malformed_spec_names_field() {
        let dir = tempfile::tempdir().unwrap();
        let p = write_spec(&dir, "bad.json", r#"{"kind":"whitney","radius":1.0}"#);
        let err = run(&parse(&["energy", "--spec", p.to_str().unwrap()])).unwrap_err();
        assert_eq!(err.code, EXIT_PARSE);
        assert!(err.message.contains("radius"), "{}", err.message);
        let p = write_spec(&dir, "neg.json", r#"{"kind":"whitney","r":-1.0}"#);
        let err = run(&parse(&["energy", "--spec", p.to_str().unwrap()])).unwrap_err();
        assert_eq!(err.code, EXIT_PARSE);
        assert!(err.message.contains("`r`"), "{}", err.message);
    }

    #[test]
    fn small_node_counts_are_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let p = write_spec(&dir, "t.json", r#"{"kind":"torus","a1":1.0,"a2":1.0}"#);
        let err = run(&parse(&[
            "energy",
            "--spec",
            p.to_str().unwrap(),
            "--nodes",
            "4",
        ]))
        .unwrap_err();
        assert_eq!(err.code, EXIT_PARSE);
    }

    #[test]
    fn energy_on_clifford_torus() {
        let dir = tempfile::tempdir().unwrap();
        let a = std::f64::consts::FRAC_1_SQRT_2;
        let p = write_spec(
            &dir,
            "t.json",
            &format!(r#"{{"kind":"torus","a1":{a},"a2":{a}}}"#),
        );
        let out = run(&parse(&[
            "energy",
            "--spec",
            p.to_str().unwrap(),
            "--nodes",
            "16",
        ]))
        .unwrap();
        assert_eq!(out.code, EXIT_OK);
        assert!(
            out.report.contains("\"E_checkA\": 19.739"),
            "{}",
            out.report
        );
    }

    #[test]
    fn verify_round_sphere_fails_on_lagrangian_defect() {
        let dir = tempfile::tempdir().unwrap();
        let p = write_spec(&dir, "s.json", r#"{"kind":"round_sphere","radius":1.0}"#);
        let out = run(&parse(&[
            "verify",
            "--spec",
            p.to_str().unwrap(),
            "--nodes",
            "8",
        ]))
        .unwrap();
        assert_eq!(out.code, EXIT_TOLERANCE);
        assert!(out.message.unwrap().contains("lagrangian_defect"));
    }

    #[test]
    fn defect_map_header_and_rows() {
        let dir = tempfile::tempdir().unwrap();
        let p = write_spec(&dir, "w.json", r#"{"kind":"whitney","r":1.0}"#);
        let out = run(&parse(&[
            "defect-map",
            "--spec",
            p.to_str().unwrap(),
            "--nodes",
            "8",
        ]))
        .unwrap();
        let lines: Vec<&str> = out.report.lines().collect();
        assert_eq!(
            lines[0],
            "u,v,K,normH2,normA2,normCheckA2,normT2,lagrangian_defect"
        );
        assert_eq!(lines.len(), 1 + 8 * 16);
    }

    #[test]
    fn scan_csv() {
        let dir = tempfile::tempdir().unwrap();
        let seed = write_spec(&dir, "w.json", r#"{"kind":"whitney","r":1.0}"#);
        let deform = write_spec(
            &dir,
            "d.json",
            r#"{"kind":"hshear","potential":[{"degrees":[2,1],"coeff":"t"}]}"#,
        );
        let out = run(&parse(&[
            "scan",
            "--seed",
            seed.to_str().unwrap(),
            "--deform",
            deform.to_str().unwrap(),
            "--grid",
            "0,0.1",
            "--nodes",
            "8",
        ]))
        .unwrap();
        let lines: Vec<&str> = out.report.lines().collect();
        assert_eq!(lines[0], "t,E_checkA,sup_checkA,sup_divT,E_A,quad_err");
        assert_eq!(lines.len(), 3);
        assert!(lines[1].starts_with("0.0,"));
    }

    #[test]
    fn selftest_on_gradient_graph() {
        let dir = tempfile::tempdir().unwrap();
        let p = write_spec(
            &dir,
            "g.json",
            r#"{"kind":"gradient_graph","potential":[{"degrees":[3,0],"coeff":0.5},{"degrees":[1,2],"coeff":-0.25}]}"#,
        );
        let out = run(&parse(&[
            "jets-selftest",
            "--spec",
            p.to_str().unwrap(),
            "--points",
            "5",
        ]))
        .unwrap();
        assert_eq!(out.code, EXIT_OK, "{}", out.report);
    }
}
