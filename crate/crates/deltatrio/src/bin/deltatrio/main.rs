//! Command-line interface to the three-particle delta-interaction solver.
//!
//! Subcommands: `solve` (bound states per sector), `critical` (one
//! critical-charge point), `curve` (critical-charge sweep, CSV/SVG),
//! `k00` (threshold kernel value), `verify` (self-check suite),
//! `kernel-dump` (discretized kernel matrix as CSV).
//!
//! Exit codes: 0 success, 1 computation error or failed verification,
//! 2 usage/validation error. `SKELETON_THREADS` caps worker threads.

mod svg;

use clap::{Args, Parser, Subcommand, ValueEnum};
use deltatrio::critical;
use deltatrio::geometry::{derive_geometry, mass_ratio_from_theta12, ModelParams};
use deltatrio::kernels::{self, KernelSpec, Parity};
use deltatrio::quadrature::{build_grid, MapKind, QuadratureConfig};
use deltatrio::sectors::{self, SectorId, SolveConfig};
use deltatrio::verify::{self, GridOracleConfig, VerifyConfig};
use deltatrio::Error;
use serde_json::json;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

#[derive(Parser)]
#[command(
    name = "deltatrio",
    version,
    about = "Bound states of three 1-D charged particles with delta interactions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Find bound states per symmetry sector.
    Solve(SolveArgs),
    /// Critical-charge upper bound at one angle or mass ratio.
    Critical(CriticalArgs),
    /// Sweep the critical-charge curve over the angle axis.
    Curve(CurveArgs),
    /// Threshold kernel value K(0,0) with its two terms.
    K00(K00Args),
    /// Run the verification suite.
    Verify(VerifyArgs),
    /// Dump a discretized kernel matrix as CSV.
    KernelDump(KernelDumpArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Svg,
}

#[derive(Args)]
struct OutputArgs {
    /// Output file; stdout when omitted.
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// Suppress the timestamp in the metadata header.
    #[arg(long)]
    no_meta: bool,
}

#[derive(Args)]
struct SolveArgs {
    /// Mass ratio M/m; accepts "inf".
    #[arg(long, allow_negative_numbers = true)]
    mass_ratio: f64,
    /// Charge Z of the third particle (units of e).
    #[arg(long, allow_negative_numbers = true)]
    charge: f64,
    /// Sector to solve (PP, MP, PM, MM); all four when omitted.
    #[arg(long)]
    sector: Option<String>,
    /// Half-line grid size; default 200, raised to 400 for wide angles
    /// (theta12 > 0.85 pi).
    #[arg(long)]
    grid_n: Option<usize>,
    /// Scale of the half-line map.
    #[arg(long, default_value_t = 2.0)]
    grid_scale: f64,
    /// Upper end of the k scan.
    #[arg(long, default_value_t = 10.0)]
    k_max: f64,
    /// Root tolerance on the skeleton eigenvalue.
    #[arg(long, default_value_t = 1e-12)]
    tol: f64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args)]
struct CriticalArgs {
    /// Angle between the attractive lines, radians in [pi/2, pi).
    #[arg(long, conflicts_with = "mass_ratio")]
    theta12: Option<f64>,
    /// Mass ratio M/m; accepts "inf".
    #[arg(long, allow_negative_numbers = true)]
    mass_ratio: Option<f64>,
    /// Absolute tolerance on K(0,0) at the root.
    #[arg(long, default_value_t = 1e-13)]
    quad_tol: f64,
    /// Also compute the root in extended (double-double) precision.
    #[arg(long)]
    extended: bool,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args)]
struct CurveArgs {
    #[arg(long)]
    theta_min: f64,
    #[arg(long)]
    theta_max: f64,
    /// Number of sweep points (inclusive endpoints).
    #[arg(long)]
    steps: usize,
    #[arg(long, default_value_t = 1e-11)]
    quad_tol: f64,
    /// csv, json, or svg (svg also writes a CSV sidecar).
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args)]
struct K00Args {
    #[arg(long, conflicts_with = "mass_ratio")]
    theta12: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    mass_ratio: Option<f64>,
    /// Charge Z (units of e).
    #[arg(long, allow_negative_numbers = true)]
    charge: f64,
    #[arg(long, default_value_t = 1e-13)]
    quad_tol: f64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args)]
struct VerifyArgs {
    /// Half-line grid size for the operator checks.
    #[arg(long, default_value_t = 400)]
    grid_n: usize,
    /// Write the JSON report here.
    #[arg(long)]
    report: Option<PathBuf>,
    /// Skip the 2-D finite-difference oracle comparison.
    #[arg(long)]
    no_oracle: bool,
    /// Oracle mesh points per axis.
    #[arg(long, default_value_t = 301)]
    oracle_mesh: usize,
    /// Oracle box half-width.
    #[arg(long, default_value_t = 30.0)]
    oracle_box: f64,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum KernelChoice {
    /// Diagonal symbol 1/sqrt(p^2+2) (as a diagonal matrix).
    T0,
    /// Even parity block at --theta.
    Even,
    /// Odd parity block at --theta.
    Odd,
    /// Threshold-scaled odd kernel at the equal-mass angle.
    TildeMm,
}

#[derive(Args)]
struct KernelDumpArgs {
    #[arg(long, value_enum)]
    kernel: KernelChoice,
    /// Angle in radians (required for even/odd).
    #[arg(long)]
    theta: Option<f64>,
    #[arg(long, default_value_t = 200)]
    grid_n: usize,
    #[arg(long, default_value_t = 2.0)]
    grid_scale: f64,
    #[command(flatten)]
    out: OutputArgs,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(msg) = configure_threads() {
        eprintln!("error: {msg}");
        return ExitCode::from(2);
    }
    let result = match cli.command {
        Command::Solve(args) => cmd_solve(args),
        Command::Critical(args) => cmd_critical(args),
        Command::Curve(args) => cmd_curve(args),
        Command::K00(args) => cmd_k00(args),
        Command::Verify(args) => cmd_verify(args),
        Command::KernelDump(args) => cmd_kernel_dump(args),
    };
    match result {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            match err {
                Error::InvalidParameter(_) => ExitCode::from(2),
                _ => ExitCode::FAILURE,
            }
        }
    }
}

fn configure_threads() -> Result<(), String> {
    if let Ok(raw) = std::env::var("SKELETON_THREADS") {
        let n: usize = raw
            .parse()
            .map_err(|_| format!("SKELETON_THREADS must be a positive integer, got '{raw}'"))?;
        if n == 0 {
            return Err("SKELETON_THREADS must be at least 1".to_string());
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| e.to_string())?;
    }
    Ok(())
}

/// 17-significant-digit fixed formatting for CSV payloads.
fn fmt17(x: f64) -> String {
    if x.is_nan() {
        "nan".to_string()
    } else if x.is_infinite() {
        if x > 0.0 {
            "inf".to_string()
        } else {
            "-inf".to_string()
        }
    } else {
        format!("{x:.16e}")
    }
}

fn mass_ratio_json(mu: f64) -> serde_json::Value {
    if mu.is_finite() {
        json!(mu)
    } else {
        json!("inf")
    }
}

fn meta_line(no_meta: bool, command: &str, config: &str) -> Option<String> {
    if no_meta {
        return None;
    }
    let now = std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    Some(format!(
        "# deltatrio {command} {config} generated_unix={now}"
    ))
}

fn meta_json(no_meta: bool, command: &str, config: serde_json::Value) -> serde_json::Value {
    let mut meta = json!({
        "tool": "deltatrio",
        "command": command,
        "config": config,
    });
    if !no_meta {
        let now = std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        meta["generated_unix"] = json!(now);
    }
    meta
}

fn write_output(out: &OutputArgs, content: &str) -> deltatrio::Result<()> {
    match &out.output {
        Some(path) => std::fs::write(path, content)
            .map_err(|e| Error::InvalidParameter(format!("cannot write {}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(content.as_bytes())
                .map_err(|e| Error::InvalidParameter(format!("cannot write stdout: {e}")))
        }
    }
}

/// Default grid size, raised for wide angles where the kernels sharpen.
fn effective_grid_n(requested: Option<usize>, theta12: f64) -> usize {
    requested.unwrap_or(if theta12 > 0.85 * std::f64::consts::PI {
        400
    } else {
        200
    })
}

fn cmd_solve(args: SolveArgs) -> deltatrio::Result<ExitCode> {
    let params = ModelParams::new(args.mass_ratio, args.charge)?;
    let geometry = derive_geometry(&params);
    let requested: Vec<SectorId> = match &args.sector {
        Some(s) => vec![s.parse()?],
        None => SectorId::all().to_vec(),
    };
    let grid_n = effective_grid_n(args.grid_n, geometry.theta12);
    let grid = Arc::new(build_grid(&QuadratureConfig {
        n_points: grid_n,
        map_scale: args.grid_scale,
        ..Default::default()
    })?);
    let mut sector_blocks = Vec::new();
    for sector in &requested {
        let skeleton = sectors::build_sector(&geometry, *sector, &grid)?;
        let states = sectors::solve_bound_states_with(
            &skeleton,
            &SolveConfig {
                k_max: args.k_max,
                tol: args.tol,
                ..Default::default()
            },
        )?;
        sector_blocks.push((*sector, states));
    }
    let config_json = json!({
        "mass_ratio": mass_ratio_json(args.mass_ratio),
        "Z": args.charge,
        "grid_n": grid_n,
        "grid_scale": args.grid_scale,
        "k_max": args.k_max,
        "tol": args.tol,
    });
    let content = match args.format {
        Format::Json => {
            let sectors_json: Vec<serde_json::Value> = sector_blocks
                .iter()
                .map(|(sector, states)| {
                    let records: Vec<serde_json::Value> = states
                        .iter()
                        .map(|s| {
                            json!({
                                "sector": sector.to_string(),
                                "mass_ratio": mass_ratio_json(args.mass_ratio),
                                "Z": args.charge,
                                "k_star": s.k_star,
                                "E_dimensionless": s.energy_dimensionless,
                                "E_physical": s.energy_physical,
                                "multiplicity": s.multiplicity,
                                "grid_n": grid_n,
                            })
                        })
                        .collect();
                    if records.is_empty() {
                        json!({
                            "sector": sector.to_string(),
                            "bound_states": [],
                            "note": "no bound state",
                        })
                    } else {
                        json!({
                            "sector": sector.to_string(),
                            "bound_states": records,
                        })
                    }
                })
                .collect();
            let doc = json!({
                "meta": meta_json(args.out.no_meta, "solve", config_json),
                "sectors": sectors_json,
            });
            format!("{}\n", serde_json::to_string_pretty(&doc).unwrap())
        }
        Format::Csv => {
            let mut lines = Vec::new();
            if let Some(meta) = meta_line(
                args.out.no_meta,
                "solve",
                &format!(
                    "mass_ratio={} Z={} grid_n={grid_n} k_max={} tol={:e}",
                    args.mass_ratio, args.charge, args.k_max, args.tol
                ),
            ) {
                lines.push(meta);
            }
            lines.push(
                "sector,mass_ratio,Z,k_star,E_dimensionless,E_physical,multiplicity,grid_n,note"
                    .to_string(),
            );
            for (sector, states) in &sector_blocks {
                if states.is_empty() {
                    lines.push(format!(
                        "{sector},{},{},,,,,{grid_n},no bound state",
                        fmt17(args.mass_ratio),
                        fmt17(args.charge)
                    ));
                }
                for s in states {
                    lines.push(format!(
                        "{sector},{},{},{},{},{},{},{grid_n},",
                        fmt17(args.mass_ratio),
                        fmt17(args.charge),
                        fmt17(s.k_star),
                        fmt17(s.energy_dimensionless),
                        fmt17(s.energy_physical),
                        s.multiplicity
                    ));
                }
            }
            lines.join("\n") + "\n"
        }
        Format::Svg => {
            return Err(Error::InvalidParameter(
                "svg output applies to the curve subcommand only".to_string(),
            ))
        }
    };
    write_output(&args.out, &content)?;
    Ok(ExitCode::SUCCESS)
}

fn resolve_theta(theta12: Option<f64>, mass_ratio: Option<f64>) -> deltatrio::Result<f64> {
    match (theta12, mass_ratio) {
        (Some(theta), None) => {
            mass_ratio_from_theta12(theta)?;
            Ok(theta)
        }
        (None, Some(mu)) => {
            let params = ModelParams::new(mu, 1.0)?;
            Ok(derive_geometry(&params).theta12)
        }
        _ => Err(Error::InvalidParameter(
            "provide exactly one of --theta12 or --mass-ratio".to_string(),
        )),
    }
}

fn cmd_critical(args: CriticalArgs) -> deltatrio::Result<ExitCode> {
    let theta12 = resolve_theta(args.theta12, args.mass_ratio)?;
    let point = critical::z_critical_ub(theta12, args.quad_tol)?;
    let extended = if args.extended {
        Some(critical::z_critical_ub_dd(point.mass_ratio, 128)?.to_decimal_string(21))
    } else {
        None
    };
    let config_json = json!({ "theta12": theta12, "quad_tol": args.quad_tol });
    let content = match args.format {
        Format::Json => {
            let mut doc = json!({
                "meta": meta_json(args.out.no_meta, "critical", config_json),
                "theta12_rad": point.theta12,
                "mass_ratio": mass_ratio_json(point.mass_ratio),
                "z_c_ub": point.z_c_ub,
                "k00_residual": point.k00_at_root,
                "quad_tol": point.quad_tol,
            });
            if let Some(ext) = extended {
                doc["z_c_ub_extended"] = json!(ext);
            }
            format!("{}\n", serde_json::to_string_pretty(&doc).unwrap())
        }
        Format::Csv => {
            let mut lines = Vec::new();
            if let Some(meta) = meta_line(
                args.out.no_meta,
                "critical",
                &format!("theta12={theta12} quad_tol={:e}", args.quad_tol),
            ) {
                lines.push(meta);
            }
            let ext_header = if extended.is_some() {
                ",z_c_ub_extended"
            } else {
                ""
            };
            lines.push(format!(
                "theta12_rad,mass_ratio,z_c_ub,k00_residual,quad_tol{ext_header}"
            ));
            let ext_value = extended.map(|e| format!(",{e}")).unwrap_or_default();
            lines.push(format!(
                "{},{},{},{},{}{ext_value}",
                fmt17(point.theta12),
                fmt17(point.mass_ratio),
                fmt17(point.z_c_ub),
                fmt17(point.k00_at_root),
                fmt17(point.quad_tol)
            ));
            lines.join("\n") + "\n"
        }
        Format::Svg => {
            return Err(Error::InvalidParameter(
                "svg output applies to the curve subcommand only".to_string(),
            ))
        }
    };
    write_output(&args.out, &content)?;
    Ok(ExitCode::SUCCESS)
}

fn curve_csv(points: &[critical::CurvePoint], meta: Option<String>) -> String {
    let mut lines = Vec::new();
    if let Some(meta) = meta {
        lines.push(meta);
    }
    lines.push("theta12_rad,mass_ratio,z_c_ub,k00_residual,quad_tol".to_string());
    for entry in points {
        match &entry.point {
            Ok(p) => lines.push(format!(
                "{},{},{},{},{}",
                fmt17(p.theta12),
                fmt17(p.mass_ratio),
                fmt17(p.z_c_ub),
                fmt17(p.k00_at_root),
                fmt17(p.quad_tol)
            )),
            Err(err) => lines.push(format!(
                "{},nan,nan,nan,nan # {}",
                fmt17(entry.theta12),
                err
            )),
        }
    }
    lines.join("\n") + "\n"
}

fn cmd_curve(args: CurveArgs) -> deltatrio::Result<ExitCode> {
    let points =
        critical::critical_curve(args.theta_min, args.theta_max, args.steps, args.quad_tol)?;
    let meta = meta_line(
        args.out.no_meta,
        "curve",
        &format!(
            "theta_min={} theta_max={} steps={} quad_tol={:e}",
            args.theta_min, args.theta_max, args.steps, args.quad_tol
        ),
    );
    match args.format {
        Format::Csv => {
            write_output(&args.out, &curve_csv(&points, meta))?;
        }
        Format::Json => {
            let rows: Vec<serde_json::Value> = points
                .iter()
                .map(|entry| match &entry.point {
                    Ok(p) => json!({
                        "theta12_rad": p.theta12,
                        "mass_ratio": mass_ratio_json(p.mass_ratio),
                        "z_c_ub": p.z_c_ub,
                        "k00_residual": p.k00_at_root,
                        "quad_tol": p.quad_tol,
                    }),
                    Err(e) => json!({
                        "theta12_rad": entry.theta12,
                        "error": e.to_string(),
                    }),
                })
                .collect();
            let doc = json!({
                "meta": meta_json(
                    args.out.no_meta,
                    "curve",
                    json!({
                        "theta_min": args.theta_min,
                        "theta_max": args.theta_max,
                        "steps": args.steps,
                        "quad_tol": args.quad_tol,
                    })
                ),
                "points": rows,
            });
            write_output(
                &args.out,
                &format!("{}\n", serde_json::to_string_pretty(&doc).unwrap()),
            )?;
        }
        Format::Svg => {
            let path = args.out.output.clone().ok_or_else(|| {
                Error::InvalidParameter("svg output requires --output".to_string())
            })?;
            let xy: Vec<(f64, f64)> = points
                .iter()
                .filter_map(|e| e.point.as_ref().ok().map(|p| (p.theta12, p.z_c_ub)))
                .collect();
            let svg = svg::line_plot(
                &xy,
                &svg::PlotSpec {
                    title: "Critical-charge upper bound",
                    x_label: "theta12 (rad)",
                    y_label: "Z_c^ub",
                },
            );
            std::fs::write(&path, svg).map_err(|e| {
                Error::InvalidParameter(format!("cannot write {}: {e}", path.display()))
            })?;
            let sidecar = path.with_extension("csv");
            std::fs::write(&sidecar, curve_csv(&points, meta)).map_err(|e| {
                Error::InvalidParameter(format!("cannot write {}: {e}", sidecar.display()))
            })?;
        }
    }
    let all_ok = points.iter().all(|p| p.point.is_ok());
    Ok(if all_ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    })
}

fn cmd_k00(args: K00Args) -> deltatrio::Result<ExitCode> {
    let theta12 = resolve_theta(args.theta12, args.mass_ratio)?;
    if !(args.charge > 0.0 && args.charge.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "charge must be positive and finite, got {}",
            args.charge
        )));
    }
    let eval = critical::k00_at_charge(theta12, args.charge, args.quad_tol)?;
    let config_json = json!({
        "theta12": theta12,
        "Z": args.charge,
        "quad_tol": args.quad_tol,
    });
    let content = match args.format {
        Format::Json => {
            let doc = json!({
                "meta": meta_json(args.out.no_meta, "k00", config_json),
                "value": eval.value,
                "direct_term": eval.direct_term,
                "schur_term": eval.schur_term,
                "quad_tol": eval.tol,
            });
            format!("{}\n", serde_json::to_string_pretty(&doc).unwrap())
        }
        Format::Csv => {
            let mut lines = Vec::new();
            if let Some(meta) = meta_line(
                args.out.no_meta,
                "k00",
                &format!(
                    "theta12={theta12} Z={} quad_tol={:e}",
                    args.charge, args.quad_tol
                ),
            ) {
                lines.push(meta);
            }
            lines.push("theta12_rad,Z,value,direct_term,schur_term,quad_tol".to_string());
            lines.push(format!(
                "{},{},{},{},{},{}",
                fmt17(theta12),
                fmt17(args.charge),
                fmt17(eval.value),
                fmt17(eval.direct_term),
                fmt17(eval.schur_term),
                fmt17(eval.tol)
            ));
            lines.join("\n") + "\n"
        }
        Format::Svg => {
            return Err(Error::InvalidParameter(
                "svg output applies to the curve subcommand only".to_string(),
            ))
        }
    };
    write_output(&args.out, &content)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(args: VerifyArgs) -> deltatrio::Result<ExitCode> {
    let config = VerifyConfig {
        grid_n: args.grid_n,
        quad_tol: 1e-12,
        oracle: (!args.no_oracle).then_some(GridOracleConfig {
            mesh: args.oracle_mesh,
            box_half_width: args.oracle_box,
            ..Default::default()
        }),
    };
    let reports = verify::run_all(&config)?;
    for report in &reports {
        let status = if report.passed { "PASS" } else { "FAIL" };
        println!("{status}: {} — computed {:?}", report.name, report.computed);
    }
    if let Some(path) = &args.report {
        let doc = json!({
            "config": {
                "grid_n": args.grid_n,
                "oracle_mesh": (!args.no_oracle).then_some(args.oracle_mesh),
            },
            "all_passed": verify::all_passed(&reports),
            "checks": reports,
        });
        std::fs::write(
            path,
            format!("{}\n", serde_json::to_string_pretty(&doc).unwrap()),
        )
        .map_err(|e| Error::InvalidParameter(format!("cannot write {}: {e}", path.display())))?;
    }
    Ok(if verify::all_passed(&reports) {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    })
}

fn cmd_kernel_dump(args: KernelDumpArgs) -> deltatrio::Result<ExitCode> {
    let grid = Arc::new(build_grid(&QuadratureConfig {
        n_points: args.grid_n,
        map_scale: args.grid_scale,
        map_kind: MapKind::Algebraic,
        adaptive_tol: 1e-10,
    })?);
    let (label, op) = match args.kernel {
        KernelChoice::T0 => (
            "T0".to_string(),
            deltatrio::operators::assemble_diagonal(kernels::t0_symbol, &grid, "T0")?,
        ),
        KernelChoice::Even | KernelChoice::Odd => {
            let theta = args.theta.ok_or_else(|| {
                Error::InvalidParameter("--theta is required for even/odd kernels".to_string())
            })?;
            let parity = if args.kernel == KernelChoice::Even {
                Parity::Even
            } else {
                Parity::Odd
            };
            let spec = KernelSpec::new(theta, parity)?;
            let label = format!(
                "T{}[theta={theta}]",
                if parity == Parity::Even { "+" } else { "-" }
            );
            (
                label.clone(),
                deltatrio::operators::assemble(move |p, q| spec.eval(p, q), &grid, label)?,
            )
        }
        KernelChoice::TildeMm => (
            "tilde T-[2pi/3]".to_string(),
            deltatrio::operators::assemble(kernels::tilde_kernel_mm, &grid, "tilde")?,
        ),
    };
    let n = op.n();
    let mut lines = Vec::with_capacity(n + 2);
    if let Some(meta) = meta_line(
        args.out.no_meta,
        "kernel-dump",
        &format!(
            "label=\"{label}\" grid_n={} grid_scale={} map=algebraic",
            args.grid_n, args.grid_scale
        ),
    ) {
        lines.push(meta);
    }
    let header: Vec<String> = (0..n).map(|j| format!("col_{j}")).collect();
    lines.push(header.join(","));
    for i in 0..n {
        let row: Vec<String> = op.matrix().row(i).iter().map(|&v| fmt17(v)).collect();
        lines.push(row.join(","));
    }
    write_output(&args.out, &(lines.join("\n") + "\n"))?;
    Ok(ExitCode::SUCCESS)
}
