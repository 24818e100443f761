//! Command-line front door: construct algebras from a JSON config or
//! flags, report spectra, export geodesics as CSV, render block
//! projections as SVG, and run the verification suite.
//!
//! Exit codes: 0 success, 1 failed checks or excessive drift, 2 config or
//! usage errors, 3 generator validation failure (algebra command).

use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use nalgebra::DVector;
use serde::Deserialize;

use crate::algebra::{HTypeAlgebra, Signature, Velocity};
use crate::clifford::{
    build_generators, hurwitz_radon, octonion_generators, validate_generators, GeneratorSet,
    GeneratorSetJson, ValidationReport,
};
use crate::error::Error;
use crate::geodesic::solve_geodesic;
use crate::oracle::{integrate_geodesic, IntegratorConfig};
use crate::spectral::classify;
use crate::verify::run_suite;

const MOMENTUM_TOL: f64 = 1e-8;
const SPEED_TOL: f64 = 1e-9;
const ORACLE_DEVIATION_TOL: f64 = 1e-6;
const ORACLE_STEPS: usize = 100_000;
const RECONSTRUCTION_TOL: f64 = 1e-9;
const ORTHOGONALITY_TOL: f64 = 1e-10;
const BLOCK_IDENTITY_TOL: f64 = 1e-9;

#[derive(Parser)]
#[command(
    name = "htype",
    about = "Sub-semi-Riemannian geometry on H-type groups",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Construct an algebra and report dimensions and validation as JSON.
    Algebra(AlgebraOpts),
    /// Classify the spectrum of the geodesic operator for a center direction.
    Spectrum(SpectrumOpts),
    /// Solve a geodesic, write it as CSV, and report conservation drift.
    Geodesic(GeodesicOpts),
    /// Render the 2D block projections of a geodesic as SVG files.
    Plot(PlotOpts),
    /// Run the verification suite across the builtin fixtures.
    Verify(VerifyOpts),
}

#[derive(Args, Clone)]
struct CommonOpts {
    /// JSON config file describing the algebra and parameter defaults.
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Generator family when not using a config file:
    /// builtin:octonion or builtin:heisenberg.
    #[arg(long, value_name = "NAME")]
    generators: Option<String>,
    /// Metric index: number of timelike horizontal directions.
    #[arg(long)]
    p: Option<usize>,
    /// Seed for randomized work; overrides the config value.
    #[arg(long)]
    seed: Option<u64>,
    /// Directory for generated files.
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct AlgebraOpts {
    #[command(flatten)]
    common: CommonOpts,
}

#[derive(Args)]
struct SpectrumOpts {
    #[command(flatten)]
    common: CommonOpts,
    /// Center direction as comma-separated components.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, value_name = "U1,U2,...")]
    u: Option<Vec<f64>>,
}

#[derive(Args)]
struct GeodesicOpts {
    #[command(flatten)]
    common: CommonOpts,
    /// Initial horizontal velocity, comma-separated.
    #[arg(long = "v0", value_delimiter = ',', allow_hyphen_values = true, value_name = "V1,V2,...")]
    v0dot: Option<Vec<f64>>,
    /// Initial center velocity, comma-separated.
    #[arg(long = "u0", value_delimiter = ',', allow_hyphen_values = true, value_name = "U1,U2,...")]
    u0dot: Option<Vec<f64>>,
    /// Start of the time range.
    #[arg(long, allow_hyphen_values = true)]
    t0: Option<f64>,
    /// End of the time range.
    #[arg(long, allow_hyphen_values = true)]
    t1: Option<f64>,
    /// Number of sample rows.
    #[arg(long)]
    samples: Option<usize>,
    /// Also integrate numerically and report the worst deviation.
    #[arg(long)]
    oracle_check: bool,
}

#[derive(Args)]
struct PlotOpts {
    #[command(flatten)]
    common: CommonOpts,
    /// Initial horizontal velocity, comma-separated.
    #[arg(long = "v0", value_delimiter = ',', allow_hyphen_values = true, value_name = "V1,V2,...")]
    v0dot: Option<Vec<f64>>,
    /// Initial center velocity, comma-separated; must be nonzero.
    #[arg(long = "u0", value_delimiter = ',', allow_hyphen_values = true, value_name = "U1,U2,...")]
    u0dot: Option<Vec<f64>>,
    /// Start of the time range.
    #[arg(long, allow_hyphen_values = true)]
    t0: Option<f64>,
    /// End of the time range.
    #[arg(long, allow_hyphen_values = true)]
    t1: Option<f64>,
    /// Number of marker points.
    #[arg(long)]
    samples: Option<usize>,
}

#[derive(Args)]
struct VerifyOpts {
    #[command(flatten)]
    common: CommonOpts,
    /// Corrupt a generator copy inside the suite to prove it can fail.
    #[arg(long)]
    inject_fault: bool,
}

/// Problem with the configuration or usage; maps to exit code 2.
struct ConfigError(String);

impl From<Error> for ConfigError {
    fn from(e: Error) -> Self {
        ConfigError(e.to_string())
    }
}

/// JSON config document. Every field is optional; commands reject missing
/// parameters they need.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    n: Option<usize>,
    m: Option<usize>,
    p: Option<usize>,
    generators: Option<GeneratorsSpec>,
    u: Option<Vec<f64>>,
    v0dot: Option<Vec<f64>>,
    u0dot: Option<Vec<f64>>,
    t0: Option<f64>,
    t1: Option<f64>,
    samples: Option<usize>,
    seed: Option<u64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum GeneratorsSpec {
    Builtin(String),
    Inline(GeneratorSetJson),
}

enum LoadedGenerators {
    Valid(GeneratorSet),
    Invalid(ValidationReport),
}

/// Entry point used by the binary; returns the process exit code.
pub fn run() -> i32 {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Algebra(opts) => cmd_algebra(opts),
        Command::Spectrum(opts) => cmd_spectrum(opts),
        Command::Geodesic(opts) => cmd_geodesic(opts),
        Command::Plot(opts) => cmd_plot(opts),
        Command::Verify(opts) => cmd_verify(opts),
    };
    match result {
        Ok(code) => code,
        Err(ConfigError(message)) => {
            eprintln!("config error: {message}");
            2
        }
    }
}

fn load_config(path: &Option<PathBuf>) -> Result<FileConfig, ConfigError> {
    match path {
        None => Ok(FileConfig::default()),
        Some(p) => {
            let text = fs::read_to_string(p)
                .map_err(|e| ConfigError(format!("cannot read {}: {e}", p.display())))?;
            serde_json::from_str(&text)
                .map_err(|e| ConfigError(format!("cannot parse {}: {e}", p.display())))
        }
    }
}

fn load_generators(
    cfg: &FileConfig,
    common: &CommonOpts,
) -> Result<LoadedGenerators, ConfigError> {
    let spec = if let Some(name) = &common.generators {
        GeneratorsSpec::Builtin(name.clone())
    } else if let Some(spec) = &cfg.generators {
        spec.clone()
    } else {
        return Err(ConfigError(
            "no generator family: pass --generators or a config with \"generators\"".into(),
        ));
    };
    let set = match spec {
        GeneratorsSpec::Builtin(name) => match name.as_str() {
            "builtin:octonion" => octonion_generators(),
            "builtin:heisenberg" => {
                build_generators(2, 1).expect("the Heisenberg pair is admissible")
            }
            other => {
                return Err(ConfigError(format!(
                    "unknown generator family {other:?}; expected builtin:octonion, \
                     builtin:heisenberg, or inline matrices in the config"
                )))
            }
        },
        GeneratorsSpec::Inline(doc) => match GeneratorSet::try_from(doc) {
            Ok(set) => set,
            Err(Error::InvalidGenerators(report)) => {
                return Ok(LoadedGenerators::Invalid(report))
            }
            Err(e) => return Err(e.into()),
        },
    };
    if let Some(n) = cfg.n {
        if n != set.n() {
            return Err(ConfigError(format!(
                "config n = {n} does not match the generator family (n = {})",
                set.n()
            )));
        }
    }
    if let Some(m) = cfg.m {
        if m != set.m() {
            return Err(ConfigError(format!(
                "config m = {m} does not match the generator family (m = {})",
                set.m()
            )));
        }
    }
    Ok(LoadedGenerators::Valid(set))
}

fn resolve_index(set_n: usize, cfg: &FileConfig, common: &CommonOpts) -> Result<usize, ConfigError> {
    let p = common
        .p
        .or(cfg.p)
        .ok_or_else(|| ConfigError("missing metric index: pass --p or config \"p\"".into()))?;
    if p > set_n {
        return Err(ConfigError(format!("index p = {p} exceeds n = {set_n}")));
    }
    Ok(p)
}

fn make_algebra(cfg: &FileConfig, common: &CommonOpts) -> Result<HTypeAlgebra, ConfigError> {
    let set = match load_generators(cfg, common)? {
        LoadedGenerators::Valid(set) => set,
        LoadedGenerators::Invalid(report) => {
            let named = report
                .checks
                .iter()
                .filter(|c| !c.pass)
                .map(|c| c.name)
                .collect::<Vec<_>>()
                .join(", ");
            return Err(ConfigError(format!(
                "generator set failed validation ({named}); run the algebra command for the full report"
            )));
        }
    };
    let p = resolve_index(set.n(), cfg, common)?;
    let sig = Signature::new(p, set.n() - p)?;
    Ok(HTypeAlgebra::new(set, sig)?)
}

fn require_vec(
    flag: Option<Vec<f64>>,
    cfg: Option<Vec<f64>>,
    what: &str,
) -> Result<DVector<f64>, ConfigError> {
    flag.or(cfg)
        .map(DVector::from_vec)
        .ok_or_else(|| ConfigError(format!("missing {what}")))
}

fn out_dir(common: &CommonOpts) -> Result<PathBuf, ConfigError> {
    let dir = common.out.clone().unwrap_or_else(|| PathBuf::from("."));
    fs::create_dir_all(&dir)
        .map_err(|e| ConfigError(format!("cannot create {}: {e}", dir.display())))?;
    Ok(dir)
}

fn cmd_algebra(opts: AlgebraOpts) -> Result<i32, ConfigError> {
    let cfg = load_config(&opts.common.config)?;
    match load_generators(&cfg, &opts.common)? {
        LoadedGenerators::Valid(set) => {
            let (n, m) = (set.n(), set.m());
            let p = resolve_index(n, &cfg, &opts.common)?;
            let sig = Signature::new(p, n - p)?;
            let alg = HTypeAlgebra::new(set, sig)?;
            let report = validate_generators(alg.generators());
            let value = serde_json::json!({
                "n": n,
                "m": m,
                "p": p,
                "q": n - p,
                "rho": hurwitz_radon(n),
                "admissible": m < hurwitz_radon(n),
                "validation": report,
                "pass": report.pass(),
            });
            println!("{}", serde_json::to_string_pretty(&value).expect("serializable"));
            Ok(if report.pass() { 0 } else { 3 })
        }
        LoadedGenerators::Invalid(report) => {
            let value = serde_json::json!({
                "n": report.n,
                "m": report.m,
                "rho": hurwitz_radon(report.n),
                "admissible": report.m < hurwitz_radon(report.n),
                "validation": report,
                "pass": false,
            });
            println!("{}", serde_json::to_string_pretty(&value).expect("serializable"));
            Ok(3)
        }
    }
}

fn cmd_spectrum(opts: SpectrumOpts) -> Result<i32, ConfigError> {
    let cfg = load_config(&opts.common.config)?;
    let alg = make_algebra(&cfg, &opts.common)?;
    let u = require_vec(opts.u, cfg.u.clone(), "center direction: pass --u or config \"u\"")?;
    let data = classify(&alg, &u)?;
    let residuals = data.residuals();
    let value = serde_json::json!({
        "u": u.as_slice(),
        "u_norm": data.u_norm(),
        "s": data.s(),
        "r": data.r(),
        "quartets": data
            .quartets()
            .iter()
            .map(|q| [q.alpha, q.beta])
            .collect::<Vec<_>>(),
        "eigenvalues": data
            .eigenvalues()
            .iter()
            .map(|l| [l.re, l.im])
            .collect::<Vec<_>>(),
        "residuals": residuals,
    });
    println!("{}", serde_json::to_string_pretty(&value).expect("serializable"));
    let ok = residuals.reconstruction <= RECONSTRUCTION_TOL
        && residuals.orthogonality <= ORTHOGONALITY_TOL
        && residuals.block_identity <= BLOCK_IDENTITY_TOL;
    Ok(if ok { 0 } else { 1 })
}

fn cmd_geodesic(opts: GeodesicOpts) -> Result<i32, ConfigError> {
    let cfg = load_config(&opts.common.config)?;
    let alg = make_algebra(&cfg, &opts.common)?;
    let v0 = require_vec(
        opts.v0dot,
        cfg.v0dot.clone(),
        "initial horizontal velocity: pass --v0 or config \"v0dot\"",
    )?;
    let u0 = require_vec(
        opts.u0dot,
        cfg.u0dot.clone(),
        "initial center velocity: pass --u0 or config \"u0dot\"",
    )?;
    let t0 = opts.t0.or(cfg.t0).unwrap_or(0.0);
    let t1 = opts.t1.or(cfg.t1).unwrap_or(1.0);
    let samples = opts.samples.or(cfg.samples).unwrap_or(101);
    let dir = out_dir(&opts.common)?;

    let sol = solve_geodesic(&alg, &v0, &u0)?;
    let traj = sol.sample(t0, t1, samples)?;

    let (n, m) = (alg.n(), alg.m());
    let mut text = String::from("t");
    for i in 1..=n {
        write!(text, ",v{i}").unwrap();
    }
    for a in 1..=m {
        write!(text, ",u{a}").unwrap();
    }
    for i in 1..=n {
        write!(text, ",dv{i}").unwrap();
    }
    for a in 1..=m {
        write!(text, ",du{a}").unwrap();
    }
    text.push_str(",causal\n");

    let causal = traj.causal().to_string();
    let speed0 = alg
        .speed_squared(&Velocity::new(v0.clone(), u0.clone()))
        .expect("dimensions already checked");
    let mut momentum_drift: f64 = 0.0;
    let mut speed_drift: f64 = 0.0;
    for ((t, state), velocity) in traj
        .times()
        .iter()
        .zip(traj.states())
        .zip(traj.velocities())
    {
        write!(text, "{t}").unwrap();
        for x in state.v.iter().chain(state.u.iter()) {
            write!(text, ",{x}").unwrap();
        }
        for x in velocity.dv.iter().chain(velocity.du.iter()) {
            write!(text, ",{x}").unwrap();
        }
        text.push(',');
        text.push_str(&causal);
        text.push('\n');

        let mu = alg
            .momentum(state, velocity)
            .expect("dimensions already checked");
        momentum_drift = momentum_drift.max((&mu - &u0).norm());
        let speed = alg
            .speed_squared(&Velocity::new(velocity.dv.clone(), mu))
            .expect("dimensions already checked");
        speed_drift = speed_drift.max((speed - speed0).abs());
    }

    let csv_path = dir.join("trajectory.csv");
    fs::write(&csv_path, text)
        .map_err(|e| ConfigError(format!("cannot write {}: {e}", csv_path.display())))?;

    let oracle_deviation = if opts.oracle_check {
        if t1 <= 0.0 {
            return Err(ConfigError(
                "the oracle comparison integrates forward from 0 and needs t1 > 0".into(),
            ));
        }
        let config = IntegratorConfig {
            t_end: t1,
            steps: ORACLE_STEPS,
            record_every: ORACLE_STEPS / 10,
        };
        let reference = integrate_geodesic(&alg, &v0, &u0, &config)?;
        let mut worst: f64 = 0.0;
        for (t, state) in reference.times().iter().zip(reference.states()) {
            let (closed, _) = sol.evaluate(*t);
            worst = worst
                .max((&closed.v - &state.v).norm())
                .max((&closed.u - &state.u).norm());
        }
        Some(worst)
    } else {
        None
    };

    let mut summary = serde_json::json!({
        "csv": csv_path.display().to_string(),
        "rows": samples,
        "causal": causal,
        "max_momentum_drift": momentum_drift,
        "max_speed_drift": speed_drift,
    });
    let mut ok = momentum_drift <= MOMENTUM_TOL && speed_drift <= SPEED_TOL;
    if let Some(deviation) = oracle_deviation {
        summary["max_oracle_deviation"] = serde_json::json!(deviation);
        ok = ok && deviation <= ORACLE_DEVIATION_TOL;
    }
    println!("{summary}");
    Ok(if ok { 0 } else { 1 })
}

fn cmd_plot(opts: PlotOpts) -> Result<i32, ConfigError> {
    let cfg = load_config(&opts.common.config)?;
    let alg = make_algebra(&cfg, &opts.common)?;
    let v0 = require_vec(
        opts.v0dot,
        cfg.v0dot.clone(),
        "initial horizontal velocity: pass --v0 or config \"v0dot\"",
    )?;
    let u0 = require_vec(
        opts.u0dot,
        cfg.u0dot.clone(),
        "initial center velocity: pass --u0 or config \"u0dot\"",
    )?;
    let t0 = opts.t0.or(cfg.t0).unwrap_or(0.0);
    let t1 = opts.t1.or(cfg.t1).unwrap_or(1.0);
    let samples = opts.samples.or(cfg.samples).unwrap_or(101);
    let dir = out_dir(&opts.common)?;

    let sol = solve_geodesic(&alg, &v0, &u0)?;
    let kinds = sol.projection_residuals(t0)?;
    let data = sol.spectral_data().expect("nonzero center velocity");
    let transform = data.transform();
    let blocks = data.blocks();

    const DENSE: usize = 512;
    let mut dense = vec![Vec::with_capacity(DENSE + 1); blocks.len()];
    for k in 0..=DENSE {
        let t = t0 + (t1 - t0) * k as f64 / DENSE as f64;
        let (state, _) = sol.evaluate(t);
        let tv = &transform * &state.v;
        for (b, block) in blocks.iter().enumerate() {
            dense[b].push((tv[block.offset], tv[block.offset + 1]));
        }
    }
    let traj = sol.sample(t0, t1, samples)?;
    let mut markers = vec![Vec::with_capacity(samples); blocks.len()];
    for state in traj.states() {
        let tv = &transform * &state.v;
        for (b, block) in blocks.iter().enumerate() {
            markers[b].push((tv[block.offset], tv[block.offset + 1]));
        }
    }

    let mut files = Vec::with_capacity(blocks.len());
    for residual in &kinds {
        let b = residual.index;
        let name = format!("{:02}_{}.svg", b, residual.kind);
        let title = format!("{} block {:02}", residual.kind, b);
        let svg = render_block_svg(&title, &dense[b], &markers[b]);
        let path = dir.join(&name);
        fs::write(&path, svg)
            .map_err(|e| ConfigError(format!("cannot write {}: {e}", path.display())))?;
        files.push(name);
    }
    let summary = serde_json::json!({
        "out": dir.display().to_string(),
        "files": files,
    });
    println!("{summary}");
    Ok(0)
}

/// Renders one 2D projection: dense analytic polyline, sampled markers,
/// and the coordinate axes when they fall inside the view. Equal scale on
/// both axes so circles stay circular.
fn render_block_svg(title: &str, dense: &[(f64, f64)], markers: &[(f64, f64)]) -> String {
    let mut lo = (f64::INFINITY, f64::INFINITY);
    let mut hi = (f64::NEG_INFINITY, f64::NEG_INFINITY);
    for &(x, y) in dense.iter().chain(markers) {
        lo.0 = lo.0.min(x);
        lo.1 = lo.1.min(y);
        hi.0 = hi.0.max(x);
        hi.1 = hi.1.max(y);
    }
    let center = ((lo.0 + hi.0) / 2.0, (lo.1 + hi.1) / 2.0);
    let half = (0.55 * (hi.0 - lo.0).max(hi.1 - lo.1)).max(1e-9);
    let scale = 280.0 / half;
    let px = |x: f64| 320.0 + (x - center.0) * scale;
    let py = |y: f64| 320.0 - (y - center.1) * scale;

    let mut svg = String::new();
    svg.push_str(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"640\" \
         viewBox=\"0 0 640 640\">\n",
    );
    svg.push_str("<rect width=\"640\" height=\"640\" fill=\"#ffffff\"/>\n");
    if (center.0 - half..=center.0 + half).contains(&0.0) {
        writeln!(
            svg,
            "<line x1=\"{0:.4}\" y1=\"40\" x2=\"{0:.4}\" y2=\"600\" stroke=\"#bbbbbb\" stroke-width=\"1\"/>",
            px(0.0)
        )
        .unwrap();
    }
    if (center.1 - half..=center.1 + half).contains(&0.0) {
        writeln!(
            svg,
            "<line x1=\"40\" y1=\"{0:.4}\" x2=\"600\" y2=\"{0:.4}\" stroke=\"#bbbbbb\" stroke-width=\"1\"/>",
            py(0.0)
        )
        .unwrap();
    }
    svg.push_str("<polyline fill=\"none\" stroke=\"#1f6fb4\" stroke-width=\"1.5\" points=\"");
    for (i, &(x, y)) in dense.iter().enumerate() {
        if i > 0 {
            svg.push(' ');
        }
        write!(svg, "{:.4},{:.4}", px(x), py(y)).unwrap();
    }
    svg.push_str("\"/>\n");
    for &(x, y) in markers {
        writeln!(
            svg,
            "<circle cx=\"{:.4}\" cy=\"{:.4}\" r=\"2.5\" fill=\"#c44e52\"/>",
            px(x),
            py(y)
        )
        .unwrap();
    }
    writeln!(
        svg,
        "<text x=\"24\" y=\"32\" font-family=\"monospace\" font-size=\"16\" fill=\"#333333\">{title}</text>"
    )
    .unwrap();
    svg.push_str("</svg>\n");
    svg
}

fn cmd_verify(opts: VerifyOpts) -> Result<i32, ConfigError> {
    let cfg = load_config(&opts.common.config)?;
    let seed = opts.common.seed.or(cfg.seed).unwrap_or(0);
    let report = run_suite(seed, opts.inject_fault);
    println!("{report}");
    Ok(if report.passed() { 0 } else { 1 })
}
