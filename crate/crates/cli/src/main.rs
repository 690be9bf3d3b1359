//! Command-line front end: single-point evaluation, decay-angle scans,
//! initial-spin sweeps and no-signalling box verification.
//!
//! Every option can also come from a flat `key = value` config file passed
//! with `--config`; explicit command-line flags override file values.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::str::FromStr;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use tribell::scan::{
    parse_config_file, run_scan2d, run_spin_sweep, write_csv, write_json, Interaction,
    ObservableSelection, ScanConfig, SpinSpec, StateRecipe,
};
use tribell::states::{RotAxis, SpinDirection};
use tribell::{
    evaluate, optimize_b442, optimize_b442_sym, optimize_mermin, optimize_svetlichny, AxisSet,
    DecayAngles, ObservableKind, OptimizerSettings, SpinState,
};

#[derive(Parser)]
#[command(
    name = "tribell",
    about = "Three-qubit entanglement and Bell observables for three-body decays",
    version
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Print the spin state and its correlation tensor as JSON
    State(PointArgs),
    /// Print the entanglement measures of one point as JSON
    Measures(PointArgs),
    /// Optimize the requested Bell observables at one point
    Bell(BellArgs),
    /// 2-D scan over the decay angles at fixed initial spin
    Scan2d(Scan2dArgs),
    /// Initial-spin rotation sweep at fixed decay angles
    ScanSpin(ScanSpinArgs),
    /// Verify the exact no-signalling box identities
    Boxes,
}

#[derive(Args, Clone)]
struct PointArgs {
    /// Flat key = value config file; flags override file entries
    #[arg(long)]
    config: Option<PathBuf>,
    /// scalar | vector | tensor
    #[arg(long)]
    interaction: Option<String>,
    /// Four comma-separated couplings, e.g. 0.7,0.7,0.7,0.7
    #[arg(long)]
    couplings: Option<String>,
    /// Opening angle A-B in radians (default 2pi/3)
    #[arg(long)]
    theta_b: Option<f64>,
    /// Opening angle A-C in radians (default 2pi/3)
    #[arg(long)]
    theta_c: Option<f64>,
    /// Polar angle of the initial spin (default 0)
    #[arg(long)]
    spin_theta: Option<f64>,
    /// Azimuthal angle of the initial spin (default 0)
    #[arg(long)]
    spin_phi: Option<f64>,
}

#[derive(Args)]
struct BellArgs {
    #[command(flatten)]
    point: PointArgs,
    /// Comma list of mermin, svetlichny, b442, b442sym (default all)
    #[arg(long)]
    observables: Option<String>,
    #[arg(long)]
    restarts: Option<usize>,
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct Scan2dArgs {
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    interaction: Option<String>,
    #[arg(long)]
    couplings: Option<String>,
    #[arg(long)]
    spin_theta: Option<f64>,
    #[arg(long)]
    spin_phi: Option<f64>,
    /// Grid size as NxM (default 25x25)
    #[arg(long)]
    grid: Option<String>,
    /// Comma list of measures, mermin, svetlichny, b442, b442sym (default all)
    #[arg(long)]
    observables: Option<String>,
    #[arg(long)]
    restarts: Option<usize>,
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Output path (default stdout)
    #[arg(long)]
    out: Option<PathBuf>,
    /// csv | json (default csv)
    #[arg(long)]
    format: Option<String>,
    /// Evaluate grid endpoints 0 and pi instead of half-cell insets
    #[arg(long)]
    include_boundary: bool,
    /// Worker threads (default: all cores)
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Args)]
struct ScanSpinArgs {
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    interaction: Option<String>,
    #[arg(long)]
    couplings: Option<String>,
    #[arg(long)]
    theta_b: Option<f64>,
    #[arg(long)]
    theta_c: Option<f64>,
    /// Rotation axis of the initial spin: x | y
    #[arg(long)]
    rot_axis: Option<String>,
    /// Number of sweep points (default 65)
    #[arg(long)]
    rot_steps: Option<usize>,
    /// Sweep range as start:end in radians (default 0:6.283185307179586)
    #[arg(long)]
    rot_range: Option<String>,
    #[arg(long)]
    observables: Option<String>,
    #[arg(long)]
    restarts: Option<usize>,
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    format: Option<String>,
    #[arg(long)]
    threads: Option<usize>,
}

/// Config-file fallback: CLI flags take precedence over file entries.
struct Settings {
    file: BTreeMap<String, String>,
}

impl Settings {
    fn load(path: &Option<PathBuf>) -> Result<Self> {
        let file = match path {
            Some(p) => {
                let text = fs::read_to_string(p)
                    .with_context(|| format!("reading config file {}", p.display()))?;
                parse_config_file(&text)?
            }
            None => BTreeMap::new(),
        };
        Ok(Self { file })
    }

    fn get<T: FromStr>(&self, cli: Option<T>, key: &str) -> Result<Option<T>>
    where
        T::Err: std::fmt::Display,
    {
        if cli.is_some() {
            return Ok(cli);
        }
        match self.file.get(key) {
            Some(raw) => raw
                .parse()
                .map(Some)
                .map_err(|e| anyhow!("config key `{key}`: {e}")),
            None => Ok(None),
        }
    }

    fn flag(&self, cli: bool, key: &str) -> Result<bool> {
        if cli {
            return Ok(true);
        }
        match self.file.get(key).map(String::as_str) {
            None => Ok(false),
            Some("true") | Some("1") | Some("yes") => Ok(true),
            Some("false") | Some("0") | Some("no") => Ok(false),
            Some(other) => bail!("config key `{key}`: expected a boolean, got `{other}`"),
        }
    }
}

fn parse_couplings(raw: &str) -> Result<[f64; 4]> {
    let parts: Vec<f64> = raw
        .split(',')
        .map(|s| s.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .context("couplings must be four comma-separated numbers")?;
    if parts.len() != 4 {
        bail!("expected exactly four couplings, got {}", parts.len());
    }
    Ok([parts[0], parts[1], parts[2], parts[3]])
}

fn parse_grid(raw: &str) -> Result<(usize, usize)> {
    let (n, m) = raw
        .split_once(['x', 'X'])
        .ok_or_else(|| anyhow!("grid must look like 25x25"))?;
    Ok((n.trim().parse()?, m.trim().parse()?))
}

fn parse_range(raw: &str) -> Result<(f64, f64)> {
    let (a, b) = raw
        .split_once(':')
        .ok_or_else(|| anyhow!("range must look like start:end"))?;
    Ok((a.trim().parse()?, b.trim().parse()?))
}

struct Point {
    recipe: StateRecipe,
    angles: DecayAngles,
    spin: SpinDirection,
}

const DEFAULT_ANGLE: f64 = 2.0 * std::f64::consts::PI / 3.0;

fn resolve_point(args: &PointArgs, s: &Settings) -> Result<Point> {
    let recipe = resolve_recipe(s, args.interaction.clone(), args.couplings.clone())?;
    let angles = DecayAngles::new(
        s.get(args.theta_b, "theta-b")?.unwrap_or(DEFAULT_ANGLE),
        s.get(args.theta_c, "theta-c")?.unwrap_or(DEFAULT_ANGLE),
    );
    let spin = SpinDirection::new(
        s.get(args.spin_theta, "spin-theta")?.unwrap_or(0.0),
        s.get(args.spin_phi, "spin-phi")?.unwrap_or(0.0),
    );
    Ok(Point {
        recipe,
        angles,
        spin,
    })
}

fn resolve_recipe(
    s: &Settings,
    interaction: Option<String>,
    couplings: Option<String>,
) -> Result<StateRecipe> {
    let interaction: Interaction = s
        .get(interaction, "interaction")?
        .ok_or_else(|| anyhow!("--interaction is required"))?
        .parse()?;
    let couplings = parse_couplings(
        &s.get(couplings, "couplings")?
            .ok_or_else(|| anyhow!("--couplings is required"))?,
    )?;
    let recipe = StateRecipe {
        interaction,
        couplings,
    };
    recipe.validate()?;
    Ok(recipe)
}

fn resolve_optimizer(
    s: &Settings,
    restarts: Option<usize>,
    tol: Option<f64>,
    seed: Option<u64>,
) -> Result<OptimizerSettings> {
    let d = OptimizerSettings::default();
    Ok(OptimizerSettings {
        restarts: s.get(restarts, "restarts")?.unwrap_or(d.restarts),
        tol: s.get(tol, "tol")?.unwrap_or(d.tol),
        seed: s.get(seed, "seed")?.unwrap_or(d.seed),
    })
}

fn build_state(p: &Point) -> Result<SpinState> {
    p.recipe
        .build(&p.angles, &p.spin)
        .map_err(|e| anyhow!("state construction failed: {e}"))
}

fn emit(out: &Option<PathBuf>, body: impl FnOnce(&mut dyn Write) -> Result<()>) -> Result<()> {
    match out {
        Some(path) => {
            let mut f =
                fs::File::create(path).with_context(|| format!("creating {}", path.display()))?;
            body(&mut f)
        }
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            body(&mut lock)
        }
    }
}

fn cmd_state(args: &PointArgs) -> Result<()> {
    let s = Settings::load(&args.config)?;
    let p = resolve_point(args, &s)?;
    let state = build_state(&p)?;
    let tensor = state.correlation_tensor();
    let doc = serde_json::json!({
        "theta_B": p.angles.theta_b,
        "theta_C": p.angles.theta_c,
        "state": state,
        "correlation_tensor": tensor,
    });
    println!("{}", serde_json::to_string_pretty(&doc)?);
    Ok(())
}

fn cmd_measures(args: &PointArgs) -> Result<()> {
    let s = Settings::load(&args.config)?;
    let p = resolve_point(args, &s)?;
    let state = build_state(&p)?;
    println!(
        "{}",
        serde_json::to_string_pretty(&tribell::report(&state))?
    );
    Ok(())
}

fn cmd_bell(args: &BellArgs) -> Result<()> {
    let s = Settings::load(&args.point.config)?;
    let p = resolve_point(&args.point, &s)?;
    let selection: ObservableSelection = s
        .get(args.observables.clone(), "observables")?
        .unwrap_or_else(|| "all".into())
        .parse()?;
    let opt = resolve_optimizer(&s, args.restarts, args.tol, args.seed)?;
    let state = build_state(&p)?;
    let t = state.correlation_tensor();
    let mut doc = serde_json::Map::new();
    if selection.mermin {
        doc.insert(
            "mermin".into(),
            serde_json::to_value(optimize_mermin(&t, &opt))?,
        );
    }
    if selection.svetlichny {
        doc.insert(
            "svetlichny".into(),
            serde_json::to_value(optimize_svetlichny(&t, &opt))?,
        );
    }
    if selection.b442 {
        doc.insert(
            "b442".into(),
            serde_json::to_value(optimize_b442(&t, &opt))?,
        );
    }
    if selection.b442sym {
        doc.insert(
            "b442sym".into(),
            serde_json::to_value(optimize_b442_sym(&t, &opt))?,
        );
    }
    println!("{}", serde_json::to_string_pretty(&doc)?);
    Ok(())
}

fn write_rows(rows: &[tribell::ScanRow], out: &Option<PathBuf>, format: &str) -> Result<()> {
    emit(out, |w| {
        match format {
            "csv" => write_csv(rows, w)?,
            "json" => write_json(rows, w)?,
            other => bail!("unknown format `{other}` (expected csv or json)"),
        }
        Ok(())
    })
}

fn cmd_scan2d(args: &Scan2dArgs) -> Result<()> {
    let s = Settings::load(&args.config)?;
    let recipe = resolve_recipe(&s, args.interaction.clone(), args.couplings.clone())?;
    let spin = SpinDirection::new(
        s.get(args.spin_theta, "spin-theta")?.unwrap_or(0.0),
        s.get(args.spin_phi, "spin-phi")?.unwrap_or(0.0),
    );
    let grid = parse_grid(
        &s.get(args.grid.clone(), "grid")?
            .unwrap_or_else(|| "25x25".into()),
    )?;
    let cfg = ScanConfig {
        recipe,
        spin: SpinSpec::Direction(spin),
        angles: None,
        grid,
        observables: s
            .get(args.observables.clone(), "observables")?
            .unwrap_or_else(|| "all".into())
            .parse()?,
        optimizer: resolve_optimizer(&s, args.restarts, args.tol, args.seed)?,
        include_boundary: s.flag(args.include_boundary, "include-boundary")?,
        threads: s.get(args.threads, "threads")?.unwrap_or(0),
    };
    let rows = run_scan2d(&cfg)?;
    let format = s
        .get(args.format.clone(), "format")?
        .unwrap_or_else(|| "csv".into());
    write_rows(&rows, &args.out, &format)
}

fn cmd_scan_spin(args: &ScanSpinArgs) -> Result<()> {
    let s = Settings::load(&args.config)?;
    let recipe = resolve_recipe(&s, args.interaction.clone(), args.couplings.clone())?;
    let axis = match s
        .get(args.rot_axis.clone(), "rot-axis")?
        .unwrap_or_else(|| "y".into())
        .to_ascii_lowercase()
        .as_str()
    {
        "x" => RotAxis::X,
        "y" => RotAxis::Y,
        other => bail!("unknown rotation axis `{other}` (expected x or y)"),
    };
    let steps = s.get(args.rot_steps, "rot-steps")?.unwrap_or(65);
    let (start, end) = parse_range(
        &s.get(args.rot_range.clone(), "rot-range")?
            .unwrap_or_else(|| format!("0:{}", 2.0 * std::f64::consts::PI)),
    )?;
    let angles = DecayAngles::new(
        s.get(args.theta_b, "theta-b")?.unwrap_or(DEFAULT_ANGLE),
        s.get(args.theta_c, "theta-c")?.unwrap_or(DEFAULT_ANGLE),
    );
    let cfg = ScanConfig {
        recipe,
        spin: SpinSpec::Rotation {
            axis,
            start,
            end,
            steps,
        },
        angles: Some(angles),
        grid: (2, 2),
        observables: s
            .get(args.observables.clone(), "observables")?
            .unwrap_or_else(|| "all".into())
            .parse()?,
        optimizer: resolve_optimizer(&s, args.restarts, args.tol, args.seed)?,
        include_boundary: false,
        threads: s.get(args.threads, "threads")?.unwrap_or(0),
    };
    let rows = run_spin_sweep(&cfg)?;
    let format = s
        .get(args.format.clone(), "format")?
        .unwrap_or_else(|| "csv".into());
    write_rows(&rows, &args.out, &format)
}

fn cmd_boxes() -> Result<()> {
    use num_rational::Rational64;
    use tribell::nosignal::*;

    let mut failures = 0usize;
    let mut check = |name: &str, pass: bool, detail: String| {
        let tag = if pass { "PASS" } else { "FAIL" };
        println!("{tag}  {name}: {detail}");
        if !pass {
            failures += 1;
        }
    };
    let r = Rational64::new;

    let chsh0 = chsh_value(&pr_box(0));
    check(
        "CHSH of PR box",
        chsh0 == r(4, 1),
        format!("{chsh0} (exact 4)"),
    );
    let chsh1 = chsh_value(&pr_box(1));
    check(
        "CHSH of anti-PR box",
        chsh1 == r(-4, 1),
        format!("{chsh1} (exact -4)"),
    );
    let noise = chsh_value(&random_box());
    check(
        "CHSH of random box",
        noise == r(0, 1),
        format!("{noise} (exact 0)"),
    );

    for rb in [0u8, 1] {
        let mixed = pr_box(rb).mix(r(1, 2), &pr_box(1 ^ rb), r(1, 2));
        check(
            &format!("unbiased PR mixture equals noise (r = {rb})"),
            mixed == random_box(),
            "entrywise exact".into(),
        );
    }

    for s in [0u8, 1] {
        let q = chsh_value(&quantum_box(s));
        let expect = if s == 0 { 1.0 } else { -1.0 } * 2.0 * std::f64::consts::SQRT_2;
        check(
            &format!("CHSH of quantum box (s = {s})"),
            (q - expect).abs() < 1e-12,
            format!("{q} vs {expect}"),
        );
    }

    check(
        "deterministic CHSH bound",
        chsh_deterministic_max() == 2,
        format!("max over 16 strategies = {}", chsh_deterministic_max()),
    );

    for (variant, label) in [
        (TripartiteVariant::Uvz, "uvz"),
        (TripartiteVariant::Uz, "uz"),
        (TripartiteVariant::Vz, "vz"),
    ] {
        let bx = tripartite_box(variant);
        let v = b442_box_value(&bx);
        check(
            &format!("4x4x2 value of tripartite box ({label} variant)"),
            v == r(16, 1),
            format!("{v} (exact 16)"),
        );
    }

    let bx = tripartite_box(TripartiteVariant::Uvz);
    check(
        "tripartite box normalization",
        bx.is_normalized(),
        "exact per setting".into(),
    );
    let ns = verify_no_signalling_tripartite(&bx);
    check(
        "tripartite box no-signalling",
        ns.is_empty(),
        format!("{} violated marginals", ns.len()),
    );
    for s in [0u8, 1] {
        let ns = verify_no_signalling_bipartite(&pr_box(s));
        check(
            &format!("PR box no-signalling (s = {s})"),
            ns.is_empty(),
            format!("{} violated marginals", ns.len()),
        );
    }

    let mut decomposes = true;
    for u in 0..2u8 {
        for up in 0..2u8 {
            for v in 0..2u8 {
                for vp in 0..2u8 {
                    for z in 0..2u8 {
                        for a in 0..2u8 {
                            for b in 0..2u8 {
                                for c in 0..2u8 {
                                    let lhs = bx.get(a, b, c, u, up, v, vp, z);
                                    let rhs = pr_box(c ^ (u & v & z)).get(a, b, up, vp) * r(1, 2);
                                    decomposes &= lhs == rhs;
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    check(
        "tripartite box = (1/2) PR^(c xor uvz)",
        decomposes,
        "entrywise exact".into(),
    );

    check(
        "deterministic 4x4x2 bound",
        b442_deterministic_max() == 4,
        format!("max over 1024 strategies = {}", b442_deterministic_max()),
    );

    // quantum side: Born statistics of the GHZ state at its optimal axes
    let ghz = SpinState::ghz();
    let t = ghz.correlation_tensor();
    let opt = optimize_b442(&t, &OptimizerSettings::default());
    let realized = evaluate(&t, &opt.axes, ObservableKind::B442)?;
    let born = b442_box_value(&born_box(&ghz, &normalize_axes(&opt.axes)));
    check(
        "GHZ Born box reaches the quantum maximum",
        (born - 8.0).abs() < 1e-9 && (realized - 8.0).abs() < 1e-9,
        format!("box functional {born}, tensor contraction {realized}"),
    );

    if failures > 0 {
        bail!("{failures} box identities failed");
    }
    Ok(())
}

/// Axis vectors come out of the optimizer unit-length up to rounding;
/// Born projectors want them exactly normalized.
fn normalize_axes(axes: &AxisSet) -> AxisSet {
    let norm = |v: &[f64; 3]| {
        let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        [v[0] / n, v[1] / n, v[2] / n]
    };
    AxisSet {
        a_axes: axes.a_axes.iter().map(norm).collect(),
        b_axes: axes.b_axes.iter().map(norm).collect(),
        c_axes: axes.c_axes.iter().map(norm).collect(),
    }
}

fn main() -> Result<()> {
    let cli = Cli::parse();
    match &cli.cmd {
        Cmd::State(args) => cmd_state(args),
        Cmd::Measures(args) => cmd_measures(args),
        Cmd::Bell(args) => cmd_bell(args),
        Cmd::Scan2d(args) => cmd_scan2d(args),
        Cmd::ScanSpin(args) => cmd_scan_spin(args),
        Cmd::Boxes => cmd_boxes(),
    }
}
