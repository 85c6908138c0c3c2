mod args;
mod config;
mod output;

use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;
use stickslip::*;

use args::{Cli, Command, McMode, PresetArg, SystemArgs};
use output::{num, opt, Table};

/// Exit status contract: 2 parse, 3 precondition, 4 empty result.
#[derive(Debug)]
enum Failure {
    Usage(String),
    Precondition(String),
    Empty(String),
    Io(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Io(_) => 1,
            Failure::Usage(_) => 2,
            Failure::Precondition(_) => 3,
            Failure::Empty(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Precondition(m) | Failure::Empty(m) | Failure::Io(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Precondition(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

fn reduced(s: &SystemArgs) -> Result<ReducedSystemF64, Failure> {
    match s.preset {
        Some(PresetArg::CubicFriction) => {
            let z0 = s
                .z0
                .ok_or_else(|| Failure::Usage("--z0 is required with --preset cubic-friction".into()))?;
            let p = FrictionParams::new(s.alpha, s.mu, s.eps, s.kappa, s.r, z0)?;
            Ok(reduced_from_friction(&p)?)
        }
        Some(PresetArg::Linear) => {
            let (am, ap) = drifts(s)?;
            Ok(ReducedSystem::from_unscaled(am, ap, Interior::linear(am, ap), s.eps, s.kappa, s.r)?)
        }
        None => match &s.a_poly {
            Some(c) => {
                let poly = Polynomial::new(c.clone());
                let am = s.a_minus.unwrap_or_else(|| poly.eval(-1.0));
                let ap = s.a_plus.unwrap_or_else(|| poly.eval(1.0));
                Ok(ReducedSystem::from_unscaled(am, ap, Interior::Polynomial(poly), s.eps, s.kappa, s.r)?)
            }
            None => {
                let (am, ap) = drifts(s)?;
                Ok(ReducedSystem::from_unscaled(am, ap, Interior::linear(am, ap), s.eps, s.kappa, s.r)?)
            }
        },
    }
}

fn drifts(s: &SystemArgs) -> Result<(f64, f64), Failure> {
    match (s.a_minus, s.a_plus) {
        (Some(am), Some(ap)) => Ok((am, ap)),
        _ => Err(Failure::Usage("--a-minus and --a-plus are required without --preset cubic-friction".into())),
    }
}

fn classify_cmd(a_minus: f64, a_plus: f64) -> Outcome {
    println!("{}", classify(a_minus, a_plus).name());
    Ok(())
}

fn escape_cmd(system: &SystemArgs, exact_only: bool, asym_only: bool) -> Result<Table, Failure> {
    let red = reduced(system)?;
    let mut header = vec!["a_minus", "a_plus", "kappa_tilde", "r_tilde", "S", "well_depth", "regime"];
    let mut row = vec![
        num(red.a_minus()),
        num(red.a_plus()),
        num(red.kappa_tilde()),
        num(red.r_tilde()),
    ];
    if asym_only {
        let well = turning_points(&red)?;
        let asym = escape_time_asymptotic(&red, &well)?;
        row.extend([well.stokes.to_string(), opt(well.depth()), asym.regime.name().into(), num(asym.value)]);
        header.push("T_asym");
    } else {
        let res = escape_pipeline(&red)?;
        row.extend([
            res.well.stokes.to_string(),
            opt(res.well.depth()),
            res.regime.name().into(),
            num(res.t_tilde_exact),
            num(res.t_unscaled),
            num(res.c),
            num(res.c_bound),
        ]);
        header.extend(["T_exact", "T_unscaled", "C", "C_bound"]);
        if !exact_only {
            row.push(num(res.t_tilde_asym));
            header.push("T_asym");
        }
    }
    Ok(Table::new(&header, vec![row]))
}

fn occupancy_cmd(system: &SystemArgs, density: bool) -> Result<Table, Failure> {
    let red = reduced(system)?;
    let pot = PiecewisePotential::new(&red)?;
    let dens = stationary_density(&pot)?;
    if density {
        let rows = dens.grid().iter().map(|&(y, p)| vec![num(y), num(p)]).collect();
        return Ok(Table::new(&["y_tilde", "density"], rows));
    }
    let occ = occupation_probability_asymptotic(&pot)?;
    Ok(Table::new(
        &["a_minus", "a_plus", "kappa_tilde", "P_exact", "P_asym", "regime", "norm"],
        vec![vec![
            num(red.a_minus()),
            num(red.a_plus()),
            num(red.kappa_tilde()),
            num(occ.p_exact),
            num(occ.p_asym),
            occ.regime.name().into(),
            num(dens.norm()),
        ]],
    ))
}

#[allow(clippy::too_many_arguments)]
fn mc_cmd(
    mode: McMode,
    system: &SystemArgs,
    paths: usize,
    step: Option<f64>,
    seed: u64,
    t_max: Option<f64>,
    t_burn: Option<f64>,
) -> Result<Table, Failure> {
    let red = reduced(system)?;
    let defaults = McConfig::for_reduced(&red, seed);
    let kt2 = red.kappa_tilde() * red.kappa_tilde();
    let (est, analytic, label) = match mode {
        McMode::Escape => {
            let analytic = escape_time_exact(&red)?;
            let cfg = McConfig {
                step: step.unwrap_or(defaults.step),
                n_paths: paths,
                t_max: t_max.unwrap_or(defaults.t_max),
                ..defaults
            };
            (mc_escape_time(&red, &cfg)?, analytic, "escape")
        }
        McMode::Occupancy => {
            let analytic = occupation_probability_exact(&PiecewisePotential::new(&red)?)?;
            let burn = t_burn.unwrap_or(10.0 * kt2);
            let cfg = McConfig {
                step: step.unwrap_or(defaults.step),
                n_paths: paths,
                t_max: t_max.unwrap_or(burn + 50.0),
                ..defaults
            };
            (mc_occupation(&red, &cfg, burn)?, analytic, "occupancy")
        }
    };
    Ok(Table::new(
        &["mode", "mean", "stderr", "ci_lo", "ci_hi", "n_censored", "n_paths", "seed", "analytic", "within_ci"],
        vec![vec![
            label.into(),
            num(est.mean),
            num(est.stderr),
            num(est.ci95.0),
            num(est.ci95.1),
            est.n_censored.to_string(),
            est.n_paths.to_string(),
            est.seed.to_string(),
            num(analytic),
            est.contains(analytic).to_string(),
        ]],
    ))
}

#[allow(clippy::too_many_arguments)]
fn friction_scan_cmd(
    mu: f64,
    kappa: &[f64],
    z0_min: f64,
    z0_max: f64,
    n: usize,
    eps: f64,
    alpha: f64,
    r: f64,
) -> Result<(Table, usize), Failure> {
    if kappa.is_empty() || n == 0 {
        return Err(Failure::Usage("need at least one kappa and n >= 1".into()));
    }
    if let Some(k) = kappa.iter().find(|k| k.is_nan() || **k <= 0.0) {
        return Err(Failure::Precondition(Error::NonPositiveNoise(*k).to_string()));
    }
    if z0_min.is_nan() || z0_max.is_nan() || z0_min > z0_max {
        return Err(Failure::Precondition(format!("empty z0 range [{z0_min}, {z0_max}]")));
    }
    let base = FrictionParams::new(alpha, mu, eps, kappa[0], r, z0_min)?;
    let grid = linspace(z0_min, z0_max, n);
    let rows = scan_escape_times(&grid, kappa, &base);
    let ok = rows.iter().filter(|r| r.status.succeeded()).count();
    let body = rows
        .iter()
        .map(|r| {
            vec![
                num(r.z0),
                num(r.kappa),
                num(r.mu),
                r.stokes.map(|s| s.to_string()).unwrap_or_default(),
                opt(r.t_exact),
                opt(r.t_asym),
                opt(r.log10_t_exact),
                opt(r.log10_t_asym),
                opt(r.well_depth),
                r.status.label(),
            ]
        })
        .collect();
    let header = [
        "z0", "kappa", "mu", "S", "T_exact", "T_asym", "log10_T_exact", "log10_T_asym", "well_depth", "status",
    ];
    Ok((Table::new(&header, body), ok))
}

fn run(cli: Cli) -> Outcome {
    let started = Instant::now();
    let echo = format!("{:?}", cli.command);
    let (name, table, out, seed, summary) = match &cli.command {
        Command::Classify { a_minus, a_plus } => return classify_cmd(*a_minus, *a_plus),
        Command::Version => {
            println!("stickslip {}", env!("CARGO_PKG_VERSION"));
            return Ok(());
        }
        Command::Escape { system, exact_only, asym_only, out } => {
            ("escape", escape_cmd(system, *exact_only, *asym_only)?, out, None, None)
        }
        Command::Occupancy { system, density, out } => ("occupancy", occupancy_cmd(system, *density)?, out, None, None),
        Command::Mc { mode, system, paths, step, seed, t_max, t_burn, out } => (
            "mc",
            mc_cmd(*mode, system, *paths, *step, *seed, *t_max, *t_burn)?,
            out,
            Some(*seed),
            None,
        ),
        Command::FrictionScan { mu, kappa, z0_min, z0_max, n, eps, alpha, r, out } => {
            let (table, ok) = friction_scan_cmd(*mu, kappa, *z0_min, *z0_max, *n, *eps, *alpha, *r)?;
            let total = table.len();
            ("friction-scan", table, out, None, Some((ok, total)))
        }
    };
    let mut manifest = vec![
        format!("tool: stickslip {}", env!("CARGO_PKG_VERSION")),
        format!("subcommand: {name}"),
        format!("params: {echo}"),
    ];
    if let Some(s) = seed {
        manifest.push(format!("seed: {s}"));
    }
    if let Some((ok, total)) = summary {
        manifest.push(format!("rows: {total} total, {ok} succeeded, {} rejected", total - ok));
    }
    let elapsed = started.elapsed().as_secs_f64();
    output::emit(&table, &manifest, out.out.as_deref(), elapsed).map_err(|e| Failure::Io(e.to_string()))?;
    if let Some((0, _)) = summary {
        return Err(Failure::Empty("no scan row succeeded".into()));
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let argv = match config::expand(std::env::args_os().collect()) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
