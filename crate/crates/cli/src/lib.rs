//! Command-line front end: argument and config handling, initial-state
//! parsing, scans and CSV/SVG output.

pub mod args;
pub mod commands;
pub mod config;
pub mod error;
pub mod init;
pub mod output;
pub mod scan;

use std::ffi::OsString;
use std::io::Write;
use std::path::Path;

use clap::Parser;
use squeezed_core::evolve::IntegratorConfig;
use squeezed_core::{AtomParams, BathParams, Params};

use args::{Cli, Command, Format, OutArgs, PhysArgs, ScanArgs, SolverArgs};
use config::Config;
use error::{exit, CliError, CliResult};
use output::{sink, write_report, Table};
use scan::ScanSpec;

/// Fallback values for the physical parameters of one subcommand.
#[derive(Debug, Clone, Copy)]
struct Defaults {
    n: f64,
    m_phase: f64,
    gamma_hat: f64,
    delta: f64,
}

const GENERIC: Defaults = Defaults {
    n: 0.0,
    m_phase: 0.0,
    gamma_hat: 0.0,
    delta: 0.0,
};

struct Physical {
    bath: BathParams,
    atoms: AtomParams,
    min_uncertainty: bool,
}

fn physical(a: &PhysArgs, cfg: &Config, d: Defaults, force_min: bool) -> CliResult<Physical> {
    let n = cfg.pick(a.n, "N", d.n)?;
    let m_phase = cfg.pick(a.m_phase, "Mphase", d.m_phase)?;
    let flag_min = a.min_uncertainty;
    if force_min && a.m_abs.is_some() {
        return Err(CliError::usage("figure scans use minimum-uncertainty squeezing; drop --Mabs"));
    }
    let m_abs = if force_min { None } else { cfg.pick_opt(a.m_abs, "Mabs")? };
    let cfg_min = cfg.flag(false, "min-uncertainty")?;
    let min_uncertainty = force_min
        || flag_min
        || match (a.m_abs, cfg_min, m_abs) {
            (Some(_), _, _) => false,
            (None, true, Some(_)) => {
                return Err(CliError::usage("config sets both Mabs and min-uncertainty"));
            }
            (None, c, _) => c,
        };
    let bath = if min_uncertainty {
        BathParams::min_uncertainty(n, m_phase)
    } else {
        BathParams::new(n, m_abs.unwrap_or(0.0), m_phase)
    };
    let atoms = AtomParams::new(
        cfg.pick(a.gamma_hat, "gamma-hat", d.gamma_hat)?,
        cfg.pick(a.omega_dd, "omega-dd", 0.0)?,
        cfg.pick(a.delta, "delta", d.delta)?,
    )
    .with_gamma0(cfg.pick(a.gamma0, "gamma0", 1.0)?);
    Ok(Physical {
        bath,
        atoms,
        min_uncertainty,
    })
}

fn params(a: &PhysArgs, cfg: &Config, d: Defaults) -> CliResult<Params> {
    let p = physical(a, cfg, d, false)?;
    Ok(Params::new(p.bath, p.atoms)?)
}

fn solver(a: &SolverArgs, cfg: &Config) -> CliResult<IntegratorConfig> {
    let d = IntegratorConfig::default();
    let c = IntegratorConfig {
        step: cfg.pick(a.step, "step", d.step)?,
        rel_tol: cfg.pick(a.rel_tol, "rel-tol", d.rel_tol)?,
        abs_tol: cfg.pick(a.abs_tol, "abs-tol", d.abs_tol)?,
        t_max: cfg.pick_opt(a.t_max, "t-max")?,
        stationarity_eps: cfg.pick(a.eps, "eps", d.stationarity_eps)?,
    };
    c.validate()?;
    Ok(c)
}

fn format(o: &OutArgs, cfg: &Config) -> CliResult<Format> {
    if let Some(f) = o.format {
        return Ok(f);
    }
    match cfg.raw("format") {
        None | Some("csv") => Ok(Format::Csv),
        Some("svg") => Ok(Format::Svg),
        Some(other) => Err(CliError::usage(format!("unknown format `{other}` (csv or svg)"))),
    }
}

fn csv_only(o: &OutArgs, cfg: &Config, command: &str) -> CliResult<()> {
    match format(o, cfg)? {
        Format::Csv => Ok(()),
        Format::Svg => Err(CliError::usage(format!("{command} writes csv only"))),
    }
}

fn n_scan(a: &ScanArgs, cfg: &Config, base: ScanSpec, default_deltas: &[f64]) -> CliResult<(ScanSpec, Vec<f64>)> {
    let d = Defaults {
        n: 0.0,
        m_phase: base.bath.m_phase,
        gamma_hat: base.atoms.gamma_hat,
        delta: 0.0,
    };
    let phys = physical(&a.phys, cfg, d, true)?;
    if a.phys.n.is_some() {
        return Err(CliError::usage("N is the scan variable; use --n-min/--n-max"));
    }
    let deltas = match cfg.list(a.deltas.clone(), "deltas")? {
        Some(v) => v,
        None => match cfg.pick_opt(a.phys.delta, "delta")? {
            Some(x) => vec![x],
            None => default_deltas.to_vec(),
        },
    };
    if deltas.is_empty() {
        return Err(CliError::usage("need at least one detuning"));
    }
    let spec = ScanSpec {
        lo: cfg.pick(a.n_min, "n-min", base.lo)?,
        hi: cfg.pick(a.n_max, "n-max", base.hi)?,
        count: cfg.pick(a.points, "points", base.count)?,
        bath: phys.bath,
        atoms: phys.atoms,
        min_uncertainty: phys.min_uncertainty,
        ..base
    };
    Ok((spec, deltas))
}

fn emit(table: &Table, o: &OutArgs, cfg: &Config) -> CliResult<()> {
    table.emit(o.out.as_deref(), format(o, cfg)?)
}

fn dispatch(cli: Cli) -> CliResult<()> {
    let cfg = match &cli.config {
        Some(p) => Config::load(p)?,
        None => Config::default(),
    };
    match cli.command {
        Command::Evolve(a) => {
            let p = params(&a.phys, &cfg, GENERIC)?;
            let init: String = cfg.pick(a.init.clone(), "init", "g".to_owned())?;
            let rho0 = init::parse(&init)?;
            let t = cfg.pick(a.t, "t", 10.0)?;
            let samples = cfg.pick(a.samples, "samples", 200)?;
            if samples == 0 {
                return Err(CliError::usage("samples must be positive"));
            }
            let table = commands::evolve(&p, &rho0, &init, t, samples, &solver(&a.solver, &cfg)?)?;
            emit(&table, &a.out, &cfg)
        }
        Command::Steady(a) => {
            csv_only(&a.out, &cfg, "steady")?;
            let p = params(&a.phys, &cfg, GENERIC)?;
            let init: String = cfg.pick(a.init.clone(), "init", "g".to_owned())?;
            let rho0 = init::parse(&init)?;
            let (table, err) = commands::steady(&p, &rho0, &init, &solver(&a.solver, &cfg)?)?;
            emit(&table, &a.out, &cfg)?;
            match err {
                Some(e) => Err(e.into()),
                None => Ok(()),
            }
        }
        Command::Fig1(a) => {
            let (spec, deltas) = n_scan(&a, &cfg, commands::default_fig1(), &commands::FIG1_DELTAS)?;
            emit(&commands::fig1(&spec, &deltas)?, &a.out, &cfg)
        }
        Command::Fig3(a) => {
            let (spec, deltas) = n_scan(&a, &cfg, commands::default_fig3(), &commands::FIG3_DELTAS)?;
            emit(&commands::fig3(&spec, &deltas)?, &a.out, &cfg)
        }
        Command::Fig2(a) => {
            let base = commands::default_fig2();
            let d = Defaults {
                n: base.bath.n_mean,
                m_phase: base.bath.m_phase,
                gamma_hat: base.atoms.gamma_hat,
                delta: base.atoms.delta,
            };
            let phys = physical(&a.phys, &cfg, d, true)?;
            let spec = ScanSpec {
                count: cfg.pick(a.points, "points", base.count)?,
                bath: phys.bath,
                atoms: phys.atoms,
                ..base
            };
            emit(&commands::fig2(&spec)?, &a.out, &cfg)
        }
        Command::Decompose(a) => {
            csv_only(&a.out, &cfg, "decompose")?;
            let p = params(&a.phys, &cfg, Defaults { gamma_hat: 1.0, ..GENERIC })?;
            let f = cfg
                .pick_opt(a.fidelity, "fidelity")?
                .ok_or_else(|| CliError::usage("decompose needs --fidelity"))?;
            let (text, rows) = commands::decompose_report(&p, f)?;
            let meta = commands::report_meta("decompose", &p);
            if let Some(path) = &a.out.out {
                let mut w = sink(Some(path))?;
                write_report(&mut w, &meta, &rows)?;
                w.flush()?;
            }
            std::io::stdout().lock().write_all(text.as_bytes())?;
            Ok(())
        }
        Command::Thresholds(a) => {
            csv_only(&a.out, &cfg, "thresholds")?;
            let p = params(&a.phys, &cfg, Defaults { gamma_hat: 1.0, ..GENERIC })?;
            let rows = commands::threshold_rows(&p)?;
            let mut w = sink(a.out.out.as_deref())?;
            write_report(&mut w, &commands::report_meta("thresholds", &p), &rows)?;
            w.flush()?;
            Ok(())
        }
    }
}

/// Runs the command line and returns the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { exit::VALIDATION } else { exit::OK };
        }
    };
    match dispatch(cli) {
        Ok(()) => exit::OK,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

/// Reads a CSV written by any scan command.
pub fn load_table(path: &Path) -> CliResult<Table> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_owned(),
        source,
    })?;
    output::read_csv(&text)
}
