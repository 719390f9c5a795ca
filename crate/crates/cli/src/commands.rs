use std::fmt::Write as _;

use squeezed_core::asymptotic::{decompose, dicke_asymptotic, reconstruction_residual, unique_asymptotic};
use squeezed_core::entanglement::{asymptotic_concurrence, concurrence, concurrence_unique, thresholds};
use squeezed_core::evolve::{evolve_to_stationary, integrate_sampled, uniform_times, IntegratorConfig};
use squeezed_core::{fidelity_antisymmetric, AtomParams, BathParams, DensityMatrix, Error, Params, Regime};

use crate::error::CliResult;
use crate::output::Table;
use crate::scan::{ScanSpec, Variable};

pub const VERSION: &str = concat!("squeezed-cli ", env!("CARGO_PKG_VERSION"));

pub const STATE_COLUMNS: [&str; 9] = [
    "t",
    "rho_ee",
    "rho_ss",
    "rho_aa",
    "rho_gg",
    "re_rho_eg",
    "im_rho_eg",
    "concurrence",
    "fidelity",
];

pub fn param_echo(p: &Params) -> String {
    let (b, a) = (p.bath(), p.atoms());
    format!(
        "N = {:?}, Mabs = {:?}, Mphase = {:?}, gamma0 = {:?}, gamma_hat = {:?}, omega_dd = {:?}, delta = {:?}",
        b.n_mean, b.m_abs, b.m_phase, a.gamma0, a.gamma_hat, a.omega_dd, a.delta
    )
}

fn meta(command: &str, extra: impl IntoIterator<Item = String>) -> Vec<String> {
    let mut m = vec![VERSION.to_owned(), format!("command = {command}")];
    m.extend(extra);
    m
}

fn cfg_echo(cfg: &IntegratorConfig) -> String {
    format!(
        "step = {:?}, rel_tol = {:?}, abs_tol = {:?}, t_max = {}, eps = {:?}",
        cfg.step,
        cfg.rel_tol,
        cfg.abs_tol,
        cfg.t_max.map_or("auto".to_owned(), |t| format!("{t:?}")),
        cfg.stationarity_eps
    )
}

/// `ρ_ee, ρ_ss, ρ_aa, ρ_gg, Re ρ_eg, Im ρ_eg, C, F`.
pub fn state_row(rho: &DensityMatrix) -> Vec<f64> {
    let c = rho.to_collective();
    let d = |i| c.entry(i, i).re;
    let eg = c.entry(0, 3);
    vec![d(0), d(1), d(2), d(3), eg.re, eg.im, concurrence(rho), fidelity_antisymmetric(rho)]
}

pub fn evolve(p: &Params, rho0: &DensityMatrix, init: &str, t: f64, samples: usize, cfg: &IntegratorConfig) -> CliResult<Table> {
    let mut table = Table::new(
        meta(
            "evolve",
            [param_echo(p), format!("init = {init}, t = {t:?}, samples = {samples}"), cfg_echo(cfg)],
        ),
        &STATE_COLUMNS,
    );
    for s in integrate_sampled(rho0, p, &uniform_times(t, samples), cfg)? {
        let mut row = vec![s.t];
        row.extend(state_row(&s.state));
        table.push(row);
    }
    Ok(table)
}

pub const STEADY_COLUMNS: [&str; 13] = [
    "elapsed",
    "residual",
    "converged",
    "rho_ee",
    "rho_ss",
    "rho_aa",
    "rho_gg",
    "re_rho_eg",
    "im_rho_eg",
    "concurrence",
    "fidelity",
    "closed_form_concurrence",
    "max_abs_diff",
];

/// Integrates to stationarity. On timeout the table holds the last state with
/// `converged = 0` and the error is returned alongside.
pub fn steady(p: &Params, rho0: &DensityMatrix, init: &str, cfg: &IntegratorConfig) -> CliResult<(Table, Option<Error>)> {
    let closed = match p.regime() {
        Regime::Separated => unique_asymptotic(p)?,
        Regime::Dicke => dicke_asymptotic(p, fidelity_antisymmetric(rho0).clamp(0.0, 1.0))?,
    };
    let (state, elapsed, residual, err) = match evolve_to_stationary(rho0, p, cfg) {
        Ok(s) => (s.state, s.elapsed, s.residual, None),
        Err(Error::NotConverged { best, elapsed, residual }) => {
            let e = Error::NotConverged {
                best: best.clone(),
                elapsed,
                residual,
            };
            (*best, elapsed, residual, Some(e))
        }
        Err(e) => return Err(e.into()),
    };
    let mut table = Table::new(
        meta(
            "steady",
            [
                param_echo(p),
                format!("init = {init}, horizon = {:?}", cfg.horizon(p)),
                cfg_echo(cfg),
            ],
        ),
        &STEADY_COLUMNS,
    );
    let mut row = vec![elapsed, residual, if err.is_none() { 1.0 } else { 0.0 }];
    row.extend(state_row(&state));
    row.push(concurrence(&closed));
    row.push(state.max_abs_diff(&closed));
    table.push(row);
    Ok((table, err))
}

fn delta_label(d: f64) -> String {
    format!("C(delta={d})")
}

fn scan_by_delta<F>(command: &str, spec: &ScanSpec, deltas: &[f64], f: F) -> CliResult<Table>
where
    F: Fn(&Params) -> squeezed_core::Result<f64> + Sync,
{
    spec.validate()?;
    let labels: Vec<String> = deltas.iter().map(|&d| delta_label(d)).collect();
    let mut header = vec![spec.variable.name()];
    header.extend(labels.iter().map(String::as_str));
    let echo = format!(
        "{} in [{:?}, {:?}] ({} points), Mphase = {:?}, min_uncertainty = {}, gamma0 = {:?}, gamma_hat = {:?}, omega_dd = {:?}",
        spec.variable.name(),
        spec.lo,
        spec.hi,
        spec.count,
        spec.bath.m_phase,
        spec.min_uncertainty,
        spec.atoms.gamma0,
        spec.atoms.gamma_hat,
        spec.atoms.omega_dd
    );
    let mut table = Table::new(meta(command, [echo]), &header);
    let mut columns = Vec::with_capacity(deltas.len());
    for &d in deltas {
        let mut s = spec.clone();
        s.atoms.delta = d;
        columns.push(s.run(|p, _| f(p))?);
    }
    for (i, x) in spec.grid().into_iter().enumerate() {
        let mut row = vec![x];
        row.extend(columns.iter().map(|c| c[i]));
        table.push(row);
    }
    Ok(table)
}

pub const FIG1_DELTAS: [f64; 3] = [0.0, 0.5, 1.0];
pub const FIG3_DELTAS: [f64; 3] = [0.0, 0.8, 2.0];

/// Concurrence of the unique asymptotic state against `N`.
pub fn fig1(spec: &ScanSpec, deltas: &[f64]) -> CliResult<Table> {
    scan_by_delta("fig1", spec, deltas, concurrence_unique)
}

/// Dicke-limit concurrence at `F = 0` against `N`.
pub fn fig3(spec: &ScanSpec, deltas: &[f64]) -> CliResult<Table> {
    scan_by_delta("fig3", spec, deltas, |p| asymptotic_concurrence(p, 0.0))
}

/// Dicke-limit concurrence against `F`.
pub fn fig2(spec: &ScanSpec) -> CliResult<Table> {
    spec.validate()?;
    let p = spec.params_at(spec.lo)?;
    let t = thresholds(&p)?;
    let mut table = Table::new(
        meta(
            "fig2",
            [
                param_echo(&p),
                format!("F in [{:?}, {:?}] ({} points)", spec.lo, spec.hi, spec.count),
                format!("F_cr = {:?}, F1 = {:?}, F2 = {:?}", t.f_cr, t.f1, t.f2),
            ],
        ),
        &["F", "C"],
    );
    let values = spec.run(asymptotic_concurrence)?;
    for (f, c) in spec.grid().into_iter().zip(values) {
        table.push(vec![f, c]);
    }
    Ok(table)
}

fn n_scan(gamma_hat: f64) -> ScanSpec {
    ScanSpec {
        variable: Variable::N,
        lo: 0.0,
        hi: 3.0,
        count: 301,
        bath: BathParams::vacuum(),
        atoms: AtomParams::new(gamma_hat, 0.0, 0.0),
        min_uncertainty: true,
    }
}

pub fn default_fig1() -> ScanSpec {
    n_scan(0.85)
}

pub fn default_fig3() -> ScanSpec {
    n_scan(1.0)
}

pub fn default_fig2() -> ScanSpec {
    ScanSpec {
        variable: Variable::F,
        lo: 0.0,
        hi: 1.0,
        count: 201,
        bath: BathParams::min_uncertainty(1.0, 0.0),
        atoms: AtomParams::dicke(0.0, 0.8),
        min_uncertainty: true,
    }
}

/// Human-readable report and key/value rows.
pub fn decompose_report(p: &Params, f: f64) -> CliResult<(String, Vec<(&'static str, f64)>)> {
    let mix = decompose(p, f)?;
    let t = thresholds(p)?;
    let residual = reconstruction_residual(p, f, &mix)?;
    let g = mix.gibbs.to_canonical();
    let gd = [0, 1, 2, 3].map(|i| g.entry(i, i).re);
    let (psi00, psi11) = (mix.psi[3], mix.psi[0]);
    let undefined = |v: Option<f64>| v.map_or("undefined".to_owned(), |x| format!("{x:?}"));

    let mut s = String::new();
    let _ = writeln!(s, "{}", param_echo(p));
    let _ = writeln!(s, "F = {f:?}   F_cr = {:?}", t.f_cr);
    let _ = writeln!(s, "antisymmetric weight p = {:?}", mix.p);
    let _ = writeln!(s, "pure weight q = {:?}", mix.q);
    let _ = writeln!(s, "Gibbs weight 1-p-q = {:?}", mix.gibbs_weight());
    let _ = writeln!(s, "beta*omega = {}", undefined(mix.beta_omega));
    let _ = writeln!(s, "beta*omega1 = {}", undefined(mix.beta_omega1));
    let _ = writeln!(
        s,
        "psi = {:?}|00> + ({:?} {:+?}i)|11>",
        psi00.re, psi11.re, psi11.im
    );
    let _ = writeln!(
        s,
        "rho_beta diag (|11>,|10>,|01>,|00>) = ({:?}, {:?}, {:?}, {:?})",
        gd[0], gd[1], gd[2], gd[3]
    );
    if mix.degenerate {
        let _ = writeln!(s, "degenerate: the Gibbs part is empty or its temperature is singular");
    }
    let _ = writeln!(s, "reconstruction residual = {residual:e}");

    let rows = vec![
        ("F", f),
        ("F_cr", t.f_cr),
        ("p", mix.p),
        ("q", mix.q),
        ("gibbs_weight", mix.gibbs_weight()),
        ("beta_omega", mix.beta_omega.unwrap_or(f64::NAN)),
        ("beta_omega1", mix.beta_omega1.unwrap_or(f64::NAN)),
        ("psi_00", psi00.re),
        ("re_psi_11", psi11.re),
        ("im_psi_11", psi11.im),
        ("gibbs_11", gd[0]),
        ("gibbs_10", gd[1]),
        ("gibbs_01", gd[2]),
        ("gibbs_00", gd[3]),
        ("degenerate", if mix.degenerate { 1.0 } else { 0.0 }),
        ("residual", residual),
    ];
    Ok((s, rows))
}

pub fn threshold_rows(p: &Params) -> CliResult<Vec<(&'static str, f64)>> {
    let t = thresholds(p)?;
    Ok(vec![
        ("F_cr", t.f_cr),
        ("F1", t.f1),
        ("F2", t.f2),
        ("C(F=0)", asymptotic_concurrence(p, 0.0)?),
        ("C(F=1)", asymptotic_concurrence(p, 1.0)?),
    ])
}

pub fn report_meta(command: &str, p: &Params) -> Vec<String> {
    meta(command, [param_echo(p)])
}
