use rayon::prelude::*;

use super::table::{Cell, Table};
use super::{CommandKind, ComponentChoice, LimitKind, RunConfig, EXIT_FAILURE, EXIT_OK};
use crate::error::{Error, Result};
use crate::model::{map_kappa, PhysicalParams, QuantumNumbers, SymmetryMode, UnitSystem};
use crate::oracle::{analytic_level, verify_state, SolveOptions, VerificationReport};
use crate::spectrum::{
    duality_spectra, energy_constant_mass, s_wave_energy, solve_energy, EnergySolution, SWaveBranch,
};
use crate::wavefunctions::{
    companion_component, lower_spinor_on, nonrelativistic_wavefunction, upper_spinor_on, GridSpec,
    RadialFunction,
};

pub(super) struct Outcome {
    pub table: Table,
    pub code: i32,
    pub notes: Vec<String>,
}

impl Outcome {
    fn ok(table: Table) -> Self {
        Self {
            table,
            code: EXIT_OK,
            notes: Vec::new(),
        }
    }
}

pub(super) fn dispatch(cfg: &RunConfig) -> Result<Outcome> {
    match cfg.command {
        CommandKind::Spectrum => run_spectrum(cfg),
        CommandKind::Wavefunction => run_wavefunction(cfg),
        CommandKind::Verify => run_verify(cfg),
        CommandKind::Sweep => run_sweep(cfg),
        CommandKind::Limits(LimitKind::Nonrelativistic) => run_nonrel(cfg),
        CommandKind::Limits(LimitKind::SWave) => run_s_wave(cfg),
        CommandKind::Limits(LimitKind::ConstantMass) => run_constant_mass(cfg),
        CommandKind::Limits(LimitKind::Duality) => run_duality(cfg),
    }
}

fn params_for(cfg: &RunConfig, q: f64, b: f64, a: f64) -> Result<PhysicalParams> {
    match cfg.units {
        UnitSystem::Natural => {
            let p = PhysicalParams::natural(q, b, a);
            p.validate()?;
            Ok(p)
        }
        UnitSystem::Physical {
            m0_mev,
            hbar_c_mev_fm,
        } => PhysicalParams::new(m0_mev, hbar_c_mev_fm, q, b, a),
    }
}

fn header(cfg: &RunConfig, table: &mut Table) {
    table.meta(format!(
        "dirac-pdm {} {}",
        env!("CARGO_PKG_VERSION"),
        cfg.command.name()
    ));
    match cfg.units {
        UnitSystem::Natural => {
            table.meta("units=natural m0=1 hbar_c=1");
            table.meta("energy unit: m0c^2; length unit: hbar/(m0c)");
        }
        UnitSystem::Physical {
            m0_mev,
            hbar_c_mev_fm,
        } => {
            table.meta(format!(
                "units=physical m0={} MeV hbar_c={} MeV fm",
                super::format_float(m0_mev),
                super::format_float(hbar_c_mev_fm)
            ));
            table.meta("energy unit: MeV; length unit: fm");
        }
    }
}

/// A parameter point with its quantum numbers.
#[derive(Debug, Clone, Copy)]
struct Case {
    mode: SymmetryMode,
    q: f64,
    b: f64,
    a: f64,
    kappa: i32,
    n: u32,
}

/// Cartesian product in output order: mode, q, b, A, κ, n.
fn cases(cfg: &RunConfig) -> Vec<Case> {
    let mut out = Vec::new();
    for &mode in &cfg.modes {
        for &q in &cfg.q {
            for &b in &cfg.b {
                for &a in &cfg.a {
                    for &kappa in &cfg.kappa {
                        for &n in &cfg.n {
                            out.push(Case {
                                mode,
                                q,
                                b,
                                a,
                                kappa,
                                n,
                            });
                        }
                    }
                }
            }
        }
    }
    out
}

fn key_cells(c: &Case) -> Vec<Cell> {
    vec![
        Cell::text(c.mode.as_str()),
        Cell::Int(i64::from(c.n)),
        Cell::Int(i64::from(c.kappa)),
        Cell::Float(c.q),
        Cell::Float(c.b),
        Cell::Float(c.a),
    ]
}

fn solve_case(cfg: &RunConfig, c: &Case) -> Result<EnergySolution> {
    let p = params_for(cfg, c.q, c.b, c.a)?;
    let qn = QuantumNumbers::new(c.n, c.kappa)?;
    solve_energy(&p, &qn, c.mode)
}

fn validity(sol: &EnergySolution) -> &'static str {
    match (sol.bound_root(), sol.particle) {
        (Some(_), _) => "true",
        (None, Some(r)) => r.flags.reason(),
        (None, None) => "no_real_solution",
    }
}

fn run_spectrum(cfg: &RunConfig) -> Result<Outcome> {
    let mut table = Table::new(vec![
        "mode",
        "n",
        "kappa",
        "l",
        "ltilde",
        "q",
        "b",
        "A",
        "E_particle",
        "E_antiparticle",
        "epsilon",
        "index",
        "valid",
        "residual",
    ]);
    header(cfg, &mut table);
    for c in cases(cfg) {
        let labels = map_kappa(c.kappa)?;
        let mut row = vec![
            Cell::text(c.mode.as_str()),
            Cell::Int(i64::from(c.n)),
            Cell::Int(i64::from(c.kappa)),
            Cell::Int(i64::from(labels.l)),
            Cell::Int(i64::from(labels.l_tilde)),
            Cell::Float(c.q),
            Cell::Float(c.b),
            Cell::Float(c.a),
        ];
        match solve_case(cfg, &c) {
            Ok(sol) => {
                let residual = sol.roots().map(|r| r.residual.abs()).fold(0.0, f64::max);
                row.extend([
                    Cell::opt(sol.e_particle()),
                    Cell::opt(sol.e_antiparticle()),
                    Cell::opt(sol.bound_root().map(|r| r.epsilon)),
                    Cell::Float(sol.index),
                    Cell::text(validity(&sol)),
                    Cell::Float(residual),
                ]);
            }
            Err(e) => row.extend([
                Cell::Empty,
                Cell::Empty,
                Cell::Empty,
                Cell::Empty,
                Cell::text(e.reason_code()),
                Cell::Empty,
            ]),
        }
        table.push(row);
    }
    Ok(Outcome::ok(table))
}

fn single<T: Copy>(name: &str, values: &[T]) -> Result<T> {
    match values {
        [v] => Ok(*v),
        _ => Err(Error::Config(format!(
            "this command needs a single value for --{name}, got {}",
            values.len()
        ))),
    }
}

fn grid_for(cfg: &RunConfig) -> Result<GridSpec> {
    let d = GridSpec::default();
    let grid = GridSpec {
        r_min: cfg.r_min.unwrap_or(d.r_min),
        r_max: cfg.r_max.unwrap_or(d.r_max),
        points: cfg.points.unwrap_or(d.points),
    };
    grid.validate()?;
    Ok(grid)
}

fn wave_header(table: &mut Table, f: &RadialFunction, c: &Case) {
    table.meta(format!(
        "mode={} n={} kappa={} l={} ltilde={} q={} b={} A={}",
        c.mode,
        c.n,
        c.kappa,
        f.qn.l(),
        f.qn.l_tilde(),
        super::format_float(c.q),
        super::format_float(c.b),
        super::format_float(c.a)
    ));
    table.meta(format!("E={}", super::format_float(f.energy)));
    table.meta(format!(
        "N={} epsilon={} index={}",
        super::format_float(f.normalization()),
        super::format_float(f.epsilon),
        super::format_float(f.index)
    ));
    table.meta(format!(
        "norm={} norm_error={} norm_upper_limit={}",
        super::format_float(f.norm.integral),
        super::format_float(f.norm.error_estimate),
        super::format_float(f.norm.upper_limit)
    ));
    if f.warnings.index_not_strict {
        table.meta("warning: index <= 0, wavefunction is not regular at the origin");
    }
}

fn run_wavefunction(cfg: &RunConfig) -> Result<Outcome> {
    let c = Case {
        mode: single("mode", &cfg.modes)?,
        q: single("q", &cfg.q)?,
        b: single("b", &cfg.b)?,
        a: single("A", &cfg.a)?,
        kappa: single("kappa", &cfg.kappa)?,
        n: single("n", &cfg.n)?,
    };
    let grid = grid_for(cfg)?;
    let p = params_for(cfg, c.q, c.b, c.a)?;
    let qn = QuantumNumbers::new(c.n, c.kappa)?;
    let sol = solve_energy(&p, &qn, c.mode)?;
    let energy = sol.bound_energy().ok_or_else(|| {
        Error::Precondition(format!("no bound {} level: {}", c.mode, validity(&sol)))
    })?;
    let dominant = match c.mode {
        SymmetryMode::Spin => upper_spinor_on(&p, &qn, energy, &grid)?,
        SymmetryMode::Pseudospin => lower_spinor_on(&p, &qn, energy, &grid)?,
    };
    let (d_sym, c_sym) = match c.mode {
        SymmetryMode::Spin => ("F", "G"),
        SymmetryMode::Pseudospin => ("G", "F"),
    };
    let mut table = match cfg.component {
        ComponentChoice::Dominant => Table::new(vec!["r", d_sym]),
        ComponentChoice::Companion => Table::new(vec!["r", c_sym]),
        ComponentChoice::Both => Table::new(vec!["r", d_sym, c_sym]),
    };
    header(cfg, &mut table);
    wave_header(&mut table, &dominant, &c);
    let partner = match cfg.component {
        ComponentChoice::Dominant => None,
        _ => {
            table.meta(format!("{c_sym} is the unnormalized companion of {d_sym}"));
            Some(companion_component(&dominant, &p, energy, c.mode)?)
        }
    };
    for (i, &r) in dominant.grid.iter().enumerate() {
        let mut row = vec![Cell::Float(r)];
        match (&partner, cfg.component) {
            (_, ComponentChoice::Dominant) => row.push(Cell::Float(dominant.values[i])),
            (Some(g), ComponentChoice::Companion) => row.push(Cell::Float(g.values[i])),
            (Some(g), _) => row.extend([Cell::Float(dominant.values[i]), Cell::Float(g.values[i])]),
            (None, _) => unreachable!("companion computed above"),
        }
        table.push(row);
    }
    Ok(Outcome::ok(table))
}

enum VerifyRow {
    Invalid(Case, &'static str),
    Failed(Case, Error),
    Done(Case, Box<VerificationReport>),
}

fn verify_case(cfg: &RunConfig, c: Case, opts: &SolveOptions) -> VerifyRow {
    let p = match params_for(cfg, c.q, c.b, c.a) {
        Ok(p) => p,
        Err(e) => return VerifyRow::Invalid(c, e.reason_code()),
    };
    let qn = match QuantumNumbers::new(c.n, c.kappa) {
        Ok(qn) => qn,
        Err(e) => return VerifyRow::Invalid(c, e.reason_code()),
    };
    // regimes without an analytic bound level are skipped, not failed
    if let Err(e) = analytic_level(&p, &qn, c.mode) {
        return VerifyRow::Invalid(c, e.reason_code());
    }
    match verify_state(&p, &qn, c.mode, opts) {
        Ok(report) => VerifyRow::Done(c, Box::new(report)),
        Err(e) => VerifyRow::Failed(c, e),
    }
}

fn solve_options(cfg: &RunConfig) -> SolveOptions {
    let d = SolveOptions::default();
    SolveOptions {
        steps: cfg.steps.unwrap_or(d.steps),
        r_max: cfg.r_max.unwrap_or(d.r_max),
        with_full: true,
    }
}

fn run_verify(cfg: &RunConfig) -> Result<Outcome> {
    let opts = solve_options(cfg);
    let rows: Vec<VerifyRow> = cases(cfg)
        .into_par_iter()
        .map(|c| verify_case(cfg, c, &opts))
        .collect();
    let mut table = Table::new(vec![
        "mode",
        "n",
        "kappa",
        "q",
        "b",
        "A",
        "E_analytic",
        "E_numeric",
        "abs_deviation",
        "rel_deviation",
        "residual",
        "E_full",
        "approximation_gap",
        "status",
    ]);
    header(cfg, &mut table);
    table.meta(format!(
        "tol={} steps={} rmax={}",
        super::format_float(cfg.tol),
        opts.steps,
        super::format_float(opts.r_max)
    ));
    let mut notes = Vec::new();
    let (mut checked, mut skipped) = (0usize, 0usize);
    for row in rows {
        let cells = match row {
            VerifyRow::Invalid(c, reason) => {
                skipped += 1;
                let mut cells = key_cells(&c);
                cells.extend(std::iter::repeat_n(Cell::Empty, 7));
                cells.push(Cell::text(reason));
                cells
            }
            VerifyRow::Failed(c, e) => {
                checked += 1;
                notes.push(format!(
                    "violation: {} n={} kappa={} q={} b={} A={}: {e}",
                    c.mode, c.n, c.kappa, c.q, c.b, c.a
                ));
                let mut cells = key_cells(&c);
                cells.extend(std::iter::repeat_n(Cell::Empty, 7));
                cells.push(Cell::text(e.reason_code()));
                cells
            }
            VerifyRow::Done(c, r) => {
                checked += 1;
                let pass = r.abs_deviation < cfg.tol;
                if !pass {
                    notes.push(format!(
                        "violation: {} n={} kappa={} q={} b={} A={}: |E_numeric - E_analytic| = {:e}",
                        c.mode, c.n, c.kappa, c.q, c.b, c.a, r.abs_deviation
                    ));
                }
                let status = match (&r.full_failure, pass) {
                    (_, false) => "violation".to_string(),
                    (Some(f), true) => format!("ok;full={f}"),
                    (None, true) => "ok".to_string(),
                };
                let mut cells = key_cells(&c);
                cells.extend([
                    Cell::Float(r.e_analytic),
                    Cell::Float(r.e_numeric),
                    Cell::Float(r.abs_deviation),
                    Cell::Float(r.rel_deviation),
                    Cell::Float(r.residual),
                    Cell::opt(r.e_full),
                    Cell::opt(r.approximation_gap),
                    Cell::text(status),
                ]);
                cells
            }
        };
        table.push(cells);
    }
    let violations = notes.len();
    notes.push(format!(
        "verify: {checked} states checked, {skipped} invalid regimes skipped, {violations} violations"
    ));
    Ok(Outcome {
        table,
        code: if violations == 0 {
            EXIT_OK
        } else {
            EXIT_FAILURE
        },
        notes,
    })
}

/// Least-squares slope of `ln gap` against `ln b`.
pub(crate) fn fitted_order(points: &[(f64, f64)]) -> Option<f64> {
    let logs: Vec<(f64, f64)> = points
        .iter()
        .filter(|(b, g)| *b > 0.0 && *g > 0.0)
        .map(|(b, g)| (b.ln(), g.ln()))
        .collect();
    if logs.len() < 2 {
        return None;
    }
    let n = logs.len() as f64;
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / n;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = logs.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = logs.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

fn run_sweep(cfg: &RunConfig) -> Result<Outcome> {
    let opts = solve_options(cfg);
    let all = cases(cfg);
    let rows: Vec<VerifyRow> = all
        .par_iter()
        .map(|c| verify_case(cfg, *c, &opts))
        .collect();
    let series_key = |c: &Case| (c.mode.as_str(), c.q.to_bits(), c.a.to_bits(), c.kappa, c.n);
    let mut table = Table::new(vec![
        "mode",
        "n",
        "kappa",
        "q",
        "b",
        "A",
        "E_analytic",
        "E_reduced",
        "E_full",
        "approximation_gap",
        "fitted_order",
        "status",
    ]);
    header(cfg, &mut table);
    table.meta("fitted_order: least-squares slope of ln(gap) against ln(b) within each (mode, q, A, kappa, n) series");
    let mut notes = Vec::new();
    let mut code = EXIT_OK;
    let gaps: Vec<Option<(f64, f64)>> = rows
        .iter()
        .map(|r| match r {
            VerifyRow::Done(c, rep) => rep.approximation_gap.map(|g| (c.b, g)),
            _ => None,
        })
        .collect();
    for (i, row) in rows.iter().enumerate() {
        let c = &all[i];
        let series: Vec<(f64, f64)> = all
            .iter()
            .zip(&gaps)
            .filter(|(o, _)| series_key(o) == series_key(c))
            .filter_map(|(_, g)| *g)
            .collect();
        let order = fitted_order(&series);
        let mut cells = key_cells(c);
        match row {
            VerifyRow::Invalid(_, reason) => {
                cells.extend(std::iter::repeat_n(Cell::Empty, 5));
                cells.push(Cell::text(*reason));
            }
            VerifyRow::Failed(_, e) => {
                code = EXIT_FAILURE;
                notes.push(format!(
                    "failure: {} n={} kappa={} q={} b={}: {e}",
                    c.mode, c.n, c.kappa, c.q, c.b
                ));
                cells.extend(std::iter::repeat_n(Cell::Empty, 5));
                cells.push(Cell::text(e.reason_code()));
            }
            VerifyRow::Done(_, r) => {
                cells.extend([
                    Cell::Float(r.e_analytic),
                    Cell::Float(r.e_numeric),
                    Cell::opt(r.e_full),
                    Cell::opt(r.approximation_gap),
                    Cell::opt(order),
                    Cell::text(
                        r.full_failure
                            .as_deref()
                            .map_or("ok".to_string(), |f| format!("full={f}")),
                    ),
                ]);
            }
        }
        table.push(cells);
    }
    Ok(Outcome { table, code, notes })
}

fn run_nonrel(cfg: &RunConfig) -> Result<Outcome> {
    let (q, b) = (single("q", &cfg.q)?, single("b", &cfg.b)?);
    let (n, l) = (single("n", &cfg.n)?, single("l", &cfg.l)?);
    let p = params_for(cfg, q, b, 0.0)?;
    let f = nonrelativistic_wavefunction(&p, n, l)?;
    let mut table = Table::new(vec!["r", "F"]);
    header(cfg, &mut table);
    table.meta(format!(
        "schrodinger limit n={n} l={l} q={} b={} mu=m0",
        super::format_float(q),
        super::format_float(b)
    ));
    table.meta(format!("E={}", super::format_float(f.energy)));
    table.meta(format!(
        "N={} k={} index={}",
        super::format_float(f.normalization()),
        super::format_float(f.epsilon),
        super::format_float(f.index)
    ));
    table.meta(format!("norm={}", super::format_float(f.norm.integral)));
    for (r, v) in f.grid.iter().zip(&f.values) {
        table.push(vec![Cell::Float(*r), Cell::Float(*v)]);
    }
    Ok(Outcome::ok(table))
}

fn energy_cells(res: Result<EnergySolution>) -> Vec<Cell> {
    match res {
        Ok(sol) => vec![
            Cell::opt(sol.e_particle()),
            Cell::opt(sol.e_antiparticle()),
            Cell::opt(sol.bound_energy()),
            Cell::text(validity(&sol)),
        ],
        Err(e) => vec![
            Cell::Empty,
            Cell::Empty,
            Cell::Empty,
            Cell::text(e.reason_code()),
        ],
    }
}

fn run_s_wave(cfg: &RunConfig) -> Result<Outcome> {
    let mut table = Table::new(vec![
        "mode",
        "n",
        "kappa",
        "q",
        "b",
        "A",
        "E_particle",
        "E_antiparticle",
        "E_bound",
        "valid",
    ]);
    header(cfg, &mut table);
    for &mode in &cfg.modes {
        let branch = match mode {
            SymmetryMode::Spin => SWaveBranch::Spin,
            SymmetryMode::Pseudospin => SWaveBranch::Pseudospin,
        };
        for &q in &cfg.q {
            for &b in &cfg.b {
                for &a in &cfg.a {
                    for &n in &cfg.n {
                        let c = Case {
                            mode,
                            q,
                            b,
                            a,
                            kappa: branch.kappa(),
                            n,
                        };
                        let mut row = key_cells(&c);
                        row.extend(energy_cells(
                            params_for(cfg, q, b, a).and_then(|p| s_wave_energy(&p, n, branch)),
                        ));
                        table.push(row);
                    }
                }
            }
        }
    }
    Ok(Outcome::ok(table))
}

fn run_constant_mass(cfg: &RunConfig) -> Result<Outcome> {
    let mut table = Table::new(vec![
        "mode",
        "n",
        "kappa",
        "q",
        "b",
        "A",
        "E_particle",
        "E_antiparticle",
        "E_bound",
        "valid",
    ]);
    header(cfg, &mut table);
    for c in cases(cfg) {
        let mut row = key_cells(&c);
        row.extend(energy_cells(params_for(cfg, c.q, c.b, c.a).and_then(|p| {
            let qn = QuantumNumbers::new(c.n, c.kappa)?;
            energy_constant_mass(&p, &qn, c.mode)
        })));
        table.push(row);
    }
    Ok(Outcome::ok(table))
}

fn run_duality(cfg: &RunConfig) -> Result<Outcome> {
    let mut table = Table::new(vec![
        "n",
        "kappa",
        "q",
        "b",
        "E1_particle",
        "E1_antiparticle",
        "E2_particle",
        "E2_antiparticle",
        "mirror_error",
        "valid",
    ]);
    header(cfg, &mut table);
    table.meta(
        "b = 2q; spectrum 1 is the variable-mass spin spectrum, spectrum 2 the constant-mass one",
    );
    for &q in &cfg.q {
        for &kappa in &cfg.kappa {
            for &n in &cfg.n {
                let b = 2.0 * q;
                let mut row = vec![
                    Cell::Int(i64::from(n)),
                    Cell::Int(i64::from(kappa)),
                    Cell::Float(q),
                    Cell::Float(b),
                ];
                let res = params_for(cfg, q, b, 0.0).and_then(|p| {
                    let qn = QuantumNumbers::new(n, kappa)?;
                    duality_spectra(&p, &qn)
                });
                match res {
                    Ok((one, two)) => {
                        let pair = |s: &EnergySolution| (s.e_particle(), s.e_antiparticle());
                        let ((p1, a1), (p2, a2)) = (pair(&one), pair(&two));
                        let mirror = match (p1, a1, p2, a2) {
                            (Some(p1), Some(a1), Some(p2), Some(a2)) => {
                                Some((p1 + a2).abs().max((a1 + p2).abs()))
                            }
                            _ => None,
                        };
                        row.extend([
                            Cell::opt(p1),
                            Cell::opt(a1),
                            Cell::opt(p2),
                            Cell::opt(a2),
                            Cell::opt(mirror),
                            Cell::text("true"),
                        ]);
                    }
                    Err(e) => {
                        row.extend(std::iter::repeat_n(Cell::Empty, 5));
                        row.push(Cell::text(e.reason_code()));
                    }
                }
                table.push(row);
            }
        }
    }
    Ok(Outcome::ok(table))
}
