//! Shooting-method eigenvalue solver used as an independent check.
//!
//! Every variant is written as `u'' = P(r)u' + Q(r)u`. The outward
//! solution starts from a two-term Frobenius series and is integrated with
//! RK4 in `x = ln r`; the inward solution starts from the decaying WKB
//! branch at `r_max` and is integrated with RK4 in `r`. The two meet at
//! `r_match`, where a normalized Wronskian measures the mismatch.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{
    reduced_coefficients, DiracPotentials, InverseLinear, PhysicalParams, QuantumNumbers,
    SymmetryMode,
};
use crate::spectrum::solve_energy;
use crate::wavefunctions::RadialFunction;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum OdeVariant {
    /// Schrödinger-like equation of `F` in the spin sector.
    ReducedSpin,
    /// Schrödinger-like equation of `G` in the pseudospin sector.
    ReducedPseudospin,
    /// Exact second-order equation of `F`, keeping the `g₋/U₋` terms.
    FullUpper,
    /// Exact second-order equation of `G`, keeping the `g₊/U₊` terms.
    FullLower,
}

impl OdeVariant {
    pub fn mode(&self) -> SymmetryMode {
        match self {
            OdeVariant::ReducedSpin | OdeVariant::FullUpper => SymmetryMode::Spin,
            OdeVariant::ReducedPseudospin | OdeVariant::FullLower => SymmetryMode::Pseudospin,
        }
    }

    pub fn is_full(&self) -> bool {
        matches!(self, OdeVariant::FullUpper | OdeVariant::FullLower)
    }

    pub fn reduced(mode: SymmetryMode) -> Self {
        match mode {
            SymmetryMode::Spin => OdeVariant::ReducedSpin,
            SymmetryMode::Pseudospin => OdeVariant::ReducedPseudospin,
        }
    }

    pub fn full(mode: SymmetryMode) -> Self {
        match mode {
            SymmetryMode::Spin => OdeVariant::FullUpper,
            SymmetryMode::Pseudospin => OdeVariant::FullLower,
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            OdeVariant::ReducedSpin => "reduced_spin",
            OdeVariant::ReducedPseudospin => "reduced_pseudospin",
            OdeVariant::FullUpper => "full_upper",
            OdeVariant::FullLower => "full_lower",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ShootingConfig {
    pub r_min: f64,
    pub r_max: f64,
    pub r_match: f64,
    /// Total RK4 steps, split evenly between the two sweeps.
    pub steps: usize,
    pub node_target: u32,
    pub bracket: (f64, f64),
    pub tol: f64,
}

impl ShootingConfig {
    /// Defaults scaled by `ε` and the index at `energy`: `r_min = 10⁻⁴/ε`,
    /// `r_max = 35/ε`, `r_match = (index + 1)/ε`, 4000 steps.
    pub fn for_state(
        params: &PhysicalParams,
        qn: &QuantumNumbers,
        mode: SymmetryMode,
        energy: f64,
    ) -> Result<Self> {
        let c = reduced_coefficients(params, qn.kappa, mode, energy);
        if !c.flags.admissible() {
            return Err(Error::Precondition(format!(
                "no decaying solution at E = {energy} (eps^2 = {}, index = {})",
                c.epsilon_sq, c.index
            )));
        }
        let eps = c.epsilon;
        Ok(Self {
            r_min: 1e-4 / eps,
            r_max: 35.0 / eps,
            r_match: (c.index.max(0.0) + 1.0) / eps,
            steps: 4000,
            node_target: qn.n,
            bracket: (energy - 0.05, energy + 0.05),
            tol: 1e-12,
        })
    }

    pub fn validate(&self) -> Result<()> {
        let ok = self.r_min > 0.0
            && self.r_min < self.r_match
            && self.r_match < self.r_max
            && self.r_max.is_finite()
            && self.steps >= 100
            && self.bracket.0 < self.bracket.1
            && self.tol > 0.0;
        if ok {
            Ok(())
        } else {
            Err(Error::Config(format!(
                "invalid shooting configuration {self:?}"
            )))
        }
    }

    pub fn with_bracket(self, lo: f64, hi: f64) -> Self {
        Self {
            bracket: (lo, hi),
            ..self
        }
    }

    pub fn with_steps(self, steps: usize) -> Self {
        Self { steps, ..self }
    }
}

/// Coefficients of `u'' = P u' + Q u` for one variant at one energy.
#[derive(Debug, Clone, Copy)]
pub struct OdeCoefficients {
    variant: OdeVariant,
    kappa: f64,
    centrifugal: f64,
    hbar_c: f64,
    u_minus: InverseLinear,
    u_plus: InverseLinear,
    /// `false` when the first-derivative coupling vanishes identically.
    coupled: bool,
}

impl OdeCoefficients {
    pub fn new(variant: OdeVariant, params: &PhysicalParams, kappa: i32, energy: f64) -> Self {
        let mode = variant.mode();
        let pot = DiracPotentials::new(*params, mode);
        let (u_minus, u_plus) = (pot.u_minus(energy), pot.u_plus(energy));
        let coupled = match variant {
            OdeVariant::FullUpper => u_minus.inverse != 0.0,
            OdeVariant::FullLower => u_plus.inverse != 0.0,
            _ => false,
        };
        Self {
            variant,
            kappa: f64::from(kappa),
            centrifugal: mode.centrifugal(kappa),
            hbar_c: params.hbar_c,
            u_minus,
            u_plus,
            coupled,
        }
    }

    /// The potential whose zero is a pole of the coupled equation.
    fn coupling_denominator(&self) -> Option<InverseLinear> {
        if !self.coupled {
            return None;
        }
        Some(match self.variant {
            OdeVariant::FullUpper => self.u_minus,
            _ => self.u_plus,
        })
    }

    /// `(P(r), Q(r))`.
    pub fn eval(&self, r: f64) -> (f64, f64) {
        let hc2 = self.hbar_c * self.hbar_c;
        let q = self.centrifugal / (r * r) + self.u_minus.value(r) * self.u_plus.value(r) / hc2;
        match self.coupling_denominator() {
            None => (0.0, q),
            Some(u) => {
                let p = u.derivative(r) / u.value(r);
                let sign = if self.variant == OdeVariant::FullUpper {
                    1.0
                } else {
                    -1.0
                };
                (p, q + sign * self.kappa * p / r)
            }
        }
    }

    /// Laurent data `(P₋₁, P₀, Q₋₂, Q₋₁)` at the origin.
    fn laurent(&self) -> (f64, f64, f64, f64) {
        let hc2 = self.hbar_c * self.hbar_c;
        let (a, alpha) = (self.u_minus.constant, self.u_minus.inverse);
        let (c, gamma) = (self.u_plus.constant, self.u_plus.inverse);
        let q2 = self.centrifugal + alpha * gamma / hc2;
        let q1 = (a * gamma + alpha * c) / hc2;
        match (self.coupled, self.variant) {
            (false, _) => (0.0, 0.0, q2, q1),
            (true, OdeVariant::FullUpper) => (
                -1.0,
                a / alpha,
                q2 - self.kappa,
                q1 + self.kappa * a / alpha,
            ),
            (true, _) => (
                -1.0,
                c / gamma,
                q2 + self.kappa,
                q1 - self.kappa * c / gamma,
            ),
        }
    }

    /// Regular indicial exponent `p` and first series coefficient `c`
    /// of `u ≈ r^p (1 + c r)`.
    pub fn frobenius(&self) -> Result<(f64, f64)> {
        let (pm1, p0, qm2, qm1) = self.laurent();
        let disc = (1.0 + pm1).powi(2) + 4.0 * qm2;
        if disc < 0.0 {
            return Err(Error::ComplexIndex {
                radicand: disc / 4.0,
            });
        }
        let p = 0.5 * ((1.0 + pm1) + disc.sqrt());
        let c = (p0 * p + qm1) / (2.0 * p - pm1);
        Ok((p, c))
    }
}

/// Result of one outward/inward shooting pass.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Shot {
    pub energy: f64,
    /// Normalized Wronskian at `r_match`, in `[−1, 1]`.
    pub mismatch: f64,
    /// `u'/u` (outward) minus `u'/u` (inward) at `r_match`.
    pub log_mismatch: f64,
    pub nodes: usize,
    pub exponent: f64,
    /// `(r, u)` of the composite solution when requested.
    pub samples: Vec<(f64, f64)>,
}

fn rk4<F: Fn(f64, [f64; 2]) -> [f64; 2]>(f: &F, t: f64, y: [f64; 2], h: f64) -> [f64; 2] {
    let k1 = f(t, y);
    let k2 = f(
        t + 0.5 * h,
        [y[0] + 0.5 * h * k1[0], y[1] + 0.5 * h * k1[1]],
    );
    let k3 = f(
        t + 0.5 * h,
        [y[0] + 0.5 * h * k2[0], y[1] + 0.5 * h * k2[1]],
    );
    let k4 = f(t + h, [y[0] + h * k3[0], y[1] + h * k3[1]]);
    [
        y[0] + h / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]),
        y[1] + h / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]),
    ]
}

fn shoot(
    coeffs: &OdeCoefficients,
    energy: f64,
    cfg: &ShootingConfig,
    keep_samples: bool,
) -> Result<Shot> {
    if let Some(u) = coeffs.coupling_denominator() {
        if let Some(r0) = u.zero_crossing() {
            if r0 >= cfg.r_min && r0 <= cfg.r_max {
                return Err(Error::SingularPotential { radius: r0 });
            }
        }
    }
    let (p, c) = coeffs.frobenius()?;
    let half = cfg.steps / 2;

    // outward in x = ln r with state (u, r u'), scaled by r_min^{−p}
    let (x0, x1) = (cfg.r_min.ln(), cfg.r_match.ln());
    let hx = (x1 - x0) / half as f64;
    let out_rhs = |x: f64, y: [f64; 2]| {
        let r = x.exp();
        let (pp, qq) = coeffs.eval(r);
        [y[1], y[1] + r * pp * y[1] + r * r * qq * y[0]]
    };
    let cr = c * cfg.r_min;
    let mut y = [1.0 + cr, p * (1.0 + cr) + cr];
    let mut nodes = 0;
    let mut samples = Vec::new();
    if keep_samples {
        samples.reserve(cfg.steps + 2);
        samples.push((cfg.r_min, y[0]));
    }
    for i in 0..half {
        let next = rk4(&out_rhs, x0 + i as f64 * hx, y, hx);
        if !(next[0].is_finite() && next[1].is_finite()) {
            return Err(Error::Stiffness {
                radius: (x0 + (i + 1) as f64 * hx).exp(),
            });
        }
        if next[0] * y[0] < 0.0 {
            nodes += 1;
        }
        y = next;
        if keep_samples {
            samples.push(((x0 + (i + 1) as f64 * hx).exp(), y[0]));
        }
    }
    let (u_o, du_o) = (y[0], y[1] / cfg.r_match);

    // inward in r from the decaying branch u' = λu
    let hr = (cfg.r_match - cfg.r_max) / half as f64;
    let in_rhs = |r: f64, y: [f64; 2]| {
        let (pp, qq) = coeffs.eval(r);
        [y[1], pp * y[1] + qq * y[0]]
    };
    let (pp, qq) = coeffs.eval(cfg.r_max);
    let disc = pp * pp + 4.0 * qq;
    let lambda = 0.5 * (pp - disc.max(0.0).sqrt());
    let mut z = [1.0, lambda];
    let mut inward = Vec::new();
    if keep_samples {
        inward.reserve(half + 1);
        inward.push((cfg.r_max, z[0]));
    }
    for i in 0..half {
        let next = rk4(&in_rhs, cfg.r_max + i as f64 * hr, z, hr);
        if !(next[0].is_finite() && next[1].is_finite()) {
            return Err(Error::Stiffness {
                radius: cfg.r_max + (i + 1) as f64 * hr,
            });
        }
        if next[0] * z[0] < 0.0 {
            nodes += 1;
        }
        z = next;
        if keep_samples {
            inward.push((cfg.r_max + (i + 1) as f64 * hr, z[0]));
        }
    }
    let (u_i, du_i) = (z[0], z[1]);

    let k = 1.0 / cfg.r_match;
    let norm_o = (u_o * u_o + (du_o / k).powi(2)).sqrt();
    let norm_i = (u_i * u_i + (du_i / k).powi(2)).sqrt();
    let mismatch = (u_o * du_i - du_o * u_i) / (k * norm_o * norm_i);
    let log_mismatch = du_o / u_o - du_i / u_i;

    if keep_samples {
        let scale = if u_i != 0.0 { u_o / u_i } else { 1.0 };
        samples.extend(
            inward
                .into_iter()
                .rev()
                .skip(1)
                .map(|(r, u)| (r, u * scale)),
        );
    }
    Ok(Shot {
        energy,
        mismatch,
        log_mismatch,
        nodes,
        exponent: p,
        samples,
    })
}

/// Integrate `variant` at trial energy `energy`.
pub fn integrate(
    variant: OdeVariant,
    params: &PhysicalParams,
    qn: &QuantumNumbers,
    energy: f64,
    cfg: &ShootingConfig,
) -> Result<Shot> {
    cfg.validate()?;
    let coeffs = OdeCoefficients::new(variant, params, qn.kappa, energy);
    shoot(&coeffs, energy, cfg, true)
}

fn mismatch_at(
    variant: OdeVariant,
    params: &PhysicalParams,
    kappa: i32,
    energy: f64,
    cfg: &ShootingConfig,
) -> Result<Shot> {
    let coeffs = OdeCoefficients::new(variant, params, kappa, energy);
    shoot(&coeffs, energy, cfg, false)
}

/// Illinois-modified regula falsi on the mismatch.
fn refine(
    variant: OdeVariant,
    params: &PhysicalParams,
    kappa: i32,
    cfg: &ShootingConfig,
    mut a: (f64, f64),
    mut b: (f64, f64),
) -> Result<f64> {
    let mut side = 0i8;
    for _ in 0..200 {
        if (b.0 - a.0).abs() <= cfg.tol * a.0.abs().max(1.0) {
            break;
        }
        let mut e = (a.0 * b.1 - b.0 * a.1) / (b.1 - a.1);
        if !(e > a.0.min(b.0) && e < a.0.max(b.0)) {
            e = 0.5 * (a.0 + b.0);
        }
        let m = mismatch_at(variant, params, kappa, e, cfg)?.mismatch;
        if m == 0.0 {
            return Ok(e);
        }
        if m.signum() == b.1.signum() {
            b = (e, m);
            if side == -1 {
                a.1 *= 0.5;
            }
            side = -1;
        } else {
            a = (e, m);
            if side == 1 {
                b.1 *= 0.5;
            }
            side = 1;
        }
    }
    Ok(if a.1.abs() < b.1.abs() { a.0 } else { b.0 })
}

/// A located eigenvalue with its node count.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Eigenvalue {
    pub energy: f64,
    pub nodes: usize,
}

/// Every sign change of the mismatch on `points` equally spaced energies
/// in `cfg.bracket`, refined and labelled by node count. Energies where the
/// coupled equation is singular are skipped.
pub fn scan_spectrum(
    variant: OdeVariant,
    params: &PhysicalParams,
    kappa: i32,
    cfg: &ShootingConfig,
    points: usize,
) -> Result<Vec<Eigenvalue>> {
    cfg.validate()?;
    let (lo, hi) = cfg.bracket;
    let samples: Vec<Option<(f64, f64)>> = (0..=points)
        .map(|i| {
            let e = lo + (hi - lo) * i as f64 / points as f64;
            match mismatch_at(variant, params, kappa, e, cfg) {
                Ok(s) if s.mismatch.is_finite() => Ok(Some((e, s.mismatch))),
                Ok(_) | Err(Error::SingularPotential { .. }) => Ok(None),
                Err(err) => Err(err),
            }
        })
        .collect::<Result<_>>()?;
    let mut found = Vec::new();
    for w in samples.windows(2) {
        let (Some(a), Some(b)) = (w[0], w[1]) else {
            continue;
        };
        let root = if a.1 == 0.0 {
            a.0
        } else if a.1.signum() != b.1.signum() && b.1 != 0.0 {
            refine(variant, params, kappa, cfg, a, b)?
        } else {
            continue;
        };
        let shot = mismatch_at(variant, params, kappa, root, cfg)?;
        // a genuine root has a small mismatch; a jump across a pole does not
        if shot.mismatch.abs() < 1e-6 {
            found.push(Eigenvalue {
                energy: root,
                nodes: shot.nodes,
            });
        }
    }
    Ok(found)
}

const SCAN_POINTS: usize = 24;

fn eigen_in_bracket(
    variant: OdeVariant,
    params: &PhysicalParams,
    qn: &QuantumNumbers,
    cfg: &ShootingConfig,
) -> Result<f64> {
    let hits: Vec<Eigenvalue> = scan_spectrum(variant, params, qn.kappa, cfg, SCAN_POINTS)?
        .into_iter()
        .filter(|e| e.nodes == cfg.node_target as usize)
        .collect();
    match hits.len() {
        0 => Err(Error::Bracket {
            lo: cfg.bracket.0,
            hi: cfg.bracket.1,
            nodes: cfg.node_target as usize,
        }),
        1 => Ok(hits[0].energy),
        count => Err(Error::AmbiguousBracket {
            lo: cfg.bracket.0,
            hi: cfg.bracket.1,
            nodes: cfg.node_target as usize,
            count,
        }),
    }
}

/// Eigenvalue with `cfg.node_target` nodes inside `cfg.bracket`, from runs
/// at `steps` and `2·steps` combined by Richardson extrapolation.
pub fn find_eigenvalue(
    variant: OdeVariant,
    params: &PhysicalParams,
    qn: &QuantumNumbers,
    cfg: &ShootingConfig,
) -> Result<f64> {
    cfg.validate()?;
    let coarse = eigen_in_bracket(variant, params, qn, cfg)?;
    let fine_cfg = cfg.with_steps(2 * cfg.steps);
    let width = 1e-5 * coarse.abs().max(1.0);
    let fine = match eigen_in_bracket(
        variant,
        params,
        qn,
        &fine_cfg.with_bracket(coarse - width, coarse + width),
    ) {
        Ok(e) => e,
        Err(_) => eigen_in_bracket(variant, params, qn, &fine_cfg)?,
    };
    Ok(fine + (fine - coarse) / 15.0)
}

/// Energy window `(lo, hi)` where `ε² > 0`.
fn bound_window(params: &PhysicalParams, mode: SymmetryMode) -> (f64, f64) {
    match mode {
        SymmetryMode::Spin => (params.a - params.m0, params.m0),
        SymmetryMode::Pseudospin => (-params.m0, params.m0 + params.a),
    }
}

/// Bracket around an analytic level: half the distance to the analytic
/// neighbours `n ± 1`, capped at `0.05·m0` and at least `10⁻⁴·m0`, clipped
/// to the bound window. `widen` raises the cap to `0.5·m0` for the coupled
/// variants, whose levels are shifted.
pub fn verify_bracket(
    params: &PhysicalParams,
    qn: &QuantumNumbers,
    mode: SymmetryMode,
    energy: f64,
    widen: bool,
) -> (f64, f64) {
    let neighbour = |n: i64| -> Option<f64> {
        let n = u32::try_from(n).ok()?;
        let q = QuantumNumbers::new(n, qn.kappa).ok()?;
        solve_energy(params, &q, mode).ok()?.bound_energy()
    };
    let n = i64::from(qn.n);
    let gaps: Vec<f64> = [neighbour(n - 1), neighbour(n + 1)]
        .into_iter()
        .flatten()
        .map(|e| 0.5 * (e - energy).abs())
        .filter(|g| *g > 0.0)
        .collect();
    let nearest = gaps.iter().copied().fold(f64::INFINITY, f64::min);
    let m0 = params.m0;
    let half = if widen {
        nearest.min(0.5 * m0).max(1e-4 * m0)
    } else {
        nearest.min(0.05 * m0).max(1e-4 * m0)
    };
    let (wlo, whi) = bound_window(params, mode);
    let margin = 1e-9 * m0;
    (
        (energy - half).max(wlo + margin),
        (energy + half).min(whi - margin),
    )
}

/// Maximum of `|f'' − P f' − Q f| / max|ε² f|` over the interior grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ResidualProfile {
    pub max_scaled: f64,
    pub at_radius: f64,
    /// The function vanished identically.
    pub degenerate: bool,
}

pub fn residual_profile(
    f: &RadialFunction,
    variant: OdeVariant,
    params: &PhysicalParams,
    energy: f64,
) -> ResidualProfile {
    let coeffs = OdeCoefficients::new(variant, params, f.qn.kappa, energy);
    let eps2 = f.epsilon * f.epsilon;
    let scale = f.values.iter().fold(0.0f64, |m, v| m.max(eps2 * v.abs()));
    if scale == 0.0 {
        return ResidualProfile {
            max_scaled: 0.0,
            at_radius: f64::NAN,
            degenerate: true,
        };
    }
    let n = f.grid.len();
    let mut worst = (0.0f64, f64::NAN);
    for i in 1..n.saturating_sub(1) {
        let r = f.grid[i];
        let (d1, d2) = derivatives(f, r, f.grid[i] - f.grid[i - 1]);
        let (p, q) = coeffs.eval(r);
        let res = (d2 - p * d1 - q * f.values[i]).abs() / scale;
        if res > worst.0 || worst.1.is_nan() {
            worst = (res, r);
        }
    }
    ResidualProfile {
        max_scaled: worst.0,
        at_radius: worst.1,
        degenerate: false,
    }
}

/// Analytic first/second derivatives, falling back to a 5-point stencil.
fn derivatives(f: &RadialFunction, r: f64, spacing: f64) -> (f64, f64) {
    let (a1, a2) = (f.derivative(r, 1), f.derivative(r, 2));
    if a1.is_finite() && a2.is_finite() {
        return (a1, a2);
    }
    let h = 0.25 * spacing;
    let v = |x: f64| f.eval(x);
    let (m2, m1, c, p1, p2) = (v(r - 2.0 * h), v(r - h), v(r), v(r + h), v(r + 2.0 * h));
    let d1 = (m2 - 8.0 * m1 + 8.0 * p1 - p2) / (12.0 * h);
    let d2 = (-m2 + 16.0 * m1 - 30.0 * c + 16.0 * p1 - p2) / (12.0 * h * h);
    (d1, d2)
}

/// Analytic level checked against the reduced and the full equations.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub mode: SymmetryMode,
    pub params: PhysicalParams,
    pub qn: QuantumNumbers,
    pub variant: OdeVariant,
    pub e_analytic: f64,
    pub e_numeric: f64,
    pub abs_deviation: f64,
    pub rel_deviation: f64,
    /// Scaled residual of the analytic wavefunction in the reduced equation.
    pub residual: f64,
    pub e_full: Option<f64>,
    /// `|E_full − E_reduced|`.
    pub approximation_gap: Option<f64>,
    /// Reason code when the full equation could not be solved.
    pub full_failure: Option<String>,
}

/// Bound analytic level of `(qn, mode)`.
pub fn analytic_level(
    params: &PhysicalParams,
    qn: &QuantumNumbers,
    mode: SymmetryMode,
) -> Result<f64> {
    solve_energy(params, qn, mode)?
        .bound_energy()
        .ok_or_else(|| {
            Error::Precondition(format!(
                "no bound {mode} level for n = {}, kappa = {}",
                qn.n, qn.kappa
            ))
        })
}

/// Resolution knobs shared by [`numeric_level`] and [`verify_state`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SolveOptions {
    pub steps: usize,
    /// Outer radius in units of `1/ε`.
    pub r_max: f64,
    /// Also solve the coupled equation and report the approximation gap.
    pub with_full: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            steps: 4000,
            r_max: 35.0,
            with_full: true,
        }
    }
}

/// Shooting eigenvalue of one variant near the analytic level.
pub fn numeric_level(
    variant: OdeVariant,
    params: &PhysicalParams,
    qn: &QuantumNumbers,
    e_analytic: f64,
    opts: &SolveOptions,
) -> Result<f64> {
    let mode = variant.mode();
    let (lo, hi) = verify_bracket(params, qn, mode, e_analytic, variant.is_full());
    let mut cfg = ShootingConfig::for_state(params, qn, mode, e_analytic)?
        .with_bracket(lo, hi)
        .with_steps(opts.steps);
    cfg.r_max *= opts.r_max / 35.0;
    cfg.validate()?;
    find_eigenvalue(variant, params, qn, &cfg)
}

/// Compare the shooting eigenvalue of the reduced equation with and without
/// the first-derivative coupling.
pub fn approximation_audit(
    params: &PhysicalParams,
    qn: &QuantumNumbers,
    mode: SymmetryMode,
) -> Result<VerificationReport> {
    verify_state(params, qn, mode, &SolveOptions::default())
}

/// Full verification record for one state.
pub fn verify_state(
    params: &PhysicalParams,
    qn: &QuantumNumbers,
    mode: SymmetryMode,
    opts: &SolveOptions,
) -> Result<VerificationReport> {
    let e_analytic = analytic_level(params, qn, mode)?;
    let variant = OdeVariant::reduced(mode);
    let e_numeric = numeric_level(variant, params, qn, e_analytic, opts)?;
    let wave = match mode {
        SymmetryMode::Spin => crate::wavefunctions::upper_spinor(params, qn, e_analytic),
        SymmetryMode::Pseudospin => crate::wavefunctions::lower_spinor(params, qn, e_analytic),
    }?;
    let residual = residual_profile(&wave, variant, params, e_analytic).max_scaled;
    let (e_full, approximation_gap, full_failure) = if opts.with_full {
        match numeric_level(OdeVariant::full(mode), params, qn, e_analytic, opts) {
            Ok(e) => (Some(e), Some((e - e_numeric).abs()), None),
            Err(err) => (None, None, Some(err.reason_code().to_string())),
        }
    } else {
        (None, None, None)
    };
    let abs_deviation = (e_numeric - e_analytic).abs();
    Ok(VerificationReport {
        mode,
        params: *params,
        qn: *qn,
        variant,
        e_analytic,
        e_numeric,
        abs_deviation,
        rel_deviation: abs_deviation / e_analytic.abs().max(f64::MIN_POSITIVE),
        residual,
        e_full,
        approximation_gap,
        full_failure,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nat(q: f64, b: f64, a: f64) -> PhysicalParams {
        PhysicalParams::natural(q, b, a)
    }

    fn qn(n: u32, kappa: i32) -> QuantumNumbers {
        QuantumNumbers::new(n, kappa).unwrap()
    }

    #[test]
    fn reduced_coefficients_match_nu_form() {
        let p = nat(0.7, 0.2, 0.1);
        let e = 0.4;
        let c = reduced_coefficients(&p, 2, SymmetryMode::Spin, e);
        let ode = OdeCoefficients::new(OdeVariant::ReducedSpin, &p, 2, e);
        for r in [0.2, 1.0, 6.0] {
            let (pp, qq) = ode.eval(r);
            assert_eq!(pp, 0.0);
            let expected = c.epsilon_sq - c.beta / r + c.gamma / (r * r);
            assert!((qq - expected).abs() < 1e-12 * expected.abs().max(1.0));
        }
        let (exp, _) = ode.frobenius().unwrap();
        assert!((exp - (c.index + 1.0)).abs() < 1e-14);
    }

    #[test]
    fn full_laurent_data_matches_direct_evaluation() {
        for variant in [OdeVariant::FullUpper, OdeVariant::FullLower] {
            let ode = OdeCoefficients::new(
                variant,
                &nat(0.6, 0.15, 0.05),
                -2,
                0.3 * if variant == OdeVariant::FullUpper {
                    1.0
                } else {
                    -1.0
                },
            );
            let (pm1, p0, qm2, qm1) = ode.laurent();
            let r = 1e-6;
            let (pp, qq) = ode.eval(r);
            assert!((pp - (pm1 / r + p0)).abs() < 1e-4, "{variant:?} P");
            assert!((qq * r * r - (qm2 + qm1 * r)).abs() < 1e-8, "{variant:?} Q");
        }
    }

    #[test]
    fn constant_mass_spin_level_recovered() {
        let p = nat(1.0, 0.0, 0.0);
        let cfg = ShootingConfig::for_state(&p, &qn(0, 1), SymmetryMode::Spin, 0.6)
            .unwrap()
            .with_bracket(0.5, 0.7);
        let e = find_eigenvalue(OdeVariant::ReducedSpin, &p, &qn(0, 1), &cfg).unwrap();
        assert!((e - 0.6).abs() < 1e-6, "{e}");
    }

    #[test]
    fn mismatch_changes_sign_across_level() {
        let p = nat(1.0, 0.0, 0.0);
        let cfg = ShootingConfig::for_state(&p, &qn(0, 1), SymmetryMode::Spin, 0.6).unwrap();
        let below = integrate(OdeVariant::ReducedSpin, &p, &qn(0, 1), 0.59, &cfg).unwrap();
        let above = integrate(OdeVariant::ReducedSpin, &p, &qn(0, 1), 0.61, &cfg).unwrap();
        let at = integrate(OdeVariant::ReducedSpin, &p, &qn(0, 1), 0.6, &cfg).unwrap();
        assert!(below.mismatch * above.mismatch < 0.0);
        assert!(at.mismatch.abs() < 1e-7);
        assert_eq!(at.nodes, 0);
        assert!(at.samples.windows(2).all(|w| w[1].0 > w[0].0));
    }

    #[test]
    fn full_and_reduced_coincide_without_mass_term() {
        let p = nat(0.5, 0.0, 0.2);
        for (full, reduced, e) in [
            (OdeVariant::FullUpper, OdeVariant::ReducedSpin, 0.8),
            (OdeVariant::FullLower, OdeVariant::ReducedPseudospin, -0.8),
        ] {
            let cfg = ShootingConfig::for_state(&p, &qn(1, 2), full.mode(), e).unwrap();
            let a = integrate(full, &p, &qn(1, 2), e, &cfg).unwrap();
            let b = integrate(reduced, &p, &qn(1, 2), e, &cfg).unwrap();
            assert!((a.mismatch - b.mismatch).abs() <= 1e-12);
        }
    }

    #[test]
    fn singular_coupling_is_reported() {
        // U₋ = 1 + E − A − 0.2/r changes sign at r = 0.2/(1 + E − A)
        let p = nat(0.5, -0.2, 0.0);
        let cfg = ShootingConfig::for_state(&p, &qn(0, -1), SymmetryMode::Spin, 0.8)
            .unwrap()
            .with_bracket(0.7, 0.9);
        let r = integrate(OdeVariant::FullUpper, &p, &qn(0, -1), 0.8, &cfg);
        assert!(matches!(r, Err(Error::SingularPotential { .. })));
    }

    #[test]
    fn empty_bracket_is_an_error() {
        let p = nat(1.0, 0.0, 0.0);
        let cfg = ShootingConfig::for_state(&p, &qn(0, 1), SymmetryMode::Spin, 0.6)
            .unwrap()
            .with_bracket(0.2, 0.3);
        assert!(matches!(
            find_eigenvalue(OdeVariant::ReducedSpin, &p, &qn(0, 1), &cfg),
            Err(Error::Bracket { .. })
        ));
    }

    #[test]
    fn invalid_config_rejected() {
        let p = nat(1.0, 0.0, 0.0);
        let cfg = ShootingConfig::for_state(&p, &qn(0, 1), SymmetryMode::Spin, 0.6)
            .unwrap()
            .with_steps(10);
        assert!(matches!(
            integrate(OdeVariant::ReducedSpin, &p, &qn(0, 1), 0.6, &cfg),
            Err(Error::Config(_))
        ));
    }
}
