//! Closed-form energy spectra.
//!
//! The bound-state condition `β = 2ε(n + index + 1)` squares into a
//! quadratic in `E`. Both roots are returned: "particle" is the larger and
//! "antiparticle" the smaller. The squared equation admits spurious roots
//! (`β ≤ 0`) and non-bound ones (`ε² ≤ 0`), so each root carries flags.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{reduced_coefficients, PhysicalParams, QuantumNumbers, SymmetryMode};

/// Relative threshold below which the discriminant counts as zero.
const DEGENERATE_DISCRIMINANT: f64 = 1e-13;
/// `ε²ħc²/m0²` and `βħc/m0` at or below this count as zero; roots sitting
/// on the threshold otherwise pass on rounding noise.
const THRESHOLD_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RootFlags {
    /// `ε² > 0`.
    pub bound: bool,
    /// Index real and `> −1/2`.
    pub index_admissible: bool,
    /// `β > 0`, i.e. the root solves the unsquared condition.
    pub quantization_consistent: bool,
    /// Index `> 0`, the stricter bound-state condition.
    pub strict_index: bool,
}

impl RootFlags {
    pub fn is_bound_state(&self) -> bool {
        self.bound && self.index_admissible && self.quantization_consistent
    }

    /// `"true"` for bound states, otherwise the first failing check.
    pub fn reason(&self) -> &'static str {
        if !self.index_admissible {
            "index_below_threshold"
        } else if !self.bound {
            "non_bound"
        } else if !self.quantization_consistent {
            "spurious_root"
        } else {
            "true"
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Root {
    pub energy: f64,
    /// `(LHS − RHS)/m0²` of the master equation.
    pub residual: f64,
    pub epsilon: f64,
    pub beta: f64,
    pub flags: RootFlags,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EnergySolution {
    pub mode: SymmetryMode,
    pub qn: QuantumNumbers,
    pub params: PhysicalParams,
    /// `δ` (spin) or `η` (pseudospin).
    pub index: f64,
    /// `B_nκ = n + index + 1`.
    pub b_nk: f64,
    pub particle: Option<Root>,
    pub antiparticle: Option<Root>,
    pub discriminant: f64,
    pub degenerate: bool,
}

impl EnergySolution {
    pub fn e_particle(&self) -> Option<f64> {
        self.particle.map(|r| r.energy)
    }

    pub fn e_antiparticle(&self) -> Option<f64> {
        self.antiparticle.map(|r| r.energy)
    }

    /// The root that is a bound state, preferring the particle root.
    pub fn bound_root(&self) -> Option<Root> {
        [self.particle, self.antiparticle]
            .into_iter()
            .flatten()
            .find(|r| r.flags.is_bound_state())
    }

    pub fn bound_energy(&self) -> Option<f64> {
        self.bound_root().map(|r| r.energy)
    }

    pub fn roots(&self) -> impl Iterator<Item = Root> {
        [self.particle, self.antiparticle].into_iter().flatten()
    }
}

/// Real roots of `a2 E² + a1 E + a0 = 0` as `(larger, smaller, disc, degenerate)`.
fn stable_quadratic(a2: f64, a1: f64, a0: f64) -> Result<(f64, f64, f64, bool)> {
    let disc = a1 * a1 - 4.0 * a2 * a0;
    if disc.abs() < DEGENERATE_DISCRIMINANT * a1 * a1 {
        let e = -a1 / (2.0 * a2);
        return Ok((e, e, disc, true));
    }
    if disc < 0.0 {
        return Err(Error::NoRealSolution { discriminant: disc });
    }
    let sign = if a1 < 0.0 { -1.0 } else { 1.0 };
    let t = -0.5 * (a1 + sign * disc.sqrt());
    let (r1, r2) = (t / a2, a0 / t);
    Ok((r1.max(r2), r1.min(r2), disc, false))
}

/// Coefficients of `M²·(l2E² + l1E + l0) − (u1E + u0)² = 0`.
fn squared_condition(l: [f64; 3], u: [f64; 2], m: f64) -> [f64; 3] {
    let m2 = m * m;
    [
        m2 * l[0] - u[0] * u[0],
        m2 * l[1] - 2.0 * u[0] * u[1],
        m2 * l[2] - u[1] * u[1],
    ]
}

fn effective_index(params: &PhysicalParams, kappa: i32, mode: SymmetryMode) -> Result<f64> {
    let c = reduced_coefficients(params, kappa, mode, 0.0);
    if !c.flags.index_real {
        return Err(Error::ComplexIndex {
            radicand: c.index_radicand,
        });
    }
    Ok(c.index)
}

fn make_root(
    params: &PhysicalParams,
    qn: &QuantumNumbers,
    mode: SymmetryMode,
    energy: f64,
) -> Root {
    let c = reduced_coefficients(params, qn.kappa, mode, energy);
    let (m0, hc) = (params.m0, params.hbar_c);
    Root {
        energy,
        residual: master_residual(params, qn, mode, energy).unwrap_or(f64::NAN),
        epsilon: c.epsilon,
        beta: c.beta,
        flags: RootFlags {
            bound: c.epsilon_sq * hc * hc > THRESHOLD_TOL * m0 * m0,
            index_admissible: c.flags.index_admissible,
            quantization_consistent: c.beta * hc > THRESHOLD_TOL * m0,
            strict_index: c.index > 0.0,
        },
    }
}

fn assemble(
    params: &PhysicalParams,
    qn: &QuantumNumbers,
    mode: SymmetryMode,
    index: f64,
    coeffs: [f64; 3],
) -> Result<EnergySolution> {
    let (hi, lo, disc, degenerate) = stable_quadratic(coeffs[0], coeffs[1], coeffs[2])?;
    Ok(EnergySolution {
        mode,
        qn: *qn,
        params: *params,
        index,
        b_nk: f64::from(qn.n) + index + 1.0,
        particle: Some(make_root(params, qn, mode, hi)),
        antiparticle: Some(make_root(params, qn, mode, lo)),
        discriminant: disc,
        degenerate,
    })
}

/// `(LHS − RHS)/m0²` of the master energy equation at trial energy `e`.
///
/// Spin: `m0² − E² − A(m0 − E) = [q(m0 + E − A) + b(A/2 − m0)]²/(n+δ+1)²`.
/// Pseudospin: `m0² − E² + A(m0 + E) = [q(m0 − E + A) − b(m0 + A/2)]²/(n+η+1)²`.
pub fn master_residual(
    params: &PhysicalParams,
    qn: &QuantumNumbers,
    mode: SymmetryMode,
    e: f64,
) -> Result<f64> {
    let PhysicalParams { m0, b, q, a, .. } = *params;
    let index = effective_index(params, qn.kappa, mode)?;
    let big_n = f64::from(qn.n) + index + 1.0;
    let (lhs, num) = match mode {
        SymmetryMode::Spin => (
            m0 * m0 - e * e - a * (m0 - e),
            q * (m0 + e - a) + b * (0.5 * a - m0),
        ),
        SymmetryMode::Pseudospin => (
            m0 * m0 - e * e + a * (m0 + e),
            q * (m0 - e + a) - b * (m0 + 0.5 * a),
        ),
    };
    Ok((lhs - num * num / (big_n * big_n)) / (m0 * m0))
}

/// Both roots of the master energy equation.
pub fn solve_energy(
    params: &PhysicalParams,
    qn: &QuantumNumbers,
    mode: SymmetryMode,
) -> Result<EnergySolution> {
    params.validate()?;
    let PhysicalParams { m0, b, q, a, .. } = *params;
    let index = effective_index(params, qn.kappa, mode)?;
    let big_n = f64::from(qn.n) + index + 1.0;
    let (lhs, num) = match mode {
        SymmetryMode::Spin => (
            [-1.0, a, m0 * m0 - a * m0],
            [q, q * (m0 - a) + b * (0.5 * a - m0)],
        ),
        SymmetryMode::Pseudospin => (
            [-1.0, a, m0 * m0 + a * m0],
            [-q, q * (m0 + a) - b * (m0 + 0.5 * a)],
        ),
    };
    assemble(params, qn, mode, index, squared_condition(lhs, num, big_n))
}

/// Direct closed form at `A = 0` (spin):
/// `E = m0[q(b−q) ± B·sqrt(B² − b(b−2q))]/(q² + B²)`, `B = n + δ + 1`.
pub fn energy_a0_spin(params: &PhysicalParams, qn: &QuantumNumbers) -> Result<EnergySolution> {
    if params.a != 0.0 {
        return Err(Error::Precondition(format!(
            "requires A = 0, got {}",
            params.a
        )));
    }
    let PhysicalParams { m0, b, q, .. } = *params;
    let radicand = (f64::from(qn.kappa) + 0.5).powi(2) + b * (b - 2.0 * q);
    if radicand < 0.0 {
        return Err(Error::ComplexIndex { radicand });
    }
    let big_b = f64::from(qn.n) + 0.5 + radicand.sqrt();
    let inner = big_b * big_b - b * (b - 2.0 * q);
    if inner < 0.0 {
        return Err(Error::NoRealSolution {
            discriminant: inner,
        });
    }
    let root = big_b * inner.sqrt();
    let denom = q * q + big_b * big_b;
    let hi = m0 * (q * (b - q) + root) / denom;
    let lo = m0 * (q * (b - q) - root) / denom;
    let mode = SymmetryMode::Spin;
    Ok(EnergySolution {
        mode,
        qn: *qn,
        params: *params,
        index: big_b - f64::from(qn.n) - 1.0,
        b_nk: big_b,
        particle: Some(make_root(params, qn, mode, hi)),
        antiparticle: Some(make_root(params, qn, mode, lo)),
        discriminant: 4.0 * root * root,
        degenerate: root == 0.0,
    })
}

/// Constant-mass spectra (`b = 0`, `A = 0`).
///
/// Spin: `{m0(N² − q²)/(N² + q²), −m0}` with `N = n + l + 1`.
/// Pseudospin: `{m0, −m0(N² − q²)/(N² + q²)}` with `N = n + l̃ + 1`; the
/// bound level is the lower root.
pub fn energy_constant_mass(
    params: &PhysicalParams,
    qn: &QuantumNumbers,
    mode: SymmetryMode,
) -> Result<EnergySolution> {
    if params.b != 0.0 || params.a != 0.0 {
        return Err(Error::Precondition(format!(
            "constant-mass spectrum requires b = 0 and A = 0, got b = {}, A = {}",
            params.b, params.a
        )));
    }
    let (m0, q) = (params.m0, params.q);
    let orbital = match mode {
        SymmetryMode::Spin => qn.l(),
        SymmetryMode::Pseudospin => qn.l_tilde(),
    };
    let big_n = f64::from(qn.n + orbital + 1);
    let level = m0 * (big_n * big_n - q * q) / (big_n * big_n + q * q);
    let (hi, lo) = match mode {
        SymmetryMode::Spin => (level, -m0),
        SymmetryMode::Pseudospin => (m0, -level),
    };
    Ok(EnergySolution {
        mode,
        qn: *qn,
        params: *params,
        index: f64::from(orbital),
        b_nk: big_n,
        particle: Some(make_root(params, qn, mode, hi)),
        antiparticle: Some(make_root(params, qn, mode, lo)),
        discriminant: f64::NAN,
        degenerate: hi == lo,
    })
}

/// The two spectra related by the variable ↔ constant mass exchange at
/// `q = b/2`, where the mass term drops out of the index.
///
/// The first is the variable-mass spectrum `{m0, −m0(N² − q²)/(N² + q²)}`;
/// the second is the constant-mass spectrum with the same `N`.
pub fn duality_spectra(
    params: &PhysicalParams,
    qn: &QuantumNumbers,
) -> Result<(EnergySolution, EnergySolution)> {
    let tol = 1e-12 * params.q.abs().max(params.b.abs()).max(1.0);
    if (params.q - 0.5 * params.b).abs() > tol {
        return Err(Error::Precondition(format!(
            "duality requires q = b/2, got q = {}, b = {}",
            params.q, params.b
        )));
    }
    if params.a != 0.0 {
        return Err(Error::Precondition(format!(
            "duality requires A = 0, got {}",
            params.a
        )));
    }
    let variable = solve_energy(params, qn, SymmetryMode::Spin)?;
    let constant = energy_constant_mass(&params.with_b(0.0), qn, SymmetryMode::Spin)?;
    Ok((variable, constant))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SWaveBranch {
    /// `κ = −1` (`l = 0`), spin symmetry.
    Spin,
    /// `κ = +1` (`l̃ = 0`), pseudospin symmetry.
    Pseudospin,
}

impl SWaveBranch {
    pub fn kappa(&self) -> i32 {
        match self {
            SWaveBranch::Spin => -1,
            SWaveBranch::Pseudospin => 1,
        }
    }

    pub fn mode(&self) -> SymmetryMode {
        match self {
            SWaveBranch::Spin => SymmetryMode::Spin,
            SWaveBranch::Pseudospin => SymmetryMode::Pseudospin,
        }
    }
}

/// s-wave energy condition written with the full denominator
/// `2n + 1 + sqrt(1 + 4b(b − 2q))` and numerator `2q(...) + b(...)`.
pub fn s_wave_energy(
    params: &PhysicalParams,
    n: u32,
    branch: SWaveBranch,
) -> Result<EnergySolution> {
    params.validate()?;
    let PhysicalParams { m0, b, q, a, .. } = *params;
    let radicand = 1.0 + 4.0 * b * (b - 2.0 * q);
    if radicand < 0.0 {
        return Err(Error::ComplexIndex {
            radicand: radicand / 4.0,
        });
    }
    let denom = 2.0 * f64::from(n) + 1.0 + radicand.sqrt();
    let (lhs, num) = match branch {
        SWaveBranch::Spin => (
            [-1.0, a, m0 * m0 - a * m0],
            [2.0 * q, 2.0 * q * (m0 - a) + b * (a - 2.0 * m0)],
        ),
        SWaveBranch::Pseudospin => (
            [-1.0, a, m0 * m0 + a * m0],
            [2.0 * q, -2.0 * q * (m0 + a) + b * (a + 2.0 * m0)],
        ),
    };
    let qn = QuantumNumbers::new(n, branch.kappa())?;
    let index = 0.5 * (radicand.sqrt() - 1.0);
    assemble(
        params,
        &qn,
        branch.mode(),
        index,
        squared_condition(lhs, num, denom),
    )
}

/// Schrödinger-limit level
/// `E = −(m0/2)(q − b)²/(n + 1/2 + sqrt((l + 1/2)² + b(b − 2q)))²`.
pub fn nonrelativistic_energy(params: &PhysicalParams, n: u32, l: u32) -> Result<f64> {
    let PhysicalParams { m0, b, q, .. } = *params;
    let radicand = (f64::from(l) + 0.5).powi(2) + b * (b - 2.0 * q);
    if radicand < 0.0 {
        return Err(Error::ComplexIndex { radicand });
    }
    let denom = f64::from(n) + 0.5 + radicand.sqrt();
    Ok(-0.5 * m0 * (q - b).powi(2) / (denom * denom))
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
    fn constant_mass_spin_examples() {
        let s = solve_energy(&nat(1.0, 0.0, 0.0), &qn(0, 1), SymmetryMode::Spin).unwrap();
        assert!((s.e_particle().unwrap() - 0.6).abs() < 1e-15);
        assert!((s.e_antiparticle().unwrap() + 1.0).abs() < 1e-15);
        assert!(s.particle.unwrap().flags.is_bound_state());
        assert!(!s.antiparticle.unwrap().flags.is_bound_state());

        let s = solve_energy(&nat(1.0, 0.0, 0.0), &qn(0, -1), SymmetryMode::Spin).unwrap();
        assert!(s.e_particle().unwrap().abs() < 1e-15);
    }

    #[test]
    fn variable_mass_spin_level() {
        // closed-form oracle: B = 1/2 + sqrt(2.25 − 0.19)
        let big_b: f64 = 0.5 + 2.06f64.sqrt();
        let expected = (-0.9 + big_b * (big_b * big_b + 0.19).sqrt()) / (1.0 + big_b * big_b);
        let s = solve_energy(&nat(1.0, 0.1, 0.0), &qn(0, 1), SymmetryMode::Spin).unwrap();
        assert!((s.e_particle().unwrap() - expected).abs() < 1e-13);
        assert!((s.e_particle().unwrap() - 0.61938).abs() < 1e-5);
        let c = energy_a0_spin(&nat(1.0, 0.1, 0.0), &qn(0, 1)).unwrap();
        assert!((c.e_particle().unwrap() - s.e_particle().unwrap()).abs() < 1e-12);
        assert!((c.e_antiparticle().unwrap() - s.e_antiparticle().unwrap()).abs() < 1e-12);
    }

    #[test]
    fn pseudospin_constant_mass_level_is_lower_root() {
        let s = solve_energy(&nat(1.0, 0.0, 0.0), &qn(1, 1), SymmetryMode::Pseudospin).unwrap();
        assert!((s.e_particle().unwrap() - 1.0).abs() < 1e-15);
        assert!((s.e_antiparticle().unwrap() + 0.6).abs() < 1e-15);
        assert_eq!(s.bound_energy(), s.e_antiparticle());
        let c =
            energy_constant_mass(&nat(1.0, 0.0, 0.0), &qn(1, 1), SymmetryMode::Pseudospin).unwrap();
        assert!((c.e_antiparticle().unwrap() + 0.6).abs() < 1e-15);
    }

    #[test]
    fn constant_mass_special_values() {
        let s = energy_constant_mass(&nat(2.0, 0.0, 0.0), &qn(0, 1), SymmetryMode::Spin).unwrap();
        assert_eq!(s.e_particle().unwrap(), 0.0);
        let s =
            energy_constant_mass(&nat(1.0, 0.0, 0.0), &qn(0, 1), SymmetryMode::Pseudospin).unwrap();
        assert_eq!(s.e_antiparticle().unwrap(), 0.0);
        // κ < 0: N = n − κ
        let s = energy_constant_mass(&nat(0.5, 0.0, 0.0), &qn(2, -2), SymmetryMode::Spin).unwrap();
        assert_eq!(s.b_nk, 4.0);
        assert!(energy_constant_mass(&nat(0.5, 0.1, 0.0), &qn(0, 1), SymmetryMode::Spin).is_err());
    }

    #[test]
    fn a0_closed_form_at_q_equal_b() {
        let p = nat(0.4, 0.4, 0.0);
        let s = energy_a0_spin(&p, &qn(1, 2)).unwrap();
        let big_b = s.b_nk;
        // coupling term q(b − q) drops out and B² − b(b − 2q) = B² + q²
        let expected = big_b / (0.16 + big_b * big_b).sqrt();
        assert!((s.e_particle().unwrap() - expected).abs() < 1e-14);
        assert!((s.e_antiparticle().unwrap() + expected).abs() < 1e-14);
    }

    #[test]
    fn duality_examples() {
        let (s1, s2) = duality_spectra(&nat(1.0, 2.0, 0.0), &qn(0, 1)).unwrap();
        assert!((s1.e_particle().unwrap() - 1.0).abs() < 1e-14);
        assert!((s1.e_antiparticle().unwrap() + 0.6).abs() < 1e-14);
        assert!((s2.e_particle().unwrap() - 0.6).abs() < 1e-14);
        assert!((s2.e_antiparticle().unwrap() + 1.0).abs() < 1e-14);
        assert!(matches!(
            duality_spectra(&nat(1.0, 1.0, 0.0), &qn(0, 1)),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn s_wave_examples() {
        let s = s_wave_energy(&nat(1.0, 0.0, 0.0), 1, SWaveBranch::Spin).unwrap();
        assert!((s.bound_energy().unwrap() - 0.6).abs() < 1e-15);
        let up = s_wave_energy(&nat(1.0, 0.0, 0.0), 0, SWaveBranch::Spin).unwrap();
        let down = s_wave_energy(&nat(1.0, 0.0, 0.0), 0, SWaveBranch::Pseudospin).unwrap();
        assert_eq!(up.bound_energy().unwrap(), 0.0);
        assert_eq!(down.bound_energy().unwrap(), 0.0);
    }

    #[test]
    fn s_wave_matches_general_path() {
        let p = nat(0.8, 0.1, 0.2);
        for branch in [SWaveBranch::Spin, SWaveBranch::Pseudospin] {
            let s = s_wave_energy(&p, 2, branch).unwrap();
            let g = solve_energy(&p, &qn(2, branch.kappa()), branch.mode()).unwrap();
            for (x, y) in s.roots().zip(g.roots()) {
                assert!((x.energy - y.energy).abs() < 1e-12, "{branch:?}");
            }
        }
        // b(b − 2q) < −1/4 here: both paths refuse the complex index
        let p = nat(0.8, 0.3, 0.2);
        assert!(matches!(
            s_wave_energy(&p, 2, SWaveBranch::Spin),
            Err(Error::ComplexIndex { .. })
        ));
        assert!(matches!(
            solve_energy(&p, &qn(2, -1), SymmetryMode::Spin),
            Err(Error::ComplexIndex { .. })
        ));
    }

    #[test]
    fn nonrelativistic_values() {
        let e = nonrelativistic_energy(&nat(1.0, 0.0, 0.0), 0, 0).unwrap();
        assert!((e + 0.5).abs() < 1e-15);
        assert_eq!(
            nonrelativistic_energy(&nat(0.7, 0.7, 0.0), 2, 1).unwrap(),
            0.0
        );
        let denom = 0.5 + 0.06f64.sqrt();
        let e = nonrelativistic_energy(&nat(1.0, 0.1, 0.0), 0, 0).unwrap();
        assert!((e + 0.405 / (denom * denom)).abs() < 1e-15);
        assert!((e + 0.72980).abs() < 1e-5);
        assert!(matches!(
            nonrelativistic_energy(&nat(2.0, 0.5, 0.0), 0, 0),
            Err(Error::ComplexIndex { .. })
        ));
    }

    #[test]
    fn complex_index_rejected() {
        let r = solve_energy(&nat(2.0, 0.5, 0.0), &qn(0, -1), SymmetryMode::Spin);
        assert!(matches!(r, Err(Error::ComplexIndex { .. })));
    }

    #[test]
    fn residuals_vanish_at_roots() {
        let p = nat(0.9, 0.1, -0.15);
        for mode in [SymmetryMode::Spin, SymmetryMode::Pseudospin] {
            for kappa in [-2, -1, 1, 2] {
                let s = solve_energy(&p, &qn(1, kappa), mode).unwrap();
                for r in s.roots() {
                    assert!(r.residual.abs() < 1e-12, "{mode} κ={kappa}: {}", r.residual);
                }
                let e = s.e_particle().unwrap();
                assert!(
                    master_residual(&p, &qn(1, kappa), mode, e + 1e-3)
                        .unwrap()
                        .abs()
                        > 1e-6
                );
            }
        }
    }

    #[test]
    fn threshold_root_is_not_bound() {
        // the upper root sits exactly at E = m0 + A where ε̃² = 0
        let s = solve_energy(&nat(0.5, 0.0, 0.2), &qn(0, 1), SymmetryMode::Pseudospin).unwrap();
        assert!((s.e_particle().unwrap() - 1.2).abs() < 1e-14);
        assert!(!s.particle.unwrap().flags.is_bound_state());
        assert!((s.bound_energy().unwrap() + 0.56).abs() < 1e-14);
    }

    #[test]
    fn degenerate_discriminant_gives_double_root() {
        let (hi, lo, _, deg) = stable_quadratic(1.0, -2.0, 1.0).unwrap();
        assert!(deg);
        assert_eq!((hi, lo), (1.0, 1.0));
        assert!(matches!(
            stable_quadratic(1.0, 0.0, 1.0),
            Err(Error::NoRealSolution { .. })
        ));
    }
}
