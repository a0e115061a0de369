//! Normalized radial spinor components.
//!
//! The dominant component of either symmetry sector has the form
//! `𝒩 r^{p} e^{−εr} L_n^{2p−1}(2εr)` with `p = index + 1`. Its partner is
//! obtained from the first-order coupled equations.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{
    reduced_coefficients, DiracPotentials, InverseLinear, PhysicalParams, QuantumNumbers,
    SymmetryMode,
};
use crate::quadrature::integrate;
use crate::special::{laguerre_derivative, ln_factorial, ln_gamma};
use crate::spectrum::nonrelativistic_energy;

/// Relative tolerance on `β = 2ε(n + index + 1)` for a state to count as
/// an eigenstate.
const EIGEN_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Component {
    /// `F`.
    Upper,
    /// `G`.
    Lower,
}

impl Component {
    pub fn symbol(&self) -> &'static str {
        match self {
            Component::Upper => "F",
            Component::Lower => "G",
        }
    }
}

/// `𝒩 = sqrt(n!(2ε)^{2δ+3} / (2(n+δ+1)Γ(n+2δ+2)))`, evaluated in log space.
pub fn normalization_constant(eps: f64, index: f64, n: u32) -> f64 {
    let nf = f64::from(n);
    let ln_sq = ln_factorial(n) + (2.0 * index + 3.0) * (2.0 * eps).ln()
        - std::f64::consts::LN_2
        - (nf + index + 1.0).ln()
        - ln_gamma(nf + 2.0 * index + 2.0);
    (0.5 * ln_sq).exp()
}

/// `𝒩 r^{index+1} e^{−εr} L_n^{2·index+1}(2εr)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LaguerreForm {
    pub n: u32,
    pub index: f64,
    pub epsilon: f64,
    pub normalization: f64,
}

impl LaguerreForm {
    pub fn new(n: u32, index: f64, epsilon: f64) -> Self {
        Self {
            n,
            index,
            epsilon,
            normalization: normalization_constant(epsilon, index, n),
        }
    }

    /// `d^order/dr^order` for `order ≤ 3` by the Leibniz rule on
    /// `r^p e^{−εr}` times the Laguerre factor.
    pub fn eval(&self, r: f64, order: u32) -> f64 {
        let p = self.index + 1.0;
        let eps = self.epsilon;
        let alpha = 2.0 * self.index + 1.0;
        let x = 2.0 * eps * r;
        let w = p / r - eps;
        let g = self.normalization * (p * r.ln() - eps * r).exp();
        let envelope = [
            1.0,
            w,
            w * w - p / (r * r),
            w * w * w - 3.0 * w * p / (r * r) + 2.0 * p / (r * r * r),
        ];
        let poly = |k: u32| (2.0 * eps).powi(k as i32) * laguerre_derivative(self.n, alpha, x, k);
        let binom = [
            [1.0, 0.0, 0.0, 0.0],
            [1.0, 1.0, 0.0, 0.0],
            [1.0, 2.0, 1.0, 0.0],
            [1.0, 3.0, 3.0, 1.0],
        ];
        match order {
            0..=3 => {
                let m = order as usize;
                g * (0..=m)
                    .map(|k| binom[m][k] * envelope[k] * poly((m - k) as u32))
                    .sum::<f64>()
            }
            _ => f64::NAN,
        }
    }
}

/// Partner component `ħc(f' + s·κ f/r)/U(r)` of a dominant component.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompanionForm {
    pub source: Representation,
    /// `+κ` for `G` from `F`, `−κ` for `F` from `G`.
    pub signed_kappa: f64,
    pub hbar_c: f64,
    pub constant: f64,
    pub inverse: f64,
}

impl CompanionForm {
    fn denominator(&self) -> InverseLinear {
        InverseLinear {
            constant: self.constant,
            inverse: self.inverse,
        }
    }

    /// Derivatives up to order 2; higher orders return `NaN`.
    pub fn eval(&self, r: f64, order: u32) -> f64 {
        let k = self.signed_kappa;
        let f = |o| self.source.eval(r, o);
        let (f0, f1) = (f(0), f(1));
        let num = f1 + k * f0 / r;
        let u = self.denominator().value(r);
        let u1 = -self.inverse / (r * r);
        match order {
            0 => self.hbar_c * num / u,
            1 => {
                let f2 = f(2);
                let num1 = f2 + k * f1 / r - k * f0 / (r * r);
                self.hbar_c * (num1 * u - num * u1) / (u * u)
            }
            2 => {
                let (f2, f3) = (f(2), f(3));
                let num1 = f2 + k * f1 / r - k * f0 / (r * r);
                let num2 = f3 + k * f2 / r - 2.0 * k * f1 / (r * r) + 2.0 * k * f0 / (r * r * r);
                let u2 = 2.0 * self.inverse / (r * r * r);
                self.hbar_c
                    * (num2 / u - 2.0 * num1 * u1 / (u * u) - num * u2 / (u * u)
                        + 2.0 * num * u1 * u1 / (u * u * u))
            }
            _ => f64::NAN,
        }
    }
}

/// Analytic representation backing a sampled [`RadialFunction`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum Representation {
    Laguerre(LaguerreForm),
    Companion(Box<CompanionForm>),
}

impl Representation {
    pub fn eval(&self, r: f64, order: u32) -> f64 {
        match self {
            Representation::Laguerre(l) => l.eval(r, order),
            Representation::Companion(c) => c.eval(r, order),
        }
    }
}

/// Hybrid grid: logarithmic up to `1/ε`, linear beyond.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridSpec {
    /// Inner radius in units of `1/ε`.
    pub r_min: f64,
    /// Outer radius in units of `1/ε`.
    pub r_max: f64,
    pub points: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self {
            r_min: 1e-4,
            r_max: 40.0,
            points: 2000,
        }
    }
}

impl GridSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.r_min > 0.0 && self.r_min < 1.0 && self.r_max > 1.0 && self.points >= 8) {
            return Err(Error::Config(format!(
                "grid needs 0 < r_min < 1 < r_max (in 1/eps) and >= 8 points, got {self:?}"
            )));
        }
        Ok(())
    }

    pub fn build(&self, epsilon: f64) -> Vec<f64> {
        let n_log = self.points / 4;
        let n_lin = self.points - n_log;
        let (lo, mid, hi) = (self.r_min.ln(), 0.0, self.r_max);
        let mut grid = Vec::with_capacity(self.points);
        for i in 0..n_log {
            let t = i as f64 / n_log as f64;
            grid.push((lo + t * (mid - lo)).exp() / epsilon);
        }
        for i in 0..n_lin {
            let t = i as f64 / (n_lin - 1) as f64;
            grid.push((1.0 + t * (hi - 1.0)) / epsilon);
        }
        grid
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NormMetadata {
    /// `∫₀^R f(r)² dr`.
    pub integral: f64,
    pub error_estimate: f64,
    pub upper_limit: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct WaveWarnings {
    /// Index in `(−1/2, 0]`: normalizable but outside the strict bound-state
    /// condition `index > 0`.
    pub index_not_strict: bool,
}

/// Sampled radial component with its analytic backing.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RadialFunction {
    pub grid: Vec<f64>,
    pub values: Vec<f64>,
    pub norm: NormMetadata,
    pub qn: QuantumNumbers,
    pub mode: SymmetryMode,
    pub component: Component,
    pub energy: f64,
    pub epsilon: f64,
    pub index: f64,
    pub representation: Representation,
    pub warnings: WaveWarnings,
}

impl RadialFunction {
    pub fn eval(&self, r: f64) -> f64 {
        self.representation.eval(r, 0)
    }

    pub fn derivative(&self, r: f64, order: u32) -> f64 {
        self.representation.eval(r, order)
    }

    /// `𝒩` of the Laguerre form, `NaN` for companion components.
    pub fn normalization(&self) -> f64 {
        match &self.representation {
            Representation::Laguerre(l) => l.normalization,
            Representation::Companion(_) => f64::NAN,
        }
    }

    /// Interior sign changes, ignoring samples below `1e−12·max|f|`.
    pub fn node_count(&self) -> usize {
        count_nodes(&self.values)
    }
}

pub(crate) fn count_nodes(values: &[f64]) -> usize {
    let peak = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let floor = 1e-12 * peak;
    let mut last = 0.0f64;
    let mut nodes = 0;
    for &v in values {
        if v.abs() <= floor {
            continue;
        }
        if last != 0.0 && v.signum() != last.signum() {
            nodes += 1;
        }
        last = v;
    }
    nodes
}

fn norm_of(repr: &Representation, epsilon: f64, n: u32, index: f64) -> NormMetadata {
    let upper = (2.0 * (f64::from(n) + index + 1.0) + 50.0) / epsilon;
    let (integral, error_estimate) = integrate(
        |r: f64| {
            if r <= 0.0 {
                0.0
            } else {
                repr.eval(r, 0).powi(2)
            }
        },
        0.0,
        upper,
        1e-15,
        1e-13,
        4000,
    );
    NormMetadata {
        integral,
        error_estimate,
        upper_limit: upper,
    }
}

#[allow(clippy::too_many_arguments)]
fn sample(
    repr: Representation,
    grid: Vec<f64>,
    qn: QuantumNumbers,
    mode: SymmetryMode,
    component: Component,
    energy: f64,
    epsilon: f64,
    index: f64,
) -> RadialFunction {
    let values = grid.iter().map(|&r| repr.eval(r, 0)).collect();
    let norm = norm_of(&repr, epsilon, qn.n, index);
    RadialFunction {
        grid,
        values,
        norm,
        qn,
        mode,
        component,
        energy,
        epsilon,
        index,
        representation: repr,
        warnings: WaveWarnings {
            index_not_strict: index <= 0.0,
        },
    }
}

fn dominant(
    params: &PhysicalParams,
    qn: &QuantumNumbers,
    energy: f64,
    mode: SymmetryMode,
    grid: &GridSpec,
) -> Result<RadialFunction> {
    grid.validate()?;
    let c = reduced_coefficients(params, qn.kappa, mode, energy);
    if !c.flags.index_real {
        return Err(Error::ComplexIndex {
            radicand: c.index_radicand,
        });
    }
    if !c.flags.admissible() {
        return Err(Error::Precondition(format!(
            "E = {energy} is not a bound {mode} state (eps^2 = {}, index = {})",
            c.epsilon_sq, c.index
        )));
    }
    let gap = c.quantization_gap(qn.n);
    if gap.abs() > EIGEN_TOL * c.beta.abs().max(1.0) {
        return Err(Error::Precondition(format!(
            "E = {energy} is not an eigenvalue for n = {}: beta - 2 eps (n + index + 1) = {gap}",
            qn.n
        )));
    }
    let form = LaguerreForm::new(qn.n, c.index, c.epsilon);
    let component = match mode {
        SymmetryMode::Spin => Component::Upper,
        SymmetryMode::Pseudospin => Component::Lower,
    };
    Ok(sample(
        Representation::Laguerre(form),
        grid.build(c.epsilon),
        *qn,
        mode,
        component,
        energy,
        c.epsilon,
        c.index,
    ))
}

/// `F(r)` of a spin-symmetric bound state on the default grid.
pub fn upper_spinor(
    params: &PhysicalParams,
    qn: &QuantumNumbers,
    energy: f64,
) -> Result<RadialFunction> {
    upper_spinor_on(params, qn, energy, &GridSpec::default())
}

pub fn upper_spinor_on(
    params: &PhysicalParams,
    qn: &QuantumNumbers,
    energy: f64,
    grid: &GridSpec,
) -> Result<RadialFunction> {
    dominant(params, qn, energy, SymmetryMode::Spin, grid)
}

/// `G(r)` of a pseudospin-symmetric bound state on the default grid.
pub fn lower_spinor(
    params: &PhysicalParams,
    qn: &QuantumNumbers,
    energy: f64,
) -> Result<RadialFunction> {
    lower_spinor_on(params, qn, energy, &GridSpec::default())
}

pub fn lower_spinor_on(
    params: &PhysicalParams,
    qn: &QuantumNumbers,
    energy: f64,
    grid: &GridSpec,
) -> Result<RadialFunction> {
    dominant(params, qn, energy, SymmetryMode::Pseudospin, grid)
}

/// Partner component from the first-order coupled equations:
/// `G = ħc(F' + κF/r)/U₋` when `f` is `F`, `F = ħc(G' − κG/r)/U₊` when `f`
/// is `G`. The result is not renormalized.
pub fn companion_component(
    f: &RadialFunction,
    params: &PhysicalParams,
    energy: f64,
    mode: SymmetryMode,
) -> Result<RadialFunction> {
    let pot = DiracPotentials::new(*params, mode);
    let kappa = f64::from(f.qn.kappa);
    let (u, signed_kappa, component) = match f.component {
        Component::Upper => (pot.u_minus(energy), kappa, Component::Lower),
        Component::Lower => (pot.u_plus(energy), -kappa, Component::Upper),
    };
    let (lo, hi) = (f.grid[0], f.grid[f.grid.len() - 1]);
    if let Some(r0) = u.zero_crossing() {
        // a zero of U is harmless only where the numerator vanishes with it
        let num = f.derivative(r0, 1) + signed_kappa * f.eval(r0) / r0;
        let scale = f.values.iter().fold(0.0f64, |m, v| m.max(v.abs())) * f.epsilon.max(1.0 / r0);
        if (lo..=hi).contains(&r0) && num.abs() > 1e-6 * scale {
            return Err(Error::SingularDenominator { radius: r0 });
        }
    }
    if u.constant == 0.0 && u.inverse == 0.0 {
        return Err(Error::SingularDenominator { radius: lo });
    }
    let repr = Representation::Companion(Box::new(CompanionForm {
        source: f.representation.clone(),
        signed_kappa,
        hbar_c: params.hbar_c,
        constant: u.constant,
        inverse: u.inverse,
    }));
    Ok(sample(
        repr,
        f.grid.clone(),
        f.qn,
        mode,
        component,
        energy,
        f.epsilon,
        f.index,
    ))
}

/// Schrödinger-limit radial function
/// `𝒩 r^{(1+s)/2} e^{−kr} L_n^{s}(2kr)`, `s = sqrt((2l+1)² + 4b(b−q))`,
/// `k = sqrt(−2 m0 E)/ħc`.
pub fn nonrelativistic_wavefunction(
    params: &PhysicalParams,
    n: u32,
    l: u32,
) -> Result<RadialFunction> {
    let energy = nonrelativistic_energy(params, n, l)?;
    if !(energy < 0.0) {
        return Err(Error::Precondition(format!(
            "no bound Schrodinger-limit state: E = {energy}"
        )));
    }
    let PhysicalParams {
        m0, b, q, hbar_c, ..
    } = *params;
    let radicand = (2.0 * f64::from(l) + 1.0).powi(2) + 4.0 * b * (b - q);
    if radicand < 0.0 {
        return Err(Error::ComplexIndex {
            radicand: radicand / 4.0,
        });
    }
    let index = 0.5 * (radicand.sqrt() - 1.0);
    let k = (-2.0 * m0 * energy).sqrt() / hbar_c;
    let qn = QuantumNumbers::new(n, -(l as i32) - 1)?;
    let grid = GridSpec::default();
    Ok(sample(
        Representation::Laguerre(LaguerreForm::new(n, index, k)),
        grid.build(k),
        qn,
        SymmetryMode::Spin,
        Component::Upper,
        energy,
        k,
        index,
    ))
}
