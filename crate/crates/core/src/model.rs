//! Physical parameters, quantum numbers and the reduction of the radial
//! Dirac problem to a Coulomb-like Schrödinger form.
//!
//! Internally everything is expressed with `m0` (rest energy `m₀c²`) and
//! `hbar_c` kept explicit, so the same formulas serve natural units
//! (`m0 = hbar_c = 1`) and physical units (MeV, fm).

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};

/// Default proton rest energy in MeV for the physical unit system.
pub const PROTON_REST_ENERGY_MEV: f64 = 938.272;
/// Default ħc in MeV·fm for the physical unit system.
pub const HBAR_C_MEV_FM: f64 = 197.327;

/// Couplings and mass-function constants of the model.
///
/// The mass function is `m(r)c² = m0 + hbar_c·b/r`; `q` is the magnitude of
/// the vector coupling and `a` the constant value taken by `Δ` (spin mode)
/// or `Σ` (pseudospin mode).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhysicalParams {
    pub m0: f64,
    pub b: f64,
    pub q: f64,
    pub a: f64,
    pub hbar_c: f64,
}

impl PhysicalParams {
    /// Natural units: `ħ = c = 1`, energies in units of `m₀c²`.
    pub fn natural(q: f64, b: f64, a: f64) -> Self {
        Self {
            m0: 1.0,
            b,
            q,
            a,
            hbar_c: 1.0,
        }
    }

    pub fn new(m0: f64, hbar_c: f64, q: f64, b: f64, a: f64) -> Result<Self> {
        let params = Self {
            m0,
            b,
            q,
            a,
            hbar_c,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.m0 > 0.0 && self.m0.is_finite()) {
            return Err(Error::Domain(format!(
                "m0 must be positive, got {}",
                self.m0
            )));
        }
        if !(self.hbar_c > 0.0 && self.hbar_c.is_finite()) {
            return Err(Error::Domain(format!(
                "hbar_c must be positive, got {}",
                self.hbar_c
            )));
        }
        for (name, v) in [("b", self.b), ("q", self.q), ("A", self.a)] {
            if !v.is_finite() {
                return Err(Error::Domain(format!("{name} must be finite")));
            }
        }
        Ok(())
    }

    /// Compton-like wavelength `λ₀ = ħ/(m₀c)` in length units.
    pub fn compton_wavelength(&self) -> f64 {
        self.hbar_c / self.m0
    }

    /// `m₁c²` as an energy·length, i.e. `m₀c²·λ₀·b`.
    pub fn m1_c2(&self) -> f64 {
        self.m0 * self.compton_wavelength() * self.b
    }

    pub fn with_a(self, a: f64) -> Self {
        Self { a, ..self }
    }

    pub fn with_b(self, b: f64) -> Self {
        Self { b, ..self }
    }

    pub fn with_q(self, q: f64) -> Self {
        Self { q, ..self }
    }

    /// Re-express natural-unit parameters in `units`.
    pub fn to_units(&self, units: UnitSystem) -> Self {
        let natural = self.to_natural();
        match units {
            UnitSystem::Natural => natural,
            UnitSystem::Physical {
                m0_mev,
                hbar_c_mev_fm,
            } => Self {
                m0: m0_mev,
                hbar_c: hbar_c_mev_fm,
                a: natural.a * m0_mev,
                ..natural
            },
        }
    }

    /// Re-express in natural units (`m0 = hbar_c = 1`).
    pub fn to_natural(&self) -> Self {
        Self {
            m0: 1.0,
            hbar_c: 1.0,
            a: self.a / self.m0,
            ..*self
        }
    }
}

/// Presentation unit convention.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum UnitSystem {
    Natural,
    Physical { m0_mev: f64, hbar_c_mev_fm: f64 },
}

impl UnitSystem {
    pub fn physical_default() -> Self {
        UnitSystem::Physical {
            m0_mev: PROTON_REST_ENERGY_MEV,
            hbar_c_mev_fm: HBAR_C_MEV_FM,
        }
    }

    /// Multiplier taking an energy in units of `m₀c²` to this system.
    pub fn energy_scale(&self) -> f64 {
        match *self {
            UnitSystem::Natural => 1.0,
            UnitSystem::Physical { m0_mev, .. } => m0_mev,
        }
    }

    /// Multiplier taking a length in units of `ħ/(m₀c)` to this system.
    pub fn length_scale(&self) -> f64 {
        match *self {
            UnitSystem::Natural => 1.0,
            UnitSystem::Physical {
                m0_mev,
                hbar_c_mev_fm,
            } => hbar_c_mev_fm / m0_mev,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            UnitSystem::Natural => "natural",
            UnitSystem::Physical { .. } => "physical",
        }
    }
}

/// `m(r)c² = m₀c² + ħc·b/r`.
pub fn mass_at(params: &PhysicalParams, r: f64) -> Result<f64> {
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::Domain(format!(
            "mass function is singular at r = {r}; need r > 0"
        )));
    }
    Ok(params.m0 + params.hbar_c * params.b / r)
}

/// Orbital labels attached to a spin-orbit quantum number.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct AngularLabels {
    pub l: u32,
    pub l_tilde: u32,
    /// Twice the total angular momentum, so `j = two_j / 2`.
    pub two_j: u32,
}

impl AngularLabels {
    pub fn j(&self) -> f64 {
        f64::from(self.two_j) / 2.0
    }
}

/// `l = |κ + 1/2| − 1/2`, `l̃ = |κ − 1/2| − 1/2`, `j = |κ| − 1/2`.
pub fn map_kappa(kappa: i32) -> Result<AngularLabels> {
    if kappa == 0 {
        return Err(Error::Domain(
            "kappa = 0 is not a Dirac spin-orbit eigenvalue".into(),
        ));
    }
    // |κ + 1/2| − 1/2 on integers: κ for κ > 0, −κ − 1 for κ < 0.
    let (l, l_tilde) = if kappa > 0 {
        (kappa as u32, (kappa - 1) as u32)
    } else {
        ((-kappa - 1) as u32, (-kappa) as u32)
    };
    Ok(AngularLabels {
        l,
        l_tilde,
        two_j: 2 * kappa.unsigned_abs() - 1,
    })
}

/// Radial quantum number together with the spin-orbit labels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct QuantumNumbers {
    pub n: u32,
    pub kappa: i32,
    pub labels: AngularLabels,
}

impl QuantumNumbers {
    pub fn new(n: u32, kappa: i32) -> Result<Self> {
        Ok(Self {
            n,
            kappa,
            labels: map_kappa(kappa)?,
        })
    }

    pub fn l(&self) -> u32 {
        self.labels.l
    }

    pub fn l_tilde(&self) -> u32 {
        self.labels.l_tilde
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SymmetryMode {
    /// `Δ(r) = A`; the upper component obeys a Schrödinger-like equation.
    Spin,
    /// `Σ(r) = A`; the lower component obeys a Schrödinger-like equation.
    Pseudospin,
}

impl SymmetryMode {
    /// Signed vector coupling `q_v`: `+q` for spin, `−q` for pseudospin.
    pub fn vector_coupling(&self, q: f64) -> f64 {
        match self {
            SymmetryMode::Spin => q,
            SymmetryMode::Pseudospin => -q,
        }
    }

    /// Centrifugal strength of the dominant component: `κ(κ+1)` or `κ(κ−1)`.
    pub fn centrifugal(&self, kappa: i32) -> f64 {
        let k = f64::from(kappa);
        match self {
            SymmetryMode::Spin => k * (k + 1.0),
            SymmetryMode::Pseudospin => k * (k - 1.0),
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            SymmetryMode::Spin => "spin",
            SymmetryMode::Pseudospin => "pseudospin",
        }
    }
}

impl fmt::Display for SymmetryMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SymmetryMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "spin" => Ok(SymmetryMode::Spin),
            "pseudospin" | "pseudo-spin" | "pseudo" => Ok(SymmetryMode::Pseudospin),
            other => Err(Error::Config(format!("unknown symmetry mode `{other}`"))),
        }
    }
}

/// `constant + inverse / r`, the shape of every potential in this model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InverseLinear {
    pub constant: f64,
    pub inverse: f64,
}

impl InverseLinear {
    pub fn value(&self, r: f64) -> f64 {
        self.constant + self.inverse / r
    }

    pub fn derivative(&self, r: f64) -> f64 {
        -self.inverse / (r * r)
    }

    /// Positive radius where the function vanishes, if any.
    pub fn zero_crossing(&self) -> Option<f64> {
        if self.constant == 0.0 || self.inverse == 0.0 {
            return None;
        }
        let r = -self.inverse / self.constant;
        (r > 0.0).then_some(r)
    }
}

/// Mass, difference and sum potentials of one symmetry sector.
///
/// The Coulomb-like field enters the non-constant one of `Δ`/`Σ` as
/// `2V(r)` with `V(r) = −ħc·q_v/r`, which is the normalization that produces
/// the reduced coefficients below.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiracPotentials {
    pub params: PhysicalParams,
    pub mode: SymmetryMode,
}

impl DiracPotentials {
    pub fn new(params: PhysicalParams, mode: SymmetryMode) -> Self {
        Self { params, mode }
    }

    pub fn mass(&self) -> InverseLinear {
        InverseLinear {
            constant: self.params.m0,
            inverse: self.params.hbar_c * self.params.b,
        }
    }

    fn coulomb_doubled(&self) -> InverseLinear {
        let q_v = self.mode.vector_coupling(self.params.q);
        InverseLinear {
            constant: 0.0,
            inverse: -2.0 * self.params.hbar_c * q_v,
        }
    }

    fn constant(&self) -> InverseLinear {
        InverseLinear {
            constant: self.params.a,
            inverse: 0.0,
        }
    }

    /// `Δ(r) = V(r) − S(r)`.
    pub fn delta(&self) -> InverseLinear {
        match self.mode {
            SymmetryMode::Spin => self.constant(),
            SymmetryMode::Pseudospin => self.coulomb_doubled(),
        }
    }

    /// `Σ(r) = V(r) + S(r)`.
    pub fn sigma(&self) -> InverseLinear {
        match self.mode {
            SymmetryMode::Spin => self.coulomb_doubled(),
            SymmetryMode::Pseudospin => self.constant(),
        }
    }

    /// `U₋(r) = m(r)c² + E − Δ(r)`.
    pub fn u_minus(&self, energy: f64) -> InverseLinear {
        let (m, d) = (self.mass(), self.delta());
        InverseLinear {
            constant: m.constant + energy - d.constant,
            inverse: m.inverse - d.inverse,
        }
    }

    /// `U₊(r) = m(r)c² − E + Σ(r)`.
    pub fn u_plus(&self, energy: f64) -> InverseLinear {
        let (m, s) = (self.mass(), self.sigma());
        InverseLinear {
            constant: m.constant - energy + s.constant,
            inverse: m.inverse + s.inverse,
        }
    }

    /// `g₋(r) = c²·dm/dr − dΔ/dr`.
    pub fn g_minus(&self, r: f64) -> f64 {
        self.mass().derivative(r) - self.delta().derivative(r)
    }

    /// `g₊(r) = c²·dm/dr + dΣ/dr`.
    pub fn g_plus(&self, r: f64) -> f64 {
        self.mass().derivative(r) + self.sigma().derivative(r)
    }
}

/// Sector quantities that the spin ↔ pseudospin parameter map acts on.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SectorInputs {
    /// Signed vector coupling `q_v`.
    pub coupling: f64,
    pub energy: f64,
    pub a: f64,
    pub kappa: i32,
}

impl SectorInputs {
    pub fn new(params: &PhysicalParams, mode: SymmetryMode, kappa: i32, energy: f64) -> Self {
        Self {
            coupling: mode.vector_coupling(params.q),
            energy,
            a: params.a,
            kappa,
        }
    }

    /// Spin-sector parameters whose vector coupling is `self.coupling`.
    pub fn spin_params(&self, template: &PhysicalParams) -> PhysicalParams {
        PhysicalParams {
            q: self.coupling,
            a: self.a,
            ..*template
        }
    }
}

/// `q_v → −q_v`, `E → −E`, `A → −A`, `κ → −κ`.
///
/// Feeding the image to the spin-sector formulas yields the pseudospin
/// sector quantities of the original inputs, with the roles of the upper
/// and lower components exchanged.
pub fn pseudospin_parameter_map(inputs: SectorInputs) -> SectorInputs {
    SectorInputs {
        coupling: -inputs.coupling,
        energy: -inputs.energy,
        a: -inputs.a,
        kappa: -inputs.kappa,
    }
}

/// Validity flags attached to [`ReducedCoefficients`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CoefficientFlags {
    pub epsilon_positive: bool,
    pub index_real: bool,
    /// `index > −1/2`, the square-integrability threshold.
    pub index_admissible: bool,
}

impl CoefficientFlags {
    pub fn admissible(&self) -> bool {
        self.epsilon_positive && self.index_real && self.index_admissible
    }
}

/// Coefficients of `u'' + (−ε²r² + βr − γ)/r² · u = 0` and the effective
/// angular index (`δ` for spin, `η` for pseudospin).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ReducedCoefficients {
    pub mode: SymmetryMode,
    pub epsilon_sq: f64,
    /// `sqrt(epsilon_sq)` when positive, `NaN` otherwise.
    pub epsilon: f64,
    pub beta: f64,
    pub gamma: f64,
    /// `(κ ± 1/2)² + b(b ∓ 2q_v)`, whose root minus 1/2 is the index.
    pub index_radicand: f64,
    /// Effective index, `NaN` when complex.
    pub index: f64,
    pub flags: CoefficientFlags,
}

impl ReducedCoefficients {
    fn assemble(
        mode: SymmetryMode,
        epsilon_sq: f64,
        beta: f64,
        gamma: f64,
        index_radicand: f64,
    ) -> Self {
        let epsilon_positive = epsilon_sq > 0.0;
        let index_real = index_radicand >= 0.0;
        let index = if index_real {
            index_radicand.sqrt() - 0.5
        } else {
            f64::NAN
        };
        Self {
            mode,
            epsilon_sq,
            epsilon: if epsilon_positive {
                epsilon_sq.sqrt()
            } else {
                f64::NAN
            },
            beta,
            gamma,
            index_radicand,
            index,
            flags: CoefficientFlags {
                epsilon_positive,
                index_real,
                index_admissible: index_real && index > -0.5,
            },
        }
    }

    /// `β − 2ε(n + index + 1)`: zero at an eigenvalue of the reduced equation.
    pub fn quantization_gap(&self, n: u32) -> f64 {
        self.beta - 2.0 * self.epsilon * (f64::from(n) + self.index + 1.0)
    }
}

/// Spin-sector formulas evaluated on arbitrary sector inputs.
pub fn spin_sector_coefficients(
    params: &PhysicalParams,
    inputs: &SectorInputs,
) -> ReducedCoefficients {
    let (m0, hc, b) = (params.m0, params.hbar_c, params.b);
    let (q, e, a) = (inputs.coupling, inputs.energy, inputs.a);
    let k = f64::from(inputs.kappa);
    let epsilon_sq = (m0 * m0 - e * e - a * (m0 - e)) / (hc * hc);
    let beta = (2.0 * q * (m0 + e - a) + b * (a - 2.0 * m0)) / hc;
    let gamma = b * (b - 2.0 * q) + k * (k + 1.0);
    let radicand = (k + 0.5).powi(2) + b * (b - 2.0 * q);
    ReducedCoefficients::assemble(SymmetryMode::Spin, epsilon_sq, beta, gamma, radicand)
}

/// Pseudospin-sector formulas, written in the signed coupling `q_v`.
pub fn pseudospin_sector_coefficients(
    params: &PhysicalParams,
    inputs: &SectorInputs,
) -> ReducedCoefficients {
    let (m0, hc, b) = (params.m0, params.hbar_c, params.b);
    let (q, e, a) = (inputs.coupling, inputs.energy, inputs.a);
    let k = f64::from(inputs.kappa);
    let epsilon_sq = (m0 * m0 - e * e + a * (m0 + e)) / (hc * hc);
    let beta = -(2.0 * q * (m0 - e + a) + b * (2.0 * m0 + a)) / hc;
    let gamma = b * (b + 2.0 * q) + k * (k - 1.0);
    let radicand = (k - 0.5).powi(2) + b * (b + 2.0 * q);
    ReducedCoefficients::assemble(SymmetryMode::Pseudospin, epsilon_sq, beta, gamma, radicand)
}

/// Reduced coefficients of the dominant component at trial energy `energy`.
///
/// Never fails: inadmissible regimes are reported through the flags so that
/// scanning code can evaluate the coefficients anywhere.
pub fn reduced_coefficients(
    params: &PhysicalParams,
    kappa: i32,
    mode: SymmetryMode,
    energy: f64,
) -> ReducedCoefficients {
    let inputs = SectorInputs::new(params, mode, kappa, energy);
    match mode {
        SymmetryMode::Spin => spin_sector_coefficients(params, &inputs),
        SymmetryMode::Pseudospin => pseudospin_sector_coefficients(params, &inputs),
    }
}
