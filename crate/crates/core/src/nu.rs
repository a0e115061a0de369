//! Parametric Nikiforov–Uvarov machinery.
//!
//! A problem is the equation
//!
//! ```text
//! [r(c3 − c4 r)]² ψ'' + r(c3 − c4 r)(c1 − c2 r) ψ' + (−ξ1 r² + ξ2 r − ξ3) ψ = 0,
//! ```
//!
//! i.e. `τ̃ = c1 − c2 r`, `σ = r(c3 − c4 r)`, `σ̃ = −ξ1 r² + ξ2 r − ξ3`.
//! [`derive_constants`] gives the closed-form constants `c5…c16`, the key
//! polynomials and the energy condition of the bound-state branch;
//! [`enumerate_branches`] rebuilds all four candidate `π(r)` from the
//! perfect-square condition so the branch choice can be checked.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::special::{jacobi, laguerre};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NuProblem {
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    pub c4: f64,
    pub xi1: f64,
    pub xi2: f64,
    pub xi3: f64,
}

impl NuProblem {
    pub fn new(c: [f64; 4], xi: [f64; 3]) -> Result<Self> {
        let p = Self {
            c1: c[0],
            c2: c[1],
            c3: c[2],
            c4: c[3],
            xi1: xi[0],
            xi2: xi[1],
            xi3: xi[2],
        };
        if p.c3 == 0.0 {
            return Err(Error::Domain("c3 must be nonzero".into()));
        }
        if c.iter().chain(xi.iter()).any(|v| !v.is_finite()) {
            return Err(Error::Domain("NU coefficients must be finite".into()));
        }
        Ok(p)
    }

    /// The Coulomb-like reduced equation `u'' + (−ε²r² + βr − γ)/r² u = 0`.
    pub fn coulomb_like(epsilon: f64, beta: f64, gamma: f64) -> Result<Self> {
        Self::new([0.0, 0.0, 1.0, 0.0], [epsilon * epsilon, beta, gamma])
    }
}

/// First-degree polynomial `constant + slope·r`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Linear {
    pub constant: f64,
    pub slope: f64,
}

impl Linear {
    pub fn eval(&self, r: f64) -> f64 {
        self.constant + self.slope * r
    }
}

/// A constant that only exists for `c4 ≠ 0`; in the Laguerre limit the
/// factor `(c3 − c4 r)^c` it belongs to becomes an exponential.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum JacobiExponent {
    Value(f64),
    LaguerreLimit,
}

impl JacobiExponent {
    pub fn value(&self) -> Option<f64> {
        match self {
            JacobiExponent::Value(v) => Some(*v),
            JacobiExponent::LaguerreLimit => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NuDerived {
    pub c5: f64,
    pub c6: f64,
    pub c7: f64,
    pub c8: f64,
    pub c9: f64,
    pub c10: f64,
    pub c11: f64,
    pub c12: JacobiExponent,
    pub c13: f64,
    pub c14: JacobiExponent,
    pub c15: f64,
    pub c16: f64,
    pub pi_poly: Linear,
    pub k: f64,
    pub tau_poly: Linear,
    pub tau_slope: f64,
}

pub fn derive_constants(p: &NuProblem) -> Result<NuDerived> {
    let NuProblem {
        c1,
        c2,
        c3,
        c4,
        xi1,
        xi2,
        xi3,
    } = *p;
    let c5 = 0.5 * (c3 - c1);
    let c6 = 0.5 * (c2 - 2.0 * c4);
    let c7 = c6 * c6 + xi1;
    let c8 = 2.0 * c5 * c6 - xi2;
    let c9 = c5 * c5 + xi3;
    let c10 = c4 * (c3 * c8 + c4 * c9) + c3 * c3 * c7;
    if c9 < 0.0 {
        return Err(Error::Branch(format!("c9 = {c9} < 0")));
    }
    if c10 < 0.0 {
        return Err(Error::Branch(format!("c10 = {c10} < 0")));
    }
    let (s9, s10) = (c9.sqrt(), c10.sqrt());
    let c11 = 2.0 * s9 / c3;
    let c13 = (c5 + s9) / c3;
    let c15 = 2.0 * s10 / c3;
    let c16 = 0.5 * c15;
    let (c12, c14) = if c4 == 0.0 {
        (JacobiExponent::LaguerreLimit, JacobiExponent::LaguerreLimit)
    } else {
        (
            JacobiExponent::Value(2.0 * s10 / (c3 * c4)),
            JacobiExponent::Value((s10 - c4 * c5 - c3 * c6) / (c3 * c4)),
        )
    };
    let pi_poly = Linear {
        constant: c5 + s9,
        slope: -(c4 * s9 + s10 - c3 * c6) / c3,
    };
    let k = -(c3 * c8 + 2.0 * c4 * c9 + 2.0 * (c9 * c10).sqrt()) / (c3 * c3);
    let tau_slope = -2.0 * (c3 * c4 + c4 * s9 + s10) / c3;
    let tau_poly = Linear {
        constant: c3 + 2.0 * s9,
        slope: tau_slope,
    };
    if !(tau_slope < 0.0) {
        return Err(Error::Branch(format!("tau' = {tau_slope} is not negative")));
    }
    Ok(NuDerived {
        c5,
        c6,
        c7,
        c8,
        c9,
        c10,
        c11,
        c12,
        c13,
        c14,
        c15,
        c16,
        pi_poly,
        k,
        tau_poly,
        tau_slope,
    })
}

/// Left side of the energy condition; it vanishes at an eigenvalue.
///
/// Equals `λ_n − λ` with `λ = k + π'` and `λ_n = −nτ' − n(n−1)σ''/2`.
pub fn quantization_residual(p: &NuProblem, n: u32) -> Result<f64> {
    let d = derive_constants(p)?;
    let nf = f64::from(n);
    let (s9, s10) = (d.c9.sqrt(), d.c10.sqrt());
    Ok(p.c2 * nf - (2.0 * nf + 1.0) * d.c6
        + (2.0 * nf + 1.0) * (s10 + p.c4 * s9) / p.c3
        + nf * (nf - 1.0) * p.c4
        + (p.c3 * d.c8 + 2.0 * p.c4 * d.c9 + 2.0 * (d.c9 * d.c10).sqrt()) / (p.c3 * p.c3))
}

/// `(λ, λ_n)` computed from the key polynomials of the selected branch.
pub fn lambda_pair(p: &NuProblem, n: u32) -> Result<(f64, f64)> {
    let d = derive_constants(p)?;
    let nf = f64::from(n);
    let sigma_second = -2.0 * p.c4;
    let lambda = d.k + d.pi_poly.slope;
    let lambda_n = -nf * d.tau_slope - 0.5 * nf * (nf - 1.0) * sigma_second;
    Ok((lambda, lambda_n))
}

/// One of the four candidate `π(r)` polynomials.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Branch {
    pub k: f64,
    pub pi_poly: Linear,
    pub tau_poly: Linear,
    /// Power of `r` in `φ(r)` near the origin.
    pub origin_exponent: f64,
}

/// All real branches of `π = (σ' − τ̃)/2 ± sqrt(((σ' − τ̃)/2)² − σ̃ + kσ)`
/// for which the radicand is a perfect square.
pub fn enumerate_branches(p: &NuProblem) -> Vec<Branch> {
    let c5 = 0.5 * (p.c3 - p.c1);
    let c6 = 0.5 * (p.c2 - 2.0 * p.c4);
    let c7 = c6 * c6 + p.xi1;
    let c8 = 2.0 * c5 * c6 - p.xi2;
    let c9 = c5 * c5 + p.xi3;
    let c10 = p.c4 * (p.c3 * c8 + p.c4 * c9) + p.c3 * p.c3 * c7;
    if c9 < 0.0 || c10 < 0.0 {
        return Vec::new();
    }
    let s9 = c9.sqrt();
    let root = 2.0 * (c9 * c10).sqrt();
    let base = -(p.c3 * c8 + 2.0 * p.c4 * c9);
    let mut out = Vec::with_capacity(4);
    for k in [(base + root) / (p.c3 * p.c3), (base - root) / (p.c3 * p.c3)] {
        // radicand = (c7 − k c4) r² + (c8 + k c3) r + c9
        let quad = c7 - k * p.c4;
        if quad < 0.0 {
            continue;
        }
        let t = if c8 + k * p.c3 < 0.0 { -1.0 } else { 1.0 };
        let sq = quad.sqrt();
        for s in [1.0, -1.0] {
            let pi_poly = Linear {
                constant: c5 + s * s9,
                slope: c6 + s * t * sq,
            };
            let tau_poly = Linear {
                constant: p.c1 + 2.0 * pi_poly.constant,
                slope: -p.c2 + 2.0 * pi_poly.slope,
            };
            out.push(Branch {
                k,
                pi_poly,
                tau_poly,
                origin_exponent: pi_poly.constant / p.c3,
            });
        }
    }
    out
}

/// The unique branch with `τ' < 0` and a positive origin exponent.
pub fn select_branch(p: &NuProblem) -> Result<Branch> {
    let survivors: Vec<Branch> = enumerate_branches(p)
        .into_iter()
        .filter(|b| b.tau_poly.slope < 0.0 && b.origin_exponent > 0.0)
        .collect();
    match survivors.len() {
        0 => Err(Error::Branch(
            "no branch with tau' < 0 and regular origin".into(),
        )),
        1 => Ok(survivors[0]),
        count => Err(Error::AmbiguousBranch { count }),
    }
}

/// Evaluable `ρ`, `φ` and `y_n` of a solved problem (un-normalized).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NuWavefunction {
    pub problem: NuProblem,
    pub derived: NuDerived,
}

impl NuWavefunction {
    pub fn is_laguerre(&self) -> bool {
        self.problem.c4 == 0.0
    }

    /// Weight function `ρ(r)` solving `(σρ)' = τρ`.
    pub fn rho(&self, r: f64) -> f64 {
        let d = &self.derived;
        match d.c12 {
            JacobiExponent::Value(c12) => {
                r.powf(d.c11) * (self.problem.c3 - self.problem.c4 * r).powf(c12)
            }
            JacobiExponent::LaguerreLimit => r.powf(d.c11) * (-d.c15 * r).exp(),
        }
    }

    pub fn phi(&self, r: f64) -> f64 {
        let d = &self.derived;
        match d.c14 {
            JacobiExponent::Value(c14) => {
                r.powf(d.c13) * (self.problem.c3 - self.problem.c4 * r).powf(c14)
            }
            JacobiExponent::LaguerreLimit => r.powf(d.c13) * (-d.c16 * r).exp(),
        }
    }

    /// Polynomial part `y_n(r)`: Jacobi, or Laguerre when `c4 = 0`.
    pub fn y(&self, n: u32, r: f64) -> f64 {
        let d = &self.derived;
        match d.c12 {
            JacobiExponent::Value(c12) => {
                jacobi(n, d.c11, c12, self.problem.c3 - 2.0 * self.problem.c4 * r)
            }
            JacobiExponent::LaguerreLimit => laguerre(n, d.c11, d.c15 * r),
        }
    }

    pub fn psi(&self, n: u32, r: f64) -> f64 {
        self.phi(r) * self.y(n, r)
    }
}

pub fn nu_wavefunction_parts(p: &NuProblem) -> Result<NuWavefunction> {
    Ok(NuWavefunction {
        problem: *p,
        derived: derive_constants(p)?,
    })
}
