//! Closed-form constants from the energy and synchronization estimates.
//!
//! Every function here is a pure function of its value inputs and evaluates
//! in a fixed order, so recomputing from the same parameters is bit-identical.

use serde::{Deserialize, Serialize};

use crate::error::ParamError;
use crate::params::HRParameters;

/// Weight on `Σ‖u_i‖²` in the absorbing energy functional: `(β² + 4)/b`.
pub fn compute_c1(params: &HRParameters) -> f64 {
    (params.beta * params.beta + 4.0) / params.b
}

/// Constant source term of the energy inequality.
pub fn compute_c2(params: &HRParameters) -> f64 {
    let c1 = compute_c1(params);
    let HRParameters {
        a, j, alpha, q, r, c, ..
    } = *params;
    let c1a = c1 * a;
    let mixed = c1 * c1 * (2.0 + 1.0 / r) + c1;
    2.0 * c1a.powi(4)
        + 2.0 * c1 * j * j
        + 2.0 * mixed * mixed
        + 4.0 * alpha * alpha
        + 2.0 * q * q * c * c / r
        + 2.0 * q.powi(4) / (r * r)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Absorbing {
    pub r_star: f64,
    pub big_m: f64,
    pub big_q: f64,
}

/// Decay rate `r*`, Gronwall constant `M` and absorbing radius `Q`.
pub fn compute_absorbing(params: &HRParameters, omega_measure: f64) -> Absorbing {
    let c1 = compute_c1(params);
    let c2 = compute_c2(params);
    let r_star = 0.5 * params.r.min(1.0);
    let big_m = (params.n as f64 / r_star) * (c2 + c1 * c1 / 32.0);
    let big_q = 2.0 * big_m * omega_measure / c1.min(1.0);
    Absorbing {
        r_star,
        big_m,
        big_q,
    }
}

fn log_plus(x: f64) -> f64 {
    if x > 1.0 {
        x.ln()
    } else {
        0.0
    }
}

/// Time after which trajectories starting with `Σ‖g_i‖² ≤ rho` stay inside
/// the absorbing ball.
pub fn entry_time(rho: f64, consts: &DerivedConstants) -> f64 {
    let floor = consts.big_m * consts.omega_measure / consts.c1.max(1.0);
    if rho <= floor {
        return 0.0;
    }
    let arg = rho * consts.c1.max(1.0) / (consts.big_m * consts.omega_measure);
    log_plus(arg) / consts.r_star
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Threshold {
    pub g: f64,
    /// Threshold constant as printed, with the `N²(N−1)` prefactor.
    pub big_r: f64,
    /// Threshold obtained by matching `4GR|Ω|` to the per-pair differential
    /// inequality bound; carries an `N` prefactor.
    pub big_r_alt: f64,
}

/// Multiplier `G = 8β²/b` and both readings of the threshold constant `R`.
pub fn compute_threshold(
    params: &HRParameters,
    eta2: f64,
    omega_measure: f64,
) -> Result<Threshold, ParamError> {
    if params.beta == 0.0 {
        return Err(ParamError::Singular {
            name: "beta",
            reason: "the synchronization threshold divides by beta^2",
        });
    }
    let HRParameters {
        a, b, beta, q, r, d, ..
    } = *params;
    let n = params.n as f64;
    let c1 = compute_c1(params);
    let c2 = compute_c2(params);
    let r_star = 0.5 * r.min(1.0);
    let min_c1 = c1.min(1.0);
    let g = 8.0 * beta * beta / b;
    let source = c1 * c1 / 16.0 + 2.0 * c2;
    let poincare = eta2 * d * omega_measure;

    let gap = q - 8.0 * beta * beta / b;
    let literal_bracket =
        8.0 * beta * beta / b + 2.0 * a * a / b + b / (16.0 * beta * beta * r) * gap * gap;
    let big_r = n * n * (n - 1.0) / (r_star * min_c1) * source * (poincare + literal_bracket);

    let pair_gap = q - g;
    let pair_bracket = g + 2.0 * a * a / b + pair_gap * pair_gap / (2.0 * r * g);
    let big_r_alt = n / (r_star * min_c1) * source * (poincare + pair_bracket);

    Ok(Threshold {
        g,
        big_r,
        big_r_alt,
    })
}

/// Uniform exponential synchronization rate `min(2η₁d, 1, r)`.
pub fn compute_mu(params: &HRParameters, eta1: f64) -> f64 {
    (2.0 * eta1 * params.d).min(1.0).min(params.r)
}

/// All derived constants for one parameter set and domain.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DerivedConstants {
    pub c1: f64,
    pub c2: f64,
    pub r_star: f64,
    pub big_m: f64,
    pub big_q: f64,
    pub g: f64,
    pub eta1: f64,
    pub eta2: f64,
    pub big_r: f64,
    pub big_r_alt: f64,
    pub mu: f64,
    pub omega_measure: f64,
}

impl DerivedConstants {
    /// Column names used in CSV and key-value output, in field order.
    pub const NAMES: [&'static str; 12] = [
        "c1",
        "c2",
        "r_star",
        "M",
        "Q",
        "G",
        "eta1",
        "eta2",
        "R_literal",
        "R_perpair",
        "mu",
        "omega_measure",
    ];

    pub fn compute(
        params: &HRParameters,
        eta1: f64,
        eta2: f64,
        omega_measure: f64,
    ) -> Result<Self, ParamError> {
        params.validate()?;
        for (name, value) in [("eta1", eta1), ("eta2", eta2), ("omega_measure", omega_measure)] {
            if !(value.is_finite() && value > 0.0) {
                return Err(ParamError::NotPositive { name, value });
            }
        }
        let absorbing = compute_absorbing(params, omega_measure);
        let threshold = compute_threshold(params, eta2, omega_measure)?;
        Ok(Self {
            c1: compute_c1(params),
            c2: compute_c2(params),
            r_star: absorbing.r_star,
            big_m: absorbing.big_m,
            big_q: absorbing.big_q,
            g: threshold.g,
            eta1,
            eta2,
            big_r: threshold.big_r,
            big_r_alt: threshold.big_r_alt,
            mu: compute_mu(params, eta1),
            omega_measure,
        })
    }

    pub fn values(&self) -> [f64; 12] {
        [
            self.c1,
            self.c2,
            self.r_star,
            self.big_m,
            self.big_q,
            self.g,
            self.eta1,
            self.eta2,
            self.big_r,
            self.big_r_alt,
            self.mu,
            self.omega_measure,
        ]
    }

    /// Right-hand side of the Gronwall bound on `Σ‖g_i(t)‖²`.
    pub fn gronwall_envelope(&self, t: f64, initial_energy: f64) -> f64 {
        let ratio = self.c1.max(1.0) / self.c1.min(1.0);
        ratio * (-self.r_star * t).exp() * initial_energy
            + self.big_m * self.omega_measure / self.c1.min(1.0)
    }

    /// Right-hand side of the differential energy inequality.
    pub fn energy_source(&self, n: usize) -> f64 {
        (self.c2 + self.c1 * self.c1 / 32.0) * n as f64 * self.omega_measure
    }
}
