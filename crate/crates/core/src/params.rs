//! Biological and coupling parameters of the network model.

use serde::{Deserialize, Serialize};

use crate::error::ParamError;

/// Model constants for the partly diffusive Hindmarsh-Rose network.
///
/// Per neuron `i`:
///
/// ```text
/// u_t = d Δu + a u² − b u³ + v − w + J
/// v_t = α − v − β u²
/// w_t = q (u − c) − r w
/// ```
///
/// with the Robin coupling `∂u_i/∂ν + p u_i = p u_j` on the boundary piece
/// shared by neurons `i` and `j`.
///
/// Deserialization fills missing keys from [`HRParameters::default_profile`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct HRParameters {
    pub a: f64,
    pub b: f64,
    pub alpha: f64,
    pub beta: f64,
    pub q: f64,
    pub r: f64,
    /// Reference membrane potential; any real value.
    pub c: f64,
    /// Input current.
    #[serde(rename = "J")]
    pub j: f64,
    /// Diffusion coefficient of the membrane potential.
    pub d: f64,
    /// Boundary coupling strength. Zero means an uncoupled network.
    pub p: f64,
    /// Number of neurons.
    #[serde(rename = "N")]
    pub n: usize,
}

impl HRParameters {
    /// Classical bursting profile from the Hindmarsh-Rose literature
    /// (a = 3, b = 1, α = 1, β = 5, r = 0.006, q = 4r, c = −1.6, J = 3.25),
    /// with a diffusion coefficient and coupling strength chosen for
    /// desk-scale runs. This is a convention, not a fitted value.
    pub fn default_profile() -> Self {
        Self {
            a: 3.0,
            b: 1.0,
            alpha: 1.0,
            beta: 5.0,
            q: 0.024,
            r: 0.006,
            c: -1.6,
            j: 3.25,
            d: 20.0,
            p: 8.0,
            n: 2,
        }
    }

    pub fn validate(&self) -> Result<(), ParamError> {
        let positive = [
            ("a", self.a),
            ("b", self.b),
            ("alpha", self.alpha),
            ("beta", self.beta),
            ("q", self.q),
            ("r", self.r),
            ("d", self.d),
        ];
        for (name, value) in positive {
            if !(value.is_finite() && value > 0.0) {
                return Err(ParamError::NotPositive { name, value });
            }
        }
        if !(self.p.is_finite() && self.p >= 0.0) {
            return Err(ParamError::Negative {
                name: "p",
                value: self.p,
            });
        }
        for (name, value) in [("c", self.c), ("J", self.j)] {
            if !value.is_finite() {
                return Err(ParamError::NotFinite { name, value });
            }
        }
        if self.n < 2 {
            return Err(ParamError::TooFewNeurons(self.n));
        }
        Ok(())
    }

    /// Names of the real-valued parameters, in declaration order.
    pub const SCALAR_NAMES: [&'static str; 10] =
        ["a", "b", "alpha", "beta", "q", "r", "c", "J", "d", "p"];

    pub fn scalar(&self, name: &str) -> Option<f64> {
        Some(match name {
            "a" => self.a,
            "b" => self.b,
            "alpha" => self.alpha,
            "beta" => self.beta,
            "q" => self.q,
            "r" => self.r,
            "c" => self.c,
            "J" => self.j,
            "d" => self.d,
            "p" => self.p,
            _ => return None,
        })
    }

    /// Returns a copy with one real-valued parameter replaced.
    pub fn with_scalar(&self, name: &str, value: f64) -> Result<Self, ParamError> {
        let mut out = *self;
        let slot = match name {
            "a" => &mut out.a,
            "b" => &mut out.b,
            "alpha" => &mut out.alpha,
            "beta" => &mut out.beta,
            "q" => &mut out.q,
            "r" => &mut out.r,
            "c" => &mut out.c,
            "J" => &mut out.j,
            "d" => &mut out.d,
            "p" => &mut out.p,
            _ => return Err(ParamError::UnknownScalar(name.to_string())),
        };
        *slot = value;
        Ok(out)
    }
}

impl Default for HRParameters {
    fn default() -> Self {
        Self::default_profile()
    }
}
