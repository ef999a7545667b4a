use crate::domain::{Domain, ScalarField};
use crate::error::{DomainError, DynamicsError};

/// Membrane potential, spiking and bursting fields for every neuron.
#[derive(Debug, Clone, PartialEq)]
pub struct NeuronFields {
    pub u: Vec<ScalarField>,
    pub v: Vec<ScalarField>,
    pub w: Vec<ScalarField>,
}

impl NeuronFields {
    pub fn zeros(n: usize, domain: &Domain) -> Self {
        Self {
            u: vec![domain.zeros(); n],
            v: vec![domain.zeros(); n],
            w: vec![domain.zeros(); n],
        }
    }

    pub fn n(&self) -> usize {
        self.u.len()
    }

    pub fn conforms(&self, n: usize, domain: &Domain) -> Result<(), DomainError> {
        for group in [&self.u, &self.v, &self.w] {
            if group.len() != n {
                return Err(DomainError::NeuronCount {
                    expected: n,
                    got: group.len(),
                });
            }
            for f in group {
                domain.check_field(f)?;
            }
        }
        Ok(())
    }

    pub fn components(&self) -> [&Vec<ScalarField>; 3] {
        [&self.u, &self.v, &self.w]
    }

    pub fn values(&self) -> impl Iterator<Item = f64> + '_ {
        self.components()
            .into_iter()
            .flat_map(|g| g.iter().flat_map(|f| f.iter().copied()))
    }

    /// `self = base + scale * other`, component by component.
    pub fn set_axpy(&mut self, base: &NeuronFields, scale: f64, other: &NeuronFields) {
        for (dst, (b, o)) in [
            (&mut self.u, (&base.u, &other.u)),
            (&mut self.v, (&base.v, &other.v)),
            (&mut self.w, (&base.w, &other.w)),
        ] {
            for (df, (bf, of)) in dst.iter_mut().zip(b.iter().zip(o.iter())) {
                for (x, (y, z)) in df.iter_mut().zip(bf.iter().zip(of.iter())) {
                    *x = y + scale * z;
                }
            }
        }
    }

    pub fn max_abs_u(&self) -> f64 {
        self.u
            .iter()
            .flat_map(|f| f.iter())
            .fold(0.0f64, |m, v| if v.is_nan() { f64::NAN } else { m.max(v.abs()) })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NetworkState {
    pub t: f64,
    pub fields: NeuronFields,
}

impl NetworkState {
    pub fn new(t: f64, fields: NeuronFields) -> Self {
        Self { t, fields }
    }

    pub fn n(&self) -> usize {
        self.fields.n()
    }

    /// Fails with the current time and `max |u|` if any value is NaN or infinite.
    pub fn check_finite(&self) -> Result<(), DynamicsError> {
        if self.fields.values().all(f64::is_finite) {
            Ok(())
        } else {
            Err(DynamicsError::NonFinite {
                t: self.t,
                max_abs_u: self.fields.max_abs_u(),
            })
        }
    }
}
