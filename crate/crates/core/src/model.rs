use thiserror::Error;

use crate::constants::DerivedConstants;
use crate::domain::{
    poincare_constants, BoundaryMatching, Domain, EigenSettings, PoincareConstants, PoincareMode,
};
use crate::error::{DomainError, ParamError};
use crate::params::HRParameters;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error(transparent)]
    Param(#[from] ParamError),
    #[error(transparent)]
    Domain(#[from] DomainError),
    #[error("matching is defined for {matching} neurons but N = {params}")]
    NeuronCount { params: usize, matching: usize },
    #[error("matching has {matching} faces but the domain has {domain}")]
    FaceCount { domain: usize, matching: usize },
}

/// Parameters, geometry and coupling of one network, with its derived
/// constants evaluated once.
#[derive(Debug, Clone)]
pub struct Model {
    pub params: HRParameters,
    pub domain: Domain,
    pub matching: BoundaryMatching,
    pub poincare: PoincareConstants,
    pub constants: DerivedConstants,
}

impl Model {
    pub fn new(
        params: HRParameters,
        domain: Domain,
        matching: BoundaryMatching,
        mode: PoincareMode,
    ) -> Result<Self, ModelError> {
        let poincare = poincare_constants(&domain, mode, &EigenSettings::default())?;
        Self::with_poincare(params, domain, matching, poincare)
    }

    pub fn with_poincare(
        params: HRParameters,
        domain: Domain,
        matching: BoundaryMatching,
        poincare: PoincareConstants,
    ) -> Result<Self, ModelError> {
        params.validate()?;
        if matching.n() != params.n {
            return Err(ModelError::NeuronCount {
                params: params.n,
                matching: matching.n(),
            });
        }
        if matching.n_faces() != domain.boundary_faces().len() {
            return Err(ModelError::FaceCount {
                domain: domain.boundary_faces().len(),
                matching: matching.n_faces(),
            });
        }
        let constants = DerivedConstants::compute(
            &params,
            poincare.eta1,
            poincare.eta2,
            domain.omega_measure(),
        )?;
        Ok(Self {
            params,
            domain,
            matching,
            poincare,
            constants,
        })
    }

    /// Same geometry with different parameters (same `N`).
    pub fn with_params(&self, params: HRParameters) -> Result<Self, ModelError> {
        Self::with_poincare(params, self.domain.clone(), self.matching.clone(), self.poincare)
    }

    pub fn n(&self) -> usize {
        self.params.n
    }
}
