//! Constants of the generalized Poincaré inequality
//! `η₁‖U‖² ≤ ‖∇U‖² + η₂(∫U)²`.
//!
//! With `Ū` the mean, `‖U‖² = ‖U − Ū‖² + (∫U)²/|Ω|` and `λ₁‖U − Ū‖² ≤ ‖∇U‖²`,
//! so `η₁ = λ₁` (first nonzero Neumann eigenvalue) and `η₂ = λ₁/|Ω|` work.

use serde::{Deserialize, Serialize};

use super::{apply_diffusion_into, BoundaryMatching, Domain, ScalarField};
use crate::error::DomainError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PoincareMode {
    /// First nonzero eigenvalue of the grid's own Neumann Laplacian.
    #[default]
    Discrete,
    /// Continuum value `(π / max L)²`.
    Analytic,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenSettings {
    pub max_iterations: usize,
    /// Relative eigen-residual `‖Ax − λx‖/λ` at which iteration stops.
    pub tolerance: f64,
    pub cg_max_iterations: usize,
    pub cg_tolerance: f64,
}

impl Default for EigenSettings {
    fn default() -> Self {
        Self {
            max_iterations: 200,
            tolerance: 1e-10,
            cg_max_iterations: 20_000,
            cg_tolerance: 1e-13,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PoincareConstants {
    pub eta1: f64,
    pub eta2: f64,
    /// Final eigen-residual (0 for the analytic mode).
    pub residual: f64,
    pub iterations: usize,
}

/// Closed-form first nonzero eigenvalue of the cell-centered Neumann
/// Laplacian on a uniform grid, `min_k (4/h_k²) sin²(π h_k / (2 L_k))`.
pub fn discrete_neumann_eigenvalue(domain: &Domain) -> f64 {
    domain
        .h()
        .iter()
        .zip(domain.extents())
        .map(|(h, l)| {
            let s = (std::f64::consts::PI * h / (2.0 * l)).sin();
            4.0 / (h * h) * s * s
        })
        .fold(f64::INFINITY, f64::min)
}

pub fn poincare_constants(
    domain: &Domain,
    mode: PoincareMode,
    settings: &EigenSettings,
) -> Result<PoincareConstants, DomainError> {
    let omega = domain.omega_measure();
    match mode {
        PoincareMode::Analytic => {
            let l = domain.extents().iter().copied().fold(0.0, f64::max);
            let eta1 = (std::f64::consts::PI / l).powi(2);
            Ok(PoincareConstants {
                eta1,
                eta2: eta1 / omega,
                residual: 0.0,
                iterations: 0,
            })
        }
        PoincareMode::Discrete => {
            let (eta1, residual, iterations) = inverse_iteration(domain, settings)?;
            Ok(PoincareConstants {
                eta1,
                eta2: eta1 / omega,
                residual,
                iterations,
            })
        }
    }
}

struct NegLaplacian<'a> {
    domain: &'a Domain,
    matching: BoundaryMatching,
    input: Vec<ScalarField>,
    output: Vec<ScalarField>,
}

impl<'a> NegLaplacian<'a> {
    fn new(domain: &'a Domain) -> Self {
        Self {
            domain,
            matching: BoundaryMatching::uncoupled(domain, 1),
            input: vec![domain.zeros()],
            output: vec![domain.zeros()],
        }
    }

    fn apply(&mut self, x: &[f64], y: &mut [f64]) {
        self.input[0].copy_from_slice(x);
        apply_diffusion_into(&self.input, &mut self.output, self.domain, &self.matching, 1.0, 0.0)
            .expect("shapes fixed at construction");
        for (o, v) in y.iter_mut().zip(self.output[0].iter()) {
            *o = -v;
        }
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn remove_mean(x: &mut [f64]) {
    let mean = x.iter().sum::<f64>() / x.len() as f64;
    x.iter_mut().for_each(|v| *v -= mean);
}

fn normalize(x: &mut [f64]) {
    let norm = dot(x, x).sqrt();
    x.iter_mut().for_each(|v| *v /= norm);
}

/// Conjugate gradients for `A y = b` with `b` mean-free; `A` is singular only
/// on constants, so iterates stay in the mean-free subspace.
fn cg(
    op: &mut NegLaplacian<'_>,
    b: &[f64],
    y: &mut [f64],
    max_iter: usize,
    tol: f64,
) -> Result<(), DomainError> {
    let n = b.len();
    y.iter_mut().for_each(|v| *v = 0.0);
    let mut r = b.to_vec();
    let mut p = r.clone();
    let mut ap = vec![0.0; n];
    let b_norm = dot(b, b).sqrt();
    let mut rr = dot(&r, &r);
    for _ in 0..max_iter {
        if rr.sqrt() <= tol * b_norm {
            return Ok(());
        }
        op.apply(&p, &mut ap);
        let alpha = rr / dot(&p, &ap);
        for k in 0..n {
            y[k] += alpha * p[k];
            r[k] -= alpha * ap[k];
        }
        remove_mean(&mut r);
        let rr_new = dot(&r, &r);
        let beta = rr_new / rr;
        for k in 0..n {
            p[k] = r[k] + beta * p[k];
        }
        rr = rr_new;
    }
    if rr.sqrt() <= tol * b_norm * 1e3 {
        // stagnated near round-off; good enough for an inner solve
        return Ok(());
    }
    Err(DomainError::EigenNoConvergence {
        iterations: max_iter,
        residual: rr.sqrt() / b_norm,
    })
}

fn inverse_iteration(
    domain: &Domain,
    settings: &EigenSettings,
) -> Result<(f64, f64, usize), DomainError> {
    let mut op = NegLaplacian::new(domain);
    let n = domain.n_cells();
    let ext = domain.extents().to_vec();
    // deterministic start with components along every low mode
    let mut x: Vec<f64> = (0..n)
        .map(|c| {
            let p = domain.cell_center(c);
            let mut v = 0.0;
            for (k, l) in ext.iter().enumerate() {
                let s = p[k] / l;
                v += (1.0 + 0.1 * k as f64) * (s - 0.5) + 0.05 * (s * s - 1.0 / 3.0);
            }
            v
        })
        .collect();
    remove_mean(&mut x);
    normalize(&mut x);

    let mut y = vec![0.0; n];
    let mut ax = vec![0.0; n];
    let mut residual = f64::INFINITY;
    for iter in 1..=settings.max_iterations {
        cg(&mut op, &x, &mut y, settings.cg_max_iterations, settings.cg_tolerance)?;
        remove_mean(&mut y);
        normalize(&mut y);
        std::mem::swap(&mut x, &mut y);
        op.apply(&x, &mut ax);
        let lambda = dot(&x, &ax);
        residual = ax
            .iter()
            .zip(&x)
            .map(|(a, v)| (a - lambda * v).powi(2))
            .sum::<f64>()
            .sqrt()
            / lambda;
        if residual <= settings.tolerance {
            return Ok((lambda, residual, iter));
        }
    }
    Err(DomainError::EigenNoConvergence {
        iterations: settings.max_iterations,
        residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::DomainSpec;
    use std::f64::consts::PI;

    #[test]
    fn interval_matches_closed_form() {
        for (l, n) in [(PI, 32), (1.0, 64), (2.5, 40)] {
            let d = Domain::build(&DomainSpec::interval(l, n)).unwrap();
            let pc = poincare_constants(&d, PoincareMode::Discrete, &EigenSettings::default()).unwrap();
            let exact = discrete_neumann_eigenvalue(&d);
            assert!((pc.eta1 - exact).abs() < 1e-9 * exact, "{} vs {}", pc.eta1, exact);
            assert!((pc.eta2 - exact / l).abs() < 1e-9 * exact);
        }
    }

    #[test]
    fn rectangle_picks_long_axis() {
        let d = Domain::build(&DomainSpec::rectangle(2.0, 1.0, 32, 16)).unwrap();
        let pc = poincare_constants(&d, PoincareMode::Discrete, &EigenSettings::default()).unwrap();
        let exact = discrete_neumann_eigenvalue(&d);
        assert!((pc.eta1 - exact).abs() < 1e-9 * exact);
        assert!((pc.eta1 - (PI / 2.0).powi(2)).abs() < 0.01 * (PI / 2.0).powi(2));
    }

    #[test]
    fn square_double_eigenvalue() {
        let d = Domain::build(&DomainSpec::rectangle(1.0, 1.0, 16, 16)).unwrap();
        let pc = poincare_constants(&d, PoincareMode::Discrete, &EigenSettings::default()).unwrap();
        let exact = discrete_neumann_eigenvalue(&d);
        assert!((pc.eta1 - exact).abs() < 1e-9 * exact);
    }

    #[test]
    fn analytic_mode() {
        let d = Domain::build(&DomainSpec::interval(1.0, 8)).unwrap();
        let pc = poincare_constants(&d, PoincareMode::Analytic, &EigenSettings::default()).unwrap();
        assert!((pc.eta1 - PI * PI).abs() < 1e-12);
    }

    #[test]
    fn iteration_cap_reports_residual() {
        let d = Domain::build(&DomainSpec::interval(1.0, 64)).unwrap();
        let settings = EigenSettings {
            max_iterations: 1,
            tolerance: 1e-15,
            ..EigenSettings::default()
        };
        match poincare_constants(&d, PoincareMode::Discrete, &settings) {
            Err(DomainError::EigenNoConvergence { iterations: 1, residual }) => {
                assert!(residual > 0.0)
            }
            other => panic!("expected non-convergence, got {other:?}"),
        }
    }

    #[test]
    fn inequality_holds_on_random_fields() {
        let d = Domain::build(&DomainSpec::rectangle(1.0, 0.7, 12, 9)).unwrap();
        let pc = poincare_constants(&d, PoincareMode::Discrete, &EigenSettings::default()).unwrap();
        let mut op = NegLaplacian::new(&d);
        let mut seed = 12345u64;
        for _ in 0..20 {
            let u: Vec<f64> = (0..d.n_cells())
                .map(|_| {
                    seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                    (seed >> 11) as f64 / (1u64 << 53) as f64 - 0.3
                })
                .collect();
            let mut au = vec![0.0; u.len()];
            op.apply(&u, &mut au);
            let vol = d.cell_volume();
            let grad = dot(&u, &au) * vol;
            let norm = dot(&u, &u) * vol;
            let mean = u.iter().sum::<f64>() * vol;
            assert!(pc.eta1 * norm <= grad + pc.eta2 * mean * mean + 1e-9 * norm);
        }
    }
}
