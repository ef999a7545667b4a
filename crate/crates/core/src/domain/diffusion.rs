//! Finite-volume diffusion with Robin coupling fluxes.
//!
//! Each cell receives `d (u_nb − u_c)/h · area` through interior faces and
//! `d p (u_j − u_i) · area` through a boundary face where neuron `i` is matched
//! with `j`; the sum is divided by the cell volume. Matched boundary fluxes are
//! exact negatives of each other, so `Σ_i ∫ u_i` is preserved.

use super::{BoundaryMatching, Domain, ScalarField, Side};
use crate::error::DomainError;
use crate::linalg::{BandedCholesky, BandedSymmetric};

fn check_shapes(
    u_all: &[ScalarField],
    domain: &Domain,
    matching: &BoundaryMatching,
) -> Result<(), DomainError> {
    if u_all.len() != matching.n() {
        return Err(DomainError::NeuronCount {
            expected: matching.n(),
            got: u_all.len(),
        });
    }
    for u in u_all {
        domain.check_field(u)?;
    }
    Ok(())
}

/// Discrete `dΔu_i` with the coupling boundary condition, for every neuron.
pub fn apply_diffusion(
    u_all: &[ScalarField],
    domain: &Domain,
    matching: &BoundaryMatching,
    d: f64,
    p: f64,
) -> Result<Vec<ScalarField>, DomainError> {
    let mut out: Vec<ScalarField> = u_all.iter().map(|_| domain.zeros()).collect();
    apply_diffusion_into(u_all, &mut out, domain, matching, d, p)?;
    Ok(out)
}

/// Same as [`apply_diffusion`], writing into preallocated fields.
pub fn apply_diffusion_into(
    u_all: &[ScalarField],
    out: &mut [ScalarField],
    domain: &Domain,
    matching: &BoundaryMatching,
    d: f64,
    p: f64,
) -> Result<(), DomainError> {
    check_shapes(u_all, domain, matching)?;
    if out.len() != u_all.len() {
        return Err(DomainError::NeuronCount {
            expected: u_all.len(),
            got: out.len(),
        });
    }
    for o in out.iter() {
        domain.check_field(o)?;
    }

    let h = domain.h();
    let cells = domain.cells_per_axis();
    for (u, o) in u_all.iter().zip(out.iter_mut()) {
        if domain.dim() == 1 {
            let n = cells[0];
            let k = d / (h[0] * h[0]);
            o[0] = k * (u[1] - u[0]);
            for c in 1..n - 1 {
                o[c] = k * ((u[c - 1] - u[c]) + (u[c + 1] - u[c]));
            }
            o[n - 1] = k * (u[n - 2] - u[n - 1]);
        } else {
            let (nx, ny) = (cells[0], cells[1]);
            let kx = d / (h[0] * h[0]);
            let ky = d / (h[1] * h[1]);
            for iy in 0..ny {
                for ix in 0..nx {
                    let c = ix + nx * iy;
                    let uc = u[c];
                    let mut fx = 0.0;
                    if ix > 0 {
                        fx += u[c - 1] - uc;
                    }
                    if ix + 1 < nx {
                        fx += u[c + 1] - uc;
                    }
                    let mut fy = 0.0;
                    if iy > 0 {
                        fy += u[c - nx] - uc;
                    }
                    if iy + 1 < ny {
                        fy += u[c + nx] - uc;
                    }
                    o[c] = kx * fx + ky * fy;
                }
            }
        }
    }

    if p != 0.0 {
        let vol = domain.cell_volume();
        for (f, face) in domain.boundary_faces().iter().enumerate() {
            let k = d * p * face.area / vol;
            for i in 0..u_all.len() {
                let j = matching.partner(f, i);
                if j != i {
                    let c = face.cell;
                    out[i][c] += k * (u_all[j][c] - u_all[i][c]);
                }
            }
        }
    }
    Ok(())
}

/// The implicit diffusion matrix `I − dt·L` over all neurons jointly, in the
/// interleaved ordering `row = cell · N + neuron`, together with its
/// Cholesky factor.
#[derive(Debug, Clone)]
pub struct BandedOperator {
    n_neurons: usize,
    matrix: BandedSymmetric,
    factor: BandedCholesky,
}

impl BandedOperator {
    pub fn implicit_euler(
        domain: &Domain,
        matching: &BoundaryMatching,
        d: f64,
        p: f64,
        dt: f64,
    ) -> Result<Self, crate::error::DynamicsError> {
        let n = matching.n();
        let stride = if domain.dim() == 1 { 1 } else { domain.cells_per_axis()[0] };
        let bw = stride * n;
        let size = domain.n_cells() * n;
        let mut a = BandedSymmetric::zeros(size, bw);
        let h = domain.h();

        for c in 0..domain.n_cells() {
            for i in 0..n {
                let row = c * n + i;
                a.add(row, row, 1.0);
                for (axis, hk) in h.iter().enumerate() {
                    let k = dt * d / (hk * hk);
                    for side in [Side::Low, Side::High] {
                        if domain.neighbor(c, axis, side).is_some() {
                            a.add(row, row, k);
                        }
                    }
                    // each interior face once, from its low cell
                    if let Some(nb) = domain.neighbor(c, axis, Side::High) {
                        a.add(nb * n + i, row, -k);
                    }
                }
            }
        }
        if p != 0.0 {
            let vol = domain.cell_volume();
            for (f, face) in domain.boundary_faces().iter().enumerate() {
                let k = dt * d * p * face.area / vol;
                for i in 0..n {
                    let j = matching.partner(f, i);
                    if j != i {
                        let c = face.cell;
                        a.add(c * n + i, c * n + i, k);
                        if i < j {
                            a.add(c * n + j, c * n + i, -k);
                        }
                    }
                }
            }
        }
        let factor = a.cholesky()?;
        Ok(Self {
            n_neurons: n,
            matrix: a,
            factor,
        })
    }

    pub fn matrix(&self) -> &BandedSymmetric {
        &self.matrix
    }

    /// Packs neuron fields into the interleaved vector.
    pub fn pack(&self, fields: &[ScalarField], out: &mut [f64]) {
        let n = self.n_neurons;
        for (i, f) in fields.iter().enumerate() {
            for (c, v) in f.iter().enumerate() {
                out[c * n + i] = *v;
            }
        }
    }

    pub fn unpack(&self, packed: &[f64], fields: &mut [ScalarField]) {
        let n = self.n_neurons;
        for (i, f) in fields.iter_mut().enumerate() {
            for (c, v) in f.iter_mut().enumerate() {
                *v = packed[c * n + i];
            }
        }
    }

    /// Solves in place and returns the relative residual `‖Ax − b‖/‖b‖`.
    pub fn solve(&self, rhs: &mut [f64], scratch: &mut [f64], ax: &mut [f64]) -> f64 {
        scratch.copy_from_slice(rhs);
        self.factor.solve_in_place(rhs);
        self.matrix.mul_vec(rhs, ax);
        let mut num = 0.0;
        let mut den = 0.0;
        for (r, b) in ax.iter().zip(scratch.iter()) {
            num += (r - b) * (r - b);
            den += b * b;
        }
        if den == 0.0 {
            num.sqrt()
        } else {
            (num / den).sqrt()
        }
    }
}
