//! Uniform cell-centered grids on intervals and axis-aligned rectangles.

mod diffusion;
mod matching;
mod poincare;
mod quadrature;

pub use diffusion::{apply_diffusion, apply_diffusion_into, BandedOperator};
pub use matching::{parse_matching, parse_pairs, BoundaryMatching, Segment};
pub use poincare::{
    discrete_neumann_eigenvalue, poincare_constants, EigenSettings, PoincareConstants,
    PoincareMode,
};
pub use quadrature::{inner, integrate_boundary_pair, integrate_domain, l2_norm_sq};

use std::ops::{Deref, DerefMut};

use serde::{Deserialize, Serialize};

use crate::error::DomainError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DomainSpec {
    pub dim: usize,
    pub extents: Vec<f64>,
    pub cells: Vec<usize>,
}

impl DomainSpec {
    pub fn interval(length: f64, cells: usize) -> Self {
        Self {
            dim: 1,
            extents: vec![length],
            cells: vec![cells],
        }
    }

    pub fn rectangle(lx: f64, ly: f64, nx: usize, ny: usize) -> Self {
        Self {
            dim: 2,
            extents: vec![lx, ly],
            cells: vec![nx, ny],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Low,
    High,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryFace {
    /// Cell adjacent to the face.
    pub cell: usize,
    /// Axis of the outward normal.
    pub axis: usize,
    pub side: Side,
    pub area: f64,
    /// Coordinate of the face center along its side (0 in 1D).
    pub offset: f64,
}

/// Cell-centered finite-volume grid. Cells are numbered x-fastest.
#[derive(Debug, Clone, PartialEq)]
pub struct Domain {
    dim: usize,
    extents: [f64; 2],
    cells: [usize; 2],
    h: [f64; 2],
    cell_volume: f64,
    faces: Vec<BoundaryFace>,
}

impl Domain {
    pub fn build(spec: &DomainSpec) -> Result<Self, DomainError> {
        let dim = spec.dim;
        if !(1..=2).contains(&dim) {
            return Err(DomainError::UnsupportedDimension(dim));
        }
        if spec.extents.len() != dim {
            return Err(DomainError::AxisCount {
                field: "extents",
                expected: dim,
                got: spec.extents.len(),
            });
        }
        if spec.cells.len() != dim {
            return Err(DomainError::AxisCount {
                field: "cells",
                expected: dim,
                got: spec.cells.len(),
            });
        }
        let mut extents = [1.0; 2];
        let mut cells = [1; 2];
        let mut h = [1.0; 2];
        for axis in 0..dim {
            let len = spec.extents[axis];
            if !(len.is_finite() && len > 0.0) {
                return Err(DomainError::DegenerateExtent { axis, value: len });
            }
            if spec.cells[axis] < 4 {
                return Err(DomainError::TooFewCells {
                    axis,
                    cells: spec.cells[axis],
                });
            }
            extents[axis] = len;
            cells[axis] = spec.cells[axis];
            h[axis] = len / cells[axis] as f64;
        }
        let cell_volume = h[..dim].iter().product();

        let [nx, ny] = cells;
        let mut faces = Vec::new();
        if dim == 1 {
            for (cell, side) in [(0, Side::Low), (nx - 1, Side::High)] {
                faces.push(BoundaryFace {
                    cell,
                    axis: 0,
                    side,
                    area: 1.0,
                    offset: 0.0,
                });
            }
        } else {
            for side in [Side::Low, Side::High] {
                let ix = if side == Side::Low { 0 } else { nx - 1 };
                for iy in 0..ny {
                    faces.push(BoundaryFace {
                        cell: ix + nx * iy,
                        axis: 0,
                        side,
                        area: h[1],
                        offset: (iy as f64 + 0.5) * h[1],
                    });
                }
            }
            for side in [Side::Low, Side::High] {
                let iy = if side == Side::Low { 0 } else { ny - 1 };
                for ix in 0..nx {
                    faces.push(BoundaryFace {
                        cell: ix + nx * iy,
                        axis: 1,
                        side,
                        area: h[0],
                        offset: (ix as f64 + 0.5) * h[0],
                    });
                }
            }
        }

        Ok(Self {
            dim,
            extents,
            cells,
            h,
            cell_volume,
            faces,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn extents(&self) -> &[f64] {
        &self.extents[..self.dim]
    }

    pub fn cells_per_axis(&self) -> &[usize] {
        &self.cells[..self.dim]
    }

    pub fn h(&self) -> &[f64] {
        &self.h[..self.dim]
    }

    pub fn n_cells(&self) -> usize {
        self.cells[0] * self.cells[1]
    }

    pub fn cell_volume(&self) -> f64 {
        self.cell_volume
    }

    pub fn boundary_faces(&self) -> &[BoundaryFace] {
        &self.faces
    }

    /// |Ω| as the sum of cell volumes.
    pub fn omega_measure(&self) -> f64 {
        self.n_cells() as f64 * self.cell_volume
    }

    /// |Γ| as the sum of boundary face areas (the endpoint count in 1D).
    pub fn boundary_measure(&self) -> f64 {
        self.faces.iter().map(|f| f.area).sum()
    }

    pub fn analytic_measure(&self) -> f64 {
        self.extents().iter().product()
    }

    pub fn analytic_boundary_measure(&self) -> f64 {
        match self.dim {
            1 => 2.0,
            _ => 2.0 * (self.extents[0] + self.extents[1]),
        }
    }

    pub fn cell_center(&self, cell: usize) -> [f64; 2] {
        let ix = cell % self.cells[0];
        let iy = cell / self.cells[0];
        [
            (ix as f64 + 0.5) * self.h[0],
            if self.dim == 2 {
                (iy as f64 + 0.5) * self.h[1]
            } else {
                0.0
            },
        ]
    }

    /// Neighbor of `cell` one step along `axis`, if it is interior.
    pub fn neighbor(&self, cell: usize, axis: usize, side: Side) -> Option<usize> {
        if axis >= self.dim {
            return None;
        }
        let ix = cell % self.cells[0];
        let iy = cell / self.cells[0];
        let (i, n, stride) = if axis == 0 {
            (ix, self.cells[0], 1)
        } else {
            (iy, self.cells[1], self.cells[0])
        };
        match side {
            Side::Low if i > 0 => Some(cell - stride),
            Side::High if i + 1 < n => Some(cell + stride),
            _ => None,
        }
    }

    /// Explicit stability limit `1 / (d Σ_k (2/h_k² + 2p/h_k))`, which reduces
    /// to `h²/(2·dim·d)` on an uncoupled uniform grid.
    pub fn diffusion_dt_bound(&self, d: f64, p: f64) -> f64 {
        let rate: f64 = self
            .h()
            .iter()
            .map(|h| 2.0 / (h * h) + 2.0 * p / h)
            .sum::<f64>()
            * d;
        1.0 / rate
    }

    pub fn zeros(&self) -> ScalarField {
        ScalarField::zeros(self.n_cells())
    }

    pub fn field_from_fn(&self, f: impl Fn([f64; 2]) -> f64) -> ScalarField {
        ScalarField::from((0..self.n_cells()).map(|c| f(self.cell_center(c))).collect::<Vec<_>>())
    }

    pub fn check_field(&self, field: &[f64]) -> Result<(), DomainError> {
        if field.len() != self.n_cells() {
            return Err(DomainError::ShapeMismatch {
                expected: self.n_cells(),
                got: field.len(),
            });
        }
        Ok(())
    }
}

/// One real value per cell.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ScalarField(Vec<f64>);

impl ScalarField {
    pub fn zeros(len: usize) -> Self {
        Self(vec![0.0; len])
    }

    pub fn constant(len: usize, value: f64) -> Self {
        Self(vec![value; len])
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }
}

impl From<Vec<f64>> for ScalarField {
    fn from(values: Vec<f64>) -> Self {
        Self(values)
    }
}

impl Deref for ScalarField {
    type Target = [f64];
    fn deref(&self) -> &[f64] {
        &self.0
    }
}

impl DerefMut for ScalarField {
    fn deref_mut(&mut self) -> &mut [f64] {
        &mut self.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn interval_geometry() {
        let d = Domain::build(&DomainSpec::interval(1.0, 10)).unwrap();
        assert_eq!(d.n_cells(), 10);
        assert_eq!(d.boundary_faces().len(), 2);
        assert_eq!(d.omega_measure(), 1.0);
        assert_eq!(d.boundary_measure(), 2.0);
        assert_eq!(d.boundary_faces()[0].side, Side::Low);
        assert_eq!(d.boundary_faces()[1].cell, 9);
    }

    #[test]
    fn rectangle_geometry() {
        let d = Domain::build(&DomainSpec::rectangle(1.0, 2.0, 10, 20)).unwrap();
        assert_eq!(d.n_cells(), 200);
        assert!((d.boundary_measure() - 6.0).abs() < 1e-12 * 6.0);
        assert!((d.omega_measure() - 2.0).abs() < 1e-12 * 2.0);
        assert_eq!(d.cell_volume(), d.h()[0] * d.h()[1]);
        // axis-major, low before high
        let faces = d.boundary_faces();
        assert_eq!(faces.len(), 2 * 20 + 2 * 10);
        assert!(faces[..20].iter().all(|f| f.axis == 0 && f.side == Side::Low));
        assert!(faces[20..40].iter().all(|f| f.axis == 0 && f.side == Side::High));
        assert!(faces[40..50].iter().all(|f| f.axis == 1 && f.side == Side::Low));
        assert!(faces[50..].iter().all(|f| f.axis == 1 && f.side == Side::High));
    }

    #[test]
    fn square_pi_measure() {
        let d = Domain::build(&DomainSpec::rectangle(PI, PI, 32, 32)).unwrap();
        assert!((d.omega_measure() - PI * PI).abs() < 1e-12 * PI * PI);
        assert!((d.boundary_measure() - 4.0 * PI).abs() < 1e-12 * 4.0 * PI);
    }

    #[test]
    fn rejects_bad_specs() {
        let three = DomainSpec {
            dim: 3,
            extents: vec![1.0; 3],
            cells: vec![4; 3],
        };
        assert_eq!(
            Domain::build(&three),
            Err(DomainError::UnsupportedDimension(3))
        );
        assert!(matches!(
            Domain::build(&DomainSpec::interval(0.0, 10)),
            Err(DomainError::DegenerateExtent { .. })
        ));
        assert!(matches!(
            Domain::build(&DomainSpec::interval(1.0, 3)),
            Err(DomainError::TooFewCells { .. })
        ));
    }

    #[test]
    fn neighbors() {
        let d = Domain::build(&DomainSpec::rectangle(1.0, 1.0, 4, 5)).unwrap();
        assert_eq!(d.neighbor(0, 0, Side::Low), None);
        assert_eq!(d.neighbor(0, 0, Side::High), Some(1));
        assert_eq!(d.neighbor(0, 1, Side::High), Some(4));
        assert_eq!(d.neighbor(19, 1, Side::High), None);
        assert_eq!(d.neighbor(19, 1, Side::Low), Some(15));
    }
}
