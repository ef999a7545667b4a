//! Midpoint quadrature over cells and boundary faces.

use super::{BoundaryMatching, Domain};

pub fn integrate_domain(f: &[f64], domain: &Domain) -> f64 {
    f.iter().sum::<f64>() * domain.cell_volume()
}

pub fn inner(f: &[f64], g: &[f64], domain: &Domain) -> f64 {
    f.iter().zip(g).map(|(a, b)| a * b).sum::<f64>() * domain.cell_volume()
}

/// Squared L² norm.
pub fn l2_norm_sq(f: &[f64], domain: &Domain) -> f64 {
    f.iter().map(|a| a * a).sum::<f64>() * domain.cell_volume()
}

/// Integral over the boundary piece shared by neurons `i` and `j`, where
/// `f_faces` holds one value per boundary face. With `i == j` this is the
/// zero-flux part of the boundary for neuron `i`.
pub fn integrate_boundary_pair(
    f_faces: &[f64],
    domain: &Domain,
    matching: &BoundaryMatching,
    i: usize,
    j: usize,
) -> f64 {
    domain
        .boundary_faces()
        .iter()
        .enumerate()
        .filter(|(f, _)| matching.partner(*f, i) == j)
        .map(|(f, face)| f_faces[f] * face.area)
        .sum()
}
