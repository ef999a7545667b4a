//! Observables of one network state.

use crate::constants::DerivedConstants;
use crate::domain::{l2_norm_sq, BoundaryMatching, Domain};
use crate::dynamics::NeuronFields;
use crate::model::Model;

/// Squared norms of the differences between neurons `i < j` (0-based).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairDifference {
    pub i: usize,
    pub j: usize,
    pub u_sq: f64,
    pub v_sq: f64,
    pub w_sq: f64,
    /// `G‖U‖² + ‖V‖² + ‖W‖²`.
    pub energy_g: f64,
}

impl PairDifference {
    /// `‖U‖² + ‖V‖² + ‖W‖²`.
    pub fn plain(&self) -> f64 {
        self.u_sq + self.v_sq + self.w_sq
    }
}

/// All unordered pairs `i < j` in lexicographic order.
pub fn pair_indices(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..n).flat_map(move |i| (i + 1..n).map(move |j| (i, j)))
}

fn diff_norm_sq(a: &[f64], b: &[f64], domain: &Domain) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>() * domain.cell_volume()
}

/// Quadrature norms of field differences for every pair `i < j`.
pub fn pair_differences(fields: &NeuronFields, domain: &Domain, g: f64) -> Vec<PairDifference> {
    pair_indices(fields.n())
        .map(|(i, j)| {
            let u_sq = diff_norm_sq(&fields.u[i], &fields.u[j], domain);
            let v_sq = diff_norm_sq(&fields.v[i], &fields.v[j], domain);
            let w_sq = diff_norm_sq(&fields.w[i], &fields.w[j], domain);
            PairDifference {
                i,
                j,
                u_sq,
                v_sq,
                w_sq,
                energy_g: g * u_sq + v_sq + w_sq,
            }
        })
        .collect()
}

/// `p Σ_{i<j} ∫_{Γ_ij} (u_i − u_j)²`, with face values taken from the
/// adjacent cell.
pub fn stimulation_signal(
    fields: &NeuronFields,
    domain: &Domain,
    matching: &BoundaryMatching,
    p: f64,
) -> f64 {
    if p == 0.0 {
        return 0.0;
    }
    let mut total = 0.0;
    for (f, face) in domain.boundary_faces().iter().enumerate() {
        for i in 0..fields.n() {
            let j = matching.partner(f, i);
            if j > i {
                let diff = fields.u[i][face.cell] - fields.u[j][face.cell];
                total += diff * diff * face.area;
            }
        }
    }
    p * total
}

#[derive(Debug, Clone, PartialEq)]
pub struct KReport {
    n: usize,
    /// `k[i * n + j]` for ordered pairs.
    pub k: Vec<f64>,
    pub k_sum: f64,
    /// `Σ_{i,j} ∫_Γ (u_i − u_j)²`.
    pub boundary_diff_full: f64,
}

impl KReport {
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.k[i * self.n + j]
    }

    /// Largest `|K_ij − K_ji|`.
    pub fn max_asymmetry(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.n {
            for j in 0..i {
                worst = worst.max((self.get(i, j) - self.get(j, i)).abs());
            }
        }
        worst
    }

    /// `K_sum / boundary_diff_full`, NaN when both vanish.
    pub fn ratio(&self) -> f64 {
        self.k_sum / self.boundary_diff_full
    }
}

/// Boundary quantity
/// `K_ij = Σ_k ∫_{Γ_ik} (u_i − u_k)(u_i − u_j) − Σ_k ∫_{Γ_jk} (u_j − u_k)(u_i − u_j)`
/// for every ordered pair, its total, and the full boundary difference sum.
pub fn compute_k(fields: &NeuronFields, domain: &Domain, matching: &BoundaryMatching) -> KReport {
    let n = fields.n();
    let mut k = vec![0.0; n * n];
    let mut full = 0.0;
    for (f, face) in domain.boundary_faces().iter().enumerate() {
        let c = face.cell;
        let area = face.area;
        for i in 0..n {
            let ui = fields.u[i][c];
            let ui_partner = fields.u[matching.partner(f, i)][c];
            for j in 0..n {
                let uj = fields.u[j][c];
                let uj_partner = fields.u[matching.partner(f, j)][c];
                let uij = ui - uj;
                k[i * n + j] += area * ((ui - ui_partner) * uij - (uj - uj_partner) * uij);
                full += area * uij * uij;
            }
        }
    }
    let k_sum = k.iter().sum();
    KReport {
        n,
        k,
        k_sum,
        boundary_diff_full: full,
    }
}

/// One recorded row of a trajectory.
#[derive(Debug, Clone, PartialEq)]
pub struct Observation {
    pub t: f64,
    /// `Σ_i ‖g_i‖²`.
    pub total_energy: f64,
    /// `C1 Σ‖u_i‖² + Σ‖v_i‖² + Σ‖w_i‖²`.
    pub weighted_energy: f64,
    pub gronwall_envelope: f64,
    pub stimulation: f64,
    /// `R|Ω|` with the printed threshold constant.
    pub threshold_literal: f64,
    /// `R|Ω|` with the per-pair threshold constant.
    pub threshold_perpair: f64,
    pub boundary_diff_full: f64,
    pub k_sum: f64,
    pub k_asymmetry: f64,
    pub pairs: Vec<PairDifference>,
}

impl Observation {
    /// `Σ_{i<j} (G‖U_ij‖² + ‖V_ij‖² + ‖W_ij‖²)`.
    pub fn diff_energy_g(&self) -> f64 {
        self.pairs.iter().map(|p| p.energy_g).sum()
    }

    pub fn max_pair_energy_g(&self) -> f64 {
        self.pairs.iter().map(|p| p.energy_g).fold(0.0, f64::max)
    }
}

/// Computes every observable of a state; holds the initial energy needed by
/// the Gronwall envelope.
#[derive(Debug, Clone)]
pub struct Observer<'m> {
    model: &'m Model,
    initial_energy: Option<f64>,
}

impl<'m> Observer<'m> {
    pub fn new(model: &'m Model) -> Self {
        Self {
            model,
            initial_energy: None,
        }
    }

    pub fn observe(&mut self, t: f64, fields: &NeuronFields) -> Observation {
        let m = self.model;
        let domain = &m.domain;
        let consts: &DerivedConstants = &m.constants;
        let mut sum_u = 0.0;
        let mut sum_vw = 0.0;
        for i in 0..fields.n() {
            sum_u += l2_norm_sq(&fields.u[i], domain);
            sum_vw += l2_norm_sq(&fields.v[i], domain) + l2_norm_sq(&fields.w[i], domain);
        }
        let total_energy = sum_u + sum_vw;
        let rho0 = *self.initial_energy.get_or_insert(total_energy);
        let k = compute_k(fields, domain, &m.matching);
        Observation {
            t,
            total_energy,
            weighted_energy: consts.c1 * sum_u + sum_vw,
            gronwall_envelope: consts.gronwall_envelope(t, rho0),
            stimulation: stimulation_signal(fields, domain, &m.matching, m.params.p),
            threshold_literal: consts.big_r * consts.omega_measure,
            threshold_perpair: consts.big_r_alt * consts.omega_measure,
            boundary_diff_full: k.boundary_diff_full,
            k_sum: k.k_sum,
            k_asymmetry: k.max_asymmetry(),
            pairs: pair_differences(fields, domain, consts.g),
        }
    }
}
