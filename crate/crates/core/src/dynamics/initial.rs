//! Initial-state generators.

use std::path::PathBuf;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{NetworkState, NeuronFields};
use crate::domain::{Domain, ScalarField};
use crate::error::DynamicsError;

/// Spatial profile of the initial data.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum InitialProfile {
    /// Spatially constant values, one per neuron.
    Constant {
        u: Vec<f64>,
        v: Vec<f64>,
        w: Vec<f64>,
    },
    /// `u_i = base_u + amplitude_i · exp(−|x − center|² / (2 width²))`,
    /// `v`, `w` constant.
    SmoothBump {
        base: [f64; 3],
        amplitude: Vec<f64>,
        center: Vec<f64>,
        width: f64,
    },
    /// Independent uniform values per cell and component.
    UniformRandom { low: [f64; 3], high: [f64; 3] },
    /// Component `k` of neuron `i` is `base[k] + offset[k] · i` plus seeded
    /// uniform noise in `[−noise[k], noise[k]]`, drawn per cell.
    Desync {
        base: [f64; 3],
        offset: [f64; 3],
        noise: [f64; 3],
    },
    /// CSV with header `neuron,cell,u,v,w` (1-based neuron, 0-based cell).
    File { path: PathBuf },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitialCondition {
    pub seed: u64,
    /// Copy neuron 1's fields to every other neuron after generation.
    #[serde(default)]
    pub synchronized: bool,
    pub profile: InitialProfile,
}

impl InitialCondition {
    pub fn desync(base: [f64; 3], offset: [f64; 3], noise: [f64; 3], seed: u64) -> Self {
        Self {
            seed,
            synchronized: false,
            profile: InitialProfile::Desync {
                base,
                offset,
                noise,
            },
        }
    }

    pub fn with_seed(&self, seed: u64) -> Self {
        Self {
            seed,
            ..self.clone()
        }
    }

    pub fn generate(&self, n: usize, domain: &Domain) -> Result<NetworkState, DynamicsError> {
        let bad = |msg: String| DynamicsError::InitialCondition(msg);
        let len = domain.n_cells();
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let mut fields = NeuronFields::zeros(n, domain);

        match &self.profile {
            InitialProfile::Constant { u, v, w } => {
                for (name, vals) in [("u", u), ("v", v), ("w", w)] {
                    if vals.len() != n {
                        return Err(bad(format!("`{name}` needs {n} values, got {}", vals.len())));
                    }
                }
                for i in 0..n {
                    fields.u[i] = ScalarField::constant(len, u[i]);
                    fields.v[i] = ScalarField::constant(len, v[i]);
                    fields.w[i] = ScalarField::constant(len, w[i]);
                }
            }
            InitialProfile::SmoothBump {
                base,
                amplitude,
                center,
                width,
            } => {
                if amplitude.len() != n {
                    return Err(bad(format!(
                        "`amplitude` needs {n} values, got {}",
                        amplitude.len()
                    )));
                }
                if center.len() != domain.dim() {
                    return Err(bad(format!(
                        "`center` needs {} coordinates, got {}",
                        domain.dim(),
                        center.len()
                    )));
                }
                if !(*width > 0.0) {
                    return Err(bad(format!("`width` must be positive, got {width}")));
                }
                for i in 0..n {
                    fields.u[i] = domain.field_from_fn(|x| {
                        let r2: f64 = center
                            .iter()
                            .enumerate()
                            .map(|(k, c)| (x[k] - c).powi(2))
                            .sum();
                        base[0] + amplitude[i] * (-r2 / (2.0 * width * width)).exp()
                    });
                    fields.v[i] = ScalarField::constant(len, base[1]);
                    fields.w[i] = ScalarField::constant(len, base[2]);
                }
            }
            InitialProfile::UniformRandom { low, high } => {
                for k in 0..3 {
                    if !(low[k] <= high[k]) {
                        return Err(bad(format!("`low[{k}]` exceeds `high[{k}]`")));
                    }
                }
                for i in 0..n {
                    for (k, group) in [&mut fields.u, &mut fields.v, &mut fields.w]
                        .into_iter()
                        .enumerate()
                    {
                        for x in group[i].iter_mut() {
                            *x = if low[k] == high[k] {
                                low[k]
                            } else {
                                rng.random_range(low[k]..high[k])
                            };
                        }
                    }
                }
            }
            InitialProfile::Desync {
                base,
                offset,
                noise,
            } => {
                if !noise.iter().all(|&x| x >= 0.0) {
                    return Err(bad(format!("`noise` must be non-negative, got {noise:?}")));
                }
                for i in 0..n {
                    for (k, group) in [&mut fields.u, &mut fields.v, &mut fields.w]
                        .into_iter()
                        .enumerate()
                    {
                        let center = base[k] + offset[k] * i as f64;
                        for x in group[i].iter_mut() {
                            let e = if noise[k] > 0.0 {
                                rng.random_range(-1.0..1.0)
                            } else {
                                0.0
                            };
                            *x = center + noise[k] * e;
                        }
                    }
                }
            }
            InitialProfile::File { path } => {
                read_state_csv(path, n, domain, &mut fields)?;
            }
        }

        if self.synchronized {
            for i in 1..n {
                fields.u[i] = fields.u[0].clone();
                fields.v[i] = fields.v[0].clone();
                fields.w[i] = fields.w[0].clone();
            }
        }
        let state = NetworkState::new(0.0, fields);
        state.check_finite()?;
        Ok(state)
    }
}

fn read_state_csv(
    path: &PathBuf,
    n: usize,
    domain: &Domain,
    fields: &mut NeuronFields,
) -> Result<(), DynamicsError> {
    let bad = |msg: String| DynamicsError::InitialCondition(format!("{}: {msg}", path.display()));
    let text = std::fs::read_to_string(path).map_err(|e| bad(e.to_string()))?;
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, header)) if header.trim() == "neuron,cell,u,v,w" => {}
        _ => return Err(bad("header must be `neuron,cell,u,v,w`".into())),
    }
    let len = domain.n_cells();
    let mut seen = vec![false; n * len];
    for (lineno, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let cols: Vec<&str> = line.split(',').map(str::trim).collect();
        if cols.len() != 5 {
            return Err(bad(format!("line {}: expected 5 columns", lineno + 1)));
        }
        let parse_idx = |s: &str| {
            s.parse::<usize>()
                .map_err(|_| bad(format!("line {}: bad index `{s}`", lineno + 1)))
        };
        let parse_val = |s: &str| {
            s.parse::<f64>()
                .map_err(|_| bad(format!("line {}: bad value `{s}`", lineno + 1)))
        };
        let neuron = parse_idx(cols[0])?;
        let cell = parse_idx(cols[1])?;
        if neuron == 0 || neuron > n || cell >= len {
            return Err(bad(format!("line {}: index out of range", lineno + 1)));
        }
        let i = neuron - 1;
        fields.u[i][cell] = parse_val(cols[2])?;
        fields.v[i][cell] = parse_val(cols[3])?;
        fields.w[i][cell] = parse_val(cols[4])?;
        seen[i * len + cell] = true;
    }
    if let Some(missing) = seen.iter().position(|s| !s) {
        return Err(bad(format!(
            "no value for neuron {} cell {}",
            missing / len + 1,
            missing % len
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::DomainSpec;

    fn domain() -> Domain {
        Domain::build(&DomainSpec::interval(1.0, 16)).unwrap()
    }

    #[test]
    fn desync_is_seeded() {
        let ic = InitialCondition::desync([-1.0, -5.0, 3.0], [1.0, 0.0, 0.0], [0.1; 3], 9);
        let a = ic.generate(3, &domain()).unwrap();
        let b = ic.generate(3, &domain()).unwrap();
        assert_eq!(a, b);
        let c = ic.with_seed(10).generate(3, &domain()).unwrap();
        assert_ne!(a, c);
        for (i, u) in a.fields.u.iter().enumerate() {
            let center = -1.0 + i as f64;
            assert!(u.iter().all(|x| (x - center).abs() <= 0.1));
        }
    }

    #[test]
    fn synchronized_copies_first_neuron() {
        let mut ic = InitialCondition::desync([0.0; 3], [1.0; 3], [0.5; 3], 1);
        ic.synchronized = true;
        let s = ic.generate(3, &domain()).unwrap();
        assert_eq!(s.fields.u[0], s.fields.u[2]);
        assert_eq!(s.fields.w[0], s.fields.w[1]);
    }

    #[test]
    fn constant_needs_one_value_per_neuron() {
        let ic = InitialCondition {
            seed: 0,
            synchronized: false,
            profile: InitialProfile::Constant {
                u: vec![1.0],
                v: vec![0.0, 0.0],
                w: vec![0.0, 0.0],
            },
        };
        assert!(ic.generate(2, &domain()).is_err());
    }

    #[test]
    fn file_round_trip() {
        let d = Domain::build(&DomainSpec::interval(1.0, 4)).unwrap();
        let dir = std::env::temp_dir().join(format!("hrnet-ic-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("ic.csv");
        let mut text = String::from("neuron,cell,u,v,w\n");
        for i in 1..=2 {
            for c in 0..4 {
                text.push_str(&format!("{i},{c},{},{},{}\n", i as f64 + c as f64, -1.0, 0.5));
            }
        }
        std::fs::write(&path, text).unwrap();
        let ic = InitialCondition {
            seed: 0,
            synchronized: false,
            profile: InitialProfile::File { path: path.clone() },
        };
        let s = ic.generate(2, &d).unwrap();
        assert_eq!(s.fields.u[1][3], 5.0);
        assert!(ic.generate(3, &d).is_err());
        std::fs::remove_dir_all(dir).ok();
    }
}
