use hrnet_core::domain::{apply_diffusion, inner, integrate_domain, BoundaryMatching};
use hrnet_core::{Domain, DomainSpec, ScalarField};
use proptest::prelude::*;

fn domains() -> impl Strategy<Value = Domain> {
    prop_oneof![
        (4usize..24, 0.5f64..3.0).prop_map(|(n, l)| Domain::build(&DomainSpec::interval(l, n)).unwrap()),
        (4usize..9, 4usize..9, 0.5f64..2.0, 0.5f64..2.0)
            .prop_map(|(nx, ny, lx, ly)| Domain::build(&DomainSpec::rectangle(lx, ly, nx, ny)).unwrap()),
    ]
}

/// Random involution of `0..n`.
fn involution(n: usize, seeds: &[u32]) -> Vec<usize> {
    let mut perm: Vec<usize> = (0..n).collect();
    let mut free: Vec<usize> = (0..n).collect();
    let mut k = 0;
    while free.len() >= 2 {
        let s = seeds[k % seeds.len()] as usize;
        k += 1;
        let i = free.swap_remove(s % free.len());
        if s % 3 == 0 {
            continue;
        }
        let j = free.swap_remove((s / 7) % free.len());
        perm[i] = j;
        perm[j] = i;
    }
    perm
}

#[derive(Debug, Clone)]
struct Case {
    domain: Domain,
    matching: BoundaryMatching,
    u: Vec<ScalarField>,
    w: Vec<ScalarField>,
    d: f64,
    p: f64,
}

fn cases() -> impl Strategy<Value = Case> {
    (domains(), 1usize..5, 0.01f64..3.0, 0.0f64..10.0).prop_flat_map(|(domain, n, d, p)| {
        let len = domain.n_cells();
        let faces = domain.boundary_faces().len();
        (
            prop::collection::vec(prop::collection::vec(-5.0f64..5.0, len), n),
            prop::collection::vec(prop::collection::vec(-5.0f64..5.0, len), n),
            prop::collection::vec(prop::collection::vec(any::<u32>(), 4), faces),
        )
            .prop_map(move |(u, w, seeds)| {
                let per_face = seeds.iter().map(|s| involution(n, s)).collect();
                Case {
                    matching: BoundaryMatching::from_faces(&domain, per_face).unwrap(),
                    domain: domain.clone(),
                    u: u.into_iter().map(ScalarField::from).collect(),
                    w: w.into_iter().map(ScalarField::from).collect(),
                    d,
                    p,
                }
            })
    })
}

fn scale(c: &Case) -> f64 {
    let h = c.domain.h().iter().cloned().fold(f64::INFINITY, f64::min);
    c.d * (1.0 + c.p) * 5.0 / (h * h)
}

proptest! {
    #[test]
    fn linear(c in cases(), s in -2.0f64..2.0, t in -2.0f64..2.0) {
        let mix: Vec<ScalarField> = c.u.iter().zip(&c.w)
            .map(|(a, b)| a.iter().zip(b.iter()).map(|(x, y)| s * x + t * y).collect::<Vec<_>>().into())
            .collect();
        let lu = apply_diffusion(&c.u, &c.domain, &c.matching, c.d, c.p).unwrap();
        let lw = apply_diffusion(&c.w, &c.domain, &c.matching, c.d, c.p).unwrap();
        let lm = apply_diffusion(&mix, &c.domain, &c.matching, c.d, c.p).unwrap();
        let tol = 1e-12 * scale(&c) * 4.0;
        for i in 0..c.u.len() {
            for k in 0..c.domain.n_cells() {
                prop_assert!((lm[i][k] - s * lu[i][k] - t * lw[i][k]).abs() <= tol);
            }
        }
    }

    #[test]
    fn negative_semidefinite(c in cases()) {
        let lu = apply_diffusion(&c.u, &c.domain, &c.matching, c.d, c.p).unwrap();
        let q: f64 = c.u.iter().zip(&lu).map(|(u, l)| inner(u, l, &c.domain)).sum();
        let norm: f64 = c.u.iter().map(|u| inner(u, u, &c.domain)).sum();
        prop_assert!(q <= 1e-12 * scale(&c) * norm.max(1.0));
    }

    #[test]
    fn conserves_total_mass(c in cases()) {
        let lu = apply_diffusion(&c.u, &c.domain, &c.matching, c.d, c.p).unwrap();
        let total: f64 = lu.iter().map(|l| integrate_domain(l, &c.domain)).sum();
        let tol = 1e-12 * scale(&c) * c.domain.omega_measure() * c.u.len() as f64;
        prop_assert!(total.abs() <= tol, "total = {}", total);
    }

    #[test]
    fn relabeling_is_equivariant(c in cases(), seed in any::<u64>()) {
        let n = c.u.len();
        // deterministic permutation from the seed (Fisher-Yates)
        let mut relabel: Vec<usize> = (0..n).collect();
        let mut s = seed;
        for k in (1..n).rev() {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            relabel.swap(k, (s >> 33) as usize % (k + 1));
        }
        let mut u_new = c.u.clone();
        for old in 0..n {
            u_new[relabel[old]] = c.u[old].clone();
        }
        let m_new = c.matching.relabeled(&relabel);
        let before = apply_diffusion(&c.u, &c.domain, &c.matching, c.d, c.p).unwrap();
        let after = apply_diffusion(&u_new, &c.domain, &m_new, c.d, c.p).unwrap();
        for old in 0..n {
            let a: Vec<u64> = before[old].iter().map(|x| x.to_bits()).collect();
            let b: Vec<u64> = after[relabel[old]].iter().map(|x| x.to_bits()).collect();
            prop_assert_eq!(a, b);
        }
    }
}
