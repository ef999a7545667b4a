//! Right-hand sides of the network equations.

use super::NeuronFields;
use crate::domain::{apply_diffusion_into, BoundaryMatching, Domain};
use crate::error::DomainError;
use crate::params::HRParameters;

/// Pointwise Hindmarsh-Rose kinetics without diffusion.
pub fn reaction_rhs(fields: &NeuronFields, params: &HRParameters) -> NeuronFields {
    let mut out = fields.clone();
    reaction_rhs_into(fields, params, &mut out);
    out
}

pub fn reaction_rhs_into(fields: &NeuronFields, params: &HRParameters, out: &mut NeuronFields) {
    let HRParameters {
        a,
        b,
        alpha,
        beta,
        q,
        r,
        c,
        j,
        ..
    } = *params;
    for i in 0..fields.n() {
        let (u, v, w) = (&fields.u[i], &fields.v[i], &fields.w[i]);
        let (du, dv, dw) = (&mut out.u[i], &mut out.v[i], &mut out.w[i]);
        for k in 0..u.len() {
            let (uk, vk, wk) = (u[k], v[k], w[k]);
            let u2 = uk * uk;
            du[k] = a * u2 - b * u2 * uk + vk - wk + j;
            dv[k] = alpha - vk - beta * u2;
            dw[k] = q * (uk - c) - r * wk;
        }
    }
}

/// Reaction plus diffusion and boundary coupling on the `u` components.
pub fn full_rhs(
    fields: &NeuronFields,
    params: &HRParameters,
    domain: &Domain,
    matching: &BoundaryMatching,
) -> Result<NeuronFields, DomainError> {
    let mut out = NeuronFields::zeros(fields.n(), domain);
    let mut scratch = NeuronFields::zeros(fields.n(), domain).u;
    full_rhs_into(fields, params, domain, matching, true, &mut out, &mut scratch)?;
    Ok(out)
}

/// Writes the full right-hand side into `out`; `scratch` holds the diffusion
/// term. With `reaction == false` only the diffusion/coupling part is kept.
pub(crate) fn full_rhs_into(
    fields: &NeuronFields,
    params: &HRParameters,
    domain: &Domain,
    matching: &BoundaryMatching,
    reaction: bool,
    out: &mut NeuronFields,
    scratch: &mut [crate::domain::ScalarField],
) -> Result<(), DomainError> {
    apply_diffusion_into(&fields.u, scratch, domain, matching, params.d, params.p)?;
    if reaction {
        reaction_rhs_into(fields, params, out);
        for (du, lap) in out.u.iter_mut().zip(scratch.iter()) {
            for (x, y) in du.iter_mut().zip(lap.iter()) {
                *x += y;
            }
        }
    } else {
        for (du, lap) in out.u.iter_mut().zip(scratch.iter()) {
            du.copy_from_slice(lap);
        }
        for g in out.v.iter_mut().chain(out.w.iter_mut()) {
            g.iter_mut().for_each(|x| *x = 0.0);
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::{DomainSpec, ScalarField};

    fn single(domain: &Domain, n: usize, u: f64, v: f64, w: f64) -> NeuronFields {
        let len = domain.n_cells();
        NeuronFields {
            u: vec![ScalarField::constant(len, u); n],
            v: vec![ScalarField::constant(len, v); n],
            w: vec![ScalarField::constant(len, w); n],
        }
    }

    fn params() -> HRParameters {
        HRParameters::default_profile()
    }

    #[test]
    fn reaction_at_origin() {
        let d = Domain::build(&DomainSpec::interval(1.0, 4)).unwrap();
        let p = HRParameters { c: 0.0, ..params() };
        let r = reaction_rhs(&single(&d, 2, 0.0, 0.0, 0.0), &p);
        assert!(r.u.iter().all(|f| f.iter().all(|&x| x == p.j)));
        assert!(r.v.iter().all(|f| f.iter().all(|&x| x == p.alpha)));
        assert!(r.w.iter().all(|f| f.iter().all(|&x| x == 0.0)));
    }

    #[test]
    fn reaction_substitution() {
        let d = Domain::build(&DomainSpec::interval(1.0, 4)).unwrap();
        let p = HRParameters { a: 3.0, b: 1.0, j: 0.0, ..params() };
        let r = reaction_rhs(&single(&d, 2, 1.0, 2.0, 3.0), &p);
        assert_eq!(r.u[0][0], 1.0);
    }

    #[test]
    fn zero_kinetics_probe() {
        // a = b = J = alpha = beta = q = 0 is outside the validated parameter
        // space but the kinetics must still vanish identically
        let d = Domain::build(&DomainSpec::interval(1.0, 4)).unwrap();
        let p = HRParameters {
            a: 0.0,
            b: 0.0,
            j: 0.0,
            alpha: 0.0,
            beta: 0.0,
            q: 0.0,
            ..params()
        };
        let r = reaction_rhs(&single(&d, 2, 0.0, 0.0, 0.0), &p);
        assert!(r.values().all(|x| x == 0.0));
    }

    #[test]
    fn uncoupled_constant_fields_have_no_diffusion() {
        let d = Domain::build(&DomainSpec::rectangle(1.0, 1.0, 5, 5)).unwrap();
        let m = BoundaryMatching::uniform(&d, &[1, 0]).unwrap();
        let p = HRParameters { p: 0.0, ..params() };
        let mut s = single(&d, 2, 0.3, -2.0, 1.0);
        s.u[1] = ScalarField::constant(25, -0.7);
        let full = full_rhs(&s, &p, &d, &m).unwrap();
        assert_eq!(full, reaction_rhs(&s, &p));
    }
}
