//! Exact rational evaluation of the closed-form constants, used as an
//! independent reference for the floating-point implementation.

use hrnet_core::HRParameters;
use num::traits::ToPrimitive;
use num::{BigInt, BigRational, One, Zero};

type Q = BigRational;

fn q(x: f64) -> Q {
    Q::from_float(x).expect("finite input")
}

fn int(x: i64) -> Q {
    Q::from_integer(BigInt::from(x))
}

fn min(a: Q, b: Q) -> Q {
    if a < b {
        a
    } else {
        b
    }
}

fn max(a: Q, b: Q) -> Q {
    if a > b {
        a
    } else {
        b
    }
}

fn pow(x: &Q, k: u32) -> Q {
    (0..k).fold(Q::one(), |acc, _| acc * x)
}

fn f(x: &Q) -> f64 {
    x.to_f64().expect("representable")
}

/// Reference values, each rounded once from its exact rational value.
#[derive(Debug, Clone)]
pub struct ExactConstants {
    pub c1: f64,
    pub c2: f64,
    pub r_star: f64,
    pub big_m: f64,
    pub big_q: f64,
    pub g: f64,
    pub big_r: f64,
    pub big_r_alt: f64,
    pub mu: f64,
    exact_m_omega: Q,
    exact_max_c1: Q,
    exact_r_star: Q,
}

impl ExactConstants {
    pub fn evaluate(p: &HRParameters, eta1: f64, eta2: f64, omega: f64) -> Self {
        let (a, b, alpha, beta) = (q(p.a), q(p.b), q(p.alpha), q(p.beta));
        let (qq, r, c, j, d) = (q(p.q), q(p.r), q(p.c), q(p.j), q(p.d));
        let n = int(p.n as i64);
        let (eta1, eta2, omega) = (q(eta1), q(eta2), q(omega));
        let one = Q::one();
        let two = int(2);

        let beta2 = &beta * &beta;
        let c1 = (&beta2 + int(4)) / &b;
        let inner = &c1 * &c1 * (&two + &one / &r) + &c1;
        let c2 = &two * pow(&(&c1 * &a), 4)
            + &two * &c1 * &j * &j
            + &two * &inner * &inner
            + int(4) * &alpha * &alpha
            + &two * &qq * &qq * &c * &c / &r
            + &two * pow(&qq, 4) / (&r * &r);
        let r_star = min(one.clone(), r.clone()) / &two;
        let big_m = &n / &r_star * (&c2 + &c1 * &c1 / int(32));
        let min_c1 = min(c1.clone(), one.clone());
        let big_q = &two * &big_m * &omega / &min_c1;

        let g = int(8) * &beta2 / &b;
        let source = &c1 * &c1 / int(16) + &two * &c2;
        let poincare = &eta2 * &d * &omega;
        let gap = &qq - &g;
        // both brackets are singular at beta = 0
        let (big_r, big_r_alt) = if g.is_zero() {
            (f64::INFINITY, f64::INFINITY)
        } else {
            let common = &poincare + &g + &two * &a * &a / &b;
            let lit = &common + &b / (int(16) * &beta2 * &r) * &gap * &gap;
            let pair = &common + &gap * &gap / (&two * &r * &g);
            (
                f(&(&n * &n * (&n - &one) / (&r_star * &min_c1) * &source * lit)),
                f(&(&n / (&r_star * &min_c1) * &source * pair)),
            )
        };
        let mu = min(min(&two * &eta1 * &d, one.clone()), r.clone());

        Self {
            c1: f(&c1),
            c2: f(&c2),
            r_star: f(&r_star),
            big_m: f(&big_m),
            big_q: f(&big_q),
            g: f(&g),
            big_r,
            big_r_alt,
            mu: f(&mu),
            exact_m_omega: &big_m * &omega,
            exact_max_c1: max(c1, one),
            exact_r_star: r_star,
        }
    }

    /// Entry time: the logarithm's argument is formed exactly and rounded
    /// once before taking `ln`.
    pub fn entry_time(&self, rho: f64) -> f64 {
        let arg = q(rho) * &self.exact_max_c1 / &self.exact_m_omega;
        if arg <= Q::one() || arg.is_zero() {
            return 0.0;
        }
        f(&arg).ln() / f(&self.exact_r_star)
    }

    /// Rho giving an entry-time argument of exactly `factor` (rounded once).
    pub fn rho_for(&self, factor: f64) -> f64 {
        f(&(q(factor) * &self.exact_m_omega / &self.exact_max_c1))
    }
}

pub fn rel_err(x: f64, reference: f64) -> f64 {
    if x == reference {
        0.0
    } else {
        (x - reference).abs() / reference.abs().max(f64::MIN_POSITIVE)
    }
}
