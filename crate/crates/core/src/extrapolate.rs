//! Linear extrapolation of the graph past `a` from the minimizing drift.

use crate::error::{domain, Result};
use crate::evaluation::EvalSpec;
use crate::measures::WalkKind;
use crate::optimize::{argmin_p, MinimaReport};
use crate::scalar::Real;

#[derive(Debug, Clone, PartialEq)]
pub struct ExtrapolationResult<T> {
    pub walk: WalkKind<T>,
    pub n: u32,
    pub a: T,
    pub b: T,
    pub p_star: T,
    /// Mean of `mu_b(., p_*)`: `(1 - 2 p_*) b`.
    pub m: T,
    /// `f(a)` plus the mean of `mu_{b-a}(., p_*)`.
    pub m_tilde: T,
    pub f_at_a: T,
    pub minima: MinimaReport<T>,
}

/// `(m, m_tilde)` for a given drift; the expectations are the exact means `(1 - 2p) x`.
pub fn extrapolators<T: Real>(p_star: T, f_at_a: T, a: T, b: T) -> (T, T) {
    let slope = T::one() - T::lit(2.0) * p_star;
    (slope * b, f_at_a + slope * (b - a))
}

pub fn extrapolate<T: Real>(spec: &EvalSpec<T>, b: T) -> Result<ExtrapolationResult<T>> {
    let a = spec.a();
    if !(b > a) {
        return Err(domain(format!("extrapolation point b={b} must exceed a={a}")));
    }
    let minima = argmin_p(spec)?;
    let f_at_a = spec.f.value_at_end();
    let (m, m_tilde) = extrapolators(minima.p_star, f_at_a, a, b);
    Ok(ExtrapolationResult {
        walk: spec.walk,
        n: spec.n,
        a,
        b,
        p_star: minima.p_star,
        m,
        m_tilde,
        f_at_a,
        minima,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::inner_products::FunctionSpec;
    use std::f64::consts::PI;

    #[test]
    fn identity_reproduces_b() {
        for walk in [WalkKind::Ctqw, WalkKind::hadamard(), WalkKind::Rw] {
            for n in [2, 4] {
                let s = EvalSpec::new(walk, FunctionSpec::identity(1.0).unwrap(), n).unwrap();
                let e = extrapolate(&s, 2.5).unwrap();
                assert_eq!((e.p_star, e.m, e.m_tilde), (0.0, 2.5, 2.5));
            }
        }
    }

    #[test]
    fn cosine_n2_formulas() {
        for &(a, b) in &[(1.0f64, 1.5), (PI, 4.0), (5.0, 9.0)] {
            let s = EvalSpec::new(WalkKind::Rw, FunctionSpec::cosine(a).unwrap(), 2).unwrap();
            let e = extrapolate(&s, b).unwrap();
            let xf = a * a.sin() + a.cos() - 1.0;
            let p = 0.5 - 1.5 * xf / a.powi(3);
            if p > 0.0 && p < 1.0 {
                assert!((e.m - 3.0 * b / a.powi(3) * xf).abs() < 1e-9);
                assert!((e.m_tilde - (a.cos() + 3.0 * (b - a) / a.powi(3) * xf)).abs() < 1e-9);
            }
        }
        let s = EvalSpec::new(WalkKind::Ctqw, FunctionSpec::cosine(2.0 * PI).unwrap(), 2).unwrap();
        let e = extrapolate(&s, 3.0 * PI).unwrap();
        assert!(e.m.abs() < 1e-12 && (e.m_tilde - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_b_not_beyond_a() {
        let s = EvalSpec::new(WalkKind::Rw, FunctionSpec::cosine(2.0).unwrap(), 2).unwrap();
        assert!(extrapolate(&s, 2.0).is_err());
        assert!(extrapolate(&s, 1.0).is_err());
    }

    #[test]
    fn half_drift_is_flat() {
        assert_eq!(extrapolators(0.5, 0.3, 1.0, 7.0), (0.0, 0.3));
    }
}
