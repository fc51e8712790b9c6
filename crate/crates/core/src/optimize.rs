//! Minimizers of the evaluation function over the drift `p`.
//!
//! `p_*` is the argmin of `V` over `{0, 1}` together with the interior local
//! minima in `(0, 1)`. Ties (within `1e-10 (1 + |V|)`) are averaged.

use crate::error::{domain, Error, Result};
use crate::evaluation::{build_v, EvalSpec, WPolynomial};
use crate::inner_products::{bracket, bracket_discrete, FunctionSpec};
use crate::measures::{p_of_w, WalkKind};
use crate::scalar::{Exact, Real};

/// Relative tie tolerance used when several candidates share the minimum.
pub const TIE_TOLERANCE: f64 = 1e-10;
/// Threshold (relative to `||V''||_1`) below which a critical point is not a strict minimum.
pub const CURVATURE_TOLERANCE: f64 = 1e-9;
/// Critical points with `|w|` this close to 1 are identified with the endpoint.
pub const BOUNDARY_SNAP: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct MinimaReport<T> {
    /// Interior local minimizers in `(0, 1)`, ascending.
    pub local_minima: Vec<T>,
    /// `{0, 1}` followed by the interior minima.
    pub candidates: Vec<T>,
    pub p_star: T,
    pub v_at_candidates: Vec<(T, T)>,
    pub unique: bool,
    /// `9 A3^2 - 24 A2 A4` when `V` is a quartic.
    pub discriminant: Option<T>,
}

impl<T: Real> MinimaReport<T> {
    pub fn v_star(&self) -> T {
        self.v_at_candidates.iter().map(|c| c.1).fold(T::infinity(), T::min)
    }
}

/// Unconstrained minimizer on the real line for `n = 2`,
/// `p = 1/2 - 3 <xf> / (2 a^3)`.
pub fn minimize_closed_form_n2<T: Real>(spec: &EvalSpec<T>) -> Result<T> {
    spec.validate()?;
    if spec.n != 2 {
        return Err(Error::InvalidOrder(spec.n));
    }
    if spec.walk == WalkKind::DtrwZ {
        return Err(Error::UnsupportedWalk {
            op: "minimize_closed_form_n2 (use the lattice variant)",
            walk: spec.walk.to_string(),
        });
    }
    let a = spec.a();
    let xf = bracket(&spec.f, Exact::from_integer(1), 1)?.value;
    Ok(T::lit(0.5) - T::lit(1.5) * xf / (a * a * a))
}

/// Unconstrained minimizer of the lattice DTRW quadratic,
/// `p = 1/2 - 3 <xf> / (2 (a-1) a (a+1))` with lattice-sum brackets.
pub fn minimize_closed_form_n2_discrete<T: Real>(f: &FunctionSpec<T>, a: u64) -> Result<T> {
    if a < 2 {
        return Err(domain(format!("lattice model needs a >= 2, got {a}")));
    }
    let xf = bracket_discrete(f, 1, 1, a)?.value;
    let af = T::lit(a as f64);
    Ok(T::lit(0.5) - T::lit(1.5) * xf / ((af - T::one()) * af * (af + T::one())))
}

/// Interior local minimizers `p` in `(0, 1)` of a polynomial `V(w)`.
///
/// Critical points are the real roots of `dV/dw` on `(-1, 1)`; a root is kept
/// when `d2V/dw2` is strictly positive there (the map `w -> p` is affine with
/// slope `-1/2`, so curvature in `p` is `4 d2V/dw2`).
pub fn find_local_minima<T: Real>(v: &WPolynomial<T>) -> Vec<T> {
    if v.degree() < 2 {
        return vec![];
    }
    let d = v.derivative();
    let dd = d.derivative();
    let curv_tol = T::lit(CURVATURE_TOLERANCE) * dd.norm1();
    // a critical point within rounding of an endpoint is that endpoint, already a candidate
    let edge = T::one() - T::lit(BOUNDARY_SNAP).max(T::tol_floor());
    let mut ps: Vec<T> = d
        .real_roots_in(-T::one(), T::one())
        .into_iter()
        .filter(|&w| w.abs() < edge && dd.eval(w) > curv_tol)
        .map(p_of_w)
        .filter(|&p| p > T::zero() && p < T::one())
        .collect();
    ps.sort_by(|a, b| a.partial_cmp(b).expect("finite minimizers"));
    ps
}

/// `p_*` for a polynomial `V(w)`.
pub fn argmin_polynomial<T: Real>(v: &WPolynomial<T>) -> Result<MinimaReport<T>> {
    if v.degree() < 2 || !(v.leading() > T::zero()) {
        // leading coefficient is a^(n+1)/(n+1) (continuous) or (a-1)a(a+1)/3 (lattice)
        return Err(Error::Roots(format!(
            "evaluation function is not a coercive polynomial (degree {}, leading {})",
            v.degree(),
            v.leading()
        )));
    }
    let local_minima = find_local_minima(v);
    let mut candidates = vec![T::zero(), T::one()];
    candidates.extend(local_minima.iter().copied());
    let v_at_candidates: Vec<(T, T)> = candidates.iter().map(|&p| (p, v.eval_p(p))).collect();
    let v_min = v_at_candidates.iter().map(|c| c.1).fold(T::infinity(), T::min);
    let tol = T::lit(TIE_TOLERANCE) * (T::one() + v_min.abs());
    let tied: Vec<T> = v_at_candidates
        .iter()
        .filter(|c| c.1 - v_min <= tol)
        .map(|c| c.0)
        .collect();
    let p_star = tied.iter().fold(T::zero(), |acc, &p| acc + p) / T::from_usize_lossy(tied.len());
    let discriminant = (v.degree() == 4).then(|| {
        let (a2, a3, a4) = (v.coeff(2), v.coeff(3), v.coeff(4));
        T::lit(9.0) * a3 * a3 - T::lit(24.0) * a2 * a4
    });
    Ok(MinimaReport {
        local_minima,
        candidates,
        p_star,
        v_at_candidates,
        unique: tied.len() == 1,
        discriminant,
    })
}

/// Builds `V` for `spec` and selects `p_*`.
pub fn argmin_p<T: Real>(spec: &EvalSpec<T>) -> Result<MinimaReport<T>> {
    argmin_polynomial(&build_v(spec)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::evaluation::build_v_derivative;
    use std::f64::consts::PI;

    fn grid_argmin(v: &WPolynomial<f64>, n: usize) -> (f64, f64) {
        (0..=n)
            .map(|i| {
                let p = i as f64 / n as f64;
                (p, v.eval_p(p))
            })
            .fold((f64::NAN, f64::INFINITY), |best, c| if c.1 < best.1 { c } else { best })
    }

    fn spec(walk: WalkKind<f64>, f: FunctionSpec<f64>, n: u32) -> EvalSpec<f64> {
        EvalSpec::new(walk, f, n).unwrap()
    }

    const WALKS: [WalkKind<f64>; 3] = [
        WalkKind::Ctqw,
        WalkKind::Dtqw {
            r: std::f64::consts::FRAC_1_SQRT_2,
        },
        WalkKind::Rw,
    ];

    #[test]
    fn closed_form_n2() {
        for walk in WALKS {
            for &a in &[0.5, 1.0, PI, 4.0] {
                let p = minimize_closed_form_n2(&spec(walk, FunctionSpec::identity(a).unwrap(), 2)).unwrap();
                assert!(p.abs() < 1e-15);
                let p = minimize_closed_form_n2(&spec(walk, FunctionSpec::cosine(a).unwrap(), 2)).unwrap();
                let want = 0.5 - 3.0 * (a * a.sin() + a.cos() - 1.0) / (2.0 * a.powi(3));
                assert!((p - want).abs() < 1e-14);
            }
            let p = minimize_closed_form_n2(&spec(walk, FunctionSpec::cosine(2.0 * PI).unwrap(), 2)).unwrap();
            assert!((p - 0.5).abs() < 1e-14);
            assert!(minimize_closed_form_n2(&spec(walk, FunctionSpec::cosine(1.0).unwrap(), 4)).is_err());
        }
    }

    #[test]
    fn closed_form_lattice() {
        // <xf> = 0 + 1 + 4 + 9 = 14 for f(x) = x on 0..=3
        let p: f64 = minimize_closed_form_n2_discrete(&FunctionSpec::identity(3.0).unwrap(), 3).unwrap();
        assert!((p - (0.5 - 42.0 / 48.0)).abs() < 1e-15);
        let v = crate::evaluation::build_v_discrete_dtrw(&FunctionSpec::identity(3.0).unwrap(), 3).unwrap();
        let w = 1.0 - 2.0 * p;
        assert!(v.derivative().eval(w).abs() < 1e-12);
        // p is below zero, so the unit-interval rule falls back to an endpoint
        assert_eq!(argmin_polynomial(&v).unwrap().p_star, 0.0);

        let zero = FunctionSpec::polynomial(vec![0.0], 5.0).unwrap();
        assert_eq!(minimize_closed_form_n2_discrete(&zero, 5).unwrap(), 0.5);
        assert!(minimize_closed_form_n2_discrete(&zero, 1).is_err());
    }

    #[test]
    fn n4_cosine_interior_minima() {
        for walk in WALKS {
            let v = build_v(&spec(walk, FunctionSpec::cosine(2.0 * PI).unwrap(), 4)).unwrap();
            let m = find_local_minima(&v);
            assert_eq!(m.len(), 1, "{walk}");
            assert!(m[0] > 0.0 && m[0] < 0.5);
            let v = build_v(&spec(walk, FunctionSpec::cosine(PI).unwrap(), 4)).unwrap();
            let m = find_local_minima(&v);
            assert_eq!(m.len(), 1, "{walk}");
            assert!(m[0] > 0.5 && m[0] < 1.0);
        }
    }

    #[test]
    fn identity_has_boundary_minimum() {
        for walk in WALKS {
            for n in [2, 4] {
                let s = spec(walk, FunctionSpec::identity(1.5).unwrap(), n);
                let v = build_v(&s).unwrap();
                assert!(find_local_minima(&v).is_empty());
                let rep = argmin_p(&s).unwrap();
                assert_eq!(rep.p_star, 0.0);
                assert!(rep.unique);
            }
        }
    }

    #[test]
    fn cosine_n2_matches_formula_and_grid() {
        let a = PI;
        for walk in WALKS {
            let s = spec(walk, FunctionSpec::cosine(a).unwrap(), 2);
            let rep = argmin_p(&s).unwrap();
            let want = 0.5 + 3.0 / PI.powi(3);
            assert!((rep.p_star - want).abs() < 1e-10);
            assert_eq!(rep.local_minima.len(), 1);
            let (gp, gv) = grid_argmin(&build_v(&s).unwrap(), 100_000);
            assert!((gp - rep.p_star).abs() < 1e-4);
            assert!((gv - rep.v_star()).abs() <= 1e-8 * (1.0 + gv.abs()));
        }
    }

    #[test]
    fn discriminant_and_boundary_signs() {
        for walk in WALKS {
            let s = spec(walk, FunctionSpec::cosine(2.0 * PI).unwrap(), 4);
            let rep = argmin_p(&s).unwrap();
            assert!(rep.discriminant.unwrap() < 0.0);
            let d = build_v_derivative(&s).unwrap();
            assert!(d.eval(-1.0) < 0.0 && d.eval(0.0) < 0.0 && d.eval(1.0) > 0.0);
        }
    }

    #[test]
    fn ties_are_averaged() {
        // V(w) = w^2 has equal values at p = 0 and p = 1 and a minimum at p = 1/2
        let v = WPolynomial::new(vec![0.0, 0.0, 1.0]);
        let rep = argmin_polynomial(&v).unwrap();
        assert_eq!(rep.p_star, 0.5);
        assert!(rep.unique);
        // (w^2 - 1)^2: both endpoints are global minimizers, p = 1/2 is a local maximum
        let v = WPolynomial::new(vec![1.0, 0.0, -2.0, 0.0, 1.0]);
        let rep = argmin_polynomial(&v).unwrap();
        assert!(rep.local_minima.is_empty());
        assert!(!rep.unique);
        assert_eq!(rep.p_star, 0.5);
        assert_eq!(rep.discriminant, Some(48.0));
    }

    #[test]
    fn rejects_flat_or_concave() {
        assert!(argmin_polynomial(&WPolynomial::new(vec![1.0, 2.0])).is_err());
        assert!(argmin_polynomial(&WPolynomial::new(vec![1.0, 0.0, -1.0])).is_err());
    }
}
