//! Bracket functionals `<x^alpha f^beta>` of a function graph on `[0, a]`.
//!
//! Continuous brackets integrate over `[0, a]`; lattice brackets sum over the
//! integer points `0..=a`, including `x = 0`.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::quadrature::{integrate_with_breaks, QuadConfig};
use crate::scalar::{binomial, Exact, Real};

/// Largest integer `alpha` for which the cosine power-reduction closed form is used.
const COSINE_ANALYTIC_MAX_ALPHA: i64 = 8;
/// Largest degree of `f^beta` expanded symbolically for polynomial graphs.
const POLYNOMIAL_ANALYTIC_MAX_DEGREE: usize = 40;

#[derive(Debug, Clone, PartialEq)]
pub enum FunctionForm<T> {
    Identity,
    Cosine,
    /// Coefficients in increasing powers of `x`.
    Polynomial(Vec<T>),
    /// Table of `(x, y)` points, interpolated piecewise linearly.
    Sampled(Vec<(T, T)>),
}

/// A function graph `y = f(x)` on `[0, a]`.
#[derive(Debug, Clone, PartialEq)]
pub struct FunctionSpec<T> {
    pub form: FunctionForm<T>,
    pub a: T,
}

impl<T: Real> FunctionSpec<T> {
    pub fn identity(a: T) -> Result<Self> {
        Self::new(FunctionForm::Identity, a)
    }

    pub fn cosine(a: T) -> Result<Self> {
        Self::new(FunctionForm::Cosine, a)
    }

    pub fn polynomial(coeffs: Vec<T>, a: T) -> Result<Self> {
        Self::new(FunctionForm::Polynomial(coeffs), a)
    }

    /// Sampled graph; the right endpoint is the last abscissa.
    pub fn sampled(points: Vec<(T, T)>) -> Result<Self> {
        let a = points.last().map(|p| p.0).unwrap_or_else(T::zero);
        Self::new(FunctionForm::Sampled(points), a)
    }

    pub fn new(form: FunctionForm<T>, a: T) -> Result<Self> {
        let spec = Self { form, a };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.a > T::zero() && self.a.is_finite()) {
            return Err(domain(format!("right endpoint a={} must be positive", self.a)));
        }
        match &self.form {
            FunctionForm::Polynomial(c) if c.is_empty() => Err(Error::InvalidFunction(
                "polynomial needs at least one coefficient".into(),
            )),
            FunctionForm::Sampled(pts) => {
                if pts.len() < 3 {
                    return Err(Error::InvalidFunction(format!(
                        "sampled function needs at least 3 points, got {}",
                        pts.len()
                    )));
                }
                if pts[0].0 != T::zero() {
                    return Err(Error::InvalidFunction("first sample must be at x = 0".into()));
                }
                if pts[pts.len() - 1].0 != self.a {
                    return Err(Error::InvalidFunction("last sample must be at x = a".into()));
                }
                if pts.windows(2).any(|w| !(w[1].0 > w[0].0)) {
                    return Err(Error::InvalidFunction(
                        "sample abscissae must be strictly increasing".into(),
                    ));
                }
                if pts.iter().any(|p| !p.1.is_finite()) {
                    return Err(Error::InvalidFunction("sample values must be finite".into()));
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    /// Same graph on a different interval (sampled graphs cannot be re-ranged).
    pub fn with_a(&self, a: T) -> Result<Self> {
        if let FunctionForm::Sampled(_) = self.form {
            if a != self.a {
                return Err(Error::InvalidFunction(
                    "a sampled graph's interval is fixed by its table".into(),
                ));
            }
        }
        Self::new(self.form.clone(), a)
    }

    pub fn eval(&self, x: T) -> T {
        match &self.form {
            FunctionForm::Identity => x,
            FunctionForm::Cosine => x.cos(),
            FunctionForm::Polynomial(c) => c.iter().rev().fold(T::zero(), |acc, &ci| acc * x + ci),
            FunctionForm::Sampled(pts) => interpolate(pts, x),
        }
    }

    /// `f(a)`; for tables this is the last sample value.
    pub fn value_at_end(&self) -> T {
        match &self.form {
            FunctionForm::Sampled(pts) => pts[pts.len() - 1].1,
            _ => self.eval(self.a),
        }
    }
}

fn interpolate<T: Real>(pts: &[(T, T)], x: T) -> T {
    let i = match pts.binary_search_by(|p| p.0.partial_cmp(&x).expect("finite abscissa")) {
        Ok(i) => return pts[i].1,
        Err(i) => i.clamp(1, pts.len() - 1),
    };
    let (x0, y0) = pts[i - 1];
    let (x1, y1) = pts[i];
    y0 + (y1 - y0) * (x - x0) / (x1 - x0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BracketMethod {
    Analytic,
    Quadrature,
    DiscreteSum,
}

/// `<x^alpha f^beta>` together with how it was obtained.
#[derive(Debug, Clone, PartialEq)]
pub struct Bracket<T> {
    pub alpha: Exact,
    pub beta: u32,
    pub value: T,
    pub method: BracketMethod,
}

/// `int_0^a x^alpha f(x)^beta dx`.
pub fn bracket<T: Real>(f: &FunctionSpec<T>, alpha: Exact, beta: u32) -> Result<Bracket<T>> {
    bracket_with(f, alpha, beta, &QuadConfig::default())
}

pub fn bracket_with<T: Real>(f: &FunctionSpec<T>, alpha: Exact, beta: u32, cfg: &QuadConfig<T>) -> Result<Bracket<T>> {
    if alpha < Exact::from_integer(0) {
        return Err(domain(format!("bracket exponent alpha={alpha} must be nonnegative")));
    }
    f.validate()?;
    let a = f.a;
    let analytic = |value| {
        Ok(Bracket {
            alpha,
            beta,
            value,
            method: BracketMethod::Analytic,
        })
    };
    if beta == 0 {
        return analytic(power_integral(a, alpha));
    }
    match &f.form {
        FunctionForm::Identity => analytic(power_integral(a, alpha + Exact::from_integer(beta as i64))),
        FunctionForm::Polynomial(c) if (c.len() - 1) * beta as usize <= POLYNOMIAL_ANALYTIC_MAX_DEGREE => {
            let power = poly_pow(c, beta);
            let value = power.iter().enumerate().fold(T::zero(), |acc, (j, &cj)| {
                acc + cj * power_integral(a, alpha + Exact::from_integer(j as i64))
            });
            analytic(value)
        }
        FunctionForm::Cosine if alpha.is_integer() && alpha.to_integer() <= COSINE_ANALYTIC_MAX_ALPHA => {
            analytic(cosine_power_integral(a, alpha.to_integer() as u32, beta))
        }
        FunctionForm::Sampled(pts) => {
            if alpha.is_integer() {
                let n = alpha.to_integer() as u32;
                let value = pts
                    .windows(2)
                    .fold(T::zero(), |acc, s| acc + linear_segment_integral(s[0], s[1], n, beta));
                analytic(value)
            } else {
                let xs: Vec<T> = pts.iter().map(|p| p.0).collect();
                let r = integrate_with_breaks(|x| x.pow_exact(alpha) * f.eval(x).powi(beta as i32), &xs, cfg)?;
                Ok(Bracket {
                    alpha,
                    beta,
                    value: r.value,
                    method: BracketMethod::Quadrature,
                })
            }
        }
        _ => quadrature_bracket(f, alpha, beta, cfg),
    }
}

/// Numerical bracket regardless of the form (used as an oracle for the closed forms).
pub fn quadrature_bracket<T: Real>(
    f: &FunctionSpec<T>,
    alpha: Exact,
    beta: u32,
    cfg: &QuadConfig<T>,
) -> Result<Bracket<T>> {
    let r = match &f.form {
        FunctionForm::Sampled(pts) => {
            let xs: Vec<T> = pts.iter().map(|p| p.0).collect();
            integrate_with_breaks(|x| x.pow_exact(alpha) * f.eval(x).powi(beta as i32), &xs, cfg)?
        }
        _ => {
            // split the oscillatory cosine powers into roughly one panel per unit length
            let panels = f.a.to_f64().unwrap_or(1.0).ceil().max(1.0) as usize;
            let xs: Vec<T> = (0..=panels)
                .map(|i| f.a * T::from_usize_lossy(i) / T::from_usize_lossy(panels))
                .collect();
            integrate_with_breaks(|x| x.pow_exact(alpha) * f.eval(x).powi(beta as i32), &xs, cfg)?
        }
    };
    Ok(Bracket {
        alpha,
        beta,
        value: r.value,
        method: BracketMethod::Quadrature,
    })
}

/// `sum_{x=0}^{a} x^alpha f(x)^beta` over the integer points.
pub fn bracket_discrete<T: Real>(f: &FunctionSpec<T>, alpha: u32, beta: u32, a: u64) -> Result<Bracket<T>> {
    if a < 1 {
        return Err(domain("lattice bracket needs a >= 1"));
    }
    let value = (0..=a).fold(T::zero(), |acc, x| {
        let xt = T::lit(x as f64);
        acc + xt.powi(alpha as i32) * f.eval(xt).powi(beta as i32)
    });
    Ok(Bracket {
        alpha: Exact::from_integer(alpha as i64),
        beta,
        value,
        method: BracketMethod::DiscreteSum,
    })
}

fn power_integral<T: Real>(a: T, alpha: Exact) -> T {
    let e = alpha + Exact::from_integer(1);
    a.pow_exact(e) / T::from_exact(e)
}

fn poly_pow<T: Real>(c: &[T], beta: u32) -> Vec<T> {
    let mut acc = vec![T::one()];
    for _ in 0..beta {
        let mut next = vec![T::zero(); acc.len() + c.len() - 1];
        for (i, &ai) in acc.iter().enumerate() {
            for (j, &cj) in c.iter().enumerate() {
                next[i + j] += ai * cj;
            }
        }
        acc = next;
    }
    acc
}

// cos^beta x = 2^-beta sum_j C(beta, j) cos((beta - 2j) x)
fn cosine_power_integral<T: Real>(a: T, n: u32, beta: u32) -> T {
    let sum = (0..=beta).fold(T::zero(), |acc, j| {
        let m = (beta as i64 - 2 * j as i64).unsigned_abs();
        acc + T::lit(binomial(beta, j) as f64) * x_pow_cos_integral(a, n, T::lit(m as f64))
    });
    sum / T::lit(2.0).powi(beta as i32)
}

/// `int_0^a x^n cos(m x) dx` for `m >= 0`.
fn x_pow_cos_integral<T: Real>(a: T, n: u32, m: T) -> T {
    if m == T::zero() {
        return a.powi(n as i32 + 1) / T::lit((n + 1) as f64);
    }
    if m * a < T::one() {
        // alternating Taylor series, short when m a is small
        let ma2 = (m * a) * (m * a);
        let mut term = a.powi(n as i32 + 1);
        let mut sum = term / T::lit((n + 1) as f64);
        for j in 1..60u32 {
            term = -term * ma2 / T::lit(((2 * j - 1) * (2 * j)) as f64);
            let t = term / T::lit((n + 2 * j + 1) as f64);
            sum += t;
            if t.abs() <= T::epsilon() * sum.abs() {
                break;
            }
        }
        return sum;
    }
    let (s, c) = (m * a).sin_cos();
    let mut cos_int = s / m;
    let mut sin_int = (T::one() - c) / m;
    let mut an = T::one();
    for k in 1..=n {
        an *= a;
        let kf = T::lit(k as f64);
        let next_cos = an * s / m - kf / m * sin_int;
        let next_sin = -an * c / m + kf / m * cos_int;
        cos_int = next_cos;
        sin_int = next_sin;
    }
    cos_int
}

// int over one segment of x^n (y0 + slope (x - x0))^beta, expanded in t = x - x0
fn linear_segment_integral<T: Real>(p0: (T, T), p1: (T, T), n: u32, beta: u32) -> T {
    let (x0, y0) = p0;
    let h = p1.0 - x0;
    let slope = (p1.1 - y0) / h;
    let xs: Vec<T> = (0..=n)
        .map(|i| T::lit(binomial(n, i) as f64) * x0.powi((n - i) as i32))
        .collect();
    let ys: Vec<T> = (0..=beta)
        .map(|j| T::lit(binomial(beta, j) as f64) * y0.powi((beta - j) as i32) * slope.powi(j as i32))
        .collect();
    let mut total = T::zero();
    for (i, &xi) in xs.iter().enumerate() {
        for (j, &yj) in ys.iter().enumerate() {
            let e = (i + j + 1) as i32;
            total += xi * yj * h.powi(e) / T::lit(e as f64);
        }
    }
    total
}

/// Memoized brackets of one graph, keyed by `(alpha, beta)` in sorted order.
#[derive(Debug, Clone)]
pub struct BracketTable<T> {
    f: FunctionSpec<T>,
    lattice_end: Option<u64>,
    entries: BTreeMap<(Exact, u32), Bracket<T>>,
}

impl<T: Real> BracketTable<T> {
    pub fn continuous(f: FunctionSpec<T>) -> Self {
        Self {
            f,
            lattice_end: None,
            entries: BTreeMap::new(),
        }
    }

    pub fn lattice(f: FunctionSpec<T>, a: u64) -> Self {
        Self {
            f,
            lattice_end: Some(a),
            entries: BTreeMap::new(),
        }
    }

    pub fn function(&self) -> &FunctionSpec<T> {
        &self.f
    }

    pub fn get(&mut self, alpha: Exact, beta: u32) -> Result<T> {
        if let Some(b) = self.entries.get(&(alpha, beta)) {
            return Ok(b.value);
        }
        let b = match self.lattice_end {
            None => bracket(&self.f, alpha, beta)?,
            Some(a) => {
                if !alpha.is_integer() || alpha < Exact::from_integer(0) {
                    return Err(domain("lattice brackets need a nonnegative integer alpha"));
                }
                bracket_discrete(&self.f, alpha.to_integer() as u32, beta, a)?
            }
        };
        let v = b.value;
        self.entries.insert((alpha, beta), b);
        Ok(v)
    }

    pub fn entries(&self) -> impl Iterator<Item = &Bracket<T>> {
        self.entries.values()
    }
}
