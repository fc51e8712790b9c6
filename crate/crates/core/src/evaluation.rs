//! The evaluation function `V_a^(n)` as an exact polynomial in `w = 1 - 2p`.
//!
//! For the continuous walks, `V = sum_k C(n,k) (-1)^(n-k) int f^(n-k) M^(k) dx`
//! with each `M^(k)` expanded through [`moment_coefficients`]; the exact
//! combinatorial weight of every term is formed first and multiplied by its
//! (floating) bracket last.

pub use crate::wpoly::WPolynomial;

use crate::error::{domain, Error, Result};
use crate::inner_products::{Bracket, BracketTable, FunctionSpec};
use crate::measures::{moment_coefficients, WalkKind};
use crate::scalar::{binomial_exact, Exact, Real};

/// Highest even order supported.
pub const MAX_ORDER: u32 = 16;

/// Walk, graph and even order `n` (the interval is `[0, f.a]`).
#[derive(Debug, Clone, PartialEq)]
pub struct EvalSpec<T> {
    pub walk: WalkKind<T>,
    pub f: FunctionSpec<T>,
    pub n: u32,
}

impl<T: Real> EvalSpec<T> {
    pub fn new(walk: WalkKind<T>, f: FunctionSpec<T>, n: u32) -> Result<Self> {
        let spec = Self { walk, f, n };
        spec.validate()?;
        Ok(spec)
    }

    pub fn a(&self) -> T {
        self.f.a
    }

    pub fn validate(&self) -> Result<()> {
        self.walk.validate()?;
        self.f.validate()?;
        if self.n == 0 || self.n % 2 == 1 || self.n > MAX_ORDER {
            return Err(Error::InvalidOrder(self.n));
        }
        match self.walk {
            WalkKind::CtrwZ | WalkKind::DtrwZ if self.n != 2 => Err(Error::UnsupportedWalk {
                op: "evaluation beyond n = 2",
                walk: self.walk.to_string(),
            }),
            WalkKind::DtrwZ => lattice_end(self.a()).map(|_| ()),
            _ => Ok(()),
        }
    }
}

fn lattice_end<T: Real>(a: T) -> Result<u64> {
    if a.fract() != T::zero() || a < T::lit(2.0) {
        return Err(domain(format!("lattice model needs an integer a >= 2, got a={a}")));
    }
    a.to_u64().ok_or_else(|| domain("a out of range"))
}

/// `V` together with the brackets it was assembled from.
#[derive(Debug, Clone)]
pub struct Evaluation<T> {
    pub v: WPolynomial<T>,
    pub brackets: Vec<Bracket<T>>,
}

/// Builds `V` and records the brackets that went into it.
pub fn evaluate<T: Real>(spec: &EvalSpec<T>) -> Result<Evaluation<T>> {
    spec.validate()?;
    let (v, table) = match spec.walk {
        WalkKind::DtrwZ => {
            let a = lattice_end(spec.a())?;
            let mut table = BracketTable::lattice(spec.f.clone(), a);
            (discrete_dtrw_quadratic(&mut table, a)?, table)
        }
        // the lattice CTRW shares its first three moments with the Gaussian walk
        WalkKind::CtrwZ => continuous(&WalkKind::Rw, spec)?,
        _ => continuous(&spec.walk, spec)?,
    };
    Ok(Evaluation {
        v,
        brackets: table.entries().cloned().collect(),
    })
}

fn continuous<T: Real>(walk: &WalkKind<T>, spec: &EvalSpec<T>) -> Result<(WPolynomial<T>, BracketTable<T>)> {
    let n = spec.n;
    let mut table = BracketTable::continuous(spec.f.clone());
    let mut coeffs = vec![T::zero(); n as usize + 1];
    for k in 0..=n {
        let beta = n - k;
        let sign = if beta.is_multiple_of(2) {
            Exact::from_integer(1)
        } else {
            Exact::from_integer(-1)
        };
        let outer = sign * binomial_exact(n, k);
        for term in moment_coefficients(walk, k)?.terms {
            let weight = outer * term.weight;
            let bracket = table.get(term.x_exp, beta)?;
            coeffs[term.w_exp as usize] += T::from_exact(weight) * term.scale * bracket;
        }
    }
    Ok((WPolynomial::new(coeffs), table))
}

fn discrete_dtrw_quadratic<T: Real>(table: &mut BracketTable<T>, a: u64) -> Result<WPolynomial<T>> {
    let af = T::lit(a as f64);
    let f2 = table.get(Exact::from_integer(0), 2)?;
    let xf = table.get(Exact::from_integer(1), 1)?;
    let base = af * (af + T::one()) / T::lit(6.0);
    Ok(WPolynomial::new(vec![
        f2 + base * T::lit(3.0),
        -T::lit(2.0) * xf,
        base * T::lit(2.0) * (af - T::one()),
    ]))
}

/// `V_a^(n)` as a polynomial in `w`.
pub fn build_v<T: Real>(spec: &EvalSpec<T>) -> Result<WPolynomial<T>> {
    evaluate(spec).map(|e| e.v)
}

/// `dV/dw` as a polynomial in `w`; use [`WPolynomial::d_dp`] on `build_v` for `dV/dp`.
pub fn build_v_derivative<T: Real>(spec: &EvalSpec<T>) -> Result<WPolynomial<T>> {
    build_v(spec).map(|v| v.derivative())
}

/// The lattice DTRW quadratic with lattice-sum brackets over `x = 0..=a`.
pub fn build_v_discrete_dtrw<T: Real>(f: &FunctionSpec<T>, a: u64) -> Result<WPolynomial<T>> {
    if a < 2 {
        return Err(domain(format!("lattice model needs a >= 2, got {a}")));
    }
    let mut table = BracketTable::lattice(f.clone(), a);
    discrete_dtrw_quadratic(&mut table, a)
}
