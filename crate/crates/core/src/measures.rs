//! Drift-shifted limit measures `mu_x(y, p)` and their moments.
//!
//! Continuous family (CTQW arcsine, DTQW Konno, RW Gaussian) is defined for
//! any real drift `p`; the lattice walks (`CtrwZ`, `DtrwZ`) need `p` in `(0, 1)`.
//! Every measure has mean `(1 - 2p) x`.

use std::fmt;

use crate::error::{domain, Error, Result};
use crate::scalar::{binomial, binomial_exact, inv_pow2, Exact, Real};
use crate::special::bessel_i_scaled_seq;

/// Largest moment order served by [`moment_coefficients`].
pub const MAX_MOMENT_ORDER: u32 = 20;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WalkKind<T> {
    /// Continuous-time quantum walk (arcsine limit).
    Ctqw,
    /// Discrete-time quantum walk with coin parameter `r` in `(0, 1)` (Konno limit).
    Dtqw { r: T },
    /// Random walk (Gaussian limit).
    Rw,
    /// Continuous-time random walk on the integers.
    CtrwZ,
    /// Discrete-time random walk on the integers.
    DtrwZ,
}

impl<T: Real> WalkKind<T> {
    pub fn dtqw(r: T) -> Result<Self> {
        let w = WalkKind::Dtqw { r };
        w.validate()?;
        Ok(w)
    }

    /// The Hadamard walk, `r = 1/sqrt(2)`.
    pub fn hadamard() -> Self {
        WalkKind::Dtqw { r: T::FRAC_1_SQRT_2() }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            WalkKind::Dtqw { r } if !(r > T::zero() && r < T::one()) => {
                Err(domain(format!("DTQW coin parameter r={r} must lie in (0, 1)")))
            }
            _ => Ok(()),
        }
    }

    pub fn is_continuous(&self) -> bool {
        matches!(self, WalkKind::Ctqw | WalkKind::Dtqw { .. } | WalkKind::Rw)
    }

    pub fn is_lattice(&self) -> bool {
        !self.is_continuous()
    }

    /// Short lowercase name as used on the command line.
    pub fn name(&self) -> &'static str {
        match self {
            WalkKind::Ctqw => "ctqw",
            WalkKind::Dtqw { .. } => "dtqw",
            WalkKind::Rw => "rw",
            WalkKind::CtrwZ => "ctrw-z",
            WalkKind::DtrwZ => "dtrw-z",
        }
    }
}

impl<T: Real> fmt::Display for WalkKind<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WalkKind::Dtqw { r } => write!(f, "dtqw(r={r})"),
            other => f.write_str(other.name()),
        }
    }
}

/// Drift parameter `p` together with its signed form `w = 1 - 2p`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DriftParam<T> {
    pub p: T,
}

impl<T: Real> DriftParam<T> {
    pub fn new(p: T) -> Self {
        Self { p }
    }

    pub fn from_w(w: T) -> Self {
        Self {
            p: (T::one() - w) * T::lit(0.5),
        }
    }

    pub fn w(&self) -> T {
        T::one() - T::lit(2.0) * self.p
    }

    /// Mean of `mu_x(., p)`, `c = (1 - 2p) x`.
    pub fn c_at(&self, x: T) -> T {
        self.w() * x
    }
}

/// `p` for a given `w`.
pub fn p_of_w<T: Real>(w: T) -> T {
    DriftParam::from_w(w).p
}

/// `w` for a given `p`.
pub fn w_of_p<T: Real>(p: T) -> T {
    DriftParam::new(p).w()
}

/// One term `weight * scale * w^w_exp * x^x_exp` of a moment expansion.
///
/// `weight` is the exact combinatorial factor; `scale` carries the
/// walk-dependent irrational part (the Konno moments for DTQW, `1` otherwise).
#[derive(Debug, Clone, PartialEq)]
pub struct MomentTerm<T> {
    pub weight: Exact,
    pub scale: T,
    pub w_exp: u32,
    pub x_exp: Exact,
}

impl<T: Real> MomentTerm<T> {
    pub fn coef(&self) -> T {
        T::from_exact(self.weight) * self.scale
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MomentCoefficients<T> {
    pub walk: WalkKind<T>,
    pub k: u32,
    pub terms: Vec<MomentTerm<T>>,
}

impl<T: Real> MomentCoefficients<T> {
    pub fn eval(&self, x: T, p: T) -> T {
        let w = w_of_p(p);
        self.terms.iter().fold(T::zero(), |acc, t| {
            acc + t.coef() * w.powi(t.w_exp as i32) * x.pow_exact(t.x_exp)
        })
    }
}

/// Even moments of the standard Konno density on `(-r, r)`,
/// `A_r(l) = 1 - sqrt(1 - r^2) sum_{s < l/2} C(2s, s) (r^2/4)^s`; zero for odd `l`.
pub fn konno_moment<T: Real>(r: T, l: u32) -> T {
    if l % 2 == 1 {
        return T::zero();
    }
    let q = r * r * T::lit(0.25);
    let mut sum = T::zero();
    let mut qs = T::one();
    for s in 0..l / 2 {
        sum += T::lit(binomial(2 * s, s) as f64) * qs;
        qs *= q;
    }
    T::one() - (T::one() - r * r).sqrt() * sum
}

/// Moments of the standard arcsine law on `(-1, 1)`: `C(l, l/2) / 2^l` for even `l`.
pub fn arcsine_moment(l: u32) -> Exact {
    if l % 2 == 1 {
        return Exact::from_integer(0);
    }
    binomial_exact(l, l / 2) * inv_pow2(l)
}

/// Moments of the standard normal: `(l - 1)!!` for even `l`.
pub fn gaussian_moment(l: u32) -> Exact {
    if l % 2 == 1 {
        return Exact::from_integer(0);
    }
    Exact::from_integer((1..l as i64).step_by(2).product())
}

fn check_x<T: Real>(x: T) -> Result<()> {
    if x > T::zero() && x.is_finite() {
        Ok(())
    } else {
        Err(domain(format!("location x={x} must be positive")))
    }
}

fn check_lattice_p<T: Real>(walk: &WalkKind<T>, p: T) -> Result<()> {
    if walk.is_lattice() && !(p > T::zero() && p < T::one()) {
        return Err(domain(format!("{walk} requires p in (0, 1), got {p}")));
    }
    Ok(())
}

fn lattice_time<T: Real>(x: T) -> Result<u64> {
    if x.fract() != T::zero() {
        return Err(domain(format!("dtrw-z requires an integer time, got x={x}")));
    }
    x.to_u64()
        .ok_or_else(|| domain(format!("dtrw-z time x={x} out of range")))
}

/// Density (or point mass for the lattice walks) `mu_x(y, p)`.
pub fn density<T: Real>(walk: &WalkKind<T>, x: T, p: T, y: T) -> Result<T> {
    walk.validate()?;
    check_x(x)?;
    check_lattice_p(walk, p)?;
    let c = w_of_p(p) * x;
    let u = (y - c) / x;
    let v = match *walk {
        WalkKind::Ctqw => {
            if u.abs() < T::one() {
                T::one() / (T::PI() * x * (T::one() - u * u).sqrt())
            } else {
                T::zero()
            }
        }
        WalkKind::Dtqw { r } => {
            if u.abs() < r {
                (T::one() - r * r).sqrt() / (T::PI() * x * (T::one() - u * u) * (r * r - u * u).sqrt())
            } else {
                T::zero()
            }
        }
        WalkKind::Rw => {
            let d = y - c;
            (-(d * d) / (T::lit(2.0) * x)).exp() / (T::lit(2.0) * T::PI() * x).sqrt()
        }
        WalkKind::CtrwZ => {
            if y.fract() != T::zero() {
                return Ok(T::zero());
            }
            let n = y.to_i64().ok_or_else(|| domain("lattice point out of range"))?;
            ctrw_mass(x, p, n)
        }
        WalkKind::DtrwZ => {
            let t = lattice_time(x)?;
            if y.fract() != T::zero() {
                return Ok(T::zero());
            }
            let n = y.to_i64().ok_or_else(|| domain("lattice point out of range"))?;
            dtrw_mass(t, p, n)
        }
    };
    Ok(v)
}

fn ctrw_mass<T: Real>(x: T, p: T, y: i64) -> T {
    let z = T::lit(2.0) * (p * (T::one() - p)).sqrt() * x;
    let ie = bessel_i_scaled_seq(y.unsigned_abs() as usize, z);
    ctrw_from_scaled(x, p, z, y, ie[y.unsigned_abs() as usize])
}

// e^{-x} ((1-p)/p)^{y/2} I_y(z) with I_y(z) = e^z * scaled
fn ctrw_from_scaled<T: Real>(x: T, p: T, z: T, y: i64, scaled: T) -> T {
    if scaled == T::zero() {
        return T::zero();
    }
    let log_ratio = ((T::one() - p) / p).ln();
    let e = z - x + T::lit(y as f64) * T::lit(0.5) * log_ratio + scaled.ln();
    e.exp()
}

fn dtrw_mass<T: Real>(t: u64, p: T, y: i64) -> T {
    if y.unsigned_abs() > t || (t as i64 - y) % 2 != 0 {
        return T::zero();
    }
    let left = ((t as i64 - y) / 2) as u64;
    let right = t - left;
    let mut log_c = T::zero();
    for i in 1..=left {
        log_c += (T::lit((right + i) as f64) / T::lit(i as f64)).ln();
    }
    (log_c + T::lit(left as f64) * p.ln() + T::lit(right as f64) * (T::one() - p).ln()).exp()
}

/// Half-width beyond the mean that holds all but ~e^-60 of the CTRW mass
/// (Bernstein bound for a compound Poisson walk with unit jumps).
fn ctrw_half_width<T: Real>(x: T) -> i64 {
    let xf = x.to_f64().unwrap_or(f64::MAX);
    (20.0 + (400.0 + 120.0 * xf).sqrt()).ceil() as i64
}

/// Point masses of the CTRW on the integers over a truncated support.
/// Returns `(first_position, masses)`; the omitted tails total below `1e-12`.
pub fn ctrw_pmf<T: Real>(x: T, p: T) -> Result<(i64, Vec<T>)> {
    check_x(x)?;
    check_lattice_p(&WalkKind::CtrwZ, p)?;
    let mean = (w_of_p(p) * x).to_f64().unwrap_or(0.0).round() as i64;
    let h = ctrw_half_width(x);
    let lo = mean - h;
    let hi = mean + h;
    let max_order = lo.unsigned_abs().max(hi.unsigned_abs()) as usize;
    let z = T::lit(2.0) * (p * (T::one() - p)).sqrt() * x;
    let ie = bessel_i_scaled_seq(max_order, z);
    let masses = (lo..=hi)
        .map(|y| ctrw_from_scaled(x, p, z, y, ie[y.unsigned_abs() as usize]))
        .collect();
    Ok((lo, masses))
}

/// Exact-support point masses of the DTRW at integer time `t`, positions `-t..=t`.
pub fn dtrw_pmf<T: Real>(t: u64, p: T) -> Result<(i64, Vec<T>)> {
    check_lattice_p(&WalkKind::DtrwZ, p)?;
    let lo = -(t as i64);
    Ok((lo, (lo..=t as i64).map(|y| dtrw_mass(t, p, y)).collect()))
}

/// Closed-form `k`-th moment `M^(k)(x, p)`.
pub fn moment<T: Real>(walk: &WalkKind<T>, k: u32, x: T, p: T) -> Result<T> {
    walk.validate()?;
    check_x(x)?;
    check_lattice_p(walk, p)?;
    let w = w_of_p(p);
    match walk {
        WalkKind::Ctqw | WalkKind::Dtqw { .. } | WalkKind::Rw => Ok(moment_coefficients(walk, k)?.eval(x, p)),
        WalkKind::CtrwZ => match k {
            0 => Ok(T::one()),
            1 => Ok(w * x),
            2 => Ok(x + w * w * x * x),
            _ => {
                // no closed form beyond k = 2; sum the truncated series
                let (lo, masses) = ctrw_pmf(x, p)?;
                Ok(lattice_moment(lo, &masses, k))
            }
        },
        WalkKind::DtrwZ => {
            let t = lattice_time(x)?;
            match k {
                0 => Ok(T::one()),
                1 => Ok(w * x),
                2 => Ok(T::lit(4.0) * p * (T::one() - p) * x + w * w * x * x),
                _ => Ok(dtrw_step_moments(t, w, k)),
            }
        }
    }
}

/// Sum of `y^k` against lattice masses starting at position `lo`.
pub fn lattice_moment<T: Real>(lo: i64, masses: &[T], k: u32) -> T {
    masses.iter().enumerate().fold(T::zero(), |acc, (i, &m)| {
        acc + m * T::lit((lo + i as i64) as f64).powi(k as i32)
    })
}

// Raw moments of a sum of t iid +-1 steps with mean w, built one step at a
// time: E[(S + s)^k] = sum_j C(k, j) E[S^j] E[s^{k-j}], E[s^i] = 1 or w.
fn dtrw_step_moments<T: Real>(t: u64, w: T, k: u32) -> T {
    let k = k as usize;
    let step: Vec<T> = (0..=k).map(|i| if i % 2 == 0 { T::one() } else { w }).collect();
    let mut m = vec![T::zero(); k + 1];
    m[0] = T::one();
    for _ in 0..t {
        let prev = m.clone();
        for (order, slot) in m.iter_mut().enumerate().skip(1) {
            *slot = (0..=order).fold(T::zero(), |acc, j| {
                acc + T::lit(binomial(order as u32, j as u32) as f64) * prev[j] * step[order - j]
            });
        }
    }
    m[k]
}

/// Symbolic expansion of `M^(k)` as a sum of `coef * w^e * x^g` (continuous walks only).
pub fn moment_coefficients<T: Real>(walk: &WalkKind<T>, k: u32) -> Result<MomentCoefficients<T>> {
    walk.validate()?;
    if k > MAX_MOMENT_ORDER {
        return Err(domain(format!(
            "moment order {k} exceeds table limit {MAX_MOMENT_ORDER}"
        )));
    }
    let kk = Exact::from_integer(k as i64);
    let terms = (0..=k).step_by(2).map(|l| {
        let (weight, scale, x_exp) = match *walk {
            WalkKind::Ctqw => (binomial_exact(k, l) * arcsine_moment(l), T::one(), kk),
            WalkKind::Dtqw { r } => (binomial_exact(k, l), konno_moment(r, l), kk),
            WalkKind::Rw => (
                binomial_exact(k, l) * gaussian_moment(l),
                T::one(),
                kk - Exact::new(l as i64, 2),
            ),
            _ => unreachable!(),
        };
        MomentTerm {
            weight,
            scale,
            w_exp: k - l,
            x_exp,
        }
    });
    match walk {
        WalkKind::CtrwZ | WalkKind::DtrwZ => Err(Error::UnsupportedWalk {
            op: "moment_coefficients",
            walk: walk.to_string(),
        }),
        _ => Ok(MomentCoefficients {
            walk: *walk,
            k,
            terms: terms.collect(),
        }),
    }
}

/// Variance of `mu_x(., p)`, independent of `p` for the continuous walks.
pub fn variance<T: Real>(walk: &WalkKind<T>, x: T) -> Result<T> {
    walk.validate()?;
    check_x(x)?;
    match *walk {
        WalkKind::Ctqw => Ok(x * x * T::lit(0.5)),
        WalkKind::Dtqw { r } => Ok(konno_moment(r, 2) * x * x),
        WalkKind::Rw => Ok(x),
        _ => Err(Error::UnsupportedWalk {
            op: "variance",
            walk: walk.to_string(),
        }),
    }
}
