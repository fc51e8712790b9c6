//! Brute-force checks that share no code path with the closed forms:
//! singularity-free quadrature of measure integrals, exact walk dynamics on
//! the integers, and weak-limit diagnostics.

use std::io::Write;
use std::ops::{Add, Mul, RangeInclusive, Sub};

use num_complex::Complex64;
use num_traits::{One, Zero};
use serde::Serialize;
use statrs::distribution::{ContinuousCDF, Normal};

use crate::error::{domain, Error, Result};
use crate::evaluation::EvalSpec;
use crate::inner_products::FunctionSpec;
use crate::measures::{density, lattice_moment, w_of_p, WalkKind};
use crate::quadrature::{integrate, integrate_with_breaks, QuadConfig};
use crate::scalar::Real;

/// Largest time accepted by [`simulate_hadamard_dtqw`] (support is `2t + 1` sites).
pub const MAX_HADAMARD_TIME: u64 = 1 << 22;

/// Finite-support distribution on consecutive integers starting at `support_offset`.
#[derive(Debug, Clone, PartialEq)]
pub struct DistributionOnZ<N> {
    pub support_offset: i64,
    pub masses: Vec<N>,
}

impl<N> DistributionOnZ<N> {
    pub fn positions(&self) -> impl Iterator<Item = i64> + '_ {
        (0..self.masses.len() as i64).map(move |i| self.support_offset + i)
    }

    pub fn mass_at(&self, y: i64) -> Option<&N> {
        let i = y - self.support_offset;
        if i < 0 {
            None
        } else {
            self.masses.get(i as usize)
        }
    }
}

impl<T: Real> DistributionOnZ<T> {
    pub fn total(&self) -> T {
        self.masses.iter().fold(T::zero(), |acc, &m| acc + m)
    }

    pub fn moment(&self, k: u32) -> T {
        lattice_moment(self.support_offset, &self.masses, k)
    }

    /// Writes `position,mass` rows with a header line.
    pub fn write_csv<W: Write>(&self, out: W) -> std::io::Result<()> {
        let mut wtr = csv::Writer::from_writer(out);
        wtr.write_record(["position", "mass"])?;
        for (y, m) in self.positions().zip(&self.masses) {
            wtr.write_record([y.to_string(), m.to_string()])?;
        }
        wtr.flush()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LimitTarget {
    Arcsine,
    Konno { r: f64 },
    Gaussian,
}

impl LimitTarget {
    pub fn cdf(&self, y: f64) -> f64 {
        match *self {
            LimitTarget::Arcsine => {
                if y <= -1.0 {
                    0.0
                } else if y >= 1.0 {
                    1.0
                } else {
                    0.5 + y.asin() / std::f64::consts::PI
                }
            }
            LimitTarget::Konno { r } => {
                if y <= -r {
                    0.0
                } else if y >= r {
                    1.0
                } else {
                    let s = (1.0 - r * r).sqrt();
                    0.5 + (s * y / (r * r - y * y).sqrt()).atan() / std::f64::consts::PI
                }
            }
            LimitTarget::Gaussian => Normal::standard().cdf(y),
        }
    }
}

/// Kolmogorov–Smirnov distance between a rescaled lattice law and a limit law.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KsReport {
    pub statistic: f64,
    pub sample_or_time_scale: f64,
    pub target: LimitTarget,
}

/// `sup_y |P(X / scale <= y) - F(y)|` over the jump points of the lattice law.
pub fn ks_distance(dist: &DistributionOnZ<f64>, scale: f64, target: LimitTarget) -> KsReport {
    let mut below = 0.0;
    let mut stat: f64 = 0.0;
    for (y, &m) in dist.positions().zip(&dist.masses) {
        if m == 0.0 {
            continue;
        }
        let f = target.cdf(y as f64 / scale);
        stat = stat.max((below - f).abs());
        below += m;
        stat = stat.max((below - f).abs());
    }
    KsReport {
        statistic: stat,
        sample_or_time_scale: scale,
        target,
    }
}

fn oracle_cfg<T: Real>() -> QuadConfig<T> {
    QuadConfig::with_rel_tol(T::lit(1e-12))
}

/// Integrates `g(y)` against `mu_x(., p)` for a continuous walk, using
/// `y = c + x sin(theta)` (arcsine), `y = c + x r sin(theta)` (Konno) or
/// `y = c + sqrt(x) u` (Gaussian) so the integrands are smooth.
fn expect_continuous<T, G>(walk: &WalkKind<T>, x: T, p: T, g: G, cfg: &QuadConfig<T>) -> Result<T>
where
    T: Real,
    G: Fn(T) -> T,
{
    let c = w_of_p(p) * x;
    let half_pi = T::FRAC_PI_2();
    match *walk {
        WalkKind::Ctqw => {
            let r = integrate(|th: T| g(c + x * th.sin()), -half_pi, half_pi, cfg)?;
            Ok(r.value / T::PI())
        }
        WalkKind::Dtqw { r } => {
            let s = (T::one() - r * r).sqrt();
            let res = integrate(
                |th: T| {
                    let sn = th.sin();
                    g(c + x * r * sn) * s / (T::PI() * (T::one() - r * r * sn * sn))
                },
                -half_pi,
                half_pi,
                cfg,
            )?;
            Ok(res.value)
        }
        WalkKind::Rw => {
            let sx = x.sqrt();
            let norm = T::one() / (T::lit(2.0) * T::PI()).sqrt();
            let l = T::lit(7.0);
            let breaks = [-l - l, -l, T::zero(), l, l + l];
            let res = integrate_with_breaks(
                |u: T| g(c + sx * u) * norm * (-(u * u) * T::lit(0.5)).exp(),
                &breaks,
                cfg,
            )?;
            Ok(res.value)
        }
        _ => Err(Error::UnsupportedWalk {
            op: "continuous expectation",
            walk: walk.to_string(),
        }),
    }
}

/// `int y^k mu_x(y, p) dy` by quadrature, or by summing the lattice law exactly.
pub fn quad_moment<T: Real>(walk: &WalkKind<T>, k: u32, x: T, p: T) -> Result<T> {
    walk.validate()?;
    // reuse the density's argument checks
    density(walk, x, p, T::zero())?;
    match walk {
        WalkKind::CtrwZ => Ok(skellam_pmf(x, p)?.moment(k)),
        WalkKind::DtrwZ => {
            let t = x.to_u64().ok_or_else(|| domain("dtrw-z time out of range"))?;
            Ok(simulate_dtrw(t, p).moment(k))
        }
        _ => {
            // odd moments can vanish, so the absolute target follows the size of y^k
            let reach = (w_of_p(p) * x).abs() + x.max(x.sqrt()) * T::lit(3.0);
            let mut cfg = oracle_cfg::<T>();
            cfg.abs_tol = cfg.abs_tol.max(T::lit(1e-14) * reach.powi(k as i32));
            expect_continuous(walk, x, p, |y| y.powi(k as i32), &cfg)
        }
    }
}

fn poisson_masses<T: Real>(lambda: T) -> Vec<T> {
    let lf = lambda.to_f64().unwrap_or(0.0);
    let len = (lf + 30.0 + 12.0 * lf.sqrt()).ceil() as usize;
    let mut out = Vec::with_capacity(len);
    let mut m = (-lambda).exp();
    for j in 0..len {
        out.push(m);
        m = m * lambda / T::from_usize_lossy(j + 1);
    }
    out
}

/// CTRW law at time `x` as the difference of two independent Poisson counts
/// (right jumps at rate `1 - p`, left jumps at rate `p`), with no Bessel functions.
pub fn skellam_pmf<T: Real>(x: T, p: T) -> Result<DistributionOnZ<T>> {
    density(&WalkKind::CtrwZ, x, p, T::zero())?;
    if x > T::lit(500.0) {
        return Err(Error::Simulation(format!("x={x} too large for the Poisson recurrence")));
    }
    let right = poisson_masses((T::one() - p) * x);
    let left = poisson_masses(p * x);
    let lo = -(left.len() as i64 - 1);
    let mut masses = vec![T::zero(); right.len() + left.len() - 1];
    for (i, &r) in right.iter().enumerate() {
        for (j, &l) in left.iter().enumerate() {
            masses[i + left.len() - 1 - j] += r * l;
        }
    }
    Ok(DistributionOnZ {
        support_offset: lo,
        masses,
    })
}

/// `int_0^a dx int dy (y - f(x))^n mu_x(y, p)` by nested quadrature.
pub fn quad_v<T: Real>(spec: &EvalSpec<T>, p: T) -> Result<T> {
    spec.validate()?;
    let n = spec.n as i32;
    let inner_cfg = oracle_cfg::<T>();
    let outer_cfg = QuadConfig::with_rel_tol(T::lit(1e-10));
    let walk = spec.walk;
    let failure = std::cell::Cell::new(None);
    let inner = |x: T| -> T {
        let fx = spec.f.eval(x);
        if x <= T::zero() {
            return (-fx).powi(n);
        }
        let r = match walk {
            WalkKind::CtrwZ => skellam_pmf(x, p).map(|d| {
                d.positions()
                    .zip(&d.masses)
                    .fold(T::zero(), |acc, (y, &m)| acc + m * (T::lit(y as f64) - fx).powi(n))
            }),
            _ => expect_continuous(&walk, x, p, |y| (y - fx).powi(n), &inner_cfg),
        };
        r.unwrap_or_else(|e| {
            failure.set(Some(e));
            T::nan()
        })
    };
    if walk == WalkKind::DtrwZ {
        return Err(Error::UnsupportedWalk {
            op: "quad_v (use discrete_v)",
            walk: walk.to_string(),
        });
    }
    let a = spec.a();
    let panels = a.to_f64().unwrap_or(1.0).ceil().max(1.0) as usize;
    let xs: Vec<T> = (0..=panels)
        .map(|i| a * T::from_usize_lossy(i) / T::from_usize_lossy(panels))
        .collect();
    let res = integrate_with_breaks(inner, &xs, &outer_cfg);
    if let Some(e) = failure.take() {
        return Err(e);
    }
    Ok(res?.value)
}

/// Exact distribution of the DTRW after `t` steps (left with probability `p`).
///
/// Works over any ring, so exact rationals reproduce the binomial law exactly.
pub fn simulate_dtrw<N>(t: u64, p: N) -> DistributionOnZ<N>
where
    N: Clone + Zero + One + Add<Output = N> + Mul<Output = N> + Sub<Output = N>,
{
    let q = N::one() - p.clone();
    // after s steps the reachable sites are -s, -s+2, ..., s
    let mut compact = vec![N::one()];
    for _ in 0..t {
        let mut next = Vec::with_capacity(compact.len() + 1);
        next.push(p.clone() * compact[0].clone());
        for j in 1..compact.len() {
            next.push(p.clone() * compact[j].clone() + q.clone() * compact[j - 1].clone());
        }
        next.push(q.clone() * compact[compact.len() - 1].clone());
        compact = next;
    }
    let mut masses = vec![N::zero(); 2 * t as usize + 1];
    for (j, m) in compact.into_iter().enumerate() {
        masses[2 * j] = m;
    }
    DistributionOnZ {
        support_offset: -(t as i64),
        masses,
    }
}

/// Hadamard walk on the integers with the symmetric initial coin state
/// `(1, i)/sqrt(2)` at the origin. The left chirality moves to `x - 1`.
#[derive(Debug, Clone)]
pub struct HadamardWalk {
    time: u64,
    left: Vec<Complex64>,
    right: Vec<Complex64>,
    capacity: u64,
}

impl HadamardWalk {
    pub fn new(max_time: u64) -> Result<Self> {
        if max_time > MAX_HADAMARD_TIME {
            return Err(Error::Simulation(format!(
                "time {max_time} exceeds the supported maximum {MAX_HADAMARD_TIME}"
            )));
        }
        let len = 2 * max_time as usize + 1;
        let mut left = vec![Complex64::zero(); len];
        let mut right = vec![Complex64::zero(); len];
        let s = std::f64::consts::FRAC_1_SQRT_2;
        left[max_time as usize] = Complex64::new(s, 0.0);
        right[max_time as usize] = Complex64::new(0.0, s);
        Ok(Self {
            time: 0,
            left,
            right,
            capacity: max_time,
        })
    }

    pub fn time(&self) -> u64 {
        self.time
    }

    pub fn step(&mut self) -> Result<()> {
        if self.time >= self.capacity {
            return Err(Error::Simulation("walk ran past its allocated support".into()));
        }
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let len = self.left.len();
        let mut left = vec![Complex64::zero(); len];
        let mut right = vec![Complex64::zero(); len];
        let c = self.capacity as usize;
        let t = self.time as usize;
        for i in c - t..=c + t {
            let (l, r) = (self.left[i], self.right[i]);
            left[i - 1] += (l + r) * s;
            right[i + 1] += (l - r) * s;
        }
        self.left = left;
        self.right = right;
        self.time += 1;
        Ok(())
    }

    pub fn distribution(&self) -> DistributionOnZ<f64> {
        let c = self.capacity as i64;
        let t = self.time as i64;
        let masses = ((c - t)..=(c + t))
            .map(|i| self.left[i as usize].norm_sqr() + self.right[i as usize].norm_sqr())
            .collect();
        DistributionOnZ {
            support_offset: -t,
            masses,
        }
    }

    pub fn total_mass(&self) -> f64 {
        self.left.iter().chain(&self.right).map(|z| z.norm_sqr()).sum()
    }
}

/// Position distribution of the Hadamard walk at time `t`.
pub fn simulate_hadamard_dtqw(t: u64) -> Result<DistributionOnZ<f64>> {
    let mut walk = HadamardWalk::new(t)?;
    for _ in 0..t {
        walk.step()?;
    }
    Ok(walk.distribution())
}

/// `sum_{x=0}^a sum_y (y - f(x))^2 mu_x(y, p)` with the DTRW laws built by
/// dynamic programming; `p` may be any value in `[0, 1]`.
pub fn discrete_v<T: Real>(f: &FunctionSpec<T>, a: u64, p: T) -> Result<T> {
    if !(p >= T::zero() && p <= T::one()) {
        return Err(domain(format!("p={p} must lie in [0, 1]")));
    }
    let q = T::one() - p;
    let mut compact = vec![T::one()];
    let mut total = T::zero();
    for x in 0..=a {
        let fx = f.eval(T::lit(x as f64));
        for (j, &m) in compact.iter().enumerate() {
            let y = T::lit(-(x as f64) + 2.0 * j as f64);
            total += m * (y - fx) * (y - fx);
        }
        let mut next = Vec::with_capacity(compact.len() + 1);
        next.push(p * compact[0]);
        for j in 1..compact.len() {
            next.push(p * compact[j] + q * compact[j - 1]);
        }
        next.push(q * compact[compact.len() - 1]);
        compact = next;
    }
    Ok(total)
}

/// Largest residual of the CTRW master equation
/// `d mu / dx = p mu(y+1) + (1-p) mu(y-1) - mu(y)` over `ys`, with the
/// `x`-derivative taken by central differences (step `1e-5`).
pub fn simulate_ctrw_measure_check<T: Real>(x: T, p: T, ys: RangeInclusive<i64>) -> Result<T> {
    let h = T::lit(1e-5);
    if !(x > h) {
        return Err(domain(format!("x={x} too small for the difference step")));
    }
    let mu = |xx: T, y: i64| density(&WalkKind::CtrwZ, xx, p, T::lit(y as f64));
    let mut worst = T::zero();
    for y in ys {
        let dmu = (mu(x + h, y)? - mu(x - h, y)?) / (T::lit(2.0) * h);
        let rhs = p * mu(x, y + 1)? + (T::one() - p) * mu(x, y - 1)? - mu(x, y)?;
        worst = worst.max((dmu - rhs).abs());
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::ctrw_pmf;
    use num_bigint::BigInt;
    use num_rational::BigRational;
    use std::f64::consts::{FRAC_1_SQRT_2, PI};

    #[test]
    fn quad_moment_examples() {
        assert!((quad_moment(&WalkKind::Ctqw, 1, 1.0f64, 0.3).unwrap() - 0.4).abs() < 1e-13);
        assert!((quad_moment(&WalkKind::Rw, 4, 1.0f64, 0.5).unwrap() - 3.0).abs() < 1e-12);
        let m = quad_moment(&WalkKind::hadamard(), 2, 1.0, 0.5).unwrap();
        assert!((m - (1.0 - FRAC_1_SQRT_2)).abs() < 1e-13);
        assert!((quad_moment(&WalkKind::DtrwZ, 2, 4.0f64, 0.25).unwrap() - 7.0).abs() < 1e-13);
        assert!(quad_moment(&WalkKind::DtrwZ, 2, 4.0, 1.0).is_err());
    }

    #[test]
    fn quad_v_examples() {
        for &a in &[1.0f64, 2.5] {
            let zero = FunctionSpec::polynomial(vec![0.0], a).unwrap();
            let v = quad_v(&EvalSpec::new(WalkKind::Rw, zero, 2).unwrap(), 0.5).unwrap();
            assert!((v - a * a / 2.0).abs() < 1e-10 * a * a);
            let id = FunctionSpec::identity(a).unwrap();
            let v = quad_v(&EvalSpec::new(WalkKind::Ctqw, id, 2).unwrap(), 0.0).unwrap();
            assert!((v - a.powi(3) / 6.0).abs() < 1e-10 * a.powi(3));
        }
    }

    #[test]
    fn dtrw_small_cases() {
        let d = simulate_dtrw(1, 0.25);
        assert_eq!(d.support_offset, -1);
        assert_eq!(d.masses, vec![0.25, 0.0, 0.75]);
        let d = simulate_dtrw(2, 0.5);
        assert_eq!(d.masses, vec![0.25, 0.0, 0.5, 0.0, 0.25]);
        assert_eq!(d.mass_at(0), Some(&0.5));
        assert_eq!(d.mass_at(3), None);
    }

    #[test]
    fn dtrw_matches_binomial_exactly() {
        let p = BigRational::new(BigInt::from(3), BigInt::from(10));
        let q = BigRational::from_integer(BigInt::from(1)) - p.clone();
        for t in 0..=30u64 {
            let d = simulate_dtrw(t, p.clone());
            for (y, m) in d.positions().zip(&d.masses) {
                let want = if (t as i64 - y) % 2 != 0 {
                    BigRational::from_integer(BigInt::from(0))
                } else {
                    let left = ((t as i64 - y) / 2) as u32;
                    let c = BigInt::from(crate::scalar::binomial(t as u32, left));
                    let pw = num_traits::pow(p.clone(), left as usize);
                    let qw = num_traits::pow(q.clone(), t as usize - left as usize);
                    BigRational::from_integer(c) * pw * qw
                };
                assert_eq!(m, &want, "t={t} y={y}");
            }
        }
    }

    #[test]
    fn hadamard_short_times() {
        let d = simulate_hadamard_dtqw(1).unwrap();
        assert_eq!(d.support_offset, -1);
        assert!((d.total() - 1.0).abs() < 1e-15);
        assert_eq!(d.masses[1], 0.0);
        // symmetric initial state gives a symmetric law
        let d = simulate_hadamard_dtqw(50).unwrap();
        for y in 0..=50 {
            assert!((d.mass_at(y).unwrap() - d.mass_at(-y).unwrap()).abs() < 1e-14);
        }
        assert!(simulate_hadamard_dtqw(MAX_HADAMARD_TIME + 1).is_err());
    }

    #[test]
    fn discrete_v_examples() {
        let zero = FunctionSpec::polynomial(vec![0.0f64], 2.0).unwrap();
        assert!((discrete_v(&zero, 2, 0.5).unwrap() - 3.0).abs() < 1e-14);
        let id = FunctionSpec::identity(3.0f64).unwrap();
        assert_eq!(discrete_v(&id, 3, 0.0).unwrap(), 0.0);
        let v = crate::evaluation::build_v_discrete_dtrw(&id, 3).unwrap();
        assert!((discrete_v(&id, 3, 0.3).unwrap() - v.eval(0.4)).abs() < 1e-12);
        assert!(discrete_v(&id, 3, 1.2).is_err());
    }

    #[test]
    fn ctrw_master_equation_and_moments() {
        let res = simulate_ctrw_measure_check(1.0f64, 0.5, -10..=10).unwrap();
        assert!(res <= 1e-6, "residual {res}");
        let (lo, m) = ctrw_pmf(2.0f64, 0.3).unwrap();
        assert!((m.iter().sum::<f64>() - 1.0).abs() < 1e-10);
        let (lo1, m1) = ctrw_pmf(1.0f64, 0.5).unwrap();
        assert!(lattice_moment(lo1, &m1, 1).abs() < 1e-10);
        assert!((lattice_moment(lo, &m, 1) - 0.8).abs() < 1e-10);
    }

    #[test]
    fn cdfs_are_consistent() {
        for t in [
            LimitTarget::Arcsine,
            LimitTarget::Konno { r: 0.6 },
            LimitTarget::Gaussian,
        ] {
            assert!((t.cdf(0.0) - 0.5).abs() < 1e-15);
            assert!(t.cdf(-5.0) < 1e-6 && t.cdf(5.0) > 1.0 - 1e-6);
        }
        // Konno CDF against quadrature of its density
        let r = 0.6;
        let d = |y: f64| density(&WalkKind::Dtqw { r }, 1.0, 0.5, y).unwrap();
        let cfg = QuadConfig::default();
        let y0 = 0.3;
        let th = (y0 / r).asin();
        let dens_int = integrate(|t: f64| d(r * t.sin()) * r * t.cos(), -PI / 2.0, th, &cfg)
            .unwrap()
            .value;
        assert!((LimitTarget::Konno { r }.cdf(y0) - dens_int).abs() < 1e-10);
    }

    #[test]
    fn skellam_matches_bessel_form() {
        let d = skellam_pmf(2.0f64, 0.3).unwrap();
        assert!((d.total() - 1.0).abs() < 1e-13);
        for y in -8..=8 {
            let want = density(&WalkKind::CtrwZ, 2.0, 0.3, y as f64).unwrap();
            assert!((d.mass_at(y).unwrap() - want).abs() < 1e-14, "y={y}");
        }
    }

    #[test]
    fn csv_dump() {
        let d = simulate_dtrw(1, 0.25);
        let mut buf = Vec::new();
        d.write_csv(&mut buf).unwrap();
        let s = String::from_utf8(buf).unwrap();
        assert_eq!(s.lines().next(), Some("position,mass"));
        assert_eq!(s.lines().count(), 4);
    }
}
