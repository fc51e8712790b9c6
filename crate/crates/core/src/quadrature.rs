//! Globally adaptive Gauss–Kronrod (7/15) quadrature.
//!
//! The interval with the largest local error estimate is bisected until the
//! summed estimate meets `max(abs_tol, rel_tol * |I|)`.

#![allow(clippy::excessive_precision)]

use crate::error::{Error, Result};
use crate::scalar::Real;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

// Gauss weights for the nodes XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

#[derive(Debug, Clone, Copy)]
pub struct QuadConfig<T> {
    pub rel_tol: T,
    pub abs_tol: T,
    pub max_intervals: usize,
}

impl<T: Real> Default for QuadConfig<T> {
    fn default() -> Self {
        Self {
            rel_tol: T::lit(1e-10).max(T::tol_floor()),
            abs_tol: T::lit(1e-13).max(T::min_positive_value()),
            max_intervals: 4000,
        }
    }
}

impl<T: Real> QuadConfig<T> {
    pub fn with_rel_tol(rel_tol: T) -> Self {
        Self {
            rel_tol: rel_tol.max(T::tol_floor()),
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult<T> {
    pub value: T,
    pub error: T,
    pub intervals: usize,
}

#[derive(Debug, Clone, Copy)]
struct Segment<T> {
    lo: T,
    hi: T,
    value: T,
    error: T,
    // roundoff level of this panel; no subdivision can push the error below it
    floor: T,
}

fn kronrod<T: Real, F: Fn(T) -> T>(f: &F, lo: T, hi: T) -> Segment<T> {
    let half = T::lit(0.5);
    let center = half * (lo + hi);
    let radius = half * (hi - lo);
    let fc = f(center);
    let mut res_k = fc * T::lit(WGK[7]);
    let mut res_g = fc * T::lit(WG[3]);
    let mut res_abs = res_k.abs();
    let mut fv1 = [T::zero(); 7];
    let mut fv2 = [T::zero(); 7];
    for j in 0..7 {
        let dx = radius * T::lit(XGK[j]);
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        let wk = T::lit(WGK[j]);
        res_k += wk * (f1 + f2);
        res_abs += wk * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_g += T::lit(WG[j / 2]) * (f1 + f2);
        }
    }
    let mean = res_k * half;
    let mut res_asc = T::lit(WGK[7]) * (fc - mean).abs();
    for j in 0..7 {
        res_asc += T::lit(WGK[j]) * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let value = res_k * radius;
    res_abs *= radius.abs();
    res_asc *= radius.abs();
    let mut error = ((res_k - res_g) * radius).abs();
    if res_asc != T::zero() && error != T::zero() {
        let scale = (T::lit(200.0) * error / res_asc).powf(T::lit(1.5));
        error = res_asc * scale.min(T::one());
    }
    let floor = T::lit(50.0) * T::epsilon() * res_abs;
    if res_abs > T::min_positive_value() / (T::lit(50.0) * T::epsilon()) {
        error = error.max(floor);
    }
    Segment {
        lo,
        hi,
        value,
        error,
        floor,
    }
}

/// Integrates `f` over `[lo, hi]`.
pub fn integrate<T, F>(f: F, lo: T, hi: T, cfg: &QuadConfig<T>) -> Result<QuadResult<T>>
where
    T: Real,
    F: Fn(T) -> T,
{
    integrate_with_breaks(f, &[lo, hi], cfg)
}

/// Integrates `f` over `[points[0], points[last]]`, seeding the partition with
/// the given break points (which must be nondecreasing).
pub fn integrate_with_breaks<T, F>(f: F, points: &[T], cfg: &QuadConfig<T>) -> Result<QuadResult<T>>
where
    T: Real,
    F: Fn(T) -> T,
{
    assert!(points.len() >= 2, "need at least one interval");
    let mut segments: Vec<Segment<T>> = points
        .windows(2)
        .filter(|w| w[1] > w[0])
        .map(|w| kronrod(&f, w[0], w[1]))
        .collect();
    if segments.is_empty() {
        return Ok(QuadResult {
            value: T::zero(),
            error: T::zero(),
            intervals: 0,
        });
    }
    loop {
        let value = segments.iter().fold(T::zero(), |acc, s| acc + s.value);
        let error = segments.iter().fold(T::zero(), |acc, s| acc + s.error);
        let floor = segments.iter().fold(T::zero(), |acc, s| acc + s.floor);
        let target = cfg.abs_tol.max(cfg.rel_tol * value.abs());
        // a panel sitting at its roundoff floor is accepted as converged
        if error <= target || error <= floor {
            return Ok(QuadResult {
                value,
                error,
                intervals: segments.len(),
            });
        }
        if segments.len() >= cfg.max_intervals {
            return Err(Error::Quadrature {
                achieved: error.to_f64().unwrap_or(f64::NAN),
                requested: target.to_f64().unwrap_or(f64::NAN),
            });
        }
        let (worst, _) = segments
            .iter()
            .enumerate()
            .fold((0, T::neg_infinity()), |best, (i, s)| {
                if s.error > best.1 {
                    (i, s.error)
                } else {
                    best
                }
            });
        let s = segments.swap_remove(worst);
        let mid = T::lit(0.5) * (s.lo + s.hi);
        if mid <= s.lo || mid >= s.hi {
            // interval can no longer be split in this precision
            return Err(Error::Quadrature {
                achieved: error.to_f64().unwrap_or(f64::NAN),
                requested: target.to_f64().unwrap_or(f64::NAN),
            });
        }
        segments.push(kronrod(&f, s.lo, mid));
        segments.push(kronrod(&f, mid, s.hi));
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomials_are_exact_on_one_panel() {
        let cfg = QuadConfig::<f64>::default();
        let r = integrate(|x: f64| x.powi(6) - 3.0 * x, 0.0, 2.0, &cfg).unwrap();
        assert!((r.value - (128.0 / 7.0 - 6.0)).abs() < 1e-13);
        assert_eq!(r.intervals, 1);
    }

    #[test]
    fn oscillatory_and_sqrt_integrands() {
        let cfg = QuadConfig::<f64>::default();
        let r = integrate(|x: f64| (10.0 * x).cos(), 0.0, std::f64::consts::PI, &cfg).unwrap();
        assert!(r.value.abs() < 1e-12);
        let r = integrate(|x: f64| x.sqrt(), 0.0, 1.0, &cfg).unwrap();
        assert!((r.value - 2.0 / 3.0).abs() < 1e-11);
    }

    #[test]
    fn breaks_are_respected() {
        let cfg = QuadConfig::<f64>::default();
        let r = integrate_with_breaks(|x: f64| x.abs(), &[-1.0, 0.0, 2.0], &cfg).unwrap();
        assert!((r.value - 2.5).abs() < 1e-14);
    }

    #[test]
    fn non_convergence_is_reported() {
        let cfg = QuadConfig {
            rel_tol: 1e-14,
            abs_tol: 0.0,
            max_intervals: 3,
        };
        let err = integrate(|x: f64| 1.0 / x.sqrt(), 0.0, 1.0, &cfg).unwrap_err();
        assert!(matches!(err, Error::Quadrature { .. }));
    }

    #[test]
    fn single_precision() {
        let cfg = QuadConfig::<f32>::default();
        let r = integrate(|x: f32| x.exp(), 0.0, 1.0, &cfg).unwrap();
        assert!((r.value - (std::f32::consts::E - 1.0)).abs() < 1e-5);
    }
}
