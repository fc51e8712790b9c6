//! Real polynomials in the signed drift `w = 1 - 2p`, with Sturm-sequence
//! real-root isolation.

use crate::scalar::Real;

/// Polynomial `sum_i coeffs[i] * w^i`.
#[derive(Debug, Clone, PartialEq)]
pub struct WPolynomial<T> {
    coeffs: Vec<T>,
}

impl<T: Real> WPolynomial<T> {
    pub fn new(mut coeffs: Vec<T>) -> Self {
        while coeffs.len() > 1 && coeffs[coeffs.len() - 1] == T::zero() {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(T::zero());
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self::new(vec![])
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    /// Coefficient of `w^i` (zero beyond the degree).
    pub fn coeff(&self, i: usize) -> T {
        self.coeffs.get(i).copied().unwrap_or_else(T::zero)
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0] == T::zero()
    }

    pub fn leading(&self) -> T {
        self.coeffs[self.coeffs.len() - 1]
    }

    pub fn eval(&self, w: T) -> T {
        self.coeffs.iter().rev().fold(T::zero(), |acc, &c| acc * w + c)
    }

    /// Value at drift `p`, i.e. at `w = 1 - 2p`.
    pub fn eval_p(&self, p: T) -> T {
        self.eval(T::one() - T::lit(2.0) * p)
    }

    /// `d/dw`.
    pub fn derivative(&self) -> Self {
        if self.coeffs.len() == 1 {
            return Self::zero();
        }
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| c * T::from_usize_lossy(i))
                .collect(),
        )
    }

    /// `d/dp = -2 d/dw`, still expressed in `w`.
    pub fn d_dp(&self) -> Self {
        self.derivative().scale(-T::lit(2.0))
    }

    pub fn scale(&self, s: T) -> Self {
        Self::new(self.coeffs.iter().map(|&c| c * s).collect())
    }

    /// Sum of absolute coefficients, a size for relative tolerances.
    pub fn norm1(&self) -> T {
        self.coeffs.iter().fold(T::zero(), |acc, c| acc + c.abs())
    }

    fn rem(&self, divisor: &Self) -> Self {
        let mut r = self.coeffs.clone();
        let d = &divisor.coeffs;
        let dl = d[d.len() - 1];
        while r.len() >= d.len() {
            let q = r[r.len() - 1] / dl;
            let shift = r.len() - d.len();
            for (i, &di) in d.iter().enumerate() {
                r[shift + i] -= q * di;
            }
            r.pop();
        }
        Self::new(r)
    }

    /// Sturm chain `p0 = self, p1 = self', p_{i+1} = -rem(p_{i-1}, p_i)`.
    ///
    /// Remainders whose coefficients are all below `1e3 * eps` of the chain's
    /// scale are treated as zero, which ends the chain.
    pub fn sturm_chain(&self) -> Vec<Self> {
        let mut chain = vec![self.clone()];
        if self.degree() == 0 {
            return chain;
        }
        chain.push(self.derivative());
        loop {
            let n = chain.len();
            if chain[n - 1].degree() == 0 {
                break;
            }
            let r = chain[n - 2].rem(&chain[n - 1]);
            let tol = T::lit(1e3) * T::epsilon() * chain[n - 2].norm1().max(chain[n - 1].norm1());
            if r.coeffs.iter().all(|c| c.abs() <= tol) {
                break;
            }
            // normalize to keep magnitudes tame; only signs matter
            let s = r.norm1();
            chain.push(r.scale(-T::one() / s));
        }
        chain
    }

    /// Distinct real roots in the half-open interval `(lo, hi]`, ascending.
    /// Roots closer than about `1e-7` (relative) are reported once.
    pub fn real_roots_in(&self, lo: T, hi: T) -> Vec<T> {
        if self.degree() == 0 || !(hi > lo) {
            return vec![];
        }
        let chain = self.sturm_chain();
        let mut roots = Vec::new();
        self.isolate(
            &chain,
            lo,
            hi,
            sign_changes(&chain, lo),
            sign_changes(&chain, hi),
            0,
            &mut roots,
        );
        roots.sort_by(|a, b| a.partial_cmp(b).expect("finite roots"));
        // a multiple root perturbed by rounding shows up as a tight cluster of
        // roughly sqrt(eps) width; report it once
        let mut merged: Vec<T> = Vec::with_capacity(roots.len());
        for r in roots {
            match merged.last_mut() {
                Some(last) if (r - *last).abs() <= T::lit(1e-7) * (T::one() + last.abs()) => {
                    *last = T::lit(0.5) * (*last + r);
                }
                _ => merged.push(r),
            }
        }
        merged
    }

    #[allow(clippy::too_many_arguments)]
    fn isolate(&self, chain: &[Self], lo: T, hi: T, v_lo: usize, v_hi: usize, depth: u32, out: &mut Vec<T>) {
        let count = v_lo.saturating_sub(v_hi);
        if count == 0 {
            return;
        }
        let width = hi - lo;
        if count == 1 || depth > 80 || width <= T::epsilon() * (T::one() + lo.abs().max(hi.abs())) {
            out.push(self.refine(lo, hi));
            return;
        }
        let mid = T::lit(0.5) * (lo + hi);
        let v_mid = sign_changes(chain, mid);
        self.isolate(chain, lo, mid, v_lo, v_mid, depth + 1, out);
        self.isolate(chain, mid, hi, v_mid, v_hi, depth + 1, out);
    }

    // One distinct root in (lo, hi]: bisect on a sign change, then Newton polish.
    fn refine(&self, lo: T, hi: T) -> T {
        let f_hi = self.eval(hi);
        if f_hi == T::zero() {
            return hi;
        }
        let f_lo = self.eval(lo);
        if f_lo * f_hi > T::zero() {
            // even multiplicity: the root is a simple root of the derivative
            let d = self.derivative();
            return d
                .real_roots_in(lo, hi)
                .into_iter()
                .next()
                .unwrap_or(T::lit(0.5) * (lo + hi));
        }
        let (mut a, mut b) = (lo, hi);
        let mut fa = f_lo;
        for _ in 0..200 {
            let m = T::lit(0.5) * (a + b);
            if m <= a || m >= b {
                break;
            }
            let fm = self.eval(m);
            if fm == T::zero() {
                return m;
            }
            if (fm < T::zero()) == (fa < T::zero()) {
                a = m;
                fa = fm;
            } else {
                b = m;
            }
        }
        let d = self.derivative();
        let mut x = T::lit(0.5) * (a + b);
        for _ in 0..4 {
            let dx = d.eval(x);
            if dx == T::zero() {
                break;
            }
            let next = x - self.eval(x) / dx;
            if !(next >= a && next <= b) {
                break;
            }
            x = next;
        }
        x
    }
}

fn sign_changes<T: Real>(chain: &[WPolynomial<T>], x: T) -> usize {
    let mut count = 0;
    let mut last = 0i8;
    for p in chain {
        let v = p.eval(x);
        let s = if v > T::zero() {
            1
        } else if v < T::zero() {
            -1
        } else {
            0
        };
        if s != 0 {
            if last != 0 && s != last {
                count += 1;
            }
            last = s;
        }
    }
    count
}
