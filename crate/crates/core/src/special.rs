//! Exponentially scaled modified Bessel functions of integer order.

use crate::scalar::Real;

/// Returns `e^{-z} I_k(z)` for `k = 0..=max_order` and `z >= 0`.
///
/// Miller's backward recurrence `I_{k-1} = I_{k+1} + (2k/z) I_k`, normalized
/// with `I_0 + 2 sum_{k>=1} I_k = e^z`, so the scaled values come out directly
/// and never overflow.
pub fn bessel_i_scaled_seq<T: Real>(max_order: usize, z: T) -> Vec<T> {
    assert!(z >= T::zero(), "bessel_i_scaled_seq: z must be nonnegative");
    let mut out = vec![T::zero(); max_order + 1];
    if z == T::zero() {
        out[0] = T::one();
        return out;
    }
    let zf = z.to_f64().unwrap_or(f64::MAX);
    let start = max_order.max((10.0 * zf.sqrt()).ceil() as usize) + 40;
    let mut b = vec![T::zero(); start + 2];
    b[start] = T::one();
    let big = T::max_value().sqrt();
    let two_over_z = T::lit(2.0) / z;
    for k in (1..=start).rev() {
        b[k - 1] = b[k + 1] + T::from_usize_lossy(k) * two_over_z * b[k];
        if b[k - 1] > big {
            let inv = T::one() / big;
            for v in b[k - 1..].iter_mut() {
                *v *= inv;
            }
        }
    }
    let tail = b[1..=start].iter().fold(T::zero(), |acc, &v| acc + v);
    let norm = b[0] + T::lit(2.0) * tail;
    for (o, v) in out.iter_mut().zip(b.iter()) {
        *o = *v / norm;
    }
    out
}

/// `e^{-z} I_n(z)` for a single integer order (`I_{-n} = I_n`).
pub fn bessel_i_scaled<T: Real>(n: i64, z: T) -> T {
    let n = n.unsigned_abs() as usize;
    bessel_i_scaled_seq(n, z)[n]
}
