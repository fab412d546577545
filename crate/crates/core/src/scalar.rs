use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, ToPrimitive};
use serde::de::DeserializeOwned;
use serde::Serialize;

/// Floating-point scalar every numeric routine in the crate is generic over.
///
/// Implemented for `f32` and `f64`. The error functions come from `libm`
/// so both precisions get a correctly rounded special-function backend.
pub trait Scalar:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + NumAssign
    + Sum
    + Debug
    + Display
    + Default
    + Serialize
    + DeserializeOwned
    + Send
    + Sync
    + 'static
{
    fn erf(self) -> Self;
    fn erfc(self) -> Self;

    /// Converts an `f64` literal into this precision.
    #[inline]
    fn of(v: f64) -> Self {
        Self::from_f64(v).expect("f64 literal representable in scalar type")
    }

    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    /// Standard Normal CDF.
    #[inline]
    fn norm_cdf(self) -> Self {
        Self::of(0.5) * (-self / Self::SQRT_2()).erfc()
    }

    /// Standard Normal upper tail, `1 - norm_cdf(x)`, without cancellation.
    #[inline]
    fn norm_sf(self) -> Self {
        Self::of(0.5) * (self / Self::SQRT_2()).erfc()
    }
}

impl Scalar for f32 {
    #[inline]
    fn erf(self) -> Self {
        libm::erff(self)
    }
    #[inline]
    fn erfc(self) -> Self {
        libm::erfcf(self)
    }
}

impl Scalar for f64 {
    #[inline]
    fn erf(self) -> Self {
        libm::erf(self)
    }
    #[inline]
    fn erfc(self) -> Self {
        libm::erfc(self)
    }
}

/// Inverse of the standard Normal CDF.
///
/// Acklam's rational approximation followed by one Halley step against the
/// `erfc`-based CDF, which brings f64 results to full working precision.
pub fn norm_quantile<T: Scalar>(p: T) -> T {
    let pf = p.to_f64_lossy();
    if pf <= 0.0 {
        return T::neg_infinity();
    }
    if pf >= 1.0 {
        return T::infinity();
    }
    const A: [f64; 6] = [
        -3.969683028665376e1,
        2.209460984245205e2,
        -2.759285104469687e2,
        1.38357751867269e2,
        -3.066479806614716e1,
        2.506628277459239,
    ];
    const B: [f64; 5] =
        [-5.447609879822406e1, 1.615858368580409e2, -1.556989798598866e2, 6.680131188771972e1, -1.328068155288572e1];
    const C: [f64; 6] = [
        -7.784894002430293e-3,
        -3.223964580411365e-1,
        -2.400758277161838,
        -2.549732539343734,
        4.374664141464968,
        2.938163982698783,
    ];
    const D: [f64; 4] = [7.784695709041462e-3, 3.224671290700398e-1, 2.445134137142996, 3.754408661907416];
    const P_LOW: f64 = 0.02425;
    let x = if pf < P_LOW {
        let q = (-2.0 * pf.ln()).sqrt();
        (((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    } else if pf <= 1.0 - P_LOW {
        let q = pf - 0.5;
        let r = q * q;
        (((((A[0] * r + A[1]) * r + A[2]) * r + A[3]) * r + A[4]) * r + A[5]) * q
            / (((((B[0] * r + B[1]) * r + B[2]) * r + B[3]) * r + B[4]) * r + 1.0)
    } else {
        let q = (-2.0 * (1.0 - pf).ln()).sqrt();
        -(((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    };
    // Halley refinement
    let e = 0.5 * libm::erfc(-x / std::f64::consts::SQRT_2) - pf;
    let u = e * (2.0 * std::f64::consts::PI).sqrt() * (x * x / 2.0).exp();
    T::of(x - u / (1.0 + x * u / 2.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quantile_inverts_cdf() {
        for &p in &[1e-12, 1e-6, 0.01, 0.02425, 0.2, 0.5, 0.77, 0.975, 0.999999] {
            let x: f64 = norm_quantile(p);
            let back = x.norm_cdf();
            assert!((back - p).abs() <= 1e-13 * p.max(1e-3), "p={p} x={x} back={back}");
        }
        assert_eq!(norm_quantile(0.5f64), 0.0);
    }

    #[test]
    fn sf_matches_one_minus_cdf() {
        for &x in &[-3.0f64, -0.5, 0.0, 1.2, 4.0] {
            assert!((x.norm_sf() - (1.0 - x.norm_cdf())).abs() < 1e-15);
        }
    }

    #[test]
    fn f32_backend_agrees_with_f64() {
        for &x in &[0.0f32, 0.3, 0.7, 1.0, 2.5] {
            assert!((Scalar::erfc(x) as f64 - Scalar::erfc(x as f64)).abs() < 1e-6);
        }
    }
}
