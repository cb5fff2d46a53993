//! Scalar abstraction: every numerical kernel in this crate is generic over a
//! floating-point scalar so the same formulas run in `f32` or `f64`.

use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive};

/// Floating-point scalar: `f32` or `f64`.
pub trait Real: Float + FloatConst + FromPrimitive + Debug + Display + 'static {
    /// Converts an `f64` literal into `Self`.
    #[inline]
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("literal conversion")
    }

    /// Lossy view as `f64`, for diagnostics and reports.
    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    #[inline]
    fn two() -> Self {
        Self::one() + Self::one()
    }

    #[inline]
    fn half() -> Self {
        Self::one() / Self::two()
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Linearly spaced grid with both endpoints included (`n >= 2`),
/// or the midpoint for `n == 1`.
pub fn linspace<T: Real>(lo: T, hi: T, n: usize) -> Vec<T> {
    if n == 0 {
        return Vec::new();
    }
    if n == 1 {
        return vec![(lo + hi) * T::half()];
    }
    let step = (hi - lo) / T::of((n - 1) as f64);
    (0..n).map(|i| lo + step * T::of(i as f64)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linspace_endpoints() {
        let g = linspace(0.0f64, 1.0, 5);
        assert_eq!(g.len(), 5);
        assert_eq!(g[0], 0.0);
        assert_eq!(g[4], 1.0);
        assert!((g[2] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn linspace_degenerate() {
        assert!(linspace(0.0f64, 2.0, 0).is_empty());
        assert_eq!(linspace(0.0f64, 2.0, 1), vec![1.0]);
    }
}
