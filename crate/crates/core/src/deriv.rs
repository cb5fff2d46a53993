//! Central finite differences with Richardson extrapolation.
//!
//! Each `richardson_*` routine evaluates the underlying second-order central
//! stencil at steps `h` and `h/2` and combines them, cancelling the leading
//! `h^2` error term (order 2 -> 4).

use crate::real::Real;

/// First derivative, central stencil: `(f(x+h) - f(x-h)) / (2h)`.
pub fn central_1st<T: Real, F: Fn(T) -> T>(f: &F, x: T, h: T) -> T {
    (f(x + h) - f(x - h)) / (T::two() * h)
}

/// First derivative, Richardson-extrapolated.
pub fn richardson_1st<T: Real, F: Fn(T) -> T>(f: &F, x: T, h: T) -> T {
    let coarse = central_1st(f, x, h);
    let fine = central_1st(f, x, h * T::half());
    (T::of(4.0) * fine - coarse) / T::of(3.0)
}

/// Second derivative, central stencil: `(f(x+h) - 2 f(x) + f(x-h)) / h^2`.
pub fn central_2nd<T: Real, F: Fn(T) -> T>(f: &F, x: T, h: T) -> T {
    (f(x + h) - T::two() * f(x) + f(x - h)) / (h * h)
}

/// Second derivative, Richardson-extrapolated.
pub fn richardson_2nd<T: Real, F: Fn(T) -> T>(f: &F, x: T, h: T) -> T {
    let coarse = central_2nd(f, x, h);
    let fine = central_2nd(f, x, h * T::half());
    (T::of(4.0) * fine - coarse) / T::of(3.0)
}

/// Mixed second derivative d^2 f / (dx dy), four-corner central stencil.
pub fn central_mixed<T: Real, F: Fn(T, T) -> T>(f: &F, x: T, y: T, hx: T, hy: T) -> T {
    (f(x + hx, y + hy) - f(x + hx, y - hy) - f(x - hx, y + hy) + f(x - hx, y - hy))
        / (T::of(4.0) * hx * hy)
}

/// Mixed second derivative, Richardson-extrapolated.
pub fn richardson_mixed<T: Real, F: Fn(T, T) -> T>(f: &F, x: T, y: T, hx: T, hy: T) -> T {
    let coarse = central_mixed(f, x, y, hx, hy);
    let fine = central_mixed(f, x, y, hx * T::half(), hy * T::half());
    (T::of(4.0) * fine - coarse) / T::of(3.0)
}
