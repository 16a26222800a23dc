//! Central-difference derivatives of complex-valued functions.
//!
//! All tunneling times in this crate are phase or log-magnitude derivatives
//! of a complex amplitude. They are computed through the logarithmic
//! derivative d(ln f)/dx = (df/dx)/f, whose imaginary part is the phase
//! derivative and whose real part is the log-magnitude derivative. This
//! avoids 2*pi phase unwrapping entirely.

use num_complex::Complex64;

/// Default relative step for central differences; balances truncation and
/// roundoff at f64 precision.
pub const DEFAULT_RELATIVE_STEP: f64 = 1e-6;

/// Step size for differentiating at `x`: relative by default, absolute
/// fallback when `x` is (near) zero.
pub fn step_for(x: f64) -> f64 {
    let h = DEFAULT_RELATIVE_STEP * x.abs();
    if h > 0.0 {
        h
    } else {
        DEFAULT_RELATIVE_STEP
    }
}

/// Central difference df/dx at `x` with step `h`.
pub fn central_derivative<F>(f: F, x: f64, h: f64) -> Complex64
where
    F: Fn(f64) -> Complex64,
{
    (f(x + h) - f(x - h)) / (2.0 * h)
}

/// Logarithmic derivative d(ln f)/dx = (df/dx)/f at `x`.
///
/// Returns the complex number whose real part is d(ln|f|)/dx and whose
/// imaginary part is d(arg f)/dx.
pub fn log_derivative<F>(f: F, x: f64, h: f64) -> Complex64
where
    F: Fn(f64) -> Complex64,
{
    let value = f(x);
    central_derivative(f, x, h) / value
}

/// Phase derivative d(arg f)/dx via Im[(df/dx)/f].
pub fn phase_derivative<F>(f: F, x: f64, h: f64) -> f64
where
    F: Fn(f64) -> Complex64,
{
    log_derivative(f, x, h).im
}
