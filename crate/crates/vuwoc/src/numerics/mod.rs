//! Shared numerical kernels: special functions, quadrature, root finding,
//! a simplex minimizer and FFT helpers.

pub mod fft2;
pub mod neldermead;
pub mod quad;
pub mod rootfind;
pub mod special;
