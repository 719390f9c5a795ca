// Scalar math routed through libm so std and no_std builds agree bit for bit.

use crate::C64;

#[inline]
pub(crate) fn sqrt(x: f64) -> f64 {
    libm::sqrt(x)
}

#[inline]
pub(crate) fn ln(x: f64) -> f64 {
    libm::log(x)
}

#[inline]
pub(crate) fn exp(x: f64) -> f64 {
    libm::exp(x)
}

#[inline]
pub(crate) fn cos(x: f64) -> f64 {
    libm::cos(x)
}

#[inline]
pub(crate) fn sin(x: f64) -> f64 {
    libm::sin(x)
}

#[inline]
pub(crate) fn abs(z: C64) -> f64 {
    libm::hypot(z.re, z.im)
}

#[inline]
pub(crate) fn arg(z: C64) -> f64 {
    libm::atan2(z.im, z.re)
}

#[inline]
pub(crate) fn cis(phase: f64) -> C64 {
    C64::new(cos(phase), sin(phase))
}

#[inline]
pub(crate) fn polar(r: f64, phase: f64) -> C64 {
    cis(phase) * r
}
