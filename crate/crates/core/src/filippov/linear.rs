//! The oscillator without the cubic friction term. Slipping motion is then
//! a linear ODE and everything needed near grazing is explicit.

use super::{CycleSpec, FilippovError, FrictionParams};
use crate::maps::NormalFormParams;
use num_complex::Complex64;
use std::f64::consts::PI;

/// `(alpha, beta)`: rotation angle and log-growth of the slipping flow over
/// one forcing period.
pub fn angle_and_growth(alpha1: f64, nu: f64) -> Result<(f64, f64), FilippovError> {
    if !(alpha1.abs() < 2.0) {
        return Err(FilippovError::Domain(format!("alpha1 = {alpha1} gives real eigenvalues (need |alpha1| < 2)")));
    }
    if !(nu > 0.0) {
        return Err(FilippovError::Domain(format!("nu = {nu} must be positive")));
    }
    let alpha = 2.0 * PI / nu * (1.0 - alpha1 * alpha1 / 4.0).sqrt();
    Ok((alpha, PI * alpha1 / nu))
}

/// Normal-form parameters at grazing:
/// `tau_L = e^beta cos(alpha)`, `tau_R = 2 tau_L`, `delta_R = e^(2 beta)`.
pub fn linear_osc_params(alpha1: f64, nu: f64, mu: f64) -> Result<NormalFormParams, FilippovError> {
    let (alpha, beta) = angle_and_growth(alpha1, nu)?;
    let tau_l = beta.exp() * alpha.cos();
    NormalFormParams::new(tau_l, 2.0 * tau_l, (2.0 * beta).exp(), mu).map_err(|e| FilippovError::Domain(e.to_string()))
}

/// Trace of the sticking piece's derivative at grazing,
/// `e^beta (cos(alpha) - (beta / alpha) sin(alpha))`. Derived from the
/// exact flow: sticking removes the velocity deviation, which leaves the
/// displacement entry of the one-period flow matrix.
pub fn linear_sliding_trace(alpha: f64, beta: f64) -> f64 {
    beta.exp() * (alpha.cos() - beta / alpha * alpha.sin())
}

/// Inverts `(alpha, beta)` to the model's `(alpha1, nu)`.
pub fn linear_osc_from_angle(alpha: f64, beta: f64) -> Result<(f64, f64), FilippovError> {
    let r = alpha.hypot(beta);
    if !(alpha > 0.0 && r.is_finite()) {
        return Err(FilippovError::Domain(format!("angle {alpha} must be positive")));
    }
    Ok((2.0 * beta / r, 2.0 * PI / r))
}

fn forced_amplitude(p: &FrictionParams) -> Complex64 {
    Complex64::new(p.f, 0.0) / Complex64::new(1.0 - p.nu * p.nu, -p.alpha1 * p.nu)
}

/// Forcing amplitude at which the periodic slipping response has maximum
/// velocity exactly 1.
pub fn linear_grazing_forcing(alpha1: f64, nu: f64) -> f64 {
    (1.0 - nu * nu).hypot(alpha1 * nu) / nu
}

/// The periodic slipping response's velocity maximum `(v, t)` with `t` in
/// one forcing period; it crosses the section once per period.
pub fn linear_cycle_guess(p: &FrictionParams) -> (CycleSpec, [f64; 2]) {
    let vel = Complex64::i() * p.nu * forced_amplitude(p);
    let t = (-vel.arg() / p.nu).rem_euclid(p.forcing_period());
    (CycleSpec { crossings: 1, periods: 1 }, [vel.norm(), t])
}

/// Closed-form slipping flow below the surface (`alpha2 = 0`) from
/// `(u0, v0)` at `t0` to time `t`.
pub fn linear_flow_below(p: &FrictionParams, u0: f64, v0: f64, t0: f64, t: f64) -> (f64, f64) {
    let c = forced_amplitude(p);
    let offset = p.alpha0 - p.alpha1;
    let part = |t: f64| {
        let e = Complex64::from_polar(1.0, p.nu * t);
        (offset + (c * e).re, (Complex64::i() * p.nu * c * e).re)
    };
    let (pu0, pv0) = part(t0);
    let (x0, dx0) = (u0 - pu0, v0 - pv0);
    let a = p.alpha1 / 2.0;
    let w = (1.0 - a * a).sqrt();
    let s = t - t0;
    let (cs, sn, g) = ((w * s).cos(), (w * s).sin(), (a * s).exp());
    let k = (dx0 - a * x0) / w;
    let x = g * (x0 * cs + k * sn);
    let dx = g * (a * (x0 * cs + k * sn) + (-x0 * w * sn + k * w * cs));
    let (pu, pv) = part(t);
    (pu + x, pv + dx)
}
