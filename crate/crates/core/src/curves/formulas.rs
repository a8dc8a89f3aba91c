//! Bifurcation curves available in closed form, plus residuals for the
//! implicitly defined ones.

use crate::maps::{apply_piece, fixed_point_left, q_n, step, NormalFormParams, PlanePoint, Side};

/// `delta_R` on the line where the attractor collides with the `L^2 R`
/// cycle, for `mu < 0`.
pub fn eta3(tau_l: f64, tau_r: f64) -> f64 {
    tau_l * tau_r + tau_l / (tau_l + 1.0)
}

/// Left point of the `L^2 R` cycle (itinerary starting `LRL`) for `mu = -1`.
pub fn x_lrl(tau_l: f64, tau_r: f64, delta_r: f64) -> f64 {
    (tau_l * tau_r + tau_l - delta_r + 1.0) / (tau_l * tau_l * tau_r - tau_l * delta_r - 1.0)
}

/// The `LR` cycle has multiplier `1`.
pub fn alpha2(tau_l: f64, tau_r: f64) -> f64 {
    tau_l * tau_r - 1.0
}

/// The `LR` cycle has multiplier `-1`.
pub fn beta2(tau_l: f64, tau_r: f64) -> f64 {
    tau_l * tau_r + 1.0
}

/// Border collision of the `LR` cycle (`mu < 0`).
pub fn gamma2(_tau_l: f64, tau_r: f64) -> f64 {
    -tau_r - 1.0
}

/// Border collision of the `LR^2` cycle (`mu < 0`).
pub fn gamma3(tau_l: f64, tau_r: f64) -> f64 {
    -((tau_l + 1.0) * tau_r + 1.0) / tau_l
}

/// The `L^2 R` cycle has multiplier `1`.
pub fn alpha3_l2r(tau_l: f64, tau_r: f64) -> f64 {
    tau_l * tau_r - 1.0 / tau_l
}

/// Border collision of the first left point of the `L^2 R` cycle (`mu > 0`).
pub fn gamma3_l2r(tau_l: f64, tau_r: f64) -> f64 {
    -tau_r - (1.0 + tau_r) / tau_l
}

/// Border collision of the second left point of the `L^2 R` cycle (`mu > 0`).
pub fn gamma3p_l2r(tau_l: f64, tau_r: f64) -> f64 {
    tau_l * tau_r + tau_l + 1.0
}

/// The `L^{p-1} R` cycle has multiplier `-1`.
pub fn beta_lpr(p: usize, tau_l: f64, tau_r: f64) -> f64 {
    tau_l * tau_r + 1.0 / tau_l.powi(p as i32 - 2)
}

/// Border collision of the `L^{p-1} R` cycle: its right point equals `mu`,
/// so the preceding left point sits at the origin.
pub fn gamma_p_lpr(p: usize, tau_l: f64, tau_r: f64) -> f64 {
    let tp = tau_l.powi(p as i32);
    tau_l * tau_r - (1.0 / tau_l.powi(p as i32 - 2)) * (1.0 - (1.0 - tp) / (1.0 - tau_l))
}

/// Slope-and-offset of the induced map on the x-axis near the right point
/// of an `L^{p-1} R` cycle: `x -> slope x + offset`.
pub fn lpr_return_map(p: usize, params: &NormalFormParams) -> (f64, f64) {
    let tl = params.tau_l;
    let slope = tl.powi(p as i32 - 2) * (tl * params.tau_r - params.delta_r);
    let offset = (1.0 - tl.powi(p as i32)) / (1.0 - tl) * params.mu;
    (slope, offset)
}

/// First component of the `xi_1` closed form for `mu < 0`.
pub fn xi1_negative(tau_l: f64, tau_r: f64) -> f64 {
    tau_l * tau_r + tau_l * tau_l / (tau_l * tau_l - 1.0)
}

/// Neimark-Sacker-like boundary of the right fixed point.
pub fn centre(_tau_l: f64, _tau_r: f64) -> f64 {
    1.0
}

/// Where the centre line meets the rotation number `rho`: `tau_R = 2 cos(2 pi rho)`.
pub fn rotation_anchor(rho: f64) -> (f64, f64) {
    (2.0 * (2.0 * std::f64::consts::PI * rho).cos(), 1.0)
}

/// Start point of the shrinking-point constructions: `(x, 0)` whose second
/// image under the right piece lies on `x = 0` (with `mu = 1`).
pub fn x_tilde(tau_r: f64, delta_r: f64) -> f64 {
    (tau_r + 1.0) / (delta_r - tau_r * tau_r)
}

/// Polynomials whose zero sets are the three shrinking-point curves.
pub fn theta_residual(j: usize, t: f64, d: f64) -> f64 {
    match j {
        1 => t.powi(3) + t * t * d + t * d * d + t * t - t * d - d,
        2 => t * t + t * d + d * d - d,
        3 => t.powi(3) + t * t * d + t * d * d + d.powi(3) - 2.0 * t * d - d * d,
        _ => panic!("theta curves are numbered 1 to 3"),
    }
}

/// Iterate indices `(j, k)` of the two switching-line hits for `theta_j`.
pub fn theta_hits(j: usize) -> (usize, usize) {
    match j {
        1 => (2, 4),
        2 => (2, 3),
        3 => (3, 4),
        _ => panic!("theta curves are numbered 1 to 3"),
    }
}

/// Direct check of the shrinking-point condition by iteration with `mu = 1`:
/// finds the point `(x, 0)` whose `j`-th image under the right piece lies on
/// `x = 0` and returns the x-components of its `j`-th and `k`-th images.
/// Only the right piece is applied; along the curves these iterates all lie
/// in `x >= 0`, which is why the curves do not depend on `tau_L`.
pub fn theta_iterate_check(j: usize, tau_r: f64, delta_r: f64) -> Option<(f64, f64)> {
    let (jj, kk) = theta_hits(j);
    let params = NormalFormParams::new(0.0, tau_r, delta_r, 1.0).ok()?;
    let image = |x: f64, n: usize| (0..n).fold(PlanePoint::new(x, 0.0), |z, _| apply_piece(Side::R, z, &params)).x;
    // x-component of f_R^jj(x, 0) is affine in x.
    let c = image(0.0, jj);
    let slope = image(1.0, jj) - c;
    if slope == 0.0 {
        return None;
    }
    let x = -c / slope;
    Some((image(x, jj), image(x, kk)))
}

/// `1 - q_{n+1} + delta_R q_n`, proportional to the first component of
/// `f_R^n(0, 0)` (with `mu = 1`) by the factor `1 - tau_R + delta_R`.
pub fn kappa_residual(n: usize, tau_r: f64, delta_r: f64) -> f64 {
    1.0 - q_n(n + 1, tau_r, delta_r) + delta_r * q_n(n, tau_r, delta_r)
}

/// First component of `f_R^n(0, 0)` with `mu = 1`, i.e. `q_1 + ... + q_n`.
pub fn kappa_first_component(n: usize, tau_r: f64, delta_r: f64) -> f64 {
    let (mut a, mut b, mut s) = (0.0, 1.0, 0.0);
    for _ in 0..n {
        s += b;
        let c = tau_r * b - delta_r * a;
        a = b;
        b = c;
    }
    s
}

/// `trace(A_L A_R^4)`, zero on the curve through the triangular region where
/// the `LR^4` cycle is superstable.
pub fn superstable_residual(tau_l: f64, tau_r: f64, delta_r: f64) -> f64 {
    (tau_l + 2.0 * tau_r) * delta_r * delta_r - (3.0 * tau_l + tau_r) * tau_r * tau_r * delta_r
        + tau_l * tau_r.powi(4)
}

/// x-difference between the `n`-th image of the origin and the left fixed
/// point, together with the y-difference (which vanishes when the previous
/// image lies in `x <= 0`). Homoclinic corners lie where both vanish.
pub fn eta_residual(n: usize, params: &NormalFormParams) -> (f64, f64) {
    let Ok(fl) = fixed_point_left(params) else {
        return (f64::NAN, f64::NAN);
    };
    let mut z = PlanePoint::ORIGIN;
    for _ in 0..n {
        z = step(z, params);
    }
    (z.x - fl.point.x, z.y - fl.point.y)
}
