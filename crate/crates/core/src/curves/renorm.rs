//! Skew tent renormalisation and the component-doubling residuals.

/// `zeta(s_l, s_r) = s_l s_r + s_l - s_r`; the skew tent map with positive
/// offset has a bounded attractor for `s_l > 1`, `s_r < -1` iff this is positive.
pub fn zeta(s_l: f64, s_r: f64) -> f64 {
    s_l * s_r + s_l - s_r
}

/// Slopes of the second iterate near the fixed point: `(s_r^2, s_l s_r)`.
pub fn renorm_g(s_l: f64, s_r: f64) -> (f64, f64) {
    (s_r * s_r, s_l * s_r)
}

pub fn renorm_g_pow(k: usize, s: (f64, f64)) -> (f64, f64) {
    (0..k).fold(s, |s, _| renorm_g(s.0, s.1))
}

/// `zeta(g^k(s_l, s_r))`: zero where the skew tent attractor goes from
/// `2^{k-1}` to `2^k` intervals (`k = 0` is the boundary of existence).
pub fn doubling_residual_1d(k: usize, s_l: f64, s_r: f64) -> f64 {
    let s = renorm_g_pow(k, (s_l, s_r));
    zeta(s.0, s.1)
}

/// Slopes of the induced skew tent map for `mu < 0`: on the region of the
/// attractor that maps into the left half-plane the second iterate has the
/// rank-one pieces `f_L^2` and `f_L o f_R`, with traces
/// `(tau_l^2, tau_l tau_r - delta_r)`.
pub fn g_minus(tau_l: f64, tau_r: f64, delta_r: f64) -> (f64, f64) {
    (tau_l * tau_l, tau_l * tau_r - delta_r)
}

/// Parameters `(tau_l, tau_r, delta_r)` of the map conjugate to the second
/// iterate near the right fixed point when `mu > 0`. Its sign of `mu` is
/// reversed.
///
/// The second iterate has pieces `f_R^2` (trace `tau_r^2 - 2 delta_r`,
/// determinant `delta_r^2`) and `f_L o f_R` (trace `tau_l tau_r - delta_r`,
/// determinant zero); swapping sides to put the zero determinant on the
/// left gives these values.
pub fn renorm_plus(tau_l: f64, tau_r: f64, delta_r: f64) -> (f64, f64, f64) {
    (tau_l * tau_r - delta_r, tau_r * tau_r - 2.0 * delta_r, delta_r * delta_r)
}

/// Residual whose zero set is where chaotic attractors change from
/// `2^{k-1}` to `2^k` components when `mu < 0`: `zeta(g^{k-1}(g_minus))`.
pub fn xi_residual_negative(k: usize, tau_l: f64, tau_r: f64, delta_r: f64) -> f64 {
    assert!(k >= 1);
    let s = renorm_g_pow(k - 1, g_minus(tau_l, tau_r, delta_r));
    zeta(s.0, s.1)
}

/// The `mu > 0` counterpart of [`xi_residual_negative`].
///
/// For `k >= 2` one renormalisation step maps to the `mu < 0` case with
/// index `k - 1`. For `k = 1` the two pieces of the attractor merge when the
/// third image of the corner of the right fixed point's unstable manifold
/// (where it first meets the switching line) lands on that fixed point's
/// stable manifold. This needs the fixed point to be a flip saddle; the
/// residual is NaN otherwise.
pub fn xi_residual_positive(k: usize, tau_l: f64, tau_r: f64, delta_r: f64) -> f64 {
    assert!(k >= 1);
    if k >= 2 {
        let (a, b, c) = renorm_plus(tau_l, tau_r, delta_r);
        return xi_residual_negative(k - 1, a, b, c);
    }
    let disc = tau_r * tau_r - 4.0 * delta_r;
    if disc < 0.0 {
        return f64::NAN;
    }
    let s = disc.sqrt();
    let lambda_u = 0.5 * (tau_r - s);
    let lambda_s = 0.5 * (tau_r + s);
    if lambda_u >= -1.0 || lambda_s.abs() >= 1.0 {
        return f64::NAN;
    }
    // With mu = 1: the corner's image sits at x = 1/(1 - lambda_s) on the
    // axis, and the stable manifold meets the axis at 1/(1 - lambda_u).
    let x3 = (tau_l * tau_r - delta_r) / (1.0 - lambda_s) + 1.0 + tau_l;
    x3 * (1.0 - lambda_u) - 1.0
}
