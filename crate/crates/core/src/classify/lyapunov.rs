use crate::maps::{jacobian, side_of, step, MapError, NormalFormParams, PlanePoint};

/// Steps used to align the tangent vector before averaging starts.
pub const TANGENT_WARMUP: usize = 32;

/// Largest Lyapunov exponent along the orbit of `p0`: a tangent vector is
/// propagated with the piece Jacobians and renormalised every step, and the
/// mean log growth over `n` steps is returned after [`TANGENT_WARMUP`]
/// alignment steps.
///
/// A tangent vector annihilated exactly (possible because the left piece has
/// rank one) gives negative infinity.
pub fn lyapunov_max(params: &NormalFormParams, p0: PlanePoint, n: usize, bound: f64) -> Result<f64, MapError> {
    let mut z = p0;
    let mut v = [0.6, 0.8];
    let mut sum = 0.0;
    for i in 0..TANGENT_WARMUP + n {
        let a = jacobian(side_of(z.x), params);
        let w = a.apply(v);
        let g = w[0].hypot(w[1]);
        if g == 0.0 {
            return Ok(f64::NEG_INFINITY);
        }
        v = [w[0] / g, w[1] / g];
        if i >= TANGENT_WARMUP {
            sum += g.ln();
        }
        z = step(z, params);
        if !(z.norm() <= bound) {
            return Err(MapError::Diverged { index: i + 1 });
        }
    }
    Ok(sum / n as f64)
}
