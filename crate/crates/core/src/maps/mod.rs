//! The piecewise-linear map with a zero left determinant, its 1D skew tent
//! reduction, fixed points, Jacobians and periodic solutions.

mod cycle;
mod matrix;
mod word;

pub use cycle::{solve_cycle, CycleSolution};
pub use matrix::{EigenPair, Matrix2};
pub use word::{Side, Word, WordError};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MapError {
    #[error("parameter {name} is not finite ({value})")]
    NonFinite { name: &'static str, value: f64 },
    #[error("orbit left the bound at iterate {index}")]
    Diverged { index: usize },
    #[error("fixed point of the {0:?} piece is degenerate")]
    Degenerate(Side),
    #[error("cycle {word} is singular: det(I - M) = {det:e}")]
    Singular { word: String, det: f64 },
    #[error("cycle {word} does not close: residual {residual:e}")]
    NotClosed { word: String, residual: f64 },
    #[error(transparent)]
    Word(#[from] WordError),
}

/// Parameters of the normal form
/// `x' = tau_l x + y + mu, y' = 0` for `x <= 0` and
/// `x' = tau_r x + y + mu, y' = -delta_r x` for `x >= 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormalFormParams {
    pub tau_l: f64,
    pub tau_r: f64,
    pub delta_r: f64,
    pub mu: f64,
}

impl NormalFormParams {
    pub fn new(tau_l: f64, tau_r: f64, delta_r: f64, mu: f64) -> Result<Self, MapError> {
        for (name, value) in [
            ("tau_L", tau_l),
            ("tau_R", tau_r),
            ("delta_R", delta_r),
            ("mu", mu),
        ] {
            if !value.is_finite() {
                return Err(MapError::NonFinite { name, value });
            }
        }
        Ok(Self {
            tau_l,
            tau_r,
            delta_r,
            mu,
        })
    }

    pub fn with_right(self, tau_r: f64, delta_r: f64) -> Self {
        Self {
            tau_r,
            delta_r,
            ..self
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PlanePoint {
    pub x: f64,
    pub y: f64,
}

impl PlanePoint {
    pub const ORIGIN: PlanePoint = PlanePoint { x: 0.0, y: 0.0 };

    pub fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn dist(self, other: PlanePoint) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

/// Applies the given piece regardless of the sign of `x`.
#[inline]
pub fn apply_piece(side: Side, p: PlanePoint, params: &NormalFormParams) -> PlanePoint {
    match side {
        Side::L => PlanePoint {
            x: params.tau_l * p.x + p.y + params.mu,
            y: 0.0,
        },
        Side::R => PlanePoint {
            x: params.tau_r * p.x + p.y + params.mu,
            y: -params.delta_r * p.x,
        },
    }
}

/// The piece used at `x`; the switching line belongs to the left piece.
#[inline]
pub fn side_of(x: f64) -> Side {
    if x <= 0.0 {
        Side::L
    } else {
        Side::R
    }
}

#[inline]
pub fn step(p: PlanePoint, params: &NormalFormParams) -> PlanePoint {
    apply_piece(side_of(p.x), p, params)
}

/// `n` iterates of `step` after `p0` (so `n + 1` points including `p0`).
/// Stops with [`MapError::Diverged`] once the Euclidean norm exceeds `bound`.
pub fn orbit(
    p0: PlanePoint,
    params: &NormalFormParams,
    n: usize,
    bound: f64,
) -> Result<Vec<PlanePoint>, MapError> {
    let mut out = Vec::with_capacity(n + 1);
    let mut p = p0;
    out.push(p);
    for index in 1..=n {
        p = step(p, params);
        if !(p.norm() <= bound) {
            return Err(MapError::Diverged { index });
        }
        out.push(p);
    }
    Ok(out)
}

/// Skew tent map `x -> s_l x + eta` (x <= 0), `s_r x + eta` (x >= 0).
#[inline]
pub fn skew_tent_step(x: f64, s_l: f64, s_r: f64, eta: f64) -> f64 {
    if x <= 0.0 {
        s_l * x + eta
    } else {
        s_r * x + eta
    }
}

/// 1D reduction of the normal form when `delta_r = 0`. Returns `(s_l, s_r, eta)`
/// together with the orientation of the reduction (`true` when `x` is flipped).
///
/// For `mu >= 0` the x-coordinate obeys the skew tent map with slopes
/// `(tau_l, tau_r)`. For `mu < 0` the substitution `x -> -x` swaps the slopes
/// and makes the offset positive.
pub fn skew_tent_reduction(params: &NormalFormParams) -> (f64, f64, f64, bool) {
    if params.mu < 0.0 {
        (params.tau_r, params.tau_l, -params.mu, true)
    } else {
        (params.tau_l, params.tau_r, params.mu, false)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FixedPoint {
    pub point: PlanePoint,
    /// True when the point lies strictly on the side of the piece that generated it.
    pub admissible: bool,
}

const DEGENERATE_EPS: f64 = 4.0 * f64::EPSILON;

pub fn fixed_point_right(params: &NormalFormParams) -> Result<FixedPoint, MapError> {
    let den = 1.0 - params.tau_r + params.delta_r;
    if den.abs() <= DEGENERATE_EPS * (1.0 + params.tau_r.abs() + params.delta_r.abs()) {
        return Err(MapError::Degenerate(Side::R));
    }
    let x = params.mu / den;
    Ok(FixedPoint {
        point: PlanePoint::new(x, -params.delta_r * x),
        admissible: x > 0.0,
    })
}

pub fn fixed_point_left(params: &NormalFormParams) -> Result<FixedPoint, MapError> {
    let den = 1.0 - params.tau_l;
    if den.abs() <= DEGENERATE_EPS * (1.0 + params.tau_l.abs()) {
        return Err(MapError::Degenerate(Side::L));
    }
    let x = params.mu / den;
    Ok(FixedPoint {
        point: PlanePoint::new(x, 0.0),
        admissible: x < 0.0,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StabilityReport {
    pub stable_left: bool,
    pub stable_right: bool,
}

/// Asymptotic stability of the admissible fixed points.
///
/// The right fixed point is stable iff it is admissible and both eigenvalues
/// of `A_R` lie in the unit disc (the triangle `|tau_r| - 1 < delta_r < 1`).
/// The left one iff admissible and `|tau_l| < 1`.
pub fn fixed_point_stability(params: &NormalFormParams) -> Result<StabilityReport, MapError> {
    let right = fixed_point_right(params)?;
    let left = fixed_point_left(params)?;
    let in_triangle = params.tau_r.abs() - 1.0 < params.delta_r && params.delta_r < 1.0;
    Ok(StabilityReport {
        stable_left: left.admissible && params.tau_l.abs() < 1.0,
        stable_right: right.admissible && in_triangle,
    })
}

pub fn jacobian(side: Side, params: &NormalFormParams) -> Matrix2 {
    match side {
        Side::L => Matrix2::new(params.tau_l, 1.0, 0.0, 0.0),
        Side::R => Matrix2::new(params.tau_r, 1.0, -params.delta_r, 0.0),
    }
}

/// `q_0 ..= q_n` of the recurrence `q_k = tau_r q_{k-1} - delta_r q_{k-2}`,
/// `q_0 = 0`, `q_1 = 1`.
pub fn q_sequence(n: usize, tau_r: f64, delta_r: f64) -> Vec<f64> {
    let mut q = Vec::with_capacity(n + 1);
    q.push(0.0);
    if n >= 1 {
        q.push(1.0);
    }
    for k in 2..=n {
        let next = tau_r * q[k - 1] - delta_r * q[k - 2];
        q.push(next);
    }
    q
}

/// `q_n` alone.
pub fn q_n(n: usize, tau_r: f64, delta_r: f64) -> f64 {
    let (mut a, mut b) = (0.0, 1.0);
    if n == 0 {
        return 0.0;
    }
    for _ in 1..n {
        let c = tau_r * b - delta_r * a;
        a = b;
        b = c;
    }
    b
}

/// `A_R^n` in closed form: `[[q_{n+1}, q_n], [-delta_r q_n, q_{n+1} - tau_r q_n]]`.
pub fn power_ar(n: usize, params: &NormalFormParams) -> Matrix2 {
    let qn = q_n(n, params.tau_r, params.delta_r);
    let qn1 = q_n(n + 1, params.tau_r, params.delta_r);
    Matrix2::new(qn1, qn, -params.delta_r * qn, qn1 - params.tau_r * qn)
}

/// Product `A_{X_{p-1}} ... A_{X_0}` along the word.
pub fn cycle_matrix(word: &Word, params: &NormalFormParams) -> Matrix2 {
    word.symbols()
        .iter()
        .fold(Matrix2::IDENTITY, |m, &s| jacobian(s, params) * m)
}

/// `trace(A_L A_R^{p-1}) = tau_l q_p - delta_r q_{p-1}`.
pub fn trace_lr_pow(p: usize, params: &NormalFormParams) -> f64 {
    assert!(p >= 1, "period must be positive");
    let q = q_sequence(p, params.tau_r, params.delta_r);
    params.tau_l * q[p] - if p >= 1 { params.delta_r * q[p - 1] } else { 0.0 }
}

/// `trace(A_L^2 A_R^{p-2}) = tau_l^2 q_{p-1} - tau_l delta_r q_{p-2}`.
pub fn trace_l2r_pow(p: usize, params: &NormalFormParams) -> f64 {
    assert!(p >= 2, "period must be at least two");
    let q = q_sequence(p - 1, params.tau_r, params.delta_r);
    let qm2 = if p >= 2 { q[p - 2] } else { 0.0 };
    params.tau_l * params.tau_l * q[p - 1] - params.tau_l * params.delta_r * qm2
}

/// `trace(A_L^{p-1} A_R) = tau_l^{p-1} tau_r - tau_l^{p-2} delta_r` for `p >= 2`.
pub fn trace_lpr(p: usize, params: &NormalFormParams) -> f64 {
    assert!(p >= 2, "period must be at least two");
    let tl = params.tau_l;
    tl.powi(p as i32 - 2) * (tl * params.tau_r - params.delta_r)
}
