//! Season-to-season influenza map. Each season either has no outbreak or
//! infects the fraction `p` solving a final-size equation; the map carries
//! the fully (`S`) and partially (`T`) susceptible fractions forward.

use crate::config::{ConfigError, KvConfig};
use crate::maps::NormalFormParams;
use rayon::prelude::*;
use std::fmt::Write as _;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FluError {
    #[error("invalid parameters: {0}")]
    Params(String),
    #[error("invalid state (S, T) = ({s}, {t})")]
    State { s: f64, t: f64 },
    #[error("no positive outbreak root at (S, T) = ({s}, {t})")]
    NoRoot { s: f64, t: f64 },
    #[error(transparent)]
    Config(#[from] ConfigError),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FluParams {
    pub k: f64,
    pub c: f64,
    pub r0: f64,
}

impl Default for FluParams {
    fn default() -> Self {
        Self { k: 0.45, c: 0.9, r0: 2.0 }
    }
}

pub const FLU_KEYS: &[&str] = &["k", "c", "R0"];

impl FluParams {
    pub fn validate(&self) -> Result<(), FluError> {
        let open_unit = |x: f64| x > 0.0 && x < 1.0;
        if !open_unit(self.k) {
            return Err(FluError::Params(format!("k = {} must lie in (0, 1)", self.k)));
        }
        if !open_unit(self.c) {
            return Err(FluError::Params(format!("c = {} must lie in (0, 1)", self.c)));
        }
        if !(self.r0 > 0.0 && self.r0.is_finite()) {
            return Err(FluError::Params(format!("R0 = {} must be positive", self.r0)));
        }
        Ok(())
    }

    /// Missing keys keep the values of `base`.
    pub fn from_kv(kv: &KvConfig, base: &Self) -> Result<Self, FluError> {
        let p = Self {
            k: kv.get_or("k", base.k)?,
            c: kv.get_or("c", base.c)?,
            r0: kv.get_or("R0", base.r0)?,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn to_kv(&self) -> KvConfig {
        let mut kv = KvConfig::default();
        kv.set("k", self.k);
        kv.set("c", self.c);
        kv.set("R0", self.r0);
        kv
    }

    /// Effective reproduction number `R0 (S + k T)`.
    pub fn r(&self, s: FluState) -> f64 {
        self.r0 * (s.s + self.k * s.t)
    }

    /// Normal form of the border collision at `R0 = 1`, with `mu = R0 - 1`.
    pub fn normal_form(&self) -> NormalFormParams {
        flu_normal_form(self.k, self.c, self.r0 - 1.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FluState {
    pub s: f64,
    pub t: f64,
}

impl FluState {
    pub fn new(s: f64, t: f64) -> Self {
        Self { s, t }
    }
}

/// `1 - e^(-x)` without cancellation for small `x`.
fn attack(x: f64) -> f64 {
    -(-x).exp_m1()
}

const P_EPS: f64 = 1e-14;
const NEWTON_TOL: f64 = 1e-13;

/// Fraction infected over the season. Zero when `r <= 1`, otherwise the
/// positive root of `p = S(1 - e^(-R0 p)) + T(1 - e^(-k R0 p))`.
pub fn outbreak_size(state: FluState, p: &FluParams) -> Result<f64, FluError> {
    let FluState { s, t } = state;
    if !(s >= 0.0 && t >= 0.0 && s.is_finite() && t.is_finite()) {
        return Err(FluError::State { s, t });
    }
    if p.r(state) <= 1.0 {
        return Ok(0.0);
    }
    let (a, b) = (p.r0, p.k * p.r0);
    let g = |x: f64| s * attack(a * x) + t * attack(b * x) - x;
    let dg = |x: f64| s * a * (-a * x).exp() + t * b * (-b * x).exp() - 1.0;

    // g > 0 just above zero since g'(0) = r - 1 > 0, and g(x) < S + T - x.
    let (mut lo, mut hi) = (P_EPS, (s + t).max(1.0));
    if !(g(lo) > 0.0 && g(hi) <= 0.0) {
        return Err(FluError::NoRoot { s, t });
    }
    while hi - lo > 1e-10 * hi {
        let m = 0.5 * (lo + hi);
        if g(m) > 0.0 {
            lo = m;
        } else {
            hi = m;
        }
    }
    let mut x = 0.5 * (lo + hi);
    for _ in 0..20 {
        let dx = g(x) / dg(x);
        x -= dx;
        if dx.abs() <= NEWTON_TOL * x.max(1e-300) {
            break;
        }
    }
    Ok(x)
}

pub fn flu_step(state: FluState, p: &FluParams) -> Result<FluState, FluError> {
    let q = outbreak_size(state, p)?;
    let n = state.s + state.t - 1.0;
    Ok(FluState { s: 1.0 + p.c * (n - q), t: -p.c * n })
}

/// `(tau_L, tau_R, delta_R) = (0, -2c, 2(1-k)c^2)`, left determinant zero.
pub fn flu_normal_form(k: f64, c: f64, mu: f64) -> NormalFormParams {
    NormalFormParams { tau_l: 0.0, tau_r: -2.0 * c, delta_r: 2.0 * (1.0 - k) * c * c, mu }
}

/// Ends `(k1, k2)` of the stable-fixed-point interval of the normal form at
/// `mu > 0`: `delta_R = 1` and `delta_R = -tau_R - 1`.
pub fn stable_window(c: f64) -> (f64, f64) {
    let c2 = c * c;
    (1.0 - 0.5 / c2, 1.0 - 1.0 / c + 0.5 / c2)
}

/// The outbreak-every-season fixed point, `S + T = 1 - c p` and `T = c^2 p`.
pub fn outbreak_fixed_point(p: &FluParams) -> Result<FluState, FluError> {
    let state = |q: f64| FluState { s: 1.0 - p.c * q - p.c * p.c * q, t: p.c * p.c * q };
    let h = |q: f64| outbreak_size(state(q), p).map(|o| o - q);
    // h(0+) > 0 iff the all-susceptible state has an outbreak.
    let (mut lo, mut hi) = (P_EPS, 1.0 / (1.0 + p.c + p.c * p.c));
    let (hl, hh) = (h(lo)?, h(hi)?);
    if !(hl > 0.0 && hh < 0.0) {
        return Err(FluError::Params(format!("no outbreak fixed point at R0 = {}", p.r0)));
    }
    while hi - lo > 1e-15 {
        let m = 0.5 * (lo + hi);
        if h(m)? > 0.0 {
            lo = m;
        } else {
            hi = m;
        }
    }
    Ok(state(0.5 * (lo + hi)))
}

/// Derivative of the outbreak branch, by implicit differentiation of the
/// final-size equation.
pub fn outbreak_jacobian(state: FluState, p: &FluParams) -> Result<[[f64; 2]; 2], FluError> {
    let q = outbreak_size(state, p)?;
    let (a, b) = (p.r0, p.k * p.r0);
    let gq = state.s * a * (-a * q).exp() + state.t * b * (-b * q).exp() - 1.0;
    let (qs, qt) = (-attack(a * q) / gq, -attack(b * q) / gq);
    Ok([[p.c * (1.0 - qs), p.c * (1.0 - qt)], [-p.c, -p.c]])
}

/// Value of `k` in `bracket` where the outbreak fixed point has an
/// eigenvalue `-1`, by bisection on `1 + trace + det`.
pub fn period_doubling_k(p: &FluParams, bracket: (f64, f64)) -> Result<f64, FluError> {
    let h = |k: f64| -> Result<f64, FluError> {
        let q = FluParams { k, ..*p };
        let j = outbreak_jacobian(outbreak_fixed_point(&q)?, &q)?;
        Ok(1.0 + j[0][0] + j[1][1] + j[0][0] * j[1][1] - j[0][1] * j[1][0])
    };
    let (mut lo, mut hi) = bracket;
    let sl = h(lo)?.signum();
    if sl == h(hi)?.signum() {
        return Err(FluError::Params(format!("no period doubling in [{lo}, {hi}]")));
    }
    while hi - lo > 1e-12 {
        let m = 0.5 * (lo + hi);
        if h(m)?.signum() == sl {
            lo = m;
        } else {
            hi = m;
        }
    }
    Ok(0.5 * (lo + hi))
}

pub const FLU_TRANSIENT: usize = 2000;
pub const FLU_RECORD: usize = 500;

#[derive(Debug, Clone, PartialEq)]
pub struct FluColumn {
    pub k: f64,
    pub s: Vec<f64>,
}

impl FluColumn {
    /// Number of recorded values that differ by more than `tol` from all
    /// earlier ones; the period for a periodic attractor.
    pub fn distinct(&self, tol: f64) -> usize {
        let mut seen: Vec<f64> = Vec::new();
        for &v in &self.s {
            if !seen.iter().any(|&w| (w - v).abs() <= tol) {
                seen.push(v);
            }
        }
        seen.len()
    }
}

/// Start of every diagram column.
pub const FLU_START: FluState = FluState { s: 0.5, t: 0.3 };

pub fn flu_column(p: &FluParams, start: FluState, transient: usize, record: usize) -> Result<FluColumn, FluError> {
    let mut x = start;
    for _ in 0..transient {
        x = flu_step(x, p)?;
    }
    let mut s = Vec::with_capacity(record);
    for _ in 0..record {
        x = flu_step(x, p)?;
        s.push(x.s);
    }
    Ok(FluColumn { k: p.k, s })
}

/// One column per `k`, computed in parallel.
pub fn flu_bif_diagram(
    p: &FluParams,
    ks: &[f64],
    transient: usize,
    record: usize,
) -> Result<Vec<FluColumn>, FluError> {
    ks.par_iter()
        .map(|&k| {
            let q = FluParams { k, ..*p };
            q.validate()?;
            flu_column(&q, FLU_START, transient, record)
        })
        .collect()
}

pub const FLU_HEADER: &str = "k,S";

pub fn flu_csv(cols: &[FluColumn]) -> String {
    let mut out = format!("{FLU_HEADER}\n");
    for c in cols {
        for s in &c.s {
            let _ = writeln!(out, "{},{s}", c.k);
        }
    }
    out
}
