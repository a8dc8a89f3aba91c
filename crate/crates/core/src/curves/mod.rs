//! Named bifurcation curves in the `(tau_R, delta_R)` plane: closed forms,
//! defining residuals, numerical tracing and a CSV encoding.

pub mod formulas;
pub mod renorm;
pub mod trace;

pub use renorm::{doubling_residual_1d, g_minus, renorm_g, renorm_plus, xi_residual_negative, xi_residual_positive, zeta};
pub use trace::{bisect, roots_on_line, trace_implicit, ParamPoint, TraceConfig, Window};

use crate::maps::{cycle_matrix, solve_cycle, step, NormalFormParams, PlanePoint, Word};
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CurveError {
    #[error("{what} is undefined at tau_L = {tau_l}")]
    Domain { what: String, tau_l: f64 },
    #[error("no closed form for {0}")]
    NoClosedForm(CurveId),
    #[error("{0} is not a valid curve")]
    Invalid(String),
    #[error("bad curve csv: {0}")]
    Csv(String),
}

/// Family of periodic solutions whose region boundaries are being described.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Regime {
    /// `LR^{p-1}` cycles, `mu < 0`.
    LR,
    /// `L^2 R^{p-2}` cycles, `mu > 0`.
    L2R,
    /// `L^{p-1} R` cycles, `mu > 0`.
    LpR,
}

impl Regime {
    pub fn word(self, p: usize) -> Word {
        match self {
            Regime::LR => Word::lr_pow(p),
            Regime::L2R => Word::l2r_pow(p),
            Regime::LpR => Word::lpr(p),
        }
    }

    pub fn mu(self) -> f64 {
        match self {
            Regime::LR => -1.0,
            Regime::L2R | Regime::LpR => 1.0,
        }
    }

    pub fn min_period(self) -> usize {
        match self {
            Regime::LR => 2,
            Regime::L2R | Regime::LpR => 3,
        }
    }

    fn tag(self) -> &'static str {
        match self {
            Regime::LR => "LR",
            Regime::L2R => "L2R",
            Regime::LpR => "LpR",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CurveId {
    /// A multiplier of the cycle is `1`.
    Alpha(Regime, usize),
    /// A multiplier of the cycle is `-1`.
    Beta(Regime, usize),
    /// Border collision bounding the cycle's region.
    Gamma(Regime, usize),
    /// Border collision of a different cycle point.
    GammaPrime(Regime, usize),
    /// Homoclinic corner: the `n`-th image of the origin is the left fixed
    /// point (`mu > 0`); for `mu < 0` only `n = 3` exists, as a line.
    Eta(usize),
    /// Chaotic attractor goes from `2^{k-1}` to `2^k` pieces.
    Xi(usize),
    Theta(usize),
    Kappa(usize),
    Superstable,
    Centre,
    /// Edges of `|tau_R| - 1 < delta_R < 1`: 0 top, 1 right, 2 left.
    TriangleEdge(u8),
}

impl CurveId {
    pub fn validate(self) -> Result<Self, CurveError> {
        let ok = match self {
            CurveId::Alpha(r, p) | CurveId::Beta(r, p) => p >= r.min_period(),
            CurveId::Gamma(r, p) => p >= r.min_period() && r != Regime::LpR,
            CurveId::GammaPrime(r, p) => p >= 3 && r != Regime::LR,
            CurveId::Eta(n) => n >= 3,
            CurveId::Xi(k) => k >= 1,
            CurveId::Theta(j) => (1..=3).contains(&j),
            CurveId::Kappa(n) => n >= 2,
            CurveId::Superstable | CurveId::Centre => true,
            CurveId::TriangleEdge(e) => e < 3,
        };
        if ok {
            Ok(self)
        } else {
            Err(CurveError::Invalid(self.to_string()))
        }
    }

    /// Index, in the order of [`solve_cycle`], of the cycle point lying on
    /// `x = 0` along a border-collision curve.
    pub fn hitting_index(self) -> Option<usize> {
        match self {
            CurveId::Gamma(Regime::LR, 2) => Some(0),
            // The last right point, which maps into the left half-plane.
            CurveId::Gamma(Regime::LR, p) => Some(p - 1),
            CurveId::Gamma(Regime::L2R, _) => Some(0),
            CurveId::GammaPrime(Regime::L2R, _) => Some(1),
            CurveId::GammaPrime(Regime::LpR, p) => Some(p - 2),
            _ => None,
        }
    }

    /// True for curves given by an explicit formula `delta_R(tau_R)`.
    pub fn has_closed_form(self, mu: f64) -> bool {
        match self {
            CurveId::Alpha(Regime::LR, 2)
            | CurveId::Beta(Regime::LR, 2)
            | CurveId::Gamma(Regime::LR, 2 | 3)
            | CurveId::Alpha(Regime::L2R, 3)
            | CurveId::Gamma(Regime::L2R, 3)
            | CurveId::GammaPrime(Regime::L2R, 3)
            | CurveId::Beta(Regime::LpR, _)
            | CurveId::GammaPrime(Regime::LpR, _)
            | CurveId::Centre
            | CurveId::TriangleEdge(_) => true,
            CurveId::Eta(3) | CurveId::Xi(1) => mu < 0.0,
            _ => false,
        }
    }
}

impl fmt::Display for CurveId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CurveId::Alpha(r, p) => write!(f, "alpha{p}:{}", r.tag()),
            CurveId::Beta(r, p) => write!(f, "beta{p}:{}", r.tag()),
            CurveId::Gamma(r, p) => write!(f, "gamma{p}:{}", r.tag()),
            CurveId::GammaPrime(r, p) => write!(f, "gammap{p}:{}", r.tag()),
            CurveId::Eta(n) => write!(f, "eta{n}"),
            CurveId::Xi(k) => write!(f, "xi{k}"),
            CurveId::Theta(j) => write!(f, "theta{j}"),
            CurveId::Kappa(n) => write!(f, "kappa{n}"),
            CurveId::Superstable => write!(f, "superstable"),
            CurveId::Centre => write!(f, "centre"),
            CurveId::TriangleEdge(e) => write!(f, "triangle{e}"),
        }
    }
}

impl FromStr for CurveId {
    type Err = CurveError;

    /// Parses the [`fmt::Display`] form. The regime tag may be omitted, in
    /// which case `alpha2`, `beta2`, `gamma2`, `gamma3` default to `LR`,
    /// `alpha3` and `gammap3` to `L2R`, and other `beta`/`gammap` to `LpR`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || CurveError::Invalid(s.to_string());
        let (head, tag) = match s.split_once(':') {
            Some((h, t)) => (h, Some(t)),
            None => (s, None),
        };
        let regime = match tag {
            None => None,
            Some("LR") => Some(Regime::LR),
            Some("L2R") => Some(Regime::L2R),
            Some("LpR") => Some(Regime::LpR),
            Some(_) => return Err(bad()),
        };
        match head {
            "superstable" => return CurveId::Superstable.validate(),
            "centre" | "center" => return CurveId::Centre.validate(),
            _ => {}
        }
        let split = head.find(|c: char| c.is_ascii_digit()).ok_or_else(bad)?;
        let (name, num) = head.split_at(split);
        let n: usize = num.parse().map_err(|_| bad())?;
        let id = match name {
            "alpha" => CurveId::Alpha(regime.unwrap_or(if n == 3 { Regime::L2R } else { Regime::LR }), n),
            "beta" => CurveId::Beta(regime.unwrap_or(if n == 2 { Regime::LR } else { Regime::LpR }), n),
            "gamma" => CurveId::Gamma(regime.unwrap_or(Regime::LR), n),
            "gammap" => CurveId::GammaPrime(regime.unwrap_or(if n == 3 { Regime::L2R } else { Regime::LpR }), n),
            "eta" => CurveId::Eta(n),
            "xi" => CurveId::Xi(n),
            "theta" => CurveId::Theta(n),
            "kappa" => CurveId::Kappa(n),
            "triangle" => CurveId::TriangleEdge(u8::try_from(n).map_err(|_| bad())?),
            _ => return Err(bad()),
        };
        if regime.is_some() && !matches!(name, "alpha" | "beta" | "gamma" | "gammap") {
            return Err(bad());
        }
        id.validate()
    }
}

fn need(tau_l: f64, ok: bool, what: &str) -> Result<(), CurveError> {
    if ok {
        Ok(())
    } else {
        Err(CurveError::Domain {
            what: what.to_string(),
            tau_l,
        })
    }
}

/// `delta_R` on a curve with a closed form, at the given `tau_R`.
pub fn explicit_line(id: CurveId, tau_l: f64, tau_r: f64, mu: f64) -> Result<f64, CurveError> {
    use formulas as fm;
    let nonzero = |what| need(tau_l, tau_l != 0.0, what);
    Ok(match id {
        CurveId::Alpha(Regime::LR, 2) => fm::alpha2(tau_l, tau_r),
        CurveId::Beta(Regime::LR, 2) => fm::beta2(tau_l, tau_r),
        CurveId::Gamma(Regime::LR, 2) => fm::gamma2(tau_l, tau_r),
        CurveId::Gamma(Regime::LR, 3) => {
            nonzero("gamma3")?;
            fm::gamma3(tau_l, tau_r)
        }
        CurveId::Alpha(Regime::L2R, 3) => {
            nonzero("alpha3")?;
            fm::alpha3_l2r(tau_l, tau_r)
        }
        CurveId::Gamma(Regime::L2R, 3) => {
            nonzero("gamma3")?;
            fm::gamma3_l2r(tau_l, tau_r)
        }
        CurveId::GammaPrime(Regime::L2R, 3) => fm::gamma3p_l2r(tau_l, tau_r),
        CurveId::Beta(Regime::LpR, p) if p >= 3 => {
            nonzero("beta")?;
            fm::beta_lpr(p, tau_l, tau_r)
        }
        CurveId::GammaPrime(Regime::LpR, p) if p >= 3 => {
            nonzero("gammap")?;
            need(tau_l, tau_l != 1.0, "gammap")?;
            fm::gamma_p_lpr(p, tau_l, tau_r)
        }
        CurveId::Eta(3) if mu < 0.0 => {
            need(tau_l, tau_l != -1.0, "eta3")?;
            fm::eta3(tau_l, tau_r)
        }
        CurveId::Xi(1) if mu < 0.0 => {
            need(tau_l, tau_l.abs() != 1.0, "xi1")?;
            fm::xi1_negative(tau_l, tau_r)
        }
        CurveId::Centre | CurveId::TriangleEdge(0) => 1.0,
        CurveId::TriangleEdge(1) => tau_r - 1.0,
        CurveId::TriangleEdge(2) => -tau_r - 1.0,
        _ => return Err(CurveError::NoClosedForm(id)),
    })
}

fn cycle_point_x(word: &Word, index: usize, params: &NormalFormParams) -> f64 {
    solve_cycle(word, params).map_or(f64::NAN, |s| s.points[index].x)
}

/// The defining residual of a curve as a function of `(tau_R, delta_R)`,
/// independent of any closed form. Border collisions use the designated
/// point of the solved cycle; homoclinic corners use the x-difference
/// (the y-difference is checked separately by [`trace_curve`]).
pub fn residual(id: CurveId, tau_l: f64, mu: f64) -> Result<Box<dyn Fn(f64, f64) -> f64 + Sync>, CurveError> {
    id.validate()?;
    let params = move |t: f64, d: f64| NormalFormParams {
        tau_l,
        tau_r: t,
        delta_r: d,
        mu,
    };
    Ok(match id {
        CurveId::Alpha(r, p) | CurveId::Beta(r, p) => {
            let word = r.word(p);
            let target = if matches!(id, CurveId::Alpha(..)) { 1.0 } else { -1.0 };
            Box::new(move |t, d| cycle_matrix(&word, &params(t, d)).trace() - target)
        }
        CurveId::Gamma(r, p) | CurveId::GammaPrime(r, p) => {
            let word = r.word(p);
            let idx = id.hitting_index().ok_or_else(|| CurveError::Invalid(id.to_string()))?;
            Box::new(move |t, d| cycle_point_x(&word, idx, &params(t, d)))
        }
        CurveId::Eta(3) if mu < 0.0 => {
            // The L^2 R cycle point following the right point sits at -mu.
            let word: Word = "LRL".parse().expect("literal word");
            Box::new(move |t, d| cycle_point_x(&word, 0, &params(t, d)) + mu.abs())
        }
        CurveId::Eta(n) => Box::new(move |t, d| formulas::eta_residual(n, &params(t, d)).0),
        CurveId::Xi(k) => {
            if mu < 0.0 {
                Box::new(move |t, d| xi_residual_negative(k, tau_l, t, d))
            } else {
                Box::new(move |t, d| xi_residual_positive(k, tau_l, t, d))
            }
        }
        CurveId::Theta(j) => Box::new(move |t, d| formulas::theta_residual(j, t, d)),
        CurveId::Kappa(n) => Box::new(move |t, d| formulas::kappa_first_component(n, t, d)),
        CurveId::Superstable => Box::new(move |t, d| formulas::superstable_residual(tau_l, t, d)),
        CurveId::Centre | CurveId::TriangleEdge(_) => {
            let f = move |t: f64, d: f64| explicit_line(id, tau_l, t, mu).map_or(f64::NAN, |v| d - v);
            Box::new(f)
        }
    })
}

/// A traced curve: one or more branches, each ordered by increasing `tau_R`.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveSample {
    pub id: CurveId,
    pub tau_l: f64,
    pub mu: f64,
    pub branches: Vec<Vec<ParamPoint>>,
}

impl CurveSample {
    pub fn points(&self) -> impl Iterator<Item = &ParamPoint> {
        self.branches.iter().flatten()
    }

    pub fn is_empty(&self) -> bool {
        self.points().next().is_none()
    }

    /// Header `curve_id,tau_L,mu` and its values, then `tau_R,delta_R`
    /// rows with a blank line between branches. Numbers carry 17
    /// significant digits so the file round-trips exactly.
    pub fn to_csv(&self) -> String {
        let mut out = format!("curve_id,tau_L,mu\n{},{:.16e},{:.16e}\ntau_R,delta_R\n", self.id, self.tau_l, self.mu);
        for (i, b) in self.branches.iter().enumerate() {
            if i > 0 {
                out.push('\n');
            }
            for p in b {
                out.push_str(&format!("{:.16e},{:.16e}\n", p.tau_r, p.delta_r));
            }
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Self, CurveError> {
        let err = |m: &str| CurveError::Csv(m.to_string());
        let mut lines = text.lines();
        if lines.next().map(str::trim) != Some("curve_id,tau_L,mu") {
            return Err(err("missing header"));
        }
        let meta = lines.next().ok_or_else(|| err("missing curve line"))?;
        let f: Vec<&str> = meta.split(',').collect();
        if f.len() != 3 {
            return Err(err("curve line needs three fields"));
        }
        let num = |s: &str| s.trim().parse::<f64>().map_err(|_| err(&format!("bad number {s:?}")));
        let id: CurveId = f[0].trim().parse()?;
        let (tau_l, mu) = (num(f[1])?, num(f[2])?);
        if lines.next().map(str::trim) != Some("tau_R,delta_R") {
            return Err(err("missing point header"));
        }
        let mut branches = vec![Vec::new()];
        for line in lines {
            let line = line.trim();
            if line.is_empty() {
                branches.push(Vec::new());
                continue;
            }
            let (a, b) = line.split_once(',').ok_or_else(|| err("point rows need two fields"))?;
            branches.last_mut().expect("non-empty").push(ParamPoint {
                tau_r: num(a)?,
                delta_r: num(b)?,
            });
        }
        branches.retain(|b| !b.is_empty());
        Ok(Self { id, tau_l, mu, branches })
    }
}

/// Traces a curve over `window`. Closed forms are evaluated on the column
/// grid and clipped to the window; everything else is traced from its
/// residual. Homoclinic corners keep only roots where the y-difference also
/// vanishes.
pub fn trace_curve(id: CurveId, tau_l: f64, mu: f64, window: Window, cfg: &TraceConfig) -> Result<CurveSample, CurveError> {
    id.validate()?;
    let branches = if id.has_closed_form(mu) {
        closed_form_branches(id, tau_l, mu, window, cfg)?
    } else {
        let f = residual(id, tau_l, mu)?;
        let mut lines = trace_implicit(f, window, cfg);
        if let CurveId::Eta(n) = id {
            let y_ok = |p: &ParamPoint| {
                let pr = NormalFormParams {
                    tau_l,
                    tau_r: p.tau_r,
                    delta_r: p.delta_r,
                    mu,
                };
                formulas::eta_residual(n, &pr).1.abs() < 1e-6
            };
            lines = split_where(lines, y_ok);
        }
        lines
    };
    Ok(CurveSample { id, tau_l, mu, branches })
}

fn closed_form_branches(
    id: CurveId,
    tau_l: f64,
    mu: f64,
    window: Window,
    cfg: &TraceConfig,
) -> Result<Vec<Vec<ParamPoint>>, CurveError> {
    let n = cfg.columns.max(2);
    let mut pts = Vec::with_capacity(n);
    for i in 0..n {
        let t = window.tau_r.0 + (window.tau_r.1 - window.tau_r.0) * i as f64 / (n - 1) as f64;
        let d = explicit_line(id, tau_l, t, mu)?;
        pts.push((t, d));
    }
    Ok(split_where(
        vec![pts.into_iter().map(|(tau_r, delta_r)| ParamPoint { tau_r, delta_r }).collect()],
        |p| window.contains(p.tau_r, p.delta_r),
    ))
}

/// Drops points failing `keep`, splitting branches at the gaps.
fn split_where(lines: Vec<Vec<ParamPoint>>, keep: impl Fn(&ParamPoint) -> bool) -> Vec<Vec<ParamPoint>> {
    let mut out = Vec::new();
    for line in lines {
        let mut cur = Vec::new();
        for p in line {
            if keep(&p) {
                cur.push(p);
            } else if !cur.is_empty() {
                out.push(std::mem::take(&mut cur));
            }
        }
        if !cur.is_empty() {
            out.push(cur);
        }
    }
    out
}

/// The three edges of the stability triangle of the right fixed point.
pub fn stability_triangle(window: Window) -> Vec<CurveSample> {
    let cfg = TraceConfig::default();
    (0..3)
        .map(|e| trace_curve(CurveId::TriangleEdge(e), 0.0, 1.0, window, &cfg).expect("edges have closed forms"))
        .collect()
}

/// One step of the induced map on the x-axis: from `(x, 0)`, the first later
/// point of the orbit with `y = 0`. Such points are exactly the images of
/// points in `x <= 0`, so the orbit is followed until it passes through the
/// left half-plane. `None` if that takes more than `max_steps` or the orbit
/// leaves the disc of radius `bound`.
pub fn induced_axis_map(x: f64, params: &NormalFormParams, max_steps: usize, bound: f64) -> Option<f64> {
    let mut z = PlanePoint::new(x, 0.0);
    for _ in 0..max_steps {
        let left = z.x <= 0.0;
        z = step(z, params);
        if !(z.norm() <= bound) {
            return None;
        }
        if left || z.y == 0.0 {
            return Some(z.x);
        }
    }
    None
}

/// Return map on the x-axis near the right point of an `L^{p-1} R` cycle
/// (for `mu > 0`), valid while the orbit follows that itinerary.
pub fn induced_return(x: f64, p: usize, params: &NormalFormParams) -> Result<f64, CurveError> {
    need(params.tau_l, params.tau_l != 1.0, "induced return map")?;
    let (slope, offset) = formulas::lpr_return_map(p, params);
    Ok(slope * x + offset)
}

/// `tau_R = 2 cos(2 pi rho)`, where regions of rotation number `rho`
/// meet the centre line `delta_R = 1`.
pub fn rotation_anchor(rho: f64) -> f64 {
    formulas::rotation_anchor(rho).0
}

/// The point `(x, 0)` reaching `x = 0` after two right-piece steps.
pub fn x_tilde(tau_r: f64, delta_r: f64) -> Result<f64, CurveError> {
    if delta_r == tau_r * tau_r {
        return Err(CurveError::Domain {
            what: "x_tilde at delta_R = tau_R^2".into(),
            tau_l: f64::NAN,
        });
    }
    Ok(formulas::x_tilde(tau_r, delta_r))
}
