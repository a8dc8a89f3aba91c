//! Poincaré maps on `v' = 0`, limit cycles, grazing-sliding detection and
//! the finite-difference reduction to the normal form.
//!
//! Points on the section are written `z = (v, t)`: with `v' = 0` on the
//! `v < 1` side, `u` follows from `v` and `t` explicitly. Orbits that stick
//! all leave through the fold `u = a0 + F cos(nu t)`, `v = 1`, which is a
//! section point, so the sliding piece has a one-dimensional range.

use super::{run, Control, EventKind, FilippovError, FlowOptions, FrictionParams, OscState};
use crate::maps::Matrix2;
use rayon::prelude::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Orientation {
    /// `v'` changes from positive to negative: maxima of the velocity.
    #[default]
    Maxima,
    Minima,
}

impl Orientation {
    pub(super) fn sign(self) -> f64 {
        match self {
            Orientation::Maxima => 1.0,
            Orientation::Minima => -1.0,
        }
    }
}

/// Point of the maxima section with velocity `v <= 1` at time `t`.
pub fn section_state(v: f64, t: f64, p: &FrictionParams) -> OscState {
    let w = 1.0 - v;
    let u = p.alpha0 - p.alpha1 * w + p.alpha2 * w * w * w + p.f * (p.nu * t).cos();
    OscState::slipping(u, v, t)
}

/// Crossings closer than this to the start are the start point itself.
const SELF_CROSSING: f64 = 1e-7;

/// Follows the orbit through `crossings` section crossings and returns the
/// state at the last one.
pub fn poincare_map(
    start: OscState,
    p: &FrictionParams,
    opts: &FlowOptions,
    crossings: usize,
    t_max: f64,
) -> Result<OscState, FilippovError> {
    let mut seen = 0;
    let mut last = None;
    let end = run(start, p, opts, start.t + t_max, None, |ev| {
        if ev.kind == EventKind::Section && ev.state.t - start.t > SELF_CROSSING {
            seen += 1;
            if seen == crossings {
                last = Some(ev.state);
                return Control::Stop;
            }
        }
        Control::Continue
    })?;
    last.ok_or(FilippovError::NoReturn { t: end.t })
}

/// A periodic orbit that crosses the section `crossings` times per period
/// of `periods` forcing periods.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CycleSpec {
    pub crossings: usize,
    pub periods: u32,
}

impl CycleSpec {
    pub fn period(&self, p: &FrictionParams) -> f64 {
        f64::from(self.periods) * p.forcing_period()
    }
}

fn return_budget(spec: &CycleSpec, p: &FrictionParams) -> f64 {
    3.0 * spec.period(p) + 10.0
}

/// Runs past a transient, then looks for the shortest repeat in the
/// section crossings. Returns the cycle spec and the crossing with the largest
/// velocity.
pub fn detect_cycle(
    start: OscState,
    p: &FrictionParams,
    opts: &FlowOptions,
    transient_periods: u32,
    max_crossings: usize,
) -> Result<(CycleSpec, OscState), FilippovError> {
    let tf = p.forcing_period();
    let t_settle = start.t + f64::from(transient_periods) * tf;
    let mut hits = Vec::new();
    let need = 3 * max_crossings + 1;
    run(start, p, opts, t_settle + (need as f64 + 4.0) * 8.0 * tf, None, |ev| {
        if ev.kind == EventKind::Section && ev.state.t > t_settle {
            hits.push(ev.state);
        }
        if hits.len() >= need {
            Control::Stop
        } else {
            Control::Continue
        }
    })?;
    for m in 1..=max_crossings.min(hits.len().saturating_sub(1) / 2) {
        let q = ((hits[m].t - hits[0].t) / tf).round();
        let repeats = (0..hits.len() - m).all(|i| {
            let dt = hits[i + m].t - hits[i].t;
            (hits[i + m].v - hits[i].v).abs() < 1e-6 && (dt - q * tf).abs() < 1e-5
        });
        if repeats && q >= 1.0 {
            let peak = hits[..m].iter().copied().max_by(|a, b| a.v.total_cmp(&b.v)).expect("m >= 1");
            return Ok((CycleSpec { crossings: m, periods: q as u32 }, peak));
        }
    }
    Err(FilippovError::NoCycle(format!("no repeat within {max_crossings} section crossings")))
}

fn virtual_flow(opts: &FlowOptions) -> FlowOptions {
    FlowOptions { ignore_surface: true, ..*opts }
}

/// Return map of the smooth non-sliding flow in section coordinates, with
/// the time shifted back by the cycle period.
fn smooth_return(z: [f64; 2], p: &FrictionParams, opts: &FlowOptions, spec: &CycleSpec) -> Result<OscState, FilippovError> {
    let mut s = poincare_map(section_state(z[0], z[1], p), p, &virtual_flow(opts), spec.crossings, return_budget(spec, p))?;
    s.t -= spec.period(p);
    Ok(s)
}

fn solve2(j: Matrix2, r: [f64; 2]) -> Option<[f64; 2]> {
    let det = j.det();
    if det == 0.0 || !det.is_finite() {
        return None;
    }
    Some([(j.d * r[0] - j.b * r[1]) / det, (j.a * r[1] - j.c * r[0]) / det])
}

/// Damped Newton on the displacement of the smooth return map. The orbit is
/// followed without regard to the surface, so the cycle continues smoothly
/// through grazing. The result has `t` reduced to one forcing period.
pub fn locate_cycle(
    p: &FrictionParams,
    opts: &FlowOptions,
    spec: &CycleSpec,
    guess: [f64; 2],
) -> Result<[f64; 2], FilippovError> {
    let g = |z: [f64; 2]| -> Result<[f64; 2], FilippovError> {
        let s = smooth_return(z, p, opts, spec)?;
        Ok([s.v - z[0], s.t - z[1]])
    };
    let norm = |r: [f64; 2]| r[0].abs().max(r[1].abs());
    let mut z = guess;
    let mut r = g(z)?;
    let tf = p.forcing_period();
    for _ in 0..40 {
        if norm(r) < 1e-12 {
            return Ok([z[0], z[1].rem_euclid(tf)]);
        }
        let h = 1e-7;
        let rv = g([z[0] + h, z[1]])?;
        let rt = g([z[0], z[1] + h])?;
        let j = Matrix2::new((rv[0] - r[0]) / h, (rt[0] - r[0]) / h, (rv[1] - r[1]) / h, (rt[1] - r[1]) / h);
        let dz = solve2(j, r).ok_or_else(|| FilippovError::NoCycle("singular Newton step".into()))?;
        let mut lambda = 1.0;
        let next = loop {
            let trial = [z[0] - lambda * dz[0], z[1] - lambda * dz[1]];
            match g(trial) {
                Ok(rt) if norm(rt) < norm(r) => break Some((trial, rt)),
                _ => {}
            }
            lambda *= 0.5;
            if lambda < 1e-3 {
                break None;
            }
        };
        match next {
            Some((zn, rn)) => {
                let stalled = norm(rn) > 0.5 * norm(r);
                z = zn;
                r = rn;
                // Integration error floor reached.
                if stalled && norm(r) < 1e-9 {
                    return Ok([z[0], z[1].rem_euclid(tf)]);
                }
            }
            None if norm(r) < 1e-9 => return Ok([z[0], z[1].rem_euclid(tf)]),
            None => return Err(FilippovError::NoCycle(format!("Newton stalled at residual {:e}", norm(r)))),
        }
    }
    Err(FilippovError::NoCycle(format!("Newton did not converge, residual {:e}", norm(r))))
}

/// The crossing with the largest velocity along the cycle through `z`.
fn cycle_peak(z: [f64; 2], p: &FrictionParams, opts: &FlowOptions, spec: &CycleSpec) -> Result<[f64; 2], FilippovError> {
    let start = section_state(z[0], z[1], p);
    let mut best = z;
    let mut seen = 0;
    run(start, p, &virtual_flow(opts), start.t + return_budget(spec, p), None, |ev| {
        if ev.kind == EventKind::Section && ev.state.t - start.t > SELF_CROSSING {
            seen += 1;
            if ev.state.v > best[0] {
                best = [ev.state.v, ev.state.t];
            }
            if seen == spec.crossings {
                return Control::Stop;
            }
        }
        Control::Continue
    })?;
    Ok(best)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FreeParam {
    Nu,
    Forcing,
}

impl FreeParam {
    pub fn set(self, p: &FrictionParams, x: f64) -> FrictionParams {
        match self {
            FreeParam::Nu => FrictionParams { nu: x, ..*p },
            FreeParam::Forcing => FrictionParams { f: x, ..*p },
        }
    }

    pub fn get(self, p: &FrictionParams) -> f64 {
        match self {
            FreeParam::Nu => p.nu,
            FreeParam::Forcing => p.f,
        }
    }
}

/// A limit cycle whose velocity maximum touches the belt speed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grazing {
    pub params: FrictionParams,
    pub spec: CycleSpec,
    /// The grazing section point `(v, t)`, `v = 1` up to the tolerance.
    pub point: [f64; 2],
}

impl Grazing {
    pub fn peak_velocity(&self) -> f64 {
        self.point[0]
    }
}

/// Locates the parameter value where the cycle's largest velocity maximum
/// equals 1. The cycle through `guess` at the `bracket.1` end is continued
/// in ten steps towards `bracket.0` with a secant predictor; the first sign
/// change of `max v - 1` is then refined by Illinois-type regula falsi.
pub fn find_grazing(
    p: &FrictionParams,
    free: FreeParam,
    bracket: (f64, f64),
    spec: CycleSpec,
    guess: [f64; 2],
    opts: &FlowOptions,
) -> Result<Grazing, FilippovError> {
    let mut known: Vec<(f64, [f64; 2])> = Vec::new();
    let mut eval = |x: f64| -> Result<(f64, [f64; 2]), FilippovError> {
        let near = predict(&known, x).unwrap_or(guess);
        let q = free.set(p, x);
        let z = locate_cycle(&q, opts, &spec, near)?;
        let peak = cycle_peak(z, &q, opts, &spec)?;
        let peak = locate_cycle(&q, opts, &spec, peak)?;
        known.push((x, peak));
        Ok((peak[0] - 1.0, peak))
    };
    const MARCH: usize = 10;
    let (lo, hi) = bracket;
    let mut prev = (hi, eval(hi)?);
    let mut found = None;
    for k in 1..=MARCH {
        let x = hi + (lo - hi) * k as f64 / MARCH as f64;
        let cur = (x, eval(x)?);
        if cur.1 .0.signum() != prev.1 .0.signum() {
            found = Some((prev, cur));
            break;
        }
        prev = cur;
    }
    let Some(((mut a, (mut ga, za)), (mut b, (mut gb, zb)))) = found else {
        return Err(FilippovError::NoBracket { lo, hi });
    };
    let mut best = if ga.abs() < gb.abs() { (a, za) } else { (b, zb) };
    let mut side = 0i8;
    for _ in 0..100 {
        if (b - a).abs() < 1e-14 * (1.0 + a.abs()) || best.1[0] == 1.0 || (best.1[0] - 1.0).abs() < 1e-13 {
            break;
        }
        let c = (a * gb - b * ga) / (gb - ga);
        let (gc, zc) = eval(c)?;
        if gc.abs() < (best.1[0] - 1.0).abs() {
            best = (c, zc);
        }
        if gc.signum() == gb.signum() {
            b = c;
            gb = gc;
            if side == 1 {
                ga *= 0.5;
            }
            side = 1;
        } else {
            a = c;
            ga = gc;
            if side == -1 {
                gb *= 0.5;
            }
            side = -1;
        }
    }
    Ok(Grazing { params: free.set(p, best.0), spec, point: best.1 })
}

/// Linear extrapolation from the two known parameter values nearest `x`.
fn predict(known: &[(f64, [f64; 2])], x: f64) -> Option<[f64; 2]> {
    let mut by_dist: Vec<&(f64, [f64; 2])> = known.iter().collect();
    by_dist.sort_by(|a, b| (a.0 - x).abs().total_cmp(&(b.0 - x).abs()));
    match by_dist.as_slice() {
        [] => None,
        [only] => Some(only.1),
        [(x0, z0), (x1, z1), ..] if x0 != x1 => {
            let s = (x - x0) / (x1 - x0);
            Some([z0[0] + s * (z1[0] - z0[0]), z0[1] + s * (z1[1] - z0[1])])
        }
        [first, ..] => Some(first.1),
    }
}

/// Grazing in `nu` for fixed forcing amplitude: detects the stable cycle at
/// the upper end of the bracket, then continues it down to grazing.
pub fn find_grazing_nu(p: &FrictionParams, bracket: (f64, f64), opts: &FlowOptions) -> Result<Grazing, FilippovError> {
    let top = FrictionParams { nu: bracket.1, ..*p };
    let (spec, peak) = detect_cycle(OscState::slipping(0.0, 0.0, 0.0), &top, opts, 2000, 16)?;
    find_grazing(p, FreeParam::Nu, bracket, spec, [peak.v, peak.phase(&top)], opts)
}

/// Linear parts of the two pieces of the return map at grazing.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GrazeExtraction {
    pub grazing: Grazing,
    /// Derivative of the piece with a sticking phase (rank one).
    pub jac_left: Matrix2,
    /// Derivative of the piece without sticking.
    pub jac_right: Matrix2,
    pub tau_l: f64,
    pub tau_r: f64,
    pub delta_r: f64,
}

impl GrazeExtraction {
    pub fn det_left(&self) -> f64 {
        self.jac_left.det()
    }
}

/// Exit time from sticking for an orbit with `u - t = c`, started from
/// `t0`: the first root of `c + t = a0 + F cos(nu t)` found by Newton.
fn stick_exit_time(c: f64, t0: f64, p: &FrictionParams) -> f64 {
    let mut t = t0;
    for _ in 0..50 {
        let phi = c + t - p.alpha0 - p.f * (p.nu * t).cos();
        let dphi = 1.0 + p.f * p.nu * (p.nu * t).sin();
        let dt = phi / dphi;
        t -= dt;
        if dt.abs() < 1e-16 * (1.0 + t.abs()) {
            break;
        }
    }
    t
}

/// Central differences with one Richardson step.
fn jacobian<G>(g: &G, z: [f64; 2], h: [f64; 2]) -> Result<Matrix2, FilippovError>
where
    G: Fn([f64; 2]) -> Result<[f64; 2], FilippovError>,
{
    let central = |k: usize, hk: f64| -> Result<[f64; 2], FilippovError> {
        let mut zp = z;
        let mut zm = z;
        zp[k] += hk;
        zm[k] -= hk;
        let (gp, gm) = (g(zp)?, g(zm)?);
        Ok([(gp[0] - gm[0]) / (2.0 * hk), (gp[1] - gm[1]) / (2.0 * hk)])
    };
    let mut cols = [[0.0; 2]; 2];
    for (k, col) in cols.iter_mut().enumerate() {
        let d1 = central(k, h[k])?;
        let d2 = central(k, 0.5 * h[k])?;
        *col = [(4.0 * d2[0] - d1[0]) / 3.0, (4.0 * d2[1] - d1[1]) / 3.0];
    }
    Ok(Matrix2::new(cols[0][0], cols[1][0], cols[0][1], cols[1][1]))
}

/// Relative finite-difference steps tried for the conditioning check; the
/// middle one gives the reported values.
pub const FD_STEPS: [f64; 3] = [1e-5, 1e-6, 1e-7];

/// Derivatives of both pieces of the return map at the grazing point.
///
/// The non-sticking piece is the smooth flow followed through the fold.
/// The sticking piece is the exact exit map applied to `u - t` at the
/// smooth piece's velocity maximum; that agrees with the true sticking
/// piece to first order at grazing and extends it smoothly to both sides.
pub fn extract_normal_form(g: &Grazing, opts: &FlowOptions) -> Result<GrazeExtraction, FilippovError> {
    let p = g.params;
    let z = g.point;
    let right = |z: [f64; 2]| -> Result<[f64; 2], FilippovError> {
        let s = smooth_return(z, &p, opts, &g.spec)?;
        Ok([s.v, s.t])
    };
    let left = |z: [f64; 2]| -> Result<[f64; 2], FilippovError> {
        let s = smooth_return(z, &p, opts, &g.spec)?;
        Ok([1.0, stick_exit_time(s.u - s.t, s.t, &p)])
    };
    let scale = [z[0].abs().max(1.0), z[1].abs().max(1.0)];
    let mut jl = Vec::new();
    let mut jr = Vec::new();
    for rel in FD_STEPS {
        let h = [rel * scale[0], rel * scale[1]];
        jl.push(jacobian(&left, z, h)?);
        jr.push(jacobian(&right, z, h)?);
    }
    let diff = |a: &Matrix2, b: &Matrix2| {
        let d = Matrix2::new(a.a - b.a, a.b - b.b, a.c - b.c, a.d - b.d);
        d.max_abs() / b.max_abs().max(1.0)
    };
    let spread = jl.iter().map(|m| diff(m, &jl[1])).chain(jr.iter().map(|m| diff(m, &jr[1]))).fold(0.0, f64::max);
    if spread > 1e-2 {
        return Err(FilippovError::Conditioning { spread });
    }
    let (jac_left, jac_right) = (jl[1], jr[1]);
    Ok(GrazeExtraction {
        grazing: *g,
        jac_left,
        jac_right,
        tau_l: jac_left.trace(),
        tau_r: jac_right.trace(),
        delta_r: jac_right.det(),
    })
}

/// Grazing points and extractions along a list of forcing amplitudes, each
/// continued from the previous one. The first is found in `nu_bracket`.
/// Stops at the first failure, which is returned with the results so far.
pub fn grazing_locus(
    p: &FrictionParams,
    forcings: &[f64],
    nu_bracket: (f64, f64),
    opts: &FlowOptions,
) -> (Vec<GrazeExtraction>, Option<FilippovError>) {
    const HALF_WIDTH: f64 = 0.004;
    let mut out: Vec<GrazeExtraction> = Vec::new();
    for &f in forcings {
        let q = FrictionParams { f, ..*p };
        let g = match out.last() {
            None => find_grazing_nu(&q, nu_bracket, opts),
            Some(prev) => {
                let nu = prev.grazing.params.nu;
                let g = &prev.grazing;
                find_grazing(&q, FreeParam::Nu, (nu - HALF_WIDTH, nu + HALF_WIDTH), g.spec, g.point, opts)
            }
        };
        match g.and_then(|g| extract_normal_form(&g, opts)) {
            Ok(e) => out.push(e),
            Err(e) => return (out, Some(e)),
        }
    }
    (out, None)
}

/// Section times modulo the forcing period after a transient, for one
/// value of `nu`.
#[derive(Debug, Clone, PartialEq)]
pub struct BifColumn {
    pub nu: f64,
    pub times: Vec<f64>,
    pub diverged: bool,
}

pub const BIF_TRANSIENT_PERIODS: u32 = 200;
pub const BIF_RECORD: usize = 200;

pub fn bif_column(
    p: &FrictionParams,
    start: OscState,
    opts: &FlowOptions,
    transient_periods: u32,
    record: usize,
) -> BifColumn {
    let tf = p.forcing_period();
    let t_settle = start.t + f64::from(transient_periods) * tf;
    let mut times = Vec::with_capacity(record);
    let budget = t_settle + (record as f64 + 10.0) * 20.0 * tf;
    let res = run(start, p, opts, budget, None, |ev| {
        if ev.kind == EventKind::Section && ev.state.t > t_settle {
            times.push(ev.state.t.rem_euclid(tf));
        }
        if times.len() >= record {
            Control::Stop
        } else {
            Control::Continue
        }
    });
    BifColumn { nu: p.nu, diverged: res.is_err() || times.len() < record, times }
}

/// One column per `nu`, computed in parallel from the same initial state.
pub fn ode_bif_diagram(
    p: &FrictionParams,
    nus: &[f64],
    start: OscState,
    opts: &FlowOptions,
    transient_periods: u32,
    record: usize,
) -> Vec<BifColumn> {
    nus.par_iter()
        .map(|&nu| bif_column(&FrictionParams { nu, ..*p }, start, opts, transient_periods, record))
        .collect()
}
