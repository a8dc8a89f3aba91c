//! Stick-slip friction oscillator
//!
//! ```text
//! u'' + u = a0 sgn(1 - u') - a1 (1 - u') + a2 (1 - u')^3 + F cos(nu t)
//! ```
//!
//! treated as a Filippov system on the surface `v = u' = 1`. Sliding on the
//! surface is the block sticking to the belt, so `v = 1` and `u` grows at
//! unit rate; it ends when the spring and forcing overcome static friction.

pub mod dopri;
pub mod graze;
pub mod linear;
pub mod output;

use crate::config::{ConfigError, KvConfig};
use dopri::{StepControl, Stepper, Vec2, H_MIN};
use std::f64::consts::PI;
use thiserror::Error;

pub use graze::{
    bif_column,
    detect_cycle, extract_normal_form, find_grazing, find_grazing_nu, grazing_locus, locate_cycle, ode_bif_diagram, poincare_map, section_state,
    BifColumn, CycleSpec, FreeParam, GrazeExtraction, Grazing, Orientation,
};
pub use linear::{
    linear_cycle_guess, linear_grazing_forcing, linear_osc_from_angle, linear_osc_params, linear_sliding_trace,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FilippovError {
    #[error("invalid friction parameters: {0}")]
    Params(String),
    #[error("state lies on the switching surface v = 1")]
    OnSurface,
    #[error("step size underflow at t = {t}")]
    StepFailure { t: f64 },
    #[error("no return to the section before t = {t}")]
    NoReturn { t: f64 },
    #[error("trajectory left |u|, |v| < {bound} at t = {t}")]
    Diverged { t: f64, bound: f64 },
    #[error("grazing condition does not change sign on [{lo}, {hi}]")]
    NoBracket { lo: f64, hi: f64 },
    #[error("no periodic orbit found: {0}")]
    NoCycle(String),
    #[error("finite-difference derivatives vary by {spread:e} across step sizes")]
    Conditioning { spread: f64 },
    #[error("{0}")]
    Domain(String),
    #[error(transparent)]
    Config(#[from] ConfigError),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrictionParams {
    pub alpha0: f64,
    pub alpha1: f64,
    pub alpha2: f64,
    pub f: f64,
    pub nu: f64,
}

impl Default for FrictionParams {
    fn default() -> Self {
        Self { alpha0: 1.5, alpha1: 1.5, alpha2: 0.45, f: 0.1, nu: 1.7078 }
    }
}

pub const FRICTION_KEYS: &[&str] = &["alpha0", "alpha1", "alpha2", "F", "nu"];

impl FrictionParams {
    pub fn validate(&self) -> Result<(), FilippovError> {
        let all = [self.alpha0, self.alpha1, self.alpha2, self.f, self.nu];
        if all.iter().any(|x| !x.is_finite()) {
            return Err(FilippovError::Params("non-finite value".into()));
        }
        if self.alpha0 <= 0.0 {
            return Err(FilippovError::Params(format!("alpha0 = {} must be positive", self.alpha0)));
        }
        if self.nu <= 0.0 {
            return Err(FilippovError::Params(format!("nu = {} must be positive", self.nu)));
        }
        Ok(())
    }

    pub fn forcing_period(&self) -> f64 {
        2.0 * PI / self.nu
    }

    /// Missing keys keep the values of `base`.
    pub fn from_kv(kv: &KvConfig, base: &Self) -> Result<Self, FilippovError> {
        let p = Self {
            alpha0: kv.get_or("alpha0", base.alpha0)?,
            alpha1: kv.get_or("alpha1", base.alpha1)?,
            alpha2: kv.get_or("alpha2", base.alpha2)?,
            f: kv.get_or("F", base.f)?,
            nu: kv.get_or("nu", base.nu)?,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn to_kv(&self) -> KvConfig {
        let mut kv = KvConfig::default();
        kv.set("alpha0", self.alpha0);
        kv.set("alpha1", self.alpha1);
        kv.set("alpha2", self.alpha2);
        kv.set("F", self.f);
        kv.set("nu", self.nu);
        kv
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Slipping,
    Sticking,
}

/// Which side of the surface a slipping orbit is on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Region {
    /// `v < 1`, the block is slower than the belt.
    Below,
    /// `v > 1`.
    Above,
}

impl Region {
    fn sgn(self) -> f64 {
        match self {
            Region::Below => 1.0,
            Region::Above => -1.0,
        }
    }

    fn flip(self) -> Self {
        match self {
            Region::Below => Region::Above,
            Region::Above => Region::Below,
        }
    }
}

/// Absolute time is kept; `phase` reduces it modulo the forcing period.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OscState {
    pub u: f64,
    pub v: f64,
    pub t: f64,
    pub mode: Mode,
}

impl OscState {
    pub fn slipping(u: f64, v: f64, t: f64) -> Self {
        Self { u, v, t, mode: Mode::Slipping }
    }

    pub fn phase(&self, p: &FrictionParams) -> f64 {
        self.t.rem_euclid(p.forcing_period())
    }
}

/// `v'` in a slipping region.
pub fn accel(u: f64, v: f64, t: f64, region: Region, p: &FrictionParams) -> f64 {
    let w = 1.0 - v;
    -u + p.alpha0 * region.sgn() - p.alpha1 * w + p.alpha2 * w * w * w + p.f * (p.nu * t).cos()
}

/// Time derivative of `(u, v, phase)` off the surface.
pub fn slip_field(s: &OscState, p: &FrictionParams) -> Result<[f64; 3], FilippovError> {
    let region = if s.v < 1.0 {
        Region::Below
    } else if s.v > 1.0 {
        Region::Above
    } else {
        return Err(FilippovError::OnSurface);
    };
    Ok([s.v, accel(s.u, s.v, s.t, region, p), 1.0])
}

/// `v'` just below and just above the surface at `(u, t)`. Sticking is
/// attracting when the first is positive and the second negative.
pub fn surface_accels(u: f64, t: f64, p: &FrictionParams) -> (f64, f64) {
    let net = -u + p.f * (p.nu * t).cos();
    (net + p.alpha0, net - p.alpha0)
}

fn sticks(u: f64, t: f64, p: &FrictionParams) -> bool {
    let (below, above) = surface_accels(u, t, p);
    below > 0.0 && above < 0.0
}

/// End of a sticking phase.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StickExit {
    pub state: OscState,
    /// Side the block slips into, or `None` if still stuck at `t_max`.
    pub into: Option<Region>,
}

const BISECT_TOL: f64 = 1e-12;

/// Sticks exactly (`u = u0 + t - t0`) until the net force reaches the
/// static friction limit on either side.
pub fn sliding_step(s: &OscState, p: &FrictionParams, t_max: f64) -> StickExit {
    let at = |t: f64| s.u + (t - s.t);
    // Positive while sticking persists.
    let margin = |t: f64| {
        let (below, above) = surface_accels(at(t), t, p);
        below.min(-above)
    };
    // Fine enough that the forcing cannot turn around within one probe.
    let dt = (0.05 / (1.0 + p.f * p.nu)).min(0.1 / p.nu);
    let mut t0 = s.t;
    while t0 < t_max {
        let t1 = (t0 + dt).min(t_max);
        if margin(t1) <= 0.0 {
            let (mut lo, mut hi) = (t0, t1);
            while hi - lo > 1e-15 * (1.0 + hi.abs()) {
                let mid = 0.5 * (lo + hi);
                if margin(mid) > 0.0 {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            let (below, above) = surface_accels(at(hi), hi, p);
            let into = if below.abs() <= (-above).abs() { Region::Below } else { Region::Above };
            return StickExit {
                state: OscState { u: at(hi), v: 1.0, t: hi, mode: Mode::Slipping },
                into: Some(into),
            };
        }
        t0 = t1;
    }
    StickExit { state: OscState { u: at(t_max), v: 1.0, t: t_max, mode: Mode::Sticking }, into: None }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EventKind {
    /// The orbit reached `v = 1` and started sliding.
    StickStart,
    /// Sliding ended; the block slips into the given region.
    StickEnd(Region),
    /// The orbit crossed `v = 1` into the given region.
    Crossing(Region),
    /// A crossing of the section `v' = 0` with the chosen orientation.
    Section,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Event {
    pub kind: EventKind,
    pub state: OscState,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlowOptions {
    pub control: StepControl,
    /// Ignore the surface and use the `v < 1` vector field everywhere. This
    /// is the smooth extension of the non-sliding flow.
    pub ignore_surface: bool,
    pub orientation: Orientation,
    /// Divergence threshold on `|u|` and `|v|`.
    pub bound: f64,
}

impl Default for FlowOptions {
    fn default() -> Self {
        Self { control: StepControl::default(), ignore_surface: false, orientation: Orientation::Maxima, bound: 1e6 }
    }
}

impl FlowOptions {
    pub fn precise() -> Self {
        Self { control: StepControl::Adaptive { rtol: 1e-13, atol: 1e-14, h_max: 0.05 }, ..Self::default() }
    }

    pub fn with_rtol(mut self, rtol: f64) -> Self {
        if let StepControl::Adaptive { h_max, .. } = self.control {
            self.control = StepControl::Adaptive { rtol, atol: rtol * 1e-2, h_max };
        }
        self
    }
}

/// What the driver does after an event.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Control {
    Continue,
    Stop,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Trajectory {
    pub samples: Vec<OscState>,
    pub events: Vec<Event>,
}

fn initial_region(s: &OscState, p: &FrictionParams, opts: &FlowOptions) -> Option<Region> {
    if opts.ignore_surface || s.v < 1.0 {
        return Some(Region::Below);
    }
    if s.v > 1.0 {
        return Some(Region::Above);
    }
    let (below, above) = surface_accels(s.u, s.t, p);
    if below <= 0.0 {
        Some(Region::Below)
    } else if above >= 0.0 {
        Some(Region::Above)
    } else {
        None
    }
}

/// Integrates from `start` until `t_end` or until `on_event` says stop.
/// Surface hits and section crossings are located by bisection on the
/// step size; sticking phases are solved exactly.
pub fn run<E>(
    start: OscState,
    p: &FrictionParams,
    opts: &FlowOptions,
    t_end: f64,
    record: Option<&mut Trajectory>,
    mut on_event: E,
) -> Result<OscState, FilippovError>
where
    E: FnMut(&Event) -> Control,
{
    p.validate()?;
    let mut sink = record;
    let push_sample = |s: &OscState, sink: &mut Option<&mut Trajectory>| {
        if let Some(tr) = sink.as_deref_mut() {
            tr.samples.push(*s);
        }
    };
    let mut emit = |ev: Event, sink: &mut Option<&mut Trajectory>| {
        if let Some(tr) = sink.as_deref_mut() {
            tr.events.push(ev);
        }
        on_event(&ev)
    };

    let mut s = start;
    let mut region = if s.mode == Mode::Sticking { None } else { initial_region(&s, p, opts) };
    if region.is_none() {
        s.mode = Mode::Sticking;
        s.v = 1.0;
    }
    let mut stepper = Stepper::new(opts.control);
    push_sample(&s, &mut sink);
    while s.t < t_end {
        let Some(reg) = region else {
            let exit = sliding_step(&s, p, t_end);
            s = exit.state;
            push_sample(&s, &mut sink);
            let Some(into) = exit.into else { break };
            region = Some(into);
            if emit(Event { kind: EventKind::StickEnd(into), state: s }, &mut sink) == Control::Stop {
                return Ok(s);
            }
            // Leaving downwards the velocity peaks at the exit point.
            if into == Region::Below
                && opts.orientation == Orientation::Maxima
                && emit(Event { kind: EventKind::Section, state: s }, &mut sink) == Control::Stop
            {
                return Ok(s);
            }
            continue;
        };
        let f = |t: f64, y: Vec2| [y[1], accel(y[0], y[1], t, reg, p)];
        let y0 = [s.u, s.v];
        let h = stepper.propose().min(t_end - s.t);
        let (y1, err) = dopri::step(&f, s.t, y0, h);
        if !stepper.judge(y0, y1, err) {
            if stepper.propose() < H_MIN {
                return Err(FilippovError::StepFailure { t: s.t });
            }
            continue;
        }
        if !(y1[0].abs() < opts.bound && y1[1].abs() < opts.bound) {
            return Err(FilippovError::Diverged { t: s.t + h, bound: opts.bound });
        }
        // Event functions at both ends of the step.
        let surface = |y: Vec2| match reg {
            Region::Below => y[1] - 1.0,
            Region::Above => 1.0 - y[1],
        };
        let section = |t: f64, y: Vec2| opts.orientation.sign() * accel(y[0], y[1], t, reg, p);
        let hit_surface = !opts.ignore_surface && surface(y1) >= 0.0;
        let hit_section = section(s.t, y0) > 0.0 && section(s.t + h, y1) <= 0.0;
        if !(hit_surface || hit_section) {
            s = OscState::slipping(y1[0], y1[1], s.t + h);
            push_sample(&s, &mut sink);
            continue;
        }
        let (t0, y0c) = (s.t, y0);
        let locate = |g: &dyn Fn(f64, Vec2) -> f64| -> (f64, Vec2) {
            let (mut lo, mut hi) = (0.0, h);
            let mut y_hi = y1;
            while hi - lo > BISECT_TOL * 1e-3 && hi - lo > f64::EPSILON * (t0 + hi).abs() * 2.0 {
                let mid = 0.5 * (lo + hi);
                let (ym, _) = dopri::step(&f, t0, y0c, mid);
                if g(t0 + mid, ym) > 0.0 {
                    hi = mid;
                    y_hi = ym;
                } else {
                    lo = mid;
                }
            }
            (hi, y_hi)
        };
        let surf_at = hit_surface.then(|| locate(&|_t, y| surface(y)));
        let sect_at = hit_section.then(|| locate(&|t, y| -section(t, y)));
        let surface_first = match (surf_at, sect_at) {
            (Some((a, _)), Some((b, _))) => a <= b,
            (Some(_), None) => true,
            _ => false,
        };
        if surface_first {
            let (dt, y) = surf_at.expect("located");
            s = OscState { u: y[0], v: 1.0, t: t0 + dt, mode: Mode::Slipping };
            if sticks(s.u, s.t, p) {
                s.mode = Mode::Sticking;
                region = None;
                push_sample(&s, &mut sink);
                if emit(Event { kind: EventKind::StickStart, state: s }, &mut sink) == Control::Stop {
                    return Ok(s);
                }
            } else {
                let next = reg.flip();
                region = Some(next);
                push_sample(&s, &mut sink);
                if emit(Event { kind: EventKind::Crossing(next), state: s }, &mut sink) == Control::Stop {
                    return Ok(s);
                }
            }
        } else {
            let (dt, y) = sect_at.expect("located");
            s = OscState::slipping(y[0], y[1], t0 + dt);
            push_sample(&s, &mut sink);
            if emit(Event { kind: EventKind::Section, state: s }, &mut sink) == Control::Stop {
                return Ok(s);
            }
        }
    }
    Ok(s)
}

/// Integrates over `[start.t, start.t + span]`, recording every accepted
/// step and every event.
pub fn integrate(start: OscState, p: &FrictionParams, opts: &FlowOptions, span: f64) -> Result<Trajectory, FilippovError> {
    if !(span.is_finite() && span >= 0.0) {
        return Err(FilippovError::Domain(format!("time span {span} must be finite and non-negative")));
    }
    let mut tr = Trajectory::default();
    run(start, p, opts, start.t + span, Some(&mut tr), |_| Control::Continue)?;
    Ok(tr)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn field_at_rest() {
        let p = FrictionParams::default();
        let d = slip_field(&OscState::slipping(0.0, 0.0, 0.0), &p).unwrap();
        assert_relative_eq!(d[1], p.alpha0 - p.alpha1 + p.alpha2 + p.f, epsilon = 1e-15);
        assert_eq!(d[2], 1.0);
        assert_eq!(slip_field(&OscState::slipping(0.0, 1.0, 0.0), &p), Err(FilippovError::OnSurface));
    }

    #[test]
    fn field_symmetry_about_the_surface() {
        // Only the sgn term and the odd kinetic terms change sign.
        let p = FrictionParams { f: 0.0, ..FrictionParams::default() };
        for w in [0.1, 0.5, 2.0] {
            let up = accel(0.3, 1.0 + w, 0.0, Region::Above, &p) + 0.3;
            let down = accel(0.3, 1.0 - w, 0.0, Region::Below, &p) + 0.3;
            assert_relative_eq!(up, -down, epsilon = 1e-14);
        }
    }

    #[test]
    fn without_cubic_term_the_field_is_affine() {
        let p = FrictionParams { alpha2: 0.0, ..FrictionParams::default() };
        let g = |u: f64, v: f64| accel(u, v, 0.7, Region::Below, &p);
        let mid = g(0.25, 0.25);
        assert_relative_eq!(mid, 0.5 * (g(0.0, 0.0) + g(0.5, 0.5)), epsilon = 1e-14);
        assert_relative_eq!(mid, 0.5 * (g(0.5, 0.0) + g(0.0, 0.5)), epsilon = 1e-14);
    }

    #[test]
    fn sticking_inside_the_friction_limit_persists() {
        let p = FrictionParams::default();
        // |net force| stays below 1.5 on [0, 0.5] from u = 0.
        let exit = sliding_step(&OscState { u: 0.0, v: 1.0, t: 0.0, mode: Mode::Sticking }, &p, 0.5);
        assert_eq!(exit.into, None);
        assert_relative_eq!(exit.state.u, 0.5, epsilon = 1e-15);
    }

    #[test]
    fn sticking_exit_on_the_friction_boundary() {
        // Strong fast forcing can push the block ahead of the belt: it then
        // leaves where u = F cos(nu t) - a0.
        let p = FrictionParams { f: 2.0, nu: 2.0, ..FrictionParams::default() };
        let t0 = std::f64::consts::FRAC_PI_2;
        let exit = sliding_step(&OscState { u: -3.0, v: 1.0, t: t0, mode: Mode::Sticking }, &p, 10.0);
        assert_eq!(exit.into, Some(Region::Above));
        let s = exit.state;
        assert!((s.u - (p.f * (p.nu * s.t).cos() - p.alpha0)).abs() < 1e-12);
        // The usual exit is back below the belt speed, at u = F cos(nu t) + a0.
        let p = FrictionParams { f: 0.3, ..FrictionParams::default() };
        let exit = sliding_step(&OscState { u: 0.0, v: 1.0, t: 0.0, mode: Mode::Sticking }, &p, 10.0);
        assert_eq!(exit.into, Some(Region::Below));
        let s = exit.state;
        assert!((s.u - (p.f * (p.nu * s.t).cos() + p.alpha0)).abs() < 1e-12);
    }

    #[test]
    fn arriving_orbit_sticks() {
        let p = FrictionParams::default();
        let tr = integrate(OscState::slipping(0.0, 0.0, 0.0), &p, &FlowOptions::default(), 40.0).unwrap();
        let start = tr.events.iter().position(|e| e.kind == EventKind::StickStart).expect("sticks");
        let t_start = tr.events[start].state.t;
        let t_end = tr.events[start + 1..]
            .iter()
            .find(|e| matches!(e.kind, EventKind::StickEnd(_)))
            .map(|e| e.state.t)
            .unwrap_or(f64::INFINITY);
        let stuck: Vec<_> = tr.samples.iter().filter(|s| s.t >= t_start && s.t <= t_end).collect();
        assert!(stuck.len() >= 2);
        assert!(stuck.iter().all(|s| s.v == 1.0));
    }

    #[test]
    fn free_oscillator_conserves_energy() {
        let p = FrictionParams { alpha0: 1e-300, alpha1: 0.0, alpha2: 0.0, f: 0.0, nu: 1.0 };
        let opts = FlowOptions::precise();
        let tr = integrate(OscState::slipping(0.5, 0.0, 0.0), &p, &opts, 30.0).unwrap();
        for s in &tr.samples {
            assert!((s.u * s.u + s.v * s.v - 0.25).abs() < 1e-10, "{s:?}");
        }
    }

    #[test]
    fn sliding_exit_is_independent_of_the_step_size() {
        let p = FrictionParams::default();
        let exit_time = |h_max: f64| {
            let opts = FlowOptions {
                control: StepControl::Adaptive { rtol: 1e-13, atol: 1e-14, h_max },
                ..FlowOptions::default()
            };
            let tr = integrate(OscState::slipping(0.0, 0.0, 0.0), &p, &opts, 20.0).unwrap();
            tr.events.iter().find(|e| matches!(e.kind, EventKind::StickEnd(_))).expect("exit").state.t
        };
        let (a, b) = (exit_time(0.1), exit_time(0.01));
        assert!((a - b).abs() < 1e-10, "{a} vs {b}");
    }

    #[test]
    fn slipping_span_converges_to_a_tight_reference() {
        let p = FrictionParams::default();
        let start = OscState::slipping(0.3, -0.2, 0.0);
        let end = |opts: FlowOptions| integrate(start, &p, &opts, 3.0).unwrap().samples.last().copied().unwrap();
        let reference = end(FlowOptions::precise());
        let coarse = end(FlowOptions::default());
        assert!(reference.v < 1.0);
        assert!((coarse.u - reference.u).abs() < 1e-9 && (coarse.v - reference.v).abs() < 1e-9);
        let fixed = end(FlowOptions { control: StepControl::Fixed(1e-3), ..FlowOptions::default() });
        assert!((fixed.u - reference.u).abs() < 1e-9 && (fixed.v - reference.v).abs() < 1e-9);
    }

    #[test]
    fn params_through_kv() {
        let kv = KvConfig::parse("F = 0.105\nnu = 1.7").unwrap();
        let p = FrictionParams::from_kv(&kv, &FrictionParams::default()).unwrap();
        assert_eq!(p.f, 0.105);
        assert_eq!(p.alpha0, 1.5);
        assert_eq!(FrictionParams::from_kv(&p.to_kv(), &FrictionParams::default()).unwrap(), p);
        let bad = KvConfig::parse("alpha0 = -1").unwrap();
        assert!(matches!(FrictionParams::from_kv(&bad, &p), Err(FilippovError::Params(_))));
    }
}
