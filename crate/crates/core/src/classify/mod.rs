//! Numerical attractor classification, Lyapunov exponents, component
//! counting and basins of attraction.

mod basin;
mod components;
mod grid;
mod lyapunov;

pub use basin::{basin_raster, find_attractors, Attractor, BasinLabel, BasinRaster, Region};
pub use components::{count_components, count_components_from, count_intervals, slice_estimate, ComponentConfig, ComponentCount};
pub use grid::OccupancyGrid;
pub use lyapunov::{lyapunov_max, TANGENT_WARMUP};

use crate::maps::{step, MapError, NormalFormParams, PlanePoint};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ClassifyError {
    #[error(transparent)]
    Map(#[from] MapError),
    #[error("orbit diverged, no attractor to analyse")]
    NoAttractor,
    #[error("component counts disagree: {slice} on the x-axis slice, {grid} by flood fill")]
    Unreliable { slice: usize, grid: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AttractorClass {
    Diverging,
    Periodic(u32),
    Chaotic,
    QuasiOrLongPeriod,
}

impl AttractorClass {
    pub fn code(self) -> u8 {
        match self {
            AttractorClass::Diverging => 0,
            AttractorClass::Periodic(_) => 1,
            AttractorClass::Chaotic => 2,
            AttractorClass::QuasiOrLongPeriod => 3,
        }
    }

    pub fn period(self) -> u32 {
        match self {
            AttractorClass::Periodic(p) => p,
            _ => 0,
        }
    }

    pub fn from_code(code: u8, period: u32) -> Option<Self> {
        Some(match code {
            0 => AttractorClass::Diverging,
            1 if period >= 1 => AttractorClass::Periodic(period),
            2 => AttractorClass::Chaotic,
            3 => AttractorClass::QuasiOrLongPeriod,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClassifierConfig {
    pub burn_in: usize,
    pub bound: f64,
    pub probe: usize,
    pub period_tol: f64,
    pub lyapunov_threshold: f64,
    pub lyapunov_len: usize,
    pub seed: u64,
    /// Half-width of the square of initial points, as a multiple of `|mu|`.
    pub init_half_width: f64,
}

impl Default for ClassifierConfig {
    fn default() -> Self {
        Self {
            burn_in: 100_000,
            bound: 1e5,
            probe: 30,
            period_tol: 1e-10,
            lyapunov_threshold: 1e-3,
            lyapunov_len: 10_000,
            seed: 0,
            init_half_width: 2.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Classification {
    pub class: AttractorClass,
    /// Present when the exponent was needed to decide the class.
    pub lyapunov: Option<f64>,
    /// Last point of the burn-in.
    pub settled: Option<PlanePoint>,
}

/// Random generator for the stream `(seed, a, b)`; distinct `(a, b)` give
/// independent streams so parallel work is reproducible.
pub fn substream(seed: u64, a: u64, b: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream((a << 32) ^ b);
    rng
}

pub fn random_initial_point(params: &NormalFormParams, cfg: &ClassifierConfig, rng: &mut ChaCha8Rng) -> PlanePoint {
    let h = cfg.init_half_width * params.mu.abs();
    if h == 0.0 {
        return PlanePoint::ORIGIN;
    }
    PlanePoint::new(rng.gen_range(-h..=h), rng.gen_range(-h..=h))
}

/// Runs `n` steps, returning the final point or the escape index.
pub(crate) fn settle(
    mut z: PlanePoint,
    params: &NormalFormParams,
    n: usize,
    bound: f64,
) -> Result<PlanePoint, usize> {
    for i in 1..=n {
        z = step(z, params);
        if !(z.x.abs() <= bound && z.y.abs() <= bound && z.norm() <= bound) {
            return Err(i);
        }
    }
    Ok(z)
}

/// Classifies the attractor reached from a random initial point drawn from
/// the stream `cfg.seed`.
pub fn classify(params: &NormalFormParams, cfg: &ClassifierConfig) -> Classification {
    let mut rng = substream(cfg.seed, 0, 0);
    let p0 = random_initial_point(params, cfg, &mut rng);
    classify_from(params, cfg, p0)
}

pub fn classify_from(params: &NormalFormParams, cfg: &ClassifierConfig, p0: PlanePoint) -> Classification {
    let diverging = Classification {
        class: AttractorClass::Diverging,
        lyapunov: None,
        settled: None,
    };
    let Ok(zm) = settle(p0, params, cfg.burn_in, cfg.bound) else {
        return diverging;
    };
    let mut z = zm;
    for i in 1..=cfg.probe {
        z = step(z, params);
        if !(z.norm() <= cfg.bound) {
            return diverging;
        }
        if z.dist(zm) < cfg.period_tol {
            return Classification {
                class: AttractorClass::Periodic(i as u32),
                lyapunov: None,
                settled: Some(zm),
            };
        }
    }
    match lyapunov_max(params, z, cfg.lyapunov_len, cfg.bound) {
        Ok(lambda) => Classification {
            class: if lambda > cfg.lyapunov_threshold {
                AttractorClass::Chaotic
            } else {
                AttractorClass::QuasiOrLongPeriod
            },
            lyapunov: Some(lambda),
            settled: Some(zm),
        },
        Err(_) => diverging,
    }
}
