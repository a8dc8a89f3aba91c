//! Two-parameter classification rasters over `(tau_R, delta_R)`.

mod encode;
mod overlay;

pub use encode::{decode_csv, encode_raster, grey_level, palette, RasterFormat};
pub use overlay::{clip_polyline, overlay_curves, Overlay};

use crate::classify::{classify_from, random_initial_point, substream, AttractorClass, ClassifierConfig};
use crate::config::{ConfigError, KvConfig};
use crate::curves::{CurveId, Window};
use crate::maps::NormalFormParams;
use rayon::prelude::*;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SweepError {
    #[error("raster needs at least 2 x 2 cells, got {nx} x {ny}")]
    TooSmall { nx: usize, ny: usize },
    #[error("degenerate window {0:?}")]
    Window(Window),
    #[error("mu must be 1 or -1, got {0}")]
    Mu(f64),
    #[error("tau_L must be finite")]
    TauL,
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("unsupported raster format {0:?}")]
    Format(String),
    #[error("bad raster csv: {0}")]
    Csv(String),
    #[error("thread pool: {0}")]
    Pool(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub tau_l: f64,
    pub mu: f64,
    pub window: Window,
    pub nx: usize,
    pub ny: usize,
    pub classifier: ClassifierConfig,
    pub curves: Vec<CurveId>,
}

/// Keys accepted in sweep config files.
pub const SWEEP_KEYS: &[&str] = &[
    "tau_L",
    "mu",
    "tau_R_min",
    "tau_R_max",
    "delta_R_min",
    "delta_R_max",
    "nx",
    "ny",
    "burn_in",
    "bound",
    "probe",
    "period_tol",
    "lyapunov_threshold",
    "lyapunov_len",
    "seed",
    "init_half_width",
    "curves",
];

impl SweepConfig {
    pub fn new(tau_l: f64, mu: f64, window: Window, nx: usize, ny: usize) -> Self {
        Self {
            tau_l,
            mu,
            window,
            nx,
            ny,
            classifier: ClassifierConfig::default(),
            curves: Vec::new(),
        }
    }

    pub fn validate(&self) -> Result<(), SweepError> {
        if self.nx < 2 || self.ny < 2 {
            return Err(SweepError::TooSmall { nx: self.nx, ny: self.ny });
        }
        let w = self.window;
        let ok = |r: (f64, f64)| r.0.is_finite() && r.1.is_finite() && r.0 < r.1;
        if !(ok(w.tau_r) && ok(w.delta_r)) {
            return Err(SweepError::Window(w));
        }
        if self.mu.abs() != 1.0 {
            return Err(SweepError::Mu(self.mu));
        }
        if !self.tau_l.is_finite() {
            return Err(SweepError::TauL);
        }
        Ok(())
    }

    /// Grid coordinate of column `ix`; the outer columns sit on the window edges.
    pub fn tau_r(&self, ix: usize) -> f64 {
        lerp(self.window.tau_r, ix, self.nx)
    }

    pub fn delta_r(&self, iy: usize) -> f64 {
        lerp(self.window.delta_r, iy, self.ny)
    }

    pub fn params(&self, ix: usize, iy: usize) -> NormalFormParams {
        NormalFormParams {
            tau_l: self.tau_l,
            tau_r: self.tau_r(ix),
            delta_r: self.delta_r(iy),
            mu: self.mu,
        }
    }

    /// Reads a config file; missing keys keep the defaults of `base`.
    pub fn from_kv(kv: &KvConfig, base: &SweepConfig) -> Result<Self, SweepError> {
        kv.check_known(SWEEP_KEYS)?;
        let c = &base.classifier;
        let curves = match kv.raw("curves") {
            None => base.curves.clone(),
            Some(s) => s
                .split(',')
                .map(str::trim)
                .filter(|s| !s.is_empty())
                .map(|s| {
                    s.parse::<CurveId>().map_err(|e| ConfigError::BadValue {
                        key: "curves".into(),
                        value: s.into(),
                        reason: e.to_string(),
                    })
                })
                .collect::<Result<_, _>>()?,
        };
        let cfg = SweepConfig {
            tau_l: kv.get_or("tau_L", base.tau_l)?,
            mu: kv.get_or("mu", base.mu)?,
            window: Window::new(
                (kv.get_or("tau_R_min", base.window.tau_r.0)?, kv.get_or("tau_R_max", base.window.tau_r.1)?),
                (
                    kv.get_or("delta_R_min", base.window.delta_r.0)?,
                    kv.get_or("delta_R_max", base.window.delta_r.1)?,
                ),
            ),
            nx: kv.get_or("nx", base.nx)?,
            ny: kv.get_or("ny", base.ny)?,
            classifier: ClassifierConfig {
                burn_in: kv.get_or("burn_in", c.burn_in)?,
                bound: kv.get_or("bound", c.bound)?,
                probe: kv.get_or("probe", c.probe)?,
                period_tol: kv.get_or("period_tol", c.period_tol)?,
                lyapunov_threshold: kv.get_or("lyapunov_threshold", c.lyapunov_threshold)?,
                lyapunov_len: kv.get_or("lyapunov_len", c.lyapunov_len)?,
                seed: kv.get_or("seed", c.seed)?,
                init_half_width: kv.get_or("init_half_width", c.init_half_width)?,
            },
            curves,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_kv(&self) -> KvConfig {
        let mut kv = KvConfig::default();
        let c = &self.classifier;
        kv.set("tau_L", self.tau_l);
        kv.set("mu", self.mu);
        kv.set("tau_R_min", self.window.tau_r.0);
        kv.set("tau_R_max", self.window.tau_r.1);
        kv.set("delta_R_min", self.window.delta_r.0);
        kv.set("delta_R_max", self.window.delta_r.1);
        kv.set("nx", self.nx);
        kv.set("ny", self.ny);
        kv.set("burn_in", c.burn_in);
        kv.set("bound", c.bound);
        kv.set("probe", c.probe);
        kv.set("period_tol", c.period_tol);
        kv.set("lyapunov_threshold", c.lyapunov_threshold);
        kv.set("lyapunov_len", c.lyapunov_len);
        kv.set("seed", c.seed);
        kv.set("init_half_width", c.init_half_width);
        let ids: Vec<String> = self.curves.iter().map(ToString::to_string).collect();
        kv.set("curves", ids.join(","));
        kv
    }
}

/// `n` equi-spaced points with both ends included.
pub(crate) fn lerp(r: (f64, f64), i: usize, n: usize) -> f64 {
    if n <= 1 {
        return 0.5 * (r.0 + r.1);
    }
    if i == n - 1 {
        return r.1;
    }
    r.0 + (r.1 - r.0) * i as f64 / (n - 1) as f64
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClassificationRaster {
    pub config: SweepConfig,
    /// Row-major, `iy * nx + ix`, with `iy = 0` at the lowest `delta_R`.
    pub cells: Vec<AttractorClass>,
    /// Crate version that produced the raster.
    pub version: String,
}

impl ClassificationRaster {
    pub fn get(&self, ix: usize, iy: usize) -> AttractorClass {
        self.cells[iy * self.config.nx + ix]
    }

    /// Cell nearest to a parameter point, if inside the window.
    pub fn cell_at(&self, tau_r: f64, delta_r: f64) -> Option<(usize, usize)> {
        let c = &self.config;
        if !c.window.contains(tau_r, delta_r) {
            return None;
        }
        let fx = (tau_r - c.window.tau_r.0) / (c.window.tau_r.1 - c.window.tau_r.0) * (c.nx - 1) as f64;
        let fy = (delta_r - c.window.delta_r.0) / (c.window.delta_r.1 - c.window.delta_r.0) * (c.ny - 1) as f64;
        Some((fx.round() as usize, fy.round() as usize))
    }
}

/// Classifies one cell from an initial point drawn from the substream
/// `(seed, ix, iy)`.
pub fn classify_cell(cfg: &SweepConfig, ix: usize, iy: usize) -> AttractorClass {
    let params = cfg.params(ix, iy);
    let mut rng = substream(cfg.classifier.seed, ix as u64, iy as u64);
    let p0 = random_initial_point(&params, &cfg.classifier, &mut rng);
    classify_from(&params, &cfg.classifier, p0).class
}

/// Classifies every cell in parallel. Cells are independent and collected
/// by index, so the result does not depend on the number of workers.
pub fn run_sweep(cfg: &SweepConfig) -> Result<ClassificationRaster, SweepError> {
    cfg.validate()?;
    let nx = cfg.nx;
    let cells = (0..nx * cfg.ny)
        .into_par_iter()
        .map(|k| classify_cell(cfg, k % nx, k / nx))
        .collect();
    Ok(ClassificationRaster {
        config: cfg.clone(),
        cells,
        version: env!("CARGO_PKG_VERSION").to_string(),
    })
}

/// [`run_sweep`] on a dedicated pool of `threads` workers.
pub fn run_sweep_with_threads(cfg: &SweepConfig, threads: usize) -> Result<ClassificationRaster, SweepError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| SweepError::Pool(e.to_string()))?;
    pool.install(|| run_sweep(cfg))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::maps::{fixed_point_right, fixed_point_stability};

    fn quick() -> ClassifierConfig {
        ClassifierConfig {
            burn_in: 5_000,
            lyapunov_len: 2_000,
            ..Default::default()
        }
    }

    #[test]
    fn grid_includes_window_edges() {
        let c = SweepConfig::new(0.0, 1.0, Window::new((-1.0, 2.0), (0.0, 1.0)), 4, 3);
        assert_eq!(c.tau_r(0), -1.0);
        assert_eq!(c.tau_r(3), 2.0);
        assert_eq!(c.tau_r(1), 0.0);
        assert_eq!(c.delta_r(1), 0.5);
        assert_eq!(c.delta_r(2), 1.0);
    }

    #[test]
    fn rejects_bad_configs() {
        let w = Window::new((0.0, 1.0), (0.0, 1.0));
        assert!(matches!(SweepConfig::new(0.0, 1.0, w, 1, 5).validate(), Err(SweepError::TooSmall { .. })));
        assert!(matches!(
            SweepConfig::new(0.0, 1.0, Window::new((1.0, 1.0), (0.0, 1.0)), 5, 5).validate(),
            Err(SweepError::Window(_))
        ));
        assert!(matches!(SweepConfig::new(0.0, 0.5, w, 5, 5).validate(), Err(SweepError::Mu(_))));
    }

    #[test]
    fn cells_inside_the_stability_triangle_are_fixed_points() {
        let mut cfg = SweepConfig::new(0.4, 1.0, Window::new((1.5, 2.2), (0.4, 1.1)), 10, 10);
        cfg.classifier = quick();
        let r = run_sweep(&cfg).unwrap();
        let mut inside = 0;
        for iy in 0..10 {
            for ix in 0..10 {
                let p = cfg.params(ix, iy);
                // Admissible and stable right fixed point, checked directly.
                let s = fixed_point_stability(&p).unwrap();
                let adm = fixed_point_right(&p).unwrap().admissible;
                if p.tau_r.abs() - 1.0 < p.delta_r && p.delta_r < 1.0 {
                    assert!(s.stable_right && adm);
                    assert_eq!(r.get(ix, iy), AttractorClass::Periodic(1), "{p:?}");
                    inside += 1;
                }
            }
        }
        assert!(inside > 10);
    }

    #[test]
    fn config_round_trips_through_key_values() {
        let mut cfg = SweepConfig::new(-1.2, -1.0, Window::new((0.0, 2.0), (-1.0, 6.0)), 30, 20);
        cfg.classifier.seed = 7;
        cfg.curves = vec!["eta3".parse().unwrap(), "xi2".parse().unwrap()];
        let text = cfg.to_kv().to_string();
        let back = SweepConfig::from_kv(&KvConfig::parse(&text).unwrap(), &SweepConfig::new(0.0, 1.0, Window::new((0.0, 1.0), (0.0, 1.0)), 2, 2)).unwrap();
        assert_eq!(back, cfg);
        let bad = KvConfig::parse("nz = 3").unwrap();
        assert!(matches!(SweepConfig::from_kv(&bad, &cfg), Err(SweepError::Config(ConfigError::Unknown(_)))));
    }

    #[test]
    fn worker_count_does_not_change_the_raster() {
        let mut cfg = SweepConfig::new(-1.2, -1.0, Window::new((0.5, 2.0), (0.0, 6.0)), 16, 12);
        cfg.classifier = quick();
        let a = run_sweep_with_threads(&cfg, 1).unwrap();
        let b = run_sweep_with_threads(&cfg, 3).unwrap();
        assert_eq!(a, b);
        assert_eq!(encode_raster(&a, RasterFormat::Csv), encode_raster(&b, RasterFormat::Csv));
    }
}
