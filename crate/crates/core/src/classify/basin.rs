use super::components::sample_attractor;
use super::{classify_from, random_initial_point, settle, substream, AttractorClass, ClassifierConfig, OccupancyGrid};
use crate::maps::{step, NormalFormParams, PlanePoint};
use rayon::prelude::*;

/// Rectangle of initial points; cell centres are equally spaced and include
/// the edges.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Region {
    pub x: (f64, f64),
    pub y: (f64, f64),
    pub nx: usize,
    pub ny: usize,
}

impl Region {
    pub fn point(&self, ix: usize, iy: usize) -> PlanePoint {
        PlanePoint::new(lerp(self.x, ix, self.nx), lerp(self.y, iy, self.ny))
    }
}

pub(crate) fn lerp(range: (f64, f64), i: usize, n: usize) -> f64 {
    if n <= 1 {
        return 0.5 * (range.0 + range.1);
    }
    range.0 + (range.1 - range.0) * i as f64 / (n - 1) as f64
}

#[derive(Debug, Clone, PartialEq)]
pub struct Attractor {
    pub class: AttractorClass,
    /// The cycle for periodic attractors, a sample otherwise.
    pub points: Vec<PlanePoint>,
    grid: Option<OccupancyGrid>,
}

impl Attractor {
    fn contains(&self, z: PlanePoint) -> bool {
        match &self.grid {
            Some(g) => g.contains(z),
            None => {
                let scale = 1.0 + self.points.iter().map(|p| p.norm()).fold(0.0, f64::max);
                self.points.iter().any(|p| p.dist(z) < 1e-7 * scale)
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BasinLabel {
    Diverging,
    Attractor(usize),
}

#[derive(Debug, Clone, PartialEq)]
pub struct BasinRaster {
    pub region: Region,
    /// Row-major, `labels[iy * nx + ix]`.
    pub labels: Vec<BasinLabel>,
    pub attractors: Vec<Attractor>,
}

const SAMPLES: usize = 100_000;
const GRID: usize = 400;
const MATCH_STEPS: usize = 2_000;

struct AttractorSet<'a> {
    params: &'a NormalFormParams,
    cfg: &'a ClassifierConfig,
    list: Vec<Attractor>,
}

impl AttractorSet<'_> {
    fn find(&self, mut z: PlanePoint) -> Option<usize> {
        for _ in 0..MATCH_STEPS {
            if let Some(k) = self.list.iter().position(|a| a.contains(z)) {
                return Some(k);
            }
            z = step(z, self.params);
        }
        None
    }

    fn assign(&mut self, z: PlanePoint) -> Option<usize> {
        if let Some(k) = self.find(z) {
            return Some(k);
        }
        let cfg = ClassifierConfig {
            burn_in: 0,
            period_tol: self.cfg.period_tol.max(1e-9),
            ..self.cfg.clone()
        };
        let c = classify_from(self.params, &cfg, z);
        let attractor = match c.class {
            AttractorClass::Diverging => return None,
            AttractorClass::Periodic(p) => {
                let mut pts = Vec::with_capacity(p as usize);
                let mut w = z;
                for _ in 0..p {
                    pts.push(w);
                    w = step(w, self.params);
                }
                Attractor {
                    class: c.class,
                    points: pts,
                    grid: None,
                }
            }
            class => {
                let pts = sample_attractor(self.params, z, SAMPLES, self.cfg.bound).ok()?;
                let grid = OccupancyGrid::covering(&pts, GRID, 4).dilate(2);
                Attractor {
                    class,
                    points: pts.into_iter().step_by(100).collect(),
                    grid: Some(grid),
                }
            }
        };
        self.list.push(attractor);
        Some(self.list.len() - 1)
    }
}

/// Distinct attractors reached from `starts` random initial points.
pub fn find_attractors(params: &NormalFormParams, cfg: &ClassifierConfig, starts: usize) -> Vec<Attractor> {
    let mut set = AttractorSet {
        params,
        cfg,
        list: Vec::new(),
    };
    for k in 0..starts {
        let mut rng = substream(cfg.seed, 1, k as u64);
        let p0 = random_initial_point(params, cfg, &mut rng);
        if let Ok(z) = settle(p0, params, cfg.burn_in, cfg.bound) {
            set.assign(z);
        }
    }
    set.list
}

/// Labels every initial point of `region` by the attractor its orbit settles on.
pub fn basin_raster(params: &NormalFormParams, cfg: &ClassifierConfig, region: Region) -> BasinRaster {
    let settled: Vec<Option<PlanePoint>> = (0..region.nx * region.ny)
        .into_par_iter()
        .map(|k| {
            let p = region.point(k % region.nx, k / region.nx);
            settle(p, params, cfg.burn_in, cfg.bound).ok()
        })
        .collect();
    let mut set = AttractorSet {
        params,
        cfg,
        list: Vec::new(),
    };
    let labels = settled
        .into_iter()
        .map(|z| match z.and_then(|z| set.assign(z)) {
            Some(k) => BasinLabel::Attractor(k),
            None => BasinLabel::Diverging,
        })
        .collect();
    BasinRaster {
        region,
        labels,
        attractors: set.list,
    }
}
