//! Curve overlays in raster cell coordinates.

use super::ClassificationRaster;
use crate::curves::{CurveId, CurveSample, ParamPoint, Window};

/// Polylines of one curve, in cell coordinates: `(0, 0)` is the cell at the
/// lower-left window corner and `(nx - 1, ny - 1)` the upper-right one.
#[derive(Debug, Clone, PartialEq)]
pub struct Overlay {
    pub id: CurveId,
    pub polylines: Vec<Vec<(f64, f64)>>,
}

/// Liang-Barsky clip of the segment `a -> b`; returns the parameter range
/// kept, if any.
fn clip_segment(a: ParamPoint, b: ParamPoint, w: &Window) -> Option<(f64, f64)> {
    let (dx, dy) = (b.tau_r - a.tau_r, b.delta_r - a.delta_r);
    let (mut t0, mut t1) = (0.0f64, 1.0f64);
    for (p, q) in [
        (-dx, a.tau_r - w.tau_r.0),
        (dx, w.tau_r.1 - a.tau_r),
        (-dy, a.delta_r - w.delta_r.0),
        (dy, w.delta_r.1 - a.delta_r),
    ] {
        if p == 0.0 {
            if q < 0.0 {
                return None;
            }
            continue;
        }
        let r = q / p;
        if p < 0.0 {
            t0 = t0.max(r);
        } else {
            t1 = t1.min(r);
        }
        if t0 > t1 {
            return None;
        }
    }
    Some((t0, t1))
}

fn at(a: ParamPoint, b: ParamPoint, t: f64) -> ParamPoint {
    if t == 0.0 {
        return a;
    }
    if t == 1.0 {
        return b;
    }
    ParamPoint {
        tau_r: a.tau_r + t * (b.tau_r - a.tau_r),
        delta_r: a.delta_r + t * (b.delta_r - a.delta_r),
    }
}

/// Clips a polyline to the window, keeping its order. A polyline that
/// leaves and re-enters the window becomes several pieces.
pub fn clip_polyline(line: &[ParamPoint], w: &Window) -> Vec<Vec<ParamPoint>> {
    let mut out: Vec<Vec<ParamPoint>> = Vec::new();
    let mut cur: Vec<ParamPoint> = Vec::new();
    if line.len() == 1 && w.contains(line[0].tau_r, line[0].delta_r) {
        return vec![line.to_vec()];
    }
    for s in line.windows(2) {
        let (a, b) = (s[0], s[1]);
        match clip_segment(a, b, w) {
            Some((t0, t1)) => {
                let (p, q) = (at(a, b, t0), at(a, b, t1));
                if cur.last() != Some(&p) {
                    if !cur.is_empty() {
                        out.push(std::mem::take(&mut cur));
                    }
                    cur.push(p);
                }
                cur.push(q);
                if t1 < 1.0 {
                    out.push(std::mem::take(&mut cur));
                }
            }
            None => {
                if !cur.is_empty() {
                    out.push(std::mem::take(&mut cur));
                }
            }
        }
    }
    if !cur.is_empty() {
        out.push(cur);
    }
    out
}

/// Clips each sample to the raster window and maps it to cell coordinates.
pub fn overlay_curves(r: &ClassificationRaster, samples: &[CurveSample]) -> Vec<Overlay> {
    let c = &r.config;
    let w = c.window;
    let sx = (c.nx - 1) as f64 / (w.tau_r.1 - w.tau_r.0);
    let sy = (c.ny - 1) as f64 / (w.delta_r.1 - w.delta_r.0);
    samples
        .iter()
        .map(|s| Overlay {
            id: s.id,
            polylines: s
                .branches
                .iter()
                .flat_map(|b| clip_polyline(b, &w))
                .map(|piece| {
                    piece
                        .iter()
                        .map(|p| ((p.tau_r - w.tau_r.0) * sx, (p.delta_r - w.delta_r.0) * sy))
                        .collect()
                })
                .collect(),
        })
        .collect()
}
