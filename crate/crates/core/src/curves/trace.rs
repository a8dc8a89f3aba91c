//! Tracing zero sets of residuals over a window of the `(tau_R, delta_R)` plane.

use rayon::prelude::*;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Window {
    pub tau_r: (f64, f64),
    pub delta_r: (f64, f64),
}

impl Window {
    pub fn new(tau_r: (f64, f64), delta_r: (f64, f64)) -> Self {
        Self { tau_r, delta_r }
    }

    pub fn contains(&self, tau_r: f64, delta_r: f64) -> bool {
        tau_r >= self.tau_r.0 && tau_r <= self.tau_r.1 && delta_r >= self.delta_r.0 && delta_r <= self.delta_r.1
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParamPoint {
    pub tau_r: f64,
    pub delta_r: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TraceConfig {
    /// Number of `tau_R` columns, edges included.
    pub columns: usize,
    /// Samples per column when bracketing sign changes.
    pub rows: usize,
    /// Also scan rows and bisect in `tau_R`, catching near-vertical branches.
    pub scan_rows: bool,
    pub tol: f64,
}

impl Default for TraceConfig {
    fn default() -> Self {
        Self {
            columns: 400,
            rows: 400,
            scan_rows: true,
            tol: 1e-12,
        }
    }
}

/// Bisection on a bracketing interval until its width is below `tol`.
/// Returns `None` when the end values do not differ in sign.
pub fn bisect(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> Option<f64> {
    let mut fa = f(a);
    let fb = f(b);
    if fa == 0.0 {
        return Some(a);
    }
    if fb == 0.0 {
        return Some(b);
    }
    if !(fa * fb < 0.0) {
        return None;
    }
    for _ in 0..200 {
        if (b - a).abs() <= tol {
            break;
        }
        let m = 0.5 * (a + b);
        let fm = f(m);
        if fm == 0.0 {
            return Some(m);
        }
        if (fm < 0.0) == (fa < 0.0) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    Some(0.5 * (a + b))
}

fn grid(range: (f64, f64), n: usize) -> Vec<f64> {
    if n <= 1 {
        return vec![0.5 * (range.0 + range.1)];
    }
    (0..n)
        .map(|i| range.0 + (range.1 - range.0) * i as f64 / (n - 1) as f64)
        .collect()
}

/// Roots of `g` on `range`, located by sign changes between samples and
/// refined by bisection. Sign changes across poles are discarded by
/// requiring the residual to shrink at the root.
pub fn roots_on_line(g: impl Fn(f64) -> f64, range: (f64, f64), samples: usize, tol: f64) -> Vec<f64> {
    let xs = grid(range, samples);
    let vals: Vec<f64> = xs.iter().map(|&x| g(x)).collect();
    let mut out = Vec::new();
    for i in 0..xs.len().saturating_sub(1) {
        let (fa, fb) = (vals[i], vals[i + 1]);
        if !(fa.is_finite() && fb.is_finite()) {
            continue;
        }
        if fa == 0.0 {
            out.push(xs[i]);
            continue;
        }
        if fa * fb >= 0.0 {
            continue;
        }
        if let Some(r) = bisect(&g, xs[i], xs[i + 1], tol) {
            let fr = g(r);
            if fr.is_finite() && fr.abs() <= 1e-6 * (1.0 + fa.abs().min(fb.abs())) {
                out.push(r);
            }
        }
    }
    if let Some(&last) = vals.last() {
        if last == 0.0 {
            out.push(xs[xs.len() - 1]);
        }
    }
    out
}

/// Traces the zero set of `f(tau_r, delta_r)` in `window` and links the
/// roots into polylines, each ordered by increasing `tau_R`.
pub fn trace_implicit<F>(f: F, window: Window, cfg: &TraceConfig) -> Vec<Vec<ParamPoint>>
where
    F: Fn(f64, f64) -> f64 + Sync,
{
    let cols = grid(window.tau_r, cfg.columns);
    let mut pts: Vec<ParamPoint> = cols
        .par_iter()
        .flat_map_iter(|&t| {
            roots_on_line(|d| f(t, d), window.delta_r, cfg.rows, cfg.tol)
                .into_iter()
                .map(move |d| ParamPoint { tau_r: t, delta_r: d })
        })
        .collect();
    if cfg.scan_rows {
        let rows = grid(window.delta_r, cfg.rows);
        let extra: Vec<ParamPoint> = rows
            .par_iter()
            .flat_map_iter(|&d| {
                roots_on_line(|t| f(t, d), window.tau_r, cfg.columns, cfg.tol)
                    .into_iter()
                    .map(move |t| ParamPoint { tau_r: t, delta_r: d })
            })
            .collect();
        pts.extend(extra);
    }
    let dt = (window.tau_r.1 - window.tau_r.0) / cfg.columns.max(2) as f64;
    let dd = (window.delta_r.1 - window.delta_r.0) / cfg.rows.max(2) as f64;
    link(pts, dt, dd)
}

/// Greedy nearest-neighbour linking in coordinates scaled by the cell size,
/// then splitting into pieces monotone in `tau_R`.
pub fn link(mut pts: Vec<ParamPoint>, dt: f64, dd: f64) -> Vec<Vec<ParamPoint>> {
    let (sx, sy) = (dt.abs().max(f64::MIN_POSITIVE), dd.abs().max(f64::MIN_POSITIVE));
    let key = |p: &ParamPoint| (p.tau_r / sx, p.delta_r / sy);
    pts.sort_by(|a, b| a.tau_r.total_cmp(&b.tau_r).then(a.delta_r.total_cmp(&b.delta_r)));
    pts.dedup_by(|a, b| (a.tau_r - b.tau_r).abs() < 1e-9 * sx && (a.delta_r - b.delta_r).abs() < 1e-9 * sy);
    let n = pts.len();
    let mut used = vec![false; n];
    let max_link = 3.0;
    let mut lines = Vec::new();
    for start in 0..n {
        if used[start] {
            continue;
        }
        used[start] = true;
        let mut line = vec![pts[start]];
        let mut cur = start;
        loop {
            let (cx, cy) = key(&pts[cur]);
            let mut best: Option<(usize, f64)> = None;
            // Points are sorted by tau_R; only a band of them can be close.
            let lo = pts.partition_point(|p| p.tau_r / sx < cx - max_link);
            for j in lo..n {
                let (x, y) = key(&pts[j]);
                if x > cx + max_link {
                    break;
                }
                if used[j] {
                    continue;
                }
                let d = (x - cx).hypot(y - cy);
                if d <= max_link && best.map_or(true, |(_, bd)| d < bd) {
                    best = Some((j, d));
                }
            }
            match best {
                Some((j, _)) => {
                    used[j] = true;
                    line.push(pts[j]);
                    cur = j;
                }
                None => break,
            }
        }
        lines.extend(monotone_pieces(line));
    }
    lines
}

fn monotone_pieces(line: Vec<ParamPoint>) -> Vec<Vec<ParamPoint>> {
    let mut out: Vec<Vec<ParamPoint>> = Vec::new();
    let mut cur: Vec<ParamPoint> = Vec::new();
    let mut dir = 0i8;
    for p in line {
        if let Some(last) = cur.last() {
            let step = p.tau_r - last.tau_r;
            let s = if step > 0.0 {
                1
            } else if step < 0.0 {
                -1
            } else {
                0
            };
            if s != 0 && dir != 0 && s != dir {
                let tail = *cur.last().unwrap();
                out.push(std::mem::take(&mut cur));
                cur.push(tail);
                dir = 0;
            }
            if s != 0 && dir == 0 {
                dir = s;
            }
        }
        cur.push(p);
    }
    if !cur.is_empty() {
        out.push(cur);
    }
    for piece in &mut out {
        if piece.first().map(|p| p.tau_r) > piece.last().map(|p| p.tau_r) {
            piece.reverse();
        }
    }
    out.retain(|p| !p.is_empty());
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn traces_a_circle_in_monotone_pieces() {
        let w = Window::new((-2.0, 2.0), (-2.0, 2.0));
        let cfg = TraceConfig {
            columns: 100,
            rows: 100,
            ..Default::default()
        };
        let lines = trace_implicit(|t, d| t * t + d * d - 1.0, w, &cfg);
        assert!(lines.len() >= 2);
        for l in &lines {
            for p in l {
                assert!((p.tau_r.hypot(p.delta_r) - 1.0).abs() < 1e-9);
            }
            for s in l.windows(2) {
                assert!(s[1].tau_r >= s[0].tau_r);
            }
        }
    }

    #[test]
    fn poles_are_not_roots() {
        let r = roots_on_line(|x| 1.0 / (x - 0.3), (0.0, 1.0), 50, 1e-12);
        assert!(r.is_empty());
    }

    #[test]
    fn vertical_line_found_by_row_scan() {
        let w = Window::new((-2.0, 0.0), (-1.0, 1.0));
        let lines = trace_implicit(|t, _| t + 1.0, w, &TraceConfig::default());
        let pts: Vec<_> = lines.iter().flatten().collect();
        assert!(pts.len() > 100);
        assert!(pts.iter().all(|p| (p.tau_r + 1.0).abs() < 1e-11));
    }

    proptest! {
        #[test]
        fn traced_lines_satisfy_residual(a in -2.0f64..2.0, b in -1.0f64..1.0) {
            let w = Window::new((-1.0, 1.0), (-5.0, 5.0));
            let cfg = TraceConfig { columns: 60, rows: 60, ..Default::default() };
            let lines = trace_implicit(|t, d| d - a * t - b, w, &cfg);
            for l in &lines {
                for p in l {
                    prop_assert!((p.delta_r - a * p.tau_r - b).abs() < 1e-9);
                }
                for s in l.windows(2) {
                    prop_assert!(s[1].tau_r >= s[0].tau_r);
                }
            }
        }
    }
}
