use super::{classify_from, random_initial_point, settle, substream, AttractorClass, ClassifierConfig, ClassifyError, OccupancyGrid};
use crate::maps::{step, NormalFormParams, PlanePoint};

#[derive(Debug, Clone, PartialEq)]
pub struct ComponentConfig {
    pub samples: usize,
    /// Gaps wider than this fraction of the attractor's extent separate components.
    pub gap_fraction: f64,
    pub grid: usize,
}

impl Default for ComponentConfig {
    fn default() -> Self {
        Self {
            samples: 200_000,
            gap_fraction: 0.02,
            grid: 512,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ComponentCount {
    pub count: usize,
    /// Estimate from the attractor's trace on the x-axis.
    pub slice: usize,
    /// Connected components of the occupancy grid.
    pub grid: usize,
}

/// Counts the connected components of the attractor reached from the
/// classifier's random initial point.
///
/// Two estimates are made: [`slice_estimate`] on the attractor's trace on
/// the x-axis, and a flood fill of a grid occupancy image dilated to bridge
/// gaps narrower than `gap_fraction` of the extent. They must agree.
pub fn count_components(
    params: &NormalFormParams,
    cfg: &ClassifierConfig,
    comp: &ComponentConfig,
) -> Result<ComponentCount, ClassifyError> {
    let mut rng = substream(cfg.seed, 0, 0);
    let p0 = random_initial_point(params, cfg, &mut rng);
    count_components_from(params, cfg, comp, p0)
}

pub fn count_components_from(
    params: &NormalFormParams,
    cfg: &ClassifierConfig,
    comp: &ComponentConfig,
    p0: PlanePoint,
) -> Result<ComponentCount, ClassifyError> {
    let c = classify_from(params, cfg, p0);
    match c.class {
        AttractorClass::Diverging => return Err(ClassifyError::NoAttractor),
        AttractorClass::Periodic(p) => {
            let p = p as usize;
            return Ok(ComponentCount {
                count: p,
                slice: p,
                grid: p,
            });
        }
        _ => {}
    }
    let z = settle(p0, params, cfg.burn_in, cfg.bound).map_err(|_| ClassifyError::NoAttractor)?;
    let samples = sample_attractor(params, z, comp.samples, cfg.bound)?;

    let slice = slice_estimate(&samples, comp.gap_fraction);

    let grid = OccupancyGrid::covering(&samples, comp.grid, 0);
    let r = ((comp.gap_fraction * comp.grid as f64) / 2.0).floor() as usize;
    let grid_count = grid.dilate(r).components();
    if slice != grid_count {
        return Err(ClassifyError::Unreliable {
            slice,
            grid: grid_count,
        });
    }
    Ok(ComponentCount {
        count: grid_count,
        slice,
        grid: grid_count,
    })
}

pub(crate) fn sample_attractor(
    params: &NormalFormParams,
    mut z: PlanePoint,
    n: usize,
    bound: f64,
) -> Result<Vec<PlanePoint>, ClassifyError> {
    let mut out = Vec::with_capacity(n);
    for _ in 0..n {
        out.push(z);
        z = step(z, params);
        if !(z.norm() <= bound) {
            return Err(ClassifyError::NoAttractor);
        }
    }
    Ok(out)
}

/// Component count read off the attractor's trace on the x-axis.
///
/// The axis points (images of points with `x <= 0`) are split into intervals
/// at wide gaps. Components that never meet the axis are accounted for by
/// the return times between intervals: an attractor with `m` cyclically
/// permuted components takes a multiple of `m` steps around every closed
/// loop of intervals, so `m` is the gcd of those loop lengths.
pub fn slice_estimate(samples: &[PlanePoint], frac: f64) -> usize {
    let visits: Vec<(usize, f64)> = samples
        .windows(2)
        .enumerate()
        .filter(|(_, w)| w[0].x <= 0.0)
        .map(|(i, w)| (i + 1, w[1].x))
        .collect();
    if visits.len() < 2 {
        return 1;
    }
    let mut xs: Vec<f64> = visits.iter().map(|v| v.1).collect();
    let starts = interval_starts(&mut xs, frac);
    let label = |x: f64| starts.partition_point(|&s| s <= x).saturating_sub(1);
    let mut potential: Vec<Option<i64>> = vec![None; starts.len()];
    let mut g: i64 = 0;
    let (t0, x0) = visits[0];
    potential[label(x0)] = Some(t0 as i64);
    for w in visits.windows(2) {
        let (t1, x1) = w[0];
        let (t2, x2) = w[1];
        let (j1, j2) = (label(x1), label(x2));
        let p1 = potential[j1].expect("walk visits j1 before leaving it");
        let expected = p1 + (t2 - t1) as i64;
        match potential[j2] {
            None => potential[j2] = Some(expected),
            Some(p2) => g = gcd(g, (expected - p2).abs()),
        }
    }
    if g == 0 {
        starts.len()
    } else {
        g as usize
    }
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Sorts `xs` and returns the left end of every cluster.
fn interval_starts(xs: &mut [f64], frac: f64) -> Vec<f64> {
    xs.sort_by(|a, b| a.total_cmp(b));
    let width = xs[xs.len() - 1] - xs[0];
    let mut starts = vec![xs[0]];
    for w in xs.windows(2) {
        if w[1] - w[0] > frac * width {
            starts.push(w[1]);
        }
    }
    starts
}

/// Number of clusters in `xs` separated by gaps wider than `frac` of the range.
pub fn count_intervals(xs: &mut [f64], frac: f64) -> usize {
    if xs.is_empty() {
        return 0;
    }
    xs.sort_by(|a, b| a.total_cmp(b));
    let width = xs[xs.len() - 1] - xs[0];
    if width == 0.0 {
        return 1;
    }
    1 + xs.windows(2).filter(|w| w[1] - w[0] > frac * width).count()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interval_counting() {
        let mut xs = vec![0.0, 0.1, 0.2, 0.9, 1.0];
        assert_eq!(count_intervals(&mut xs, 0.3), 2);
        assert_eq!(count_intervals(&mut xs, 0.02), 5);
        assert_eq!(count_intervals(&mut [], 0.02), 0);
    }

    #[test]
    fn slice_estimate_sees_components_off_the_axis() {
        // Four points visited cyclically; only two lie on the axis.
        let cyc = [
            PlanePoint::new(-1.0, 0.0),
            PlanePoint::new(2.0, 0.0),
            PlanePoint::new(3.0, 1.0),
            PlanePoint::new(-3.0, 2.0),
        ];
        let samples: Vec<_> = (0..400).map(|i| cyc[i % 4]).collect();
        assert_eq!(slice_estimate(&samples, 0.02), 4);
    }

    #[test]
    fn periodic_attractor_counts_its_points() {
        let pr = NormalFormParams::new(-0.4, -0.55, 2.1, 1.0).unwrap();
        // Start on the stable period-three cycle.
        let sol = crate::maps::solve_cycle(&"LLR".parse().unwrap(), &pr).unwrap();
        let cfg = ClassifierConfig { burn_in: 2_000, ..Default::default() };
        let c = count_components_from(&pr, &cfg, &ComponentConfig::default(), sol.points[0]).unwrap();
        assert_eq!(c.count, 3);
    }
}
