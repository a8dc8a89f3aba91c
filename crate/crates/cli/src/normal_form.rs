//! Subcommands acting on the normal form itself.

use crate::error::CliError;
use crate::output::{load_config, Outputs};
use crate::parse::{put, put_range};
use crate::{BasinArgs, ClassifyArgs, Common, CurveArgs, OrbitArgs, PointArgs, SweepArgs};
use bcnf::classify::{
    basin_raster, classify_from, count_components_from, random_initial_point, substream, AttractorClass, BasinLabel,
    ClassifierConfig, ComponentConfig, Region,
};
use bcnf::config::KvConfig;
use bcnf::curves::{trace_curve, CurveId, CurveSample, TraceConfig, Window};
use bcnf::maps::{orbit as iterate, solve_cycle, NormalFormParams, PlanePoint, Word};
use bcnf::sweep::{encode_raster, overlay_curves, run_sweep, RasterFormat, SweepConfig, SWEEP_KEYS};
use serde_json::json;
use std::fmt::Write as _;

pub fn class_name(c: AttractorClass) -> &'static str {
    match c {
        AttractorClass::Diverging => "diverging",
        AttractorClass::Periodic(_) => "periodic",
        AttractorClass::Chaotic => "chaotic",
        AttractorClass::QuasiOrLongPeriod => "quasi_or_long_period",
    }
}

fn require(kv: &KvConfig, keys: &[&str], hint: &str) -> Result<(), CliError> {
    match keys.iter().find(|k| kv.raw(k).is_none()) {
        Some(k) => Err(CliError::Usage(format!("missing {k} (give {hint} or set it in --config)"))),
        None => Ok(()),
    }
}

const POINT_KEYS: &[&str] = &["tau_L", "tau_R", "delta_R", "mu", "seed", "burn_in"];

/// Config file plus the point flags, checked against `POINT_KEYS` and `extra`.
fn point_config(common: &Common, p: &PointArgs, extra: &[&str]) -> Result<KvConfig, CliError> {
    let mut kv = load_config(common.config.as_deref())?;
    let known: Vec<&str> = POINT_KEYS.iter().chain(extra).copied().collect();
    kv.check_known(&known)?;
    put(&mut kv, "tau_L", p.tau_l);
    put(&mut kv, "tau_R", p.tau_r);
    put(&mut kv, "delta_R", p.delta_r);
    put(&mut kv, "mu", p.mu);
    put(&mut kv, "seed", p.seed);
    put(&mut kv, "burn_in", p.burn_in);
    require(&kv, &["tau_L", "tau_R", "delta_R", "mu"], "--tau-l, --tau-r, --delta-r and --mu")?;
    Ok(kv)
}

fn point_params(kv: &KvConfig) -> Result<NormalFormParams, CliError> {
    let get = |k: &str| kv.get::<f64>(k).map(|v| v.expect("checked by require"));
    Ok(NormalFormParams::new(get("tau_L")?, get("tau_R")?, get("delta_R")?, get("mu")?)?)
}

/// Classifier settings with `burn_in` defaulting to `burn_in`.
fn classifier(kv: &KvConfig, seed: u64, burn_in: usize) -> Result<ClassifierConfig, CliError> {
    Ok(ClassifierConfig { seed: kv.get_or("seed", seed)?, burn_in: kv.get_or("burn_in", burn_in)?, ..Default::default() })
}

pub fn sweep(common: &Common, a: SweepArgs, seed: u64) -> Result<(), CliError> {
    let mut kv = load_config(common.config.as_deref())?;
    kv.check_known(SWEEP_KEYS)?;
    put(&mut kv, "tau_L", a.tau_l);
    put(&mut kv, "mu", a.mu);
    if let Some((t, d)) = a.window {
        put_range(&mut kv, "tau_R_min", "tau_R_max", Some(t));
        put_range(&mut kv, "delta_R_min", "delta_R_max", Some(d));
    }
    if let Some((nx, ny)) = a.res {
        kv.set("nx", nx);
        kv.set("ny", ny);
    }
    put(&mut kv, "seed", a.seed);
    put(&mut kv, "burn_in", a.burn_in);
    put(&mut kv, "curves", a.curves.as_deref());
    require(&kv, &["tau_L", "mu"], "--tau-l and --mu")?;
    require(&kv, &["tau_R_min", "tau_R_max", "delta_R_min", "delta_R_max"], "--window=t0:t1,d0:d1")?;
    let formats = a
        .formats
        .iter()
        .map(|f| f.parse::<RasterFormat>().map_err(|e| CliError::Usage(e.to_string())))
        .collect::<Result<Vec<_>, _>>()?;

    let mut base = SweepConfig::new(0.0, 1.0, Window::new((0.0, 1.0), (0.0, 1.0)), 200, 200);
    base.classifier.seed = seed;
    let cfg = SweepConfig::from_kv(&kv, &base)?;
    let raster = run_sweep(&cfg)?;

    let mut out = Outputs::new(&common.out)?;
    for f in formats {
        out.write(&format!("sweep.{}", f.extension()), encode_raster(&raster, f))?;
    }
    if !cfg.curves.is_empty() {
        let samples = cfg
            .curves
            .iter()
            .map(|&id| trace_curve(id, cfg.tau_l, cfg.mu, cfg.window, &TraceConfig::default()))
            .collect::<Result<Vec<CurveSample>, _>>()?;
        for s in &samples {
            out.write(&curve_file(s.id), s.to_csv())?;
        }
        let mut text = String::from("curve_id,branch,cx,cy\n");
        for o in overlay_curves(&raster, &samples) {
            for (b, line) in o.polylines.iter().enumerate() {
                for (x, y) in line {
                    let _ = writeln!(text, "{},{b},{x},{y}", o.id);
                }
            }
        }
        out.write("overlay.csv", text)?;
    }
    let counts = raster.cells.iter().fold([0usize; 4], |mut n, c| {
        n[usize::from(c.code())] += 1;
        n
    });
    println!(
        "{} x {} cells: {} diverging, {} periodic, {} chaotic, {} quasi/long period",
        cfg.nx, cfg.ny, counts[0], counts[1], counts[2], counts[3]
    );
    out.finish("sweep", &cfg.to_kv(), Some(cfg.classifier.seed))?;
    Ok(())
}

pub fn classify(common: &Common, a: ClassifyArgs, seed: u64) -> Result<(), CliError> {
    let kv = point_config(common, &a.point, &[])?;
    let params = point_params(&kv)?;
    let cfg = classifier(&kv, seed, ClassifierConfig::default().burn_in)?;
    let p0 = random_initial_point(&params, &cfg, &mut substream(cfg.seed, 0, 0));
    let c = classify_from(&params, &cfg, p0);
    let mut report = json!({
        "class": class_name(c.class),
        "period": c.class.period(),
        "lyapunov": c.lyapunov,
    });
    let mut line = format!("{} period {}", class_name(c.class), c.class.period());
    if let Some(l) = c.lyapunov {
        let _ = write!(line, " lyapunov {l}");
    }
    if a.components && c.class != AttractorClass::Diverging {
        let n = count_components_from(&params, &cfg, &ComponentConfig::default(), p0)?;
        report["components"] = json!({ "count": n.count, "slice": n.slice, "grid": n.grid });
        let _ = write!(line, " components {}", n.count);
    }
    println!("{line}");
    let mut out = Outputs::new(&common.out)?;
    out.write("classify.json", serde_json::to_string_pretty(&report).expect("plain json") + "\n")?;
    out.finish("classify", &kv, Some(cfg.seed))?;
    Ok(())
}

pub const CURVE_DEFAULT_TAU_L: f64 = -1.2;
pub const CURVE_DEFAULT_MU: f64 = -1.0;
pub const CURVE_DEFAULT_WINDOW: ((f64, f64), (f64, f64)) = ((-3.0, 3.0), (-2.0, 8.0));

fn curve_file(id: CurveId) -> String {
    format!("curve_{}.csv", id.to_string().replace(':', "_"))
}

pub fn curve(common: &Common, a: CurveArgs) -> Result<(), CliError> {
    let name = match (a.id.chars().any(|c| c.is_ascii_digit()), a.n.or(a.k)) {
        (true, None) => a.id.clone(),
        (false, Some(n)) => match a.id.split_once(':') {
            Some((head, tag)) => format!("{head}{n}:{tag}"),
            None => format!("{}{n}", a.id),
        },
        (true, Some(_)) => return Err(CliError::Usage(format!("{} already has an index; drop --n/--k", a.id))),
        // Index-free names such as `superstable`; the parser rejects the rest.
        (false, None) => a.id.clone(),
    };
    let id: CurveId = name.parse()?;

    let mut kv = load_config(common.config.as_deref())?;
    kv.check_known(&["tau_L", "mu", "tau_R_min", "tau_R_max", "delta_R_min", "delta_R_max", "columns"])?;
    put(&mut kv, "tau_L", a.tau_l);
    put(&mut kv, "mu", a.mu);
    if let Some((t, d)) = a.window {
        put_range(&mut kv, "tau_R_min", "tau_R_max", Some(t));
        put_range(&mut kv, "delta_R_min", "delta_R_max", Some(d));
    }
    put(&mut kv, "columns", a.columns);
    let (dt, dd) = CURVE_DEFAULT_WINDOW;
    let tau_l = kv.get_or("tau_L", CURVE_DEFAULT_TAU_L)?;
    let mu = kv.get_or("mu", CURVE_DEFAULT_MU)?;
    let window = Window::new(
        (kv.get_or("tau_R_min", dt.0)?, kv.get_or("tau_R_max", dt.1)?),
        (kv.get_or("delta_R_min", dd.0)?, kv.get_or("delta_R_max", dd.1)?),
    );
    if !(window.tau_r.0 < window.tau_r.1 && window.delta_r.0 < window.delta_r.1) {
        return Err(CliError::Usage(format!("empty window {window:?}")));
    }
    let cfg = TraceConfig { columns: kv.get_or("columns", TraceConfig::default().columns)?, ..Default::default() };
    let sample = trace_curve(id, tau_l, mu, window, &cfg)?;

    let mut resolved = KvConfig::default();
    resolved.set("curve", id);
    resolved.set("tau_L", tau_l);
    resolved.set("mu", mu);
    resolved.set("tau_R_min", window.tau_r.0);
    resolved.set("tau_R_max", window.tau_r.1);
    resolved.set("delta_R_min", window.delta_r.0);
    resolved.set("delta_R_max", window.delta_r.1);
    resolved.set("columns", cfg.columns);

    let mut out = Outputs::new(&common.out)?;
    let path = out.write(&curve_file(id), sample.to_csv())?;
    println!("{id}: {} points in {} branches -> {}", sample.points().count(), sample.branches.len(), path.display());
    out.finish("curve", &resolved, None)?;
    Ok(())
}

const ORBIT_BOUND: f64 = 1e5;

pub fn orbit(common: &Common, a: OrbitArgs, seed: u64) -> Result<(), CliError> {
    let mut kv = point_config(common, &a.point, &["x0", "y0", "n", "cycles"])?;
    put(&mut kv, "x0", a.x0);
    put(&mut kv, "y0", a.y0);
    put(&mut kv, "n", a.n);
    put(&mut kv, "cycles", a.cycles.as_deref());
    let params = point_params(&kv)?;
    let cfg = classifier(&kv, seed, 1000)?;
    let n: usize = kv.get_or("n", 1000)?;
    let p0 = match (kv.get::<f64>("x0")?, kv.get::<f64>("y0")?) {
        (Some(x), Some(y)) => PlanePoint::new(x, y),
        (None, None) => random_initial_point(&params, &cfg, &mut substream(cfg.seed, 0, 0)),
        _ => return Err(CliError::Usage("give both --x0 and --y0, or neither".into())),
    };
    let words = kv
        .raw("cycles")
        .unwrap_or("")
        .split(',')
        .map(str::trim)
        .filter(|w| !w.is_empty())
        .map(|w| w.parse::<Word>().map_err(|e| CliError::Usage(format!("cycle {w:?}: {e}"))))
        .collect::<Result<Vec<_>, _>>()?;

    let pts = iterate(p0, &params, cfg.burn_in + n, ORBIT_BOUND)?;
    let mut text = String::from("i,x,y\n");
    for (i, p) in pts.iter().enumerate().skip(cfg.burn_in) {
        let _ = writeln!(text, "{i},{},{}", p.x, p.y);
    }
    let mut out = Outputs::new(&common.out)?;
    out.write("orbit.csv", text)?;
    if !words.is_empty() {
        let mut text = String::from("word,index,x,y,admissible,stable,lambda1_re,lambda1_im,lambda2_re,lambda2_im\n");
        for w in &words {
            let c = solve_cycle(w, &params)?;
            let m = c.multipliers();
            for (i, p) in c.points.iter().enumerate() {
                let _ = writeln!(
                    text,
                    "{w},{i},{},{},{},{},{},{},{},{}",
                    p.x,
                    p.y,
                    c.admissible,
                    c.is_stable(),
                    m.lambda1.re,
                    m.lambda1.im,
                    m.lambda2.re,
                    m.lambda2.im
                );
            }
        }
        out.write("cycles.csv", text)?;
    }
    kv.set("burn_in", cfg.burn_in);
    kv.set("seed", cfg.seed);
    out.finish("orbit", &kv, Some(cfg.seed))?;
    Ok(())
}

pub fn basin(common: &Common, a: BasinArgs, seed: u64) -> Result<(), CliError> {
    let mut kv = point_config(common, &a.point, &["x_min", "x_max", "y_min", "y_max", "nx", "ny"])?;
    put_range(&mut kv, "x_min", "x_max", a.x);
    put_range(&mut kv, "y_min", "y_max", a.y);
    if let Some((nx, ny)) = a.res {
        kv.set("nx", nx);
        kv.set("ny", ny);
    }
    require(&kv, &["x_min", "x_max", "y_min", "y_max"], "--x=lo:hi and --y=lo:hi")?;
    let params = point_params(&kv)?;
    let cfg = classifier(&kv, seed, 2000)?;
    let region = Region {
        x: (kv.get_or("x_min", 0.0)?, kv.get_or("x_max", 0.0)?),
        y: (kv.get_or("y_min", 0.0)?, kv.get_or("y_max", 0.0)?),
        nx: kv.get_or("nx", 200)?,
        ny: kv.get_or("ny", 200)?,
    };
    if region.nx < 2 || region.ny < 2 {
        return Err(CliError::Usage("basin needs at least 2x2 cells".into()));
    }
    let b = basin_raster(&params, &cfg, region);
    let mut text = String::from("ix,iy,x,y,label\n");
    for iy in 0..region.ny {
        for ix in 0..region.nx {
            let p = region.point(ix, iy);
            let label = match b.labels[iy * region.nx + ix] {
                BasinLabel::Diverging => -1,
                BasinLabel::Attractor(k) => k as i64,
            };
            let _ = writeln!(text, "{ix},{iy},{},{},{label}", p.x, p.y);
        }
    }
    let mut atts = String::from("index,class,period,x,y\n");
    for (k, at) in b.attractors.iter().enumerate() {
        for p in &at.points {
            let _ = writeln!(atts, "{k},{},{},{},{}", class_name(at.class), at.class.period(), p.x, p.y);
        }
    }
    let mut out = Outputs::new(&common.out)?;
    out.write("basin.csv", text)?;
    out.write("attractors.csv", atts)?;
    println!("{} attractors", b.attractors.len());
    kv.set("burn_in", cfg.burn_in);
    kv.set("seed", cfg.seed);
    out.finish("basin", &kv, Some(cfg.seed))?;
    Ok(())
}
