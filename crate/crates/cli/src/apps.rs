//! The friction oscillator and influenza subcommands.

use crate::error::CliError;
use crate::output::{load_config, Outputs};
use crate::parse::{put, put_range, ValueOrRange};
use crate::{Common, FluArgs, FrictionArgs, FrictionMode};
use bcnf::config::KvConfig;
use bcnf::filippov::linear::angle_and_growth;
use bcnf::filippov::output::{diagram_csv, linear_csv, locus_csv, trajectory_csv};
use bcnf::filippov::{
    extract_normal_form, find_grazing_nu, grazing_locus, integrate, linear_osc_from_angle, linear_osc_params,
    ode_bif_diagram, FlowOptions, FrictionParams, OscState, FRICTION_KEYS,
};
use bcnf::flu::{flu_bif_diagram, flu_csv, stable_window, FluParams, FLU_KEYS, FLU_RECORD, FLU_TRANSIENT};

const FRICTION_EXTRA: &[&str] = &[
    "mode", "nu_min", "nu_max", "F_min", "F_max", "steps", "transient", "record", "u0", "v0", "t0", "t_end", "beta",
    "alpha_min", "alpha_max", "rtol",
];

/// Mode defaults: grazing bracket, locus and diagram ranges, linear curve.
const GRAZE_BRACKET: (f64, f64) = (1.70, 1.71);
const LOCUS_F: (f64, f64) = (0.1, 0.108);
const DIAGRAM_NU: (f64, f64) = (1.69, 1.73);
const LINEAR_ALPHA: (f64, f64) = (0.7, 2.4);

fn grid(r: (f64, f64), n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![r.0],
        _ => (0..n).map(|i| r.0 + (r.1 - r.0) * i as f64 / (n - 1) as f64).collect(),
    }
}

/// Records resolved model parameters, defaults included, for the manifest.
fn resolve(kv: &mut KvConfig, model: &KvConfig) {
    for (k, v) in model.iter() {
        kv.set(k, v);
    }
}

fn range_of(kv: &KvConfig, lo: &str, hi: &str, default: (f64, f64)) -> Result<(f64, f64), CliError> {
    let r = (kv.get_or(lo, default.0)?, kv.get_or(hi, default.1)?);
    if !(r.0 <= r.1) {
        return Err(CliError::Usage(format!("{lo} = {} exceeds {hi} = {}", r.0, r.1)));
    }
    Ok(r)
}

pub fn friction(common: &Common, a: FrictionArgs) -> Result<(), CliError> {
    let mut kv = load_config(common.config.as_deref())?;
    let known: Vec<&str> = FRICTION_KEYS.iter().chain(FRICTION_EXTRA).copied().collect();
    kv.check_known(&known)?;
    put(&mut kv, "mode", a.mode.map(FrictionMode::name));
    put(&mut kv, "alpha0", a.alpha0);
    put(&mut kv, "alpha1", a.alpha1);
    put(&mut kv, "alpha2", a.alpha2);
    put(&mut kv, "F", a.f);
    put(&mut kv, "nu", a.nu);
    put_range(&mut kv, "nu_min", "nu_max", a.nu_range);
    put_range(&mut kv, "F_min", "F_max", a.f_range);
    put(&mut kv, "steps", a.steps);
    put(&mut kv, "transient", a.transient);
    put(&mut kv, "record", a.record);
    put(&mut kv, "u0", a.u0);
    put(&mut kv, "v0", a.v0);
    put(&mut kv, "t0", a.t0);
    put(&mut kv, "t_end", a.t_end);
    put(&mut kv, "beta", a.beta);
    put_range(&mut kv, "alpha_min", "alpha_max", a.alpha_range);
    put(&mut kv, "rtol", a.rtol);

    let mode = match kv.raw("mode").unwrap_or("extract") {
        "extract" => FrictionMode::Extract,
        "locus" => FrictionMode::Locus,
        "diagram" => FrictionMode::Diagram,
        "trajectory" => FrictionMode::Trajectory,
        "linear" => FrictionMode::Linear,
        other => return Err(CliError::Config(format!("unknown mode {other:?}"))),
    };
    kv.set("mode", mode.name());
    let p = FrictionParams::from_kv(&kv, &FrictionParams::default())?;
    resolve(&mut kv, &p.to_kv());
    let rtol: f64 = kv.get_or("rtol", 1e-12)?;
    let precise = FlowOptions::precise().with_rtol(rtol);
    let mut out = Outputs::new(&common.out)?;

    match mode {
        FrictionMode::Extract => {
            let g = find_grazing_nu(&p, range_of(&kv, "nu_min", "nu_max", GRAZE_BRACKET)?, &precise)?;
            let e = extract_normal_form(&g, &precise)?;
            println!(
                "nu_graz {} tau_L {} tau_R {} delta_R {} det_L {}",
                g.params.nu,
                e.tau_l,
                e.tau_r,
                e.delta_r,
                e.det_left()
            );
            out.write("extract.csv", locus_csv(&[e]))?;
        }
        FrictionMode::Locus => {
            let fs = grid(range_of(&kv, "F_min", "F_max", LOCUS_F)?, kv.get_or("steps", 17)?);
            let bracket = range_of(&kv, "nu_min", "nu_max", GRAZE_BRACKET)?;
            let (rows, err) = grazing_locus(&p, &fs, bracket, &precise);
            out.write("locus.csv", locus_csv(&rows))?;
            if let Some(e) = err {
                let at = fs.get(rows.len()).copied().unwrap_or(f64::NAN);
                return Err(CliError::Runtime(format!("locus stopped at F = {at} after {} points: {e}", rows.len())));
            }
            println!("{} locus points", rows.len());
        }
        FrictionMode::Diagram => {
            let nus = grid(range_of(&kv, "nu_min", "nu_max", DIAGRAM_NU)?, kv.get_or("steps", 81)?);
            let transient = kv.get_or("transient", bcnf::filippov::graze::BIF_TRANSIENT_PERIODS)?;
            let record = kv.get_or("record", bcnf::filippov::graze::BIF_RECORD)?;
            let cols = ode_bif_diagram(&p, &nus, OscState::slipping(0.0, 0.0, 0.0), &FlowOptions::default(), transient, record);
            let (text, diverged) = diagram_csv(&cols);
            out.write("diagram.csv", text)?;
            if !diverged.is_empty() {
                eprintln!("warning: {} columns diverged and were left out: {diverged:?}", diverged.len());
            }
            println!("{} columns", cols.len() - diverged.len());
        }
        FrictionMode::Trajectory => {
            let start = OscState::slipping(kv.get_or("u0", 0.0)?, kv.get_or("v0", 0.0)?, kv.get_or("t0", 0.0)?);
            let t_end: f64 = kv.get_or("t_end", 100.0)?;
            let tr = integrate(start, &p, &FlowOptions::default(), t_end - start.t)?;
            out.write("trajectory.csv", trajectory_csv(&tr))?;
            println!("{} samples, {} events", tr.samples.len(), tr.events.len());
        }
        FrictionMode::Linear => {
            let beta: f64 = kv.get_or("beta", 0.25)?;
            let alphas = grid(range_of(&kv, "alpha_min", "alpha_max", LINEAR_ALPHA)?, kv.get_or("steps", 69)?);
            let rows = alphas
                .iter()
                .map(|&alpha| {
                    let (a1, nu) = linear_osc_from_angle(alpha, beta)?;
                    angle_and_growth(a1, nu)?;
                    let q = linear_osc_params(a1, nu, 1.0)?;
                    Ok([alpha, a1, nu, q.tau_l, q.tau_r, q.delta_r])
                })
                .collect::<Result<Vec<_>, bcnf::filippov::FilippovError>>()?;
            out.write("linear.csv", linear_csv(&rows))?;
            println!("{} points at beta = {beta}", rows.len());
        }
    }
    out.finish("friction", &kv, None)?;
    Ok(())
}

pub fn flu(common: &Common, a: FluArgs) -> Result<(), CliError> {
    let mut kv = load_config(common.config.as_deref())?;
    let known: Vec<&str> = FLU_KEYS.iter().chain(&["k_min", "k_max", "steps", "transient", "record"]).copied().collect();
    kv.check_known(&known)?;
    match a.k {
        Some(ValueOrRange::Value(k)) => kv.set("k", k),
        Some(ValueOrRange::Range(lo, hi)) => put_range(&mut kv, "k_min", "k_max", Some((lo, hi))),
        None => {}
    }
    put(&mut kv, "c", a.c);
    put(&mut kv, "R0", a.r0);
    put(&mut kv, "steps", a.steps);
    put(&mut kv, "transient", a.transient);
    put(&mut kv, "record", a.record);

    let p = FluParams::from_kv(&kv, &FluParams::default())?;
    resolve(&mut kv, &p.to_kv());
    let ks = match (kv.get::<f64>("k_min")?, kv.get::<f64>("k_max")?) {
        (Some(lo), Some(hi)) => grid(range_of(&kv, "k_min", "k_max", (lo, hi))?, kv.get_or("steps", 401)?),
        (None, None) => vec![p.k],
        _ => return Err(CliError::Usage("set both k_min and k_max, or neither".into())),
    };
    let transient = kv.get_or("transient", FLU_TRANSIENT)?;
    let record = kv.get_or("record", FLU_RECORD)?;
    let cols = flu_bif_diagram(&p, &ks, transient, record)?;

    let mut out = Outputs::new(&common.out)?;
    out.write("flu.csv", flu_csv(&cols))?;
    let (k1, k2) = stable_window(p.c);
    println!("{} columns; normal-form fixed-point window k in ({k1}, {k2})", cols.len());
    out.finish("flu", &kv, None)?;
    Ok(())
}
