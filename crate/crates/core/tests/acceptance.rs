//! Acceptance gate: twelve numbered criteria, one PASS/FAIL line each.
//!
//! Runs as a plain binary (no libtest harness) so every line is printed
//! whether or not earlier criteria fail. Pass criterion numbers as arguments
//! to run a subset: `cargo test --test acceptance -- 5 11`.

use bcnf::classify::*;
use bcnf::curves::formulas::{superstable_residual, theta_iterate_check};
use bcnf::curves::formulas::kappa_residual;
use bcnf::curves::*;
use bcnf::filippov::linear::angle_and_growth;
use bcnf::filippov::*;
use bcnf::flu::*;
use bcnf::maps::*;
use bcnf::sweep::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use std::process::ExitCode;
use std::time::Instant;

#[derive(Default)]
struct Report {
    facts: Vec<String>,
    failures: Vec<String>,
}

impl Report {
    fn note(&mut self, s: impl Into<String>) {
        self.facts.push(s.into());
    }

    fn check(&mut self, ok: bool, what: impl Into<String>) {
        let what = what.into();
        if ok {
            self.facts.push(what);
        } else {
            self.failures.push(what);
        }
    }
}

fn lin(r: (f64, f64), n: usize, i: usize) -> f64 {
    r.0 + (r.1 - r.0) * i as f64 / (n - 1) as f64
}

fn params(tl: f64, tr: f64, dr: f64, mu: f64) -> NormalFormParams {
    NormalFormParams::new(tl, tr, dr, mu).unwrap()
}

/// 1. Every explicit curve against bisection on its residual.
fn closed_forms(r: &mut Report) {
    // (name, id, tau_L, mu, tau_R range). pd5 and bcb5 are the period-5
    // flip and border-collision lines of L^4 R.
    let cases = [
        ("alpha2", CurveId::Alpha(Regime::LR, 2), -1.2, -1.0, (0.2, 3.0)),
        ("beta2", CurveId::Beta(Regime::LR, 2), -1.2, -1.0, (0.2, 3.0)),
        ("gamma2", CurveId::Gamma(Regime::LR, 2), -1.2, -1.0, (0.2, 3.0)),
        ("gamma3", CurveId::Gamma(Regime::LR, 3), -1.2, -1.0, (0.2, 3.0)),
        ("eta3", CurveId::Eta(3), -1.2, -1.0, (0.2, 3.0)),
        ("alpha3A", CurveId::Alpha(Regime::L2R, 3), -1.2, 1.0, (-2.0, 1.05)),
        ("gamma3A", CurveId::Gamma(Regime::L2R, 3), -1.2, 1.0, (-2.0, 1.05)),
        ("gamma3pA", CurveId::GammaPrime(Regime::L2R, 3), -1.2, 1.0, (-2.0, 1.05)),
        ("pd5", CurveId::Beta(Regime::LpR, 5), 0.4, 1.0, (-2.0, 2.0)),
        ("bcb5", CurveId::GammaPrime(Regime::LpR, 5), 0.4, 1.0, (-2.0, 2.0)),
        ("zetaMinus1", CurveId::Xi(1), -1.2, -1.0, (0.2, 3.0)),
    ];
    for (name, id, tl, mu, tr) in cases {
        let f = residual(id, tl, mu).unwrap();
        let mut worst = 0.0f64;
        let mut missing = 0;
        for i in 0..100 {
            let t = lin(tr, 100, i);
            let want = explicit_line(id, tl, t, mu).unwrap();
            // Bracket a unit interval around the formula value and bisect
            // every sign change of the residual found there.
            let roots = roots_on_line(|d| f(t, d), (want - 0.5, want + 0.5), 2000, 1e-14);
            match roots.iter().map(|x| (x - want).abs()).reduce(f64::min) {
                Some(e) => worst = worst.max(e),
                None => missing += 1,
            }
        }
        r.check(missing == 0 && worst < 1e-9, format!("{name}: max |d delta_R| {worst:.1e}, {missing} samples without a root"));
    }
}

/// 2. Closed-form powers of the right Jacobian.
fn matrix_powers(r: &mut Report) {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst = 0.0f64;
    let mut repeated = 0;
    for draw in 0..1000 {
        let t: f64 = rng.gen_range(-2.0..2.0);
        let d = if draw % 5 == 0 {
            repeated += 1;
            t * t / 4.0
        } else {
            rng.gen_range(-1.5..1.5)
        };
        let p = params(0.0, t, d, 1.0);
        let a = jacobian(Side::R, &p);
        let mut direct = Matrix2::IDENTITY;
        for n in 0..=20 {
            let m = power_ar(n, &p);
            let e = [m.a - direct.a, m.b - direct.b, m.c - direct.c, m.d - direct.d]
                .iter()
                .fold(0.0f64, |acc, x| acc.max(x.abs()));
            // Absolute below unit entries, relative above.
            worst = worst.max(e / direct.max_abs().max(1.0));
            direct = a * direct;
        }
    }
    r.check(worst < 1e-12, format!("max scaled entry error {worst:.1e} over 1000 draws ({repeated} with delta_R = tau_R^2/4)"));
}

/// 3. kappa_2 factorises and is traced as the line tau_R = -1.
fn kappa2(r: &mut Report) {
    let mut worst = 0.0f64;
    for i in 0..100 {
        for j in 0..100 {
            let (t, d) = (lin((-3.0, 3.0), 100, i), lin((-3.0, 3.0), 100, j));
            worst = worst.max((kappa_residual(2, t, d) - (1.0 + t) * (1.0 - t + d)).abs());
        }
    }
    r.check(worst < 1e-12, format!("factorisation error {worst:.1e} on 100x100"));
    let s = trace_curve(CurveId::Kappa(2), 1.2, 1.0, Window::new((-3.0, 3.0), (-3.0, 3.0)), &TraceConfig::default()).unwrap();
    let pts: Vec<_> = s.points().copied().collect();
    let off = pts.iter().map(|p| (p.tau_r + 1.0).abs()).fold(0.0, f64::max);
    let span = pts.iter().map(|p| p.delta_r).fold(f64::NEG_INFINITY, f64::max)
        - pts.iter().map(|p| p.delta_r).fold(f64::INFINITY, f64::min);
    r.check(!pts.is_empty() && off < 1e-10 && span > 5.9, format!("traced kappa2: {} points, max |tau_R + 1| {off:.1e}, delta_R span {span:.3}", pts.len()));
}

fn every_nth(pts: Vec<ParamPoint>, n: usize) -> Vec<ParamPoint> {
    if pts.len() < n {
        return pts;
    }
    (0..n).map(|i| pts[i * (pts.len() - 1) / (n - 1)]).collect()
}

/// 4. Hit conditions on traced shrinking-point curves.
fn shrinking_points(r: &mut Report) {
    let w = Window::new((-2.0, 2.0), (-1.0, 2.0));
    let cfg = TraceConfig { tol: 1e-15, ..TraceConfig::default() };
    // All three theta curves pass through (0, 0), where A_R is nilpotent and
    // the hit point x~ runs off to infinity, and through (-1, 1), where
    // f_R^2(x, 0) lies on x = 0 for every x. Samples keep 0.05 away.
    let regular = |p: &ParamPoint| p.tau_r.hypot(p.delta_r) > 0.05 && (p.tau_r + 1.0).hypot(p.delta_r - 1.0) > 0.05;
    for j in 1..=3 {
        let s = trace_curve(CurveId::Theta(j), 1.2, 1.0, w, &cfg).unwrap();
        let all: Vec<ParamPoint> = s.points().copied().collect();
        let kept: Vec<ParamPoint> = all.iter().copied().filter(regular).collect();
        r.note(format!("theta{j}: {} of {} traced points near the singular points skipped", all.len() - kept.len(), all.len()));
        let pts = every_nth(kept, 50);
        let worst = pts
            .iter()
            .map(|p| match theta_iterate_check(j, p.tau_r, p.delta_r) {
                Some((a, b)) => a.abs().max(b.abs()),
                None => f64::INFINITY,
            })
            .fold(0.0, f64::max);
        r.check(pts.len() == 50 && worst < 1e-9, format!("theta{j}: {} points, max |x| {worst:.1e}", pts.len()));
    }
    for n in 3..=5 {
        let s = trace_curve(CurveId::Kappa(n), 1.2, 1.0, w, &cfg).unwrap();
        let pts = every_nth(s.points().copied().collect(), 50);
        let worst = pts
            .iter()
            .map(|p| {
                let pr = params(1.2, p.tau_r, p.delta_r, 1.0);
                (0..n).fold(PlanePoint::ORIGIN, |z, _| apply_piece(Side::R, z, &pr)).x.abs()
            })
            .fold(0.0, f64::max);
        r.check(pts.len() == 50 && worst < 1e-9, format!("kappa{n}: {} points, max |f_R^{n}(0,0).x| {worst:.1e}", pts.len()));
    }
}

/// Classes of the non-diverging runs over seeds `0..n`, plus how many diverged.
fn classes_over_seeds(p: &NormalFormParams, n: u64) -> (Vec<(u64, AttractorClass)>, usize) {
    let runs: Vec<_> = (0..n)
        .into_par_iter()
        .map(|seed| (seed, classify(p, &ClassifierConfig { seed, ..Default::default() }).class))
        .collect();
    let diverged = runs.iter().filter(|(_, c)| *c == AttractorClass::Diverging).count();
    (runs.into_iter().filter(|(_, c)| *c != AttractorClass::Diverging).collect(), diverged)
}

/// Chaotic on every bounded run, with `pieces` components from the first.
fn chaotic_with_pieces(r: &mut Report, label: &str, p: &NormalFormParams, pieces: Option<usize>) {
    let (runs, diverged) = classes_over_seeds(p, 20);
    let chaotic = !runs.is_empty() && runs.iter().all(|(_, c)| *c == AttractorClass::Chaotic);
    let mut msg = format!("{label}: {} of 20 seeds chaotic, {diverged} escape", runs.len());
    let mut ok = chaotic;
    if let (Some(want), Some(&(seed, _))) = (pieces, runs.first()) {
        let got = count_components(p, &ClassifierConfig { seed, ..Default::default() }, &ComponentConfig::default());
        msg += &format!(", components {got:?} (want {want})");
        ok &= matches!(got, Ok(c) if c.count == want);
    }
    r.check(ok, msg);
}

/// 5. Reference points at tau_L = -1.2, mu = -1.
fn negative_mu_points(r: &mut Report) {
    let at = |t, d| params(-1.2, t, d, -1.0);
    chaotic_with_pieces(r, "a (1.2, 5.5)", &at(1.2, 5.5), None);
    // Part of the basin at b escapes to infinity; the bounded runs all
    // land on the same chaotic attractor.
    chaotic_with_pieces(r, "b (1.5, 3)", &at(1.5, 3.0), Some(1));
    let (runs, diverged) = classes_over_seeds(&at(1.0, 3.0), 20);
    let p3 = runs.iter().filter(|(_, c)| *c == AttractorClass::Periodic(3)).count();
    let ch = runs.iter().filter(|(_, c)| *c == AttractorClass::Chaotic).count();
    r.check(
        p3 > 0 && ch > 0 && p3 + ch == 20,
        format!("c (1, 3): {p3} Periodic(3), {ch} Chaotic, {} other of 20 ({diverged} escape)", 20 - p3 - ch),
    );
    chaotic_with_pieces(r, "d (1.6, 0.5)", &at(1.6, 0.5), Some(2));
    let eta = explicit_line(CurveId::Eta(3), -1.2, 1.0, -1.0).unwrap();
    r.check((eta - 4.8).abs() < 1e-12, format!("eta3 at tau_R = 1: {eta}"));
}

/// 6. Component counts at tau_L = 1.2, mu = 1, and where they change.
fn component_doubling(r: &mut Report) {
    let cfg = ClassifierConfig::default();
    for (label, t, d, want) in [("a", -2.0, 2.5, 1), ("b", 1.1, 2.2, 2), ("d", -1.15, -0.3, 4)] {
        let got = count_components(&params(1.2, t, d, 1.0), &cfg, &ComponentConfig::default());
        r.check(matches!(got, Ok(c) if c.count == want), format!("{label} ({t}, {d}): {got:?}, want {want}"));
    }

    // Scan tau_R = -1.3 across its chaotic band on a 1e-2 grid. A finer
    // gap threshold keeps two pieces apart until they actually touch.
    let tr = -1.3;
    let fine = ComponentConfig { samples: 400_000, gap_fraction: 0.005, grid: 2048 };
    let ds: Vec<f64> = (0..=95).map(|i| -0.6 + 0.01 * f64::from(i)).collect();
    let scan: Vec<Option<usize>> = ds
        .par_iter()
        .map(|&d| {
            let p = params(1.2, tr, d, 1.0);
            match classify(&p, &cfg).class {
                AttractorClass::Chaotic => count_components(&p, &cfg, &fine).ok().map(|c| c.count),
                _ => None,
            }
        })
        .collect();
    let band: Vec<f64> = ds.iter().zip(&scan).filter(|(_, c)| c.is_some()).map(|(d, _)| *d).collect();
    let band = (band[0], band[band.len() - 1]);
    // Changes between consecutive reliable counts, located at the midpoint.
    let known: Vec<(f64, usize)> = ds.iter().zip(&scan).filter_map(|(d, c)| c.map(|c| (*d, c))).collect();
    let changes: Vec<(f64, usize, usize)> =
        known.windows(2).filter(|w| w[0].1 != w[1].1).map(|w| (0.5 * (w[0].0 + w[1].0), w[0].1, w[1].1)).collect();
    let mut crossings = Vec::new();
    for k in 1..=2usize {
        let f = residual(CurveId::Xi(k), 1.2, 1.0).unwrap();
        for d in roots_on_line(|d| f(tr, d), band, 4000, 1e-13) {
            crossings.push((d, k));
        }
    }
    r.note(format!("chaotic band delta_R in [{:.2}, {:.2}]; count changes {changes:?}; xi crossings {crossings:?}", band.0, band.1));
    // Each change 2^{k-1} <-> 2^k sits at a xi_k crossing, and each crossing
    // inside the band carries such a change.
    for &(d, a, b) in &changes {
        let k = a.max(b).trailing_zeros() as usize;
        let pow2 = a.min(b) * 2 == a.max(b) && a.max(b).is_power_of_two();
        let near = crossings.iter().any(|&(x, kk)| kk == k && (x - d).abs() <= 1e-2);
        r.check(pow2 && near, format!("count {a} -> {b} at delta_R ~ {d:.3} matches a xi{k} crossing"));
    }
    for &(x, k) in &crossings {
        let hit = changes.iter().any(|&(d, a, b)| a.max(b).trailing_zeros() as usize == k && (x - d).abs() <= 1e-2);
        r.check(hit, format!("xi{k} crossing at delta_R = {x:.4} carries a count change"));
    }
    r.check(!changes.is_empty(), "at least one count change along tau_R = -1.3");
}

/// 7. Superstable LR^4 curve through (1.2, -1.7).
fn superstable(r: &mut Report) {
    let (tl, tr) = (1.2, -1.7);
    let roots = roots_on_line(|d| superstable_residual(tl, tr, d), (0.0, 3.0), 6000, 1e-15);
    let Some(&root) = roots.iter().min_by(|a, b| (*a - 1.2245).abs().total_cmp(&(*b - 1.2245).abs())) else {
        r.check(false, "no root on (0, 3)");
        return;
    };
    let word: Word = "LRRRR".parse().unwrap();
    let tr_m = cycle_matrix(&word, &params(tl, tr, root, 1.0)).trace();
    r.check((root - 1.2245).abs() < 5e-4, format!("root delta_R = {root:.7} (roots on (0, 3): {roots:?})"));
    r.check(tr_m.abs() < 1e-9, format!("trace(A_L A_R^4) = {tr_m:.1e}"));
}

/// 8. Grazing and extraction for the friction oscillator at F = 0.1.
fn friction(r: &mut Report) {
    let p = FrictionParams { f: 0.1, ..FrictionParams::default() };
    let opts = FlowOptions::precise().with_rtol(1e-12);
    let g = match find_grazing_nu(&p, (1.70, 1.71), &opts) {
        Ok(g) => g,
        Err(e) => return r.check(false, format!("grazing: {e}")),
    };
    r.check((g.params.nu - 1.7078).abs() < 1e-3, format!("nu_graz = {:.8}", g.params.nu));
    let e = match extract_normal_form(&g, &opts) {
        Ok(e) => e,
        Err(e) => return r.check(false, format!("extraction: {e}")),
    };
    r.check((e.tau_l + 1.653).abs() < 5e-3, format!("tau_L = {:.6}", e.tau_l));
    r.check((e.tau_r - 0.848).abs() < 5e-3, format!("tau_R = {:.6}", e.tau_r));
    r.check((e.delta_r - 0.006).abs() < 5e-3, format!("delta_R = {:.6}", e.delta_r));
    r.check(e.det_left().abs() < 1e-4, format!("|det| sliding side = {:.1e}", e.det_left().abs()));
}

/// 9. Finite-difference extraction on the linear oscillator vs closed forms.
fn linear_oscillator(r: &mut Report) {
    let beta = 0.25;
    for alpha in [0.8, 1.2, 1.6, 2.0, 2.4] {
        let (a1, nu) = linear_osc_from_angle(alpha, beta).unwrap();
        let fg = linear_grazing_forcing(a1, nu);
        let p = FrictionParams { alpha0: 1.5, alpha1: a1, alpha2: 0.0, f: fg, nu };
        let (spec, z) = linear_cycle_guess(&FrictionParams { f: 1.05 * fg, ..p });
        let opts = FlowOptions::precise();
        let e = find_grazing(&p, FreeParam::Forcing, (0.95 * fg, 1.05 * fg), spec, z, &opts)
            .and_then(|g| extract_normal_form(&g, &opts));
        let e = match e {
            Ok(e) => e,
            Err(err) => {
                r.check(false, format!("nu = {nu:.6}: {err}"));
                continue;
            }
        };
        let q = linear_osc_params(a1, nu, 1.0).unwrap();
        let (_, b) = angle_and_growth(a1, nu).unwrap();
        r.check((q.tau_r - 2.0 * q.tau_l).abs() < 1e-9 && (q.delta_r - 0.5f64.exp()).abs() < 1e-9 && (b - beta).abs() < 1e-12,
            format!("nu = {nu:.6}: closed forms tau_R = 2 tau_L, delta_R = {:.12}", q.delta_r));
        r.check((e.tau_r - q.tau_r).abs() < 1e-6, format!("nu = {nu:.6}: tau_R {:.9} vs {:.9}", e.tau_r, q.tau_r));
        r.check((e.delta_r - q.delta_r).abs() < 1e-6, format!("nu = {nu:.6}: delta_R {:.9} vs {:.9}", e.delta_r, q.delta_r));
        r.check((e.tau_l - q.tau_l).abs() < 1e-6, format!("nu = {nu:.6}: tau_L {:.9} vs {:.9}", e.tau_l, q.tau_l));
    }
}

/// 10. Fixed-point window of the flu normal form and the period doubling
/// of the full model.
fn flu_window(r: &mut Report) {
    let (c, h) = (0.9, 1e-3);
    let ks: Vec<f64> = (1..1000).map(|i| f64::from(i) * h).collect();
    let cfg = ClassifierConfig::default();
    let fixed: Vec<bool> = ks
        .par_iter()
        .map(|&k| classify(&flu_normal_form(k, c, 1.0), &cfg).class == AttractorClass::Periodic(1))
        .collect();
    let first = fixed.iter().position(|&b| b);
    if let Some(first) = first {
        let len = fixed[first..].iter().take_while(|&&b| b).count();
        let (lo, hi) = (ks[first], ks[first + len - 1]);
        r.check((lo - 0.382716).abs() <= h && (hi - 0.506173).abs() <= h, format!("Periodic(1) for k in [{lo:.3}, {hi:.3}]"));
    } else {
        r.check(false, "no Periodic(1) cell in the scan");
    }
    let p = FluParams { c, r0: 2.0, ..FluParams::default() };
    let ks: Vec<f64> = (0..=80).map(|i| 0.44 + h * f64::from(i)).collect();
    match flu_bif_diagram(&p, &ks, FLU_TRANSIENT, FLU_RECORD) {
        Ok(cols) => match cols.iter().find(|col| col.distinct(1e-6) > 1) {
            Some(col) => r.check((col.k - 0.48182).abs() < 5e-3, format!("diagram doubles at k = {:.3}", col.k)),
            None => r.check(false, "no doubling on k in [0.44, 0.52]"),
        },
        Err(e) => r.check(false, format!("diagram: {e}")),
    }
}

/// 11. Sweep rasters do not depend on the run or the worker count.
fn determinism(r: &mut Report) {
    let mut cfg = SweepConfig::new(-1.2, -1.0, Window::new((0.0, 2.0), (-1.0, 6.0)), 200, 200);
    cfg.classifier.burn_in = 5_000;
    cfg.classifier.lyapunov_len = 2_000;
    let bytes = |threads| {
        let raster = run_sweep_with_threads(&cfg, threads).unwrap();
        [RasterFormat::Csv, RasterFormat::Pgm, RasterFormat::Ppm].map(|f| encode_raster(&raster, f))
    };
    let one = bytes(1);
    let four = bytes(4);
    let again = bytes(4);
    let eight = bytes(8);
    r.check(one == four && four == again && again == eight, "csv/pgm/ppm identical for 1, 4, 4 again, 8 workers");
}

fn random_params(rng: &mut ChaCha8Rng, mu: f64) -> NormalFormParams {
    params(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0), rng.gen_range(-1.5..1.5), mu)
}

/// 12. Map invariants over seeded random draws.
fn properties(r: &mut Report) {
    let mut rng = ChaCha8Rng::seed_from_u64(12);

    let mut continuity = true;
    for _ in 0..1000 {
        let mu = rng.gen_range(-3.0..3.0);
        let p = random_params(&mut rng, mu);
        let z = PlanePoint::new(0.0, rng.gen_range(-10.0..10.0));
        continuity &= apply_piece(Side::L, z, &p) == apply_piece(Side::R, z, &p);
    }
    r.check(continuity, "continuity: both pieces agree exactly on x = 0 (1000 draws)");

    let mut homog = 0.0f64;
    for _ in 0..1000 {
        let mu = rng.gen_range(-3.0..3.0);
        let p = random_params(&mut rng, mu);
        let s: f64 = 10f64.powf(rng.gen_range(-2.0..2.0));
        let z = PlanePoint::new(rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0));
        let a = step(PlanePoint::new(s * z.x, s * z.y), &NormalFormParams { mu: s * mu, ..p });
        let b = step(z, &p);
        let scale = (s * b.norm()).max(1.0);
        homog = homog.max((a.x - s * b.x).abs().max((a.y - s * b.y).abs()) / scale);
    }
    r.check(homog < 1e-12, format!("mu-homogeneity: max scaled error {homog:.1e}"));

    let mut range_ok = true;
    for _ in 0..1000 {
        let mu = rng.gen_range(-3.0..3.0);
        let p = random_params(&mut rng, mu);
        let y = rng.gen_range(-5.0..5.0);
        let left = step(PlanePoint::new(-rng.gen_range(0.0..5.0), y), &p);
        range_ok &= left.y == 0.0;
        let pos = NormalFormParams { delta_r: p.delta_r.abs() + 1e-3, ..p };
        let right = step(PlanePoint::new(rng.gen_range(0.0..5.0), y), &pos);
        range_ok &= right.y <= 0.0;
    }
    r.check(range_ok, "image laws: left images on y = 0, right images in y <= 0 when delta_R > 0");

    // delta_R = 0 against the skew tent map, started on y = 0.
    let mut tent_worst = 0.0f64;
    let mut tent_runs = [0usize; 2];
    for (i, sign) in [1.0, -1.0].into_iter().enumerate() {
        while tent_runs[i] < 50 {
            let (tl, tr) = (rng.gen_range(-1.9..1.9), rng.gen_range(-1.9..1.9));
            let p = params(tl, tr, 0.0, sign * rng.gen_range(0.1..2.0));
            let (sl, sr, eta, flip) = skew_tent_reduction(&p);
            let x0 = rng.gen_range(-2.0..2.0);
            let mut s = if flip { -x0 } else { x0 };
            let mut z = PlanePoint::new(x0, 0.0);
            let mut err = 0.0f64;
            let mut bounded = true;
            for _ in 0..1000 {
                s = skew_tent_step(s, sl, sr, eta);
                z = step(z, &p);
                bounded &= s.abs() < 1e6;
                err = err.max(((if flip { -s } else { s }) - z.x).abs() / s.abs().max(1.0));
            }
            if bounded {
                tent_worst = tent_worst.max(err);
                tent_runs[i] += 1;
            }
        }
    }
    r.check(tent_worst < 1e-10, format!("skew tent at delta_R = 0: max error {tent_worst:.1e} over 1000 iterates, 50 bounded orbits per sign of mu"));

    let words: Vec<Word> = ["LR", "LRR", "LLR", "LRRR", "LLRR", "LLLR", "LRLRR"].iter().map(|w| w.parse().unwrap()).collect();
    let mut closure = 0.0f64;
    let mut solved = 0;
    for _ in 0..1000 {
        let mu = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
        let p = random_params(&mut rng, mu);
        let w = &words[rng.gen_range(0..words.len())];
        let Ok(sol) = solve_cycle(w, &p) else { continue };
        solved += 1;
        let n = sol.points.len();
        for (i, &side) in w.symbols().iter().enumerate() {
            let img = apply_piece(side, sol.points[i], &p);
            let next = sol.points[(i + 1) % n];
            closure = closure.max(img.dist(next) / next.norm().max(1.0));
        }
    }
    r.check(solved > 900 && closure < 1e-10, format!("cycle closure: max scaled error {closure:.1e} over {solved} solved cycles"));

    // Lyapunov exponent at delta_R = 0 against mean log|slope| of the tent.
    let n = 200_000;
    for (tl, tr, mu) in [(1.2, -1.8, 1.0), (-1.8, 1.2, -1.0), (1.5, -1.5, 0.5), (0.5, -1.9, 1.0)] {
        let p = params(tl, tr, 0.0, mu);
        let (sl, sr, eta, flip) = skew_tent_reduction(&p);
        let x0 = 0.123 * mu;
        let mut s = if flip { -x0 } else { x0 };
        for _ in 0..TANGENT_WARMUP {
            s = skew_tent_step(s, sl, sr, eta);
        }
        let mut sum = 0.0;
        for _ in 0..n {
            sum += if s <= 0.0 { sl.abs().ln() } else { sr.abs().ln() };
            s = skew_tent_step(s, sl, sr, eta);
        }
        let oracle = sum / n as f64;
        let got = lyapunov_max(&p, PlanePoint::new(x0, 0.0), n, 1e5).unwrap();
        r.check((got - oracle).abs() < 2e-3, format!("Lyapunov ({tl}, {tr}, mu {mu}): {got:.5} vs tent {oracle:.5}"));
    }
}

type Criterion = (u32, &'static str, fn(&mut Report));

const CRITERIA: [Criterion; 12] = [
    (1, "closed-form curves match residual bisection", closed_forms),
    (2, "closed-form matrix powers", matrix_powers),
    (3, "kappa2 factorisation and trace", kappa2),
    (4, "shrinking-point hit conditions", shrinking_points),
    (5, "attractors at tau_L = -1.2, mu = -1", negative_mu_points),
    (6, "component doubling at tau_L = 1.2, mu = 1", component_doubling),
    (7, "superstable LR^4 curve", superstable),
    (8, "friction oscillator grazing and extraction", friction),
    (9, "linear oscillator extraction vs closed forms", linear_oscillator),
    (10, "flu fixed-point window and period doubling", flu_window),
    (11, "sweep determinism across runs and workers", determinism),
    (12, "map property suites", properties),
];

fn main() -> ExitCode {
    // libtest flags such as --nocapture may be passed through; ignore them.
    let only: Vec<u32> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut failed = Vec::new();
    for (n, title, run) in CRITERIA {
        if !only.is_empty() && !only.contains(&n) {
            continue;
        }
        let t0 = Instant::now();
        let mut rep = Report::default();
        run(&mut rep);
        let secs = t0.elapsed().as_secs_f64();
        let status = if rep.failures.is_empty() { "PASS" } else { "FAIL" };
        println!("{status} criterion {n}: {title} ({secs:.1} s)");
        for f in &rep.failures {
            println!("    failed: {f}");
        }
        for f in &rep.facts {
            println!("    ok: {f}");
        }
        if !rep.failures.is_empty() {
            failed.push(n);
        }
    }
    if failed.is_empty() {
        println!("acceptance: all criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: failed criteria {failed:?}");
        ExitCode::FAILURE
    }
}
