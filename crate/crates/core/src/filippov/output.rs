//! CSV writers for trajectories, bifurcation diagrams and parameter loci.

use super::{BifColumn, GrazeExtraction, Mode, Trajectory};
use std::fmt::Write as _;

pub const TRAJECTORY_HEADER: &str = "t,u,v,mode";
pub const DIAGRAM_HEADER: &str = "nu,time_mod";
pub const LOCUS_HEADER: &str = "F,nu_graz,tau_L,tau_R,delta_R,det_L";
pub const LINEAR_HEADER: &str = "alpha,alpha1,nu,tau_L,tau_R,delta_R";

pub fn trajectory_csv(tr: &Trajectory) -> String {
    let mut out = format!("{TRAJECTORY_HEADER}\n");
    for s in &tr.samples {
        let mode = match s.mode {
            Mode::Slipping => "slip",
            Mode::Sticking => "stick",
        };
        let _ = writeln!(out, "{},{},{},{mode}", s.t, s.u, s.v);
    }
    out
}

/// Diverged columns are left out; their `nu` values are returned.
pub fn diagram_csv(cols: &[BifColumn]) -> (String, Vec<f64>) {
    let mut out = format!("{DIAGRAM_HEADER}\n");
    let mut bad = Vec::new();
    for c in cols {
        if c.diverged {
            bad.push(c.nu);
            continue;
        }
        for t in &c.times {
            let _ = writeln!(out, "{},{t}", c.nu);
        }
    }
    (out, bad)
}

pub fn locus_csv(rows: &[GrazeExtraction]) -> String {
    let mut out = format!("{LOCUS_HEADER}\n");
    for e in rows {
        let p = e.grazing.params;
        let _ = writeln!(out, "{},{},{},{},{},{}", p.f, p.nu, e.tau_l, e.tau_r, e.delta_r, e.det_left());
    }
    out
}

/// Rows `(alpha, alpha1, nu, tau_L, tau_R, delta_R)`.
pub fn linear_csv(rows: &[[f64; 6]]) -> String {
    let mut out = format!("{LINEAR_HEADER}\n");
    for r in rows {
        let _ = writeln!(out, "{},{},{},{},{},{}", r[0], r[1], r[2], r[3], r[4], r[5]);
    }
    out
}
