//! Flag value grammars: ranges `a:b`, windows `a:b,c:d`, resolutions `NxM`.

use bcnf::config::KvConfig;
use std::fmt::Display;

pub fn range(s: &str) -> Result<(f64, f64), String> {
    let (a, b) = s.split_once(':').ok_or_else(|| format!("expected `lo:hi`, got {s:?}"))?;
    let num = |x: &str| x.trim().parse::<f64>().map_err(|_| format!("bad number {x:?} in {s:?}"));
    let (a, b) = (num(a)?, num(b)?);
    if !(a.is_finite() && b.is_finite() && a <= b) {
        return Err(format!("range {s:?} must have finite lo <= hi"));
    }
    Ok((a, b))
}

/// A single value `x` or a range `lo:hi`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ValueOrRange {
    Value(f64),
    Range(f64, f64),
}

pub fn value_or_range(s: &str) -> Result<ValueOrRange, String> {
    if s.contains(':') {
        let (a, b) = range(s)?;
        Ok(ValueOrRange::Range(a, b))
    } else {
        s.trim().parse().map(ValueOrRange::Value).map_err(|_| format!("bad number {s:?}"))
    }
}

/// `tau_R range, delta_R range`.
pub fn window(s: &str) -> Result<((f64, f64), (f64, f64)), String> {
    let (a, b) = s.split_once(',').ok_or_else(|| format!("expected `t0:t1,d0:d1`, got {s:?}"))?;
    Ok((range(a)?, range(b)?))
}

pub fn resolution(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s.split_once(['x', 'X']).ok_or_else(|| format!("expected `NXxNY`, got {s:?}"))?;
    let num = |x: &str| x.trim().parse::<usize>().map_err(|_| format!("bad count {x:?} in {s:?}"));
    Ok((num(a)?, num(b)?))
}

/// Copies a flag into the config when it was given.
pub fn put(kv: &mut KvConfig, key: &str, value: Option<impl Display>) {
    if let Some(v) = value {
        kv.set(key, v);
    }
}

pub fn put_range(kv: &mut KvConfig, lo: &str, hi: &str, value: Option<(f64, f64)>) {
    if let Some((a, b)) = value {
        kv.set(lo, a);
        kv.set(hi, b);
    }
}
