//! CSV, PGM and PPM encodings of classification rasters.
//!
//! Grey levels (PGM): diverging 255, quasi-periodic or long period 128,
//! chaotic 64, period `p` at `250 - 3 min(p, 30)`.
//!
//! Colours (PPM): diverging white, chaotic orange `(255, 140, 0)`,
//! quasi-periodic yellow `(255, 230, 0)`, periods 1 to 30 on a ramp from
//! blue through purple to red (longer periods use the colour of 30).

use super::{ClassificationRaster, SweepConfig, SweepError};
use crate::classify::AttractorClass;
use crate::config::KvConfig;
use crate::curves::Window;
use std::fmt::Write as _;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RasterFormat {
    Csv,
    Pgm,
    Ppm,
}

impl FromStr for RasterFormat {
    type Err = SweepError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(RasterFormat::Csv),
            "pgm" => Ok(RasterFormat::Pgm),
            "ppm" => Ok(RasterFormat::Ppm),
            _ => Err(SweepError::Format(s.to_string())),
        }
    }
}

impl RasterFormat {
    pub fn extension(self) -> &'static str {
        match self {
            RasterFormat::Csv => "csv",
            RasterFormat::Pgm => "pgm",
            RasterFormat::Ppm => "ppm",
        }
    }
}

pub const CSV_HEADER: &str = "ix,iy,tau_R,delta_R,class_code,period";

pub fn grey_level(c: AttractorClass) -> u8 {
    match c {
        AttractorClass::Diverging => 255,
        AttractorClass::QuasiOrLongPeriod => 128,
        AttractorClass::Chaotic => 64,
        AttractorClass::Periodic(p) => (250 - 3 * p.clamp(1, 30)) as u8,
    }
}

pub fn palette(c: AttractorClass) -> [u8; 3] {
    match c {
        AttractorClass::Diverging => [255, 255, 255],
        AttractorClass::Chaotic => [255, 140, 0],
        AttractorClass::QuasiOrLongPeriod => [255, 230, 0],
        AttractorClass::Periodic(p) => {
            let t = f64::from(p.clamp(1, 30) - 1) / 29.0;
            hsv(220.0 + 140.0 * t, 0.85, 0.9 - 0.3 * t)
        }
    }
}

fn hsv(h: f64, s: f64, v: f64) -> [u8; 3] {
    let h = h.rem_euclid(360.0) / 60.0;
    let c = v * s;
    let x = c * (1.0 - (h % 2.0 - 1.0).abs());
    let (r, g, b) = match h as u32 {
        0 => (c, x, 0.0),
        1 => (x, c, 0.0),
        2 => (0.0, c, x),
        3 => (0.0, x, c),
        4 => (x, 0.0, c),
        _ => (c, 0.0, x),
    };
    let m = v - c;
    let q = |u: f64| ((u + m) * 255.0).round() as u8;
    [q(r), q(g), q(b)]
}

/// Image rows run from the top of the window (largest `delta_R`) down.
fn image_rows(r: &ClassificationRaster) -> impl Iterator<Item = &[AttractorClass]> {
    r.cells.chunks(r.config.nx).rev()
}

pub fn encode_raster(r: &ClassificationRaster, format: RasterFormat) -> Vec<u8> {
    let (nx, ny) = (r.config.nx, r.config.ny);
    match format {
        RasterFormat::Csv => encode_csv(r).into_bytes(),
        RasterFormat::Pgm => {
            let mut out = format!("P5\n{nx} {ny}\n255\n").into_bytes();
            out.extend(image_rows(r).flatten().map(|&c| grey_level(c)));
            out
        }
        RasterFormat::Ppm => {
            let mut out = format!("P6\n{nx} {ny}\n255\n").into_bytes();
            out.extend(image_rows(r).flatten().flat_map(|&c| palette(c)));
            out
        }
    }
}

/// The config echo goes in leading `#` lines so the file can be read back.
fn encode_csv(r: &ClassificationRaster) -> String {
    let mut out = String::new();
    for (k, v) in r.config.to_kv().iter() {
        let line = format!("# {k} = {v}");
        let _ = writeln!(out, "{}", line.trim_end());
    }
    let _ = writeln!(out, "# version = {}", r.version);
    out.push_str(CSV_HEADER);
    out.push('\n');
    let c = &r.config;
    for iy in 0..c.ny {
        let d = c.delta_r(iy);
        for ix in 0..c.nx {
            let cls = r.get(ix, iy);
            let _ = writeln!(out, "{ix},{iy},{},{d},{},{}", c.tau_r(ix), cls.code(), cls.period());
        }
    }
    out
}

pub fn decode_csv(text: &str) -> Result<ClassificationRaster, SweepError> {
    let err = |m: String| SweepError::Csv(m);
    let mut echo = String::new();
    let mut rows = Vec::new();
    let mut seen_header = false;
    for line in text.lines() {
        if let Some(c) = line.strip_prefix('#') {
            echo.push_str(c);
            echo.push('\n');
        } else if !seen_header {
            if line.trim() != CSV_HEADER {
                return Err(err(format!("expected header {CSV_HEADER:?}")));
            }
            seen_header = true;
        } else if !line.trim().is_empty() {
            rows.push(line);
        }
    }
    let mut kv = KvConfig::parse(&echo)?;
    let version = kv.raw("version").unwrap_or("").to_string();
    let mut plain = KvConfig::default();
    for (k, v) in kv.iter().filter(|(k, _)| *k != "version") {
        plain.set(k, v);
    }
    kv = plain;
    let base = SweepConfig::new(f64::NAN, f64::NAN, Window::new((f64::NAN, f64::NAN), (f64::NAN, f64::NAN)), 0, 0);
    let config = SweepConfig::from_kv(&kv, &base)?;
    let (nx, ny) = (config.nx, config.ny);
    if rows.len() != nx * ny {
        return Err(err(format!("{} rows for a {nx} x {ny} raster", rows.len())));
    }
    let mut cells = vec![AttractorClass::Diverging; nx * ny];
    let mut filled = vec![false; nx * ny];
    for row in rows {
        let f: Vec<&str> = row.split(',').collect();
        if f.len() != 6 {
            return Err(err(format!("row {row:?} needs six fields")));
        }
        let int = |s: &str| s.trim().parse::<u64>().map_err(|_| err(format!("bad integer {s:?}")));
        let (ix, iy) = (int(f[0])? as usize, int(f[1])? as usize);
        if ix >= nx || iy >= ny {
            return Err(err(format!("cell ({ix}, {iy}) outside the raster")));
        }
        let code = u8::try_from(int(f[4])?).map_err(|_| err("class code out of range".into()))?;
        let period = u32::try_from(int(f[5])?).map_err(|_| err("period out of range".into()))?;
        let cls = AttractorClass::from_code(code, period).ok_or_else(|| err(format!("unknown class {code}/{period}")))?;
        let k = iy * nx + ix;
        if filled[k] {
            return Err(err(format!("cell ({ix}, {iy}) repeated")));
        }
        filled[k] = true;
        cells[k] = cls;
    }
    Ok(ClassificationRaster { config, cells, version })
}
