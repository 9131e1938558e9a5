//! Image quality and watermark recovery metrics, plus the evaluation
//! report they feed.

use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::imageio::{BinaryImage, RasterImage};

/// PSNR in decibels; identical images have infinite PSNR.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub enum Psnr {
    Db(f64),
    Infinite,
}

impl Psnr {
    pub fn db(self) -> f64 {
        match self {
            Psnr::Db(v) => v,
            Psnr::Infinite => f64::INFINITY,
        }
    }
}

impl fmt::Display for Psnr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Psnr::Db(v) => write!(f, "{v:.4}"),
            Psnr::Infinite => f.write_str("inf"),
        }
    }
}

impl Serialize for Psnr {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Psnr::Db(v) => s.serialize_f64(*v),
            Psnr::Infinite => s.serialize_str("inf"),
        }
    }
}

pub fn mse(a: &RasterImage, b: &RasterImage) -> Result<f64> {
    if !a.same_shape(b) {
        return Err(Error::DimensionMismatch(format!(
            "{}x{}x{} vs {}x{}x{}",
            a.width(),
            a.height(),
            a.channels(),
            b.width(),
            b.height(),
            b.channels()
        )));
    }
    let sum: u64 = a
        .samples()
        .iter()
        .zip(b.samples())
        .map(|(&x, &y)| {
            let d = x as i64 - y as i64;
            (d * d) as u64
        })
        .sum();
    Ok(sum as f64 / a.samples().len() as f64)
}

pub fn psnr(a: &RasterImage, b: &RasterImage) -> Result<Psnr> {
    let m = mse(a, b)?;
    if m == 0.0 {
        return Ok(Psnr::Infinite);
    }
    Ok(Psnr::Db(10.0 * (255.0f64 * 255.0 / m).log10()))
}

fn check_bits(a: &BinaryImage, b: &BinaryImage) -> Result<()> {
    if !a.same_shape(b) {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} vs {}x{}",
            a.width(),
            a.height(),
            b.width(),
            b.height()
        )));
    }
    Ok(())
}

/// Fraction of positions where the two bit images differ.
pub fn ber(a: &BinaryImage, b: &BinaryImage) -> Result<f64> {
    check_bits(a, b)?;
    let diff = a.bits().iter().zip(b.bits()).filter(|(x, y)| x != y).count();
    Ok(diff as f64 / a.bits().len() as f64)
}

/// Normalized correlation `Σ aᵢbᵢ / Σ aᵢ²` against the reference `a`.
///
/// Only the 1-bits of `a` count, so an all-ones `b` scores 1.0 against any
/// reference.
pub fn nc(a: &BinaryImage, b: &BinaryImage) -> Result<f64> {
    check_bits(a, b)?;
    let ones: u64 = a.bits().iter().map(|&x| x as u64).sum();
    if ones == 0 {
        return Err(Error::InvalidParameter(
            "normalized correlation needs a reference with at least one set bit".into(),
        ));
    }
    let hits: u64 = a
        .bits()
        .iter()
        .zip(b.bits())
        .map(|(&x, &y)| (x & y) as u64)
        .sum();
    Ok(hits as f64 / ones as f64)
}

/// One row of a robustness evaluation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvaluationReport {
    pub attack: String,
    pub psnr_host_vs_marked: Psnr,
    pub psnr_marked_vs_attacked: Psnr,
    pub ber: f64,
    pub nc: f64,
    pub present: bool,
    pub tau: f64,
}

pub const TSV_HEADER: &str =
    "attack\tpsnr_host_vs_marked\tpsnr_marked_vs_attacked\tber\tnc\tpresent\ttau";

impl EvaluationReport {
    pub fn tsv_row(&self) -> String {
        format!(
            "{}\t{}\t{}\t{:.6}\t{:.6}\t{}\t{}",
            self.attack,
            self.psnr_host_vs_marked,
            self.psnr_marked_vs_attacked,
            self.ber,
            self.nc,
            self.present,
            self.tau
        )
    }
}

pub fn reports_to_tsv(rows: &[EvaluationReport]) -> String {
    let mut s = String::from(TSV_HEADER);
    s.push('\n');
    for r in rows {
        s.push_str(&r.tsv_row());
        s.push('\n');
    }
    s
}

pub fn reports_to_json(rows: &[EvaluationReport]) -> String {
    serde_json::to_string_pretty(rows).expect("reports serialize")
}
