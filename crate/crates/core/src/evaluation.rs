//! Embed → attack → extract → score, one row per attack.

use crate::attacks::{apply_attack, Attack};
use crate::chaos::SecretKey;
use crate::error::Result;
use crate::imageio::{BinaryImage, RasterImage};
use crate::metrics::{ber, nc, psnr, EvaluationReport};
use crate::staging::{embed, extract};

/// A report row together with the watermark recovered after the attack.
#[derive(Debug, Clone)]
pub struct EvaluationRun {
    pub report: EvaluationReport,
    pub recovered: BinaryImage,
    pub attacked: RasterImage,
}

pub fn evaluate(
    host: &RasterImage,
    wm: &BinaryImage,
    key: &SecretKey,
    attacks: &[Attack],
    tau: f64,
) -> Result<Vec<EvaluationRun>> {
    let marked = embed(host, wm, key)?.image;
    let psnr_host = psnr(host, &marked)?;
    attacks
        .iter()
        .map(|attack| {
            let attacked = apply_attack(&marked, attack)?;
            let recovered = extract(&attacked, key)?;
            let confidence = nc(wm, &recovered)?;
            Ok(EvaluationRun {
                report: EvaluationReport {
                    attack: attack.to_string(),
                    psnr_host_vs_marked: psnr_host,
                    psnr_marked_vs_attacked: psnr(&marked, &attacked)?,
                    ber: ber(wm, &recovered)?,
                    nc: confidence,
                    present: confidence >= tau,
                    tau,
                },
                recovered,
                attacked,
            })
        })
        .collect()
}
