//! Three-stage redundant embedding.
//!
//! The host is tiled three times, with 1×1, 4×4 and 8×8 grids of blocks,
//! for 1 + 16 + 64 = 81 copies of the same encrypted watermark. Inside a
//! block, watermark pixel `(x, y)` lands at the cat-map image of `(x, y)`
//! modulo the block side. Stage 1 writes the red LSB, stage 2 green and
//! stage 3 blue; gray hosts use bit-planes 0, 1 and 2 of their only channel.
//! Extraction decrypts every copy and takes a per-bit majority.

use serde::Serialize;

use crate::chaos::SecretKey;
use crate::error::{Error, Result};
use crate::imageio::{BinaryImage, RasterImage};
use crate::metrics::nc;
use crate::signal::{encode, Cipher};

/// Blocks per side for each stage.
pub const STAGE_GRIDS: [usize; 3] = [1, 4, 8];

/// Total number of embedded copies.
pub const TOTAL_COPIES: usize = 1 + 16 + 64;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Stage {
    /// 1, 2 or 3.
    pub number: usize,
    pub grid: usize,
    pub block_w: usize,
    pub block_h: usize,
    /// Side of the square embedding subgrid at each block's top-left.
    pub side: usize,
    /// Top-left corners, row-major over the grid.
    pub origins: Vec<(usize, usize)>,
    /// In-block offset for each watermark bit, indexed `y * wm_width + x`.
    pub positions: Vec<(usize, usize)>,
}

impl Stage {
    /// `(channel, bit plane)` written by this stage.
    pub fn target(&self, channels: usize) -> (usize, u8) {
        if channels == 3 {
            (self.number - 1, 0)
        } else {
            (0, (self.number - 1) as u8)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StagePlan {
    pub host_w: usize,
    pub host_h: usize,
    pub wm_side: usize,
    pub stages: Vec<Stage>,
}

impl StagePlan {
    pub fn copies(&self) -> usize {
        self.stages.iter().map(|s| s.origins.len()).sum()
    }
}

pub fn plan_stages(host_w: usize, host_h: usize, key: &SecretKey) -> Result<StagePlan> {
    key.validate()?;
    let wm_side = key.wm_width;
    let finest = STAGE_GRIDS[STAGE_GRIDS.len() - 1];
    if host_w / finest < wm_side || host_h / finest < wm_side {
        return Err(Error::Capacity {
            host_w,
            host_h,
            wm_side,
            min_w: finest * wm_side,
            min_h: finest * wm_side,
        });
    }

    let mut stages = Vec::with_capacity(STAGE_GRIDS.len());
    for (i, &grid) in STAGE_GRIDS.iter().enumerate() {
        let block_w = host_w / grid;
        let block_h = host_h / grid;
        let side = block_w.min(block_h);
        let origins = (0..grid)
            .flat_map(|by| (0..grid).map(move |bx| (bx * block_w, by * block_h)))
            .collect();
        let map = key.cat.with_modulus(side as u64)?.compile();
        let mut positions = Vec::with_capacity(key.wm_len());
        for y in 0..key.wm_height {
            for x in 0..key.wm_width {
                let (px, py) = map.apply(x as u64, y as u64)?;
                positions.push((px as usize, py as usize));
            }
        }
        stages.push(Stage {
            number: i + 1,
            grid,
            block_w,
            block_h,
            side,
            origins,
            positions,
        });
    }
    Ok(StagePlan {
        host_w,
        host_h,
        wm_side,
        stages,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WatermarkedImage {
    pub image: RasterImage,
    pub plan: StagePlan,
}

fn check_host(img: &RasterImage) -> Result<()> {
    if img.channels() != 1 && img.channels() != 3 {
        return Err(Error::InvalidImage(format!(
            "unsupported channel count {}",
            img.channels()
        )));
    }
    Ok(())
}

pub fn embed(host: &RasterImage, wm: &BinaryImage, key: &SecretKey) -> Result<WatermarkedImage> {
    check_host(host)?;
    if wm.width() != key.wm_width || wm.height() != key.wm_height {
        return Err(Error::DimensionMismatch(format!(
            "watermark is {}x{}, key expects {}x{}",
            wm.width(),
            wm.height(),
            key.wm_width,
            key.wm_height
        )));
    }
    let plan = plan_stages(host.width(), host.height(), key)?;
    let encrypted = Cipher::new(key)?.encrypt(&encode(wm))?;
    let image = write_copies(host, &plan, &encrypted.bits);
    Ok(WatermarkedImage { image, plan })
}

fn write_copies(host: &RasterImage, plan: &StagePlan, encrypted: &[u8]) -> RasterImage {
    let mut image = host.clone();
    for stage in &plan.stages {
        let (channel, plane) = stage.target(host.channels());
        let mask = 1u8 << plane;
        for &(ox, oy) in &stage.origins {
            for (&(px, py), &bit) in stage.positions.iter().zip(encrypted) {
                let (x, y) = (ox + px, oy + py);
                let v = image.get(x, y, channel);
                image.set(x, y, channel, (v & !mask) | (bit << plane));
            }
        }
    }
    image
}

/// One decrypted copy of the watermark.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtractedCopy {
    pub stage: usize,
    pub block: usize,
    pub bits: Vec<u8>,
}

/// Reads and decrypts all 81 copies, stage 3 first.
pub fn extract_copies(img: &RasterImage, key: &SecretKey) -> Result<Vec<ExtractedCopy>> {
    check_host(img)?;
    let plan = plan_stages(img.width(), img.height(), key)?;
    let cipher = Cipher::new(key)?;
    let mut copies = Vec::with_capacity(plan.copies());
    for stage in plan.stages.iter().rev() {
        let (channel, plane) = stage.target(img.channels());
        for (block, &(ox, oy)) in stage.origins.iter().enumerate() {
            let raw: Vec<u8> = stage
                .positions
                .iter()
                .map(|&(px, py)| (img.get(ox + px, oy + py, channel) >> plane) & 1)
                .collect();
            copies.push(ExtractedCopy {
                stage: stage.number,
                block,
                bits: cipher.decrypt_bits(&raw),
            });
        }
    }
    Ok(copies)
}

/// Per-bit majority over copies; ties (only possible for an even count)
/// resolve to 1.
pub fn majority_vote(copies: &[ExtractedCopy], len: usize) -> Vec<u8> {
    let mut ones = vec![0usize; len];
    for copy in copies {
        for (count, &b) in ones.iter_mut().zip(&copy.bits) {
            *count += b as usize;
        }
    }
    ones.iter()
        .map(|&n| u8::from(2 * n >= copies.len()))
        .collect()
}

pub fn extract(img: &RasterImage, key: &SecretKey) -> Result<BinaryImage> {
    let copies = extract_copies(img, key)?;
    let bits = majority_vote(&copies, key.wm_len());
    BinaryImage::new(key.wm_width, key.wm_height, bits)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Detection {
    pub present: bool,
    pub confidence: f64,
}

/// Blind detection: normalized correlation between `wm` and the extracted
/// watermark, thresholded at `tau`.
pub fn detect(img: &RasterImage, wm: &BinaryImage, key: &SecretKey, tau: f64) -> Result<Detection> {
    if !(0.0..=1.0).contains(&tau) {
        return Err(Error::InvalidParameter(format!("tau {tau} outside [0, 1]")));
    }
    let extracted = extract(img, key)?;
    let confidence = nc(wm, &extracted)?;
    Ok(Detection {
        present: confidence >= tau,
        confidence,
    })
}
