//! Image-processing attacks for robustness evaluation. Every attack keeps
//! the input's dimensions and channel count.

use std::fmt;
use std::str::FromStr;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::imageio::RasterImage;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Attack {
    None,
    /// Box (low-pass) filter.
    Mean { window: usize },
    Median { window: usize },
    /// Unsharp mask: `img + (img − mean(img))`.
    Highpass { window: usize },
    SaltPepper { density: f64, seed: u64 },
    /// Fills the rectangle with mid-gray.
    Crop {
        x: usize,
        y: usize,
        w: usize,
        h: usize,
    },
    /// Nearest-neighbor downscale by `factor` and back up.
    Scale { factor: f64 },
    /// Deletes `count` random rows and `count` random columns, then pads
    /// back by repeating the last row/column.
    RowCol { count: usize, seed: u64 },
}

impl Attack {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidParameter(m));
        match *self {
            Attack::Mean { window } | Attack::Median { window } | Attack::Highpass { window } => {
                if window < 3 || window % 2 == 0 {
                    return bad(format!("window {window} must be odd and at least 3"));
                }
            }
            Attack::SaltPepper { density, .. } => {
                if !(0.0..=1.0).contains(&density) {
                    return bad(format!("density {density} outside [0, 1]"));
                }
            }
            Attack::Crop { w, h, .. } => {
                if w == 0 || h == 0 {
                    return bad("crop region is empty".into());
                }
            }
            Attack::Scale { factor } => {
                if !(factor > 0.0 && factor <= 1.0) {
                    return bad(format!("scale factor {factor} outside (0, 1]"));
                }
            }
            Attack::None | Attack::RowCol { .. } => {}
        }
        Ok(())
    }

    /// Parses the compact form (`mean:3`, `saltpepper:0.02:7`, `crop:x,y,w,h`,
    /// ...). Seeded attacks given without a seed use `default_seed`.
    pub fn parse_with_seed(s: &str, default_seed: u64) -> Result<Self> {
        let bad = || Error::InvalidParameter(format!("cannot parse attack `{s}`"));
        let mut parts = s.trim().split(':');
        let kind = parts.next().ok_or_else(bad)?.to_ascii_lowercase();
        let args: Vec<&str> = parts.collect();
        let num = |i: usize| -> Result<&str> { args.get(i).copied().ok_or_else(bad) };
        let seed = |i: usize| -> Result<u64> {
            match args.get(i) {
                Some(v) => v.parse().map_err(|_| bad()),
                None => Ok(default_seed),
            }
        };
        let max_args = |n: usize| if args.len() > n { Err(bad()) } else { Ok(()) };
        let attack = match kind.as_str() {
            "none" => {
                max_args(0)?;
                Attack::None
            }
            "mean" | "lpf" => {
                max_args(1)?;
                Attack::Mean {
                    window: num(0)?.parse().map_err(|_| bad())?,
                }
            }
            "median" | "mpf" => {
                max_args(1)?;
                Attack::Median {
                    window: num(0)?.parse().map_err(|_| bad())?,
                }
            }
            "highpass" | "hpf" => {
                max_args(1)?;
                Attack::Highpass {
                    window: num(0)?.parse().map_err(|_| bad())?,
                }
            }
            "saltpepper" => {
                max_args(2)?;
                Attack::SaltPepper {
                    density: num(0)?.parse().map_err(|_| bad())?,
                    seed: seed(1)?,
                }
            }
            "crop" => {
                max_args(1)?;
                let v: Vec<usize> = num(0)?
                    .split(',')
                    .map(|t| t.trim().parse())
                    .collect::<std::result::Result<_, _>>()
                    .map_err(|_| bad())?;
                if v.len() != 4 {
                    return Err(bad());
                }
                Attack::Crop {
                    x: v[0],
                    y: v[1],
                    w: v[2],
                    h: v[3],
                }
            }
            "scale" => {
                max_args(1)?;
                Attack::Scale {
                    factor: num(0)?.parse().map_err(|_| bad())?,
                }
            }
            "rowcol" => {
                max_args(2)?;
                Attack::RowCol {
                    count: num(0)?.parse().map_err(|_| bad())?,
                    seed: seed(1)?,
                }
            }
            _ => return Err(bad()),
        };
        attack.validate()?;
        Ok(attack)
    }
}

impl FromStr for Attack {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Attack::parse_with_seed(s, 0)
    }
}

impl fmt::Display for Attack {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Attack::None => write!(f, "none"),
            Attack::Mean { window } => write!(f, "mean:{window}"),
            Attack::Median { window } => write!(f, "median:{window}"),
            Attack::Highpass { window } => write!(f, "highpass:{window}"),
            Attack::SaltPepper { density, seed } => write!(f, "saltpepper:{density}:{seed}"),
            Attack::Crop { x, y, w, h } => write!(f, "crop:{x},{y},{w},{h}"),
            Attack::Scale { factor } => write!(f, "scale:{factor}"),
            Attack::RowCol { count, seed } => write!(f, "rowcol:{count}:{seed}"),
        }
    }
}

pub fn apply_attack(img: &RasterImage, attack: &Attack) -> Result<RasterImage> {
    attack.validate()?;
    match *attack {
        Attack::None => Ok(img.clone()),
        Attack::Mean { window } => Ok(mean_filter(img, window)),
        Attack::Median { window } => Ok(median_filter(img, window)),
        Attack::Highpass { window } => Ok(highpass(img, window)),
        Attack::SaltPepper { density, seed } => Ok(salt_pepper(img, density, seed)),
        Attack::Crop { x, y, w, h } => crop(img, x, y, w, h),
        Attack::Scale { factor } => scale_roundtrip(img, factor),
        Attack::RowCol { count, seed } => row_col_removal(img, count, seed),
    }
}

#[inline]
fn clamp_index(i: isize, len: usize) -> usize {
    i.clamp(0, len as isize - 1) as usize
}

/// k×k box average per channel with edge replication, rounded half up.
pub fn mean_filter(img: &RasterImage, window: usize) -> RasterImage {
    let (w, h, ch) = (img.width(), img.height(), img.channels());
    let r = (window / 2) as isize;
    let area = (window * window) as u32;
    // Separable: horizontal window sums, then vertical sums of those.
    let mut rows = vec![0u32; w * h * ch];
    for y in 0..h {
        for x in 0..w {
            for c in 0..ch {
                rows[(y * w + x) * ch + c] = (-r..=r)
                    .map(|dx| img.get(clamp_index(x as isize + dx, w), y, c) as u32)
                    .sum();
            }
        }
    }
    let mut out = img.clone();
    for y in 0..h {
        for x in 0..w {
            for c in 0..ch {
                let sum: u32 = (-r..=r)
                    .map(|dy| rows[(clamp_index(y as isize + dy, h) * w + x) * ch + c])
                    .sum();
                out.set(x, y, c, ((sum + area / 2) / area) as u8);
            }
        }
    }
    out
}

/// k×k median per channel with edge replication.
pub fn median_filter(img: &RasterImage, window: usize) -> RasterImage {
    let (w, h, ch) = (img.width(), img.height(), img.channels());
    let r = (window / 2) as isize;
    let mut buf = Vec::with_capacity(window * window);
    let mut out = img.clone();
    for y in 0..h {
        for x in 0..w {
            for c in 0..ch {
                buf.clear();
                for dy in -r..=r {
                    let sy = clamp_index(y as isize + dy, h);
                    for dx in -r..=r {
                        buf.push(img.get(clamp_index(x as isize + dx, w), sy, c));
                    }
                }
                let mid = buf.len() / 2;
                let (_, m, _) = buf.select_nth_unstable(mid);
                out.set(x, y, c, *m);
            }
        }
    }
    out
}

/// Unsharp mask with strength 1, clamped to [0, 255].
pub fn highpass(img: &RasterImage, window: usize) -> RasterImage {
    let blurred = mean_filter(img, window);
    let samples = img
        .samples()
        .iter()
        .zip(blurred.samples())
        .map(|(&v, &m)| (2 * v as i32 - m as i32).clamp(0, 255) as u8)
        .collect();
    RasterImage::new(img.width(), img.height(), img.channels(), samples)
        .expect("same shape as input")
}

/// Sets `round(density · pixels)` distinct pixels to black or white.
pub fn salt_pepper(img: &RasterImage, density: f64, seed: u64) -> RasterImage {
    let pixels = img.width() * img.height();
    let hit = ((density * pixels as f64).round() as usize).min(pixels);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = img.clone();
    for p in sample(&mut rng, pixels, hit).into_iter() {
        let v = if rng.gen_bool(0.5) { 255 } else { 0 };
        let (x, y) = (p % img.width(), p / img.width());
        for c in 0..img.channels() {
            out.set(x, y, c, v);
        }
    }
    out
}

pub fn crop(img: &RasterImage, x: usize, y: usize, w: usize, h: usize) -> Result<RasterImage> {
    if w == 0 || h == 0 || x + w > img.width() || y + h > img.height() {
        return Err(Error::InvalidParameter(format!(
            "crop region {x},{y},{w},{h} outside {}x{} image",
            img.width(),
            img.height()
        )));
    }
    let mut out = img.clone();
    for yy in y..y + h {
        for xx in x..x + w {
            for c in 0..img.channels() {
                out.set(xx, yy, c, 128);
            }
        }
    }
    Ok(out)
}

/// Nearest-neighbor resample of `img` to `w × h` (pixel-center mapping).
fn resize_nearest(img: &RasterImage, w: usize, h: usize) -> RasterImage {
    let (sw, sh, ch) = (img.width(), img.height(), img.channels());
    let map = |d: usize, dst: usize, src: usize| ((2 * d + 1) * src / (2 * dst)).min(src - 1);
    let mut samples = Vec::with_capacity(w * h * ch);
    for y in 0..h {
        let sy = map(y, h, sh);
        for x in 0..w {
            let sx = map(x, w, sw);
            for c in 0..ch {
                samples.push(img.get(sx, sy, c));
            }
        }
    }
    RasterImage::new(w, h, ch, samples).expect("non-zero target size")
}

pub fn scale_roundtrip(img: &RasterImage, factor: f64) -> Result<RasterImage> {
    let dw = (img.width() as f64 * factor).floor() as usize;
    let dh = (img.height() as f64 * factor).floor() as usize;
    if dw == 0 || dh == 0 {
        return Err(Error::InvalidParameter(format!(
            "scale {factor} shrinks {}x{} to nothing",
            img.width(),
            img.height()
        )));
    }
    let small = resize_nearest(img, dw, dh);
    Ok(resize_nearest(&small, img.width(), img.height()))
}

pub fn row_col_removal(img: &RasterImage, count: usize, seed: u64) -> Result<RasterImage> {
    let (w, h, ch) = (img.width(), img.height(), img.channels());
    if count >= w || count >= h {
        return Err(Error::InvalidParameter(format!(
            "cannot remove {count} rows/columns from a {w}x{h} image"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut drop_rows = vec![false; h];
    for r in sample(&mut rng, h, count).into_iter() {
        drop_rows[r] = true;
    }
    let mut drop_cols = vec![false; w];
    for c in sample(&mut rng, w, count).into_iter() {
        drop_cols[c] = true;
    }
    let rows: Vec<usize> = (0..h).filter(|&r| !drop_rows[r]).collect();
    let cols: Vec<usize> = (0..w).filter(|&c| !drop_cols[c]).collect();
    let mut out = img.clone();
    for y in 0..h {
        let sy = rows[y.min(rows.len() - 1)];
        for x in 0..w {
            let sx = cols[x.min(cols.len() - 1)];
            for c in 0..ch {
                out.set(x, y, c, img.get(sx, sy, c));
            }
        }
    }
    Ok(out)
}
