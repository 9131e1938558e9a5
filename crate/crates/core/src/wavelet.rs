//! Orthonormal 2-D Haar transform, multi-level pyramids and the
//! self-derived watermark taken from the coarsest approximation band.

use crate::error::{Error, Result};
use crate::imageio::{BinaryImage, RasterImage};

/// A dense row-major grid of reals.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    pub width: usize,
    pub height: usize,
    pub data: Vec<f64>,
}

impl Grid {
    pub fn new(width: usize, height: usize, data: Vec<f64>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::InvalidImage("empty grid".into()));
        }
        if data.len() != width * height {
            return Err(Error::InvalidImage(format!(
                "{} values for a {width}x{height} grid",
                data.len()
            )));
        }
        Ok(Self {
            width,
            height,
            data,
        })
    }

    fn zeros(width: usize, height: usize) -> Self {
        Self {
            width,
            height,
            data: vec![0.0; width * height],
        }
    }

    /// Gray version of `img` as reals.
    pub fn from_image(img: &RasterImage) -> Self {
        let gray = img.to_gray();
        Self {
            width: gray.width(),
            height: gray.height(),
            data: gray.samples().iter().map(|&s| s as f64).collect(),
        }
    }

    /// Rounds and clamps back to an 8-bit gray image.
    pub fn to_image(&self) -> RasterImage {
        let samples = self
            .data
            .iter()
            .map(|&v| v.round().clamp(0.0, 255.0) as u8)
            .collect();
        RasterImage::new(self.width, self.height, 1, samples).expect("grid has valid shape")
    }

    #[inline]
    pub fn at(&self, x: usize, y: usize) -> f64 {
        self.data[y * self.width + x]
    }

    pub fn energy(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum()
    }

    /// Extends to even dimensions by repeating the last column/row.
    fn padded_even(&self) -> Grid {
        let w = self.width + self.width % 2;
        let h = self.height + self.height % 2;
        if (w, h) == (self.width, self.height) {
            return self.clone();
        }
        let mut out = Grid::zeros(w, h);
        for y in 0..h {
            for x in 0..w {
                out.data[y * w + x] = self.at(x.min(self.width - 1), y.min(self.height - 1));
            }
        }
        out
    }

    fn cropped(&self, width: usize, height: usize) -> Grid {
        let mut out = Grid::zeros(width, height);
        for y in 0..height {
            out.data[y * width..(y + 1) * width]
                .copy_from_slice(&self.data[y * self.width..y * self.width + width]);
        }
        out
    }
}

/// The four half-resolution bands of one Haar step.
#[derive(Debug, Clone, PartialEq)]
pub struct Subbands {
    pub ll: Grid,
    pub lh: Grid,
    pub hl: Grid,
    pub hh: Grid,
}

/// One Haar step. For each 2×2 block `[p q; r s]`:
/// `LL = (p+q+r+s)/2`, `LH = (p−q+r−s)/2`, `HL = (p+q−r−s)/2`,
/// `HH = (p−q−r+s)/2`. Odd dimensions are edge-padded first.
pub fn dwt2(img: &Grid) -> Result<Subbands> {
    if img.width == 0 || img.height == 0 || img.data.is_empty() {
        return Err(Error::InvalidImage("empty image".into()));
    }
    let src = img.padded_even();
    let (w, h) = (src.width / 2, src.height / 2);
    let mut bands = Subbands {
        ll: Grid::zeros(w, h),
        lh: Grid::zeros(w, h),
        hl: Grid::zeros(w, h),
        hh: Grid::zeros(w, h),
    };
    for y in 0..h {
        for x in 0..w {
            let p = src.at(2 * x, 2 * y);
            let q = src.at(2 * x + 1, 2 * y);
            let r = src.at(2 * x, 2 * y + 1);
            let s = src.at(2 * x + 1, 2 * y + 1);
            let i = y * w + x;
            bands.ll.data[i] = (p + q + r + s) / 2.0;
            bands.lh.data[i] = (p - q + r - s) / 2.0;
            bands.hl.data[i] = (p + q - r - s) / 2.0;
            bands.hh.data[i] = (p - q - r + s) / 2.0;
        }
    }
    Ok(bands)
}

/// Inverse of [`dwt2`]; output has twice the band dimensions.
pub fn idwt2(b: &Subbands) -> Result<Grid> {
    let (w, h) = (b.ll.width, b.ll.height);
    for band in [&b.lh, &b.hl, &b.hh] {
        if band.width != w || band.height != h {
            return Err(Error::DimensionMismatch("subband shapes differ".into()));
        }
    }
    let mut out = Grid::zeros(2 * w, 2 * h);
    for y in 0..h {
        for x in 0..w {
            let i = y * w + x;
            let (ll, lh, hl, hh) = (b.ll.data[i], b.lh.data[i], b.hl.data[i], b.hh.data[i]);
            let ow = 2 * w;
            out.data[2 * y * ow + 2 * x] = (ll + lh + hl + hh) / 2.0;
            out.data[2 * y * ow + 2 * x + 1] = (ll - lh + hl - hh) / 2.0;
            out.data[(2 * y + 1) * ow + 2 * x] = (ll + lh - hl - hh) / 2.0;
            out.data[(2 * y + 1) * ow + 2 * x + 1] = (ll - lh - hl + hh) / 2.0;
        }
    }
    Ok(out)
}

/// Detail bands of one level plus the size of the grid they came from.
#[derive(Debug, Clone, PartialEq)]
pub struct DetailLevel {
    pub lh: Grid,
    pub hl: Grid,
    pub hh: Grid,
    /// Dimensions before padding at this level.
    pub source_width: usize,
    pub source_height: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct WaveletPyramid {
    pub width: usize,
    pub height: usize,
    /// Finest level first.
    pub details: Vec<DetailLevel>,
    /// Approximation band of the coarsest level.
    pub ll: Grid,
}

impl WaveletPyramid {
    pub fn levels(&self) -> usize {
        self.details.len()
    }

    /// Sum of squares over every stored coefficient.
    pub fn energy(&self) -> f64 {
        self.ll.energy()
            + self
                .details
                .iter()
                .map(|d| d.lh.energy() + d.hl.energy() + d.hh.energy())
                .sum::<f64>()
    }
}

pub fn decompose_grid(img: &Grid, levels: usize) -> Result<WaveletPyramid> {
    if levels == 0 {
        return Err(Error::InvalidParameter("levels must be at least 1".into()));
    }
    let mut current = img.clone();
    let mut details = Vec::with_capacity(levels);
    for level in 1..=levels {
        if current.width < 2 || current.height < 2 {
            return Err(Error::InvalidParameter(format!(
                "{} levels too deep for a {}x{} image (level {level} would see {}x{})",
                levels, img.width, img.height, current.width, current.height
            )));
        }
        let (sw, sh) = (current.width, current.height);
        let bands = dwt2(&current)?;
        details.push(DetailLevel {
            lh: bands.lh,
            hl: bands.hl,
            hh: bands.hh,
            source_width: sw,
            source_height: sh,
        });
        current = bands.ll;
    }
    Ok(WaveletPyramid {
        width: img.width,
        height: img.height,
        details,
        ll: current,
    })
}

/// Gray conversion followed by `levels` Haar steps on the approximation.
pub fn decompose(img: &RasterImage, levels: usize) -> Result<WaveletPyramid> {
    decompose_grid(&Grid::from_image(img), levels)
}

pub fn reconstruct(p: &WaveletPyramid) -> Result<Grid> {
    let mut current = p.ll.clone();
    for d in p.details.iter().rev() {
        let full = idwt2(&Subbands {
            ll: current,
            lh: d.lh.clone(),
            hl: d.hl.clone(),
            hh: d.hh.clone(),
        })?;
        current = full.cropped(d.source_width, d.source_height);
    }
    Ok(current)
}

/// Binarizes the coarsest approximation of `host` at its median
/// (values equal to the median become 1).
pub fn self_watermark(host: &RasterImage, levels: usize) -> Result<BinaryImage> {
    let pyramid = decompose(host, levels)?;
    let ll = &pyramid.ll;
    let mut sorted = ll.data.clone();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len();
    let median = if n % 2 == 1 {
        sorted[n / 2]
    } else {
        (sorted[n / 2 - 1] + sorted[n / 2]) / 2.0
    };
    let bits = ll.data.iter().map(|&v| u8::from(v >= median)).collect();
    BinaryImage::new(ll.width, ll.height, bits)
}
