//! Binary netpbm (P5 gray / P6 RGB, maxval 255) reading and writing, plus
//! the in-memory raster types shared by the rest of the crate.

use crate::error::{Error, Result};

/// An 8-bit raster with one (gray) or three (RGB) interleaved channels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RasterImage {
    width: usize,
    height: usize,
    channels: usize,
    samples: Vec<u8>,
}

impl RasterImage {
    pub fn new(width: usize, height: usize, channels: usize, samples: Vec<u8>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::InvalidImage(format!(
                "zero dimension {width}x{height}"
            )));
        }
        if channels != 1 && channels != 3 {
            return Err(Error::InvalidImage(format!(
                "unsupported channel count {channels}"
            )));
        }
        let expected = width * height * channels;
        if samples.len() != expected {
            return Err(Error::InvalidImage(format!(
                "{} samples for {width}x{height}x{channels} (expected {expected})",
                samples.len()
            )));
        }
        Ok(Self {
            width,
            height,
            channels,
            samples,
        })
    }

    /// Image with every sample set to `value`.
    pub fn filled(width: usize, height: usize, channels: usize, value: u8) -> Result<Self> {
        Self::new(
            width,
            height,
            channels,
            vec![value; width * height * channels],
        )
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn channels(&self) -> usize {
        self.channels
    }

    pub fn samples(&self) -> &[u8] {
        &self.samples
    }

    pub fn samples_mut(&mut self) -> &mut [u8] {
        &mut self.samples
    }

    pub fn into_samples(self) -> Vec<u8> {
        self.samples
    }

    #[inline]
    pub fn index(&self, x: usize, y: usize, c: usize) -> usize {
        (y * self.width + x) * self.channels + c
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize, c: usize) -> u8 {
        self.samples[self.index(x, y, c)]
    }

    #[inline]
    pub fn set(&mut self, x: usize, y: usize, c: usize, v: u8) {
        let i = self.index(x, y, c);
        self.samples[i] = v;
    }

    pub fn same_shape(&self, other: &RasterImage) -> bool {
        self.width == other.width && self.height == other.height && self.channels == other.channels
    }

    /// Integer luminance `round((77R + 150G + 29B) / 256)`; gray images are
    /// returned unchanged.
    pub fn to_gray(&self) -> RasterImage {
        if self.channels == 1 {
            return self.clone();
        }
        let samples = self
            .samples
            .chunks_exact(3)
            .map(|p| {
                let sum = 77 * p[0] as u32 + 150 * p[1] as u32 + 29 * p[2] as u32;
                ((sum + 128) >> 8).min(255) as u8
            })
            .collect();
        RasterImage {
            width: self.width,
            height: self.height,
            channels: 1,
            samples,
        }
    }
}

/// A row-major grid of `{0,1}` values.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryImage {
    width: usize,
    height: usize,
    bits: Vec<u8>,
}

impl BinaryImage {
    pub fn new(width: usize, height: usize, bits: Vec<u8>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::InvalidImage(format!(
                "zero dimension {width}x{height}"
            )));
        }
        if bits.len() != width * height {
            return Err(Error::InvalidImage(format!(
                "{} bits for {width}x{height}",
                bits.len()
            )));
        }
        if let Some(pos) = bits.iter().position(|&b| b > 1) {
            return Err(Error::InvalidImage(format!(
                "bit {pos} has non-binary value {}",
                bits[pos]
            )));
        }
        Ok(Self {
            width,
            height,
            bits,
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn bits(&self) -> &[u8] {
        &self.bits
    }

    pub fn into_bits(self) -> Vec<u8> {
        self.bits
    }

    pub fn same_shape(&self, other: &BinaryImage) -> bool {
        self.width == other.width && self.height == other.height
    }

    /// Gray raster with 0 → 0 and 1 → 255, suitable for writing as P5.
    pub fn to_raster(&self) -> RasterImage {
        RasterImage {
            width: self.width,
            height: self.height,
            channels: 1,
            samples: self.bits.iter().map(|&b| b * 255).collect(),
        }
    }
}

/// Thresholds a gray image: a sample becomes 1 when it is `>= threshold`.
pub fn to_binary(img: &RasterImage, threshold: u8) -> Result<BinaryImage> {
    if img.channels != 1 {
        return Err(Error::InvalidImage(
            "binarization needs a gray image; convert with to_gray first".into(),
        ));
    }
    let bits = img
        .samples
        .iter()
        .map(|&s| u8::from(s >= threshold))
        .collect();
    Ok(BinaryImage {
        width: img.width,
        height: img.height,
        bits,
    })
}

struct HeaderCursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> HeaderCursor<'a> {
    fn skip_space_and_comments(&mut self) {
        while self.pos < self.bytes.len() {
            match self.bytes[self.pos] {
                b'#' => {
                    while self.pos < self.bytes.len() && self.bytes[self.pos] != b'\n' {
                        self.pos += 1;
                    }
                }
                b if b.is_ascii_whitespace() => self.pos += 1,
                _ => break,
            }
        }
    }

    fn number(&mut self, what: &str) -> Result<usize> {
        self.skip_space_and_comments();
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(Error::Format {
                offset: start,
                reason: format!("expected {what}"),
            });
        }
        // Digits only, so this is valid UTF-8.
        let text = std::str::from_utf8(&self.bytes[start..self.pos]).unwrap_or_default();
        text.parse().map_err(|_| Error::Format {
            offset: start,
            reason: format!("{what} out of range"),
        })
    }
}

/// Parses a binary P5 or P6 file with maxval 255.
pub fn read_image(bytes: &[u8]) -> Result<RasterImage> {
    if bytes.len() < 2 || bytes[0] != b'P' || !matches!(bytes[1], b'5' | b'6') {
        return Err(Error::Format {
            offset: 0,
            reason: "magic number must be P5 or P6".into(),
        });
    }
    let channels = if bytes[1] == b'5' { 1 } else { 3 };
    let mut cur = HeaderCursor { bytes, pos: 2 };
    if cur.pos < bytes.len() && !bytes[cur.pos].is_ascii_whitespace() && bytes[cur.pos] != b'#' {
        return Err(Error::Format {
            offset: 2,
            reason: "expected whitespace after magic number".into(),
        });
    }

    let width_at = cur.pos;
    let width = cur.number("width")?;
    let height_at = cur.pos;
    let height = cur.number("height")?;
    if width == 0 {
        return Err(Error::Format {
            offset: width_at,
            reason: "zero width".into(),
        });
    }
    if height == 0 {
        return Err(Error::Format {
            offset: height_at,
            reason: "zero height".into(),
        });
    }
    cur.skip_space_and_comments();
    let maxval_at = cur.pos;
    let maxval = cur.number("maxval")?;
    if maxval != 255 {
        return Err(Error::Format {
            offset: maxval_at,
            reason: format!("maxval {maxval} unsupported (only 255)"),
        });
    }
    match bytes.get(cur.pos) {
        Some(b) if b.is_ascii_whitespace() => cur.pos += 1,
        _ => {
            return Err(Error::Format {
                offset: cur.pos,
                reason: "expected single whitespace before pixel data".into(),
            })
        }
    }

    let expected = width
        .checked_mul(height)
        .and_then(|n| n.checked_mul(channels))
        .ok_or_else(|| Error::Format {
            offset: width_at,
            reason: "image dimensions overflow".into(),
        })?;
    let data = &bytes[cur.pos..];
    if data.len() < expected {
        return Err(Error::Truncated {
            offset: cur.pos,
            expected,
            found: data.len(),
        });
    }
    RasterImage::new(width, height, channels, data[..expected].to_vec())
}

/// Serializes as P5 (gray) or P6 (RGB) with header `P?\n<w> <h>\n255\n`.
pub fn write_image(img: &RasterImage) -> Vec<u8> {
    let magic = if img.channels == 1 { "P5" } else { "P6" };
    let header = format!("{magic}\n{} {}\n255\n", img.width, img.height);
    let mut out = Vec::with_capacity(header.len() + img.samples.len());
    out.extend_from_slice(header.as_bytes());
    out.extend_from_slice(&img.samples);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn file(header: &str, data: &[u8]) -> Vec<u8> {
        let mut v = header.as_bytes().to_vec();
        v.extend_from_slice(data);
        v
    }

    #[test]
    fn reads_gray() {
        let img = read_image(&file("P5\n2 1\n255\n", &[7, 255])).unwrap();
        assert_eq!((img.width(), img.height(), img.channels()), (2, 1, 1));
        assert_eq!(img.samples(), &[7, 255]);
    }

    #[test]
    fn reads_rgb() {
        let img = read_image(&file("P6\n1 1\n255\n", &[1, 2, 3])).unwrap();
        assert_eq!(img.channels(), 3);
        assert_eq!(img.samples(), &[1, 2, 3]);
    }

    #[test]
    fn truncated_data() {
        let err = read_image(&file("P5\n2 2\n255\n", &[1, 2, 3])).unwrap_err();
        assert_eq!(
            err,
            Error::Truncated {
                offset: 11,
                expected: 4,
                found: 3
            }
        );
    }

    #[test]
    fn header_comments_are_skipped() {
        let img = read_image(&file("P5 # made by hand\n# another\n2  1\n255\n", &[9, 8])).unwrap();
        assert_eq!(img.samples(), &[9, 8]);
    }

    #[test]
    fn rejects_bad_headers() {
        assert!(matches!(
            read_image(b"P4\n1 1\n255\n\0"),
            Err(Error::Format { offset: 0, .. })
        ));
        assert!(matches!(
            read_image(&file("P5\n1 1\n65535\n", &[0, 0])),
            Err(Error::Format { offset: 7, .. })
        ));
        assert!(matches!(
            read_image(&file("P5\n0 1\n255\n", &[])),
            Err(Error::Format { offset: 2, .. })
        ));
        assert!(matches!(
            read_image(&file("P5\n1 0\n255\n", &[])),
            Err(Error::Format { .. })
        ));
        assert!(read_image(b"").is_err());
    }

    #[test]
    fn trailing_bytes_ignored() {
        let img = read_image(&file("P5\n1 1\n255\n", &[5, 6, 7])).unwrap();
        assert_eq!(img.samples(), &[5]);
    }

    #[test]
    fn writes_exact_header() {
        let img = RasterImage::filled(1, 1, 1, 0).unwrap();
        assert_eq!(write_image(&img), b"P5\n1 1\n255\n\0".to_vec());
        let rgb = RasterImage::filled(2, 2, 3, 255).unwrap();
        let bytes = write_image(&rgb);
        assert_eq!(bytes.len(), 11 + 12);
        assert!(bytes.starts_with(b"P6\n2 2\n255\n"));
    }

    #[test]
    fn binarize() {
        let img = RasterImage::new(3, 1, 1, vec![0, 128, 255]).unwrap();
        assert_eq!(to_binary(&img, 128).unwrap().bits(), &[0, 1, 1]);
        let img = RasterImage::new(2, 1, 1, vec![100, 200]).unwrap();
        assert_eq!(to_binary(&img, 150).unwrap().bits(), &[0, 1]);
        let zero = RasterImage::filled(4, 4, 1, 0).unwrap();
        assert!(to_binary(&zero, 1).unwrap().bits().iter().all(|&b| b == 0));
        let rgb = RasterImage::filled(1, 1, 3, 0).unwrap();
        assert!(to_binary(&rgb, 1).is_err());
    }

    #[test]
    fn luminance() {
        let img = RasterImage::new(2, 1, 3, vec![255, 255, 255, 10, 20, 30]).unwrap();
        let g = img.to_gray();
        // (77*10 + 150*20 + 29*30 + 128) >> 8 = 4768 >> 8 = 18
        assert_eq!(g.samples(), &[255, 18]);
    }

    #[test]
    fn constructor_invariants() {
        assert!(RasterImage::new(2, 2, 2, vec![0; 8]).is_err());
        assert!(RasterImage::new(2, 2, 1, vec![0; 3]).is_err());
        assert!(BinaryImage::new(2, 1, vec![0, 2]).is_err());
    }
}
