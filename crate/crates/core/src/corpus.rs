//! Seeded synthetic images used by tests, benchmarks and the CLI's demo
//! commands. Hosts are smooth gradients with overlaid shapes and fine
//! texture, loosely resembling photographs; watermarks are blocky glyphs.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::imageio::{BinaryImage, RasterImage};

/// Bilinearly interpolated lattice noise with `cells` cells per side, in [0, 1).
fn value_noise(rng: &mut ChaCha8Rng, w: usize, h: usize, cells: usize) -> Vec<f64> {
    let lattice: Vec<f64> = (0..(cells + 1) * (cells + 1)).map(|_| rng.gen()).collect();
    let at = |i: usize, j: usize| lattice[j * (cells + 1) + i];
    let mut out = Vec::with_capacity(w * h);
    for y in 0..h {
        let fy = y as f64 * cells as f64 / h as f64;
        let (j, ty) = (fy.floor() as usize, fy.fract());
        for x in 0..w {
            let fx = x as f64 * cells as f64 / w as f64;
            let (i, tx) = (fx.floor() as usize, fx.fract());
            let top = at(i, j) * (1.0 - tx) + at(i + 1, j) * tx;
            let bottom = at(i, j + 1) * (1.0 - tx) + at(i + 1, j + 1) * tx;
            out.push(top * (1.0 - ty) + bottom * ty);
        }
    }
    out
}

/// A photograph-like RGB host.
pub fn synthetic_host(seed: u64, width: usize, height: usize) -> RasterImage {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut planes: Vec<Vec<f64>> = (0..3)
        .map(|_| {
            let coarse = value_noise(&mut rng, width, height, 4);
            let mid = value_noise(&mut rng, width, height, 16);
            let fine = value_noise(&mut rng, width, height, 64);
            coarse
                .iter()
                .zip(&mid)
                .zip(&fine)
                .map(|((c, m), f)| 150.0 * c + 60.0 * m + 25.0 * f + 10.0)
                .collect()
        })
        .collect();

    for _ in 0..rng.gen_range(4..10) {
        let cx = rng.gen_range(0.0..width as f64);
        let cy = rng.gen_range(0.0..height as f64);
        let rx = rng.gen_range(0.05..0.25) * width as f64;
        let ry = rng.gen_range(0.05..0.25) * height as f64;
        let color: [f64; 3] = [rng.gen_range(0.0..255.0), rng.gen_range(0.0..255.0), rng.gen_range(0.0..255.0)];
        let alpha = rng.gen_range(0.3..0.8);
        for y in 0..height {
            for x in 0..width {
                let dx = (x as f64 - cx) / rx;
                let dy = (y as f64 - cy) / ry;
                if dx * dx + dy * dy <= 1.0 {
                    for (plane, &col) in planes.iter_mut().zip(&color) {
                        let v = &mut plane[y * width + x];
                        *v = *v * (1.0 - alpha) + col * alpha;
                    }
                }
            }
        }
    }

    let mut samples = Vec::with_capacity(width * height * 3);
    for i in 0..width * height {
        for plane in &planes {
            samples.push(plane[i].round().clamp(0.0, 255.0) as u8);
        }
    }
    RasterImage::new(width, height, 3, samples).expect("valid synthetic size")
}

/// Uniform random samples.
pub fn noise_image(seed: u64, width: usize, height: usize, channels: usize) -> RasterImage {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let samples = (0..width * height * channels).map(|_| rng.gen()).collect();
    RasterImage::new(width, height, channels, samples).expect("valid noise size")
}

/// A blocky binary glyph with a border and a few filled rectangles; always
/// has both set and clear bits.
pub fn glyph_watermark(seed: u64, side: usize) -> BinaryImage {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut bits = vec![0u8; side * side];
    for i in 0..side {
        bits[i] = 1;
        bits[(side - 1) * side + i] = 1;
        bits[i * side] = 1;
        bits[i * side + side - 1] = 1;
    }
    for _ in 0..rng.gen_range(3..7) {
        let x0 = rng.gen_range(0..side);
        let y0 = rng.gen_range(0..side);
        let x1 = (x0 + rng.gen_range(1..=side / 2 + 1)).min(side);
        let y1 = (y0 + rng.gen_range(1..=side / 2 + 1)).min(side);
        let value = u8::from(rng.gen_bool(0.6));
        for y in y0..y1 {
            for x in x0..x1 {
                bits[y * side + x] = value;
            }
        }
    }
    BinaryImage::new(side, side, bits).expect("valid glyph size")
}

/// Independent fair bits.
pub fn random_watermark(seed: u64, side: usize) -> BinaryImage {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut bits: Vec<u8> = (0..side * side).map(|_| rng.gen_range(0..2)).collect();
    bits[0] = 1;
    BinaryImage::new(side, side, bits).expect("valid watermark size")
}
