//! Shared fixtures for the criterion benchmarks.

use stagemark::{corpus, BinaryImage, RasterImage, SecretKey};

pub struct Fixture {
    pub host: RasterImage,
    pub wm: BinaryImage,
    pub key: SecretKey,
}

/// Reference setup: 512×512 RGB host with a 32×32 watermark.
pub fn reference() -> Fixture {
    Fixture {
        host: corpus::synthetic_host(1, 512, 512),
        wm: corpus::glyph_watermark(1, 32),
        key: SecretKey::generate(1, 32).expect("seed 1 yields a key"),
    }
}
