//! Watermark signal handling: flattening a binary image to bits, then
//! permuting and XOR-ing it with the logistic keystream.

use crate::chaos::{invert_permutation, keyed_permutation, logistic_bits, SecretKey};
use crate::error::{Error, Result};
use crate::imageio::BinaryImage;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WatermarkBits {
    pub width: usize,
    pub height: usize,
    pub bits: Vec<u8>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EncryptedWatermark {
    pub width: usize,
    pub height: usize,
    pub bits: Vec<u8>,
}

pub fn encode(img: &BinaryImage) -> WatermarkBits {
    WatermarkBits {
        width: img.width(),
        height: img.height(),
        bits: img.bits().to_vec(),
    }
}

pub fn decode(w: &WatermarkBits) -> Result<BinaryImage> {
    BinaryImage::new(w.width, w.height, w.bits.clone())
}

/// Permutation and keystream derived from a key, computed once and reused
/// for every copy of the watermark.
#[derive(Debug, Clone)]
pub struct Cipher {
    width: usize,
    height: usize,
    /// `forward[i]` is the output slot of plaintext bit `i`.
    forward: Vec<usize>,
    inverse: Vec<usize>,
    keystream: Vec<u8>,
}

impl Cipher {
    pub fn new(key: &SecretKey) -> Result<Self> {
        key.validate()?;
        let len = key.wm_len();
        let forward = keyed_permutation(&key.permutation_params(), len)?;
        let keystream = logistic_bits(&key.cipher, len)?;
        Ok(Self::from_parts(key.wm_width, key.wm_height, forward, keystream))
    }

    /// Builds a cipher from an explicit permutation and keystream.
    pub fn from_parts(width: usize, height: usize, forward: Vec<usize>, keystream: Vec<u8>) -> Self {
        assert_eq!(forward.len(), width * height);
        assert_eq!(keystream.len(), width * height);
        let inverse = invert_permutation(&forward);
        Self {
            width,
            height,
            forward,
            inverse,
            keystream,
        }
    }

    fn check(&self, width: usize, height: usize, len: usize) -> Result<()> {
        if width != self.width || height != self.height || len != width * height {
            return Err(Error::DimensionMismatch(format!(
                "watermark is {width}x{height} ({len} bits), key expects {}x{}",
                self.width, self.height
            )));
        }
        Ok(())
    }

    pub fn keystream(&self) -> &[u8] {
        &self.keystream
    }

    pub fn permutation(&self) -> &[usize] {
        &self.forward
    }

    /// `out[i] = w[σ⁻¹(i)] ⊕ C_i`
    pub fn encrypt(&self, w: &WatermarkBits) -> Result<EncryptedWatermark> {
        self.check(w.width, w.height, w.bits.len())?;
        let bits = self
            .inverse
            .iter()
            .zip(&self.keystream)
            .map(|(&src, &c)| w.bits[src] ^ c)
            .collect();
        Ok(EncryptedWatermark {
            width: w.width,
            height: w.height,
            bits,
        })
    }

    pub fn decrypt(&self, e: &EncryptedWatermark) -> Result<WatermarkBits> {
        self.check(e.width, e.height, e.bits.len())?;
        Ok(WatermarkBits {
            width: e.width,
            height: e.height,
            bits: self.decrypt_bits(&e.bits),
        })
    }

    pub(crate) fn decrypt_bits(&self, bits: &[u8]) -> Vec<u8> {
        self.forward
            .iter()
            .map(|&slot| bits[slot] ^ self.keystream[slot])
            .collect()
    }
}

pub fn encrypt(w: &WatermarkBits, key: &SecretKey) -> Result<EncryptedWatermark> {
    Cipher::new(key)?.encrypt(w)
}

pub fn decrypt(e: &EncryptedWatermark, key: &SecretKey) -> Result<WatermarkBits> {
    Cipher::new(key)?.decrypt(e)
}
