//! Blind multi-stage image watermarking driven by chaotic maps.
//!
//! A binary watermark is permuted and XOR-encrypted with a logistic-map
//! keystream, then written 81 times into the host's low bit-planes at
//! cat-map-scrambled positions across three grid densities. Extraction
//! decrypts every copy and majority-votes each bit.
//!
//! ```
//! use stagemark::{corpus, embed, extract, SecretKey};
//!
//! let host = corpus::synthetic_host(1, 256, 256);
//! let wm = corpus::glyph_watermark(1, 32);
//! let key = SecretKey::generate(7, 32).unwrap();
//! let marked = embed(&host, &wm, &key).unwrap();
//! assert_eq!(extract(&marked.image, &key).unwrap(), wm);
//! ```

pub mod attacks;
pub mod chaos;
pub mod corpus;
pub mod error;
pub mod evaluation;
pub mod imageio;
pub mod metrics;
pub mod signal;
pub mod staging;
pub mod wavelet;

pub use attacks::{apply_attack, Attack};
pub use chaos::{CatKey, CatMapParams, LogisticParams, SecretKey};
pub use error::{Error, Result};
pub use evaluation::{evaluate, EvaluationRun};
pub use imageio::{read_image, to_binary, write_image, BinaryImage, RasterImage};
pub use metrics::{ber, nc, psnr, EvaluationReport, Psnr};
pub use staging::{detect, embed, extract, plan_stages, Detection, StagePlan, WatermarkedImage};
pub use wavelet::{decompose, reconstruct, self_watermark, WaveletPyramid};
