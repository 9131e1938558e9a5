//! The secret key and its `key = value` text format.

use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::catmap::CatKey;
use super::logistic::{logistic_sequence, LogisticParams, DEFAULT_BURN_IN};
use crate::error::{Error, Result};

/// Everything needed to embed or extract: cipher and plane-selection
/// logistic parameters, the cat-map matrix with its iteration count, and
/// the watermark dimensions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SecretKey {
    pub cipher: LogisticParams,
    /// Reserved for keyed bit-plane selection; not used by the fixed
    /// per-stage channel layout.
    pub plane_seed: LogisticParams,
    pub cat: CatKey,
    pub wm_width: usize,
    pub wm_height: usize,
}

const FIELDS: [&str; 13] = [
    "cipher.mu",
    "cipher.z0",
    "cipher.burn_in",
    "plane.mu",
    "plane.z0",
    "plane.burn_in",
    "cat.a",
    "cat.b",
    "cat.c",
    "cat.d",
    "cat.n_iter",
    "wm.width",
    "wm.height",
];

impl SecretKey {
    pub fn validate(&self) -> Result<()> {
        self.cipher.validate()?;
        self.plane_seed.validate()?;
        self.cat.validate()?;
        if self.wm_width == 0 || self.wm_height == 0 {
            return Err(Error::InvalidParameter(
                "watermark dimensions must be positive".into(),
            ));
        }
        if self.wm_width != self.wm_height {
            return Err(Error::InvalidParameter(format!(
                "watermark must be square, got {}x{}",
                self.wm_width, self.wm_height
            )));
        }
        Ok(())
    }

    pub fn wm_len(&self) -> usize {
        self.wm_width * self.wm_height
    }

    /// Parameters of the permutation stream: the cipher map with `z0`
    /// shifted by 0.1 so that permutation and keystream are decorrelated.
    pub fn permutation_params(&self) -> LogisticParams {
        self.cipher.shifted(0.1)
    }

    /// Deterministically draws a valid key for a `side × side` watermark.
    ///
    /// `mu` is drawn from [3.95, 4.0) and every candidate logistic stream
    /// is test-run so keys with collapsing orbits are never emitted.
    pub fn generate(seed: u64, side: usize) -> Result<Self> {
        if side == 0 {
            return Err(Error::InvalidParameter(
                "watermark side must be positive".into(),
            ));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let probe_len = (side * side).max(4096) * 2;
        let draw = |rng: &mut ChaCha8Rng| loop {
            let p = LogisticParams {
                mu: rng.gen_range(3.95..4.0),
                z0: rng.gen_range(0.01..0.99),
                burn_in: DEFAULT_BURN_IN,
            };
            if logistic_sequence(&p, probe_len).is_ok()
                && logistic_sequence(&p.shifted(0.1), probe_len).is_ok()
            {
                break p;
            }
        };
        let cipher = draw(&mut rng);
        let plane_seed = draw(&mut rng);
        let b = rng.gen_range(1..=8u64);
        let c = rng.gen_range(1..=8u64);
        let cat = CatKey {
            a: 1,
            b,
            c,
            d: 1 + b * c,
            n_iter: rng.gen_range(8..=32),
        };
        let key = Self {
            cipher,
            plane_seed,
            cat,
            wm_width: side,
            wm_height: side,
        };
        key.validate()?;
        Ok(key)
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let mut line = |k: &str, v: String| {
            let _ = writeln!(s, "{k} = {v}");
        };
        line("cipher.mu", self.cipher.mu.to_string());
        line("cipher.z0", self.cipher.z0.to_string());
        line("cipher.burn_in", self.cipher.burn_in.to_string());
        line("plane.mu", self.plane_seed.mu.to_string());
        line("plane.z0", self.plane_seed.z0.to_string());
        line("plane.burn_in", self.plane_seed.burn_in.to_string());
        line("cat.a", self.cat.a.to_string());
        line("cat.b", self.cat.b.to_string());
        line("cat.c", self.cat.c.to_string());
        line("cat.d", self.cat.d.to_string());
        line("cat.n_iter", self.cat.n_iter.to_string());
        line("wm.width", self.wm_width.to_string());
        line("wm.height", self.wm_height.to_string());
        s
    }

    /// Parses the `key = value` format. Blank lines and `#` comments are
    /// allowed; unknown, duplicate or missing keys are errors.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut values: [Option<&str>; 13] = [None; 13];
        for (n, raw) in text.lines().enumerate() {
            let line_no = n + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| Error::KeyFile {
                line: line_no,
                reason: "expected `key = value`".into(),
            })?;
            let (k, v) = (k.trim(), v.trim());
            let slot = FIELDS
                .iter()
                .position(|&f| f == k)
                .ok_or_else(|| Error::KeyFile {
                    line: line_no,
                    reason: format!("unknown key `{k}`"),
                })?;
            if values[slot].replace(v).is_some() {
                return Err(Error::KeyFile {
                    line: line_no,
                    reason: format!("duplicate key `{k}`"),
                });
            }
        }
        if let Some(i) = values.iter().position(Option::is_none) {
            return Err(Error::KeyFile {
                line: text.lines().count(),
                reason: format!("missing key `{}`", FIELDS[i]),
            });
        }
        fn get<T: std::str::FromStr>(values: &[Option<&str>; 13], i: usize) -> Result<T> {
            let raw = values[i].unwrap_or_default();
            raw.parse().map_err(|_| Error::KeyFile {
                line: 0,
                reason: format!("bad value `{raw}` for `{}`", FIELDS[i]),
            })
        }
        let key = Self {
            cipher: LogisticParams {
                mu: get(&values, 0)?,
                z0: get(&values, 1)?,
                burn_in: get(&values, 2)?,
            },
            plane_seed: LogisticParams {
                mu: get(&values, 3)?,
                z0: get(&values, 4)?,
                burn_in: get(&values, 5)?,
            },
            cat: CatKey {
                a: get(&values, 6)?,
                b: get(&values, 7)?,
                c: get(&values, 8)?,
                d: get(&values, 9)?,
                n_iter: get(&values, 10)?,
            },
            wm_width: get(&values, 11)?,
            wm_height: get(&values, 12)?,
        };
        key.validate()?;
        Ok(key)
    }
}
