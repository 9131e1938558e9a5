//! Logistic-map sequences `z ← μ·z·(1 − z)`, their binarization, and the
//! rank-based keyed permutation built on top of them.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Lower bound of the chaotic regime (exclusive).
pub const CHAOS_THRESHOLD: f64 = 3.5699456;

/// Iterates discarded before output when no explicit value is given.
pub const DEFAULT_BURN_IN: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogisticParams {
    pub mu: f64,
    pub z0: f64,
    pub burn_in: usize,
}

impl LogisticParams {
    pub fn new(mu: f64, z0: f64, burn_in: usize) -> Result<Self> {
        let p = Self { mu, z0, burn_in };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.mu > CHAOS_THRESHOLD && self.mu <= 4.0) {
            return Err(Error::InvalidParameter(format!(
                "mu = {} outside chaotic range ({CHAOS_THRESHOLD}, 4]",
                self.mu
            )));
        }
        if !(self.z0 > 0.0 && self.z0 < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "z0 = {} outside (0, 1)",
                self.z0
            )));
        }
        Ok(())
    }

    /// Same map with `z0` shifted by `delta` and wrapped back into (0, 1).
    pub fn shifted(&self, delta: f64) -> Self {
        let mut z = (self.z0 + delta).rem_euclid(1.0);
        if z == 0.0 {
            z = f64::EPSILON;
        }
        Self { z0: z, ..*self }
    }
}

/// Returns `Z_{burn_in+1} ..= Z_{burn_in+count}`.
///
/// Fails if any iterate (including `z0`) leaves (0, 1) or repeats an
/// earlier iterate bit-for-bit, which means the orbit has collapsed onto a
/// fixed point or a cycle.
pub fn logistic_sequence(p: &LogisticParams, count: usize) -> Result<Vec<f64>> {
    p.validate()?;
    if count == 0 {
        return Err(Error::InvalidParameter("count must be at least 1".into()));
    }
    let total = p.burn_in + count;
    let mut seen = HashSet::with_capacity(total + 1);
    seen.insert(p.z0.to_bits());
    let mut out = Vec::with_capacity(count);
    let mut z = p.z0;
    for k in 1..=total {
        z = p.mu * z * (1.0 - z);
        if !(z > 0.0 && z < 1.0) {
            return Err(Error::DegenerateOrbit {
                index: k,
                reason: format!("iterate {z} left (0, 1)"),
            });
        }
        if !seen.insert(z.to_bits()) {
            return Err(Error::DegenerateOrbit {
                index: k,
                reason: format!("iterate {z} repeats an earlier value"),
            });
        }
        if k > p.burn_in {
            out.push(z);
        }
    }
    Ok(out)
}

/// Binarizes a real sequence: `z >= 0.5` maps to 1.
pub fn binarize(values: &[f64]) -> Vec<u8> {
    values.iter().map(|&z| u8::from(z >= 0.5)).collect()
}

pub fn logistic_bits(p: &LogisticParams, count: usize) -> Result<Vec<u8>> {
    logistic_sequence(p, count).map(|s| binarize(&s))
}

/// `out[i]` is the rank of `values[i]` in ascending order, ties broken by
/// index. The result is always a permutation of `0..values.len()`.
pub fn rank_permutation(values: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&i, &j| values[i].total_cmp(&values[j]).then(i.cmp(&j)));
    let mut ranks = vec![0; values.len()];
    for (rank, &i) in order.iter().enumerate() {
        ranks[i] = rank;
    }
    ranks
}

pub fn keyed_permutation(p: &LogisticParams, length: usize) -> Result<Vec<usize>> {
    logistic_sequence(p, length).map(|s| rank_permutation(&s))
}

/// Inverse of a permutation given as `forward[i] = σ(i)`.
pub fn invert_permutation(forward: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; forward.len()];
    for (i, &s) in forward.iter().enumerate() {
        inv[s] = i;
    }
    inv
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Straight iteration of the recurrence, no checks.
    fn oracle(mu: f64, z0: f64, n: usize) -> Vec<f64> {
        let mut z = z0;
        (0..n)
            .map(|_| {
                z = mu * z * (1.0 - z);
                z
            })
            .collect()
    }

    #[test]
    fn hand_iterates() {
        let p = LogisticParams::new(4.0, 0.3, 0).unwrap();
        let s = logistic_sequence(&p, 2).unwrap();
        assert!((s[0] - 0.84).abs() < 1e-12);
        assert!((s[1] - 0.5376).abs() < 1e-12);
        assert_eq!(s, oracle(4.0, 0.3, 2));
    }

    #[test]
    fn bits_from_oracle() {
        let expected = binarize(&oracle(4.0, 0.3, 3));
        // 0.84, 0.5376, 0.99434496
        assert_eq!(expected, vec![1, 1, 1]);
        let p = LogisticParams::new(4.0, 0.3, 0).unwrap();
        assert_eq!(logistic_bits(&p, 3).unwrap(), expected);
    }

    #[test]
    fn binarize_tie_goes_to_one() {
        assert_eq!(binarize(&[0.84, 0.5376, 0.3]), vec![1, 1, 0]);
        assert_eq!(binarize(&[0.5]), vec![1]);
    }

    #[test]
    fn fixed_point_is_degenerate() {
        let p = LogisticParams::new(4.0, 0.75, 0).unwrap();
        assert!(matches!(
            logistic_sequence(&p, 2),
            Err(Error::DegenerateOrbit { index: 1, .. })
        ));
    }

    #[test]
    fn escape_is_degenerate() {
        // 0.5 -> 1.0 leaves the open interval.
        let p = LogisticParams::new(4.0, 0.5, 0).unwrap();
        assert!(matches!(
            logistic_sequence(&p, 3),
            Err(Error::DegenerateOrbit { index: 1, .. })
        ));
    }

    #[test]
    fn parameter_ranges() {
        assert!(LogisticParams::new(3.5, 0.3, 0).is_err());
        assert!(LogisticParams::new(CHAOS_THRESHOLD, 0.3, 0).is_err());
        assert!(LogisticParams::new(4.0001, 0.3, 0).is_err());
        assert!(LogisticParams::new(3.9, 0.0, 0).is_err());
        assert!(LogisticParams::new(3.9, 1.0, 0).is_err());
        assert!(LogisticParams::new(3.9, f64::NAN, 0).is_err());
        let p = LogisticParams::new(3.9, 0.3, 0).unwrap();
        assert!(logistic_sequence(&p, 0).is_err());
    }

    #[test]
    fn burn_in_skips_prefix() {
        let p = LogisticParams::new(3.99, 0.123, 5).unwrap();
        let s = logistic_sequence(&p, 4).unwrap();
        assert_eq!(s, oracle(3.99, 0.123, 9)[5..].to_vec());
    }

    #[test]
    fn rank_example() {
        assert_eq!(rank_permutation(&[0.3, 0.1, 0.9]), vec![1, 0, 2]);
        assert_eq!(rank_permutation(&[0.5, 0.5, 0.1]), vec![1, 2, 0]);
        let p = LogisticParams::new(3.9, 0.3, 10).unwrap();
        assert_eq!(keyed_permutation(&p, 1).unwrap(), vec![0]);
    }

    #[test]
    fn stays_in_unit_interval_long_run() {
        for &(mu, z0) in &[(4.0, 0.2718), (3.99, 0.61), (3.7, 0.4), (3.58, 0.35)] {
            let p = LogisticParams::new(mu, z0, DEFAULT_BURN_IN).unwrap();
            match logistic_sequence(&p, 100_000) {
                Ok(s) => assert!(s.iter().all(|&z| z > 0.0 && z < 1.0)),
                Err(Error::DegenerateOrbit { .. }) => {}
                Err(e) => panic!("unexpected {e}"),
            }
        }
    }

    #[test]
    fn shifted_wraps() {
        let p = LogisticParams::new(3.9, 0.95, 0).unwrap();
        let q = p.shifted(0.1);
        assert!((q.z0 - 0.05).abs() < 1e-12);
        assert!(q.validate().is_ok());
    }
}
