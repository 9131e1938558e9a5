//! Generalized Arnold cat map on the integer torus `Z_N × Z_N`:
//! `(x, y) ← (a·x + b·y, c·x + d·y) mod N` with `a·d − b·c = 1`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Matrix entries and iteration count; the modulus is chosen per use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatKey {
    pub a: u64,
    pub b: u64,
    pub c: u64,
    pub d: u64,
    pub n_iter: u64,
}

impl CatKey {
    /// The classic matrix `[[1, 1], [1, 2]]`.
    pub const ARNOLD: CatKey = CatKey {
        a: 1,
        b: 1,
        c: 1,
        d: 2,
        n_iter: 1,
    };

    pub fn validate(&self) -> Result<()> {
        if self.a == 0 || self.b == 0 || self.c == 0 || self.d == 0 {
            return Err(Error::InvalidParameter(
                "cat map entries must be positive".into(),
            ));
        }
        let det = self.a as i128 * self.d as i128 - self.b as i128 * self.c as i128;
        if det != 1 {
            return Err(Error::InvalidParameter(format!(
                "cat map determinant is {det}, must be 1"
            )));
        }
        if self.n_iter == 0 {
            return Err(Error::InvalidParameter("n_iter must be at least 1".into()));
        }
        Ok(())
    }

    pub fn with_modulus(&self, modulus: u64) -> Result<CatMapParams> {
        CatMapParams::new(*self, modulus)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CatMapParams {
    pub key: CatKey,
    pub modulus: u64,
}

type Mat = [[u64; 2]; 2];

fn mat_mul(p: &Mat, q: &Mat, n: u64) -> Mat {
    let n = n as u128;
    let e = |i: usize, j: usize| {
        ((p[i][0] as u128 * q[0][j] as u128 + p[i][1] as u128 * q[1][j] as u128) % n) as u64
    };
    [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]]
}

fn mat_pow(m: &Mat, mut exp: u64, n: u64) -> Mat {
    let mut result = [[1 % n, 0], [0, 1 % n]];
    let mut base = *m;
    while exp > 0 {
        if exp & 1 == 1 {
            result = mat_mul(&result, &base, n);
        }
        base = mat_mul(&base, &base, n);
        exp >>= 1;
    }
    result
}

impl CatMapParams {
    pub fn new(key: CatKey, modulus: u64) -> Result<Self> {
        key.validate()?;
        if modulus < 2 {
            return Err(Error::InvalidParameter(format!(
                "modulus {modulus} must be at least 2"
            )));
        }
        Ok(Self { key, modulus })
    }

    fn matrix(&self) -> Mat {
        let n = self.modulus;
        [
            [self.key.a % n, self.key.b % n],
            [self.key.c % n, self.key.d % n],
        ]
    }

    fn check(&self, x: u64, y: u64) -> Result<()> {
        if x >= self.modulus || y >= self.modulus {
            return Err(Error::CoordinateOutOfRange {
                x,
                y,
                modulus: self.modulus,
            });
        }
        Ok(())
    }

    /// One application of the matrix, ignoring `n_iter`.
    #[inline]
    pub fn step(&self, x: u64, y: u64) -> (u64, u64) {
        let n = self.modulus as u128;
        let (x, y) = (x as u128, y as u128);
        let k = &self.key;
        (
            ((k.a as u128 * x + k.b as u128 * y) % n) as u64,
            ((k.c as u128 * x + k.d as u128 * y) % n) as u64,
        )
    }

    /// Precomputes `A^n_iter mod N` for repeated application.
    pub fn compile(&self) -> CompiledCatMap {
        CompiledCatMap {
            m: mat_pow(&self.matrix(), self.key.n_iter, self.modulus),
            modulus: self.modulus,
        }
    }
}

/// The map raised to its iteration count, ready to apply in O(1).
#[derive(Debug, Clone, Copy)]
pub struct CompiledCatMap {
    m: Mat,
    modulus: u64,
}

impl CompiledCatMap {
    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn apply(&self, x: u64, y: u64) -> Result<(u64, u64)> {
        if x >= self.modulus || y >= self.modulus {
            return Err(Error::CoordinateOutOfRange {
                x,
                y,
                modulus: self.modulus,
            });
        }
        let p = mat_mul(&self.m, &[[x, 0], [y, 0]], self.modulus);
        Ok((p[0][0], p[1][0]))
    }
}

/// Applies the map `n_iter` times to `(x, y)`.
pub fn cat_map_apply(p: &CatMapParams, x: u64, y: u64) -> Result<(u64, u64)> {
    p.check(x, y)?;
    p.compile().apply(x, y)
}

/// Smallest `k >= 1` such that `k` single steps return `(x, y)` to itself.
pub fn cat_map_period(p: &CatMapParams, x: u64, y: u64) -> Result<u64> {
    p.check(x, y)?;
    let (mut cx, mut cy) = p.step(x, y);
    let mut k = 1;
    while (cx, cy) != (x, y) {
        (cx, cy) = p.step(cx, cy);
        k += 1;
    }
    Ok(k)
}

/// Smallest `k >= 1` with `A^k ≡ I (mod N)`: every point period divides it.
pub fn cat_map_order(p: &CatMapParams) -> u64 {
    let a = p.matrix();
    let id = mat_pow(&a, 0, p.modulus);
    let mut m = a;
    let mut k = 1;
    while m != id {
        m = mat_mul(&m, &a, p.modulus);
        k += 1;
    }
    k
}

/// Orbit period distribution over the whole `N × N` grid.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PeriodReport {
    pub modulus: u64,
    pub min: u64,
    pub max: u64,
    pub order: u64,
    /// period → number of grid points with that period
    pub histogram: BTreeMap<u64, u64>,
}

impl PeriodReport {
    /// Fraction of grid points whose period divides `n_iter`; those points
    /// are left exactly where they started.
    pub fn fixed_fraction(&self, n_iter: u64) -> f64 {
        let total: u64 = self.histogram.values().sum();
        let fixed: u64 = self
            .histogram
            .iter()
            .filter(|(&period, _)| n_iter.is_multiple_of(period))
            .map(|(_, &count)| count)
            .sum();
        fixed as f64 / total as f64
    }
}

pub fn period_report(p: &CatMapParams) -> PeriodReport {
    let n = p.modulus;
    let mut histogram = BTreeMap::new();
    // Points on the same orbit share a period, so each orbit is walked once.
    let mut visited = vec![false; (n * n) as usize];
    for y in 0..n {
        for x in 0..n {
            if visited[(y * n + x) as usize] {
                continue;
            }
            let mut orbit = vec![(x, y)];
            let (mut cx, mut cy) = p.step(x, y);
            while (cx, cy) != (x, y) {
                orbit.push((cx, cy));
                (cx, cy) = p.step(cx, cy);
            }
            for &(ox, oy) in &orbit {
                visited[(oy * n + ox) as usize] = true;
            }
            *histogram.entry(orbit.len() as u64).or_insert(0) += orbit.len() as u64;
        }
    }
    PeriodReport {
        modulus: n,
        min: *histogram.keys().next().unwrap_or(&1),
        max: *histogram.keys().next_back().unwrap_or(&1),
        order: cat_map_order(p),
        histogram,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn arnold(n: u64, iters: u64) -> CatMapParams {
        CatKey {
            n_iter: iters,
            ..CatKey::ARNOLD
        }
        .with_modulus(n)
        .unwrap()
    }

    #[test]
    fn one_step_by_hand() {
        // (1 + 1, 1 + 2) mod 4
        assert_eq!(cat_map_apply(&arnold(4, 1), 1, 1).unwrap(), (2, 3));
    }

    #[test]
    fn small_orbit() {
        let p = arnold(2, 3);
        assert_eq!(cat_map_apply(&p, 1, 0).unwrap(), (1, 0));
        assert_eq!(p.step(1, 0), (1, 1));
        assert_eq!(p.step(1, 1), (0, 1));
        assert_eq!(p.step(0, 1), (1, 0));
        assert_eq!(cat_map_period(&p, 1, 0).unwrap(), 3);
    }

    #[test]
    fn origin_fixed() {
        let p = CatKey {
            a: 3,
            b: 2,
            c: 4,
            d: 3,
            n_iter: 17,
        }
        .with_modulus(37)
        .unwrap();
        assert_eq!(cat_map_apply(&p, 0, 0).unwrap(), (0, 0));
        assert_eq!(cat_map_period(&p, 0, 0).unwrap(), 1);
    }

    #[test]
    fn period_mod_five_matches_walk() {
        let p = arnold(5, 1);
        let mut walk = 0;
        let mut pt = (1, 0);
        loop {
            pt = p.step(pt.0, pt.1);
            walk += 1;
            if pt == (1, 0) {
                break;
            }
            assert!(walk <= 25);
        }
        assert_eq!(cat_map_period(&p, 1, 0).unwrap(), walk);
        // Arnold's map has order 10 mod 5; (1, 0) realizes it.
        assert_eq!(walk, 10);
    }

    #[test]
    fn rejects_bad_params() {
        let bad = CatKey {
            a: 2,
            b: 1,
            c: 1,
            d: 2,
            n_iter: 1,
        };
        assert!(bad.with_modulus(8).is_err());
        assert!(CatKey::ARNOLD.with_modulus(1).is_err());
        assert!(CatKey {
            n_iter: 0,
            ..CatKey::ARNOLD
        }
        .with_modulus(8)
        .is_err());
        assert!(matches!(
            cat_map_apply(&arnold(4, 1), 4, 0),
            Err(Error::CoordinateOutOfRange { .. })
        ));
    }

    #[test]
    fn period_histogram_mod_two() {
        let r = period_report(&arnold(2, 1));
        assert_eq!(r.histogram, BTreeMap::from([(1, 1), (3, 3)]));
        assert_eq!((r.min, r.max, r.order), (1, 3, 3));
        assert_eq!(r.fixed_fraction(3), 1.0);
        assert_eq!(r.fixed_fraction(1), 0.25);
    }

    #[test]
    fn large_values_do_not_overflow() {
        let p = CatKey {
            a: 1,
            b: u32::MAX as u64,
            c: 1,
            d: u32::MAX as u64 + 1,
            n_iter: 1_000_000_007,
        }
        .with_modulus(u32::MAX as u64)
        .unwrap();
        let (x, y) = cat_map_apply(&p, 12345, 67890).unwrap();
        assert!(x < p.modulus && y < p.modulus);
    }
}
