use std::collections::HashSet;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use stagemark::chaos::{
    cat_map_apply, cat_map_order, cat_map_period, keyed_permutation, logistic_bits,
    logistic_sequence, period_report, CatKey, LogisticParams,
};
use stagemark::corpus::{glyph_watermark, noise_image, random_watermark, synthetic_host};
use stagemark::signal::{decrypt, encrypt, Cipher, WatermarkBits};
use stagemark::staging::extract_copies;
use stagemark::{
    apply_attack, ber, embed, extract, nc, psnr, read_image, self_watermark, write_image, Attack,
    BinaryImage, RasterImage, SecretKey,
};

fn raster() -> impl Strategy<Value = RasterImage> {
    (1usize..12, 1usize..12, prop_oneof![Just(1usize), Just(3usize)]).prop_flat_map(|(w, h, c)| {
        proptest::collection::vec(any::<u8>(), w * h * c)
            .prop_map(move |s| RasterImage::new(w, h, c, s).unwrap())
    })
}

fn cat_key() -> impl Strategy<Value = CatKey> {
    (1u64..10, 1u64..10, 1u64..40).prop_map(|(b, c, n)| CatKey {
        a: 1,
        b,
        c,
        d: 1 + b * c,
        n_iter: n,
    })
}

proptest! {
    #[test]
    fn netpbm_round_trip(img in raster()) {
        prop_assert_eq!(read_image(&write_image(&img)).unwrap(), img);
    }

    #[test]
    fn parser_ignores_bytes_past_declared_size(img in raster(), extra in proptest::collection::vec(any::<u8>(), 0..8)) {
        let mut bytes = write_image(&img);
        bytes.extend(extra);
        prop_assert_eq!(read_image(&bytes).unwrap(), img);
    }

    #[test]
    fn cat_map_semigroup(key in cat_key(), m in 1u64..30, n in 2u64..40, x in 0u64..1000, y in 0u64..1000) {
        let (x, y) = (x % n, y % n);
        let first = CatKey { n_iter: key.n_iter, ..key }.with_modulus(n).unwrap();
        let second = CatKey { n_iter: m, ..key }.with_modulus(n).unwrap();
        let both = CatKey { n_iter: key.n_iter + m, ..key }.with_modulus(n).unwrap();
        let (x1, y1) = cat_map_apply(&first, x, y).unwrap();
        prop_assert_eq!(cat_map_apply(&second, x1, y1).unwrap(), cat_map_apply(&both, x, y).unwrap());
    }

    #[test]
    fn keyed_permutation_is_bijection(mu in 3.6f64..4.0, z0 in 0.01f64..0.99, len in 1usize..600) {
        let p = LogisticParams::new(mu, z0, 50).unwrap();
        if let Ok(perm) = keyed_permutation(&p, len) {
            let mut sorted = perm.clone();
            sorted.sort_unstable();
            prop_assert_eq!(sorted, (0..len).collect::<Vec<_>>());
        }
    }

    #[test]
    fn encrypt_is_bijective_per_key(seed in 0u64..200, a in any::<u64>(), b in any::<u64>()) {
        let key = SecretKey::generate(seed, 8).unwrap();
        let wa = random_watermark(a, 8);
        let wb = random_watermark(b, 8);
        let to_bits = |w: &BinaryImage| WatermarkBits { width: 8, height: 8, bits: w.bits().to_vec() };
        let ea = encrypt(&to_bits(&wa), &key).unwrap();
        let eb = encrypt(&to_bits(&wb), &key).unwrap();
        prop_assert_eq!(wa == wb, ea == eb);
        prop_assert_eq!(decrypt(&ea, &key).unwrap().bits, wa.bits().to_vec());
    }

    #[test]
    fn psnr_symmetric(a in raster(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let samples = a.samples().iter().map(|_| rng.gen()).collect();
        let b = RasterImage::new(a.width(), a.height(), a.channels(), samples).unwrap();
        prop_assert_eq!(psnr(&a, &b).unwrap(), psnr(&b, &a).unwrap());
    }

    #[test]
    fn ber_is_a_metric(len in 1usize..200, s1 in any::<u64>(), s2 in any::<u64>(), s3 in any::<u64>()) {
        let gen = |s: u64| {
            let mut rng = ChaCha8Rng::seed_from_u64(s);
            BinaryImage::new(len, 1, (0..len).map(|_| rng.gen_range(0..2)).collect()).unwrap()
        };
        let (a, b, c) = (gen(s1), gen(s2), gen(s3));
        prop_assert_eq!(ber(&a, &a).unwrap(), 0.0);
        prop_assert_eq!(ber(&a, &b).unwrap(), ber(&b, &a).unwrap());
        prop_assert!(ber(&a, &c).unwrap() <= ber(&a, &b).unwrap() + ber(&b, &c).unwrap() + 1e-12);
        if a.bits().contains(&1) {
            prop_assert_eq!(nc(&a, &a).unwrap(), 1.0);
        }
    }

    #[test]
    fn attacks_preserve_shape_and_are_deterministic(img in raster(), seed in any::<u64>(), k in 0usize..3) {
        let window = 3 + 2 * k;
        let attacks = [
            Attack::Mean { window },
            Attack::Median { window },
            Attack::Highpass { window },
            Attack::SaltPepper { density: 0.3, seed },
            Attack::Scale { factor: 1.0 },
        ];
        for a in &attacks {
            let out = apply_attack(&img, a).unwrap();
            prop_assert!(out.same_shape(&img));
            prop_assert_eq!(out, apply_attack(&img, a).unwrap());
        }
    }
}

#[test]
fn cat_map_is_injective_on_full_grid() {
    let keys = [
        CatKey::ARNOLD,
        CatKey { a: 2, b: 1, c: 1, d: 1, n_iter: 5 },
        CatKey { a: 1, b: 3, c: 2, d: 7, n_iter: 13 },
    ];
    for key in keys {
        for n in 2..=64u64 {
            let p = key.with_modulus(n).unwrap();
            let mut seen = HashSet::new();
            for y in 0..n {
                for x in 0..n {
                    seen.insert(cat_map_apply(&p, x, y).unwrap());
                }
            }
            assert_eq!(seen.len() as u64, n * n, "{key:?} mod {n}");
        }
    }
}

#[test]
fn point_period_divides_map_order() {
    for n in 2..=16u64 {
        for key in [CatKey::ARNOLD, CatKey { a: 1, b: 2, c: 3, d: 7, n_iter: 1 }] {
            let p = key.with_modulus(n).unwrap();
            // Order by brute force: iterate the whole grid until it returns.
            let mut order = 1;
            'search: loop {
                for y in 0..n {
                    for x in 0..n {
                        let q = CatKey { n_iter: order, ..key }.with_modulus(n).unwrap();
                        if cat_map_apply(&q, x, y).unwrap() != (x, y) {
                            order += 1;
                            continue 'search;
                        }
                    }
                }
                break;
            }
            assert_eq!(cat_map_order(&p), order);
            for y in 0..n {
                for x in 0..n {
                    assert_eq!(order % cat_map_period(&p, x, y).unwrap(), 0);
                }
            }
        }
    }
}

#[test]
fn arnold_mod_two_periods() {
    let r = period_report(&CatKey::ARNOLD.with_modulus(2).unwrap());
    assert_eq!(r.histogram.get(&1), Some(&1));
    assert_eq!(r.histogram.get(&3), Some(&3));
}

#[test]
fn logistic_values_stay_in_unit_interval() {
    for seed in 0..5 {
        let k = SecretKey::generate(seed, 32).unwrap();
        let s = logistic_sequence(&k.cipher, 100_000).unwrap();
        assert!(s.iter().all(|&z| z > 0.0 && z < 1.0));
    }
}

#[test]
fn encrypted_bits_are_balanced() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for seed in 0..10 {
        let key = SecretKey::generate(seed, 64).unwrap();
        let bits: Vec<u8> = (0..4096).map(|_| rng.gen_range(0..2)).collect();
        let e = encrypt(&WatermarkBits { width: 64, height: 64, bits }, &key).unwrap();
        let ones = e.bits.iter().filter(|&&b| b == 1).count() as f64 / 4096.0;
        assert!((0.45..=0.55).contains(&ones), "seed {seed}: {ones}");
    }
}

#[test]
fn keystream_sensitive_to_tenth_decimal() {
    for seed in 0..10 {
        let key = SecretKey::generate(seed, 64).unwrap();
        let a = logistic_bits(&key.cipher, 4096).unwrap();
        let b = logistic_bits(&key.cipher.shifted(1e-10), 4096).unwrap();
        let diff = a.iter().zip(&b).filter(|(x, y)| x != y).count() as f64 / 4096.0;
        assert!(diff >= 0.3, "seed {seed}: {diff}");
    }
}

#[test]
fn decrypt_inverts_encrypt_on_random_pairs() {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    for seed in 0..200 {
        let side = rng.gen_range(1..40);
        let key = SecretKey::generate(seed, side).unwrap();
        let w = WatermarkBits {
            width: side,
            height: side,
            bits: (0..side * side).map(|_| rng.gen_range(0..2)).collect(),
        };
        let c = Cipher::new(&key).unwrap();
        assert_eq!(c.decrypt(&c.encrypt(&w).unwrap()).unwrap(), w);
    }
}

#[test]
fn extraction_from_unmarked_noise_has_no_structure() {
    for seed in 0..10 {
        let img = noise_image(seed, 512, 512, 3);
        let key = SecretKey::generate(seed + 500, 32).unwrap();
        let out = extract(&img, &key).unwrap();
        let ones = out.bits().iter().filter(|&&b| b == 1).count() as f64 / 1024.0;
        assert!((0.4..=0.6).contains(&ones), "seed {seed}: {ones}");
        let wm = glyph_watermark(seed, 32);
        assert!(nc(&wm, &out).unwrap() < 0.75);
    }
}

#[test]
fn wrong_key_in_eighth_decimal_breaks_extraction() {
    for seed in 0..10 {
        let host = synthetic_host(seed, 512, 512);
        let wm = glyph_watermark(seed, 32);
        let key = SecretKey::generate(seed, 32).unwrap();
        let marked = embed(&host, &wm, &key).unwrap().image;
        let mut wrong = key;
        wrong.cipher = key.cipher.shifted(1e-8);
        assert!(ber(&wm, &extract(&marked, &wrong).unwrap()).unwrap() >= 0.3);
    }
}

fn clear_lsb(img: &mut RasterImage, channel: usize) {
    for y in 0..img.height() {
        for x in 0..img.width() {
            let v = img.get(x, y, channel);
            img.set(x, y, channel, v & !1);
        }
    }
}

#[test]
fn stage_one_copy_survives_when_later_stages_are_wiped() {
    let host = synthetic_host(5, 512, 512);
    let wm = glyph_watermark(5, 32);
    let key = SecretKey::generate(5, 32).unwrap();
    let mut img = embed(&host, &wm, &key).unwrap().image;
    clear_lsb(&mut img, 1);
    clear_lsb(&mut img, 2);
    let copies = extract_copies(&img, &key).unwrap();
    let stage1 = copies.iter().find(|c| c.stage == 1).unwrap();
    let recovered = BinaryImage::new(32, 32, stage1.bits.clone()).unwrap();
    assert!(nc(&wm, &recovered).unwrap() >= 0.9);
    assert_eq!(recovered, wm);
}

#[test]
fn wiping_stage_one_leaves_majority_intact() {
    let host = synthetic_host(6, 512, 512);
    let wm = glyph_watermark(6, 32);
    let key = SecretKey::generate(6, 32).unwrap();
    let mut img = embed(&host, &wm, &key).unwrap().image;
    clear_lsb(&mut img, 0);
    assert_eq!(ber(&wm, &extract(&img, &key).unwrap()).unwrap(), 0.0);
}

#[test]
fn imperceptibility_bound_on_gray_hosts() {
    let host = synthetic_host(8, 512, 512).to_gray();
    let key = SecretKey::generate(8, 32).unwrap();
    let marked = embed(&host, &glyph_watermark(8, 32), &key).unwrap().image;
    assert!(psnr(&host, &marked).unwrap().db() >= 31.3);
}

/// A pixel counts as restored when every channel of the filtered value lies
/// within the range of the clean image's 3×3 neighbourhood, i.e. it is no
/// longer an impulse.
#[test]
fn median_cleans_light_salt_and_pepper() {
    for seed in 0..5 {
        let clean = synthetic_host(seed, 256, 256);
        let noisy = apply_attack(&clean, &Attack::SaltPepper { density: 0.05, seed }).unwrap();
        let filtered = apply_attack(&noisy, &Attack::Median { window: 3 }).unwrap();
        let mut restored = 0;
        for y in 0..256usize {
            for x in 0..256usize {
                let ok = (0..3).all(|c| {
                    let mut lo = u8::MAX;
                    let mut hi = u8::MIN;
                    for yy in y.saturating_sub(1)..=(y + 1).min(255) {
                        for xx in x.saturating_sub(1)..=(x + 1).min(255) {
                            lo = lo.min(clean.get(xx, yy, c));
                            hi = hi.max(clean.get(xx, yy, c));
                        }
                    }
                    (lo..=hi).contains(&filtered.get(x, y, c))
                });
                restored += ok as usize;
            }
        }
        let fraction = restored as f64 / (256.0 * 256.0);
        assert!(fraction >= 0.99, "seed {seed}: {fraction}");
    }
}

#[test]
fn self_watermark_stable_under_lsb_flips() {
    for seed in 0..10 {
        let host = synthetic_host(seed, 512, 512);
        let mut flipped = host.clone();
        for s in flipped.samples_mut() {
            *s ^= 1;
        }
        let a = self_watermark(&host, 4).unwrap();
        let b = self_watermark(&flipped, 4).unwrap();
        let agree = 1.0 - ber(&a, &b).unwrap();
        assert!(agree >= 0.99, "seed {seed}: {agree}");
    }
}
