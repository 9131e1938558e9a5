use std::fmt;
use std::fs;
use std::path::Path;

use anyhow::{Context, Result};

use stagemark::chaos::period_report;
use stagemark::metrics::{reports_to_json, reports_to_tsv};
use stagemark::{
    apply_attack, detect, embed, evaluate, extract, read_image, self_watermark, to_binary,
    write_image, Attack, BinaryImage, RasterImage, SecretKey,
};

use crate::{Command, WatermarkInput};

/// Bad invocation rather than bad data; exits with status 2.
#[derive(Debug)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

/// Share of grid points whose period divides `n_iter` above which the key
/// is flagged.
const CYCLE_WARN_FRACTION: f64 = 0.10;

fn load_image(path: &Path) -> Result<RasterImage> {
    let bytes = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    read_image(&bytes).with_context(|| format!("parsing {}", path.display()))
}

fn save_image(path: &Path, img: &RasterImage) -> Result<()> {
    fs::write(path, write_image(img)).with_context(|| format!("writing {}", path.display()))
}

fn load_key(path: &Path) -> Result<SecretKey> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    SecretKey::from_text(&text).with_context(|| format!("parsing key {}", path.display()))
}

fn load_watermark(input: &WatermarkInput) -> Result<BinaryImage> {
    let img = load_image(&input.wm)?.to_gray();
    Ok(to_binary(&img, input.threshold)?)
}

fn parse_size(s: &str) -> Result<usize> {
    let bad = || usage(format!("invalid watermark size `{s}` (use `32` or `32x32`)"));
    let (w, h) = match s.split_once(['x', 'X']) {
        Some((w, h)) => (w.trim(), h.trim()),
        None => (s.trim(), s.trim()),
    };
    let w: usize = w.parse().map_err(|_| bad())?;
    let h: usize = h.parse().map_err(|_| bad())?;
    if w != h {
        return Err(usage(format!("watermark must be square, got {w}x{h}")));
    }
    if w == 0 {
        return Err(bad());
    }
    Ok(w)
}

/// Splits a comma-separated attack list. Tokens that start with a digit
/// continue the previous entry, so `crop:0,0,64,64` stays whole.
pub fn split_attack_list(list: &str) -> Vec<String> {
    let mut out: Vec<String> = Vec::new();
    for token in list.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        match out.last_mut() {
            Some(prev) if token.starts_with(|c: char| c.is_ascii_digit()) => {
                prev.push(',');
                prev.push_str(token);
            }
            _ => out.push(token.to_string()),
        }
    }
    out
}

fn parse_attack(s: &str, seed: u64) -> Result<Attack> {
    Attack::parse_with_seed(s, seed).map_err(|e| usage(e.to_string()))
}

/// File-name-safe label for an attack.
fn slug(attack: &Attack) -> String {
    attack
        .to_string()
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '.' { c } else { '_' })
        .collect()
}

pub fn run(command: Command) -> Result<()> {
    match command {
        Command::Genkey { seed, size, out } => {
            let side = parse_size(&size)?;
            let key = SecretKey::generate(seed, side)?;
            fs::write(&out, key.to_text()).with_context(|| format!("writing {}", out.display()))?;
        }
        Command::Embed { host, wm, key, out } => {
            let host = load_image(&host)?;
            let wm = load_watermark(&wm)?;
            let key = load_key(&key)?;
            let marked = embed(&host, &wm, &key)?;
            save_image(&out, &marked.image)?;
        }
        Command::Extract { image, key, out } => {
            let img = load_image(&image)?;
            let key = load_key(&key)?;
            save_image(&out, &extract(&img, &key)?.to_raster())?;
        }
        Command::Detect { image, wm, key, tau } => {
            if !(0.0..=1.0).contains(&tau) {
                return Err(usage(format!("tau {tau} outside [0, 1]")));
            }
            let img = load_image(&image)?;
            let wm = load_watermark(&wm)?;
            let key = load_key(&key)?;
            let d = detect(&img, &wm, &key, tau)?;
            println!("present={} confidence={:.6}", d.present, d.confidence);
        }
        Command::Attack {
            image,
            attack,
            seed,
            out,
        } => {
            let attack = parse_attack(&attack, seed)?;
            let img = load_image(&image)?;
            save_image(&out, &apply_attack(&img, &attack)?)?;
        }
        Command::Evaluate {
            host,
            wm,
            key,
            attacks,
            tau,
            seed,
            out_dir,
        } => {
            let specs = split_attack_list(&attacks);
            if specs.is_empty() {
                return Err(usage("empty attack list"));
            }
            if !(0.0..=1.0).contains(&tau) {
                return Err(usage(format!("tau {tau} outside [0, 1]")));
            }
            let attacks = specs
                .iter()
                .map(|s| parse_attack(s, seed))
                .collect::<Result<Vec<_>>>()?;
            let host_img = load_image(&host)?;
            let wm = load_watermark(&wm)?;
            let key = load_key(&key)?;
            let runs = evaluate(&host_img, &wm, &key, &attacks, tau)?;

            fs::create_dir_all(&out_dir)
                .with_context(|| format!("creating {}", out_dir.display()))?;
            let ext = if host_img.channels() == 1 { "pgm" } else { "ppm" };
            save_image(
                &out_dir.join(format!("marked.{ext}")),
                &embed(&host_img, &wm, &key)?.image,
            )?;
            for (i, (run, attack)) in runs.iter().zip(&attacks).enumerate() {
                let tag = format!("{i:02}_{}", slug(attack));
                save_image(&out_dir.join(format!("attacked_{tag}.{ext}")), &run.attacked)?;
                save_image(
                    &out_dir.join(format!("recovered_{tag}.pgm")),
                    &run.recovered.to_raster(),
                )?;
            }
            let reports: Vec<_> = runs.into_iter().map(|r| r.report).collect();
            let tsv = reports_to_tsv(&reports);
            fs::write(out_dir.join("report.tsv"), &tsv)?;
            fs::write(out_dir.join("report.json"), reports_to_json(&reports))?;
            print!("{tsv}");
        }
        Command::Selfmark { host, levels, out } => {
            let host = load_image(&host)?;
            save_image(&out, &self_watermark(&host, levels)?.to_raster())?;
        }
        Command::AnalyzePeriod { key, modulus } => {
            let key = load_key(&key)?;
            let params = key.cat.with_modulus(modulus)?;
            let report = period_report(&params);
            println!(
                "modulus={} min={} max={} map_order={}",
                report.modulus, report.min, report.max, report.order
            );
            println!("period\tpoints");
            for (period, count) in &report.histogram {
                println!("{period}\t{count}");
            }
            let fixed = report.fixed_fraction(key.cat.n_iter);
            if fixed >= CYCLE_WARN_FRACTION {
                println!(
                    "warning: n_iter={} is a multiple of the period of {:.1}% of points; \
                     those pixels are not moved",
                    key.cat.n_iter,
                    100.0 * fixed
                );
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn attack_list_keeps_crop_whole() {
        assert_eq!(
            split_attack_list("none, mean:3,crop:0,0,64,64,median:5"),
            vec!["none", "mean:3", "crop:0,0,64,64", "median:5"]
        );
        assert!(split_attack_list(" , ").is_empty());
    }

    #[test]
    fn sizes() {
        assert_eq!(parse_size("32").unwrap(), 32);
        assert_eq!(parse_size("16x16").unwrap(), 16);
        assert!(parse_size("16x8").is_err());
        assert!(parse_size("0").is_err());
        assert!(parse_size("big").is_err());
    }

    #[test]
    fn slugs_are_file_safe() {
        let a: Attack = "crop:1,2,3,4".parse().unwrap();
        assert_eq!(slug(&a), "crop_1_2_3_4");
        let a: Attack = "saltpepper:0.02:5".parse().unwrap();
        assert_eq!(slug(&a), "saltpepper_0.02_5");
    }
}
