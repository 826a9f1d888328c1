//! Binary pattern sets: random generation, text persistence, and patterns
//! derived from grayscale images by edge filtering and binarization.

use crate::error::{Error, Result};
use crate::rng::{self, TAG_PATTERNS};
use rand::Rng;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

/// `P` binary patterns of length `N`, entries in {-1, +1}, stored flat.
#[derive(Debug, Clone, PartialEq)]
pub struct PatternSet {
    p: usize,
    n: usize,
    bits: Vec<i8>,
}

impl PatternSet {
    pub fn new(p: usize, n: usize, bits: Vec<i8>) -> Result<Self> {
        if p == 0 || n == 0 {
            return Err(Error::Config(format!("need P >= 1 and N >= 1, got P={p} N={n}")));
        }
        if bits.len() != p * n {
            return Err(Error::Dimension { expected: p * n, got: bits.len() });
        }
        if let Some(bad) = bits.iter().find(|&&b| b != 1 && b != -1) {
            return Err(Error::Config(format!("pattern value {bad} outside {{-1, +1}}")));
        }
        Ok(PatternSet { p, n, bits })
    }

    pub fn count(&self) -> usize {
        self.p
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.p == 0
    }

    pub fn pattern(&self, mu: usize) -> &[i8] {
        &self.bits[mu * self.n..(mu + 1) * self.n]
    }
}

/// Draw `p` i.i.d. uniform +-1 patterns of length `n`.
pub fn generate_random_patterns(p: usize, n: usize, seed: u64) -> Result<PatternSet> {
    if p == 0 || n == 0 {
        return Err(Error::Config(format!("need P >= 1 and N >= 1, got P={p} N={n}")));
    }
    let mut rng = rng::seeded(rng::derive_seed(seed, TAG_PATTERNS));
    let bits = (0..p * n).map(|_| if rng.gen::<bool>() { 1i8 } else { -1i8 }).collect();
    Ok(PatternSet { p, n, bits })
}

/// Write a pattern set as text: header `P=<p> N=<n>`, then one line of
/// space-separated +-1 per pattern.
pub fn save_patterns(set: &PatternSet, path: impl AsRef<Path>) -> Result<()> {
    let file = File::create(path)?;
    let mut out = BufWriter::new(file);
    writeln!(out, "P={} N={}", set.p, set.n)?;
    for mu in 0..set.p {
        let row = set.pattern(mu);
        let mut line = String::with_capacity(set.n * 3);
        for (idx, &b) in row.iter().enumerate() {
            if idx > 0 {
                line.push(' ');
            }
            line.push_str(if b == 1 { "1" } else { "-1" });
        }
        writeln!(out, "{line}")?;
    }
    out.flush()?;
    Ok(())
}

/// Read a pattern set written by [`save_patterns`]. Round-trips bit-exactly.
pub fn load_patterns(path: impl AsRef<Path>) -> Result<PatternSet> {
    let file = File::open(path)?;
    let reader = BufReader::new(file);
    let mut lines = reader.lines().enumerate();

    let (_, header) = lines
        .next()
        .ok_or(Error::Parse { line: 1, msg: "empty file; expected `P=<p> N=<n>` header".into() })?;
    let header = header?;
    let (p, n) = parse_header(&header)?;

    let mut bits = Vec::with_capacity(p * n);
    let mut rows = 0usize;
    for (idx, line) in lines {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        rows += 1;
        if rows > p {
            return Err(Error::Parse {
                line: idx + 1,
                msg: format!("more than the {p} patterns announced in the header"),
            });
        }
        let mut values = 0usize;
        for tok in line.split_whitespace() {
            let b = match tok {
                "1" | "+1" => 1i8,
                "-1" => -1i8,
                other => {
                    return Err(Error::Parse {
                        line: idx + 1,
                        msg: format!("value `{other}` is not +-1"),
                    })
                }
            };
            bits.push(b);
            values += 1;
        }
        if values != n {
            return Err(Error::Parse {
                line: idx + 1,
                msg: format!("expected {n} values, found {values}"),
            });
        }
    }
    if rows != p {
        return Err(Error::Parse {
            line: rows + 1,
            msg: format!("expected {p} pattern lines, found {rows}"),
        });
    }
    PatternSet::new(p, n, bits)
}

fn parse_header(header: &str) -> Result<(usize, usize)> {
    let mut p = None;
    let mut n = None;
    for tok in header.split_whitespace() {
        if let Some(v) = tok.strip_prefix("P=") {
            p = v.parse::<usize>().ok();
        } else if let Some(v) = tok.strip_prefix("N=") {
            n = v.parse::<usize>().ok();
        }
    }
    match (p, n) {
        (Some(p), Some(n)) if p > 0 && n > 0 => Ok((p, n)),
        _ => Err(Error::Parse { line: 1, msg: format!("bad header `{header}`") }),
    }
}

/// 8-bit grayscale raster.
#[derive(Debug, Clone, PartialEq)]
pub struct GrayImage {
    pub width: usize,
    pub height: usize,
    pub pixels: Vec<u8>,
}

impl GrayImage {
    pub fn new(width: usize, height: usize, pixels: Vec<u8>) -> Result<Self> {
        if pixels.len() != width * height {
            return Err(Error::Dimension { expected: width * height, got: pixels.len() });
        }
        Ok(GrayImage { width, height, pixels })
    }

    fn at(&self, x: usize, y: usize) -> f64 {
        f64::from(self.pixels[y * self.width + x])
    }
}

/// Read a PGM file, binary (P5) or ASCII (P2), maxval up to 255.
pub fn read_pgm(path: impl AsRef<Path>) -> Result<GrayImage> {
    let mut raw = Vec::new();
    File::open(path)?.read_to_end(&mut raw)?;
    parse_pgm(&raw)
}

fn parse_pgm(raw: &[u8]) -> Result<GrayImage> {
    let mut pos = 0usize;

    // header tokens with `#` comments skipped
    let next_token = |pos: &mut usize| -> Result<String> {
        loop {
            while *pos < raw.len() && raw[*pos].is_ascii_whitespace() {
                *pos += 1;
            }
            if *pos < raw.len() && raw[*pos] == b'#' {
                while *pos < raw.len() && raw[*pos] != b'\n' {
                    *pos += 1;
                }
                continue;
            }
            break;
        }
        let start = *pos;
        while *pos < raw.len() && !raw[*pos].is_ascii_whitespace() {
            *pos += 1;
        }
        if start == *pos {
            return Err(Error::Parse { line: 1, msg: "truncated PGM header".into() });
        }
        Ok(String::from_utf8_lossy(&raw[start..*pos]).into_owned())
    };

    let magic = next_token(&mut pos)?;
    if magic != "P5" && magic != "P2" {
        return Err(Error::Parse { line: 1, msg: format!("not a PGM file (magic `{magic}`)") });
    }
    let width: usize = next_token(&mut pos)?
        .parse()
        .map_err(|_| Error::Parse { line: 1, msg: "bad width".into() })?;
    let height: usize = next_token(&mut pos)?
        .parse()
        .map_err(|_| Error::Parse { line: 1, msg: "bad height".into() })?;
    let maxval: usize = next_token(&mut pos)?
        .parse()
        .map_err(|_| Error::Parse { line: 1, msg: "bad maxval".into() })?;
    if maxval == 0 || maxval > 255 {
        return Err(Error::Parse {
            line: 1,
            msg: format!("maxval {maxval} unsupported (8-bit only)"),
        });
    }

    let count = width * height;
    let pixels = if magic == "P5" {
        pos += 1; // single whitespace after maxval
        if raw.len() < pos + count {
            return Err(Error::Parse { line: 1, msg: "truncated P5 raster".into() });
        }
        raw[pos..pos + count].to_vec()
    } else {
        let mut vals = Vec::with_capacity(count);
        for _ in 0..count {
            let v: usize = next_token(&mut pos)?
                .parse()
                .map_err(|_| Error::Parse { line: 1, msg: "bad P2 sample".into() })?;
            if v > maxval {
                return Err(Error::Parse { line: 1, msg: format!("sample {v} above maxval") });
            }
            vals.push(v as u8);
        }
        vals
    };
    GrayImage::new(width, height, pixels)
}

/// Write a binary (P5) PGM.
pub fn write_pgm(img: &GrayImage, path: impl AsRef<Path>) -> Result<()> {
    let file = File::create(path)?;
    let mut out = BufWriter::new(file);
    write!(out, "P5\n{} {}\n255\n", img.width, img.height)?;
    out.write_all(&img.pixels)?;
    out.flush()?;
    Ok(())
}

/// Edge filter applied before binarization.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdgeFilter {
    /// Gradient magnitude from 3x3 central differences (default).
    Gradient3x3,
    /// Absolute horizontal central difference.
    TwoPointHorizontal,
}

/// Binarization rule on the edge map; +1 marks an edge.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ThresholdMode {
    /// Strictly above the patch median.
    Median,
    /// Strictly above a fixed level.
    Fixed(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OriginMode {
    Fixed(usize, usize),
    Random,
}

/// Image ingestion parameters; `patch_size^2` is the network size.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ImageIngestConfig {
    pub patch_size: usize,
    pub filter: EdgeFilter,
    pub threshold: ThresholdMode,
    pub origin: OriginMode,
}

impl ImageIngestConfig {
    pub fn new(patch_size: usize) -> Self {
        ImageIngestConfig {
            patch_size,
            filter: EdgeFilter::Gradient3x3,
            threshold: ThresholdMode::Median,
            origin: OriginMode::Random,
        }
    }
}

/// Extract a patch, compute its edge map, and binarize to a +-1 pattern.
pub fn image_to_pattern(
    img: &GrayImage,
    config: &ImageIngestConfig,
    rng: &mut impl Rng,
) -> Result<Vec<i8>> {
    let ps = config.patch_size;
    if ps == 0 {
        return Err(Error::Ingest("patch size must be positive".into()));
    }
    if img.width < ps || img.height < ps {
        return Err(Error::Ingest(format!(
            "image {}x{} smaller than patch {ps}x{ps}",
            img.width, img.height
        )));
    }
    let (ox, oy) = match config.origin {
        OriginMode::Fixed(x, y) => {
            if x + ps > img.width || y + ps > img.height {
                return Err(Error::Ingest(format!("patch origin ({x}, {y}) out of bounds")));
            }
            (x, y)
        }
        OriginMode::Random => {
            let x = rng.gen_range(0..=img.width - ps);
            let y = rng.gen_range(0..=img.height - ps);
            (x, y)
        }
    };

    // clamped lookup inside the patch
    let sample = |x: isize, y: isize| -> f64 {
        let xc = x.clamp(0, ps as isize - 1) as usize;
        let yc = y.clamp(0, ps as isize - 1) as usize;
        img.at(ox + xc, oy + yc)
    };

    let mut edge = Vec::with_capacity(ps * ps);
    for y in 0..ps as isize {
        for x in 0..ps as isize {
            let mag = match config.filter {
                EdgeFilter::Gradient3x3 => {
                    let gx = (sample(x + 1, y) - sample(x - 1, y)) / 2.0;
                    let gy = (sample(x, y + 1) - sample(x, y - 1)) / 2.0;
                    gx.hypot(gy)
                }
                EdgeFilter::TwoPointHorizontal => (sample(x + 1, y) - sample(x - 1, y)).abs(),
            };
            edge.push(mag);
        }
    }

    let threshold = match config.threshold {
        ThresholdMode::Fixed(t) => t,
        ThresholdMode::Median => {
            let mut sorted = edge.clone();
            sorted.sort_by(|a, b| a.total_cmp(b));
            let mid = sorted.len() / 2;
            if sorted.len() % 2 == 0 {
                (sorted[mid - 1] + sorted[mid]) / 2.0
            } else {
                sorted[mid]
            }
        }
    };

    Ok(edge.iter().map(|&v| if v > threshold { 1i8 } else { -1i8 }).collect())
}

/// Build a pattern set of `p` patches from one image; patch `mu` draws its
/// origin from stream `mu`, so the set is reproducible for a given seed.
pub fn patterns_from_image(
    img: &GrayImage,
    config: &ImageIngestConfig,
    p: usize,
    seed: u64,
) -> Result<PatternSet> {
    if p == 0 {
        return Err(Error::Config("need at least one patch".into()));
    }
    let n = config.patch_size * config.patch_size;
    let base = rng::derive_seed(seed, TAG_PATTERNS);
    let mut bits = Vec::with_capacity(p * n);
    for mu in 0..p {
        let mut rng = rng::stream(base, mu as u64);
        bits.extend(image_to_pattern(img, config, &mut rng)?);
    }
    PatternSet::new(p, n, bits)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::overlap;
    use proptest::prelude::*;
    use tempfile::tempdir;

    #[test]
    fn random_patterns_are_balanced_and_uncorrelated() {
        let set = generate_random_patterns(2, 10_000, 7).unwrap();
        for mu in 0..2 {
            let mean: f64 = set.pattern(mu).iter().map(|&b| f64::from(b)).sum::<f64>() / 10_000.0;
            assert!(mean.abs() < 0.05, "pattern {mu} mean {mean}");
        }
        let m = overlap(set.pattern(0), set.pattern(1)).unwrap();
        assert!(m.abs() < 0.05, "cross overlap {m}");
    }

    #[test]
    fn same_seed_reproduces_the_set() {
        let a = generate_random_patterns(5, 64, 3).unwrap();
        let b = generate_random_patterns(5, 64, 3).unwrap();
        assert_eq!(a, b);
        let c = generate_random_patterns(5, 64, 4).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn per_site_sign_balance_across_many_patterns() {
        let p = 200;
        let n = 500;
        let set = generate_random_patterns(p, n, 11).unwrap();
        let bound = 5.0 / (p as f64).sqrt();
        for site in 0..n {
            let mean: f64 =
                (0..p).map(|mu| f64::from(set.pattern(mu)[site])).sum::<f64>() / p as f64;
            assert!(mean.abs() < bound, "site {site} mean {mean}");
        }
    }

    #[test]
    fn save_load_round_trip() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("pats.txt");
        let set = generate_random_patterns(3, 100, 21).unwrap();
        save_patterns(&set, &path).unwrap();
        let loaded = load_patterns(&path).unwrap();
        assert_eq!(set, loaded);
    }

    #[test]
    fn malformed_files_are_rejected_with_line_numbers() {
        let dir = tempdir().unwrap();

        let zero = dir.path().join("zero.txt");
        std::fs::write(&zero, "P=1 N=3\n1 0 -1\n").unwrap();
        let err = load_patterns(&zero).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err}");

        let empty = dir.path().join("empty.txt");
        std::fs::write(&empty, "").unwrap();
        assert!(load_patterns(&empty).is_err());

        let short = dir.path().join("short.txt");
        std::fs::write(&short, "P=2 N=2\n1 -1\n").unwrap();
        assert!(load_patterns(&short).is_err());

        let wide = dir.path().join("wide.txt");
        std::fs::write(&wide, "P=1 N=2\n1 -1 1\n").unwrap();
        let err = load_patterns(&wide).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err}");
    }

    fn constant_image(w: usize, h: usize, v: u8) -> GrayImage {
        GrayImage::new(w, h, vec![v; w * h]).unwrap()
    }

    /// Left half 0, right half 255, step between columns `w/2 - 1` and `w/2`.
    fn step_image(w: usize, h: usize) -> GrayImage {
        let pixels = (0..w * h).map(|i| if i % w < w / 2 { 0 } else { 255 }).collect();
        GrayImage::new(w, h, pixels).unwrap()
    }

    #[test]
    fn constant_image_has_no_edges() {
        let img = constant_image(16, 16, 130);
        let cfg = ImageIngestConfig {
            patch_size: 16,
            filter: EdgeFilter::Gradient3x3,
            threshold: ThresholdMode::Median,
            origin: OriginMode::Fixed(0, 0),
        };
        let mut rng = rng::stream(0, 0);
        let pat = image_to_pattern(&img, &cfg, &mut rng).unwrap();
        assert!(pat.iter().all(|&b| b == -1));
    }

    #[test]
    fn vertical_step_marks_the_two_adjacent_columns() {
        let w = 16;
        let img = step_image(w, 8);
        let cfg = ImageIngestConfig {
            patch_size: 8,
            filter: EdgeFilter::TwoPointHorizontal,
            threshold: ThresholdMode::Fixed(0.0),
            origin: OriginMode::Fixed(4, 0), // step sits at patch columns 3|4
        };
        let mut rng = rng::stream(0, 0);
        let pat = image_to_pattern(&img, &cfg, &mut rng).unwrap();
        for y in 0..8 {
            for x in 0..8 {
                let expect = if x == 3 || x == 4 { 1 } else { -1 };
                assert_eq!(pat[y * 8 + x], expect, "({x}, {y})");
            }
        }
    }

    #[test]
    fn median_split_is_near_balanced_on_a_generic_image() {
        // smooth, tie-free synthetic image
        let w = 64;
        let pixels: Vec<u8> = (0..w * w)
            .map(|i| {
                let x = (i % w) as f64;
                let y = (i / w) as f64;
                (127.0 + 80.0 * (x / 9.0).sin() * (y / 7.0).cos() + 40.0 * (x * y / 301.0).sin())
                    .clamp(0.0, 255.0) as u8
            })
            .collect();
        let img = GrayImage::new(w, w, pixels).unwrap();
        let cfg = ImageIngestConfig {
            patch_size: 48,
            filter: EdgeFilter::Gradient3x3,
            threshold: ThresholdMode::Median,
            origin: OriginMode::Fixed(5, 5),
        };
        let mut rng = rng::stream(0, 0);
        let pat = image_to_pattern(&img, &cfg, &mut rng).unwrap();
        let plus = pat.iter().filter(|&&b| b == 1).count() as f64 / pat.len() as f64;
        assert!((0.45..=0.55).contains(&plus), "+1 fraction {plus}");
    }

    #[test]
    fn too_small_image_is_rejected() {
        let img = constant_image(8, 8, 0);
        let cfg = ImageIngestConfig::new(16);
        let mut rng = rng::stream(0, 0);
        assert!(image_to_pattern(&img, &cfg, &mut rng).is_err());
    }

    #[test]
    fn ingestion_is_deterministic_under_seed() {
        let img = step_image(64, 64);
        let cfg = ImageIngestConfig::new(16);
        let a = patterns_from_image(&img, &cfg, 10, 5).unwrap();
        let b = patterns_from_image(&img, &cfg, 10, 5).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn pgm_round_trip_p5_and_p2_parse() {
        let dir = tempdir().unwrap();
        let img = step_image(10, 6);
        let p5 = dir.path().join("img.pgm");
        write_pgm(&img, &p5).unwrap();
        assert_eq!(read_pgm(&p5).unwrap(), img);

        let p2 = dir.path().join("img.ascii.pgm");
        let mut text = String::from("P2\n# comment\n3 2\n255\n");
        text.push_str("0 128 255\n7 0 31\n");
        std::fs::write(&p2, text).unwrap();
        let img2 = read_pgm(&p2).unwrap();
        assert_eq!((img2.width, img2.height), (3, 2));
        assert_eq!(img2.pixels, vec![0, 128, 255, 7, 0, 31]);

        let bad = dir.path().join("bad.pgm");
        std::fs::write(&bad, "P6\n1 1\n255\nxxx").unwrap();
        assert!(read_pgm(&bad).is_err());
    }

    proptest! {
        #[test]
        fn save_load_identity(p in 1usize..6, n in 1usize..40, seed in 0u64..1000) {
            let dir = tempdir().unwrap();
            let path = dir.path().join("set.txt");
            let set = generate_random_patterns(p, n, seed).unwrap();
            save_patterns(&set, &path).unwrap();
            prop_assert_eq!(load_patterns(&path).unwrap(), set);
        }
    }
}
