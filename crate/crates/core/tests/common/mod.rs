#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rlefeat::BitonalImage;

/// The 13x14 sample bitmap, one string per row.
pub const SAMPLE_ROWS: [&str; 13] = [
    "00000000000000",
    "00110000111110",
    "01111000111110",
    "01111000111110",
    "01111000111110",
    "00110000000000",
    "10000000000000",
    "10000000000000",
    "00100001111100",
    "01110001111100",
    "01111001111100",
    "01111100000000",
    "00000000000000",
];

/// Zero-padded run matrix printed alongside the sample bitmap.
pub const SAMPLE_RUNS: [[usize; 5]; 13] = [
    [14, 0, 0, 0, 0],
    [2, 2, 4, 5, 1],
    [1, 4, 3, 5, 1],
    [1, 4, 3, 5, 1],
    [1, 4, 3, 5, 1],
    [2, 2, 10, 0, 0],
    [0, 1, 13, 0, 0],
    [0, 1, 13, 0, 0],
    [2, 1, 4, 5, 2],
    [1, 3, 3, 5, 2],
    [1, 4, 2, 5, 2],
    [1, 5, 8, 0, 0],
    [14, 0, 0, 0, 0],
];

/// Printed transition table: (+ve count, +ve positions, -ve count, -ve positions).
/// A printed `0` position means "no transition".
pub const SAMPLE_TRANSITIONS: [(usize, [usize; 2], usize, [usize; 2]); 13] = [
    (0, [0, 0], 0, [0, 0]),
    (2, [3, 9], 2, [5, 14]),
    (2, [2, 9], 2, [6, 14]),
    (2, [2, 9], 2, [6, 14]),
    (2, [2, 9], 2, [6, 14]),
    (1, [3, 0], 1, [5, 0]),
    (1, [1, 0], 1, [2, 0]),
    (1, [1, 0], 1, [2, 0]),
    (2, [3, 8], 2, [4, 13]),
    (2, [2, 8], 2, [5, 13]),
    (2, [2, 8], 2, [6, 13]),
    (1, [2, 0], 1, [7, 0]),
    (0, [0, 0], 0, [0, 0]),
];

pub fn sample_image() -> BitonalImage {
    BitonalImage::from_bit_strings(&SAMPLE_ROWS).unwrap()
}

/// Random image with the given density. `mean_run` > 1 produces runs with
/// geometric lengths (document-like), otherwise pixels are independent.
pub fn random_image(
    rng: &mut ChaCha8Rng,
    height: usize,
    width: usize,
    density: f64,
    mean_run: f64,
) -> BitonalImage {
    let mut pixels = Vec::with_capacity(height * width);
    for _ in 0..height {
        if mean_run <= 1.0 {
            pixels.extend((0..width).map(|_| u8::from(rng.gen_bool(density))));
        } else {
            let mut color = u8::from(rng.gen_bool(density));
            for _ in 0..width {
                pixels.push(color);
                if rng.gen_bool(1.0 / mean_run) {
                    color = u8::from(rng.gen_bool(density));
                }
            }
        }
    }
    BitonalImage::new(height, width, pixels).unwrap()
}

fn dimension(rng: &mut ChaCha8Rng, max: usize) -> usize {
    // log-uniform so small and large sizes are both common
    let e = rng.gen_range(0.0..=(max as f64).log2());
    (2f64.powf(e).round() as usize).clamp(1, max)
}

/// Deterministic mixed corpus: shapes from 1x1 up to `max_side` square,
/// densities across [0, 1].
pub fn random_corpus(count: usize, max_side: usize, seed: u64) -> Vec<BitonalImage> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|i| {
            let (h, w) = match i % 20 {
                0 => (1, 1),
                1 => (1, dimension(&mut rng, max_side)),
                2 => (dimension(&mut rng, max_side), 1),
                3 => (max_side, max_side),
                _ => (dimension(&mut rng, max_side), dimension(&mut rng, max_side)),
            };
            let density = match i % 7 {
                0 => 0.0,
                1 => 1.0,
                _ => rng.gen_range(0.0..=1.0),
            };
            let mean_run = if rng.gen_bool(0.5) {
                1.0
            } else {
                rng.gen_range(2.0..300.0)
            };
            random_image(&mut rng, h, w, density, mean_run)
        })
        .collect()
}

/// Independent transition scan: returns (+ve positions, -ve positions).
pub fn scan_transitions(line: &[u8]) -> (Vec<usize>, Vec<usize>) {
    let mut pos = Vec::new();
    let mut neg = Vec::new();
    let mut prev = 0;
    for (i, &p) in line.iter().enumerate() {
        match (prev, p) {
            (0, 1) => pos.push(i + 1),
            (1, 0) => neg.push(i + 1),
            _ => {}
        }
        prev = p;
    }
    (pos, neg)
}

fn h2(p: f64) -> f64 {
    if p == 0.0 || p == 1.0 {
        0.0
    } else {
        -p * p.log2() - (1.0 - p) * (1.0 - p).log2()
    }
}

/// Independent base-2 CEQ total over pixel lines.
pub fn ceq_total_base2(lines: &[Vec<u8>]) -> f64 {
    lines
        .iter()
        .filter(|l| l.len() >= 2)
        .map(|l| {
            let (pos, neg) = scan_transitions(l);
            let denom = (l.len() - 1) as f64;
            h2(pos.len() as f64 / denom) + h2(neg.len() as f64 / denom)
        })
        .sum()
}

/// Independent base-2 SEQ total over pixel lines.
pub fn seq_total_base2(lines: &[Vec<u8>]) -> f64 {
    let m = lines.len() as f64;
    let mut total = 0.0;
    for (r, l) in lines.iter().enumerate() {
        let n = l.len() as f64;
        let (pos, neg) = scan_transitions(l);
        for p in pos.into_iter().chain(neg) {
            let p = p as f64;
            total += (r as f64 + 1.0) / m
                * ((p / n) * (n / p).log2() + (m - p / n) * (m / (m + n - p)).log2());
        }
    }
    total
}

pub fn pixel_rows(img: &BitonalImage) -> Vec<Vec<u8>> {
    img.rows().map(|r| r.to_vec()).collect()
}

pub fn pixel_columns(img: &BitonalImage) -> Vec<Vec<u8>> {
    (0..img.width())
        .map(|c| (0..img.height()).map(|r| img.get(r, c)).collect())
        .collect()
}

pub fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    a == b || (a - b).abs() <= tol * a.abs().max(b.abs())
}
