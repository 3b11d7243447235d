//! Shared fixtures and a deliberately naive second implementation of the
//! code evaluation, written against plain nested vectors.

#![allow(dead_code)]

use avwc_core::{Channel, Distribution};

pub fn bsc(e: f64) -> Channel {
    Channel::bsc(e).unwrap()
}

pub fn chan(rows: &[&[f64]]) -> Channel {
    Channel::new(rows.iter().map(|r| r.to_vec()).collect()).unwrap()
}

pub fn dist(p: &[f64]) -> Distribution {
    Distribution::new(p.to_vec()).unwrap()
}

/// Twenty input laws and channels with alphabets of size two or three.
pub fn typicality_corpus() -> Vec<(Distribution, Channel)> {
    vec![
        (dist(&[0.5, 0.5]), bsc(0.1)),
        (dist(&[0.5, 0.5]), bsc(0.3)),
        (dist(&[0.3, 0.7]), bsc(0.2)),
        (dist(&[0.8, 0.2]), bsc(0.05)),
        (dist(&[0.5, 0.5]), Channel::identity(2)),
        (dist(&[0.6, 0.4]), chan(&[&[0.9, 0.1], &[0.4, 0.6]])),
        (dist(&[0.4, 0.6]), chan(&[&[1.0, 0.0], &[0.5, 0.5]])),
        (dist(&[1.0, 0.0]), bsc(0.25)),
        (dist(&[0.5, 0.5]), chan(&[&[0.7, 0.2, 0.1], &[0.1, 0.2, 0.7]])),
        (dist(&[0.35, 0.65]), chan(&[&[0.8, 0.1, 0.1], &[0.0, 0.5, 0.5]])),
        (dist(&[0.5, 0.5]), chan(&[&[0.9, 0.1, 0.0], &[0.0, 0.1, 0.9]])),
        (dist(&[1.0 / 3.0; 3]), Channel::identity(3)),
        (dist(&[0.2, 0.3, 0.5]), chan(&[&[0.8, 0.2], &[0.5, 0.5], &[0.2, 0.8]])),
        (dist(&[0.4, 0.4, 0.2]), chan(&[&[0.6, 0.4], &[0.3, 0.7], &[0.9, 0.1]])),
        (dist(&[0.5, 0.25, 0.25]), chan(&[&[0.7, 0.2, 0.1], &[0.1, 0.7, 0.2], &[0.2, 0.1, 0.7]])),
        (dist(&[0.1, 0.6, 0.3]), chan(&[&[0.5, 0.25, 0.25], &[0.25, 0.5, 0.25], &[0.25, 0.25, 0.5]])),
        (dist(&[0.3, 0.3, 0.4]), chan(&[&[1.0, 0.0, 0.0], &[0.1, 0.8, 0.1], &[0.0, 0.3, 0.7]])),
        (dist(&[0.0, 0.5, 0.5]), chan(&[&[0.6, 0.3, 0.1], &[0.3, 0.4, 0.3], &[0.05, 0.15, 0.8]])),
        (dist(&[0.25, 0.5, 0.25]), Channel::constant(3, &dist(&[0.2, 0.3, 0.5]))),
        (dist(&[0.45, 0.55]), chan(&[&[0.15, 0.85], &[0.85, 0.15]])),
    ]
}

fn digits(mut index: usize, base: usize, len: usize) -> Vec<usize> {
    let mut out = vec![0; len];
    for slot in out.iter_mut().rev() {
        *slot = index % base;
        index /= base;
    }
    out
}

fn power(base: usize, exp: usize) -> usize {
    (0..exp).fold(1, |acc, _| acc * base)
}

fn transition(letters: &[Vec<Vec<f64>>], x: &[usize], y: &[usize]) -> f64 {
    let mut p = 1.0;
    for i in 0..x.len() {
        p *= letters[i][x[i]][y[i]];
    }
    p
}

/// A code given as raw tables: `codewords[j][l]` and a decoder over output
/// indices (most significant letter first).
pub struct RawCode {
    pub codewords: Vec<Vec<Vec<usize>>>,
    pub decoder: Vec<Option<usize>>,
}

/// Average error with letter `i` sent through `letters[i]`.
pub fn brute_error(code: &RawCode, letters: &[Vec<Vec<f64>>], out: usize) -> f64 {
    let n = letters.len();
    let jn = code.codewords.len();
    let ln = code.codewords[0].len();
    let mut correct = 0.0;
    for j in 0..jn {
        for l in 0..ln {
            for yi in 0..power(out, n) {
                if code.decoder[yi] == Some(j) {
                    correct += transition(letters, &code.codewords[j][l], &digits(yi, out, n));
                }
            }
        }
    }
    1.0 - correct / (jn * ln) as f64
}

/// `I(J; Z^n)` for uniform `J` and a uniformly drawn randomisation index.
pub fn brute_leakage(code: &RawCode, letters: &[Vec<Vec<f64>>], out: usize) -> f64 {
    let n = letters.len();
    let jn = code.codewords.len();
    let ln = code.codewords[0].len();
    let zs = power(out, n);
    let mut cond = vec![vec![0.0; zs]; jn];
    for j in 0..jn {
        for zi in 0..zs {
            let z = digits(zi, out, n);
            cond[j][zi] = code.codewords[j].iter().map(|x| transition(letters, x, &z)).sum::<f64>() / ln as f64;
        }
    }
    let mut info = 0.0;
    for zi in 0..zs {
        let pz: f64 = (0..jn).map(|j| cond[j][zi]).sum::<f64>() / jn as f64;
        for row in &cond {
            if row[zi] > 0.0 {
                info += row[zi] / jn as f64 * (row[zi] / pz).log2();
            }
        }
    }
    info
}

/// Per-sequence `(error, leakage)` over every state sequence, lexicographic.
pub fn brute_table(
    code: &RawCode,
    main: &[Vec<Vec<f64>>],
    eaves: &[Vec<Vec<f64>>],
    main_out: usize,
    eaves_out: usize,
    n: usize,
) -> Vec<(f64, f64)> {
    let states = main.len();
    (0..power(states, n))
        .map(|si| {
            let s = digits(si, states, n);
            let w: Vec<Vec<Vec<f64>>> = s.iter().map(|&v| main[v].clone()).collect();
            let v: Vec<Vec<Vec<f64>>> = s.iter().map(|&v| eaves[v].clone()).collect();
            (brute_error(code, &w, main_out), brute_leakage(code, &v, eaves_out))
        })
        .collect()
}
