//! Strong typicality on finite alphabets.
//!
//! A word `x^n` is `(p, δ)`-typical when every symbol frequency is within `δ`
//! of `p` and symbols outside the support of `p` do not occur. An output word
//! `y^n` is `(W, δ)`-typical given `x^n` when every joint count satisfies
//! `|N(a,b)/n - W(b|a) N(a)/n| <= δ` and transitions with `W(b|a) = 0` do not
//! occur.

use crate::channel::{ensure_enumerable, word_count, Channel, Distribution, Words};
use crate::error::{invalid, Result};
use crate::info::{conditional_entropy, entropy};

/// `c = 1 / (2 ln 2)` in the typical-set concentration bounds.
pub const CONCENTRATION_C: f64 = 0.721_347_520_444_481_7;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TypicalityParams {
    pub n: usize,
    pub delta: f64,
}

impl TypicalityParams {
    pub fn new(n: usize, delta: f64) -> Result<Self> {
        if n == 0 {
            return invalid("block length must be at least 1");
        }
        if !(delta > 0.0) || !delta.is_finite() {
            return invalid(format!("typicality slack must be positive, got {delta}"));
        }
        Ok(TypicalityParams { n, delta })
    }
}

/// Slack functions `f1 = f2 = coefficient * |A| |B| * δ * log2(max(n, 2))` in
/// the cardinality and probability bounds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Slack {
    pub coefficient: f64,
}

impl Default for Slack {
    fn default() -> Self {
        Slack { coefficient: 2.0 }
    }
}

impl Slack {
    pub fn value(&self, input_size: usize, output_size: usize, tp: &TypicalityParams) -> f64 {
        self.coefficient
            * (input_size * output_size) as f64
            * tp.delta
            * (tp.n.max(2) as f64).log2()
    }
}

/// Symbol counts of `word` over `0..alphabet`.
pub fn composition(word: &[usize], alphabet: usize) -> Vec<usize> {
    let mut counts = vec![0; alphabet];
    for &a in word {
        counts[a] += 1;
    }
    counts
}

pub fn is_typical(word: &[usize], p: &Distribution, delta: f64) -> bool {
    let n = word.len() as f64;
    composition(word, p.support_size())
        .iter()
        .zip(p.probs())
        .all(|(&c, &pa)| {
            if pa == 0.0 {
                c == 0
            } else {
                (c as f64 / n - pa).abs() <= delta
            }
        })
}

pub fn is_cond_typical(y: &[usize], x: &[usize], w: &Channel, delta: f64) -> bool {
    let (a, b) = (w.input_size(), w.output_size());
    let n = x.len() as f64;
    let mut joint = vec![0usize; a * b];
    let mut marg = vec![0usize; a];
    for (&xi, &yi) in x.iter().zip(y) {
        joint[xi * b + yi] += 1;
        marg[xi] += 1;
    }
    (0..a).all(|xa| {
        (0..b).all(|yb| {
            let c = joint[xa * b + yb];
            let wv = w.prob(xa, yb);
            if wv == 0.0 {
                c == 0
            } else {
                (c as f64 / n - wv * marg[xa] as f64 / n).abs() <= delta
            }
        })
    })
}

/// `T^n_{p,δ}`, lexicographic.
pub fn typical_set(p: &Distribution, tp: &TypicalityParams) -> Result<Vec<Vec<usize>>> {
    ensure_enumerable("typical set candidates", word_count(p.support_size(), tp.n))?;
    Ok(Words::new(p.support_size(), tp.n)
        .filter(|x| is_typical(x, p, tp.delta))
        .collect())
}

/// `T^n_{W,δ}(x^n)`, lexicographic.
pub fn cond_typical_set(w: &Channel, x: &[usize], tp: &TypicalityParams) -> Result<Vec<Vec<usize>>> {
    if x.len() != tp.n {
        return invalid(format!("input word has length {}, expected {}", x.len(), tp.n));
    }
    if x.iter().any(|&a| a >= w.input_size()) {
        return invalid("input word has a symbol outside the channel input alphabet");
    }
    ensure_enumerable("conditionally typical candidates", word_count(w.output_size(), tp.n))?;
    Ok(Words::new(w.output_size(), tp.n)
        .filter(|y| is_cond_typical(y, x, w, tp.delta))
        .collect())
}

/// `W^n(y^n | x^n)` for a memoryless channel.
pub fn word_prob(w: &Channel, x: &[usize], y: &[usize]) -> f64 {
    x.iter().zip(y).map(|(&a, &b)| w.prob(a, b)).product()
}

/// `p^n(x^n)`.
pub fn iid_prob(p: &Distribution, x: &[usize]) -> f64 {
    x.iter().map(|&a| p.prob(a)).product()
}

/// Outcome of checking the typical-set bounds by exhaustive enumeration.
/// Margins are `bound side minus measured side`, so a negative margin is a
/// violation; vacuous checks (no typical input) report `+inf`.
#[derive(Debug, Clone, PartialEq)]
pub struct TypicalityReport {
    pub typical_mass: f64,
    pub typical_mass_bound: f64,
    pub typical_mass_margin: f64,
    /// Smallest `W^n(T_{W,δ}(x^n) | x^n)` over all `x^n`.
    pub cond_mass_min: f64,
    pub cond_mass_bound: f64,
    pub cond_mass_margin: f64,
    /// `|T^n_{pW, 2|A|δ}|` against `α^{-1}`, compared in log2.
    pub output_set_size: usize,
    pub log2_alpha_inv: f64,
    pub cardinality_margin: f64,
    /// Largest `W^n(y^n|x^n)` over typical `x^n` and conditionally typical
    /// `y^n`, against `β`, compared in log2.
    pub max_cond_prob: f64,
    pub log2_beta: f64,
    pub probability_margin: f64,
    pub violations: usize,
}

/// Checks the concentration bounds for `T_{p,δ}` and `T_{W,δ}(x)`, and the
/// `α`/`β` bounds with the given slack functions.
pub fn verify_typicality_bounds(
    p: &Distribution,
    w: &Channel,
    tp: &TypicalityParams,
    slack: &Slack,
) -> Result<TypicalityReport> {
    if p.support_size() != w.input_size() {
        return invalid("input distribution and channel disagree on the input alphabet");
    }
    let (a, b, n) = (w.input_size(), w.output_size(), tp.n);
    ensure_enumerable(
        "typicality bound check",
        word_count(a, n).saturating_mul(word_count(b, n)),
    )?;
    let nf = n as f64;
    let decay = (-nf * CONCENTRATION_C * tp.delta * tp.delta).exp2();

    let typical = typical_set(p, tp)?;
    let typical_mass: f64 = typical.iter().map(|x| iid_prob(p, x)).sum();
    let typical_mass_bound = 1.0 - ((n + 1) as f64).powi(a as i32) * decay;

    let outputs: Vec<Vec<usize>> = Words::new(b, n).collect();
    let mut cond_mass_min = f64::INFINITY;
    for x in Words::new(a, n) {
        let m: f64 = outputs
            .iter()
            .filter(|y| is_cond_typical(y, &x, w, tp.delta))
            .map(|y| word_prob(w, &x, y))
            .sum();
        cond_mass_min = cond_mass_min.min(m);
    }
    let cond_mass_bound = 1.0 - ((n + 1) as f64).powi((a * b) as i32) * decay;

    let f = slack.value(a, b, tp);
    let pw = w.output_distribution(p)?;
    let wide = tp.delta * 2.0 * a as f64;
    let output_set_size = outputs.iter().filter(|y| is_typical(y, &pw, wide)).count();
    let log2_alpha_inv = nf * (entropy(&pw) + f);
    let log2_beta = -nf * (conditional_entropy(p, w)? - f);

    let mut max_cond_prob: f64 = 0.0;
    for x in &typical {
        for y in outputs.iter().filter(|y| is_cond_typical(y, x, w, tp.delta)) {
            max_cond_prob = max_cond_prob.max(word_prob(w, x, y));
        }
    }

    let typical_mass_margin = typical_mass - typical_mass_bound;
    let cond_mass_margin = cond_mass_min - cond_mass_bound;
    let cardinality_margin = if typical.is_empty() {
        f64::INFINITY
    } else {
        log2_alpha_inv - (output_set_size.max(1) as f64).log2()
    };
    let probability_margin = if max_cond_prob > 0.0 {
        log2_beta - max_cond_prob.log2()
    } else {
        f64::INFINITY
    };
    // Equality cases are computed through different float paths, so allow
    // rounding noise before calling a margin a violation.
    let violations = [typical_mass_margin, cond_mass_margin, cardinality_margin, probability_margin]
        .iter()
        .filter(|&&m| m < -1e-12)
        .count();
    Ok(TypicalityReport {
        typical_mass,
        typical_mass_bound,
        typical_mass_margin,
        cond_mass_min,
        cond_mass_bound,
        cond_mass_margin,
        output_set_size,
        log2_alpha_inv,
        cardinality_margin,
        max_cond_prob,
        log2_beta,
        probability_margin,
        violations,
    })
}
