//! Finite-alphabet distributions, channels, state families, convex mixtures
//! and n-fold products.
//!
//! Alphabets are the index sets `0..k`. Words over an alphabet are enumerated
//! in lexicographic order with the first letter most significant, and that
//! order is what every `*_index` function in the crate refers to.

use crate::error::{invalid, Error, Result};
use crate::scalar::Real;

/// Default cap on the number of jointly enumerated outcomes.
pub const DEFAULT_ENUM_CAP: u64 = 10_000_000;

/// Environment variable overriding [`DEFAULT_ENUM_CAP`].
pub const ENUM_CAP_ENV: &str = "AVWC_ENUM_CAP";

/// The active enumeration cap (`AVWC_ENUM_CAP` if set and parseable).
pub fn enumeration_cap() -> u64 {
    std::env::var(ENUM_CAP_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<u64>().ok())
        .unwrap_or(DEFAULT_ENUM_CAP)
}

pub(crate) fn ensure_enumerable(what: impl Into<String>, required: u128) -> Result<()> {
    let cap = enumeration_cap();
    if required > cap as u128 {
        return Err(Error::ResourceLimit {
            what: what.into(),
            required,
            cap,
        });
    }
    Ok(())
}

/// `base^exp`, saturating at `u128::MAX`.
pub fn word_count(base: usize, exp: usize) -> u128 {
    let mut acc: u128 = 1;
    for _ in 0..exp {
        acc = acc.saturating_mul(base as u128);
    }
    acc
}

/// Lexicographic index of `word` over an alphabet of size `alphabet`.
pub fn word_index(word: &[usize], alphabet: usize) -> usize {
    word.iter().fold(0, |acc, &a| acc * alphabet + a)
}

/// Inverse of [`word_index`].
pub fn word_from_index(mut index: usize, alphabet: usize, len: usize) -> Vec<usize> {
    let mut word = vec![0; len];
    for slot in word.iter_mut().rev() {
        *slot = index % alphabet;
        index /= alphabet;
    }
    word
}

/// Iterator over all words of a given length, in lexicographic order.
#[derive(Debug, Clone)]
pub struct Words {
    alphabet: usize,
    current: Option<Vec<usize>>,
}

impl Words {
    pub fn new(alphabet: usize, len: usize) -> Self {
        let current = if alphabet == 0 && len > 0 {
            None
        } else {
            Some(vec![0; len])
        };
        Words { alphabet, current }
    }
}

impl Iterator for Words {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let out = self.current.take()?;
        let mut next = out.clone();
        let mut carried = true;
        for slot in next.iter_mut().rev() {
            *slot += 1;
            if *slot < self.alphabet {
                carried = false;
                break;
            }
            *slot = 0;
        }
        if !carried {
            self.current = Some(next);
        }
        Some(out)
    }
}

/// Probability vector over a finite alphabet.
#[derive(Debug, Clone, PartialEq)]
pub struct Distribution<T: Real = f64> {
    probs: Vec<T>,
}

impl<T: Real> Distribution<T> {
    /// Validates nonnegativity and unit mass (within [`Real::stochastic_tol`]).
    /// Inputs are never renormalized.
    pub fn new(probs: Vec<T>) -> Result<Self> {
        if probs.is_empty() {
            return invalid("distribution needs at least one symbol");
        }
        check_stochastic(&probs).map_err(|msg| Error::InvalidArgument(format!("distribution {msg}")))?;
        Ok(Distribution { probs })
    }

    pub(crate) fn new_unchecked(probs: Vec<T>) -> Self {
        debug_assert!(!probs.is_empty());
        Distribution { probs }
    }

    pub fn uniform(size: usize) -> Self {
        assert!(size > 0, "uniform distribution over an empty alphabet");
        let w = T::one() / T::from_usize_lossy(size);
        Distribution {
            probs: vec![w; size],
        }
    }

    pub fn point_mass(size: usize, at: usize) -> Self {
        assert!(at < size, "point mass outside the alphabet");
        let mut probs = vec![T::zero(); size];
        probs[at] = T::one();
        Distribution { probs }
    }

    pub fn support_size(&self) -> usize {
        self.probs.len()
    }

    pub fn probs(&self) -> &[T] {
        &self.probs
    }

    pub fn prob(&self, i: usize) -> T {
        self.probs[i]
    }

    /// Base-2 log-probability; `-inf` on zero-probability symbols.
    pub fn log2_prob(&self, i: usize) -> T {
        self.probs[i].log2()
    }

    /// Index of the unique symbol with mass one, if this is a point mass.
    pub fn as_point_mass(&self) -> Option<usize> {
        let tol = T::stochastic_tol();
        let i = self.probs.iter().position(|&p| p > T::one() - tol)?;
        self.probs
            .iter()
            .enumerate()
            .all(|(j, &p)| j == i || p <= tol)
            .then_some(i)
    }

    /// Convex combination `lambda * self + (1 - lambda) * other`.
    pub fn mix(&self, lambda: T, other: &Self) -> Result<Self> {
        if self.support_size() != other.support_size() {
            return invalid("mixing distributions of different support sizes");
        }
        if !(lambda >= T::zero() && lambda <= T::one()) {
            return invalid("mixing weight outside [0, 1]");
        }
        let probs = self
            .probs
            .iter()
            .zip(&other.probs)
            .map(|(&a, &b)| lambda * a + (T::one() - lambda) * b)
            .collect();
        Ok(Distribution { probs })
    }

    /// Support indices with positive mass.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.probs
            .iter()
            .enumerate()
            .filter(|(_, &p)| p > T::zero())
            .map(|(i, _)| i)
    }
}

fn check_stochastic<T: Real>(row: &[T]) -> std::result::Result<(), String> {
    let mut total = T::zero();
    for (i, &p) in row.iter().enumerate() {
        if !p.is_finite() {
            return Err(format!("entry {i} is not finite"));
        }
        if p < T::zero() {
            return Err(format!("entry {i} is negative ({p})"));
        }
        total = total + p;
    }
    if (total - T::one()).abs() > T::stochastic_tol() {
        return Err(format!("sums to {total}, not 1"));
    }
    Ok(())
}

/// Row-stochastic matrix `rows[x][y] = W(y|x)`, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Channel<T: Real = f64> {
    input_size: usize,
    output_size: usize,
    entries: Vec<T>,
}

impl<T: Real> Channel<T> {
    pub fn new(rows: Vec<Vec<T>>) -> Result<Self> {
        let input_size = rows.len();
        if input_size == 0 {
            return invalid("channel needs at least one input symbol");
        }
        let output_size = rows[0].len();
        if output_size == 0 {
            return invalid("channel needs at least one output symbol");
        }
        let mut entries = Vec::with_capacity(input_size * output_size);
        for (x, row) in rows.into_iter().enumerate() {
            if row.len() != output_size {
                return invalid(format!(
                    "channel row {x} has {} entries, expected {output_size}",
                    row.len()
                ));
            }
            check_stochastic(&row)
                .map_err(|msg| Error::InvalidArgument(format!("channel row {x} {msg}")))?;
            entries.extend(row);
        }
        Ok(Channel {
            input_size,
            output_size,
            entries,
        })
    }

    pub(crate) fn from_flat_unchecked(input_size: usize, output_size: usize, entries: Vec<T>) -> Self {
        debug_assert_eq!(entries.len(), input_size * output_size);
        Channel {
            input_size,
            output_size,
            entries,
        }
    }

    pub fn identity(size: usize) -> Self {
        let mut entries = vec![T::zero(); size * size];
        for x in 0..size {
            entries[x * size + x] = T::one();
        }
        Channel::from_flat_unchecked(size, size, entries)
    }

    /// Binary symmetric channel with crossover probability `flip`.
    pub fn bsc(flip: T) -> Result<Self> {
        if !(flip >= T::zero() && flip <= T::one()) {
            return invalid(format!("crossover probability {flip} outside [0, 1]"));
        }
        let keep = T::one() - flip;
        Ok(Channel::from_flat_unchecked(2, 2, vec![keep, flip, flip, keep]))
    }

    /// Channel whose every row is `dist` (output independent of input).
    pub fn constant(input_size: usize, dist: &Distribution<T>) -> Self {
        let mut entries = Vec::with_capacity(input_size * dist.support_size());
        for _ in 0..input_size {
            entries.extend_from_slice(dist.probs());
        }
        Channel::from_flat_unchecked(input_size, dist.support_size(), entries)
    }

    pub fn input_size(&self) -> usize {
        self.input_size
    }

    pub fn output_size(&self) -> usize {
        self.output_size
    }

    #[inline]
    pub fn prob(&self, x: usize, y: usize) -> T {
        self.entries[x * self.output_size + y]
    }

    #[inline]
    pub fn row(&self, x: usize) -> &[T] {
        &self.entries[x * self.output_size..(x + 1) * self.output_size]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[T]> {
        self.entries.chunks(self.output_size)
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        self.rows().map(|r| r.to_vec()).collect()
    }

    /// Output distribution `pW`.
    pub fn output_distribution(&self, p: &Distribution<T>) -> Result<Distribution<T>> {
        if p.support_size() != self.input_size {
            return invalid(format!(
                "input distribution has {} symbols, channel expects {}",
                p.support_size(),
                self.input_size
            ));
        }
        Ok(Distribution::new_unchecked(self.output_under(p.probs())))
    }

    pub(crate) fn output_under(&self, p: &[T]) -> Vec<T> {
        let mut out = vec![T::zero(); self.output_size];
        for (x, &px) in p.iter().enumerate() {
            if px == T::zero() {
                continue;
            }
            for (o, &w) in out.iter_mut().zip(self.row(x)) {
                *o = *o + px * w;
            }
        }
        out
    }

    /// Cascade: the channel `x -> y -> z` with `self: x -> y`, `next: y -> z`.
    pub fn compose(&self, next: &Channel<T>) -> Result<Channel<T>> {
        if self.output_size != next.input_size {
            return invalid(format!(
                "cannot compose a channel with {} outputs into one with {} inputs",
                self.output_size, next.input_size
            ));
        }
        let mut entries = vec![T::zero(); self.input_size * next.output_size];
        for x in 0..self.input_size {
            let out = &mut entries[x * next.output_size..(x + 1) * next.output_size];
            for (y, &w) in self.row(x).iter().enumerate() {
                if w == T::zero() {
                    continue;
                }
                for (o, &v) in out.iter_mut().zip(next.row(y)) {
                    *o = *o + w * v;
                }
            }
        }
        Ok(Channel::from_flat_unchecked(self.input_size, next.output_size, entries))
    }

    /// n-fold memoryless extension `A^n -> B^n` in lexicographic word order.
    pub fn power(&self, n: usize) -> Result<Channel<T>> {
        let rows = word_count(self.input_size, n);
        let cols = word_count(self.output_size, n);
        ensure_enumerable(format!("{n}-fold product channel"), rows.saturating_mul(cols))?;
        let channels = vec![self; n];
        let entries: Vec<T> = Words::new(self.input_size, n)
            .flat_map(|x| product_output_distribution(&channels, &x))
            .collect();
        Ok(Channel::from_flat_unchecked(rows as usize, cols as usize, entries))
    }

    /// Applies a column permutation: output `y` of `self` becomes `perm[y]`.
    pub fn relabel_outputs(&self, perm: &[usize]) -> Result<Channel<T>> {
        if perm.len() != self.output_size {
            return invalid("output permutation has the wrong length");
        }
        let mut seen = vec![false; perm.len()];
        for &p in perm {
            if p >= perm.len() || std::mem::replace(&mut seen[p], true) {
                return invalid("output relabeling is not a permutation");
            }
        }
        let mut entries = vec![T::zero(); self.entries.len()];
        for x in 0..self.input_size {
            for y in 0..self.output_size {
                entries[x * self.output_size + perm[y]] = self.prob(x, y);
            }
        }
        Ok(Channel::from_flat_unchecked(self.input_size, self.output_size, entries))
    }

    /// Largest absolute entrywise difference.
    pub fn max_abs_diff(&self, other: &Channel<T>) -> T {
        assert_eq!(self.entries.len(), other.entries.len(), "shape mismatch");
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(&a, &b)| (a - b).abs())
            .fold(T::zero(), T::max)
    }
}

/// State sequence `s^n` over a finite state set.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StateSequence(Vec<usize>);

impl StateSequence {
    pub fn new(symbols: Vec<usize>, state_count: usize) -> Result<Self> {
        if let Some((i, &s)) = symbols.iter().enumerate().find(|(_, &s)| s >= state_count) {
            return invalid(format!("state {s} at position {i} exceeds state count {state_count}"));
        }
        Ok(StateSequence(symbols))
    }

    pub fn constant(state: usize, len: usize) -> Self {
        StateSequence(vec![state; len])
    }

    pub(crate) fn from_vec_unchecked(symbols: Vec<usize>) -> Self {
        StateSequence(symbols)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn symbols(&self) -> &[usize] {
        &self.0
    }

    pub fn index(&self, state_count: usize) -> usize {
        word_index(&self.0, state_count)
    }
}

/// Arbitrarily varying wiretap channel: per-state pairs `(W_s, V_s)` with a
/// common input alphabet.
#[derive(Debug, Clone, PartialEq)]
pub struct Avwc<T: Real = f64> {
    main: Vec<Channel<T>>,
    eaves: Vec<Channel<T>>,
}

impl<T: Real> Avwc<T> {
    pub fn new(main: Vec<Channel<T>>, eaves: Vec<Channel<T>>) -> Result<Self> {
        if main.is_empty() {
            return invalid("an AVWC needs at least one state");
        }
        if main.len() != eaves.len() {
            return invalid(format!(
                "{} main channels but {} eavesdropper channels",
                main.len(),
                eaves.len()
            ));
        }
        check_family_shape(&main, "main")?;
        check_family_shape(&eaves, "eavesdropper")?;
        if main[0].input_size() != eaves[0].input_size() {
            return invalid("main and eavesdropper channels disagree on the input alphabet");
        }
        Ok(Avwc { main, eaves })
    }

    pub fn state_count(&self) -> usize {
        self.main.len()
    }

    pub fn input_size(&self) -> usize {
        self.main[0].input_size()
    }

    pub fn main_output_size(&self) -> usize {
        self.main[0].output_size()
    }

    pub fn eaves_output_size(&self) -> usize {
        self.eaves[0].output_size()
    }

    pub fn main(&self) -> &[Channel<T>] {
        &self.main
    }

    pub fn eaves(&self) -> &[Channel<T>] {
        &self.eaves
    }
}

pub(crate) fn check_family_shape<T: Real>(family: &[Channel<T>], name: &str) -> Result<()> {
    let Some(first) = family.first() else {
        return invalid(format!("{name} channel family is empty"));
    };
    for (s, ch) in family.iter().enumerate() {
        if ch.input_size() != first.input_size() || ch.output_size() != first.output_size() {
            return invalid(format!(
                "{name} channel for state {s} is {}x{}, expected {}x{}",
                ch.input_size(),
                ch.output_size(),
                first.input_size(),
                first.output_size()
            ));
        }
    }
    Ok(())
}

/// State-averaged channel `W_q(y|x) = sum_s q(s) W_s(y|x)`.
pub fn mixture_channel<T: Real>(family: &[Channel<T>], q: &Distribution<T>) -> Result<Channel<T>> {
    check_family_shape(family, "mixed")?;
    if q.support_size() != family.len() {
        return invalid(format!(
            "mixing distribution has {} states, family has {}",
            q.support_size(),
            family.len()
        ));
    }
    Ok(mixture_unchecked(family, q.probs()))
}

pub(crate) fn mixture_unchecked<T: Real>(family: &[Channel<T>], q: &[T]) -> Channel<T> {
    let first = &family[0];
    let mut entries = vec![T::zero(); first.entries.len()];
    for (ch, &w) in family.iter().zip(q) {
        if w == T::zero() {
            continue;
        }
        for (e, &v) in entries.iter_mut().zip(&ch.entries) {
            *e = *e + w * v;
        }
    }
    Channel::from_flat_unchecked(first.input_size, first.output_size, entries)
}

/// `W^n(y^n | x^n, s^n) = prod_i W_{s_i}(y_i | x_i)`.
pub fn product_channel_prob<T: Real>(
    family: &[Channel<T>],
    s: &StateSequence,
    x: &[usize],
    y: &[usize],
) -> Result<T> {
    check_family_shape(family, "state")?;
    if x.len() != s.len() || y.len() != s.len() {
        return invalid(format!(
            "word lengths ({}, {}) do not match state sequence length {}",
            x.len(),
            y.len(),
            s.len()
        ));
    }
    let (a, b) = (family[0].input_size(), family[0].output_size());
    let mut prob = T::one();
    for ((&si, &xi), &yi) in s.symbols().iter().zip(x).zip(y) {
        if si >= family.len() || xi >= a || yi >= b {
            return invalid("symbol outside its alphabet");
        }
        prob = prob * family[si].prob(xi, yi);
    }
    Ok(prob)
}

/// Full output distribution over `B^n` (lexicographic) of the per-letter
/// channels `channels[i]` driven by input word `x`.
pub fn product_output_distribution<T: Real, C: std::borrow::Borrow<Channel<T>>>(
    channels: &[C],
    x: &[usize],
) -> Vec<T> {
    debug_assert_eq!(channels.len(), x.len());
    let mut dist = vec![T::one()];
    for (ch, &xi) in channels.iter().zip(x) {
        let row = ch.borrow().row(xi);
        let mut next = Vec::with_capacity(dist.len() * row.len());
        for &d in &dist {
            next.extend(row.iter().map(|&w| d * w));
        }
        dist = next;
    }
    dist
}

/// Product distribution `q^{⊗n}` over `S^n`, lexicographic.
pub fn iid_extension<T: Real>(q: &Distribution<T>, n: usize) -> Result<Distribution<T>> {
    if n == 0 {
        return invalid("block length must be at least 1");
    }
    ensure_enumerable(
        format!("i.i.d. extension to length {n}"),
        word_count(q.support_size(), n),
    )?;
    let mut probs = vec![T::one()];
    for _ in 0..n {
        let mut next = Vec::with_capacity(probs.len() * q.support_size());
        for &p in &probs {
            next.extend(q.probs().iter().map(|&w| p * w));
        }
        probs = next;
    }
    Ok(Distribution::new_unchecked(probs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn bsc(p: f64) -> Channel {
        Channel::bsc(p).unwrap()
    }

    #[test]
    fn words_are_lexicographic() {
        let all: Vec<_> = Words::new(3, 2).collect();
        assert_eq!(all.len(), 9);
        for (i, w) in all.iter().enumerate() {
            assert_eq!(word_index(w, 3), i);
            assert_eq!(&word_from_index(i, 3, 2), w);
        }
        assert_eq!(all[5], vec![1, 2]);
        assert_eq!(Words::new(2, 0).count(), 1);
    }

    #[test]
    fn construction_rejects_bad_rows() {
        assert!(Channel::new(vec![vec![0.5, 0.51]]).is_err());
        assert!(Channel::new(vec![vec![1.1, -0.1]]).is_err());
        assert!(Channel::new(vec![vec![1.0, 0.0], vec![1.0]]).is_err());
        assert!(Channel::new(vec![vec![f64::NAN, 1.0]]).is_err());
        assert!(Distribution::new(vec![0.3, 0.3]).is_err());
        assert!(Distribution::<f64>::new(vec![]).is_err());
        // within tolerance is accepted and kept as given
        let d = Distribution::new(vec![0.5, 0.5 + 5e-10]).unwrap();
        assert_eq!(d.prob(1), 0.5 + 5e-10);
    }

    #[test]
    fn avwc_shape_checks() {
        let ok = Avwc::new(vec![bsc(0.1), bsc(0.2)], vec![bsc(0.3), bsc(0.4)]);
        assert!(ok.is_ok());
        assert!(Avwc::new(vec![bsc(0.1)], vec![bsc(0.3), bsc(0.4)]).is_err());
        let wide = Channel::new(vec![vec![0.5, 0.25, 0.25], vec![0.0, 0.0, 1.0]]).unwrap();
        assert!(Avwc::new(vec![bsc(0.1), wide.clone()], vec![bsc(0.3), bsc(0.4)]).is_err());
        // eavesdropper may have its own output alphabet
        assert!(Avwc::new(vec![bsc(0.1)], vec![wide]).is_ok());
        let ternary_in = Channel::<f64>::identity(3);
        assert!(Avwc::new(vec![bsc(0.1)], vec![ternary_in]).is_err());
        assert!(Avwc::<f64>::new(vec![], vec![]).is_err());
    }

    #[test]
    fn mixture_at_vertex_is_member() {
        let w0 = Channel::new(vec![vec![0.7, 0.3], vec![0.2, 0.8]]).unwrap();
        let w1 = Channel::new(vec![vec![0.1, 0.9], vec![0.6, 0.4]]).unwrap();
        let fam = vec![w0.clone(), w1];
        let m = mixture_channel(&fam, &Distribution::point_mass(2, 0)).unwrap();
        assert_eq!(m, w0);
    }

    #[test]
    fn mixture_of_bscs_is_bsc() {
        let fam = vec![bsc(0.1), bsc(0.3)];
        let m = mixture_channel(&fam, &Distribution::uniform(2)).unwrap();
        assert!(m.max_abs_diff(&bsc(0.2)) < 1e-15);
    }

    #[test]
    fn mixture_entrywise_arithmetic() {
        let w0 = Channel::new(vec![vec![0.7, 0.3], vec![0.2, 0.8]]).unwrap();
        let w1 = Channel::new(vec![vec![0.1, 0.9], vec![0.6, 0.4]]).unwrap();
        let m = mixture_channel(&[w0, w1], &Distribution::new(vec![0.25, 0.75]).unwrap()).unwrap();
        let expected = [[0.25 * 0.7 + 0.75 * 0.1, 0.25 * 0.3 + 0.75 * 0.9], [
            0.25 * 0.2 + 0.75 * 0.6,
            0.25 * 0.8 + 0.75 * 0.4,
        ]];
        for x in 0..2 {
            for y in 0..2 {
                assert_abs_diff_eq!(m.prob(x, y), expected[x][y], epsilon = 1e-15);
            }
        }
    }

    #[test]
    fn mixture_dimension_mismatch() {
        let fam = vec![bsc(0.1), bsc(0.3)];
        assert!(mixture_channel(&fam, &Distribution::uniform(3)).is_err());
        let fam = vec![bsc(0.1), Channel::identity(3)];
        assert!(mixture_channel(&fam, &Distribution::uniform(2)).is_err());
    }

    #[test]
    fn product_prob_examples() {
        let fam = vec![bsc(0.1), bsc(0.1)];
        let s = StateSequence::new(vec![0, 1], 2).unwrap();
        let p = product_channel_prob(&fam, &s, &[0, 0], &[0, 1]).unwrap();
        assert_abs_diff_eq!(p, 0.09, epsilon = 1e-15);
        let s1 = StateSequence::new(vec![1], 2).unwrap();
        assert_eq!(product_channel_prob(&fam, &s1, &[1], &[0]).unwrap(), 0.1);
        let id = vec![Channel::<f64>::identity(3); 2];
        let s = StateSequence::new(vec![1, 0, 1], 2).unwrap();
        assert_eq!(product_channel_prob(&id, &s, &[2, 0, 1], &[2, 0, 1]).unwrap(), 1.0);
        assert!(product_channel_prob(&fam, &s1, &[0, 0], &[0]).is_err());
    }

    #[test]
    fn iid_extension_examples() {
        let q = Distribution::new(vec![0.3, 0.7]).unwrap();
        let e = iid_extension(&q, 2).unwrap();
        for (a, b) in e.probs().iter().zip([0.09, 0.21, 0.21, 0.49]) {
            assert_abs_diff_eq!(*a, b, epsilon = 1e-15);
        }
        let pm = iid_extension(&Distribution::<f64>::point_mass(3, 2), 3).unwrap();
        assert_eq!(pm.as_point_mass(), Some(word_index(&[2, 2, 2], 3)));
        let u = iid_extension(&Distribution::<f64>::uniform(2), 2).unwrap();
        assert_eq!(u.probs(), &[0.25; 4]);
        assert!(iid_extension(&q, 0).is_err());
        let big = Distribution::<f64>::uniform(10);
        assert!(matches!(iid_extension(&big, 8), Err(Error::ResourceLimit { .. })));
    }

    #[test]
    fn compose_and_power() {
        let c = bsc(0.1).compose(&bsc(0.25)).unwrap();
        assert!(c.max_abs_diff(&bsc(0.1 * 0.75 + 0.9 * 0.25)).abs() < 1e-15);
        let p2 = bsc(0.1).power(2).unwrap();
        assert_eq!(p2.input_size(), 4);
        assert_abs_diff_eq!(p2.prob(0, 1), 0.09, epsilon = 1e-15);
        assert_abs_diff_eq!(p2.prob(3, 0), 0.01, epsilon = 1e-15);
    }

    #[test]
    fn f32_channels_work() {
        let w = Channel::<f32>::bsc(0.25).unwrap();
        let q = Distribution::<f32>::uniform(2);
        let m = mixture_channel(&[w.clone(), Channel::identity(2)], &q).unwrap();
        assert!((m.prob(0, 1) - 0.125).abs() < 1e-7);
    }
}
