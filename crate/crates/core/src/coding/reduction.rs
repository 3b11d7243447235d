//! Random-code reduction to `K` sampled members, and elimination of the
//! remaining randomness by a prefix code that tells the receiver which member
//! is in use.

use rand::Rng;
use rayon::prelude::*;

use super::code::{CodeOrigin, RandomCode, WiretapCode};
use super::eval::{argmax_first, error_under, leakage_under, Objective};
use super::robust::{objective_table, permuted_table};
use super::typicality::{composition, word_prob};
use crate::channel::{
    ensure_enumerable, mixture_unchecked, word_count, word_from_index, Avwc, Channel, Distribution,
    StateSequence, Words,
};
use crate::error::{invalid, Error, Result};
use crate::optim::stream_rng;

/// How many members the reduced code keeps.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum KPreset {
    /// `ceil(2 log|A| (n + n² log|S|) / ε)`.
    InProof,
    /// Smallest integer strictly above `2 n log|A| (1 + n log|S|) / ε`.
    Display,
    /// `n³`.
    NCubed,
    Explicit(usize),
    /// Every member once, without sampling. Needs a uniform family.
    AllMembers,
}

pub fn k_from_preset(preset: KPreset, n: usize, input_size: usize, state_count: usize, epsilon: f64) -> Result<usize> {
    if !(epsilon > 0.0) {
        return invalid("ε must be positive");
    }
    let (nf, la, ls) = (n as f64, (input_size as f64).log2(), (state_count as f64).log2());
    let k = match preset {
        KPreset::InProof => (2.0 * la * (nf + nf * nf * ls) / epsilon).ceil(),
        KPreset::Display => (2.0 * nf * la * (1.0 + nf * ls) / epsilon).floor() + 1.0,
        KPreset::NCubed => nf.powi(3),
        KPreset::Explicit(k) => k as f64,
        KPreset::AllMembers => return invalid("the all-members preset depends on the family, not on n"),
    };
    if !(k >= 1.0) {
        return Ok(1);
    }
    if k > 1e9 {
        return invalid(format!("member count {k} is impractically large"));
    }
    Ok(k as usize)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReductionOptions {
    pub k: KPreset,
    pub epsilon: f64,
    pub seed: u64,
    pub max_attempts: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Reduction {
    pub code: RandomCode,
    /// Indices into the original family, in sampling order.
    pub member_indices: Vec<usize>,
    pub attempts: usize,
    pub worst_mean_error: f64,
    pub worst_mean_error_sequence: StateSequence,
    pub worst_mean_leakage: f64,
    pub worst_mean_leakage_sequence: StateSequence,
}

/// Per-member error and leakage tables, computed lazily and shared between
/// attempts. Permutation members reuse the base tables.
struct MemberTables<'a> {
    rc: &'a RandomCode,
    avwc: &'a Avwc,
    base: Option<(Vec<f64>, Vec<f64>)>,
}

impl<'a> MemberTables<'a> {
    fn new(rc: &'a RandomCode, avwc: &'a Avwc) -> Result<Self> {
        let base = match rc.base() {
            Some(b) => Some((
                objective_table(b, avwc, Objective::Error)?,
                objective_table(b, avwc, Objective::Leakage)?,
            )),
            None => None,
        };
        Ok(MemberTables { rc, avwc, base })
    }

    fn get(&self, i: usize) -> Result<(Vec<f64>, Vec<f64>)> {
        match (&self.base, self.rc.member_permutation(i)) {
            (Some((e, l)), Some(sigma)) => {
                let k = self.avwc.state_count();
                Ok((permuted_table(e, &sigma, k), permuted_table(l, &sigma, k)))
            }
            _ => {
                let m = self.rc.member(i);
                Ok((
                    objective_table(&m, self.avwc, Objective::Error)?,
                    objective_table(&m, self.avwc, Objective::Leakage)?,
                ))
            }
        }
    }
}

/// Samples `K` members i.i.d. from `μ` until the uniform mixture of the
/// sample has mean error and mean leakage at most `ε` for every state
/// sequence (checked exhaustively), or the attempt cap is hit.
pub fn reduce_random_code(rc: &RandomCode, avwc: &Avwc, opts: &ReductionOptions) -> Result<Reduction> {
    if !(opts.epsilon > 0.0) {
        return invalid("ε must be positive");
    }
    if opts.max_attempts == 0 {
        return invalid("at least one sampling attempt is required");
    }
    let k = match opts.k {
        KPreset::AllMembers => {
            if (0..rc.len()).any(|i| (rc.mu().prob(i) - 1.0 / rc.len() as f64).abs() > 1e-12) {
                return invalid("the all-members preset needs a uniformly selected family");
            }
            rc.len()
        }
        preset => k_from_preset(preset, rc.n(), avwc.input_size(), avwc.state_count(), opts.epsilon)?,
    };
    let tables = MemberTables::new(rc, avwc)?;
    let cumulative: Vec<f64> = rc
        .mu()
        .probs()
        .iter()
        .scan(0.0, |acc, &w| {
            *acc += w;
            Some(*acc)
        })
        .collect();
    let mut cache: std::collections::HashMap<usize, (Vec<f64>, Vec<f64>)> = Default::default();
    let mut best_seen = (f64::INFINITY, f64::INFINITY);

    let attempts = if opts.k == KPreset::AllMembers { 1 } else { opts.max_attempts };
    for attempt in 0..attempts {
        let mut rng = stream_rng(opts.seed, attempt as u64);
        let picks: Vec<usize> = if opts.k == KPreset::AllMembers {
            (0..k).collect()
        } else {
            (0..k)
                .map(|_| {
                    let u: f64 = rng.random::<f64>() * cumulative[cumulative.len() - 1];
                    cumulative.partition_point(|&c| c <= u).min(cumulative.len() - 1)
                })
                .collect()
        };
        let mut mean_e: Vec<f64> = Vec::new();
        let mut mean_l: Vec<f64> = Vec::new();
        for &i in &picks {
            if !cache.contains_key(&i) {
                cache.insert(i, tables.get(i)?);
            }
            let (e, l) = &cache[&i];
            if mean_e.is_empty() {
                mean_e = vec![0.0; e.len()];
                mean_l = vec![0.0; l.len()];
            }
            for (m, v) in mean_e.iter_mut().zip(e) {
                *m += v / k as f64;
            }
            for (m, v) in mean_l.iter_mut().zip(l) {
                *m += v / k as f64;
            }
        }
        let (ei, ev) = argmax_first(mean_e.iter().copied());
        let (li, lv) = argmax_first(mean_l.iter().copied());
        if ev.max(lv) < best_seen.0.max(best_seen.1) {
            best_seen = (ev, lv);
        }
        if ev <= opts.epsilon && lv <= opts.epsilon {
            let seq = |i: usize| StateSequence::from_vec_unchecked(word_from_index(i, avwc.state_count(), rc.n()));
            let members = picks.iter().map(|&i| rc.member(i)).collect();
            return Ok(Reduction {
                code: RandomCode::from_members(members, Distribution::uniform(k), CodeOrigin::Reduced)?,
                member_indices: picks,
                attempts: attempt + 1,
                worst_mean_error: ev,
                worst_mean_error_sequence: seq(ei),
                worst_mean_leakage: lv,
                worst_mean_leakage_sequence: seq(li),
            });
        }
    }
    Err(Error::ReductionFailure(format!(
        "no sample of K = {k} members met ε = {} in {attempts} attempts (empirical failure rate {attempts}/{attempts}); \
         closest sample had worst mean error {:.6} and worst mean leakage {:.6}",
        opts.epsilon, best_seen.0, best_seen.1
    )))
}

/// A code for the member index: one word of length `len` per member and a
/// decoder over `B^len` (lexicographic output index to member or erasure).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrefixCode {
    len: usize,
    output_size: usize,
    words: Vec<Vec<usize>>,
    decoder: Vec<Option<usize>>,
}

impl PrefixCode {
    pub fn new(len: usize, input_size: usize, output_size: usize, words: Vec<Vec<usize>>, decoder: Vec<Option<usize>>) -> Result<Self> {
        if len == 0 || words.is_empty() {
            return invalid("prefix code needs a positive length and at least one word");
        }
        if words.iter().any(|w| w.len() != len || w.iter().any(|&a| a >= input_size)) {
            return invalid("prefix word of the wrong length or outside the input alphabet");
        }
        if decoder.len() as u128 != word_count(output_size, len) {
            return invalid("prefix decoder does not cover every output word");
        }
        if decoder.iter().flatten().any(|&i| i >= words.len()) {
            return invalid("prefix decoder names an unknown member");
        }
        Ok(PrefixCode {
            len,
            output_size,
            words,
            decoder,
        })
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn words(&self) -> &[Vec<usize>] {
        &self.words
    }

    pub fn decoder(&self) -> &[Option<usize>] {
        &self.decoder
    }

    /// `(1/K) sum_i (1 - P(F_i | x_i))` with letter `t` sent through `letters[t]`.
    pub fn error_under(&self, letters: &[&Channel]) -> f64 {
        let k = self.words.len() as f64;
        let mut success = 0.0;
        for (i, x) in self.words.iter().enumerate() {
            for (yi, y) in Words::new(self.output_size, self.len).enumerate() {
                if self.decoder[yi] == Some(i) {
                    success += x.iter().zip(&y).zip(letters).map(|((&a, &b), ch)| ch.prob(a, b)).product::<f64>();
                }
            }
        }
        (1.0 - success / k).clamp(0.0, 1.0)
    }
}

/// Size of the largest constant-composition class of length `len`, with the
/// lexicographically first such composition.
fn largest_type_class(alphabet: usize, len: usize) -> Vec<Vec<usize>> {
    let mut best: Option<(Vec<usize>, Vec<Vec<usize>>)> = None;
    let mut classes: std::collections::BTreeMap<Vec<usize>, Vec<Vec<usize>>> = Default::default();
    for w in Words::new(alphabet, len) {
        classes.entry(composition(&w, alphabet)).or_default().push(w);
    }
    for (c, words) in classes {
        if best.as_ref().is_none_or(|(_, b)| words.len() > b.len()) {
            best = Some((c, words));
        }
    }
    best.map(|(_, w)| w).unwrap_or_default()
}

fn hamming(a: &[usize], b: &[usize]) -> usize {
    a.iter().zip(b).filter(|(x, y)| x != y).count()
}

/// Codebook search budget; beyond it a farthest-point greedy choice is used.
const PREFIX_SEARCH_BUDGET: u128 = 2_000_000;

fn binomial(n: usize, k: usize) -> u128 {
    let mut c: u128 = 1;
    for i in 0..k.min(n) {
        c = c.saturating_mul((n - i) as u128) / (i + 1) as u128;
    }
    if k > n {
        0
    } else {
        c
    }
}

/// Picks `k` words from `pool` maximising the minimum pairwise Hamming
/// distance; ties keep the lexicographically first choice of indices.
fn max_min_distance(pool: &[Vec<usize>], k: usize) -> Vec<usize> {
    if binomial(pool.len(), k) > PREFIX_SEARCH_BUDGET {
        let mut chosen = vec![0];
        while chosen.len() < k {
            let next = (0..pool.len())
                .filter(|i| !chosen.contains(i))
                .max_by(|&a, &b| {
                    let da = chosen.iter().map(|&c| hamming(&pool[a], &pool[c])).min().unwrap_or(0);
                    let db = chosen.iter().map(|&c| hamming(&pool[b], &pool[c])).min().unwrap_or(0);
                    da.cmp(&db).then(b.cmp(&a))
                })
                .expect("pool larger than k");
            chosen.push(next);
        }
        chosen.sort_unstable();
        return chosen;
    }
    fn dfs(pool: &[Vec<usize>], k: usize, start: usize, cur: &mut Vec<usize>, cur_min: usize, best: &mut (usize, Vec<usize>)) {
        if cur.len() == k {
            if best.1.is_empty() || cur_min > best.0 {
                *best = (cur_min, cur.clone());
            }
            return;
        }
        for i in start..pool.len() {
            if pool.len() - i < k - cur.len() {
                break;
            }
            let d = cur.iter().map(|&c| hamming(&pool[i], &pool[c])).min().unwrap_or(usize::MAX);
            let m = cur_min.min(d);
            if !best.1.is_empty() && m <= best.0 {
                continue;
            }
            cur.push(i);
            dfs(pool, k, i + 1, cur, m, best);
            cur.pop();
        }
    }
    let mut best = (0, Vec::new());
    dfs(pool, k, 0, &mut Vec::new(), usize::MAX, &mut best);
    if best.1.is_empty() {
        // Every choice has minimum distance 0; take the first k words.
        return (0..k).collect();
    }
    best.1
}

/// Searches a `k`-word prefix code of length `len` for the main AVC:
/// constant-composition pool, max-min Hamming distance codebook, and a
/// maximum-likelihood decoder under the uniform state mixture (ties are
/// erasures). Fails if no word set exists or if the code is no better than
/// guessing for some state sequence.
pub fn search_prefix_code(avwc: &Avwc, k: usize, len: usize) -> Result<PrefixCode> {
    if k == 0 || len == 0 {
        return invalid("prefix search needs k >= 1 and a positive length");
    }
    let (a, b) = (avwc.input_size(), avwc.main_output_size());
    ensure_enumerable(
        "prefix code search",
        word_count(a, len).max(word_count(b, len)).saturating_mul(word_count(avwc.state_count(), len)),
    )?;
    if word_count(a, len) < k as u128 {
        return Err(Error::PrefixSearchFailure(format!(
            "only {} words of length {len} for {k} members",
            word_count(a, len)
        )));
    }
    let class = largest_type_class(a, len);
    let pool: Vec<Vec<usize>> = if class.len() >= k { class } else { Words::new(a, len).collect() };
    let words: Vec<Vec<usize>> = max_min_distance(&pool, k).into_iter().map(|i| pool[i].clone()).collect();

    let uniform = mixture_unchecked(avwc.main(), &vec![1.0 / avwc.state_count() as f64; avwc.state_count()]);
    let decoder: Vec<Option<usize>> = if k == 1 {
        vec![Some(0); word_count(b, len) as usize]
    } else {
        Words::new(b, len)
            .map(|y| {
                let lik: Vec<f64> = words.iter().map(|x| word_prob(&uniform, x, &y)).collect();
                let (i, m) = argmax_first(lik.iter().copied());
                let ties = lik.iter().filter(|&&v| v >= m * (1.0 - 1e-12)).count();
                (m > 0.0 && ties == 1).then_some(i)
            })
            .collect()
    };
    let code = PrefixCode::new(len, a, b, words, decoder)?;
    if k > 1 {
        let worst = Words::new(avwc.state_count(), len)
            .map(|s| {
                let letters: Vec<&Channel> = s.iter().map(|&v| &avwc.main()[v]).collect();
                code.error_under(&letters)
            })
            .fold(0.0, f64::max);
        if worst >= 1.0 - 1.0 / k as f64 {
            return Err(Error::PrefixSearchFailure(format!(
                "best prefix code of length {len} for {k} members has worst-case error {worst:.6}, no better than guessing"
            )));
        }
    }
    Ok(code)
}

#[derive(Debug, Clone, PartialEq)]
pub enum PrefixChoice {
    Search { len: usize },
    Supplied(PrefixCode),
}

/// Exact checks of the concatenated code against its members.
#[derive(Debug, Clone, PartialEq)]
pub struct EliminationReport {
    /// Largest average error of the concatenated code over `s^{k+n}`.
    pub worst_error: f64,
    pub worst_error_sequence: StateSequence,
    /// Same, counting a wrong member index as an error too.
    pub worst_pair_error: f64,
    pub worst_prefix_error: f64,
    pub worst_mean_member_error: f64,
    pub worst_leakage: f64,
    pub worst_leakage_sequence: StateSequence,
    pub worst_mean_member_leakage: f64,
    /// `e(s) <= prefix error(s^k) + mean member error(s^n)` for every `s`.
    pub error_bound_holds: bool,
    /// `I(J; Z | s) <= mean member leakage(s^n)` for every `s`.
    pub leakage_bound_holds: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Elimination {
    pub code: WiretapCode,
    pub prefix: PrefixCode,
    pub report: EliminationReport,
}

/// Concatenates a prefix code for the member index with the members: the
/// codeword for message `j` under member `i` and index `l` is
/// `x_i ++ x^i_{jl}`, the member index is drawn uniformly by the encoder, and
/// `y` decodes to `D^{F(y_prefix)}(y_rest)`.
pub fn eliminate_randomness(reduced: &RandomCode, avwc: &Avwc, prefix: PrefixChoice) -> Result<Elimination> {
    let k = reduced.len();
    let members: Vec<WiretapCode> = (0..k).map(|i| reduced.member(i)).collect();
    let first = &members[0];
    first.check_against(avwc)?;
    if members.iter().any(|m| m.l_count() != first.l_count()) {
        return invalid("members use different randomisation counts");
    }
    if (0..k).any(|i| (reduced.mu().prob(i) - 1.0 / k as f64).abs() > 1e-12) {
        return invalid("elimination needs a uniformly selected family");
    }
    let prefix = match prefix {
        PrefixChoice::Search { len } => search_prefix_code(avwc, k, len)?,
        PrefixChoice::Supplied(p) => {
            if p.words.len() != k {
                return invalid(format!("prefix code has {} words for {k} members", p.words.len()));
            }
            if p.output_size != avwc.main_output_size() {
                return invalid("prefix code decoder has the wrong output alphabet");
            }
            p
        }
    };
    let (n, kp) = (first.n(), prefix.len);
    let (jn, ln) = (first.j_count(), first.l_count());
    let total = n + kp;
    let (b, c, ns) = (avwc.main_output_size(), avwc.eaves_output_size(), avwc.state_count());
    ensure_enumerable(
        "concatenated code evaluation",
        word_count(ns, total).saturating_mul(word_count(b.max(c), total)),
    )?;

    let mut codewords = Vec::with_capacity(jn * k * ln);
    for j in 0..jn {
        for (i, m) in members.iter().enumerate() {
            for l in 0..ln {
                let mut w = prefix.words[i].clone();
                w.extend_from_slice(m.codeword(j, l));
                codewords.push(w);
            }
        }
    }
    let suffix_outputs = word_count(b, n) as usize;
    let decoder: Vec<Option<usize>> = (0..word_count(b, total) as usize)
        .map(|y| prefix.decoder[y / suffix_outputs].and_then(|i| members[i].decode(y % suffix_outputs)))
        .collect();
    let code = WiretapCode::new(total, jn, k * ln, avwc.input_size(), b, codewords, decoder)?;

    let member_tables: Vec<(Vec<f64>, Vec<f64>)> = members
        .iter()
        .map(|m| Ok((objective_table(m, avwc, Objective::Error)?, objective_table(m, avwc, Objective::Leakage)?)))
        .collect::<Result<_>>()?;
    let mean = |t: usize, which: fn(&(Vec<f64>, Vec<f64>)) -> &Vec<f64>| -> f64 {
        member_tables.iter().map(|m| which(m)[t]).sum::<f64>() / k as f64
    };
    let suffix_states = word_count(ns, n) as usize;
    let mean_err: Vec<f64> = (0..suffix_states).map(|t| mean(t, |m| &m.0)).collect();
    let mean_leak: Vec<f64> = (0..suffix_states).map(|t| mean(t, |m| &m.1)).collect();
    let prefix_err: Vec<f64> = Words::new(ns, kp)
        .map(|s| {
            let letters: Vec<&Channel> = s.iter().map(|&v| &avwc.main()[v]).collect();
            prefix.error_under(&letters)
        })
        .collect();
    // P(F = i | x_i, s^k) for the pair error.
    let prefix_hits: Vec<Vec<f64>> = Words::new(ns, kp)
        .map(|s| {
            let letters: Vec<&Channel> = s.iter().map(|&v| &avwc.main()[v]).collect();
            prefix
                .words
                .iter()
                .enumerate()
                .map(|(i, x)| {
                    Words::new(b, kp)
                        .enumerate()
                        .filter(|(yi, _)| prefix.decoder[*yi] == Some(i))
                        .map(|(_, y)| x.iter().zip(&y).zip(&letters).map(|((&a, &bb), ch)| ch.prob(a, bb)).product::<f64>())
                        .sum()
                })
                .collect()
        })
        .collect();

    let rows: Vec<(f64, f64, f64)> = (0..word_count(ns, total) as usize)
        .into_par_iter()
        .map(|si| {
            let s = word_from_index(si, ns, total);
            let main: Vec<&Channel> = s.iter().map(|&v| &avwc.main()[v]).collect();
            let eaves: Vec<&Channel> = s.iter().map(|&v| &avwc.eaves()[v]).collect();
            let sp = si / suffix_states;
            let pair_success: f64 = members
                .iter()
                .enumerate()
                .map(|(i, m)| {
                    let suffix: Vec<&Channel> = main[kp..].to_vec();
                    prefix_hits[sp][i] * (1.0 - error_under(m, &suffix))
                })
                .sum::<f64>()
                / k as f64;
            (error_under(&code, &main), leakage_under(&code, &eaves), 1.0 - pair_success)
        })
        .collect();

    let mut error_bound_holds = true;
    let mut leakage_bound_holds = true;
    for (si, &(e, l, _)) in rows.iter().enumerate() {
        let (sp, sr) = (si / suffix_states, si % suffix_states);
        if e > prefix_err[sp] + mean_err[sr] + 1e-12 {
            error_bound_holds = false;
        }
        if l > mean_leak[sr] + 1e-9 {
            leakage_bound_holds = false;
        }
    }
    let seq = |i: usize| StateSequence::from_vec_unchecked(word_from_index(i, ns, total));
    let (ei, ev) = argmax_first(rows.iter().map(|r| r.0));
    let (li, lv) = argmax_first(rows.iter().map(|r| r.1));
    let report = EliminationReport {
        worst_error: ev,
        worst_error_sequence: seq(ei),
        worst_pair_error: rows.iter().map(|r| r.2).fold(0.0, f64::max),
        worst_prefix_error: prefix_err.iter().copied().fold(0.0, f64::max),
        worst_mean_member_error: mean_err.iter().copied().fold(0.0, f64::max),
        worst_leakage: lv,
        worst_leakage_sequence: seq(li),
        worst_mean_member_leakage: mean_leak.iter().copied().fold(0.0, f64::max),
        error_bound_holds,
        leakage_bound_holds,
    };
    Ok(Elimination { code, prefix, report })
}
