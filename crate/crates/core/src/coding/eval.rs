//! Exact evaluation of average error and leakage per state sequence, under
//! product mixtures, and the worst-sequence searches.

use rayon::prelude::*;

use super::code::WiretapCode;
use crate::channel::{
    ensure_enumerable, mixture_channel, product_output_distribution, word_count, word_from_index,
    Avwc, Channel, Distribution, StateSequence, Words,
};
use crate::error::{invalid, Error, Result};
use crate::info::kl_of;
use crate::optim::stream_rng;
use rand::Rng;

/// Average error `1 - (1/JL) sum_{j,l} W(D_j | x_{jl})` when letter `i` goes
/// through `letters[i]`.
pub fn error_under(code: &WiretapCode, letters: &[&Channel]) -> f64 {
    let mut success = 0.0;
    for (k, x) in code.codewords().iter().enumerate() {
        let j = k / code.l_count();
        let out = product_output_distribution(letters, x);
        success += out
            .iter()
            .zip(code.decoder())
            .filter(|(_, d)| **d == Some(j))
            .map(|(p, _)| p)
            .sum::<f64>();
    }
    (1.0 - success / code.codewords().len() as f64).clamp(0.0, 1.0)
}

/// Conditional output laws `p(z | j)` under the per-letter channels.
fn message_outputs(code: &WiretapCode, letters: &[&Channel]) -> Vec<Vec<f64>> {
    let l = code.l_count() as f64;
    (0..code.j_count())
        .map(|j| {
            let mut acc: Vec<f64> = Vec::new();
            for li in 0..code.l_count() {
                let out = product_output_distribution(letters, code.codeword(j, li));
                if acc.is_empty() {
                    acc = vec![0.0; out.len()];
                }
                for (a, v) in acc.iter_mut().zip(out) {
                    *a += v / l;
                }
            }
            acc
        })
        .collect()
}

/// `I(J; Z^n)` in bits for uniform `J` and the uniform stochastic encoder.
pub fn leakage_under(code: &WiretapCode, letters: &[&Channel]) -> f64 {
    leakage_of_conditionals(&message_outputs(code, letters))
}

pub(crate) fn leakage_of_conditionals(conditionals: &[Vec<f64>]) -> f64 {
    let jn = conditionals.len() as f64;
    let mut marginal = vec![0.0; conditionals[0].len()];
    for c in conditionals {
        for (m, v) in marginal.iter_mut().zip(c) {
            *m += v / jn;
        }
    }
    let total: f64 = conditionals.iter().map(|c| kl_of(c, &marginal)).sum::<f64>() / jn;
    total.max(0.0)
}

fn check_sequence(code: &WiretapCode, avwc: &Avwc, s: &StateSequence) -> Result<()> {
    code.check_against(avwc)?;
    if s.len() != code.n() {
        return invalid(format!("state sequence has length {}, code has {}", s.len(), code.n()));
    }
    if s.symbols().iter().any(|&v| v >= avwc.state_count()) {
        return invalid("state outside the state set");
    }
    Ok(())
}

/// `e(s^n | C)`.
pub fn sequence_error(code: &WiretapCode, avwc: &Avwc, s: &StateSequence) -> Result<f64> {
    check_sequence(code, avwc, s)?;
    let letters: Vec<&Channel> = s.symbols().iter().map(|&v| &avwc.main()[v]).collect();
    Ok(error_under(code, &letters))
}

/// `I(J; Z^n)` under the eavesdropper channel of `s^n`.
pub fn sequence_leakage(code: &WiretapCode, avwc: &Avwc, s: &StateSequence) -> Result<f64> {
    check_sequence(code, avwc, s)?;
    if avwc.eaves_output_size() == 0 {
        return invalid("eavesdropper alphabet is empty");
    }
    let letters: Vec<&Channel> = s.symbols().iter().map(|&v| &avwc.eaves()[v]).collect();
    Ok(leakage_under(code, &letters))
}

fn mixture_letters(family: &[Channel], qs: &[Distribution], n: usize) -> Result<Vec<Channel>> {
    if qs.len() != n {
        return invalid(format!("{} per-letter state laws for block length {n}", qs.len()));
    }
    qs.iter().map(|q| mixture_channel(family, q)).collect()
}

/// Average error under the product mixture `prod_i W_{q_i}`.
pub fn mixture_error(code: &WiretapCode, avwc: &Avwc, qs: &[Distribution]) -> Result<f64> {
    code.check_against(avwc)?;
    let letters = mixture_letters(avwc.main(), qs, code.n())?;
    Ok(error_under(code, &letters.iter().collect::<Vec<_>>()))
}

/// Leakage under the product mixture `prod_i V_{q_i}`.
pub fn mixture_leakage(code: &WiretapCode, avwc: &Avwc, qs: &[Distribution]) -> Result<f64> {
    code.check_against(avwc)?;
    let letters = mixture_letters(avwc.eaves(), qs, code.n())?;
    Ok(leakage_under(code, &letters.iter().collect::<Vec<_>>()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EvalMode {
    Exhaustive,
    /// Monte Carlo estimate of the error with `trials` transmissions per
    /// state sequence. Leakage stays exact.
    Sampled { trials: usize, seed: u64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct SequenceEval {
    pub sequence: StateSequence,
    pub error: f64,
    pub leakage_bits: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvalReport {
    pub worst_state_error: f64,
    pub worst_state_sequence: StateSequence,
    pub worst_leakage_bits: f64,
    pub worst_leakage_sequence: StateSequence,
    /// One row per state sequence in lexicographic order, when requested.
    pub per_sequence: Option<Vec<SequenceEval>>,
}

/// Error and leakage for every state sequence, indexed lexicographically.
pub fn sequence_table(code: &WiretapCode, avwc: &Avwc, mode: EvalMode) -> Result<Vec<(f64, f64)>> {
    code.check_against(avwc)?;
    let n = code.n();
    let states = word_count(avwc.state_count(), n);
    let codewords = code.codewords().len() as u128;
    let leak_work = states
        .saturating_mul(word_count(avwc.eaves_output_size(), n))
        .saturating_mul(codewords);
    if let Err(Error::ResourceLimit { required, cap, .. }) =
        ensure_enumerable("leakage evaluation", leak_work)
    {
        return Err(Error::ResourceLimit {
            what: "exact leakage evaluation (leakage is never estimated by sampling)".into(),
            required,
            cap,
        });
    }
    if mode == EvalMode::Exhaustive {
        ensure_enumerable(
            "error evaluation",
            states.saturating_mul(word_count(code.output_size(), n)),
        )?;
    }
    if let EvalMode::Sampled { trials, .. } = mode {
        if trials == 0 {
            return invalid("sampled evaluation needs at least one trial");
        }
    }
    let rows = (0..states as usize)
        .into_par_iter()
        .map(|si| {
            let s = word_from_index(si, avwc.state_count(), n);
            let main: Vec<&Channel> = s.iter().map(|&v| &avwc.main()[v]).collect();
            let eaves: Vec<&Channel> = s.iter().map(|&v| &avwc.eaves()[v]).collect();
            let error = match mode {
                EvalMode::Exhaustive => error_under(code, &main),
                EvalMode::Sampled { trials, seed } => sampled_error(code, &main, trials, seed, si as u64),
            };
            (error, leakage_under(code, &eaves))
        })
        .collect();
    Ok(rows)
}

fn sampled_error(code: &WiretapCode, letters: &[&Channel], trials: usize, seed: u64, stream: u64) -> f64 {
    let mut rng = stream_rng(seed, stream);
    let b = code.output_size();
    let mut errors = 0usize;
    for _ in 0..trials {
        let k = rng.random_range(0..code.codewords().len());
        let x = &code.codewords()[k];
        let mut y = 0usize;
        for (ch, &xi) in letters.iter().zip(x) {
            let u: f64 = rng.random();
            let row = ch.row(xi);
            let mut acc = 0.0;
            let mut out = b - 1;
            for (yb, &w) in row.iter().enumerate() {
                acc += w;
                if u < acc {
                    out = yb;
                    break;
                }
            }
            y = y * b + out;
        }
        if code.decode(y) != Some(k / code.l_count()) {
            errors += 1;
        }
    }
    errors as f64 / trials as f64
}

/// First index of the maximum (ties go to the lexicographically smallest).
pub(crate) fn argmax_first(values: impl Iterator<Item = f64>) -> (usize, f64) {
    values
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |best, (i, v)| if v > best.1 { (i, v) } else { best })
}

/// Worst-case error and leakage over all state sequences.
pub fn evaluate_code(code: &WiretapCode, avwc: &Avwc, mode: EvalMode, keep_table: bool) -> Result<EvalReport> {
    let table = sequence_table(code, avwc, mode)?;
    let (k, n) = (avwc.state_count(), code.n());
    let seq = |i: usize| StateSequence::from_vec_unchecked(word_from_index(i, k, n));
    let (ei, ev) = argmax_first(table.iter().map(|r| r.0));
    let (li, lv) = argmax_first(table.iter().map(|r| r.1));
    let per_sequence = keep_table.then(|| {
        table
            .iter()
            .enumerate()
            .map(|(i, &(error, leakage_bits))| SequenceEval {
                sequence: seq(i),
                error,
                leakage_bits,
            })
            .collect()
    });
    Ok(EvalReport {
        worst_state_error: ev,
        worst_state_sequence: seq(ei),
        worst_leakage_bits: lv,
        worst_leakage_sequence: seq(li),
        per_sequence,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Objective {
    Error,
    Leakage,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchMode {
    Exhaustive,
    /// Coordinate ascent from every constant sequence; the value is a lower
    /// bound on the true maximum.
    Greedy,
}

/// Maximising state sequence for the chosen objective.
pub fn worst_state_search(
    code: &WiretapCode,
    avwc: &Avwc,
    objective: Objective,
    mode: SearchMode,
) -> Result<(StateSequence, f64)> {
    code.check_against(avwc)?;
    let (k, n) = (avwc.state_count(), code.n());
    let value = |s: &[usize]| -> f64 {
        match objective {
            Objective::Error => {
                let letters: Vec<&Channel> = s.iter().map(|&v| &avwc.main()[v]).collect();
                error_under(code, &letters)
            }
            Objective::Leakage => {
                let letters: Vec<&Channel> = s.iter().map(|&v| &avwc.eaves()[v]).collect();
                leakage_under(code, &letters)
            }
        }
    };
    match mode {
        SearchMode::Exhaustive => {
            let out = match objective {
                Objective::Error => avwc.main_output_size(),
                Objective::Leakage => avwc.eaves_output_size(),
            };
            ensure_enumerable(
                "worst-sequence search",
                word_count(k, n)
                    .saturating_mul(word_count(out, n))
                    .saturating_mul(code.codewords().len() as u128),
            )?;
            let seqs: Vec<Vec<usize>> = Words::new(k, n).collect();
            let values: Vec<f64> = seqs.par_iter().map(|s| value(s)).collect();
            let (i, v) = argmax_first(values.into_iter());
            Ok((StateSequence::from_vec_unchecked(seqs[i].clone()), v))
        }
        SearchMode::Greedy => {
            let mut best: Option<(Vec<usize>, f64)> = None;
            for start in 0..k {
                let mut s = vec![start; n];
                let mut v = value(&s);
                loop {
                    let mut improved = false;
                    for i in 0..n {
                        for state in 0..k {
                            if state == s[i] {
                                continue;
                            }
                            let old = std::mem::replace(&mut s[i], state);
                            let cand = value(&s);
                            if cand > v {
                                v = cand;
                                improved = true;
                            } else {
                                s[i] = old;
                            }
                        }
                    }
                    if !improved {
                        break;
                    }
                }
                let better = match &best {
                    None => true,
                    Some((bs, bv)) => v > *bv || (v == *bv && s < *bs),
                };
                if better {
                    best = Some((s, v));
                }
            }
            let (s, v) = best.expect("at least one state");
            Ok((StateSequence::from_vec_unchecked(s), v))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bsc(e: f64) -> Channel {
        Channel::bsc(e).unwrap()
    }

    fn repetition(n: usize) -> WiretapCode {
        let outputs = 1usize << n;
        let decoder = (0..outputs)
            .map(|y| {
                let ones = (y as u32).count_ones() as usize;
                if 2 * ones > n {
                    Some(1)
                } else if 2 * ones < n {
                    Some(0)
                } else {
                    None
                }
            })
            .collect();
        WiretapCode::new(n, 2, 1, 2, 2, vec![vec![0; n], vec![1; n]], decoder).unwrap()
    }

    #[test]
    fn independent_eavesdropper_learns_nothing() {
        let flat = Channel::constant(2, &Distribution::uniform(2));
        let avwc = Avwc::new(vec![bsc(0.1), bsc(0.2)], vec![flat.clone(), flat]).unwrap();
        let r = evaluate_code(&repetition(3), &avwc, EvalMode::Exhaustive, false).unwrap();
        assert!(r.worst_leakage_bits.abs() < 1e-15);
    }

    #[test]
    fn noiseless_eavesdropper_learns_everything() {
        let avwc = Avwc::new(vec![bsc(0.1)], vec![Channel::identity(2)]).unwrap();
        let r = evaluate_code(&repetition(3), &avwc, EvalMode::Exhaustive, false).unwrap();
        assert!((r.worst_leakage_bits - 1.0).abs() < 1e-12);
    }

    #[test]
    fn repetition_error_matches_closed_form() {
        let avwc = Avwc::new(vec![bsc(0.1), bsc(0.3)], vec![bsc(0.4), bsc(0.4)]).unwrap();
        let r = evaluate_code(&repetition(3), &avwc, EvalMode::Exhaustive, true).unwrap();
        let e = |p: f64| 3.0 * p * p * (1.0 - p) + p * p * p;
        assert!((r.worst_state_error - e(0.3)).abs() < 1e-12);
        assert_eq!(r.worst_state_sequence.symbols(), &[1, 1, 1]);
        assert_eq!(r.per_sequence.unwrap().len(), 8);
    }

    #[test]
    fn sampled_error_is_close_and_leakage_exact() {
        let avwc = Avwc::new(vec![bsc(0.1), bsc(0.3)], vec![bsc(0.2), bsc(0.4)]).unwrap();
        let code = repetition(3);
        let exact = evaluate_code(&code, &avwc, EvalMode::Exhaustive, false).unwrap();
        let sampled = evaluate_code(&code, &avwc, EvalMode::Sampled { trials: 20_000, seed: 3 }, false).unwrap();
        assert!((sampled.worst_state_error - exact.worst_state_error).abs() < 0.02);
        assert_eq!(sampled.worst_leakage_bits, exact.worst_leakage_bits);
    }

    #[test]
    fn worst_state_searches() {
        let avwc = Avwc::new(vec![Channel::identity(2), bsc(0.3)], vec![bsc(0.4), bsc(0.4)]).unwrap();
        let code = repetition(3);
        let (s, v) = worst_state_search(&code, &avwc, Objective::Error, SearchMode::Exhaustive).unwrap();
        assert_eq!(s.symbols(), &[1, 1, 1]);
        let (_, g) = worst_state_search(&code, &avwc, Objective::Error, SearchMode::Greedy).unwrap();
        assert!(g <= v + 1e-15);

        let single = Avwc::new(vec![bsc(0.1)], vec![bsc(0.2)]).unwrap();
        let (s, _) = worst_state_search(&code, &single, Objective::Leakage, SearchMode::Exhaustive).unwrap();
        assert_eq!(s.symbols(), &[0, 0, 0]);
    }

    #[test]
    fn permuted_member_sees_permuted_states() {
        let avwc = Avwc::new(vec![bsc(0.05), bsc(0.3)], vec![bsc(0.2), bsc(0.45)]).unwrap();
        let code = WiretapCode::new(
            3,
            2,
            2,
            2,
            2,
            vec![vec![0, 0, 1], vec![0, 1, 0], vec![1, 1, 0], vec![1, 0, 1]],
            (0..8).map(|y: usize| if y.count_ones() >= 2 { Some(1) } else { Some(0) }).collect(),
        )
        .unwrap();
        let sigma = [2, 0, 1];
        let perm = code.permuted(&sigma);
        for s in Words::new(2, 3) {
            let pis: Vec<usize> = sigma.iter().map(|&i| s[i]).collect();
            let a = sequence_error(&perm, &avwc, &StateSequence::new(s.clone(), 2).unwrap()).unwrap();
            let b = sequence_error(&code, &avwc, &StateSequence::new(pis.clone(), 2).unwrap()).unwrap();
            assert!((a - b).abs() < 1e-14);
            let a = sequence_leakage(&perm, &avwc, &StateSequence::new(s, 2).unwrap()).unwrap();
            let b = sequence_leakage(&code, &avwc, &StateSequence::new(pis, 2).unwrap()).unwrap();
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn leakage_refused_beyond_cap() {
        let avwc = Avwc::new(vec![Channel::identity(4); 4], vec![Channel::identity(4); 4]).unwrap();
        // 4^n decoder entries fit, but 4^n states x 4^n outputs x codewords do not.
        let n = 10;
        let code = WiretapCode::new(n, 1, 1, 4, 4, vec![vec![0; n]], vec![Some(0); 1 << 20]).unwrap();
        let err = evaluate_code(&code, &avwc, EvalMode::Sampled { trials: 10, seed: 0 }, false).unwrap_err();
        assert!(matches!(err, Error::ResourceLimit { ref what, .. } if what.contains("never estimated")));
    }
}
