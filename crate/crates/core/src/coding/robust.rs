//! Robustification: the family of all coordinate permutations of a code,
//! selected uniformly. Averages over the family only depend on the type of
//! the state sequence, which gives a fast path that avoids materialising
//! `n!` codes.

use std::collections::HashMap;

use rayon::prelude::*;

use super::code::{factorial, RandomCode, WiretapCode};
use super::eval::{error_under, leakage_under, Objective};
use crate::channel::{
    ensure_enumerable, iid_extension, word_count, word_from_index, word_index, Avwc, Channel,
    Distribution, StateSequence,
};
use crate::error::{invalid, Error, Result};
use crate::optim::simplex_grid;
use super::typicality::composition;

/// The uniform permutation family `{C^π}` of `code`. Members are built on
/// demand by [`RandomCode::member`].
pub fn robustify(code: &WiretapCode, avwc: &Avwc) -> Result<RandomCode> {
    code.check_against(avwc)?;
    let count = factorial(code.n()).filter(|&c| (c as u128) <= crate::channel::enumeration_cap() as u128);
    let Some(count) = count else {
        return Err(Error::ResourceLimit {
            what: format!("{}! permutation members", code.n()),
            required: factorial(code.n()).map_or(u128::MAX, |c| c as u128),
            cap: crate::channel::enumeration_cap(),
        });
    };
    Ok(RandomCode::permutation_family(code.clone(), count))
}

/// Value of `objective` for `code` at every state sequence, lexicographic.
pub fn objective_table(code: &WiretapCode, avwc: &Avwc, objective: Objective) -> Result<Vec<f64>> {
    code.check_against(avwc)?;
    let (k, n) = (avwc.state_count(), code.n());
    let out = match objective {
        Objective::Error => avwc.main_output_size(),
        Objective::Leakage => avwc.eaves_output_size(),
    };
    ensure_enumerable(
        "per-sequence evaluation",
        word_count(k, n)
            .saturating_mul(word_count(out, n))
            .saturating_mul(code.codewords().len() as u128),
    )?;
    let family = match objective {
        Objective::Error => avwc.main(),
        Objective::Leakage => avwc.eaves(),
    };
    Ok((0..word_count(k, n) as usize)
        .into_par_iter()
        .map(|si| {
            let letters: Vec<&Channel> = word_from_index(si, k, n).iter().map(|&v| &family[v]).collect();
            match objective {
                Objective::Error => error_under(code, &letters),
                Objective::Leakage => leakage_under(code, &letters),
            }
        })
        .collect())
}

/// Averages `table` over type classes: entry `s` becomes the mean over all
/// sequences with the same composition as `s`.
pub fn type_class_average(table: &[f64], state_count: usize, n: usize) -> Vec<f64> {
    let mut sums: HashMap<Vec<usize>, (f64, usize)> = HashMap::new();
    let comps: Vec<Vec<usize>> = (0..table.len())
        .map(|i| composition(&word_from_index(i, state_count, n), state_count))
        .collect();
    for (c, &v) in comps.iter().zip(table) {
        let e = sums.entry(c.clone()).or_insert((0.0, 0));
        e.0 += v;
        e.1 += 1;
    }
    comps.iter().map(|c| {
        let (s, k) = sums[c];
        s / k as f64
    }).collect()
}

/// Table of member `sigma` of a permutation family, read off the base table:
/// `value(s | C^π) = value(π(s) | C)` with `π(s)_i = s_{sigma(i)}`.
pub fn permuted_table(base: &[f64], sigma: &[usize], state_count: usize) -> Vec<f64> {
    let n = sigma.len();
    (0..base.len())
        .map(|si| {
            let s = word_from_index(si, state_count, n);
            let image: Vec<usize> = sigma.iter().map(|&i| s[i]).collect();
            base[word_index(&image, state_count)]
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AverageMethod {
    /// Materialise every member and average with the selection weights.
    Explicit,
    /// Type-class averaging of the base table; permutation families only.
    TypeClass,
}

/// `E_μ value(s | C^K)` for every state sequence.
pub fn mean_member_table(rc: &RandomCode, avwc: &Avwc, objective: Objective, method: AverageMethod) -> Result<Vec<f64>> {
    match method {
        AverageMethod::TypeClass => {
            let base = rc
                .base()
                .ok_or_else(|| Error::InvalidArgument("type-class averaging needs a permutation family".into()))?;
            let table = objective_table(base, avwc, objective)?;
            Ok(type_class_average(&table, avwc.state_count(), base.n()))
        }
        AverageMethod::Explicit => {
            let mut acc: Option<Vec<f64>> = None;
            for i in 0..rc.len() {
                let t = objective_table(&rc.member(i), avwc, objective)?;
                let w = rc.mu().prob(i);
                let a = acc.get_or_insert_with(|| vec![0.0; t.len()]);
                for (x, v) in a.iter_mut().zip(t) {
                    *x += w * v;
                }
            }
            Ok(acc.expect("nonempty family"))
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RobustnessRow {
    pub sequence: StateSequence,
    /// `(1/n!) sum_π f(π(s))`.
    pub lhs: f64,
    /// `1 - 3 (n+1)^{|S|} γ`.
    pub rhs: f64,
    pub slack: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RobustificationReport {
    pub gamma: f64,
    pub rows: Vec<RobustnessRow>,
    pub min_slack: f64,
    pub holds: bool,
}

/// Checks the robustification inequality for `f(s) = 1 - e(s | code)` at
/// every state sequence. `γ = 1 - min_q sum_s f(s) q^n(s)` with `q` ranging
/// over `q_set`, by default the types of denominator `n`.
pub fn verify_robustification(code: &WiretapCode, avwc: &Avwc, q_set: Option<&[Distribution]>) -> Result<RobustificationReport> {
    let (k, n) = (avwc.state_count(), code.n());
    let f: Vec<f64> = objective_table(code, avwc, Objective::Error)?
        .into_iter()
        .map(|e| 1.0 - e)
        .collect();
    let default_set: Vec<Distribution>;
    let qs = match q_set {
        Some(qs) => {
            if qs.iter().any(|q| q.support_size() != k) {
                return invalid("state law of the wrong size");
            }
            qs
        }
        None => {
            default_set = simplex_grid(k, n)
                .into_iter()
                .map(|q| Distribution::new(q).expect("grid point is a distribution"))
                .collect();
            &default_set
        }
    };
    if qs.is_empty() {
        return invalid("empty set of state laws");
    }
    let mut worst = f64::INFINITY;
    for q in qs {
        let weights = iid_extension(q, n)?;
        let v: f64 = f.iter().zip(weights.probs()).map(|(a, b)| a * b).sum();
        worst = worst.min(v);
    }
    let gamma = (1.0 - worst).clamp(0.0, 1.0);
    let rhs = 1.0 - 3.0 * ((n + 1) as f64).powi(k as i32) * gamma;
    let lhs = type_class_average(&f, k, n);
    let rows: Vec<RobustnessRow> = lhs
        .iter()
        .enumerate()
        .map(|(i, &l)| RobustnessRow {
            sequence: StateSequence::from_vec_unchecked(word_from_index(i, k, n)),
            lhs: l,
            rhs,
            slack: l - rhs,
        })
        .collect();
    let min_slack = rows.iter().map(|r| r.slack).fold(f64::INFINITY, f64::min);
    Ok(RobustificationReport {
        gamma,
        holds: min_slack >= -1e-12,
        rows,
        min_slack,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bsc(e: f64) -> Channel {
        Channel::bsc(e).unwrap()
    }

    fn code() -> WiretapCode {
        WiretapCode::new(
            3,
            2,
            2,
            2,
            2,
            vec![vec![0, 0, 1], vec![0, 1, 0], vec![1, 1, 0], vec![1, 0, 1]],
            (0..8).map(|y: usize| if y.count_ones() >= 2 { Some(1) } else { Some(0) }).collect(),
        )
        .unwrap()
    }

    #[test]
    fn single_letter_family_is_trivial() {
        let avwc = Avwc::new(vec![bsc(0.1)], vec![bsc(0.2)]).unwrap();
        let c = WiretapCode::new(1, 2, 1, 2, 2, vec![vec![0], vec![1]], vec![Some(0), Some(1)]).unwrap();
        let rc = robustify(&c, &avwc).unwrap();
        assert_eq!(rc.len(), 1);
        assert_eq!(rc.member(0), c);
    }

    #[test]
    fn averages_agree() {
        let avwc = Avwc::new(vec![bsc(0.05), bsc(0.3)], vec![bsc(0.2), bsc(0.45)]).unwrap();
        let rc = robustify(&code(), &avwc).unwrap();
        assert_eq!(rc.len(), 6);
        for obj in [Objective::Error, Objective::Leakage] {
            let a = mean_member_table(&rc, &avwc, obj, AverageMethod::Explicit).unwrap();
            let b = mean_member_table(&rc, &avwc, obj, AverageMethod::TypeClass).unwrap();
            for (x, y) in a.iter().zip(&b) {
                assert!((x - y).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn permuted_table_matches_materialised_member() {
        let avwc = Avwc::new(vec![bsc(0.05), bsc(0.3)], vec![bsc(0.2), bsc(0.45)]).unwrap();
        let rc = robustify(&code(), &avwc).unwrap();
        let base = objective_table(&code(), &avwc, Objective::Error).unwrap();
        for i in 0..rc.len() {
            let direct = objective_table(&rc.member(i), &avwc, Objective::Error).unwrap();
            let via = permuted_table(&base, &rc.member_permutation(i).unwrap(), 2);
            for (x, y) in direct.iter().zip(&via) {
                assert!((x - y).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn constant_f_satisfies_inequality() {
        // A state-independent main channel makes f constant.
        let avwc = Avwc::new(vec![bsc(0.1), bsc(0.1)], vec![bsc(0.2), bsc(0.2)]).unwrap();
        let r = verify_robustification(&code(), &avwc, None).unwrap();
        assert!(r.holds);
        for row in &r.rows {
            assert!((row.lhs - (1.0 - r.gamma)).abs() < 1e-12);
        }
    }

    #[test]
    fn perfect_code_has_zero_gamma() {
        let avwc = Avwc::new(vec![Channel::identity(2), Channel::identity(2)], vec![bsc(0.2), bsc(0.2)]).unwrap();
        let c = WiretapCode::new(2, 2, 1, 2, 2, vec![vec![0, 0], vec![1, 1]], vec![Some(0), Some(0), Some(1), Some(1)]).unwrap();
        let r = verify_robustification(&c, &avwc, None).unwrap();
        assert_eq!(r.gamma, 0.0);
        assert!(r.rows.iter().all(|row| (row.lhs - 1.0).abs() < 1e-15));
    }
}
