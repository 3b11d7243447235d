//! Concentration events behind the secrecy argument: the Chernoff bound and
//! the per-message check that the averaged eavesdropper laws stay close to
//! their expectation.

use super::code::WiretapCode;
use super::typicality::{
    is_cond_typical, iid_prob, typical_set, word_prob, Slack, TypicalityParams, CONCENTRATION_C,
};
use crate::channel::{ensure_enumerable, word_count, Avwc, Distribution, Words};
use crate::error::{invalid, Result};
use crate::info::entropy;

/// `2 exp(-L ε² μ / 3)`, written as `2 * 2^(-L ε² μ log2(e) / 3)`.
pub fn chernoff_bound(l_count: u64, epsilon: f64, mu: f64) -> Result<f64> {
    if l_count == 0 {
        return invalid("sample count must be at least 1");
    }
    if !(epsilon > 0.0 && epsilon < 0.5) {
        return invalid(format!("deviation must lie in (0, 1/2), got {epsilon}"));
    }
    if !(mu > 0.0 && mu <= 1.0) {
        return invalid(format!("mean must lie in (0, 1], got {mu}"));
    }
    Ok(2.0 * (-(l_count as f64) * epsilon * epsilon * mu * std::f64::consts::LOG2_E / 3.0).exp2())
}

/// Default deviation `2^{-n c' δ²}` with `c' = c / 2`.
pub fn default_epsilon(tp: &TypicalityParams) -> f64 {
    (-(tp.n as f64) * CONCENTRATION_C / 2.0 * tp.delta * tp.delta).exp2()
}

#[derive(Debug, Clone, PartialEq)]
pub struct MessageEvent {
    pub message: usize,
    pub state: usize,
    pub holds: bool,
    /// Largest `|avg_l Q(z) - Θ(z)| / Θ(z)` over the support of `Θ`, and
    /// `+inf` if the average has mass where `Θ` vanishes.
    pub worst_relative_deviation: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StateSummary {
    pub state: usize,
    pub alpha: f64,
    /// `|B|` where `B = {z : Θ'(z) >= ε α}`.
    pub kept_outputs: usize,
    /// `sum_{z in B} Θ(z)`.
    pub kept_mass: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SecrecyEventsReport {
    pub epsilon: f64,
    pub states: Vec<StateSummary>,
    /// One entry per `(message, state)`, message-major.
    pub events: Vec<MessageEvent>,
    pub failures: usize,
}

/// For every point-mass state law `q = e_s` and every message `j`, checks
/// whether `(1/L) sum_l Q_{q, x_{jl}}(z)` lies in `[(1 ± ε) Θ_q(z)]` for all
/// `z`. `p` is the input law the codebook was drawn from.
pub fn check_secrecy_events(
    code: &WiretapCode,
    avwc: &Avwc,
    p: &Distribution,
    tp: &TypicalityParams,
    epsilon: Option<f64>,
    slack: &Slack,
) -> Result<SecrecyEventsReport> {
    code.check_against(avwc)?;
    if p.support_size() != avwc.input_size() {
        return invalid("input distribution does not match the channel input alphabet");
    }
    if tp.n != code.n() {
        return invalid("typicality block length differs from the code's");
    }
    let epsilon = epsilon.unwrap_or_else(|| default_epsilon(tp));
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return invalid(format!("deviation must lie in (0, 1), got {epsilon}"));
    }
    let (n, c) = (tp.n, avwc.eaves_output_size());
    let typical = typical_set(p, tp)?;
    if typical.is_empty() {
        return invalid("the typical set is empty; the pruned distribution is undefined");
    }
    ensure_enumerable(
        "secrecy event check",
        word_count(c, n).saturating_mul((typical.len() + code.codewords().len()) as u128),
    )?;
    let weights: Vec<f64> = typical.iter().map(|x| iid_prob(p, x)).collect();
    let mass: f64 = weights.iter().sum();
    let outputs: Vec<Vec<usize>> = Words::new(c, n).collect();
    let f1 = slack.value(avwc.input_size(), c, tp);

    let mut states = Vec::new();
    let mut events = Vec::new();
    for (s, v) in avwc.eaves().iter().enumerate() {
        let q_tilde = |x: &[usize], z: &[usize]| {
            if is_cond_typical(z, x, v, tp.delta) {
                word_prob(v, x, z)
            } else {
                0.0
            }
        };
        let theta_prime: Vec<f64> = outputs
            .iter()
            .map(|z| {
                typical
                    .iter()
                    .zip(&weights)
                    .map(|(x, w)| w / mass * q_tilde(x, z))
                    .sum()
            })
            .collect();
        let alpha = (-(n as f64) * (entropy(&v.output_distribution(p)?) + f1)).exp2();
        let kept: Vec<bool> = theta_prime.iter().map(|&t| t >= epsilon * alpha).collect();
        let theta: Vec<f64> = theta_prime
            .iter()
            .zip(&kept)
            .map(|(&t, &k)| if k { t } else { 0.0 })
            .collect();
        states.push(StateSummary {
            state: s,
            alpha,
            kept_outputs: kept.iter().filter(|&&k| k).count(),
            kept_mass: theta.iter().sum(),
        });
        for j in 0..code.j_count() {
            let mut worst: f64 = 0.0;
            let mut holds = true;
            for (zi, z) in outputs.iter().enumerate() {
                if !kept[zi] {
                    continue;
                }
                let avg: f64 = (0..code.l_count())
                    .map(|l| q_tilde(code.codeword(j, l), z))
                    .sum::<f64>()
                    / code.l_count() as f64;
                let dev = (avg - theta[zi]).abs() / theta[zi];
                worst = worst.max(dev);
                if avg < (1.0 - epsilon) * theta[zi] || avg > (1.0 + epsilon) * theta[zi] {
                    holds = false;
                }
            }
            events.push(MessageEvent {
                message: j,
                state: s,
                holds,
                worst_relative_deviation: worst,
            });
        }
    }
    events.sort_by_key(|e| (e.message, e.state));
    let failures = events.iter().filter(|e| !e.holds).count();
    Ok(SecrecyEventsReport {
        epsilon,
        states,
        events,
        failures,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::Channel;

    #[test]
    fn chernoff_values() {
        let b = chernoff_bound(1000, 0.1, 0.5).unwrap();
        assert!((b - 2.0 * (-5.0f64 / 3.0).exp()).abs() < 1e-14);
        assert!((chernoff_bound(10, 1e-9, 1.0).unwrap() - 2.0).abs() < 1e-12);
        assert!(chernoff_bound(10, 0.5, 0.5).is_err());
        assert!(chernoff_bound(10, 0.1, 0.0).is_err());
        assert!(chernoff_bound(0, 0.1, 0.5).is_err());
    }

    fn avwc() -> Avwc {
        Avwc::new(vec![Channel::identity(2)], vec![Channel::bsc(0.3).unwrap()]).unwrap()
    }

    #[test]
    fn saturated_codebook_matches_expectation() {
        // Codewords = the whole typical set, each once: the average over l is
        // the expectation under the uniform pruned law, i.e. Θ itself.
        let tp = TypicalityParams::new(4, 0.3).unwrap();
        let p = Distribution::uniform(2);
        let t = typical_set(&p, &tp).unwrap();
        let l = t.len();
        let code = WiretapCode::new(4, 1, l, 2, 2, t, vec![Some(0); 16]).unwrap();
        let r = check_secrecy_events(&code, &avwc(), &p, &tp, Some(1e-9), &Slack::default()).unwrap();
        assert_eq!(r.failures, 0);
        assert!(r.events[0].worst_relative_deviation < 1e-12);
        assert!(r.states[0].kept_mass > 0.0);
    }

    #[test]
    fn repeated_codeword_reduces_to_single_word() {
        let tp = TypicalityParams::new(4, 0.3).unwrap();
        let p = Distribution::uniform(2);
        let x = vec![0, 1, 1, 0];
        let single = WiretapCode::new(4, 1, 1, 2, 2, vec![x.clone()], vec![Some(0); 16]).unwrap();
        let repeated = WiretapCode::new(4, 1, 3, 2, 2, vec![x.clone(); 3], vec![Some(0); 16]).unwrap();
        let a = check_secrecy_events(&single, &avwc(), &p, &tp, Some(0.2), &Slack::default()).unwrap();
        let b = check_secrecy_events(&repeated, &avwc(), &p, &tp, Some(0.2), &Slack::default()).unwrap();
        assert_eq!(a.events[0].holds, b.events[0].holds);
        assert!((a.events[0].worst_relative_deviation - b.events[0].worst_relative_deviation).abs() < 1e-12);
    }

    #[test]
    fn default_epsilon_formula() {
        let tp = TypicalityParams::new(8, 0.2).unwrap();
        let want = (-8.0 * 0.04 / (4.0 * std::f64::consts::LN_2)).exp2();
        assert!((default_epsilon(&tp) - want).abs() < 1e-15);
    }
}
