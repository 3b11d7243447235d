//! Acceptance suite: one line per criterion, non-zero exit on any failure.

mod common;

use std::time::{Duration, Instant};

use avwc_core::bounds::{avc_capacity, secrecy_lower_bound, secrecy_upper_bound_single_letter, BoundOptions};
use avwc_core::channel::{word_from_index, Words};
use avwc_core::coding::*;
use avwc_core::info::binary_entropy;
use avwc_core::optim::{simplex_grid, stream_rng};
use avwc_core::structure::{symmetrisation_residual, test_symmetrisable};
use avwc_core::{Avwc, Channel, Distribution, StateSequence};
use common::{brute_table, bsc, chan, dist, typicality_corpus, RawCode};
use rand::Rng;
use rand_distr::{Binomial, Distribution as _};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn within(elapsed: Duration, limit_secs: u64) -> bool {
    elapsed < Duration::from_secs(limit_secs)
}

fn closed_form_capacity() -> Outcome {
    let t = Instant::now();
    let opts = BoundOptions::default();
    let avwc = Avwc::new(vec![bsc(0.1)], vec![bsc(0.3)]).unwrap();
    let lower = secrecy_lower_bound(&avwc, &opts).unwrap().value;
    let expected_lower = binary_entropy(0.3) - binary_entropy(0.1);
    let cap = avc_capacity(&[bsc(0.1)], &opts).unwrap();
    let expected_cap = 1.0 - binary_entropy(0.1);
    let elapsed = t.elapsed();
    let pass = (lower - expected_lower).abs() <= 2e-3
        && (lower - 0.412295).abs() <= 2e-3
        && (cap.random_code.value - expected_cap).abs() <= 1e-3
        && (cap.random_code.value - 0.531004).abs() <= 1e-3
        && within(elapsed, 10);
    outcome(
        pass,
        format!(
            "lower {lower:.6} (h(0.3)-h(0.1) = {expected_lower:.6}), C(BSC(0.1)) {:.6} (1-h(0.1) = {expected_cap:.6}), {elapsed:.2?}",
            cap.random_code.value
        ),
    )
}

fn remark_instance() -> Outcome {
    let t = Instant::now();
    let opts = BoundOptions::default();
    let avwc = Avwc::new(vec![bsc(0.05), bsc(0.15)], vec![bsc(0.4), bsc(0.3)]).unwrap();
    let lower = secrecy_lower_bound(&avwc, &opts).unwrap().value;
    let upper = secrecy_upper_bound_single_letter(&avwc, avwc.input_size() + 1, &opts).unwrap().value;
    let elapsed = t.elapsed();
    let gap = upper - lower;
    outcome(
        gap <= 5e-3 && within(elapsed, 60),
        format!("lower {lower:.6}, upper {upper:.6}, gap {gap:.2e}, {elapsed:.2?}"),
    )
}

fn adder(x: usize, s: usize) -> Vec<f64> {
    let mut row = vec![0.0; 3];
    row[x + s] = 1.0;
    row
}

fn symmetrisability_dichotomy() -> Outcome {
    let main: Vec<Channel> = (0..2)
        .map(|s| Channel::new((0..2).map(|x| adder(x, s)).collect()).unwrap())
        .collect();
    let r = test_symmetrisable(&main, 1e-8).unwrap();
    let residual = r
        .u_witness
        .as_ref()
        .map(|u| symmetrisation_residual(&main, u).unwrap())
        .unwrap_or(f64::INFINITY);
    let w = chan(&[&[0.7, 0.2, 0.1], &[0.1, 0.3, 0.6]]);
    let fixed = test_symmetrisable(&[w.clone(), w], 1e-8).unwrap();
    let margin = fixed.margin.unwrap_or(0.0);
    outcome(
        r.symmetrisable && residual <= 1e-8 && !fixed.symmetrisable && margin > 1e-4,
        format!(
            "adder symmetrisable {} (witness residual {residual:.1e}); state-independent symmetrisable {} (margin {margin:.4})",
            r.symmetrisable, fixed.symmetrisable
        ),
    )
}

fn typicality_sweep() -> Outcome {
    let t = Instant::now();
    let slack = Slack::default();
    let mut checks = 0;
    let mut violations = Vec::new();
    for (i, (p, w)) in typicality_corpus().iter().enumerate() {
        for n in 2..=6 {
            for delta in [0.1, 0.2, 0.3] {
                let tp = TypicalityParams::new(n, delta).unwrap();
                let r = verify_typicality_bounds(p, w, &tp, &slack).unwrap();
                checks += 1;
                if r.violations > 0 {
                    violations.push(format!("instance {i} n={n} δ={delta}: {r:?}"));
                }
            }
        }
    }
    let elapsed = t.elapsed();
    outcome(
        violations.is_empty() && within(elapsed, 60),
        format!(
            "{checks} checks, {} with violations{}, {elapsed:.2?}",
            violations.len(),
            violations.first().map(|v| format!(" (first: {v})")).unwrap_or_default()
        ),
    )
}

/// The n = 4, two-state instance used by the robustification and pipeline
/// criteria.
fn pipeline_instance() -> (Avwc, WiretapCode) {
    let avwc = Avwc::new(vec![bsc(0.02), bsc(0.08)], vec![bsc(0.4), bsc(0.45)]).unwrap();
    let params = CodebookParams { n: 4, delta: 0.25, tau: 0.3, seed: 2, decoder_grid: DecoderGrid::Default };
    let code = build_random_codebook(&Distribution::uniform(2), &avwc, &params).unwrap();
    (avwc, code)
}

fn robustification_inequality() -> Outcome {
    let (avwc, code) = pipeline_instance();
    let report = verify_robustification(&code, &avwc, None).unwrap();
    let rc = robustify(&code, &avwc).unwrap();
    let explicit = mean_member_table(&rc, &avwc, Objective::Error, AverageMethod::Explicit).unwrap();
    let typed = mean_member_table(&rc, &avwc, Objective::Error, AverageMethod::TypeClass).unwrap();
    let diff = explicit.iter().zip(&typed).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    let all_rows = report.rows.len() == 16 && report.rows.iter().all(|r| r.slack >= 0.0);
    outcome(
        all_rows && report.holds && rc.len() == 24 && diff <= 1e-12,
        format!(
            "γ {:.4}, {} rows, min slack {:.4}; explicit vs type-class mean error differ by {diff:.1e}",
            report.gamma,
            report.rows.len(),
            report.min_slack
        ),
    )
}

fn leakage_invariance() -> Outcome {
    let (avwc, code4) = pipeline_instance();
    let avwc3 = Avwc::new(vec![bsc(0.05), bsc(0.2)], vec![bsc(0.1), chan(&[&[0.6, 0.4], &[0.25, 0.75]])]).unwrap();
    let code3 = WiretapCode::new(
        3,
        2,
        2,
        2,
        2,
        vec![vec![0, 0, 1], vec![1, 0, 0], vec![1, 1, 0], vec![0, 1, 1]],
        (0..8).map(|y: usize| Some((y.count_ones() as usize) % 2)).collect(),
    )
    .unwrap();
    let mut worst: f64 = 0.0;
    let mut members = 0;
    for (avwc, code) in [(&avwc, &code4), (&avwc3, &code3)] {
        let rc = robustify(code, avwc).unwrap();
        for q in simplex_grid(2, 4) {
            let qs = vec![dist(&q); code.n()];
            let base = mixture_leakage(code, avwc, &qs).unwrap();
            for i in 0..rc.len() {
                let v = mixture_leakage(&rc.member(i), avwc, &qs).unwrap();
                worst = worst.max((v - base).abs());
            }
        }
        members += rc.len();
    }
    outcome(
        worst <= 1e-9,
        format!("{members} permutation members over 5 constant state laws, largest deviation {worst:.1e}"),
    )
}

fn random_channel(rng: &mut impl Rng, inputs: usize, outputs: usize) -> Channel {
    Channel::new(
        (0..inputs)
            .map(|_| {
                let r: Vec<f64> = (0..outputs).map(|_| rng.random::<f64>() + 0.01).collect();
                let s: f64 = r.iter().sum();
                r.into_iter().map(|v| v / s).collect()
            })
            .collect(),
    )
    .unwrap()
}

fn mixture_dominance() -> Outcome {
    let n = 3;
    let grid: Vec<Distribution> = simplex_grid(2, 4).into_iter().map(|q| dist(&q)).collect();
    let mut error_excess = f64::NEG_INFINITY;
    let mut leak_gap: f64 = 0.0;
    for trial in 0..10u64 {
        let mut rng = stream_rng(7, trial);
        let (b, c) = (2 + (trial % 2) as usize, 2 + ((trial / 2) % 2) as usize);
        let avwc = Avwc::new(
            (0..2).map(|_| random_channel(&mut rng, 2, b)).collect(),
            (0..2).map(|_| random_channel(&mut rng, 2, c)).collect(),
        )
        .unwrap();
        let (jn, ln) = (2, 1 + (trial % 2) as usize);
        let codewords = (0..jn * ln).map(|_| (0..n).map(|_| rng.random_range(0..2)).collect()).collect();
        let decoder = (0..b.pow(n as u32))
            .map(|_| {
                let k = rng.random_range(0..=jn);
                (k < jn).then_some(k)
            })
            .collect();
        let code = WiretapCode::new(n, jn, ln, 2, b, codewords, decoder).unwrap();
        let report = evaluate_code(&code, &avwc, EvalMode::Exhaustive, false).unwrap();
        let mut grid_leak = f64::NEG_INFINITY;
        for idx in 0..grid.len().pow(n as u32) {
            let qs: Vec<Distribution> = word_from_index(idx, grid.len(), n).into_iter().map(|g| grid[g].clone()).collect();
            let e = mixture_error(&code, &avwc, &qs).unwrap();
            error_excess = error_excess.max(e - report.worst_state_error);
            grid_leak = grid_leak.max(mixture_leakage(&code, &avwc, &qs).unwrap());
        }
        leak_gap = leak_gap.max((grid_leak - report.worst_leakage_bits).abs());
    }
    outcome(
        error_excess <= 1e-12 && leak_gap <= 1e-9,
        format!(
            "10 codes, 125 product laws each: max(mixture error - worst error) {error_excess:.1e}, |grid leakage max - vertex max| {leak_gap:.1e}"
        ),
    )
}

fn reduction_pipeline() -> Outcome {
    let t = Instant::now();
    let (avwc, code) = pipeline_instance();
    let rc = robustify(&code, &avwc).unwrap();
    let opts = ReductionOptions { k: KPreset::Explicit(8), epsilon: 0.25, seed: 0, max_attempts: 64 };
    let red = match reduce_random_code(&rc, &avwc, &opts) {
        Ok(r) => r,
        Err(e) => return outcome(false, format!("reduction failed: {e}")),
    };
    let elim = match eliminate_randomness(&red.code, &avwc, PrefixChoice::Search { len: 3 }) {
        Ok(e) => e,
        Err(e) => return outcome(false, format!("elimination failed: {e}")),
    };
    let r = &elim.report;
    let elapsed = t.elapsed();
    let pass = red.code.len() == 8
        && red.worst_mean_error <= 0.25
        && red.worst_mean_leakage <= 0.25
        && r.error_bound_holds
        && r.leakage_bound_holds
        && r.worst_error <= r.worst_prefix_error + r.worst_mean_member_error + 1e-12
        && r.worst_leakage <= r.worst_mean_member_leakage + 1e-9
        && within(elapsed, 300);
    outcome(
        pass,
        format!(
            "K=8 mean error {:.4}, mean leakage {:.4}; concatenated n={} error {:.4} <= {:.4} + {:.4}, leakage {:.4} <= {:.4}, {elapsed:.2?}",
            red.worst_mean_error,
            red.worst_mean_leakage,
            elim.code.n(),
            r.worst_error,
            r.worst_prefix_error,
            r.worst_mean_member_error,
            r.worst_leakage,
            r.worst_mean_member_leakage
        ),
    )
}

fn chernoff_empirical() -> Outcome {
    const TRIALS: usize = 100_000;
    let mut pass = true;
    let mut parts = Vec::new();
    for (case, (l, eps, mu)) in [(100u64, 0.2, 0.5), (1000, 0.1, 0.3)].into_iter().enumerate() {
        let bound = chernoff_bound(l, eps, mu).unwrap();
        let mut rng = stream_rng(11, case as u64);
        let binom = Binomial::new(l, mu).unwrap();
        let (lo, hi) = ((1.0 - eps) * mu, (1.0 + eps) * mu);
        let hits = (0..TRIALS)
            .filter(|_| {
                let mean = binom.sample(&mut rng) as f64 / l as f64;
                mean < lo - 1e-12 || mean > hi + 1e-12
            })
            .count();
        let freq = hits as f64 / TRIALS as f64;
        pass &= freq <= bound;
        parts.push(format!("(L={l}, ε={eps}, μ={mu}) frequency {freq:.5} <= bound {bound:.5}"));
    }
    outcome(pass, parts.join("; "))
}

fn raw_rows(ch: &Channel) -> Vec<Vec<f64>> {
    ch.to_rows()
}

fn oracle_instances() -> Vec<(Avwc, WiretapCode)> {
    let binary = Avwc::new(vec![bsc(0.1), bsc(0.25)], vec![bsc(0.3), chan(&[&[0.8, 0.2], &[0.35, 0.65]])]).unwrap();
    let first = WiretapCode::new(
        3,
        2,
        2,
        2,
        2,
        vec![vec![0, 0, 0], vec![0, 1, 1], vec![1, 1, 1], vec![1, 0, 0]],
        (0..8).map(|y: usize| Some(usize::from(y >= 4))).collect(),
    )
    .unwrap();

    let ternary_in = Avwc::new(
        vec![chan(&[&[0.9, 0.1], &[0.5, 0.5], &[0.15, 0.85]]), chan(&[&[0.7, 0.3], &[0.4, 0.6], &[0.05, 0.95]])],
        vec![chan(&[&[0.6, 0.3, 0.1], &[0.3, 0.4, 0.3], &[0.1, 0.2, 0.7]]), Channel::identity(3)],
    )
    .unwrap();
    let second = WiretapCode::new(2, 3, 1, 3, 2, vec![vec![0, 0], vec![2, 2], vec![1, 2]], vec![Some(0), None, Some(2), Some(1)]).unwrap();

    let three_state = Avwc::new(
        vec![bsc(0.0), bsc(0.2), chan(&[&[0.6, 0.4], &[0.1, 0.9]])],
        vec![bsc(0.45), bsc(0.1), chan(&[&[1.0, 0.0], &[0.5, 0.5]])],
    )
    .unwrap();
    let third = WiretapCode::new(
        3,
        2,
        2,
        2,
        2,
        vec![vec![0, 1, 0], vec![1, 0, 1], vec![1, 1, 0], vec![0, 0, 1]],
        vec![Some(0), Some(1), Some(0), Some(0), Some(1), None, Some(1), Some(0)],
    )
    .unwrap();

    let (pipeline_avwc, fourth) = pipeline_instance();

    let wide_eaves = Avwc::new(
        vec![bsc(0.05), bsc(0.3)],
        vec![chan(&[&[0.5, 0.3, 0.2], &[0.2, 0.3, 0.5]]), chan(&[&[0.9, 0.05, 0.05], &[0.05, 0.05, 0.9]])],
    )
    .unwrap();
    let fifth = WiretapCode::new(
        3,
        2,
        3,
        2,
        2,
        vec![vec![0, 0, 0], vec![0, 0, 1], vec![0, 1, 0], vec![1, 1, 1], vec![1, 1, 0], vec![1, 0, 1]],
        (0..8).map(|y: usize| match y.count_ones() { 0 | 1 => Some(0), 3 => Some(1), _ => None }).collect(),
    )
    .unwrap();

    vec![(binary, first), (ternary_in, second), (three_state, third), (pipeline_avwc, fourth), (wide_eaves, fifth)]
}

fn oracle_equivalence() -> Outcome {
    let mut err_gap: f64 = 0.0;
    let mut leak_gap: f64 = 0.0;
    for (avwc, code) in oracle_instances() {
        let raw = RawCode {
            codewords: (0..code.j_count())
                .map(|j| (0..code.l_count()).map(|l| code.codeword(j, l).to_vec()).collect())
                .collect(),
            decoder: code.decoder().to_vec(),
        };
        let main: Vec<_> = avwc.main().iter().map(raw_rows).collect();
        let eaves: Vec<_> = avwc.eaves().iter().map(raw_rows).collect();
        let oracle = brute_table(&raw, &main, &eaves, avwc.main_output_size(), avwc.eaves_output_size(), code.n());
        let report = evaluate_code(&code, &avwc, EvalMode::Exhaustive, true).unwrap();
        let table = report.per_sequence.as_ref().unwrap();
        for (row, (e, l)) in table.iter().zip(&oracle) {
            err_gap = err_gap.max((row.error - e).abs());
            leak_gap = leak_gap.max((row.leakage_bits - l).abs());
        }
        let worst_e = oracle.iter().map(|r| r.0).fold(f64::NEG_INFINITY, f64::max);
        let worst_l = oracle.iter().map(|r| r.1).fold(f64::NEG_INFINITY, f64::max);
        err_gap = err_gap.max((report.worst_state_error - worst_e).abs());
        leak_gap = leak_gap.max((report.worst_leakage_bits - worst_l).abs());
        let seq = StateSequence::new(report.worst_state_sequence.symbols().to_vec(), avwc.state_count()).unwrap();
        let k = seq.index(avwc.state_count());
        err_gap = err_gap.max((oracle[k].0 - worst_e).abs());
        assert_eq!(table.len(), Words::new(avwc.state_count(), code.n()).count());
    }
    outcome(
        err_gap <= 1e-12 && leak_gap <= 1e-9,
        format!("5 instances, max error deviation {err_gap:.1e}, max leakage deviation {leak_gap:.1e} bits"),
    )
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("closed-form capacity", closed_form_capacity),
        ("degraded two-state bounds meet", remark_instance),
        ("symmetrisability dichotomy", symmetrisability_dichotomy),
        ("typicality bound sweep", typicality_sweep),
        ("robustification inequality", robustification_inequality),
        ("leakage permutation invariance", leakage_invariance),
        ("mixture dominance", mixture_dominance),
        ("reduction and elimination pipeline", reduction_pipeline),
        ("chernoff empirical", chernoff_empirical),
        ("oracle equivalence", oracle_equivalence),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let o = check();
        if !o.pass {
            failed += 1;
        }
        println!("[{}] criterion {:>2} {name}: {}", if o.pass { "PASS" } else { "FAIL" }, i + 1, o.detail);
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
