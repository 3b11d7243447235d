use std::fmt;
use std::fs;
use std::path::Path;
use std::time::Instant;

use avwc_core::bounds::{
    avc_capacity, multiletter_bound, secrecy_lower_bound, secrecy_upper_bound_single_letter, BoundOptions,
    BoundResult,
};
use avwc_core::channel::{enumeration_cap, word_count, word_from_index};
use avwc_core::coding::{
    build_random_codebook, check_secrecy_events, codebook_sizes, eliminate_randomness, evaluate_code,
    mean_member_table, reduce_random_code, robustify, verify_robustification, verify_typicality_bounds,
    worst_state_search, AverageMethod, CodeOrigin, CodebookParams, DecoderGrid, EvalMode, KPreset, Objective,
    PrefixChoice, RandomCode, ReductionOptions, SearchMode, Slack, TypicalityParams, WiretapCode,
};
use avwc_core::optim::{fit_grid_resolution, simplex_grid_size};
use avwc_core::structure::{find_best_eaves_channel, test_degraded, test_symmetrisable};
use avwc_core::{Distribution, Error, StateSequence};
use serde_json::{json, Value};

use crate::codefile::{word_to_string, CodeFile, LoadedCode};
use crate::report::{sha256_hex, Fields, RunReport};
use crate::spec::{parse_spec, ChannelSpec};
use crate::{BoundsArgs, CodeAction, CodeArgs, EvalModeArg, KPresetArg, SearchArg};

#[derive(Debug)]
pub enum CliError {
    /// Malformed spec or code file, or a bad flag value.
    Parse(String),
    Io(String),
    Core(Error),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Parse(m) => write!(f, "{m}"),
            CliError::Io(m) => write!(f, "{m}"),
            CliError::Core(e) => write!(f, "{e}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Parse(_) => 2,
            CliError::Core(Error::ResourceLimit { .. }) => 3,
            CliError::Core(Error::NumericFailure(_) | Error::ReductionFailure(_) | Error::PrefixSearchFailure(_)) => 4,
            CliError::Io(_) | CliError::Core(Error::InvalidArgument(_)) => 1,
        }
    }
}

type CliResult<T> = Result<T, CliError>;

struct Input {
    spec: ChannelSpec,
    bytes: Vec<u8>,
}

fn read(path: &Path) -> CliResult<Vec<u8>> {
    fs::read(path).map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))
}

fn load_spec(path: &Path) -> CliResult<Input> {
    let bytes = read(path)?;
    let text = String::from_utf8(bytes.clone())
        .map_err(|_| CliError::Parse(format!("{}: not valid UTF-8", path.display())))?;
    let spec = parse_spec(&text).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
    Ok(Input { spec, bytes })
}

fn load_code(path: &Path, spec: &ChannelSpec, digest_input: &mut Vec<u8>) -> CliResult<LoadedCode> {
    let bytes = read(path)?;
    digest_input.extend_from_slice(&bytes);
    let text = String::from_utf8(bytes).map_err(|_| CliError::Parse(format!("{}: not valid UTF-8", path.display())))?;
    let file = CodeFile::from_json(&text).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
    file.load(spec).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))
}

/// Prints a work estimate before anything is enumerated, and refuses work
/// past the cap.
fn announce(what: &str, count: u128) -> CliResult<()> {
    let cap = enumeration_cap();
    eprintln!("estimate: {what}: {count} (cap {cap})");
    if count > cap as u128 {
        return Err(Error::ResourceLimit { what: what.into(), required: count, cap }.into());
    }
    Ok(())
}

fn finish(echo: Vec<String>, digest_input: &[u8], seed: Option<u64>, results: Value, start: Instant) -> RunReport {
    RunReport {
        schema: crate::report::REPORT_SCHEMA,
        tool: "avwc",
        version: env!("CARGO_PKG_VERSION"),
        command: echo,
        input_digest: sha256_hex(digest_input),
        seed,
        results,
        elapsed_ms: start.elapsed().as_secs_f64() * 1e3,
    }
}

fn probs(d: &Distribution) -> Value {
    json!(d.probs())
}

fn sequence(spec: &ChannelSpec, s: &StateSequence) -> Value {
    json!(s.symbols().iter().map(|&v| spec.state_names[v].as_str()).collect::<Vec<_>>())
}

fn state_law(spec: &ChannelSpec, q: &Distribution) -> Value {
    match q.as_point_mass() {
        Some(s) => json!(format!("state {s} ({})", spec.state_names[s])),
        None => probs(q),
    }
}

pub fn canonical(path: &Path) -> CliResult<String> {
    Ok(load_spec(path)?.spec.to_toml())
}

pub fn structure(path: &Path, tol: f64, echo: Vec<String>) -> CliResult<RunReport> {
    let start = Instant::now();
    let Input { spec, bytes } = load_spec(path)?;
    let avwc = &spec.avwc;
    let sym = test_symmetrisable(avwc.main(), tol)?;
    let best = find_best_eaves_channel(avwc.eaves(), tol)?;

    let mut f = Fields::new()
        .put("symmetrisable", sym.symmetrisable)
        .put("symmetrisation_witness", sym.u_witness.as_ref().map_or(Value::Null, |u| json!(u.to_rows())))
        .put("symmetrisation_residual", json!(sym.residual))
        .put("infeasibility_margin", json!(sym.margin))
        .put("marginal", sym.marginal)
        .put("tol", tol);

    let verdict = match (best.exists, best.best_state) {
        (true, Some(s)) => format!("state {s}"),
        (true, None) => "mixture".to_string(),
        _ => "none".to_string(),
    };
    f = f
        .put("best_channel", verdict)
        .put("best_channel_q", best.q_star.as_ref().map_or(Value::Null, probs))
        .put(
            "best_channel_residuals",
            json!(best.per_state_reports.iter().map(|r| r.residual).collect::<Vec<_>>()),
        );
    if !best.rejected.is_empty() {
        f = f.put("rejected_candidates", json!(best.rejected));
    }

    // Per-state wiretap degradedness: is V_s a degraded version of W_s?
    let per_state = (0..avwc.state_count())
        .map(|s| test_degraded(&avwc.main()[s], &avwc.eaves()[s], tol).map(|r| r.degraded))
        .collect::<avwc_core::Result<Vec<_>>>()?;
    f = f.put("eaves_degraded_from_main", json!(per_state));

    Ok(finish(echo, &bytes, None, f.build(), start))
}

fn bound_fields(spec: &ChannelSpec, tag: &str, r: &BoundResult) -> Fields {
    let mut f = Fields::new()
        .put("tag", tag)
        .put("value", r.value)
        .put("input_distribution", probs(&r.argmax_p))
        .put("state_law", state_law(spec, &r.inner_argmin_q));
    if let Some(s) = r.inner_argmax_state {
        f = f.put("eavesdropper_state", spec.state_names[s].as_str());
    }
    f.put("certified_gap", r.certified_gap).put("vacuous", r.value <= 0.0)
}

pub fn bounds(args: &BoundsArgs, echo: Vec<String>) -> CliResult<RunReport> {
    let start = Instant::now();
    let Input { spec, bytes } = load_spec(&args.spec)?;
    let avwc = &spec.avwc;
    let opts = BoundOptions {
        grid: args.grid,
        starts: args.starts,
        q_grid: args.q_grid,
        seed: args.seed,
        ..BoundOptions::default()
    };
    let (a, k) = (avwc.input_size(), avwc.state_count());
    let u_size = args.u_size.unwrap_or(a + 1);
    let grid_res = fit_grid_resolution(a, opts.grid, opts.grid_budget);
    let q_res = fit_grid_resolution(k, opts.q_grid, opts.q_grid_budget);
    announce("input grid points", simplex_grid_size(a, grid_res))?;
    announce("state-law grid points", simplex_grid_size(k, q_res))?;
    if let Some(n) = args.n {
        announce("multi-letter input words", word_count(a, n))?;
        announce(
            "multi-letter output words",
            word_count(avwc.main_output_size().max(avwc.eaves_output_size()), n),
        )?;
    }

    let lower = secrecy_lower_bound(avwc, &opts)?;
    let upper = secrecy_upper_bound_single_letter(avwc, u_size, &opts)?;
    let avc = avc_capacity(avwc.main(), &opts)?;

    let mut upper_f = bound_fields(&spec, "single-letter-upper-bound", &upper).put("u_size", u_size);
    if let Some(aux) = &upper.aux {
        upper_f = upper_f
            .put("aux_distribution", probs(&aux.p_u))
            .put("aux_channel", json!(aux.x_given_u.to_rows()));
    }
    let mut f = Fields::new()
        .put("lower_bound", bound_fields(&spec, "secrecy-lower-bound", &lower).build())
        .put("upper_bound", upper_f.build())
        .put("gap", upper.value - lower.value)
        .put(
            "main_avc",
            Fields::new()
                .put("tag", "avc-capacity")
                .put("random_code_capacity", avc.random_code.value)
                .put("symmetrisable", avc.symmetrisability.symmetrisable)
                .put("deterministic_capacity", avc.deterministic_capacity)
                .build(),
        );
    if let Some(n) = args.n {
        let u = args.u_size.unwrap_or_else(|| word_count(a, n).min(usize::MAX as u128) as usize + 1);
        let multi = multiletter_bound(avwc, n, u, args.per_letter, &opts)?;
        f = f.put(
            "multiletter_bound",
            Fields::new()
                .put("tag", "multi-letter-upper-bound")
                .put("n", n)
                .put("per_letter", args.per_letter)
                .put("u_size", u)
                .put("value", multi.value)
                .put("certified_gap", multi.certified_gap)
                .put("vacuous", multi.value <= 0.0)
                .build(),
        );
    }
    Ok(finish(echo, &bytes, Some(args.seed), f.build(), start))
}

fn need_n(args: &CodeArgs) -> CliResult<usize> {
    args.n.ok_or_else(|| CliError::Parse("--n is required for this action".into()))
}

fn input_law(spec: &ChannelSpec, args: &CodeArgs) -> CliResult<Distribution> {
    spec.input_distribution(args.input.as_deref()).map_err(CliError::Parse)
}

fn decoder_grid(args: &CodeArgs) -> DecoderGrid {
    args.decoder_grid.map_or(DecoderGrid::Default, DecoderGrid::Simplex)
}

/// Writes the code file if `--out` was given and returns what the report
/// shows for it: the path, or the whole file inline.
fn emit_code(file: CodeFile, out: Option<&Path>) -> CliResult<Value> {
    match out {
        Some(path) => {
            fs::write(path, file.to_json() + "\n")
                .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))?;
            Ok(json!(path.display().to_string()))
        }
        None => Ok(serde_json::to_value(&file).expect("code file serialises")),
    }
}

fn require_deterministic(code: LoadedCode) -> CliResult<WiretapCode> {
    match code {
        LoadedCode::Deterministic(c) => Ok(c),
        LoadedCode::Random(_) => Err(CliError::Parse("this action needs a deterministic code".into())),
    }
}

fn require_random(code: LoadedCode) -> CliResult<RandomCode> {
    match code {
        LoadedCode::Random(c) => Ok(c),
        LoadedCode::Deterministic(_) => Err(CliError::Parse("this action needs a random code".into())),
    }
}

/// `|S|^n` sequences times `|out|^n` outputs times the codebook size.
fn evaluation_work(spec: &ChannelSpec, n: usize, codewords: usize) -> u128 {
    let avwc = &spec.avwc;
    let out = avwc.main_output_size().max(avwc.eaves_output_size());
    word_count(avwc.state_count(), n)
        .saturating_mul(word_count(out, n))
        .saturating_mul(codewords as u128)
}

pub fn code(spec_path: &Path, action: CodeAction, args: &CodeArgs, echo: Vec<String>) -> CliResult<RunReport> {
    let start = Instant::now();
    let Input { spec, bytes } = load_spec(spec_path)?;
    let mut digest_input = bytes;
    let loaded = match &args.code {
        Some(path) => Some(load_code(path, &spec, &mut digest_input)?),
        None => None,
    };
    let needs_code = matches!(
        action,
        CodeAction::Evaluate | CodeAction::Robustify | CodeAction::Reduce | CodeAction::Eliminate
    );
    if needs_code && loaded.is_none() {
        return Err(CliError::Parse("--code is required for this action".into()));
    }
    let out = args.out.as_deref();
    let results = match action {
        CodeAction::Build => build(&spec, args, out)?,
        CodeAction::Evaluate => evaluate(&spec, args, loaded.expect("checked"))?,
        CodeAction::Robustify => robustify_cmd(&spec, args, require_deterministic(loaded.expect("checked"))?, out)?,
        CodeAction::Reduce => reduce(&spec, args, require_random(loaded.expect("checked"))?, out)?,
        CodeAction::Eliminate => eliminate(&spec, args, require_random(loaded.expect("checked"))?, out)?,
        CodeAction::VerifyLemmas => verify_lemmas(&spec, args, loaded)?,
    };
    Ok(finish(echo, &digest_input, Some(args.seed), results, start))
}

fn build_code(spec: &ChannelSpec, args: &CodeArgs, n: usize) -> CliResult<(WiretapCode, Fields)> {
    let avwc = &spec.avwc;
    let p = input_law(spec, args)?;
    let sizes = codebook_sizes(&p, avwc, n, args.tau)?;
    let codewords = sizes.j_count.saturating_mul(sizes.l_count);
    let grid = decoder_grid(args).points(avwc.state_count()).len() as u128;
    announce("typical-set scan (input words)", word_count(avwc.input_size(), n))?;
    announce(
        "decoder work (output words x codewords x mixtures)",
        word_count(avwc.main_output_size(), n).saturating_mul(codewords).saturating_mul(grid),
    )?;
    let params = CodebookParams {
        n,
        delta: args.delta,
        tau: args.tau,
        seed: args.seed,
        decoder_grid: decoder_grid(args),
    };
    let code = build_random_codebook(&p, avwc, &params)?;
    let f = Fields::new()
        .put("tag", "random-wiretap-codebook")
        .put("n", n)
        .put("input_distribution", probs(&p))
        .put("main_information", sizes.main_information)
        .put("eaves_information", sizes.eaves_information)
        .put("messages", code.j_count())
        .put("randomisation", code.l_count())
        .put("rate", (code.j_count() as f64).log2() / n as f64)
        .put("erased_outputs", code.decoder().iter().filter(|d| d.is_none()).count());
    Ok((code, f))
}

fn build(spec: &ChannelSpec, args: &CodeArgs, out: Option<&Path>) -> CliResult<Value> {
    let n = need_n(args)?;
    let (code, f) = build_code(spec, args, n)?;
    let file = emit_code(CodeFile::deterministic(&code, spec), out)?;
    Ok(f.put("code_file", file).build())
}

fn worst_of(table: &[f64]) -> (usize, f64) {
    table
        .iter()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |best, (i, &v)| if v > best.1 { (i, v) } else { best })
}

fn evaluate(spec: &ChannelSpec, args: &CodeArgs, loaded: LoadedCode) -> CliResult<Value> {
    let avwc = &spec.avwc;
    match loaded {
        LoadedCode::Deterministic(code) => {
            let n = code.n();
            let f = Fields::new()
                .put("tag", "worst-state-evaluation")
                .put("kind", "deterministic")
                .put("n", n)
                .put("messages", code.j_count())
                .put("randomisation", code.l_count());
            if let Some(search) = args.search {
                let mode = match search {
                    SearchArg::Exhaustive => SearchMode::Exhaustive,
                    SearchArg::Greedy => SearchMode::Greedy,
                };
                if mode == SearchMode::Exhaustive {
                    announce("sequence evaluations", evaluation_work(spec, n, code.codewords().len()))?;
                }
                let (se, e) = worst_state_search(&code, avwc, Objective::Error, mode)?;
                let (sl, l) = worst_state_search(&code, avwc, Objective::Leakage, mode)?;
                return Ok(f
                    .put("search", if mode == SearchMode::Greedy { "greedy" } else { "exhaustive" })
                    .put("worst_state_error", e)
                    .put("worst_state_sequence", sequence(spec, &se))
                    .put("worst_leakage_bits", l)
                    .put("worst_leakage_sequence", sequence(spec, &sl))
                    .build());
            }
            announce("sequence evaluations", evaluation_work(spec, n, code.codewords().len()))?;
            let mode = match args.mode {
                EvalModeArg::Exhaustive => EvalMode::Exhaustive,
                EvalModeArg::Sampled => EvalMode::Sampled { trials: args.trials, seed: args.seed },
            };
            let report = evaluate_code(&code, avwc, mode, args.table)?;
            let mut f = f
                .put("mode", if args.mode == EvalModeArg::Sampled { "sampled" } else { "exhaustive" })
                .put("worst_state_error", report.worst_state_error)
                .put("worst_state_sequence", sequence(spec, &report.worst_state_sequence))
                .put("worst_leakage_bits", report.worst_leakage_bits)
                .put("worst_leakage_sequence", sequence(spec, &report.worst_leakage_sequence));
            if let Some(rows) = &report.per_sequence {
                let rows: Vec<Value> = rows
                    .iter()
                    .map(|r| {
                        Fields::new()
                            .put("sequence", sequence(spec, &r.sequence))
                            .put("error", r.error)
                            .put("leakage_bits", r.leakage_bits)
                            .build()
                    })
                    .collect();
                f = f.put("table", rows);
            }
            Ok(f.build())
        }
        LoadedCode::Random(rc) => {
            let (n, k) = (rc.n(), avwc.state_count());
            let method = if rc.origin() == CodeOrigin::PermutationFamily {
                AverageMethod::TypeClass
            } else {
                AverageMethod::Explicit
            };
            let per_member = rc.member(0).codewords().len();
            let members = if method == AverageMethod::TypeClass { 1 } else { rc.len() };
            announce(
                "sequence evaluations",
                evaluation_work(spec, n, per_member).saturating_mul(members as u128),
            )?;
            let errors = mean_member_table(&rc, avwc, Objective::Error, method)?;
            let leaks = mean_member_table(&rc, avwc, Objective::Leakage, method)?;
            let (ie, e) = worst_of(&errors);
            let (il, l) = worst_of(&leaks);
            let seq = |i| StateSequence::new(word_from_index(i, k, n), k);
            let mut f = Fields::new()
                .put("tag", "worst-state-evaluation")
                .put("kind", "random")
                .put("n", n)
                .put("members", rc.len())
                .put("worst_mean_error", e)
                .put("worst_mean_error_sequence", sequence(spec, &seq(ie)?))
                .put("worst_mean_leakage_bits", l)
                .put("worst_mean_leakage_sequence", sequence(spec, &seq(il)?));
            if args.table {
                let rows = (0..errors.len())
                    .map(|i| {
                        Ok(Fields::new()
                            .put("sequence", sequence(spec, &seq(i)?))
                            .put("mean_error", errors[i])
                            .put("mean_leakage_bits", leaks[i])
                            .build())
                    })
                    .collect::<CliResult<Vec<_>>>()?;
                f = f.put("table", rows);
            }
            Ok(f.build())
        }
    }
}

fn robustify_cmd(spec: &ChannelSpec, args: &CodeArgs, code: WiretapCode, out: Option<&Path>) -> CliResult<Value> {
    let avwc = &spec.avwc;
    announce("sequence evaluations", evaluation_work(spec, code.n(), code.codewords().len()))?;
    let family = robustify(&code, avwc)?;
    let report = verify_robustification(&code, avwc, None)?;
    let mut f = Fields::new()
        .put("tag", "permutation-robustification")
        .put("n", code.n())
        .put("members", family.len())
        .put("gamma", report.gamma)
        .put("min_slack", report.min_slack)
        .put("holds", report.holds);
    if args.table {
        f = f.put("table", robust_rows(spec, &report.rows));
    }
    let file = emit_code(CodeFile::random(&family, spec), out)?;
    Ok(f.put("code_file", file).build())
}

fn robust_rows(spec: &ChannelSpec, rows: &[avwc_core::coding::robust::RobustnessRow]) -> Vec<Value> {
    rows.iter()
        .map(|r| {
            Fields::new()
                .put("sequence", sequence(spec, &r.sequence))
                .put("lhs", r.lhs)
                .put("rhs", r.rhs)
                .put("slack", r.slack)
                .build()
        })
        .collect()
}

fn reduce(spec: &ChannelSpec, args: &CodeArgs, rc: RandomCode, out: Option<&Path>) -> CliResult<Value> {
    let avwc = &spec.avwc;
    let k = match (args.k, args.k_preset) {
        (Some(k), _) => KPreset::Explicit(k),
        (None, Some(KPresetArg::Display)) => KPreset::Display,
        (None, Some(KPresetArg::NCubed)) => KPreset::NCubed,
        (None, Some(KPresetArg::AllMembers)) => KPreset::AllMembers,
        (None, Some(KPresetArg::InProof) | None) => KPreset::InProof,
    };
    let n = rc.n();
    let opts = ReductionOptions {
        k,
        epsilon: args.epsilon,
        seed: args.seed,
        max_attempts: args.max_attempts,
    };
    let per_member = rc.member(0).codewords().len();
    announce("sequence evaluations per member", evaluation_work(spec, n, per_member))?;
    let red = reduce_random_code(&rc, avwc, &opts)?;
    let f = Fields::new()
        .put("tag", "random-code-reduction")
        .put("n", n)
        .put("k", red.code.len())
        .put("epsilon", args.epsilon)
        .put("attempts", red.attempts)
        .put("member_indices", json!(red.member_indices))
        .put("worst_mean_error", red.worst_mean_error)
        .put("worst_mean_error_sequence", sequence(spec, &red.worst_mean_error_sequence))
        .put("worst_mean_leakage_bits", red.worst_mean_leakage)
        .put("worst_mean_leakage_sequence", sequence(spec, &red.worst_mean_leakage_sequence));
    let file = emit_code(CodeFile::random(&red.code, spec), out)?;
    Ok(f.put("code_file", file).build())
}

fn eliminate(spec: &ChannelSpec, args: &CodeArgs, rc: RandomCode, out: Option<&Path>) -> CliResult<Value> {
    let avwc = &spec.avwc;
    let member = rc.member(0);
    let total_n = member.n() + args.prefix_len;
    announce(
        "sequence evaluations",
        evaluation_work(spec, total_n, member.codewords().len().saturating_mul(rc.len())),
    )?;
    let elim = eliminate_randomness(&rc, avwc, PrefixChoice::Search { len: args.prefix_len })?;
    let r = &elim.report;
    let prefix_words: Vec<String> = elim
        .prefix
        .words()
        .iter()
        .map(|w| word_to_string(w, &spec.input_labels))
        .collect();
    let f = Fields::new()
        .put("tag", "randomness-elimination")
        .put("n", elim.code.n())
        .put("prefix_len", elim.prefix.len())
        .put("prefix_words", json!(prefix_words))
        .put("messages", elim.code.j_count())
        .put("randomisation", elim.code.l_count())
        .put("worst_error", r.worst_error)
        .put("worst_error_sequence", sequence(spec, &r.worst_error_sequence))
        .put("worst_pair_error", r.worst_pair_error)
        .put("worst_prefix_error", r.worst_prefix_error)
        .put("worst_mean_member_error", r.worst_mean_member_error)
        .put("worst_leakage_bits", r.worst_leakage)
        .put("worst_leakage_sequence", sequence(spec, &r.worst_leakage_sequence))
        .put("worst_mean_member_leakage_bits", r.worst_mean_member_leakage)
        .put("error_bound_holds", r.error_bound_holds)
        .put("leakage_bound_holds", r.leakage_bound_holds);
    let file = emit_code(CodeFile::deterministic(&elim.code, spec), out)?;
    Ok(f.put("code_file", file).build())
}

fn verify_lemmas(spec: &ChannelSpec, args: &CodeArgs, loaded: Option<LoadedCode>) -> CliResult<Value> {
    let avwc = &spec.avwc;
    let n = match &loaded {
        Some(LoadedCode::Deterministic(c)) => args.n.unwrap_or(c.n()),
        _ => need_n(args)?,
    };
    let p = input_law(spec, args)?;
    let tp = TypicalityParams::new(n, args.delta)?;
    let slack = Slack { coefficient: args.slack_coef };
    let a = avwc.input_size();
    announce(
        "typicality pairs (input words x output words)",
        word_count(a, n).saturating_mul(word_count(avwc.main_output_size().max(avwc.eaves_output_size()), n)),
    )?;

    let mut typicality = Vec::new();
    let mut violations = 0;
    for (s, name) in spec.state_names.iter().enumerate() {
        for (side, w) in [("main", &avwc.main()[s]), ("eaves", &avwc.eaves()[s])] {
            let r = verify_typicality_bounds(&p, w, &tp, &slack)?;
            violations += r.violations;
            typicality.push(
                Fields::new()
                    .put("channel", format!("{side}/{name}"))
                    .put("typical_mass", r.typical_mass)
                    .put("typical_mass_bound", r.typical_mass_bound)
                    .put("cond_mass_min", r.cond_mass_min)
                    .put("cond_mass_bound", r.cond_mass_bound)
                    .put("cardinality_margin", r.cardinality_margin)
                    .put("probability_margin", r.probability_margin)
                    .put("violations", r.violations)
                    .build(),
            );
        }
    }

    let (code, origin) = match loaded {
        Some(l) => (require_deterministic(l)?, "supplied"),
        None => (build_code(spec, args, n)?.0, "built"),
    };
    if code.n() != n {
        return Err(CliError::Parse(format!("code has block length {}, expected {n}", code.n())));
    }
    announce("sequence evaluations", evaluation_work(spec, n, code.codewords().len()))?;
    let robust = verify_robustification(&code, avwc, None)?;
    let mut robust_f = Fields::new()
        .put("tag", "robustification-inequality")
        .put("code", origin)
        .put("gamma", robust.gamma)
        .put("min_slack", robust.min_slack)
        .put("holds", robust.holds);
    if args.table {
        robust_f = robust_f.put("table", robust_rows(spec, &robust.rows));
    }

    let events = check_secrecy_events(&code, avwc, &p, &tp, None, &slack)?;
    let secrecy = Fields::new()
        .put("tag", "secrecy-concentration-events")
        .put("epsilon", events.epsilon)
        .put("events", events.events.len())
        .put("failures", events.failures)
        .build();

    Ok(Fields::new()
        .put("n", n)
        .put("delta", args.delta)
        .put("input_distribution", probs(&p))
        .put("typicality", Fields::new().put("tag", "typicality-bounds").put("channels", typicality).put("violations", violations).build())
        .put("robustification", robust_f.build())
        .put("secrecy_events", secrecy)
        .put("all_pass", violations == 0 && robust.holds)
        .build())
}
