//! Numerical secrecy-rate bounds for an AVWC.
//!
//! * [`secrecy_lower_bound`]: `max_p [min_q I(p, W_q) - max_s I(p, V_s)]`.
//! * [`avc_capacity`]: `max_p min_q I(p, W_q)` with the symmetrisability gate
//!   for deterministic codes.
//! * [`secrecy_upper_bound_single_letter`]:
//!   `min_q max_{U -> X} [I(U; Y_q) - I(U; Z_q)]`.
//! * [`multiletter_bound`]: the same difference over `U -> X^n` for a fixed
//!   small `n`, normalised by `n`.
//!
//! None of these problems is concave in general, so every maximisation is a
//! seeded multi-start projected-gradient ascent backed by a grid sweep. The
//! grid result is a floor; when it beats the ascent the difference is
//! reported as `certified_gap`. Values are never clamped at zero.

use rayon::prelude::*;

use crate::channel::{
    ensure_enumerable, mixture_unchecked, product_output_distribution, word_count, Avwc, Channel,
    Distribution, Words,
};
use crate::error::{invalid, Result};
use crate::info::mutual_information_of;
use crate::optim::{
    best_run, fit_grid_resolution, golden_section_min, multi_start_ascent, projected_ascent,
    simplex_grid, stream_rng, AscentRun, AscentSettings, SimplexProduct,
};
use crate::structure::{test_symmetrisable, SymmetrisabilityReport};

#[derive(Debug, Clone, PartialEq)]
pub struct BoundOptions {
    /// Denominator of the outer simplex grid (1/64 by default).
    pub grid: usize,
    /// Largest number of grid points evaluated; the denominator shrinks
    /// until the grid fits.
    pub grid_budget: usize,
    /// Number of ascent starts, structured ones included.
    pub starts: usize,
    pub fd_step: f64,
    pub ascent_iters: usize,
    pub fw_iters: usize,
    pub fw_tol: f64,
    /// Denominator of the warm-start grid for the inner minimisation over q.
    pub fw_warm_grid: usize,
    /// Denominator of the outer q grid of the upper bounds.
    pub q_grid: usize,
    pub q_grid_budget: usize,
    pub seed: u64,
    /// Feasibility tolerance passed to the symmetrisability test.
    pub structure_tol: f64,
}

impl Default for BoundOptions {
    fn default() -> Self {
        BoundOptions {
            grid: 64,
            grid_budget: 20_000,
            starts: 32,
            fd_step: 1e-5,
            ascent_iters: 300,
            fw_iters: 500,
            fw_tol: 1e-8,
            fw_warm_grid: 4,
            q_grid: 16,
            q_grid_budget: 400,
            seed: 0,
            structure_tol: 1e-8,
        }
    }
}

impl BoundOptions {
    fn validate(&self) -> Result<()> {
        if self.grid == 0 || self.q_grid == 0 || self.fw_warm_grid == 0 {
            return invalid("grid denominators must be positive");
        }
        if self.starts == 0 {
            return invalid("at least one ascent start is required");
        }
        if !(self.fd_step > 0.0 && self.fd_step < 0.1) {
            return invalid("finite-difference step must lie in (0, 0.1)");
        }
        if !(self.fw_tol > 0.0) || !(self.structure_tol > 0.0) {
            return invalid("tolerances must be positive");
        }
        Ok(())
    }

    fn ascent(&self) -> AscentSettings {
        AscentSettings {
            fd_step: self.fd_step,
            max_iter: self.ascent_iters,
            ..AscentSettings::default()
        }
    }
}

/// Which part of an optimisation a trace entry belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TracePhase {
    /// An ascent run from a start point.
    Ascent,
    /// The ascent polished from the best grid point.
    GridPolish,
    /// One point of the outer q grid of an upper bound.
    QGrid,
    /// A local refinement step over q.
    QRefine,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TraceEntry {
    pub phase: TracePhase,
    pub index: usize,
    pub initial_value: f64,
    pub final_value: f64,
    pub iterations: usize,
}

/// Auxiliary input `U -> X` of the upper bounds.
#[derive(Debug, Clone, PartialEq)]
pub struct AuxiliaryChannelPair {
    pub u_size: usize,
    pub p_u: Distribution,
    pub x_given_u: Channel,
}

impl AuxiliaryChannelPair {
    pub fn new(p_u: Distribution, x_given_u: Channel) -> Result<Self> {
        if p_u.support_size() != x_given_u.input_size() {
            return invalid("auxiliary distribution and channel disagree on |U|");
        }
        Ok(AuxiliaryChannelPair {
            u_size: p_u.support_size(),
            p_u,
            x_given_u,
        })
    }

    /// Distribution of `X` induced by `U`.
    pub fn induced_input(&self) -> Distribution {
        self.x_given_u
            .output_distribution(&self.p_u)
            .expect("shapes checked at construction")
    }

    fn from_point(x: &[f64], u: usize, a: usize) -> Self {
        AuxiliaryChannelPair {
            u_size: u,
            p_u: Distribution::new_unchecked(x[..u].to_vec()),
            x_given_u: Channel::from_flat_unchecked(u, a, x[u..].to_vec()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundResult {
    /// Bits per channel use. Negative values mean the bound is vacuous.
    pub value: f64,
    /// Optimising input distribution; over `A^n` for the multi-letter bound.
    pub argmax_p: Distribution,
    pub inner_argmin_q: Distribution,
    /// Per-letter minimisers in the product-q variant of the multi-letter
    /// bound; empty otherwise.
    pub letter_q: Vec<Distribution>,
    /// State maximising the eavesdropper term, if there is one.
    pub inner_argmax_state: Option<usize>,
    pub aux: Option<AuxiliaryChannelPair>,
    /// Entries sorted by phase and index.
    pub optimizer_trace: Vec<TraceEntry>,
    /// `max(0, grid best - ascent best)`.
    pub certified_gap: f64,
}

/// `min_q I(p, W_q)` by pairwise Frank–Wolfe with golden-section line search,
/// warm-started from a coarse grid over `q`. Returns the value and `q`.
pub fn min_mixture_mi(p: &[f64], family: &[Channel], opts: &BoundOptions) -> (f64, Vec<f64>) {
    let k = family.len();
    let eval = |q: &[f64]| mutual_information_of(p, &mixture_unchecked(family, q));
    if k == 1 {
        return (eval(&[1.0]), vec![1.0]);
    }
    let res = fit_grid_resolution(k, opts.fw_warm_grid, 256);
    let (mut q, mut fq) = simplex_grid(k, res)
        .into_iter()
        .map(|q| {
            let v = eval(&q);
            (q, v)
        })
        .fold((Vec::new(), f64::INFINITY), |best, cand| {
            if cand.1 < best.1 {
                cand
            } else {
                best
            }
        });

    for _ in 0..opts.fw_iters {
        let g = mixture_gradient(p, family, &q);
        let fw = argmin(&g);
        let away = (0..k)
            .filter(|&s| q[s] > 0.0)
            .max_by(|&a, &b| g[a].total_cmp(&g[b]).then(b.cmp(&a)))
            .expect("q has support");
        let gap: f64 = q.iter().zip(&g).map(|(qi, gi)| qi * gi).sum::<f64>() - g[fw];
        if gap <= opts.fw_tol || fw == away {
            break;
        }
        let step_max = q[away];
        let along = |t: f64| {
            let mut r = q.clone();
            r[fw] += t;
            r[away] = (r[away] - t).max(0.0);
            r
        };
        let (t, ft) = golden_section_min(0.0, step_max, 1e-12 + step_max * 1e-10, |t| eval(&along(t)));
        if ft >= fq - 1e-15 {
            break;
        }
        q = along(t);
        fq = ft;
    }
    (fq, q)
}

/// Gradient of `q -> I(p, W_q)` in bits.
fn mixture_gradient(p: &[f64], family: &[Channel], q: &[f64]) -> Vec<f64> {
    let wq = mixture_unchecked(family, q);
    let out = wq.output_under(p);
    family
        .iter()
        .map(|ws| {
            let mut g = 0.0;
            for (x, &px) in p.iter().enumerate() {
                if px <= 0.0 {
                    continue;
                }
                for y in 0..out.len() {
                    let w = ws.prob(x, y);
                    if w > 0.0 {
                        let ratio = wq.prob(x, y).max(f64::MIN_POSITIVE) / out[y];
                        g += px * w * ratio.log2();
                    }
                }
            }
            g
        })
        .collect()
}

fn argmin(v: &[f64]) -> usize {
    (0..v.len())
        .min_by(|&a, &b| v[a].total_cmp(&v[b]).then(a.cmp(&b)))
        .expect("nonempty")
}

/// `max_s I(p, V_s)`; ties resolve to the lowest state.
pub fn max_state_mi(p: &[f64], family: &[Channel]) -> (f64, usize) {
    family
        .iter()
        .enumerate()
        .map(|(s, v)| (mutual_information_of(p, v), s))
        .fold((f64::NEG_INFINITY, 0), |best, cand| if cand.0 > best.0 { cand } else { best })
}

struct Maximum {
    point: Vec<f64>,
    trace: Vec<TraceEntry>,
    certified_gap: f64,
}

fn ascent_trace(runs: &[AscentRun], phase: TracePhase) -> Vec<TraceEntry> {
    runs.iter()
        .map(|r| TraceEntry {
            phase,
            index: r.start,
            initial_value: r.initial_value,
            final_value: r.final_value,
            iterations: r.iterations,
        })
        .collect()
}

fn simplex_starts(dim: usize, count: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut starts: Vec<Vec<f64>> = (0..dim)
        .map(|i| {
            let mut v = vec![0.0; dim];
            v[i] = 1.0;
            v
        })
        .collect();
    starts.push(vec![1.0 / dim as f64; dim]);
    let dom = SimplexProduct::single(dim);
    let mut k = 0;
    while starts.len() < count {
        starts.push(dom.random_point(&mut stream_rng(seed, k)));
        k += 1;
    }
    starts
}

/// Multi-start ascent plus grid floor over the simplex in `dim` coordinates.
fn maximize_on_simplex(dim: usize, f: &(impl Fn(&[f64]) -> f64 + Sync), opts: &BoundOptions) -> Maximum {
    let dom = SimplexProduct::single(dim);
    let settings = opts.ascent();
    let runs = multi_start_ascent(&dom, f, simplex_starts(dim, opts.starts, opts.seed), &settings);
    let mut trace = ascent_trace(&runs, TracePhase::Ascent);
    let best = best_run(&runs).expect("at least one start").clone();

    let res = fit_grid_resolution(dim, opts.grid, opts.grid_budget);
    let (grid_point, grid_value) = grid_argmax(simplex_grid(dim, res), f);
    let certified_gap = (grid_value - best.final_value).max(0.0);
    let mut point = best.point;
    if grid_value > best.final_value {
        let polish = projected_ascent(&dom, f, grid_point.clone(), runs.len(), &settings);
        trace.extend(ascent_trace(std::slice::from_ref(&polish), TracePhase::GridPolish));
        point = if polish.final_value >= grid_value { polish.point } else { grid_point };
    }
    Maximum {
        point,
        trace,
        certified_gap,
    }
}

fn grid_argmax(grid: Vec<Vec<f64>>, f: &(impl Fn(&[f64]) -> f64 + Sync)) -> (Vec<f64>, f64) {
    let values: Vec<f64> = grid.par_iter().map(|p| f(p)).collect();
    let mut best = 0;
    for (i, &v) in values.iter().enumerate() {
        if v > values[best] {
            best = i;
        }
    }
    let v = values[best];
    (grid.into_iter().nth(best).expect("nonempty grid"), v)
}

/// `max_p [min_q I(p, W_q) - max_s I(p, V_s)]`.
pub fn secrecy_lower_bound(avwc: &Avwc, opts: &BoundOptions) -> Result<BoundResult> {
    opts.validate()?;
    let (main, eaves) = (avwc.main(), avwc.eaves());
    let objective = |p: &[f64]| min_mixture_mi(p, main, opts).0 - max_state_mi(p, eaves).0;
    let best = maximize_on_simplex(avwc.input_size(), &objective, opts);
    let (imin, q) = min_mixture_mi(&best.point, main, opts);
    let (imax, s) = max_state_mi(&best.point, eaves);
    Ok(BoundResult {
        value: imin - imax,
        argmax_p: Distribution::new_unchecked(best.point),
        inner_argmin_q: Distribution::new_unchecked(q),
        letter_q: Vec::new(),
        inner_argmax_state: Some(s),
        aux: None,
        optimizer_trace: best.trace,
        certified_gap: best.certified_gap,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct AvcCapacity {
    /// Saddle value `max_p min_q I(p, W_q)`: the random-code capacity.
    pub random_code: BoundResult,
    pub symmetrisability: SymmetrisabilityReport<f64>,
    /// Zero for a symmetrisable family, the saddle value otherwise.
    pub deterministic_capacity: f64,
}

/// Capacity of the ordinary AVC given by `main`.
pub fn avc_capacity(main: &[Channel], opts: &BoundOptions) -> Result<AvcCapacity> {
    opts.validate()?;
    crate::channel::check_family_shape(main, "state")?;
    let objective = |p: &[f64]| min_mixture_mi(p, main, opts).0;
    let best = maximize_on_simplex(main[0].input_size(), &objective, opts);
    let (value, q) = min_mixture_mi(&best.point, main, opts);
    let symmetrisability = test_symmetrisable(main, opts.structure_tol)?;
    let deterministic_capacity = if symmetrisability.symmetrisable { 0.0 } else { value };
    Ok(AvcCapacity {
        random_code: BoundResult {
            value,
            argmax_p: Distribution::new_unchecked(best.point),
            inner_argmin_q: Distribution::new_unchecked(q),
            letter_q: Vec::new(),
            inner_argmax_state: None,
            aux: None,
            optimizer_trace: best.trace,
            certified_gap: best.certified_gap,
        },
        symmetrisability,
        deterministic_capacity,
    })
}

/// `U -> X` composed with `x_to_y`, read off the flat point `[p_u | P(x|u)]`.
fn compose_from_aux(point: &[f64], u: usize, a: usize, x_to_y: &Channel) -> Channel {
    let pxu = Channel::from_flat_unchecked(u, a, point[u..].to_vec());
    pxu.compose(x_to_y).expect("aux output matches channel input")
}

/// `min_i I(U; Y_i) - max_j I(U; Z_j)` at the flat auxiliary point.
fn aux_objective(point: &[f64], u: usize, a: usize, mains: &[Channel], eaves: &[Channel]) -> f64 {
    let pu = &point[..u];
    let y = mains
        .iter()
        .map(|w| mutual_information_of(pu, &compose_from_aux(point, u, a, w)))
        .fold(f64::INFINITY, f64::min);
    let z = eaves
        .iter()
        .map(|v| mutual_information_of(pu, &compose_from_aux(point, u, a, v)))
        .fold(f64::NEG_INFINITY, f64::max);
    y - z
}

/// Auxiliary point with `U = X` on the first `min(u, a)` symbols, input law
/// `p` (truncated and renormalised when `u < a`), remaining rows uniform.
fn identity_aux(p: &[f64], u: usize, a: usize) -> Vec<f64> {
    let mut point = vec![0.0; u + u * a];
    let m = u.min(a);
    let mass: f64 = p[..m].iter().sum();
    for i in 0..m {
        point[i] = if mass > 0.0 { p[i] / mass } else { 1.0 / m as f64 };
    }
    for r in 0..u {
        let row = &mut point[u + r * a..u + (r + 1) * a];
        if r < a {
            row[r] = 1.0;
        } else {
            row.iter_mut().for_each(|v| *v = 1.0 / a as f64);
        }
    }
    point
}

struct AuxMaximum {
    value: f64,
    point: Vec<f64>,
    runs: Vec<AscentRun>,
    gap: f64,
}

/// `max_{U -> X} [min_i I(U; Y_i) - max_j I(U; Z_j)]`. The `U = X` restriction
/// swept over the input grid is the floor.
fn maximize_aux(u: usize, a: usize, mains: &[Channel], eaves: &[Channel], opts: &BoundOptions, stream: u64) -> AuxMaximum {
    let f = |x: &[f64]| aux_objective(x, u, a, mains, eaves);
    let single = |p: &[f64]| {
        let y = mains.iter().map(|w| mutual_information_of(p, w)).fold(f64::INFINITY, f64::min);
        let z = eaves.iter().map(|v| mutual_information_of(p, v)).fold(f64::NEG_INFINITY, f64::max);
        y - z
    };
    let res = fit_grid_resolution(a, opts.grid, opts.grid_budget.min(4096));
    let (floor_p, _) = grid_argmax(simplex_grid(a, res), &single);
    // The floor is evaluated through the auxiliary objective so it is
    // comparable with the ascent values.
    let floor_point = identity_aux(&floor_p, u, a);
    let floor = f(&floor_point);

    let dom = SimplexProduct::new(std::iter::once(u).chain(std::iter::repeat_n(a, u)).collect());
    let mut starts = vec![
        floor_point.clone(),
        identity_aux(&vec![1.0 / a as f64; a], u, a),
        {
            let mut c = vec![1.0 / a as f64; u + u * a];
            c[..u].iter_mut().for_each(|v| *v = 1.0 / u as f64);
            c
        },
    ];
    let mut k = 0;
    while starts.len() < opts.starts.max(3) {
        let mut rng = stream_rng(opts.seed ^ stream.wrapping_mul(0x9E37_79B9_7F4A_7C15), k);
        starts.push(dom.random_point(&mut rng));
        k += 1;
    }
    let runs = multi_start_ascent(&dom, &f, starts, &opts.ascent());
    let best = best_run(&runs).expect("at least one start");
    let (value, point) = if best.final_value >= floor {
        (best.final_value, best.point.clone())
    } else {
        (floor, floor_point)
    };
    let gap = (floor - best.final_value).max(0.0);
    AuxMaximum { value, point, runs, gap }
}

/// `min_q max_{U -> X} [I(U; Y_q) - I(U; Z_q)]` over a q grid refined by a
/// pairwise compass search.
pub fn secrecy_upper_bound_single_letter(avwc: &Avwc, u_size: usize, opts: &BoundOptions) -> Result<BoundResult> {
    opts.validate()?;
    if u_size == 0 {
        return invalid("auxiliary alphabet must have at least one symbol");
    }
    let (k, a) = (avwc.state_count(), avwc.input_size());
    let inner = |q: &[f64], stream: u64| {
        let wq = mixture_unchecked(avwc.main(), q);
        let vq = mixture_unchecked(avwc.eaves(), q);
        maximize_aux(u_size, a, &[wq], &[vq], opts, stream)
    };

    let res = fit_grid_resolution(k, opts.q_grid, opts.q_grid_budget);
    let grid = simplex_grid(k, res);
    let evaluated: Vec<AuxMaximum> = grid.iter().enumerate().map(|(i, q)| inner(q, i as u64)).collect();
    let mut trace: Vec<TraceEntry> = evaluated
        .iter()
        .enumerate()
        .map(|(i, m)| TraceEntry {
            phase: TracePhase::QGrid,
            index: i,
            initial_value: m.runs.iter().map(|r| r.initial_value).fold(f64::NEG_INFINITY, f64::max),
            final_value: m.value,
            iterations: m.runs.iter().map(|r| r.iterations).sum(),
        })
        .collect();
    let mut best_i = 0;
    for (i, m) in evaluated.iter().enumerate() {
        if m.value < evaluated[best_i].value {
            best_i = i;
        }
    }
    let mut q = grid[best_i].clone();
    let mut best = evaluated.into_iter().nth(best_i).expect("nonempty grid");

    let mut step = 1.0 / res as f64;
    let mut refine = 0;
    while k > 1 && step >= 1e-4 {
        let mut improved = false;
        for i in 0..k {
            for j in 0..k {
                if i == j || q[j] <= 0.0 {
                    continue;
                }
                let t = step.min(q[j]);
                let mut cand = q.clone();
                cand[i] += t;
                cand[j] -= t;
                let m = inner(&cand, (grid.len() + refine) as u64);
                trace.push(TraceEntry {
                    phase: TracePhase::QRefine,
                    index: refine,
                    initial_value: best.value,
                    final_value: m.value,
                    iterations: m.runs.iter().map(|r| r.iterations).sum(),
                });
                refine += 1;
                if m.value < best.value - 1e-12 {
                    best = m;
                    q = cand;
                    improved = true;
                }
            }
        }
        if !improved {
            step /= 2.0;
        }
    }

    let aux = AuxiliaryChannelPair::from_point(&best.point, u_size, a);
    let wq = mixture_unchecked(avwc.main(), &q);
    let vq = mixture_unchecked(avwc.eaves(), &q);
    let value = aux_objective(&best.point, u_size, a, &[wq], &[vq]);
    let z_state = max_u_information(&best.point, u_size, a, avwc.eaves());
    Ok(BoundResult {
        value,
        argmax_p: aux.induced_input(),
        inner_argmin_q: Distribution::new_unchecked(q),
        letter_q: Vec::new(),
        inner_argmax_state: Some(z_state),
        aux: Some(aux),
        optimizer_trace: trace,
        certified_gap: best.gap,
    })
}

/// State whose eavesdropper channel leaks the most about `U`.
fn max_u_information(point: &[f64], u: usize, a: usize, eaves: &[Channel]) -> usize {
    let per_state: Vec<Channel> = eaves.iter().map(|v| compose_from_aux(point, u, a, v)).collect();
    max_state_mi(&point[..u], &per_state).1
}

/// Tensor product of per-letter channels over `A^n -> B^n`.
fn tensor(channels: &[Channel]) -> Channel {
    let (a, b) = (channels[0].input_size(), channels[0].output_size());
    let n = channels.len();
    let entries: Vec<f64> = Words::new(a, n)
        .flat_map(|x| product_output_distribution(channels, &x))
        .collect();
    Channel::from_flat_unchecked(word_count(a, n) as usize, word_count(b, n) as usize, entries)
}

/// `(1/n) max_{U -> X^n} [min_q I(U; Y^n_q) - max_q I(U; Z^n_q)]` with `q`
/// ranging over a simplex grid. With `per_letter` the state law is a product
/// of per-letter grid points instead of an i.i.d. power.
pub fn multiletter_bound(avwc: &Avwc, n: usize, u_size: usize, per_letter: bool, opts: &BoundOptions) -> Result<BoundResult> {
    opts.validate()?;
    if n == 0 {
        return invalid("block length must be at least 1");
    }
    if u_size == 0 {
        return invalid("auxiliary alphabet must have at least one symbol");
    }
    let (k, a) = (avwc.state_count(), avwc.input_size());
    let an = word_count(a, n);
    for (what, out) in [("main", avwc.main_output_size()), ("eavesdropper", avwc.eaves_output_size())] {
        ensure_enumerable(
            format!("{n}-letter {what} channel"),
            an.saturating_mul(word_count(out, n)),
        )?;
    }
    let res = fit_grid_resolution(k, opts.q_grid, opts.q_grid_budget);
    let grid = simplex_grid(k, res);
    let laws: Vec<Vec<usize>> = if per_letter {
        ensure_enumerable("per-letter state grid", word_count(grid.len(), n))?;
        Words::new(grid.len(), n).collect()
    } else {
        (0..grid.len()).map(|g| vec![g; n]).collect()
    };
    let build = |family: &[Channel]| -> Vec<Channel> {
        let letters: Vec<Channel> = grid.iter().map(|q| mixture_unchecked(family, q)).collect();
        laws.par_iter()
            .map(|law| {
                let chs: Vec<Channel> = law.iter().map(|&g| letters[g].clone()).collect();
                tensor(&chs)
            })
            .collect()
    };
    let mains = build(avwc.main());
    let eaves = build(avwc.eaves());
    let an = an as usize;

    let best = maximize_aux(u_size, an, &mains, &eaves, opts, 0);
    let trace = ascent_trace(&best.runs, TracePhase::Ascent);
    let aux = AuxiliaryChannelPair::from_point(&best.point, u_size, an);
    let pu = &best.point[..u_size];
    let y_info: Vec<f64> = mains
        .iter()
        .map(|w| mutual_information_of(pu, &compose_from_aux(&best.point, u_size, an, w)))
        .collect();
    let law = argmin(&y_info);
    let value = aux_objective(&best.point, u_size, an, &mains, &eaves) / n as f64;
    let eaves_states: Vec<Channel> = avwc.eaves().iter().map(|v| v.power(n)).collect::<Result<_>>()?;
    Ok(BoundResult {
        value,
        argmax_p: aux.induced_input(),
        inner_argmin_q: Distribution::new_unchecked(grid[laws[law][0]].clone()),
        letter_q: if per_letter {
            laws[law].iter().map(|&g| Distribution::new_unchecked(grid[g].clone())).collect()
        } else {
            Vec::new()
        },
        inner_argmax_state: Some(max_u_information(&best.point, u_size, an, &eaves_states)),
        aux: Some(aux),
        optimizer_trace: trace,
        certified_gap: best.gap / n as f64,
    })
}
