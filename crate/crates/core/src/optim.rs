//! Derivative-free building blocks for optimisation over probability simplices
//! and products of simplices: projection, grids, seeded random starts,
//! golden-section line search and multi-start projected-gradient ascent.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Exp1;
use rayon::prelude::*;

/// Euclidean projection of `v` onto the probability simplex (sort-based).
pub fn project_to_simplex(v: &mut [f64]) {
    let mut u: Vec<f64> = v.to_vec();
    u.sort_by(|a, b| b.partial_cmp(a).expect("finite coordinates"));
    let mut cumsum = 0.0;
    let mut theta = 0.0;
    for (i, &ui) in u.iter().enumerate() {
        cumsum += ui;
        let t = (cumsum - 1.0) / (i + 1) as f64;
        if ui - t > 0.0 {
            theta = t;
        }
    }
    for x in v.iter_mut() {
        *x = (*x - theta).max(0.0);
    }
    // Re-normalise away the rounding drift of the subtraction.
    let s: f64 = v.iter().sum();
    if s > 0.0 {
        v.iter_mut().for_each(|x| *x /= s);
    }
}

/// Number of points of the simplex grid with denominator `res` in `dim`
/// coordinates, i.e. `C(res + dim - 1, dim - 1)`.
pub fn simplex_grid_size(dim: usize, res: usize) -> u128 {
    let mut c: u128 = 1;
    for i in 0..dim.saturating_sub(1) {
        c = c * (res + i + 1) as u128 / (i + 1) as u128;
    }
    c
}

/// Largest denominator `<= res` whose grid has at most `budget` points.
pub fn fit_grid_resolution(dim: usize, res: usize, budget: usize) -> usize {
    let mut r = res.max(1);
    while r > 1 && simplex_grid_size(dim, r) > budget as u128 {
        r -= 1;
    }
    r
}

/// All points `k / res` of the simplex in `dim` coordinates, lexicographic
/// in the integer numerators.
pub fn simplex_grid(dim: usize, res: usize) -> Vec<Vec<f64>> {
    fn rec(dim: usize, left: usize, prefix: &mut Vec<usize>, res: usize, out: &mut Vec<Vec<f64>>) {
        if prefix.len() + 1 == dim {
            prefix.push(left);
            out.push(prefix.iter().map(|&k| k as f64 / res as f64).collect());
            prefix.pop();
            return;
        }
        for k in 0..=left {
            prefix.push(k);
            rec(dim, left - k, prefix, res, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(dim, res, &mut Vec::with_capacity(dim), res, &mut out);
    out
}

/// Independent RNG stream `stream` under the master `seed`.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Uniform (flat Dirichlet) sample from the simplex.
pub fn random_simplex_point<R: Rng>(dim: usize, rng: &mut R) -> Vec<f64> {
    let mut v: Vec<f64> = (0..dim).map(|_| rng.sample::<f64, _>(Exp1)).collect();
    let s: f64 = v.iter().sum();
    v.iter_mut().for_each(|x| *x /= s);
    v
}

/// Minimises a unimodal `f` on `[lo, hi]`; returns `(argmin, min)`.
pub fn golden_section_min(mut lo: f64, mut hi: f64, tol: f64, f: impl Fn(f64) -> f64) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_8;
    let mut c = hi - INV_PHI * (hi - lo);
    let mut d = lo + INV_PHI * (hi - lo);
    let (mut fc, mut fd) = (f(c), f(d));
    while hi - lo > tol {
        if fc <= fd {
            hi = d;
            d = c;
            fd = fc;
            c = hi - INV_PHI * (hi - lo);
            fc = f(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + INV_PHI * (hi - lo);
            fd = f(d);
        }
    }
    // The endpoints are candidates too: convex objectives on a segment are
    // often minimised at a vertex.
    let mut best = if fc <= fd { (c, fc) } else { (d, fd) };
    for x in [lo, hi] {
        let fx = f(x);
        if fx < best.1 {
            best = (x, fx);
        }
    }
    best
}

/// A product of probability simplices, flattened block after block.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimplexProduct {
    blocks: Vec<usize>,
}

impl SimplexProduct {
    pub fn new(blocks: Vec<usize>) -> Self {
        assert!(blocks.iter().all(|&b| b > 0), "empty simplex block");
        SimplexProduct { blocks }
    }

    pub fn single(dim: usize) -> Self {
        SimplexProduct::new(vec![dim])
    }

    pub fn dim(&self) -> usize {
        self.blocks.iter().sum()
    }

    pub fn blocks(&self) -> &[usize] {
        &self.blocks
    }

    fn ranges(&self) -> impl Iterator<Item = std::ops::Range<usize>> + '_ {
        self.blocks.iter().scan(0, |start, &len| {
            let r = *start..*start + len;
            *start += len;
            Some(r)
        })
    }

    pub fn project(&self, x: &mut [f64]) {
        for r in self.ranges() {
            project_to_simplex(&mut x[r]);
        }
    }

    pub fn random_point<R: Rng>(&self, rng: &mut R) -> Vec<f64> {
        self.blocks
            .iter()
            .flat_map(|&b| random_simplex_point(b, rng))
            .collect()
    }

    fn block_of(&self, coord: usize) -> std::ops::Range<usize> {
        self.ranges()
            .find(|r| r.contains(&coord))
            .expect("coordinate inside the product")
    }

    /// Finite-difference gradient of `f` extended off the product by
    /// block-wise normalisation. One-sided at the boundary.
    pub fn fd_gradient(&self, f: &impl Fn(&[f64]) -> f64, x: &[f64], fx: f64, h: f64) -> Vec<f64> {
        let mut g = vec![0.0; x.len()];
        let mut y = x.to_vec();
        for i in 0..x.len() {
            let block = self.block_of(i);
            let eval = |y: &mut Vec<f64>, delta: f64| {
                y.copy_from_slice(x);
                y[i] += delta;
                let s: f64 = y[block.clone()].iter().sum();
                y[block.clone()].iter_mut().for_each(|v| *v /= s);
                f(y)
            };
            g[i] = if x[i] >= h {
                (eval(&mut y, h) - eval(&mut y, -h)) / (2.0 * h)
            } else {
                (eval(&mut y, h) - fx) / h
            };
        }
        g
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AscentSettings {
    pub fd_step: f64,
    pub max_iter: usize,
    pub tol: f64,
}

impl Default for AscentSettings {
    fn default() -> Self {
        AscentSettings {
            fd_step: 1e-5,
            max_iter: 300,
            tol: 1e-10,
        }
    }
}

/// One ascent run, kept for the optimiser trace.
#[derive(Debug, Clone, PartialEq)]
pub struct AscentRun {
    pub start: usize,
    pub initial_value: f64,
    pub final_value: f64,
    pub iterations: usize,
    pub point: Vec<f64>,
}

/// Projected-gradient ascent with Armijo backtracking.
pub fn projected_ascent(
    domain: &SimplexProduct,
    f: &impl Fn(&[f64]) -> f64,
    start: Vec<f64>,
    start_index: usize,
    settings: &AscentSettings,
) -> AscentRun {
    let mut x = start;
    domain.project(&mut x);
    let mut fx = f(&x);
    let initial_value = fx;
    let mut step = 1.0;
    let mut iterations = 0;
    for _ in 0..settings.max_iter {
        iterations += 1;
        let g = domain.fd_gradient(f, &x, fx, settings.fd_step);
        let mut accepted = None;
        let mut t = step;
        while t > 1e-14 {
            let mut y: Vec<f64> = x.iter().zip(&g).map(|(a, b)| a + t * b).collect();
            domain.project(&mut y);
            let ascent: f64 = g.iter().zip(y.iter().zip(&x)).map(|(gi, (yi, xi))| gi * (yi - xi)).sum();
            let fy = f(&y);
            if fy > fx && fy >= fx + 1e-4 * ascent {
                accepted = Some((y, fy));
                break;
            }
            t *= 0.5;
        }
        let Some((y, fy)) = accepted else { break };
        let gain = fy - fx;
        x = y;
        fx = fy;
        step = (t * 2.0).min(1e3);
        if gain < settings.tol {
            break;
        }
    }
    AscentRun {
        start: start_index,
        initial_value,
        final_value: fx,
        iterations,
        point: x,
    }
}

/// Runs [`projected_ascent`] from every start in parallel; the returned runs
/// keep the order of `starts`.
pub fn multi_start_ascent(
    domain: &SimplexProduct,
    f: &(impl Fn(&[f64]) -> f64 + Sync),
    starts: Vec<Vec<f64>>,
    settings: &AscentSettings,
) -> Vec<AscentRun> {
    starts
        .into_par_iter()
        .enumerate()
        .map(|(i, s)| projected_ascent(domain, f, s, i, settings))
        .collect()
}

/// Best run; ties go to the lowest start index.
pub fn best_run(runs: &[AscentRun]) -> Option<&AscentRun> {
    runs.iter()
        .fold(None, |best: Option<&AscentRun>, r| match best {
            Some(b) if b.final_value >= r.final_value => Some(b),
            _ => Some(r),
        })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn grid_sizes() {
        assert_eq!(simplex_grid(2, 64).len(), 65);
        assert_eq!(simplex_grid(3, 4).len() as u128, simplex_grid_size(3, 4));
        assert_eq!(simplex_grid_size(3, 64), 2145);
        assert!(simplex_grid(3, 4).iter().all(|p| (p.iter().sum::<f64>() - 1.0).abs() < 1e-12));
        let r = fit_grid_resolution(6, 64, 5000);
        assert!(simplex_grid_size(6, r) <= 5000);
        assert!(simplex_grid_size(6, r + 1) > 5000);
    }

    #[test]
    fn golden_section_finds_parabola_minimum() {
        let (x, fx) = golden_section_min(0.0, 1.0, 1e-10, |t| (t - 0.3) * (t - 0.3));
        assert!((x - 0.3).abs() < 1e-6 && fx < 1e-12);
        let (x, _) = golden_section_min(0.0, 1.0, 1e-10, |t| t);
        assert_eq!(x, 0.0);
    }

    #[test]
    fn ascent_finds_entropy_maximum() {
        let f = |p: &[f64]| -> f64 { p.iter().filter(|&&x| x > 0.0).map(|&x| -x * x.log2()).sum() };
        let dom = SimplexProduct::single(3);
        let run = projected_ascent(&dom, &f, vec![0.8, 0.1, 0.1], 0, &AscentSettings::default());
        assert!((run.final_value - 3f64.log2()).abs() < 1e-8);
    }

    proptest! {
        #[test]
        fn projection_lands_on_simplex(v in prop::collection::vec(-5.0f64..5.0, 1..8)) {
            let mut x = v.clone();
            project_to_simplex(&mut x);
            prop_assert!((x.iter().sum::<f64>() - 1.0).abs() < 1e-12);
            prop_assert!(x.iter().all(|&a| a >= 0.0));
            // idempotent
            let mut y = x.clone();
            project_to_simplex(&mut y);
            for (a, b) in x.iter().zip(&y) {
                prop_assert!((a - b).abs() < 1e-12);
            }
        }
    }
}
