//! Structural decision procedures: symmetrisability of the main family,
//! degradedness between channels, and existence of a best channel to the
//! eavesdropper. Each test is a small linear feasibility problem; every
//! returned witness is re-checked directly against the channels.

use rayon::prelude::*;

use crate::channel::{check_family_shape, mixture_channel, Channel, Distribution};
use crate::error::{invalid, Result};
use crate::lp::{solve_feasibility, LinearSystem};
use crate::scalar::Real;

#[derive(Debug, Clone, PartialEq)]
pub struct SymmetrisabilityReport<T: Real = f64> {
    pub symmetrisable: bool,
    /// `U : A -> S` satisfying the symmetry equations.
    pub u_witness: Option<Channel<T>>,
    /// Max violation of the symmetry equations at `u_witness`.
    pub residual: Option<T>,
    /// Least L1 violation when no witness exists.
    pub margin: Option<T>,
    /// Non-symmetrisable, but only by less than ten times the tolerance.
    pub marginal: bool,
    pub tol: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DegradednessReport<T: Real = f64> {
    pub degraded: bool,
    /// Stochastic map `D` with `v_other = v_base ∘ D`.
    pub d_witness: Option<Channel<T>>,
    /// Max entrywise error of the factorisation (at the witness if any).
    pub residual: T,
    pub margin: Option<T>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BestChannelReport<T: Real = f64> {
    pub exists: bool,
    pub q_star: Option<Distribution<T>>,
    pub best_state: Option<usize>,
    /// Degradedness of each `V_s` against the winning candidate.
    pub per_state_reports: Vec<DegradednessReport<T>>,
    /// `(candidate, first state not degraded w.r.t. it)` for rejected candidates.
    pub rejected: Vec<(usize, usize)>,
}

/// `max |sum_s W(y|x,s) U(s|x') - sum_s W(y|x',s) U(s|x)|` over `x, x', y`.
pub fn symmetrisation_residual<T: Real>(main: &[Channel<T>], u: &Channel<T>) -> Result<T> {
    check_family_shape(main, "main")?;
    let (a, b) = (main[0].input_size(), main[0].output_size());
    if u.input_size() != a || u.output_size() != main.len() {
        return invalid(format!(
            "symmetrising channel must be {a}x{}, got {}x{}",
            main.len(),
            u.input_size(),
            u.output_size()
        ));
    }
    let mut worst = T::zero();
    for x in 0..a {
        for xp in 0..a {
            for y in 0..b {
                let mut lhs = T::zero();
                let mut rhs = T::zero();
                for (s, w) in main.iter().enumerate() {
                    lhs = lhs + w.prob(x, y) * u.prob(xp, s);
                    rhs = rhs + w.prob(xp, y) * u.prob(x, s);
                }
                worst = worst.max((lhs - rhs).abs());
            }
        }
    }
    Ok(worst)
}

/// Clamps tiny negative LP output and renormalises each row.
fn witness_channel<T: Real>(x: &[T], rows: usize, cols: usize) -> Channel<T> {
    let mut entries: Vec<T> = x.iter().map(|&v| v.max(T::zero())).collect();
    for r in entries.chunks_mut(cols) {
        let s: T = r.iter().copied().sum();
        if s > T::zero() {
            r.iter_mut().for_each(|v| *v = *v / s);
        } else {
            r.iter_mut().for_each(|v| *v = T::one() / T::from_usize_lossy(cols));
        }
    }
    Channel::from_flat_unchecked(rows, cols, entries)
}

pub fn test_symmetrisable<T: Real>(main: &[Channel<T>], tol: T) -> Result<SymmetrisabilityReport<T>> {
    check_family_shape(main, "main")?;
    let (a, b, s_count) = (main[0].input_size(), main[0].output_size(), main.len());
    let vars = a * s_count;
    let var = |x: usize, s: usize| x * s_count + s;

    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for x in 0..a {
        let mut r = vec![T::zero(); vars];
        for s in 0..s_count {
            r[var(x, s)] = T::one();
        }
        rows.push(r);
        rhs.push(T::one());
    }
    for x in 0..a {
        for xp in x + 1..a {
            for y in 0..b {
                let mut r = vec![T::zero(); vars];
                for (s, w) in main.iter().enumerate() {
                    r[var(xp, s)] = r[var(xp, s)] + w.prob(x, y);
                    r[var(x, s)] = r[var(x, s)] - w.prob(xp, y);
                }
                rows.push(r);
                rhs.push(T::zero());
            }
        }
    }
    let sys = LinearSystem::new(rows, rhs, true)?;
    let res = solve_feasibility(&sys, tol)?;
    if let Some(x) = res.witness.filter(|_| res.feasible) {
        let u = witness_channel(&x, a, s_count);
        let residual = symmetrisation_residual(main, &u)?;
        if residual > tol {
            return Err(crate::Error::NumericFailure(format!(
                "symmetrising witness fails re-check with residual {residual}"
            )));
        }
        Ok(SymmetrisabilityReport {
            symmetrisable: true,
            u_witness: Some(u),
            residual: Some(residual),
            margin: None,
            marginal: false,
            tol,
        })
    } else {
        let margin = res.infeasibility_margin;
        Ok(SymmetrisabilityReport {
            symmetrisable: false,
            u_witness: None,
            residual: None,
            margin: Some(margin),
            marginal: margin < T::lit(10.0) * tol,
            tol,
        })
    }
}

/// Largest entrywise error of `v_other ≈ v_base ∘ d`.
pub fn degradation_residual<T: Real>(
    v_base: &Channel<T>,
    v_other: &Channel<T>,
    d: &Channel<T>,
) -> Result<T> {
    let composed = v_base.compose(d)?;
    if composed.input_size() != v_other.input_size() || composed.output_size() != v_other.output_size()
    {
        return invalid("degrading map has the wrong output alphabet");
    }
    Ok(composed.max_abs_diff(v_other))
}

pub fn test_degraded<T: Real>(
    v_base: &Channel<T>,
    v_other: &Channel<T>,
    tol: T,
) -> Result<DegradednessReport<T>> {
    if v_base.input_size() != v_other.input_size() {
        return invalid(format!(
            "channels disagree on input size ({} vs {})",
            v_base.input_size(),
            v_other.input_size()
        ));
    }
    let (a, cb, co) = (v_base.input_size(), v_base.output_size(), v_other.output_size());
    let vars = cb * co;
    let var = |zb: usize, z: usize| zb * co + z;
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for zb in 0..cb {
        let mut r = vec![T::zero(); vars];
        for z in 0..co {
            r[var(zb, z)] = T::one();
        }
        rows.push(r);
        rhs.push(T::one());
    }
    for x in 0..a {
        for z in 0..co {
            let mut r = vec![T::zero(); vars];
            for zb in 0..cb {
                r[var(zb, z)] = v_base.prob(x, zb);
            }
            rows.push(r);
            rhs.push(v_other.prob(x, z));
        }
    }
    let sys = LinearSystem::new(rows, rhs, true)?;
    let res = solve_feasibility(&sys, tol)?;
    match res.witness.filter(|_| res.feasible) {
        Some(x) => {
            let d = witness_channel(&x, cb, co);
            let residual = degradation_residual(v_base, v_other, &d)?;
            if residual > tol {
                return Err(crate::Error::NumericFailure(format!(
                    "degrading witness fails re-check with residual {residual}"
                )));
            }
            Ok(DegradednessReport {
                degraded: true,
                d_witness: Some(d),
                residual,
                margin: None,
            })
        }
        None => Ok(DegradednessReport {
            degraded: false,
            d_witness: None,
            residual: res.residual,
            margin: Some(res.infeasibility_margin),
        }),
    }
}

/// Tests every `V_s` for degradedness against `V_q`. If all pass, every
/// mixture `V_{q'}` is degraded w.r.t. `V_q` as well.
pub fn best_channel_with_candidate<T: Real>(
    eaves: &[Channel<T>],
    q: &Distribution<T>,
    tol: T,
) -> Result<BestChannelReport<T>> {
    let base = mixture_channel(eaves, q)?;
    let reports = eaves
        .par_iter()
        .map(|v| test_degraded(&base, v, tol))
        .collect::<Result<Vec<_>>>()?;
    let exists = reports.iter().all(|r| r.degraded);
    Ok(BestChannelReport {
        exists,
        q_star: exists.then(|| q.clone()),
        best_state: q.as_point_mass().filter(|_| exists),
        rejected: Vec::new(),
        per_state_reports: reports,
    })
}

/// Searches point masses in state order; the lowest index that dominates
/// every other state wins.
pub fn find_best_eaves_channel<T: Real>(eaves: &[Channel<T>], tol: T) -> Result<BestChannelReport<T>> {
    check_family_shape(eaves, "eavesdropper")?;
    let s_count = eaves.len();
    let candidates = (0..s_count)
        .into_par_iter()
        .map(|c| {
            let reports = eaves
                .iter()
                .enumerate()
                .map(|(s, v)| {
                    if s == c {
                        Ok(DegradednessReport {
                            degraded: true,
                            d_witness: Some(Channel::identity(v.output_size())),
                            residual: T::zero(),
                            margin: None,
                        })
                    } else {
                        test_degraded(&eaves[c], v, tol)
                    }
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(reports)
        })
        .collect::<Result<Vec<_>>>()?;

    let mut rejected = Vec::new();
    for (c, reports) in candidates.into_iter().enumerate() {
        match reports.iter().position(|r| !r.degraded) {
            None => {
                return Ok(BestChannelReport {
                    exists: true,
                    q_star: Some(Distribution::point_mass(s_count, c)),
                    best_state: Some(c),
                    per_state_reports: reports,
                    rejected,
                })
            }
            Some(failing) => rejected.push((c, failing)),
        }
    }
    Ok(BestChannelReport {
        exists: false,
        q_star: None,
        best_state: None,
        per_state_reports: Vec::new(),
        rejected,
    })
}
