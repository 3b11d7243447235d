//! Dense phase-one simplex for feasibility of `A x = b` (optionally `x >= 0`).
//!
//! Pivoting follows Bland's rule, so the tableau cannot cycle; an iteration
//! cap still guards against numerically degenerate bases.

use crate::error::{invalid, Error, Result};
use crate::scalar::Real;

#[derive(Debug, Clone, PartialEq)]
pub struct LinearSystem<T: Real = f64> {
    a: Vec<Vec<T>>,
    b: Vec<T>,
    nonneg: bool,
}

impl<T: Real> LinearSystem<T> {
    pub fn new(a: Vec<Vec<T>>, b: Vec<T>, nonneg: bool) -> Result<Self> {
        let m = a.len();
        if m == 0 {
            return invalid("linear system needs at least one constraint");
        }
        let n = a[0].len();
        if n == 0 {
            return invalid("linear system needs at least one variable");
        }
        if b.len() != m {
            return invalid(format!("{m} constraint rows but {} right-hand sides", b.len()));
        }
        if let Some(i) = a.iter().position(|r| r.len() != n) {
            return invalid(format!("constraint row {i} has the wrong number of columns"));
        }
        if a.iter().flatten().chain(&b).any(|v| !v.is_finite()) {
            return invalid("linear system has non-finite entries");
        }
        Ok(LinearSystem { a, b, nonneg })
    }

    pub fn rows(&self) -> usize {
        self.a.len()
    }

    pub fn cols(&self) -> usize {
        self.a[0].len()
    }

    pub fn matrix(&self) -> &[Vec<T>] {
        &self.a
    }

    pub fn rhs(&self) -> &[T] {
        &self.b
    }

    pub fn nonneg(&self) -> bool {
        self.nonneg
    }

    /// `max_i |(A x - b)_i|`.
    pub fn residual(&self, x: &[T]) -> T {
        self.a
            .iter()
            .zip(&self.b)
            .map(|(row, &bi)| {
                let ax: T = row.iter().zip(x).map(|(&a, &v)| a * v).sum();
                (ax - bi).abs()
            })
            .fold(T::zero(), T::max)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FeasibilityResult<T: Real = f64> {
    pub feasible: bool,
    pub witness: Option<Vec<T>>,
    /// Max-norm residual at the witness (or at the phase-one optimum).
    pub residual: T,
    /// Optimal phase-one objective: the least L1 constraint violation.
    pub infeasibility_margin: T,
}

/// Decides feasibility of `sys` within `tol` (L1 violation of the phase-one
/// optimum). Deterministic for identical input.
pub fn solve_feasibility<T: Real>(sys: &LinearSystem<T>, tol: T) -> Result<FeasibilityResult<T>> {
    if !(tol > T::zero()) {
        return invalid("feasibility tolerance must be positive");
    }
    let m = sys.rows();
    let n_orig = sys.cols();
    // Free variables are split as x = x+ - x-.
    let n = if sys.nonneg { n_orig } else { 2 * n_orig };
    // Columns: variables, then one surplus/deficit pair per row. The pair
    // makes the phase-one optimum the least L1 violation of A x = b.
    let width = n + 2 * m + 1;
    let rhs = width - 1;
    let mut tab = vec![T::zero(); (m + 1) * width];
    let at = |r: usize, c: usize| r * width + c;

    for i in 0..m {
        let flip = sys.b[i] < T::zero();
        let sign = if flip { -T::one() } else { T::one() };
        for j in 0..n_orig {
            let v = sign * sys.a[i][j];
            tab[at(i, j)] = v;
            if !sys.nonneg {
                tab[at(i, n_orig + j)] = -v;
            }
        }
        tab[at(i, n + i)] = T::one();
        tab[at(i, n + m + i)] = -T::one();
        tab[at(i, rhs)] = sign * sys.b[i];
    }
    // Objective row holds reduced costs of min sum(artificials); its rhs
    // entry is minus the current objective value.
    for j in 0..n {
        let s: T = (0..m).map(|i| tab[at(i, j)]).sum();
        tab[at(m, j)] = -s;
    }
    for i in 0..m {
        tab[at(m, n + m + i)] = T::lit(2.0);
    }
    tab[at(m, rhs)] = -(0..m).map(|i| tab[at(i, rhs)]).sum::<T>();

    let mut basis: Vec<usize> = (n..n + m).collect();
    let piv_eps = T::epsilon().sqrt() * T::lit(1e-3);
    let max_iter = 50 * (n + 2 * m) + 1000;
    let mut converged = false;

    for _ in 0..max_iter {
        let Some(enter) = (0..n + 2 * m).find(|&j| tab[at(m, j)] < -piv_eps) else {
            converged = true;
            break;
        };
        let mut leave: Option<(usize, T)> = None;
        for i in 0..m {
            let a = tab[at(i, enter)];
            if a > piv_eps {
                let ratio = tab[at(i, rhs)] / a;
                leave = match leave {
                    None => Some((i, ratio)),
                    Some((li, lr)) => {
                        if ratio < lr || (ratio == lr && basis[i] < basis[li]) {
                            Some((i, ratio))
                        } else {
                            Some((li, lr))
                        }
                    }
                };
            }
        }
        let Some((row, _)) = leave else {
            // Unbounded descent is impossible for a phase-one objective
            // bounded below by zero.
            return Err(Error::NumericFailure(
                "phase-one simplex found an unbounded direction".into(),
            ));
        };
        pivot(&mut tab, width, m + 1, row, enter);
        basis[row] = enter;
    }
    if !converged {
        return Err(Error::NumericFailure(format!(
            "phase-one simplex did not terminate within {max_iter} pivots"
        )));
    }

    let objective = (-tab[at(m, rhs)]).max(T::zero());
    let mut split = vec![T::zero(); n];
    for (i, &bv) in basis.iter().enumerate() {
        if bv < n {
            split[bv] = tab[at(i, rhs)];
        }
    }
    let x: Vec<T> = if sys.nonneg {
        split
    } else {
        (0..n_orig).map(|j| split[j] - split[n_orig + j]).collect()
    };
    let residual = sys.residual(&x);

    if objective <= tol {
        let min_entry = if sys.nonneg {
            x.iter().copied().fold(T::zero(), T::min)
        } else {
            T::zero()
        };
        if residual > tol || min_entry < -tol {
            return Err(Error::NumericFailure(format!(
                "phase-one optimum {objective} but witness residual {residual}"
            )));
        }
        Ok(FeasibilityResult {
            feasible: true,
            witness: Some(x),
            residual,
            infeasibility_margin: objective,
        })
    } else {
        Ok(FeasibilityResult {
            feasible: false,
            witness: None,
            residual,
            infeasibility_margin: objective,
        })
    }
}

fn pivot<T: Real>(tab: &mut [T], width: usize, rows: usize, row: usize, col: usize) {
    let p = tab[row * width + col];
    for c in 0..width {
        tab[row * width + c] = tab[row * width + c] / p;
    }
    tab[row * width + col] = T::one();
    for r in 0..rows {
        if r == row {
            continue;
        }
        let f = tab[r * width + col];
        if f == T::zero() {
            continue;
        }
        for c in 0..width {
            let v = tab[row * width + c];
            tab[r * width + c] = tab[r * width + c] - f * v;
        }
        tab[r * width + col] = T::zero();
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sum_to_one() {
        let sys = LinearSystem::new(vec![vec![1.0f64, 1.0]], vec![1.0], true).unwrap();
        let r = solve_feasibility(&sys, 1e-8).unwrap();
        assert!(r.feasible);
        let w = r.witness.unwrap();
        assert!((w[0] + w[1] - 1.0).abs() < 1e-12);
        assert!(w.iter().all(|&v| v >= 0.0));
    }

    #[test]
    fn negative_sum_is_infeasible() {
        let sys = LinearSystem::new(vec![vec![1.0f64, 1.0]], vec![-1.0], true).unwrap();
        let r = solve_feasibility(&sys, 1e-8).unwrap();
        assert!(!r.feasible);
        assert!(r.witness.is_none());
        assert!((r.infeasibility_margin - 1.0).abs() < 1e-12);
    }

    #[test]
    fn free_variables() {
        let sys = LinearSystem::new(vec![vec![1.0, 1.0]], vec![-1.0], false).unwrap();
        let r = solve_feasibility(&sys, 1e-8).unwrap();
        assert!(r.feasible);
        assert!(r.residual < 1e-12);
    }

    #[test]
    fn inconsistent_equalities() {
        let sys = LinearSystem::new(vec![vec![1.0f64, 0.0], vec![1.0, 0.0]], vec![1.0, 2.0], false)
            .unwrap();
        let r = solve_feasibility(&sys, 1e-8).unwrap();
        assert!(!r.feasible);
        assert!((r.infeasibility_margin - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(LinearSystem::<f64>::new(vec![], vec![], true).is_err());
        assert!(LinearSystem::new(vec![vec![1.0]], vec![1.0, 2.0], true).is_err());
        assert!(LinearSystem::new(vec![vec![f64::INFINITY]], vec![1.0], true).is_err());
        let sys = LinearSystem::new(vec![vec![1.0]], vec![1.0], true).unwrap();
        assert!(solve_feasibility(&sys, 0.0).is_err());
    }

    #[test]
    fn works_in_f32() {
        let sys = LinearSystem::new(vec![vec![1.0f32, 2.0], vec![3.0, 1.0]], vec![3.0, 4.0], true)
            .unwrap();
        let r = solve_feasibility(&sys, 1e-4).unwrap();
        assert!(r.feasible);
    }
}
