//! Entropy, mutual information and divergence on finite alphabets, in bits.
//!
//! `0 log 0 = 0` and `0 log(0/0) = 0` are handled by skipping zero-mass
//! terms; nothing is floored.

use crate::channel::{Channel, Distribution};
use crate::error::{invalid, Result};
use crate::scalar::Real;

pub fn entropy<T: Real>(p: &Distribution<T>) -> T {
    entropy_of(p.probs())
}

pub(crate) fn entropy_of<T: Real>(probs: &[T]) -> T {
    probs
        .iter()
        .filter(|&&x| x > T::zero())
        .map(|&x| -x * x.log2())
        .sum()
}

/// Binary entropy function `h(x)`.
pub fn binary_entropy<T: Real>(x: T) -> T {
    entropy_of(&[x, T::one() - x])
}

/// Conditional entropy `H(W|p) = sum_x p(x) H(W(.|x))`.
pub fn conditional_entropy<T: Real>(p: &Distribution<T>, w: &Channel<T>) -> Result<T> {
    check_input(p, w)?;
    Ok(p.probs()
        .iter()
        .enumerate()
        .filter(|(_, &px)| px > T::zero())
        .map(|(x, &px)| px * entropy_of(w.row(x)))
        .sum())
}

/// `I(p, W)`.
pub fn mutual_information<T: Real>(p: &Distribution<T>, w: &Channel<T>) -> Result<T> {
    check_input(p, w)?;
    Ok(mutual_information_of(p.probs(), w))
}

/// `I(p, W)` as `sum_x p(x) D(W(.|x) || pW)`; `p` must match the input size.
pub(crate) fn mutual_information_of<T: Real>(p: &[T], w: &Channel<T>) -> T {
    let out = w.output_under(p);
    let mut total = T::zero();
    for (x, &px) in p.iter().enumerate() {
        if px <= T::zero() {
            continue;
        }
        let mut d = T::zero();
        for (&wy, &qy) in w.row(x).iter().zip(&out) {
            if wy > T::zero() {
                d = d + wy * (wy / qy).log2();
            }
        }
        total = total + px * d;
    }
    total.max(T::zero())
}

fn check_input<T: Real>(p: &Distribution<T>, w: &Channel<T>) -> Result<()> {
    if p.support_size() != w.input_size() {
        return invalid(format!(
            "input distribution has {} symbols, channel expects {}",
            p.support_size(),
            w.input_size()
        ));
    }
    Ok(())
}

/// `D(p || q)` in bits. Returns `+inf` when `p` is not absolutely continuous
/// with respect to `q`.
pub fn kl_divergence<T: Real>(p: &Distribution<T>, q: &Distribution<T>) -> Result<T> {
    if p.support_size() != q.support_size() {
        return invalid("divergence between distributions of different support sizes");
    }
    Ok(kl_of(p.probs(), q.probs()))
}

pub(crate) fn kl_of<T: Real>(p: &[T], q: &[T]) -> T {
    let mut d = T::zero();
    for (&pi, &qi) in p.iter().zip(q) {
        if pi <= T::zero() {
            continue;
        }
        if qi <= T::zero() {
            return T::infinity();
        }
        d = d + pi * (pi / qi).log2();
    }
    d.max(T::zero())
}

/// Joint distribution on a product alphabet `rows x cols`, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct JointDistribution<T: Real = f64> {
    rows: usize,
    cols: usize,
    dist: Distribution<T>,
}

impl<T: Real> JointDistribution<T> {
    pub fn new(rows: usize, cols: usize, probs: Vec<T>) -> Result<Self> {
        if rows == 0 || cols == 0 || rows * cols != probs.len() {
            return invalid(format!(
                "joint table of {} entries does not factor as {rows} x {cols}",
                probs.len()
            ));
        }
        Ok(JointDistribution {
            rows,
            cols,
            dist: Distribution::new(probs)?,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn as_distribution(&self) -> &Distribution<T> {
        &self.dist
    }

    pub fn row_marginal(&self) -> Distribution<T> {
        let probs = self
            .dist
            .probs()
            .chunks(self.cols)
            .map(|r| r.iter().copied().sum())
            .collect();
        Distribution::new_unchecked(probs)
    }

    pub fn col_marginal(&self) -> Distribution<T> {
        let mut probs = vec![T::zero(); self.cols];
        for r in self.dist.probs().chunks(self.cols) {
            for (m, &v) in probs.iter_mut().zip(r) {
                *m = *m + v;
            }
        }
        Distribution::new_unchecked(probs)
    }

    /// Product of the two marginals, in the same layout.
    pub fn marginal_product(&self) -> Distribution<T> {
        let (r, c) = (self.row_marginal(), self.col_marginal());
        let probs = r
            .probs()
            .iter()
            .flat_map(|&a| c.probs().iter().map(move |&b| a * b))
            .collect();
        Distribution::new_unchecked(probs)
    }
}

/// `I(J; Z)` of a joint distribution indexed by `(j, z)`.
pub fn joint_mutual_information<T: Real>(joint: &JointDistribution<T>) -> T {
    let r = joint.row_marginal();
    let c = joint.col_marginal();
    let mut total = T::zero();
    for (j, row) in joint.dist.probs().chunks(joint.cols).enumerate() {
        for (z, &pjz) in row.iter().enumerate() {
            if pjz > T::zero() {
                total = total + pjz * (pjz / (r.prob(j) * c.prob(z))).log2();
            }
        }
    }
    total.max(T::zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn d(v: &[f64]) -> Distribution {
        Distribution::new(v.to_vec()).unwrap()
    }

    // Reference values below were computed with mpmath at 30 digits.
    #[test]
    fn entropy_examples() {
        assert_eq!(entropy(&Distribution::<f64>::point_mass(3, 1)), 0.0);
        assert_abs_diff_eq!(entropy(&Distribution::<f64>::uniform(4)), 2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(entropy(&d(&[0.11, 0.89])), 0.499915958164528, epsilon = 1e-12);
    }

    #[test]
    fn mutual_information_examples() {
        let p = d(&[0.2, 0.3, 0.5]);
        let id = Channel::identity(3);
        assert_abs_diff_eq!(mutual_information(&p, &id).unwrap(), entropy(&p), epsilon = 1e-14);
        let u = Distribution::uniform(2);
        let bsc0 = Channel::bsc(0.0).unwrap();
        assert_abs_diff_eq!(mutual_information(&u, &bsc0).unwrap(), 1.0, epsilon = 1e-15);
        let bsc = Channel::bsc(0.11).unwrap();
        assert_abs_diff_eq!(
            mutual_information(&u, &bsc).unwrap(),
            1.0 - 0.499915958164528,
            epsilon = 1e-12
        );
        assert!(mutual_information(&p, &bsc).is_err());
    }

    #[test]
    fn mutual_information_matches_entropy_difference() {
        let w = Channel::new(vec![vec![0.6, 0.3, 0.1], vec![0.05, 0.15, 0.8]]).unwrap();
        let p = d(&[0.35, 0.65]);
        let out = w.output_distribution(&p).unwrap();
        let via_h = entropy(&out) - conditional_entropy(&p, &w).unwrap();
        assert_abs_diff_eq!(mutual_information(&p, &w).unwrap(), via_h, epsilon = 1e-14);
    }

    #[test]
    fn kl_examples() {
        let p = d(&[0.3, 0.7]);
        assert_eq!(kl_divergence(&p, &p).unwrap(), 0.0);
        assert_abs_diff_eq!(
            kl_divergence(&d(&[1.0, 0.0]), &Distribution::uniform(2)).unwrap(),
            1.0,
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(
            kl_divergence(&p, &Distribution::uniform(2)).unwrap(),
            0.118709100769307,
            epsilon = 1e-12
        );
        assert!(kl_divergence(&Distribution::uniform(2), &d(&[1.0, 0.0])).unwrap().is_infinite());
        assert!(kl_divergence(&p, &Distribution::uniform(3)).is_err());
    }

    #[test]
    fn joint_mi_examples() {
        let indep = JointDistribution::new(2, 3, vec![0.1, 0.2, 0.2, 0.1, 0.2, 0.2]).unwrap();
        assert_abs_diff_eq!(joint_mutual_information(&indep), 0.0, epsilon = 1e-15);
        let diag = JointDistribution::new(4, 4, {
            let mut v = vec![0.0; 16];
            for k in 0..4 {
                v[k * 4 + k] = 0.25;
            }
            v
        })
        .unwrap();
        assert_abs_diff_eq!(joint_mutual_information(&diag), 2.0, epsilon = 1e-15);
        let j = JointDistribution::new(2, 2, vec![0.4, 0.1, 0.1, 0.4]).unwrap();
        assert_abs_diff_eq!(joint_mutual_information(&j), 0.278071905112638, epsilon = 1e-12);
        let via_kl = kl_divergence(j.as_distribution(), &j.marginal_product()).unwrap();
        assert_abs_diff_eq!(joint_mutual_information(&j), via_kl, epsilon = 1e-12);
        assert!(JointDistribution::new(2, 2, vec![0.5, 0.5]).is_err());
    }
}
