//! Spectra of reversible chains, relaxation times and mixing-time bounds.
//!
//! A reversible pair `(P, π)` is conjugated to the symmetric matrix
//! `A = D_π^{1/2} P D_π^{−1/2}`, which has the same eigenvalues as `P` and is
//! diagonalised here by cyclic Jacobi rotations.

use std::f64::consts::PI;

use crate::chain::{DistributionVector, TransitionMatrix};
use crate::stationary::{check_reversible, DBE_TOL};
use crate::{Error, Result};

/// Jacobi stops once the off-diagonal Frobenius norm falls below this.
pub const JACOBI_TOL: f64 = 1e-12;
pub const JACOBI_MAX_SWEEPS: usize = 100;

/// Eigenvalues (descending) and the quantities derived from them.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralData {
    pub eigenvalues: Vec<f64>,
    /// `max_{j≥2} |λ_j|`.
    pub lambda_star: f64,
    /// Absolute spectral gap `1 − λ*`.
    pub gap: f64,
    /// Relaxation time `1 / gap`.
    pub t_rel: f64,
}

impl SpectralData {
    fn from_sorted(eigenvalues: Vec<f64>) -> Self {
        let lambda_star = eigenvalues[1..].iter().map(|v| v.abs()).fold(0.0, f64::max);
        let gap = 1.0 - lambda_star;
        SpectralData {
            eigenvalues,
            lambda_star,
            gap,
            t_rel: 1.0 / gap,
        }
    }
}

/// Dense symmetric matrix produced by [`symmetrize`].
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricMatrix {
    pub n: usize,
    /// Row-major entries.
    pub data: Vec<f64>,
}

impl SymmetricMatrix {
    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.data[x * self.n + y]
    }

    pub fn max_asymmetry(&self) -> f64 {
        let n = self.n;
        (0..n)
            .flat_map(|x| (0..n).map(move |y| (x, y)))
            .map(|(x, y)| (self.get(x, y) - self.get(y, x)).abs())
            .fold(0.0, f64::max)
    }
}

/// `A(x, y) = √(π(x)/π(y)) P(x, y)`.
pub fn symmetrize(p: &TransitionMatrix, pi: &DistributionVector) -> Result<SymmetricMatrix> {
    let n = p.n();
    if pi.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: pi.len(),
        });
    }
    if let Some(x) = (0..n).find(|&x| !(pi[x] > 0.0)) {
        return Err(Error::NonPositivePi(x));
    }
    let report = check_reversible(p, pi, DBE_TOL)?;
    if !report.reversible {
        let (x, y) = report.worst_pair;
        return Err(Error::NotReversible {
            x,
            y,
            violation: report.max_violation,
        });
    }
    let root: Vec<f64> = pi.as_slice().iter().map(|v| v.sqrt()).collect();
    let mut data = vec![0.0; n * n];
    for x in 0..n {
        for y in 0..n {
            data[x * n + y] = root[x] / root[y] * p.get(x, y);
        }
    }
    Ok(SymmetricMatrix { n, data })
}

/// Eigenvalues of a reversible chain.
pub fn spectrum(p: &TransitionMatrix, pi: &DistributionVector) -> Result<SpectralData> {
    let a = symmetrize(p, pi)?;
    let (values, _) = jacobi_eigen(&a, false)?;
    Ok(SpectralData::from_sorted(values))
}

/// Eigenvalues together with right eigenvectors of `P` (`P v = λ v`), in the
/// same order, each recovered as `D_π^{−1/2} u` from the symmetric problem.
pub fn spectrum_with_vectors(
    p: &TransitionMatrix,
    pi: &DistributionVector,
) -> Result<(SpectralData, Vec<Vec<f64>>)> {
    let a = symmetrize(p, pi)?;
    let (values, vectors) = jacobi_eigen(&a, true)?;
    let n = a.n;
    let right = vectors
        .into_iter()
        .map(|u| (0..n).map(|x| u[x] / pi[x].sqrt()).collect())
        .collect();
    Ok((SpectralData::from_sorted(values), right))
}

/// Cyclic Jacobi on a symmetric matrix. Returns eigenvalues in descending
/// order and, when requested, the matching unit eigenvectors.
pub fn jacobi_eigen(a: &SymmetricMatrix, want_vectors: bool) -> Result<(Vec<f64>, Vec<Vec<f64>>)> {
    let n = a.n;
    let mut m = a.data.clone();
    // work on the exactly symmetric part
    for x in 0..n {
        for y in x + 1..n {
            let avg = 0.5 * (m[x * n + y] + m[y * n + x]);
            m[x * n + y] = avg;
            m[y * n + x] = avg;
        }
    }
    let mut v = if want_vectors {
        crate::linalg::identity(n)
    } else {
        Vec::new()
    };
    let off_norm = |m: &[f64]| -> f64 {
        let mut s = 0.0;
        for x in 0..n {
            for y in 0..n {
                if x != y {
                    s += m[x * n + y] * m[x * n + y];
                }
            }
        }
        s.sqrt()
    };
    let mut converged = false;
    for _ in 0..JACOBI_MAX_SWEEPS {
        if off_norm(&m) < JACOBI_TOL {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = m[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let theta = (m[q * n + q] - m[p * n + p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (akp, akq) = (m[k * n + p], m[k * n + q]);
                    m[k * n + p] = c * akp - s * akq;
                    m[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (m[p * n + k], m[q * n + k]);
                    m[p * n + k] = c * apk - s * aqk;
                    m[q * n + k] = s * apk + c * aqk;
                }
                m[p * n + q] = 0.0;
                m[q * n + p] = 0.0;
                if want_vectors {
                    for k in 0..n {
                        let (vkp, vkq) = (v[k * n + p], v[k * n + q]);
                        v[k * n + p] = c * vkp - s * vkq;
                        v[k * n + q] = s * vkp + c * vkq;
                    }
                }
            }
        }
    }
    if !converged && off_norm(&m) >= JACOBI_TOL {
        return Err(Error::NoConvergence(JACOBI_MAX_SWEEPS));
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[j * n + j].total_cmp(&m[i * n + i]));
    let values = order.iter().map(|&i| m[i * n + i]).collect();
    let vectors = if want_vectors {
        order
            .iter()
            .map(|&j| (0..n).map(|k| v[k * n + j]).collect())
            .collect()
    } else {
        Vec::new()
    };
    Ok((values, vectors))
}

/// Two-sided bounds on the mixing time from the relaxation time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MixingBounds {
    /// `(t_rel − 1) ln(1/(2ε))`.
    pub lower: f64,
    /// `t_rel ln(1/(ε π_min))`.
    pub upper: f64,
}

pub fn mixing_bounds(spec: &SpectralData, pi_min: f64, eps: f64) -> Result<MixingBounds> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "eps must lie in (0, 1), got {eps}"
        )));
    }
    if !(pi_min > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "pi_min must be positive, got {pi_min}"
        )));
    }
    if !(spec.gap > 0.0) {
        return Err(Error::DegenerateGap);
    }
    Ok(MixingBounds {
        lower: (spec.t_rel - 1.0) * (1.0 / (2.0 * eps)).ln(),
        upper: (1.0 / (eps * pi_min)).ln() * spec.t_rel,
    })
}

/// Families with known spectra.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClosedForm {
    /// Simple random walk on the `n`-cycle.
    Cycle(usize),
    /// Lazy simple random walk on `{0,1}^N`.
    LazyHypercube(u32),
}

/// Eigenvalue multiset of a [`ClosedForm`] family, sorted descending.
pub fn closed_form_spectrum(kind: ClosedForm) -> Result<Vec<f64>> {
    let mut values = match kind {
        ClosedForm::Cycle(n) => {
            if n < 3 {
                return Err(Error::SizeTooSmall(format!("cycle needs n >= 3, got {n}")));
            }
            (0..n)
                .map(|j| (2.0 * PI * j as f64 / n as f64).cos())
                .collect::<Vec<_>>()
        }
        ClosedForm::LazyHypercube(dim) => {
            if dim < 1 {
                return Err(Error::SizeTooSmall("hypercube needs dimension >= 1".into()));
            }
            let d = dim as usize;
            let mut out = Vec::with_capacity(1 << d);
            let mut binom = 1u64;
            for k in 0..=d {
                let value = 1.0 - k as f64 / d as f64;
                out.extend(std::iter::repeat_n(value, binom as usize));
                binom = binom * (d - k) as u64 / (k + 1) as u64;
            }
            out
        }
    };
    values.sort_by(|a, b| b.total_cmp(a));
    Ok(values)
}
