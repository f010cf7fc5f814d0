//! Gaussian quadrature rules built by the Golub-Welsch algorithm.
//!
//! Nodes are the eigenvalues of the symmetric tridiagonal Jacobi matrix of
//! the orthogonal-polynomial recurrence; weights come from the first
//! components of the eigenvectors. One eigensolver serves every rule:
//! Gauss-Legendre, Gauss-Hermite, Gauss-Jacobi, and rules derived from a
//! discrete measure via Lanczos tridiagonalization.

use std::collections::HashMap;
use std::sync::Mutex;
use std::sync::OnceLock;

/// A quadrature rule: `sum(weights[i] * f(nodes[i]))` approximates the
/// integral of `f` against the rule's weight measure.
#[derive(Debug, Clone, PartialEq)]
pub struct Rule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl Rule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate(&self, mut f: impl FnMut(f64) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }
}

/// Eigenvalues and first eigenvector components of a symmetric tridiagonal
/// matrix, via the implicit QL algorithm with Wilkinson shifts.
///
/// `diag` has length n, `offdiag` length n-1. Returns (eigenvalue, first
/// component of the normalized eigenvector) pairs sorted by eigenvalue.
fn tridiagonal_eigen(diag: &[f64], offdiag: &[f64]) -> Vec<(f64, f64)> {
    let n = diag.len();
    assert_eq!(offdiag.len() + 1, n);
    let mut d = diag.to_vec();
    let mut e = vec![0.0_f64; n];
    e[..n - 1].copy_from_slice(offdiag);
    let mut z = vec![0.0_f64; n];
    z[0] = 1.0;

    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            assert!(iter <= 60, "tridiagonal QL failed to converge");
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c) = (1.0_f64, 1.0_f64);
            let mut p = 0.0_f64;
            let mut underflow = false;
            for i in (l..m).rev() {
                let mut f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                f = z[i + 1];
                z[i + 1] = s * z[i] + c * f;
                z[i] = c * z[i] - s * f;
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }

    let mut out: Vec<(f64, f64)> = d.into_iter().zip(z).collect();
    out.sort_by(|a, b| a.0.total_cmp(&b.0));
    out
}

fn golub_welsch(diag: &[f64], offdiag: &[f64], mu0: f64) -> Rule {
    let eig = tridiagonal_eigen(diag, offdiag);
    let nodes = eig.iter().map(|&(x, _)| x).collect();
    let weights = eig.iter().map(|&(_, q)| mu0 * q * q).collect();
    Rule { nodes, weights }
}

/// Gauss-Legendre on [-1, 1], weight 1.
pub fn gauss_legendre(n: usize) -> Rule {
    assert!(n >= 1);
    let diag = vec![0.0; n];
    let offdiag: Vec<f64> = (1..n)
        .map(|k| {
            let k = k as f64;
            k / (4.0 * k * k - 1.0).sqrt()
        })
        .collect();
    golub_welsch(&diag, &offdiag, 2.0)
}

/// Gauss-Hermite, weight exp(-t^2) on the whole line.
pub fn gauss_hermite(n: usize) -> Rule {
    assert!(n >= 1);
    let diag = vec![0.0; n];
    let offdiag: Vec<f64> = (1..n).map(|k| (k as f64 / 2.0).sqrt()).collect();
    golub_welsch(&diag, &offdiag, std::f64::consts::PI.sqrt())
}

/// Gauss-Jacobi on [0, 1] with weight u^beta, beta > -1.
///
/// Exact for polynomial integrands up to degree 2n-1 against u^beta du.
pub fn gauss_jacobi01(n: usize, beta: f64) -> Rule {
    assert!(n >= 1);
    assert!(beta > -1.0, "jacobi exponent must exceed -1");
    // Jacobi weight (1-x)^0 (1+x)^beta on [-1,1], then map u = (1+x)/2.
    let c = beta;
    let mut diag = Vec::with_capacity(n);
    let mut offdiag = Vec::with_capacity(n.saturating_sub(1));
    diag.push(c / (c + 2.0));
    for k in 1..n {
        let k = k as f64;
        let den = (2.0 * k + c) * (2.0 * k + c + 2.0);
        diag.push(c * c / den);
        let b2 = if k == 1.0 {
            4.0 * (1.0 + c) / ((c + 2.0) * (c + 2.0) * (c + 3.0))
        } else {
            4.0 * k * k * (k + c) * (k + c)
                / ((2.0 * k + c) * (2.0 * k + c) * (2.0 * k + c + 1.0) * (2.0 * k + c - 1.0))
        };
        offdiag.push(b2.sqrt());
    }
    // mu0 = integral of (1+x)^beta over [-1,1] = 2^(beta+1)/(beta+1);
    // mapping u=(1+x)/2 divides weights by 2^(beta+1), so mu0 becomes 1/(beta+1).
    let rule = golub_welsch(&diag, &offdiag, 1.0 / (beta + 1.0));
    Rule {
        nodes: rule.nodes.iter().map(|&x| (1.0 + x) / 2.0).collect(),
        weights: rule.weights,
    }
}

/// Gauss rule of a discrete measure sum_j w_j * delta(x_j), via Lanczos
/// tridiagonalization with full reorthogonalization.
///
/// The returned rule has at most `n` nodes and reproduces the first 2n
/// moments of the atomic measure.
pub fn gauss_from_atoms(xs: &[f64], ws: &[f64], n: usize) -> Rule {
    assert_eq!(xs.len(), ws.len());
    let total: f64 = ws.iter().sum();
    assert!(total > 0.0);
    let m = xs.len();
    let mut v = Vec::with_capacity(n + 1);
    let mut v0: Vec<f64> = ws.iter().map(|&w| (w / total).max(0.0).sqrt()).collect();
    let norm0: f64 = v0.iter().map(|x| x * x).sum::<f64>().sqrt();
    v0.iter_mut().for_each(|x| *x /= norm0);
    v.push(v0);

    let mut alpha = Vec::with_capacity(n);
    let mut beta = Vec::with_capacity(n);
    for k in 0..n {
        let vk = v[k].clone();
        let mut u: Vec<f64> = (0..m).map(|j| xs[j] * vk[j]).collect();
        if k > 0 {
            let bk = beta[k - 1];
            let vp = &v[k - 1];
            for j in 0..m {
                u[j] -= bk * vp[j];
            }
        }
        let a: f64 = (0..m).map(|j| u[j] * vk[j]).sum();
        alpha.push(a);
        for j in 0..m {
            u[j] -= a * vk[j];
        }
        // full reorthogonalization keeps the recurrence stable
        for prev in &v {
            let dot: f64 = (0..m).map(|j| u[j] * prev[j]).sum();
            for j in 0..m {
                u[j] -= dot * prev[j];
            }
        }
        let b: f64 = u.iter().map(|x| x * x).sum::<f64>().sqrt();
        if k + 1 == n || b < 1e-14 {
            if k + 1 < n {
                break;
            }
        }
        if k + 1 < n {
            beta.push(b);
            u.iter_mut().for_each(|x| *x /= b);
            v.push(u);
        }
    }
    golub_welsch(&alpha, &beta[..alpha.len() - 1], total)
}

/// Cached Gauss-Legendre rules keyed by order; these are requested at a
/// handful of fixed orders throughout the engine.
pub fn gauss_legendre_cached(n: usize) -> &'static Rule {
    static CACHE: OnceLock<Mutex<HashMap<usize, &'static Rule>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut map = cache.lock().unwrap();
    map.entry(n)
        .or_insert_with(|| Box::leak(Box::new(gauss_legendre(n))))
}

pub fn gauss_hermite_cached(n: usize) -> &'static Rule {
    static CACHE: OnceLock<Mutex<HashMap<usize, &'static Rule>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut map = cache.lock().unwrap();
    map.entry(n)
        .or_insert_with(|| Box::leak(Box::new(gauss_hermite(n))))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn legendre_moments() {
        for n in [2, 8, 16, 32] {
            let r = gauss_legendre(n);
            assert!(close(r.weights.iter().sum::<f64>(), 2.0, 1e-14));
            assert!(close(r.integrate(|x| x * x), 2.0 / 3.0, 1e-13));
            // exactness at degree 2n-2
            let d = 2 * n - 2;
            let exact = 2.0 / (d as f64 + 1.0);
            assert!(close(r.integrate(|x| x.powi(d as i32)), exact, 1e-12));
        }
    }

    #[test]
    fn hermite_moments() {
        let s = std::f64::consts::PI.sqrt();
        for n in [4, 16, 32, 64] {
            let r = gauss_hermite(n);
            assert!(close(r.weights.iter().sum::<f64>(), s, 1e-12));
            assert!(close(r.integrate(|t| t * t), s / 2.0, 1e-11));
            assert!(close(r.integrate(|t| t.powi(4)), s * 0.75, 1e-10));
        }
    }

    #[test]
    fn jacobi01_moments() {
        for beta in [-0.5, 0.0, 0.7, 3.0, 12.5] {
            for n in [4, 16, 64] {
                let r = gauss_jacobi01(n, beta);
                // integral of u^k * u^beta over [0,1] = 1/(beta+k+1)
                for k in 0..5 {
                    let exact = 1.0 / (beta + k as f64 + 1.0);
                    assert!(
                        close(r.integrate(|u| u.powi(k)), exact, 1e-12),
                        "beta={beta} n={n} k={k}"
                    );
                }
                assert!(r.nodes.iter().all(|&u| u > 0.0 && u < 1.0));
            }
        }
    }

    #[test]
    fn atoms_rule_matches_moments() {
        // discrete measure from a coarse Gaussian discretization
        let m = 4001;
        let xs: Vec<f64> = (0..m).map(|i| -8.0 + 16.0 * i as f64 / (m - 1) as f64).collect();
        let ws: Vec<f64> = xs.iter().map(|&x| (-0.5 * x * x).exp()).collect();
        let r = gauss_from_atoms(&xs, &ws, 24);
        let total: f64 = ws.iter().sum();
        let mean: f64 = xs.iter().zip(&ws).map(|(x, w)| x * w).sum::<f64>() / total;
        let var: f64 = xs.iter().zip(&ws).map(|(x, w)| x * x * w).sum::<f64>() / total;
        assert!(close(r.weights.iter().sum::<f64>(), total, 1e-10 * total));
        assert!(close(r.integrate(|x| x) / total, mean, 1e-10));
        assert!(close(r.integrate(|x| x * x) / total, var, 1e-8));
        assert_eq!(r.len(), 24);
    }

    #[test]
    fn legendre_matches_reference_nodes() {
        // 5-point Gauss-Legendre, classical values
        let r = gauss_legendre(5);
        let nodes = [
            -0.906179845938664,
            -0.538469310105683,
            0.0,
            0.538469310105683,
            0.906179845938664,
        ];
        let weights = [
            0.236926885056189,
            0.478628670499366,
            0.568888888888889,
            0.478628670499366,
            0.236926885056189,
        ];
        for i in 0..5 {
            assert!(close(r.nodes[i], nodes[i], 1e-12));
            assert!(close(r.weights[i], weights[i], 1e-12));
        }
    }
}
