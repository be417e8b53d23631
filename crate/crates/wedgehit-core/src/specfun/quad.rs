//! Gauss–Jacobi quadrature via Golub–Welsch.
//!
//! Nodes are the eigenvalues of the Jacobi matrix built from the
//! three-term recurrence of the (monic) Jacobi polynomials; weights come
//! from the first components of the eigenvectors. The symmetric Beta
//! measure μ^s(du) ∝ (1−u²)^{s−1} on [−1,1] is the normalized special
//! case α = β = s − 1.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use super::gamma::ln_gamma_unchecked;
use crate::error::{Error, Result};

/// Node cap for adaptive refinement.
pub(crate) const MAX_QUAD_NODES: usize = 1024;

/// An n-point rule for the probability measure μ^s on (−1, 1), exact for
/// polynomials of degree ≤ 2n − 1.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    s: f64,
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl QuadratureRule {
    pub fn s(&self) -> f64 {
        self.s
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// ∫ f dμ^s approximated by the rule.
    pub fn integrate(&self, mut f: impl FnMut(f64) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }
}

/// n-point Gauss rule for the symmetric Beta probability measure μ^s.
pub fn gauss_jacobi_rule(s: f64, n: usize) -> Result<QuadratureRule> {
    if !(s > 0.0) {
        return Err(Error::Domain(format!("mu^s requires s > 0, got {s}")));
    }
    if n < 2 {
        return Err(Error::Domain(format!("need n >= 2 nodes, got {n}")));
    }
    let (mut nodes, mut weights) = golub_welsch(s - 1.0, s - 1.0, n, 1.0)?;
    // The measure is symmetric: fold the computed rule onto its mirror so
    // symmetry holds to the last bit.
    let half = n / 2;
    for i in 0..half {
        let j = n - 1 - i;
        let x = 0.5 * (nodes[i] - nodes[j]);
        nodes[i] = x;
        nodes[j] = -x;
        let w = 0.5 * (weights[i] + weights[j]);
        weights[i] = w;
        weights[j] = w;
    }
    if n % 2 == 1 {
        nodes[half] = 0.0;
    }
    Ok(QuadratureRule { s, nodes, weights })
}

/// n-point Gauss rule for the weight (1−x)^α (1+x)^β on [−1, 1], weights
/// carrying the full mass 2^{α+β+1} B(α+1, β+1).
pub fn gauss_jacobi_general(alpha: f64, beta: f64, n: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    if !(alpha > -1.0 && beta > -1.0) {
        return Err(Error::Domain(format!(
            "Jacobi weight requires alpha, beta > -1, got ({alpha}, {beta})"
        )));
    }
    if n < 2 {
        return Err(Error::Domain(format!("need n >= 2 nodes, got {n}")));
    }
    let ln_mass = (alpha + beta + 1.0) * 2f64.ln() + ln_gamma_unchecked(alpha + 1.0)
        + ln_gamma_unchecked(beta + 1.0)
        - ln_gamma_unchecked(alpha + beta + 2.0);
    golub_welsch(alpha, beta, n, ln_mass.exp())
}

/// Jacobi-matrix eigenproblem: returns sorted nodes and weights with
/// total mass `mu0`.
fn golub_welsch(alpha: f64, beta: f64, n: usize, mu0: f64) -> Result<(Vec<f64>, Vec<f64>)> {
    let ab = alpha + beta;
    let mut diag = vec![0.0; n];
    let mut off = vec![0.0; n];
    diag[0] = (beta - alpha) / (ab + 2.0);
    for k in 1..n {
        let kf = k as f64;
        let denom = (2.0 * kf + ab) * (2.0 * kf + ab + 2.0);
        diag[k] = (beta * beta - alpha * alpha) / denom;
        let b = if k == 1 {
            4.0 * (1.0 + alpha) * (1.0 + beta) / ((2.0 + ab) * (2.0 + ab) * (3.0 + ab))
        } else {
            4.0 * kf * (kf + alpha) * (kf + beta) * (kf + ab)
                / ((2.0 * kf + ab) * (2.0 * kf + ab) * (2.0 * kf + ab + 1.0) * (2.0 * kf + ab - 1.0))
        };
        off[k - 1] = b.sqrt();
    }
    let mut first = vec![0.0; n];
    first[0] = 1.0;
    tridiag_ql(&mut diag, &mut off, &mut first)?;

    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_unstable_by(|&a, &b| diag[a].partial_cmp(&diag[b]).unwrap());
    let nodes: Vec<f64> = idx.iter().map(|&i| diag[i]).collect();
    let weights: Vec<f64> = idx.iter().map(|&i| mu0 * first[i] * first[i]).collect();
    Ok((nodes, weights))
}

/// Implicit-shift QL iteration for a symmetric tridiagonal matrix,
/// accumulating only the first row of the eigenvector matrix.
fn tridiag_ql(d: &mut [f64], e: &mut [f64], z: &mut [f64]) -> Result<()> {
    let n = d.len();
    if n == 1 {
        return Ok(());
    }
    e[n - 1] = 0.0;
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m < n - 1 {
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
            if iter > 50 {
                return Err(Error::QuadratureFailure {
                    context: "tridiagonal QL did not converge".into(),
                    achieved: e[l].abs(),
                });
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let mut s = 1.0;
            let mut c = 1.0;
            let mut p = 0.0;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                let f = z[i + 1];
                z[i + 1] = s * z[i] + c * f;
                z[i] = c * z[i] - s * f;
            }
            if r == 0.0 && i > l {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}

/// Evaluates `eval` on rules of doubling node count until two successive
/// results agree to 1e-11 relative (cap 1024 nodes).
pub(crate) fn refine_symmetric(
    s: f64,
    start_n: usize,
    mut eval: impl FnMut(&QuadratureRule) -> f64,
) -> Result<f64> {
    let mut n = start_n.max(4);
    let rule = gauss_jacobi_rule(s, n)?;
    let mut prev = eval(&rule);
    while n < MAX_QUAD_NODES {
        n *= 2;
        let rule = gauss_jacobi_rule(s, n)?;
        let cur = eval(&rule);
        if (cur - prev).abs() <= 1e-11 * cur.abs().max(1e-300) {
            return Ok(cur);
        }
        prev = cur;
    }
    Ok(prev)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn legendre_two_point() {
        // alpha = beta = 0 is Legendre: nodes ±1/√3, weights 1 each.
        let (x, w) = gauss_jacobi_general(0.0, 0.0, 2).unwrap();
        assert!((x[0] + 1.0 / 3f64.sqrt()).abs() < 1e-14);
        assert!((x[1] - 1.0 / 3f64.sqrt()).abs() < 1e-14);
        assert!((w[0] - 1.0).abs() < 1e-14);
        assert!((w[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn probability_measure_moments() {
        let rule = gauss_jacobi_rule(0.75, 16).unwrap();
        let mass = rule.integrate(|_| 1.0);
        assert!((mass - 1.0).abs() < 1e-12);
        let mean = rule.integrate(|u| u);
        assert!(mean.abs() < 1e-14);
        // ∫ u² dμ^s = 1/(2s+1); at s = 1 this is 1/3.
        let rule = gauss_jacobi_rule(1.0, 16).unwrap();
        assert!((rule.integrate(|u| u * u) - 1.0 / 3.0).abs() < 1e-13);
        let rule = gauss_jacobi_rule(0.75, 16).unwrap();
        assert!((rule.integrate(|u| u * u) - 1.0 / 2.5).abs() < 1e-13);
    }

    #[test]
    fn symmetry_of_rule() {
        for n in [7, 16, 33] {
            let rule = gauss_jacobi_rule(0.6, n).unwrap();
            let x = rule.nodes();
            let w = rule.weights();
            for i in 0..n {
                assert_eq!(x[i], -x[n - 1 - i]);
                assert_eq!(w[i], w[n - 1 - i]);
            }
            assert!(x.windows(2).all(|p| p[0] < p[1]));
            assert!(w.iter().all(|&wi| wi > 0.0));
        }
    }

    #[test]
    fn polynomial_exactness() {
        // Degree 2n−1 exactness for the Jacobi weight; compare moments of
        // x^k against the exact Beta-moment recursion.
        let (alpha, beta, n) = (0.3, -0.4, 6usize);
        let (x, w) = gauss_jacobi_general(alpha, beta, n).unwrap();
        // Exact moments by adaptive-free recursion: m_k = ∫ x^k (1-x)^a(1+x)^b dx
        // via substitution x = 2t-1 and the Beta integral in powers of t.
        let mass: f64 = w.iter().sum();
        let mut exact = vec![0.0_f64; 2 * n];
        for (k, slot) in exact.iter_mut().enumerate() {
            // m_k = 2^{a+b+1} Σ_i C(k,i) 2^i (−1)^{k−i} B(b+1+i, a+1) / B(b+1, a+1) * mass
            let mut sum = 0.0;
            let mut binom = 1.0_f64;
            for i in 0..=k {
                let ln_b = ln_gamma_unchecked(beta + 1.0 + i as f64)
                    + ln_gamma_unchecked(alpha + 1.0)
                    - ln_gamma_unchecked(alpha + beta + 2.0 + i as f64);
                let ln_b0 = ln_gamma_unchecked(beta + 1.0) + ln_gamma_unchecked(alpha + 1.0)
                    - ln_gamma_unchecked(alpha + beta + 2.0);
                let sign = if (k - i) % 2 == 0 { 1.0 } else { -1.0 };
                sum += binom * 2f64.powi(i as i32) * sign * (ln_b - ln_b0).exp();
                binom *= (k - i) as f64 / (i + 1) as f64;
            }
            *slot = sum * mass;
        }
        for (k, m_exact) in exact.iter().enumerate() {
            let m_quad: f64 = x.iter().zip(&w).map(|(&xi, &wi)| wi * xi.powi(k as i32)).sum();
            assert!(
                (m_quad - m_exact).abs() <= 1e-11 * m_exact.abs().max(1.0),
                "moment {k}: {m_quad} vs {m_exact}"
            );
        }
    }

    #[test]
    fn refinement_converges() {
        let val = refine_symmetric(0.8, 8, |rule| rule.integrate(|u| (2.0 * u).exp())).unwrap();
        // ∫ e^{2u} dμ^{0.8} = i_{0.3}(2) by the Poisson representation;
        // checked independently in the bessel tests. Here: stability only.
        let val2 = refine_symmetric(0.8, 16, |rule| rule.integrate(|u| (2.0 * u).exp())).unwrap();
        assert!((val - val2).abs() < 1e-11 * val.abs());
    }
}
