//! Poisson-bracket vanishing check for the unitary action on ℂPⁿ.
//!
//! In the affine chart `w = (w₁..w_n)` the reduced holomorphic Poisson
//! structure produced by the generalized Delzant construction from a
//! quadratic upstairs bivector is
//!
//! ```text
//! β = −½ Σ_{j,l ≤ m} c_{lj} w_j w_l ∂w_j ∧ ∂w_l
//! ```
//!
//! supported on the first `m` affine coordinates, while `U(n−m)` rotates the
//! remaining coordinates `w_{m+1}..w_n`.  Its moment map components
//!
//! ```text
//! μ^r_{lj} = (x_j x_l + y_j y_l) / 2(1+|w|²)
//! μ^i_{lj} = (x_j y_l − y_j x_l) / 2(1+|w|²),   l, j > m
//! ```
//!
//! are quotients of β-Casimirs by `1+|w|²`, so all their brackets under the
//! real Poisson structure β₁ = −4·Im(β) vanish identically.  The check
//! differentiates the rational expressions analytically (never by finite
//! differences) and evaluates `β₁(dμ_a, dμ_b)` for every pair; run over
//! rational sample points the brackets vanish exactly.  A fault-injected
//! control replaces one component by the non-Casimir coordinate `x₁`, which
//! produces a visibly nonzero bracket whenever `c ≠ 0`.

use serde::{Deserialize, Serialize};

use crate::mat::Mat;
use crate::num::Scalar;

#[derive(Debug, thiserror::Error)]
pub enum CpnError {
    #[error("coefficient block must be anti-symmetric")]
    NotAntiSymmetric,
    #[error("invalid parameters: poisson block {m} must satisfy 0 < m < n = {n}")]
    InvalidBlock { m: usize, n: usize },
    #[error("sample has wrong length (expected {expected}, got {got})")]
    BadSample { expected: usize, got: usize },
}

/// One moment component of the unitary block action.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MomentComponent {
    /// `μ^r_{lj}`, l ≤ j (1-based coordinate indices).
    Real(usize, usize),
    /// `μ^i_{lj}`, l < j.
    Imag(usize, usize),
}

impl MomentComponent {
    pub fn label(&self) -> String {
        match self {
            MomentComponent::Real(l, j) => format!("mu_r_{l}{j}"),
            MomentComponent::Imag(l, j) => format!("mu_i_{l}{j}"),
        }
    }
}

/// All independent moment components of the `U(n−m)` action on the trailing
/// coordinates.
pub fn moment_components(n: usize, m: usize) -> Vec<MomentComponent> {
    let mut out = Vec::new();
    for l in m + 1..=n {
        for j in l..=n {
            out.push(MomentComponent::Real(l, j));
            if j > l {
                out.push(MomentComponent::Imag(l, j));
            }
        }
    }
    out
}

/// Sharp matrix of `β₁ = −4 Im β` in the real frame
/// `(∂x₁..∂x_n, ∂y₁..∂y_n)` at the point `w = x + iy`:
///
/// ```text
/// β₁ = ½ Σ_{j,l ≤ m} c_{lj} [ I_{jl}(∂x_j∧∂x_l − ∂y_j∧∂y_l)
///                            − R_{jl}(∂x_j∧∂y_l + ∂y_j∧∂x_l) ]
/// ```
///
/// with `R + iI = w_j w_l`.
pub fn beta1_sharp_matrix<T: Scalar>(n: usize, c: &Mat<T>, w: &[T]) -> Mat<T> {
    let m = c.nrows();
    let (x, y) = w.split_at(n);
    let mut s: Mat<T> = Mat::zeros(2 * n, 2 * n);
    let half = T::from_rat(&crate::num::rat(1, 2));
    // sharp(∂a ∧ ∂b) adds +k at (b, a) and −k at (a, b)
    let mut add_wedge = |a: usize, b: usize, k: T| {
        s[(b, a)] += k.clone();
        s[(a, b)] -= k;
    };
    for j in 0..m {
        for l in 0..m {
            if c[(l, j)].is_zero() || j == l {
                continue;
            }
            let coeff = half.clone() * c[(l, j)].clone();
            let re = x[j].clone() * x[l].clone() - y[j].clone() * y[l].clone();
            let im = x[j].clone() * y[l].clone() + x[l].clone() * y[j].clone();
            // I·(∂x_j∧∂x_l − ∂y_j∧∂y_l)
            add_wedge(j, l, coeff.clone() * im.clone());
            add_wedge(n + j, n + l, -(coeff.clone() * im));
            // −R·(∂x_j∧∂y_l + ∂y_j∧∂x_l)
            add_wedge(j, n + l, -(coeff.clone() * re.clone()));
            add_wedge(n + j, l, -(coeff * re));
        }
    }
    s
}

/// Value and exact gradient of a moment component at `w`, by the quotient
/// rule on the closed-form rational expression.
pub fn moment_gradient<T: Scalar>(n: usize, component: MomentComponent, w: &[T]) -> (T, Vec<T>) {
    let (x, y) = w.split_at(n);
    let two = T::from_i64(2).unwrap();
    let mut s = T::one();
    for k in 0..n {
        s += x[k].clone() * x[k].clone() + y[k].clone() * y[k].clone();
    }
    let (h, grad_h) = match component {
        MomentComponent::Real(l1, j1) => {
            let (l, j) = (l1 - 1, j1 - 1);
            let h = x[j].clone() * x[l].clone() + y[j].clone() * y[l].clone();
            let mut g = vec![T::zero(); 2 * n];
            g[j] += x[l].clone();
            g[l] += x[j].clone();
            g[n + j] += y[l].clone();
            g[n + l] += y[j].clone();
            (h, g)
        }
        MomentComponent::Imag(l1, j1) => {
            let (l, j) = (l1 - 1, j1 - 1);
            let h = x[j].clone() * y[l].clone() - y[j].clone() * x[l].clone();
            let mut g = vec![T::zero(); 2 * n];
            g[j] += y[l].clone();
            g[l] -= y[j].clone();
            g[n + j] -= x[l].clone();
            g[n + l] += x[j].clone();
            (h, g)
        }
    };
    // μ = h / (2s): ∇μ = ∇h/(2s) − h ∇s/(2s²), with ∇s = 2(x, y)
    let value = h.clone() / (two.clone() * s.clone());
    let s2 = s.clone() * s.clone();
    let grad = (0..2 * n)
        .map(|a| {
            let coord = if a < n {
                x[a].clone()
            } else {
                y[a - n].clone()
            };
            grad_h[a].clone() / (two.clone() * s.clone()) - h.clone() * coord / s2.clone()
        })
        .collect();
    (value, grad)
}

/// `β₁(df, dg)` from the sharp matrix and two gradients.
pub fn bracket<T: Scalar>(sharp: &Mat<T>, df: &[T], dg: &[T]) -> T {
    let image = sharp.mul_vec(df);
    let mut acc = T::zero();
    for (gi, im) in dg.iter().zip(image) {
        acc += gi.clone() * im;
    }
    acc
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CpnBracketReport {
    pub n: usize,
    /// Size m of the leading Poisson block (the unitary factor is U(n−m)).
    pub poisson_block: usize,
    pub component_labels: Vec<String>,
    pub sample_count: usize,
    /// Largest |β₁(dμ_a, dμ_b)| over all pairs and samples.
    pub max_bracket: f64,
    /// Largest bracket magnitude of the fault-injected non-Casimir control.
    pub fault_max_bracket: Option<f64>,
    pub tol: f64,
    pub pass: bool,
}

/// Evaluates all pairwise moment brackets (and optionally the fault-injected
/// control) over a sample set.  Works for any scalar type; over rational
/// points the moment brackets come out exactly zero.
pub fn strong_hamiltonian_check_cpn<T: Scalar>(
    n: usize,
    c: &Mat<T>,
    samples: &[Vec<T>],
    inject_fault: bool,
    tol: f64,
) -> Result<CpnBracketReport, CpnError> {
    let m = c.nrows();
    if !(c.is_square() && c.is_antisymmetric()) {
        return Err(CpnError::NotAntiSymmetric);
    }
    if m == 0 || m >= n {
        return Err(CpnError::InvalidBlock { m, n });
    }
    let components = moment_components(n, m);
    let mut max_bracket = 0.0f64;
    let mut fault_max: Option<f64> = inject_fault.then_some(0.0);
    for w in samples {
        if w.len() != 2 * n {
            return Err(CpnError::BadSample {
                expected: 2 * n,
                got: w.len(),
            });
        }
        let sharp = beta1_sharp_matrix(n, c, w);
        let grads: Vec<Vec<T>> = components
            .iter()
            .map(|&comp| moment_gradient(n, comp, w).1)
            .collect();
        for a in 0..grads.len() {
            for b in a + 1..grads.len() {
                let br = bracket(&sharp, &grads[a], &grads[b]).approx_f64().abs();
                max_bracket = max_bracket.max(br);
            }
        }
        if let Some(fault) = fault_max.as_mut() {
            // non-Casimir control: the bare coordinate x₁
            let mut fault_grad = vec![T::zero(); 2 * n];
            fault_grad[0] = T::one();
            for g in &grads {
                let br = bracket(&sharp, &fault_grad, g).approx_f64().abs();
                *fault = fault.max(br);
            }
        }
    }
    Ok(CpnBracketReport {
        n,
        poisson_block: m,
        component_labels: components.iter().map(MomentComponent::label).collect(),
        sample_count: samples.len(),
        max_bracket,
        fault_max_bracket: fault_max,
        tol,
        pass: max_bracket <= tol,
    })
}
