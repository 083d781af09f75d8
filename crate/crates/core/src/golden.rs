//! Golden fixture for ℂP¹×ℂP¹: closed-form tensor coefficients compared
//! entrywise against the engine-assembled frame.
//!
//! On the moment square `[0, ½]²` with Hessian `ψ = diag(ψ₁, ψ₂)`,
//! `ψ_j = 1/4μ_j(½−μ_j)`, and `C = [[0, c], [−c, 0]]`, the closed forms are
//! (with `p = ψ₁ψ₂` and coefficients relative to `dθ, dμ`):
//!
//! ```text
//! g  = (4p/(p+c²)) Σ μ_j(½−μ_j)(dθ_j)² + Σ (dμ_j)²/4μ_j(½−μ_j)
//! b  = c dμ₁∧dμ₂ − (c/(p+c²)) dθ₁∧dθ₂
//! Q  = (1/4cμ₂(½−μ₂)) dθ₁∧dμ₂ − (1/4cμ₁(½−μ₁)) dθ₂∧dμ₁
//! b′ = (p/c(p+c²)) dθ₁∧dθ₂ − (p/c) dμ₁∧dμ₂
//! ```
//!
//! where `Q = β₁⁻¹` and `b′ = −½ Q(J₊+J₋)` are the symplectic form and
//! B-field of the second pure-spinor description, defined for `c ≠ 0`.

use serde::{Deserialize, Serialize};

use crate::fixtures::cp1xcp1_square;
use crate::gk::{assemble_frame, gram, AntiSymMatrix};
use crate::num::f64_to_rat;
use crate::potential::SymplecticPotential;
use crate::{MatF, Rat};

#[derive(Debug, thiserror::Error)]
pub enum GoldenError {
    #[error("mu must lie strictly inside (0, 1/2)^2")]
    OutsideSquare,
    #[error("c = 0 makes Q and b' undefined (beta_1 is singular)")]
    DegenerateC,
}

/// Entrywise comparison of one tensor.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TensorComparison {
    pub name: String,
    /// Gram coefficient matrices relative to (∂θ₁, ∂θ₂, ∂μ₁, ∂μ₂).
    pub engine: Vec<Vec<f64>>,
    pub closed_form: Vec<Vec<f64>>,
    pub max_diff: f64,
    pub tol: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GoldenReport {
    pub c: f64,
    pub mu: [f64; 2],
    /// p = 1/16μ₁(½−μ₁)μ₂(½−μ₂).
    pub p_value: f64,
    pub det_phi: f64,
    pub comparisons: Vec<TensorComparison>,
    pub pass: bool,
}

/// Tolerances for the two comparison groups: the g/b pair comes straight
/// from the frame, the Q/b′ pair goes through a matrix inversion.
#[derive(Clone, Copy, Debug)]
pub struct GoldenTolerances {
    pub gb: f64,
    pub q_bprime: f64,
}

impl Default for GoldenTolerances {
    fn default() -> Self {
        GoldenTolerances {
            gb: 1e-10,
            q_bprime: 1e-10,
        }
    }
}

/// Evaluates the closed forms at (c, μ) and compares them entrywise with the
/// engine frame assembled from the square's facet-sum Hessian and C(c).
pub fn golden_cp1xcp1(
    c: f64,
    mu: [f64; 2],
    tol: GoldenTolerances,
) -> Result<GoldenReport, GoldenError> {
    if !(mu[0] > 0.0 && mu[0] < 0.5 && mu[1] > 0.0 && mu[1] < 0.5) {
        return Err(GoldenError::OutsideSquare);
    }
    if c == 0.0 {
        return Err(GoldenError::DegenerateC);
    }
    let square = cp1xcp1_square();
    let tau = SymplecticPotential::guillemin(&square);
    let phi_s = tau.hessian(mu.as_ref()).expect("mu is interior");
    let c_mat = AntiSymMatrix::single_block(2, 0, exact_from_f64(c));
    let frame = assemble_frame(&phi_s, &c_mat, &mu).expect("positive-definite Hessian");

    let psi = [
        1.0 / (4.0 * mu[0] * (0.5 - mu[0])),
        1.0 / (4.0 * mu[1] * (0.5 - mu[1])),
    ];
    let p = psi[0] * psi[1];
    let d = p + c * c;

    // closed-form Gram matrices
    let mut g_closed = MatF::zeros(4, 4);
    g_closed[(0, 0)] = 4.0 * p / d * mu[0] * (0.5 - mu[0]);
    g_closed[(1, 1)] = 4.0 * p / d * mu[1] * (0.5 - mu[1]);
    g_closed[(2, 2)] = psi[0];
    g_closed[(3, 3)] = psi[1];

    let mut b_closed = MatF::zeros(4, 4);
    set_form(&mut b_closed, 0, 1, -c / d);
    set_form(&mut b_closed, 2, 3, c);

    let mut q_closed = MatF::zeros(4, 4);
    set_form(&mut q_closed, 0, 3, psi[1] / c); // (1/4cμ₂(½−μ₂)) dθ₁∧dμ₂
    set_form(&mut q_closed, 1, 2, -psi[0] / c); // −(1/4cμ₁(½−μ₁)) dθ₂∧dμ₁

    let mut bp_closed = MatF::zeros(4, 4);
    set_form(&mut bp_closed, 0, 1, p / (c * d));
    set_form(&mut bp_closed, 2, 3, -p / c);

    // engine side
    let g_engine = frame.g_gram();
    let b_engine = frame.b_gram();
    let q_flat = frame
        .beta1_sharp
        .inverse()
        .ok_or(GoldenError::DegenerateC)?;
    let q_engine = gram(&q_flat);
    let bp_flat = q_flat.mul(&frame.j_plus.add(&frame.j_minus)).scale(&-0.5);
    let bp_engine = gram(&bp_flat);

    let comparisons = vec![
        compare("g", &g_engine, &g_closed, tol.gb),
        compare("b", &b_engine, &b_closed, tol.gb),
        compare("Q", &q_engine, &q_closed, tol.q_bprime),
        compare("b_prime", &bp_engine, &bp_closed, tol.q_bprime),
    ];
    let pass = comparisons.iter().all(|c| c.pass);
    Ok(GoldenReport {
        c,
        mu,
        p_value: p,
        det_phi: frame.phi.det(),
        comparisons,
        pass,
    })
}

fn set_form(m: &mut MatF, i: usize, j: usize, value: f64) {
    m[(i, j)] = value;
    m[(j, i)] = -value;
}

fn compare(name: &str, engine: &MatF, closed: &MatF, tol: f64) -> TensorComparison {
    let max_diff = engine.sub(closed).max_abs();
    let scale = closed.max_abs().max(1.0);
    TensorComparison {
        name: name.to_string(),
        engine: engine.to_rows(),
        closed_form: closed.to_rows(),
        max_diff,
        tol,
        pass: max_diff <= tol * scale,
    }
}

fn exact_from_f64(c: f64) -> Rat {
    f64_to_rat(c)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quarter_point_unit_c() {
        let report = golden_cp1xcp1(1.0, [0.25, 0.25], GoldenTolerances::default()).unwrap();
        assert!(report.pass, "{:#?}", report.comparisons);
        assert!((report.p_value - 16.0).abs() < 1e-10);
        assert!((report.det_phi - 17.0).abs() < 1e-10);
        let g = &report.comparisons[0];
        assert!((g.closed_form[0][0] - 4.0 / 17.0).abs() < 1e-12);
        let b = &report.comparisons[1];
        assert!((b.closed_form[0][1] + 1.0 / 17.0).abs() < 1e-12);
        assert!((b.closed_form[2][3] - 1.0).abs() < 1e-15);
        // Q θ₁μ₂ entry = 1/(4·c·μ₂(1/2−μ₂)) = 4 at this point
        let q = &report.comparisons[2];
        assert!((q.closed_form[0][3] - 4.0).abs() < 1e-12);
    }

    #[test]
    fn random_points_and_scales_agree() {
        for (c, mu) in [(0.5, [0.1, 0.3]), (2.0, [0.45, 0.05]), (-1.5, [0.2, 0.2])] {
            let report = golden_cp1xcp1(c, mu, GoldenTolerances::default()).unwrap();
            assert!(report.pass, "c={c} mu={mu:?}: {:#?}", report.comparisons);
        }
    }

    #[test]
    fn degenerate_inputs_error() {
        assert!(matches!(
            golden_cp1xcp1(0.0, [0.25, 0.25], GoldenTolerances::default()),
            Err(GoldenError::DegenerateC)
        ));
        assert!(matches!(
            golden_cp1xcp1(1.0, [0.5, 0.25], GoldenTolerances::default()),
            Err(GoldenError::OutsideSquare)
        ));
    }
}
