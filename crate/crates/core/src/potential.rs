//! Symplectic potentials on the polytope interior and their exact Hessians.
//!
//! A potential is the canonical facet term
//!
//! ```text
//! τ₀(x) = ½ Σ_j (⟨u_j, x⟩ − λ_j) · ln(⟨u_j, x⟩ − λ_j)
//! ```
//!
//! plus an optional polynomial correction with rational coefficients.  The
//! Hessian of the facet term is the rank-one sum `½ Σ_j u_j u_jᵀ / s_j(x)`
//! with `s_j` the facet slack; together with a polynomial correction this
//! keeps the Hessian an exact rational function of the point, so it can be
//! evaluated either in floating point or in exact arithmetic through the same
//! generic code path.

use num_traits::{Float, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::mat::{min_eigenvalue, Mat};
use crate::num::{format_rat, parse_rat, Scalar};
use crate::polytope::{DelzantPolytope, Facet};
use crate::Rat;

/// One polynomial correction term `coeff · x₁^e₁ ⋯ x_n^e_n`.
#[derive(Clone, Debug, PartialEq)]
pub struct Monomial {
    pub coeff: Rat,
    pub exponents: Vec<u32>,
}

/// Facet-sum potential plus polynomial correction on a fixed facet system.
#[derive(Clone, Debug)]
pub struct SymplecticPotential {
    facets: Vec<Facet>,
    correction: Vec<Monomial>,
    dim: usize,
}

#[derive(Debug, thiserror::Error)]
pub enum PotentialError {
    #[error("point is on or outside the domain boundary (facet {facet})")]
    OutsideDomain { facet: usize },
    #[error("correction monomial {0} has wrong arity")]
    BadMonomial(usize),
    #[error("malformed potential spec: {0}")]
    Malformed(String),
}

impl SymplecticPotential {
    /// The canonical potential of a polytope (zero correction).
    pub fn guillemin(p: &DelzantPolytope) -> Self {
        SymplecticPotential {
            facets: p.facets().to_vec(),
            correction: Vec::new(),
            dim: p.dim(),
        }
    }

    /// Potential over an explicit half-space system, e.g. the orthant
    /// `ν_j ≥ λ_j` used by the ℂᵈ standard data.  No boundedness requirement.
    pub fn guillemin_from_facets(dim: usize, facets: Vec<Facet>) -> Self {
        SymplecticPotential {
            facets,
            correction: Vec::new(),
            dim,
        }
    }

    /// Adds a polynomial correction with rational coefficients.
    pub fn with_correction(mut self, correction: Vec<Monomial>) -> Result<Self, PotentialError> {
        for (i, m) in correction.iter().enumerate() {
            if m.exponents.len() != self.dim {
                return Err(PotentialError::BadMonomial(i));
            }
        }
        self.correction = correction;
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn facets(&self) -> &[Facet] {
        &self.facets
    }

    pub fn correction(&self) -> &[Monomial] {
        &self.correction
    }

    fn slack<T: Scalar>(&self, j: usize, x: &[T]) -> T {
        let f = &self.facets[j];
        let mut acc = -T::from_rat(&f.offset);
        for (u, xi) in f.normal.iter().zip(x) {
            let c = T::from_i64(u.to_i64().expect("desk-scale normal")).unwrap();
            acc += c * xi.clone();
        }
        acc
    }

    fn check_interior<T: Scalar>(&self, x: &[T]) -> Result<(), PotentialError> {
        assert_eq!(x.len(), self.dim, "point has wrong dimension");
        for j in 0..self.facets.len() {
            if self.slack(j, x) <= T::zero() {
                return Err(PotentialError::OutsideDomain { facet: j });
            }
        }
        Ok(())
    }

    /// Potential value `½ Σ s_j ln s_j + correction`.  Floating point only:
    /// the facet term needs a logarithm.
    pub fn eval<T: Scalar + Float>(&self, x: &[T]) -> Result<T, PotentialError> {
        self.check_interior(x)?;
        let half = T::from_f64(0.5).unwrap();
        let mut acc = T::zero();
        for j in 0..self.facets.len() {
            let s = self.slack(j, x);
            acc += half * s * s.ln();
        }
        Ok(acc + self.eval_correction(x))
    }

    fn eval_correction<T: Scalar>(&self, x: &[T]) -> T {
        let mut acc = T::zero();
        for m in &self.correction {
            let mut term = T::from_rat(&m.coeff);
            for (xi, &e) in x.iter().zip(&m.exponents) {
                for _ in 0..e {
                    term *= xi.clone();
                }
            }
            acc += term;
        }
        acc
    }

    /// Gradient `½ Σ u_j (ln s_j + 1) + ∇(correction)`.
    pub fn gradient<T: Scalar + Float>(&self, x: &[T]) -> Result<Vec<T>, PotentialError> {
        self.check_interior(x)?;
        let half = T::from_f64(0.5).unwrap();
        let mut g = vec![T::zero(); self.dim];
        for j in 0..self.facets.len() {
            let s = self.slack(j, x);
            let w = half * (s.ln() + T::one());
            for (gi, u) in g.iter_mut().zip(&self.facets[j].normal) {
                let c = T::from_i64(u.to_i64().unwrap()).unwrap();
                *gi += w * c;
            }
        }
        for m in &self.correction {
            #[allow(clippy::needless_range_loop)]
            for i in 0..self.dim {
                if m.exponents[i] == 0 {
                    continue;
                }
                let mut term = T::from_rat(&m.coeff) * T::from_u32(m.exponents[i]).unwrap();
                for (k, (xi, &e)) in x.iter().zip(&m.exponents).enumerate() {
                    let e = if k == i { e - 1 } else { e };
                    for _ in 0..e {
                        term *= *xi;
                    }
                }
                g[i] += term;
            }
        }
        Ok(g)
    }

    /// Exact Hessian `½ Σ_j u_j u_jᵀ / s_j(x) + Hess(correction)(x)`,
    /// symmetric by construction (entries (i,k) and (k,i) are the same
    /// computed value).  Works for any scalar type, in particular exactly
    /// over the rationals.
    pub fn hessian<T: Scalar>(&self, x: &[T]) -> Result<Mat<T>, PotentialError> {
        self.check_interior(x)?;
        let n = self.dim;
        let half = T::from_rat(&crate::num::rat(1, 2));
        let mut h = Mat::zeros(n, n);
        for j in 0..self.facets.len() {
            let s = self.slack(j, x);
            let w = half.clone() / s;
            let u: Vec<T> = self.facets[j]
                .normal
                .iter()
                .map(|c| T::from_i64(c.to_i64().unwrap()).unwrap())
                .collect();
            for i in 0..n {
                if u[i].is_zero() {
                    continue;
                }
                for k in i..n {
                    if u[k].is_zero() {
                        continue;
                    }
                    let e = w.clone() * u[i].clone() * u[k].clone();
                    h[(i, k)] += e.clone();
                    if k != i {
                        h[(k, i)] += e;
                    }
                }
            }
        }
        for m in &self.correction {
            for i in 0..n {
                for k in i..n {
                    let e = monomial_second_derivative(m, i, k, x);
                    if e.is_zero() {
                        continue;
                    }
                    h[(i, k)] += e.clone();
                    if k != i {
                        h[(k, i)] += e;
                    }
                }
            }
        }
        Ok(h)
    }
}

fn monomial_second_derivative<T: Scalar>(m: &Monomial, i: usize, k: usize, x: &[T]) -> T {
    let e = &m.exponents;
    let factor: i64 = if i == k {
        (e[i] as i64) * (e[i] as i64 - 1)
    } else {
        (e[i] as i64) * (e[k] as i64)
    };
    if factor == 0 {
        return T::zero();
    }
    let mut term = T::from_rat(&m.coeff) * T::from_i64(factor).unwrap();
    for (idx, (xi, &exp)) in x.iter().zip(e).enumerate() {
        let mut exp = exp;
        if idx == i {
            exp -= 1;
        }
        if idx == k {
            exp -= 1;
        }
        for _ in 0..exp {
            term *= xi.clone();
        }
    }
    term
}

// ---------------------------------------------------------------------------
// convexity check

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ConvexityReport {
    /// Minimum Hessian eigenvalue at each sample point.
    pub min_eigenvalues: Vec<f64>,
    pub tol: f64,
    pub pass: bool,
    /// Set when the sample list was empty (vacuous pass).
    pub warning: Option<String>,
}

/// Positive-definiteness of the Hessian over a sample set.  An empty sample
/// list passes vacuously, with a warning.
pub fn check_strict_convexity(
    tau: &SymplecticPotential,
    samples: &[Vec<f64>],
    tol: f64,
) -> Result<ConvexityReport, PotentialError> {
    let mut min_eigenvalues = Vec::with_capacity(samples.len());
    let mut pass = true;
    for x in samples {
        let h = tau.hessian(x)?;
        let lo = min_eigenvalue(&h);
        pass &= lo > tol;
        min_eigenvalues.push(lo);
    }
    let warning = samples
        .is_empty()
        .then(|| "empty sample list: convexity check is vacuous".to_string());
    Ok(ConvexityReport {
        min_eigenvalues,
        tol,
        pass,
        warning,
    })
}

// ---------------------------------------------------------------------------
// CLI-facing spec format

/// Potential spec embedded in CLI configs:
/// `{ "type": "guillemin", "correction": [ { "coeffs": "p/q", "monomial": [e, ...] } ] }`.
#[derive(Debug, Serialize, Deserialize)]
pub struct PotentialDoc {
    #[serde(rename = "type")]
    pub kind: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub correction: Vec<MonomialDoc>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct MonomialDoc {
    pub coeffs: String,
    pub monomial: Vec<u32>,
}

impl PotentialDoc {
    pub fn build(&self, p: &DelzantPolytope) -> Result<SymplecticPotential, PotentialError> {
        if self.kind != "guillemin" {
            return Err(PotentialError::Malformed(format!(
                "unknown potential type {:?}",
                self.kind
            )));
        }
        let correction = self
            .correction
            .iter()
            .map(|m| {
                Ok(Monomial {
                    coeff: parse_rat(&m.coeffs)
                        .map_err(|e| PotentialError::Malformed(e.to_string()))?,
                    exponents: m.monomial.clone(),
                })
            })
            .collect::<Result<Vec<_>, PotentialError>>()?;
        SymplecticPotential::guillemin(p).with_correction(correction)
    }

    pub fn describe(tau: &SymplecticPotential) -> Self {
        PotentialDoc {
            kind: "guillemin".into(),
            correction: tau
                .correction()
                .iter()
                .map(|m| MonomialDoc {
                    coeffs: format_rat(&m.coeff),
                    monomial: m.exponents.clone(),
                })
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::num::rat;
    use crate::MatQ;

    #[test]
    fn square_potential_value_at_center_quarter() {
        let p = fixtures::cp1xcp1_square();
        let tau = SymplecticPotential::guillemin(&p);
        let v = tau.eval(&[0.25f64, 0.25]).unwrap();
        // four slacks of 1/4: 4 * (1/2) * (1/4) ln(1/4) = (1/2) ln(1/4)
        assert!((v - 0.5 * (0.25f64).ln()).abs() < 1e-15);
    }

    #[test]
    fn correction_adds_polynomial_value() {
        let p = fixtures::cp1xcp1_square();
        let tau = SymplecticPotential::guillemin(&p);
        let base = tau.eval(&[0.25f64, 0.25]).unwrap();
        let tau2 = SymplecticPotential::guillemin(&p)
            .with_correction(vec![Monomial {
                coeff: rat(1, 1),
                exponents: vec![2, 0],
            }])
            .unwrap();
        let v = tau2.eval(&[0.25f64, 0.25]).unwrap();
        assert!((v - (base + 1.0 / 16.0)).abs() < 1e-15);
    }

    #[test]
    fn boundary_point_is_domain_error() {
        let p = fixtures::cp1xcp1_square();
        let tau = SymplecticPotential::guillemin(&p);
        assert!(matches!(
            tau.eval(&[0.0f64, 0.25]),
            Err(PotentialError::OutsideDomain { facet: 0 })
        ));
    }

    #[test]
    fn square_hessian_is_diagonal_closed_form() {
        let p = fixtures::cp1xcp1_square();
        let tau = SymplecticPotential::guillemin(&p);
        let mu = [0.3f64, 0.1];
        let h = tau.hessian(&mu).unwrap();
        for j in 0..2 {
            let expect = 1.0 / (4.0 * mu[j] * (0.5 - mu[j]));
            assert!((h[(j, j)] - expect).abs() < 1e-12);
        }
        assert_eq!(h[(0, 1)], 0.0);
        assert_eq!(h[(1, 0)], 0.0);
    }

    #[test]
    fn square_hessian_exact_at_quarter_point() {
        let p = fixtures::cp1xcp1_square();
        let tau = SymplecticPotential::guillemin(&p);
        let h: MatQ = tau.hessian(&[rat(1, 4), rat(1, 4)]).unwrap();
        assert_eq!(h, MatQ::diagonal(&[rat(4, 1), rat(4, 1)]));
    }

    #[test]
    fn hessian_is_bitwise_symmetric() {
        let p = fixtures::cp2_triangle();
        let tau = SymplecticPotential::guillemin(&p)
            .with_correction(vec![Monomial {
                coeff: rat(3, 7),
                exponents: vec![2, 1],
            }])
            .unwrap();
        let h = tau.hessian(&[0.21f64, 0.34]).unwrap();
        for i in 0..2 {
            for k in 0..2 {
                assert_eq!(h[(i, k)].to_bits(), h[(k, i)].to_bits());
            }
        }
    }

    #[test]
    fn convexity_flags_destroyed_potential() {
        let p = fixtures::cp1xcp1_square();
        let good = SymplecticPotential::guillemin(&p);
        let samples = vec![vec![0.25f64, 0.25]];
        assert!(check_strict_convexity(&good, &samples, 0.0).unwrap().pass);

        let bad = SymplecticPotential::guillemin(&p)
            .with_correction(vec![Monomial {
                coeff: rat(-10, 1),
                exponents: vec![2, 0],
            }])
            .unwrap();
        let report = check_strict_convexity(&bad, &samples, 0.0).unwrap();
        assert!(!report.pass);
        // Hessian at (1/4, 1/4) is diag(4-20, 4)
        assert!((report.min_eigenvalues[0] + 16.0).abs() < 1e-9);

        let vacuous = check_strict_convexity(&good, &[], 0.0).unwrap();
        assert!(vacuous.pass && vacuous.warning.is_some());
    }

    #[test]
    fn hessian_is_generic_over_the_scalar() {
        // the same code path serves f32, f64 and exact rationals
        let p = fixtures::cp1xcp1_square();
        let tau = SymplecticPotential::guillemin(&p);
        let h32 = tau.hessian(&[0.25f32, 0.25]).unwrap();
        let h64 = tau.hessian(&[0.25f64, 0.25]).unwrap();
        let hq: MatQ = tau.hessian(&[rat(1, 4), rat(1, 4)]).unwrap();
        assert!((f64::from(h32[(0, 0)]) - 4.0).abs() < 1e-6);
        assert_eq!(h64[(0, 0)], 4.0);
        assert_eq!(hq[(0, 0)], rat(4, 1));
    }

    #[test]
    fn orthant_potential_matches_diagonal_form() {
        use crate::polytope::Facet;
        use num_bigint::BigInt;
        let d = 3;
        let lambda = [rat(0, 1), rat(-1, 2), rat(1, 3)];
        let facets: Vec<Facet> = (0..d)
            .map(|j| {
                let mut u = vec![BigInt::from(0); d];
                u[j] = BigInt::from(1);
                Facet {
                    normal: u,
                    offset: lambda[j].clone(),
                }
            })
            .collect();
        let tau = SymplecticPotential::guillemin_from_facets(d, facets);
        let nu = [0.5f64, 0.25, 0.7];
        let h = tau.hessian(&nu).unwrap();
        for j in 0..d {
            let slack = nu[j] - crate::num::rat_to_f64(&lambda[j]);
            assert!((h[(j, j)] - 1.0 / (2.0 * slack)).abs() < 1e-14);
        }
    }
}
