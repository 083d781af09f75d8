//! Tensor matrix forms of an anti-diagonal toric GK structure at a point.
//!
//! Working frame and conventions
//! -----------------------------
//! All 2n×2n matrices are expressed in the ordered frame
//! `(∂θ₁..∂θ_n, ∂μ₁..∂μ_n)` of admissible coordinates and its dual, and every
//! matrix is the standard left-action matrix of the map it represents:
//! operators (J₊, J₋, J₀) map tangent columns to tangent columns, a 2-form is
//! kept as the matrix of its flat map `v ↦ B(v,·)` (so its Gram matrix of
//! coefficients is the transpose), and a bivector as the matrix of its sharp
//! map on covector columns.  Compositions then read left to right as usual.
//! References that write tensors as matrices acting on frames from the right
//! list the transposes of these matrices; every block form below has been
//! re-derived once in the left-action convention.
//!
//! With φ = φ_s + C (φ_s the potential Hessian, C constant anti-symmetric):
//!
//! ```text
//! J₊ = [[0, φᵀ], [−(φ⁻¹)ᵀ, 0]]          J₋ = [[0, φ], [−φ⁻¹, 0]]
//! J₀ = [[0, φ_s], [−φ_s⁻¹, 0]]          Ω♭ = [[0, I], [−I, 0]]
//! g♭ = diag((φ⁻¹)_s, φ_s)               b♭ = diag(−(φ⁻¹)_a, −φ_a)
//! b₁♭ = diag(−(φ⁻¹)_a, 0)               β₁♯ = [[0, φ_a φ_s⁻¹], [φ_s⁻¹ φ_a, 0]]
//! ```
//!
//! and the identities tying them together (J² = −I, the g/b relations, the
//! B-transform equations and the β₁ commutation) are verified numerically by
//! [`verify_identities`].

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::mat::{min_eigenvalue, symmetric_eigenvalues, CMat};
use crate::num::{format_rat, parse_rat, rat_to_f64};
use crate::polytope::{DelzantPolytope, FaceData};
use crate::{MatF, MatQ, Rat};

/// Constant anti-symmetric matrix with exact rational entries.
#[derive(Clone, Debug, PartialEq)]
pub struct AntiSymMatrix {
    entries: MatQ,
}

#[derive(Debug, thiserror::Error)]
pub enum GkError {
    #[error("matrix is not anti-symmetric")]
    NotAntiSymmetric,
    #[error("matrix is not symmetric")]
    NotSymmetric,
    #[error("phi_s is not positive-definite (min eigenvalue {0})")]
    NotPositiveDefinite(f64),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("singular matrix in {0}")]
    Singular(&'static str),
    #[error("malformed matrix input: {0}")]
    Malformed(String),
}

impl AntiSymMatrix {
    pub fn new(entries: MatQ) -> Result<Self, GkError> {
        if !entries.is_square() || !entries.is_antisymmetric() {
            return Err(GkError::NotAntiSymmetric);
        }
        Ok(AntiSymMatrix { entries })
    }

    pub fn zero(n: usize) -> Self {
        AntiSymMatrix {
            entries: MatQ::zeros(n, n),
        }
    }

    /// The 2×2 block `[[0, c], [−c, 0]]` padded with zeros, starting at
    /// `offset` on the diagonal.
    pub fn single_block(n: usize, offset: usize, c: Rat) -> Self {
        let mut m = MatQ::zeros(n, n);
        m[(offset, offset + 1)] = c.clone();
        m[(offset + 1, offset)] = -c;
        AntiSymMatrix { entries: m }
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &MatQ {
        &self.entries
    }

    /// Exact rank over the rationals; always even for anti-symmetric input.
    pub fn rank(&self) -> usize {
        let r = self.entries.rank(&Rat::zero());
        debug_assert!(r.is_multiple_of(2), "anti-symmetric rank must be even");
        r
    }

    pub fn to_f64(&self) -> MatF {
        self.entries.map(rat_to_f64)
    }

    /// Parses `[["0","1/2"],["-1/2","0"]]`-style JSON.
    pub fn parse(source: &str) -> Result<Self, GkError> {
        let rows: Vec<Vec<serde_json::Value>> =
            serde_json::from_str(source).map_err(|e| GkError::Malformed(e.to_string()))?;
        let n = rows.len();
        let mut m = MatQ::zeros(n, n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(GkError::Malformed("matrix is not square".into()));
            }
            for (j, v) in row.iter().enumerate() {
                let r = match v {
                    serde_json::Value::String(s) => {
                        parse_rat(s).map_err(|e| GkError::Malformed(e.to_string()))?
                    }
                    serde_json::Value::Number(x) => {
                        if let Some(i64v) = x.as_i64() {
                            Rat::from_integer(i64v.into())
                        } else {
                            crate::num::f64_to_rat(
                                x.as_f64()
                                    .ok_or_else(|| GkError::Malformed("bad number".into()))?,
                            )
                        }
                    }
                    _ => {
                        return Err(GkError::Malformed(
                            "entries must be rational strings".into(),
                        ))
                    }
                };
                m[(i, j)] = r;
            }
        }
        AntiSymMatrix::new(m)
    }

    pub fn to_strings(&self) -> Vec<Vec<String>> {
        self.entries
            .to_rows()
            .iter()
            .map(|row| row.iter().map(format_rat).collect())
            .collect()
    }
}

/// All tensor matrix forms at one interior point, in the frame documented in
/// the module header.  Immutable value object.
///
/// Frames are assembled for the anti-diagonal case only (connection matrix
/// F = 0); the general-F data is covered by [`tameness_check`] and
/// [`general_metric`].
#[derive(Clone, Debug)]
pub struct GkFrame {
    pub n: usize,
    pub point: Vec<f64>,
    pub phi_s: MatF,
    /// The exact constant anti-symmetric matrix the frame was built from.
    pub c_exact: AntiSymMatrix,
    pub c: MatF,
    /// φ = φ_s + C.
    pub phi: MatF,
    pub phi_inv: MatF,
    pub j_plus: MatF,
    pub j_minus: MatF,
    pub j_zero: MatF,
    /// Flat map of the symplectic form Ω = Σ dμ_j ∧ dθ_j.
    pub omega_flat: MatF,
    /// Flat map of the metric (equals its Gram matrix).
    pub g_flat: MatF,
    pub b_flat: MatF,
    pub b1_flat: MatF,
    pub beta1_sharp: MatF,
    /// Sharp map of the holomorphic Poisson bivector β = −¼(J₀β₁ + iβ₁).
    pub beta_sharp: CMat,
}

/// Gram matrix of coefficients `B(e_i, e_j)` of a form stored as a flat map.
pub fn gram(flat: &MatF) -> MatF {
    flat.transpose()
}

/// Assembles every tensor matrix form from a positive-definite symmetric
/// `phi_s` and an anti-symmetric constant `C` (the anti-diagonal case,
/// connection matrix F = 0).
pub fn assemble_frame(phi_s: &MatF, c: &AntiSymMatrix, point: &[f64]) -> Result<GkFrame, GkError> {
    let n = phi_s.nrows();
    if c.dim() != n {
        return Err(GkError::DimensionMismatch(format!(
            "phi_s is {n}x{n} but C is {}x{}",
            c.dim(),
            c.dim()
        )));
    }
    if !phi_s.is_symmetric() {
        return Err(GkError::NotSymmetric);
    }
    let min_eig = min_eigenvalue(phi_s);
    if min_eig <= 0.0 {
        return Err(GkError::NotPositiveDefinite(min_eig));
    }
    let c_f = c.to_f64();
    let phi = phi_s.add(&c_f);
    // det φ ≥ det φ_s > 0, so this inversion cannot fail
    let phi_inv = phi.inverse().ok_or(GkError::Singular("phi"))?;
    let phi_s_inv = phi_s.inverse().ok_or(GkError::Singular("phi_s"))?;
    let phi_inv_s = phi_inv.sym_part();
    // (φ⁻¹)_a = −φ⁻¹ C (φ⁻¹)ᵀ: equal to the anti-symmetric part of φ⁻¹ but
    // exactly zero when C = 0, so Kähler degenerations have b ≡ 0 bitwise
    let phi_inv_a = phi_inv
        .mul(&c_f)
        .mul(&phi_inv.transpose())
        .neg()
        .antisym_part();
    let zero = MatF::zeros(n, n);
    let identity = MatF::identity(n);

    let j_plus = MatF::block2(&zero, &phi.transpose(), &phi_inv.transpose().neg(), &zero);
    let j_minus = MatF::block2(&zero, &phi, &phi_inv.neg(), &zero);
    let j_zero = MatF::block2(&zero, phi_s, &phi_s_inv.neg(), &zero);
    let omega_flat = MatF::block2(&zero, &identity, &identity.neg(), &zero);
    let g_flat = MatF::block2(&phi_inv_s, &zero, &zero, phi_s);
    let b_flat = MatF::block2(&phi_inv_a.neg(), &zero, &zero, &c_f.neg());
    let b1_flat = MatF::block2(&phi_inv_a.neg(), &zero, &zero, &zero);
    let beta1_sharp = MatF::block2(&zero, &c_f.mul(&phi_s_inv), &phi_s_inv.mul(&c_f), &zero);
    let beta_sharp = CMat::new(
        j_zero.mul(&beta1_sharp).scale(&-0.25),
        beta1_sharp.scale(&-0.25),
    );

    Ok(GkFrame {
        n,
        point: point.to_vec(),
        phi_s: phi_s.clone(),
        c_exact: c.clone(),
        c: c_f,
        phi,
        phi_inv,
        j_plus,
        j_minus,
        j_zero,
        omega_flat,
        g_flat,
        b_flat,
        b1_flat,
        beta1_sharp,
        beta_sharp,
    })
}

impl GkFrame {
    /// Gram matrix of the metric.
    pub fn g_gram(&self) -> MatF {
        gram(&self.g_flat)
    }

    /// Gram matrix of b: `diag((φ⁻¹)_a, φ_a)` in coefficient form.
    pub fn b_gram(&self) -> MatF {
        gram(&self.b_flat)
    }

    pub fn b1_gram(&self) -> MatF {
        gram(&self.b1_flat)
    }

    /// Bitwise equality of all assembled matrices (used by the reduction
    /// fixtures, where equal inputs must give identical frames).
    pub fn bitwise_eq(&self, other: &GkFrame) -> bool {
        fn eq(a: &MatF, b: &MatF) -> bool {
            a.nrows() == b.nrows()
                && a.ncols() == b.ncols()
                && (0..a.nrows())
                    .all(|i| (0..a.ncols()).all(|j| a[(i, j)].to_bits() == b[(i, j)].to_bits()))
        }
        self.n == other.n
            && eq(&self.phi_s, &other.phi_s)
            && eq(&self.c, &other.c)
            && eq(&self.phi, &other.phi)
            && eq(&self.j_plus, &other.j_plus)
            && eq(&self.j_minus, &other.j_minus)
            && eq(&self.j_zero, &other.j_zero)
            && eq(&self.g_flat, &other.g_flat)
            && eq(&self.b_flat, &other.b_flat)
            && eq(&self.b1_flat, &other.b1_flat)
            && eq(&self.beta1_sharp, &other.beta1_sharp)
            && eq(&self.beta_sharp.re, &other.beta_sharp.re)
            && eq(&self.beta_sharp.im, &other.beta_sharp.im)
    }
}

// ---------------------------------------------------------------------------
// identity verification

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct IdentityCheck {
    pub name: String,
    /// Largest absolute entry of the residual.
    pub residual: f64,
    /// Residual allowance after scaling by the operand magnitude.
    pub allowed: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct IdentityReport {
    pub checks: Vec<IdentityCheck>,
    pub pass: bool,
}

impl IdentityReport {
    pub fn failing(&self) -> Vec<&str> {
        self.checks
            .iter()
            .filter(|c| !c.pass)
            .map(|c| c.name.as_str())
            .collect()
    }
}

/// Verifies the algebraic identities of the assembled frame, each to
/// absolute tolerance `tol` scaled by the magnitude of the operands:
/// J₊² = J₋² = J₀² = −I, the metric and b relations
/// g = −½Ω(J₊+J₋), b = −½Ω(J₊−J₋), the symplectic adjoint
/// J₋ = −Ω⁻¹J₊ᵀΩ, the commutation β₁J₀ᵀ = J₀β₁, and the two B-transform
/// component equations
/// −½(J₊+J₋) = −J₀ + β₁b₁  and  −½(ω₊−ω₋) = b₁J₀ − b₁β₁b₁ + J₀ᵀb₁.
pub fn verify_identities(frame: &GkFrame, tol: f64) -> IdentityReport {
    let n2 = 2 * frame.n;
    let id = MatF::identity(n2);
    let mut checks = Vec::new();
    let mut push = |name: &str, residual: &MatF, scale: f64| {
        let r = residual.max_abs();
        let allowed = tol * scale.max(1.0);
        checks.push(IdentityCheck {
            name: name.to_string(),
            residual: r,
            allowed,
            pass: r <= allowed,
        });
    };

    let jp = &frame.j_plus;
    let jm = &frame.j_minus;
    let j0 = &frame.j_zero;
    let om = &frame.omega_flat;

    push("J_plus^2 = -I", &jp.mul(jp).add(&id), jp.max_abs().powi(2));
    push("J_minus^2 = -I", &jm.mul(jm).add(&id), jm.max_abs().powi(2));
    push("J_zero^2 = -I", &j0.mul(j0).add(&id), j0.max_abs().powi(2));

    let j_sum = jp.add(jm);
    let j_diff = jp.sub(jm);
    push(
        "g = -1/2 Omega (J_plus + J_minus)",
        &frame.g_flat.sub(&om.mul(&j_sum).scale(&-0.5)),
        frame.g_flat.max_abs(),
    );
    push(
        "b = -1/2 Omega (J_plus - J_minus)",
        &frame.b_flat.sub(&om.mul(&j_diff).scale(&-0.5)),
        frame.b_flat.max_abs().max(1.0),
    );

    let om_inv = om.inverse().expect("Omega is invertible");
    push(
        "J_minus = -Omega^-1 J_plus^T Omega",
        &jm.sub(&om_inv.mul(&jp.transpose()).mul(om).neg()),
        jm.max_abs(),
    );

    push(
        "beta1 J_zero^T = J_zero beta1",
        &frame
            .beta1_sharp
            .mul(&j0.transpose())
            .sub(&j0.mul(&frame.beta1_sharp)),
        frame.beta1_sharp.max_abs() * j0.max_abs(),
    );

    // B-transform component equations
    push(
        "-1/2 (J_plus + J_minus) = -J_zero + beta1 b1",
        &j_sum
            .scale(&-0.5)
            .sub(&j0.neg().add(&frame.beta1_sharp.mul(&frame.b1_flat))),
        j_sum.max_abs(),
    );
    // ω₊ − ω₋ = g(J₊ − J₋) with g eliminated through g = −½Ω(J₊+J₋), so a
    // corrupted stored metric is flagged by its own identity only
    let omega_diff = om.mul(&j_sum).scale(&-0.5).mul(&j_diff);
    let rhs = frame
        .b1_flat
        .mul(j0)
        .sub(&frame.b1_flat.mul(&frame.beta1_sharp).mul(&frame.b1_flat))
        .add(&j0.transpose().mul(&frame.b1_flat));
    push(
        "-1/2 (omega_plus - omega_minus) = b1 J_zero - b1 beta1 b1 + J_zero^T b1",
        &omega_diff.scale(&-0.5).sub(&rhs),
        omega_diff.max_abs().max(1.0),
    );

    let pass = checks.iter().all(|c| c.pass);
    IdentityReport { checks, pass }
}

// ---------------------------------------------------------------------------
// tameness

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TamenessResult {
    pub tame: bool,
    /// Minimum eigenvalue of φ_s.
    pub min_eig_phi_s: f64,
    /// Minimum eigenvalue of φ_s + ¼ F φ_s⁻¹ F.
    pub min_eig_combined: f64,
}

/// Positive-definiteness test for the general-connection case: the pair
/// (φ_s, F) is tame iff φ_s ≻ 0 and φ_s + ¼ F φ_s⁻¹ F ≻ 0.
pub fn tameness_check(phi_s: &MatF, f: &MatF) -> Result<TamenessResult, GkError> {
    if !phi_s.is_symmetric() {
        return Err(GkError::NotSymmetric);
    }
    if !f.is_antisymmetric() {
        return Err(GkError::NotAntiSymmetric);
    }
    let min_eig_phi_s = min_eigenvalue(phi_s);
    if min_eig_phi_s <= 0.0 {
        return Ok(TamenessResult {
            tame: false,
            min_eig_phi_s,
            min_eig_combined: f64::NAN,
        });
    }
    let phi_s_inv = phi_s.inverse().ok_or(GkError::Singular("phi_s"))?;
    let combined = phi_s.add(&f.mul(&phi_s_inv).mul(f).scale(&0.25));
    let min_eig_combined = min_eigenvalue(&combined.sym_part());
    Ok(TamenessResult {
        tame: min_eig_combined > 0.0,
        min_eig_phi_s,
        min_eig_combined,
    })
}

/// Metric block form of the general-connection case (constant anti-symmetric
/// connection matrix F, not necessarily zero):
///
/// ```text
/// g = [[(φ⁻¹)_s, φ⁻¹F/2], [−F(φ⁻¹)ᵀ/2, φ_s]],   φ = φ_s + C.
/// ```
///
/// Positive-definiteness of this matrix is equivalent to the tameness test:
/// φ_s ≻ 0 and φ_s + ¼Fφ_s⁻¹F ≻ 0.  Full frame assembly is only provided
/// for F = 0.
pub fn general_metric(phi_s: &MatF, c: &AntiSymMatrix, f: &MatF) -> Result<MatF, GkError> {
    let n = phi_s.nrows();
    if !phi_s.is_symmetric() {
        return Err(GkError::NotSymmetric);
    }
    if !f.is_antisymmetric() || f.nrows() != n || c.dim() != n {
        return Err(GkError::DimensionMismatch(
            "F/C must be anti-symmetric n×n".into(),
        ));
    }
    let phi = phi_s.add(&c.to_f64());
    let phi_inv = phi.inverse().ok_or(GkError::Singular("phi"))?;
    Ok(MatF::block2(
        &phi_inv.sym_part(),
        &phi_inv.mul(f).scale(&0.5),
        &f.mul(&phi_inv.transpose()).scale(&-0.5),
        phi_s,
    ))
}

// ---------------------------------------------------------------------------
// type computations

/// Type of the structure over the polytope interior: `n − rank(C)`.
pub fn interior_type(c: &AntiSymMatrix) -> usize {
    c.dim() - c.rank()
}

/// Types over a face: restrict the bivector to the face subspace `V_F`
/// through the exact basis `B` and take `r_F = rank(Bᵀ C B)`.  Returns
/// `(n − r_F, n − k − r_F)`: the ambient type along the face and the type
/// inside the toric submanifold over its closure.
pub fn face_type(p: &DelzantPolytope, face: &FaceData, c: &AntiSymMatrix) -> (usize, usize) {
    let n = p.dim();
    assert_eq!(c.dim(), n, "C must match the polytope dimension");
    let b = &face.subspace_basis;
    let c_f = b.transpose().mul(c.entries()).mul(b);
    let r_f = c_f.rank(&Rat::zero());
    (n - r_f, n - face.codim - r_f)
}

// ---------------------------------------------------------------------------
// holomorphic Poisson data

#[derive(Clone, Debug)]
pub struct HolomorphicPoisson {
    /// Constant coefficient matrix C/8 attached to the holomorphic frame
    /// `(∂θ_j − i ∂u_j)`, exact.
    pub coefficients: MatQ,
    /// Sharp matrix of β in the real (θ, μ) frame.
    pub sharp: CMat,
    /// Largest deviation between the two representations of β after
    /// converting the coefficient form to the real frame.
    pub frame_residual: f64,
}

/// Extracts the holomorphic Poisson data of a frame.  The bivector is
/// β = −¼(J₀β₁ + iβ₁); expanded over the holomorphic frame Z_j = ∂θ_j − i∂u_j
/// its constant coefficient matrix is C/8.  Both representations are
/// computed and compared: with P = [I; iφ_s⁻¹] the mapping form of the
/// coefficient expansion is −¼·P C Pᵀ, which must match the sharp matrix.
pub fn holomorphic_poisson(frame: &GkFrame) -> HolomorphicPoisson {
    let c = &frame.c_exact;
    let eighth = Rat::new(1.into(), 8.into());
    let coefficients = c.entries().scale(&eighth);
    let n = frame.n;
    let phi_s_inv = frame.phi_s.inverse().expect("phi_s positive-definite");
    // P = [I; i phi_s^-1], sharp(β) = -1/4 · P C Pᵀ
    let c_f = c.to_f64();
    let top = MatF::identity(n);
    let p_re = stack_vertical(&top, &MatF::zeros(n, n));
    let p_im = stack_vertical(&MatF::zeros(n, n), &phi_s_inv);
    let p = CMat::new(p_re, p_im);
    let predicted = p
        .mul(&CMat::from_real(c_f))
        .mul(&p.transpose())
        .scale(-0.25);
    let frame_residual = predicted.sub(&frame.beta_sharp).max_abs();
    HolomorphicPoisson {
        coefficients,
        sharp: frame.beta_sharp.clone(),
        frame_residual,
    }
}

fn stack_vertical(a: &MatF, b: &MatF) -> MatF {
    assert_eq!(a.ncols(), b.ncols());
    let n = a.ncols();
    MatF::from_fn(a.nrows() + b.nrows(), n, |i, j| {
        if i < a.nrows() {
            a[(i, j)]
        } else {
            b[(i - a.nrows(), j)]
        }
    })
}

// ---------------------------------------------------------------------------
// matrix facts

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MatrixFactsReport {
    pub checks: Vec<IdentityCheck>,
    pub pass: bool,
}

/// Verifies the symmetric/anti-symmetric part identities of an invertible
/// matrix A with inverse B:
///
/// ```text
/// I:   A_s B_s + A_a B_a = I,  A_s B_a + A_a B_s = 0
/// II:  A_s invertible ⇔ B_s invertible (checked on the instance)
/// III: A B_s Aᵀ = A_s,  A B_a Aᵀ = −A_a,  Bᵀ B_s⁻¹ B = A_s⁻¹
/// ```
pub fn matrix_facts_suite(a: &MatF, tol: f64) -> Result<MatrixFactsReport, GkError> {
    let b = a.inverse().ok_or(GkError::Singular("A"))?;
    let n = a.nrows();
    let id = MatF::identity(n);
    let a_s = a.sym_part();
    let a_a = a.antisym_part();
    let b_s = b.sym_part();
    let b_a = b.antisym_part();
    let scale = a.max_abs().max(b.max_abs()).max(1.0);
    let mut checks = vec![
        residual_check(
            "A_s B_s + A_a B_a = I",
            &a_s.mul(&b_s).add(&a_a.mul(&b_a)).sub(&id),
            scale * scale,
            tol,
        ),
        residual_check(
            "A_s B_a + A_a B_s = 0",
            &a_s.mul(&b_a).add(&a_a.mul(&b_s)),
            scale * scale,
            tol,
        ),
        residual_check(
            "A B_s A^T = A_s",
            &a.mul(&b_s).mul(&a.transpose()).sub(&a_s),
            scale.powi(3),
            tol,
        ),
        residual_check(
            "A B_a A^T = -A_a",
            &a.mul(&b_a).mul(&a.transpose()).add(&a_a),
            scale.powi(3),
            tol,
        ),
    ];

    // Fact II and the inverse identity only make sense when A_s is
    // numerically invertible: the inverse exists and is of sane magnitude
    // relative to the input.
    let numerically_invertible = |m: &MatF| -> Option<MatF> {
        let inv = m.inverse()?;
        (m.max_abs() * inv.max_abs() <= 1e10).then_some(inv)
    };
    let a_s_inv = numerically_invertible(&a_s);
    let b_s_inv = numerically_invertible(&b_s);
    let fact_two = a_s_inv.is_some() == b_s_inv.is_some();
    checks.push(IdentityCheck {
        name: "A_s invertible iff B_s invertible".into(),
        residual: if fact_two { 0.0 } else { 1.0 },
        allowed: 0.5,
        pass: fact_two,
    });
    if let (Some(a_s_inv), Some(b_s_inv)) = (a_s_inv, b_s_inv) {
        let lhs = b.transpose().mul(&b_s_inv).mul(&b);
        let rhs = a_s_inv;
        // the inversion of B_s amplifies rounding linearly in its conditioning
        let kappa = (b_s.max_abs() * b_s_inv.max_abs()).max(1.0);
        checks.push(residual_check(
            "B^T B_s^-1 B = A_s^-1",
            &lhs.sub(&rhs),
            lhs.max_abs().max(rhs.max_abs()) * kappa,
            tol,
        ));
    }

    let pass = checks.iter().all(|c| c.pass);
    Ok(MatrixFactsReport { checks, pass })
}

fn residual_check(name: &str, residual: &MatF, scale: f64, tol: f64) -> IdentityCheck {
    let r = residual.max_abs();
    let allowed = tol * scale.max(1.0);
    IdentityCheck {
        name: name.to_string(),
        residual: r,
        allowed,
        pass: r <= allowed,
    }
}

/// Positive-definiteness helper shared by callers (min eigenvalue > 0).
pub fn is_positive_definite(m: &MatF) -> bool {
    m.is_symmetric() && symmetric_eigenvalues(m)[0] > 0.0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::rat;

    fn c_block(c: i64, d: i64) -> AntiSymMatrix {
        AntiSymMatrix::single_block(2, 0, rat(c, d))
    }

    #[test]
    fn antisym_constructor_rejects_symmetric() {
        let m = MatQ::identity(2);
        assert!(AntiSymMatrix::new(m).is_err());
    }

    #[test]
    fn frame_matches_cp1xcp1_spot_values() {
        // φ_s = diag(4,4), c = 1: the (1/4, 1/4) point of the square
        let phi_s = MatF::diagonal(&[4.0, 4.0]);
        let c = c_block(1, 1);
        let frame = assemble_frame(&phi_s, &c, &[0.25, 0.25]).unwrap();
        assert_eq!(frame.phi[(0, 1)], 1.0);
        assert_eq!(frame.phi[(1, 0)], -1.0);
        assert!((frame.phi.det() - 17.0).abs() < 1e-12);
        // g θθ-block = (4/17) I
        let g = frame.g_gram();
        assert!((g[(0, 0)] - 4.0 / 17.0).abs() < 1e-12);
        assert!((g[(1, 1)] - 4.0 / 17.0).abs() < 1e-12);
        assert!(g[(0, 1)].abs() < 1e-15);
        // b θθ entry = -c/(p + c^2) = -1/17, b μμ entry = c
        let b = frame.b_gram();
        assert!((b[(0, 1)] + 1.0 / 17.0).abs() < 1e-12);
        assert!((b[(2, 3)] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn kaehler_degeneration_at_zero_c() {
        let phi_s = MatF::from_rows(vec![vec![3.0, 1.0], vec![1.0, 2.0]]);
        let c = AntiSymMatrix::zero(2);
        let frame = assemble_frame(&phi_s, &c, &[0.1, 0.1]).unwrap();
        assert_eq!(frame.b_flat.max_abs(), 0.0);
        assert_eq!(frame.beta1_sharp.max_abs(), 0.0);
        assert_eq!(frame.j_plus, frame.j_minus);
        assert_eq!(frame.j_plus, frame.j_zero);
    }

    #[test]
    fn identities_pass_on_cp1xcp1_frame() {
        let phi_s = MatF::diagonal(&[4.0, 4.0]);
        let frame = assemble_frame(&phi_s, &c_block(1, 1), &[0.25, 0.25]).unwrap();
        let report = verify_identities(&frame, 1e-10);
        assert!(report.pass, "failing: {:?}", report.failing());
    }

    #[test]
    fn corrupted_metric_flags_only_metric_identity() {
        let phi_s = MatF::diagonal(&[4.0, 4.0]);
        let mut frame = assemble_frame(&phi_s, &c_block(1, 1), &[0.25, 0.25]).unwrap();
        frame.g_flat[(0, 0)] += 1e-3;
        let report = verify_identities(&frame, 1e-10);
        assert!(!report.pass);
        assert_eq!(report.failing(), vec!["g = -1/2 Omega (J_plus + J_minus)"]);
    }

    #[test]
    fn rejects_non_positive_definite() {
        let phi_s = MatF::diagonal(&[1.0, -1.0]);
        assert!(matches!(
            assemble_frame(&phi_s, &AntiSymMatrix::zero(2), &[0.0, 0.0]),
            Err(GkError::NotPositiveDefinite(_))
        ));
    }

    #[test]
    fn tameness_examples() {
        // F = 0
        let r = tameness_check(&MatF::diagonal(&[4.0, 4.0]), &MatF::zeros(2, 2)).unwrap();
        assert!(r.tame && (r.min_eig_phi_s - 4.0).abs() < 1e-12);
        // strong F breaks tameness: diag(1 - 9/4)
        let f3 = MatF::from_rows(vec![vec![0.0, 3.0], vec![-3.0, 0.0]]);
        let r = tameness_check(&MatF::identity(2), &f3).unwrap();
        assert!(!r.tame);
        assert!((r.min_eig_combined + 1.25).abs() < 1e-12);
        // weak F keeps it: diag(3/4)
        let f1 = MatF::from_rows(vec![vec![0.0, 1.0], vec![-1.0, 0.0]]);
        let r = tameness_check(&MatF::identity(2), &f1).unwrap();
        assert!(r.tame && (r.min_eig_combined - 0.75).abs() < 1e-12);
    }

    #[test]
    fn general_metric_positive_definite_iff_tame() {
        use crate::mat::min_eigenvalue;
        use crate::rng::SplitMix64;
        use crate::testkit::{random_antisym_rational, random_spd};
        let mut rng = SplitMix64::new(404);
        let mut seen_tame = false;
        let mut seen_untame = false;
        for _ in 0..60 {
            for n in 2..=3 {
                let phi_s = random_spd(n, 1e2, &mut rng);
                let c = random_antisym_rational(n, &mut rng);
                let f = random_antisym_rational(n, &mut rng)
                    .to_f64()
                    .scale(&rng.range_f64(0.0, 3.0));
                let tame = tameness_check(&phi_s, &f).unwrap();
                let g = general_metric(&phi_s, &c, &f).unwrap();
                let spd = min_eigenvalue(&g.sym_part()) > 0.0;
                assert_eq!(spd, tame.tame, "n={n}, F={f:?}");
                seen_tame |= tame.tame;
                seen_untame |= !tame.tame;
            }
        }
        assert!(seen_tame && seen_untame, "both branches must be exercised");
    }

    #[test]
    fn interior_type_examples() {
        assert_eq!(interior_type(&c_block(1, 1)), 0);
        assert_eq!(interior_type(&AntiSymMatrix::zero(3)), 3);
        assert_eq!(
            interior_type(&AntiSymMatrix::single_block(4, 0, rat(2, 1))),
            2
        );
    }

    #[test]
    fn face_types_on_square() {
        let p = crate::fixtures::cp1xcp1_square();
        let faces = crate::polytope::enumerate_faces(&p).unwrap();
        let c = c_block(1, 1);
        for f in &faces {
            let (ambient, sub) = face_type(&p, f, &c);
            match f.codim {
                0 => {
                    assert_eq!(ambient, 0);
                    assert_eq!(sub, 0);
                }
                1 => {
                    assert_eq!(ambient, 2);
                    assert_eq!(sub, 1);
                }
                2 => {
                    assert_eq!(ambient, 2);
                    assert_eq!(sub, 0);
                }
                _ => unreachable!(),
            }
        }
    }

    #[test]
    fn zero_c_gives_zero_holomorphic_poisson() {
        let phi_s = MatF::from_rows(vec![vec![5.0, 1.0], vec![1.0, 3.0]]);
        let frame = assemble_frame(&phi_s, &AntiSymMatrix::zero(2), &[0.2, 0.2]).unwrap();
        let hp = holomorphic_poisson(&frame);
        assert_eq!(hp.coefficients, MatQ::zeros(2, 2));
        assert_eq!(hp.sharp.max_abs(), 0.0);
        assert_eq!(hp.frame_residual, 0.0);
    }

    #[test]
    fn frames_and_reports_are_shareable_across_threads() {
        fn assert_send_sync<T: Send + Sync>() {}
        assert_send_sync::<GkFrame>();
        assert_send_sync::<AntiSymMatrix>();
        assert_send_sync::<crate::polytope::DelzantPolytope>();
        assert_send_sync::<crate::potential::SymplecticPotential>();
    }

    #[test]
    fn holomorphic_poisson_representations_agree() {
        let phi_s = MatF::from_rows(vec![vec![5.0, 1.0], vec![1.0, 3.0]]);
        let c = c_block(2, 3);
        let frame = assemble_frame(&phi_s, &c, &[0.2, 0.2]).unwrap();
        let hp = holomorphic_poisson(&frame);
        assert_eq!(hp.coefficients[(0, 1)], rat(2, 3) / rat(8, 1));
        assert!(hp.frame_residual < 1e-12);
        // Im(β) = -β1/4 entrywise, directly from the definition
        let diff = hp.sharp.im.sub(&frame.beta1_sharp.scale(&-0.25));
        assert_eq!(diff.max_abs(), 0.0);
    }

    #[test]
    fn matrix_facts_on_small_example() {
        let a = MatF::from_rows(vec![vec![4.0, 1.0], vec![-1.0, 4.0]]);
        let report = matrix_facts_suite(&a, 1e-12).unwrap();
        assert!(report.pass);
        // identity matrix trivially passes
        let report = matrix_facts_suite(&MatF::identity(3), 1e-14).unwrap();
        assert!(report.pass);
        // singular input is rejected
        assert!(matrix_facts_suite(&MatF::zeros(2, 2), 1e-12).is_err());
    }
}
