//! Generalized Delzant reduction bookkeeping.
//!
//! For a polytope with `d` facets in dimension `n` the facet map
//! `ς: ℝᵈ → ℝⁿ, e_j ↦ u_j` sits in the exact sequence
//! `0 → 𝔫 → ℝᵈ → ℝⁿ → 0`, and a toric structure downstairs is the reduction
//! of standard data on ℂᵈ.  This module computes the integer matrix of ς, a
//! saturated integer basis of its kernel 𝔫, a vertex-based rational right
//! inverse σ, the bivector pushforward `C₀ ↦ ς C₀ ςᵀ` and the lift
//! `C ↦ σ C σᵀ`, together with the ℂᵈ standard coordinate data and fixtures
//! comparing reduced frames against directly constructed ones.

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::gk::{assemble_frame, verify_identities, AntiSymMatrix, GkError};
use crate::intlin::integer_kernel_basis;
use crate::num::{format_rat, rat_to_f64};
use crate::polytope::{DelzantPolytope, PolytopeError};
use crate::potential::{PotentialError, SymplecticPotential};
use crate::{MatQ, MatZ, Rat};

/// The linear data of the generalized Delzant construction for one polytope.
#[derive(Clone, Debug)]
pub struct ReductionData {
    /// Number of facets d and ambient dimension n.
    pub facet_count: usize,
    pub dim: usize,
    /// n×d integer matrix of ς (column j is the normal u_j).
    pub sigma: MatZ,
    /// d×(d−n) saturated integer basis of ker ς.
    pub kernel_basis: MatZ,
    /// d×n rational right inverse σ with ς·σ = I, built from the facets
    /// active at `chosen_vertex`.
    pub right_inverse: MatQ,
    /// Index into the polytope's vertex list (sorted by active facet set).
    pub chosen_vertex: usize,
    /// Active facets of the chosen vertex.
    pub vertex_facets: Vec<usize>,
}

#[derive(Debug, thiserror::Error)]
pub enum DelzantError {
    #[error(transparent)]
    Polytope(#[from] PolytopeError),
    #[error(transparent)]
    Potential(#[from] PotentialError),
    #[error(transparent)]
    Gk(#[from] GkError),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("point is not interior to the orthant (coordinate {0})")]
    OutsideOrthant(usize),
}

/// Builds the reduction data; the default vertex is the first in the sorted
/// vertex order, i.e. the lowest active facet index set.
pub fn build_reduction(
    p: &DelzantPolytope,
    vertex: Option<usize>,
) -> Result<ReductionData, DelzantError> {
    if !p.delzant_report().pass {
        return Err(PolytopeError::NotDelzant(
            "reduction data requires a validated Delzant polytope".into(),
        )
        .into());
    }
    let n = p.dim();
    let d = p.facets().len();
    let vertex_index = vertex.unwrap_or(0);
    let v = p
        .vertices()
        .get(vertex_index)
        .ok_or(PolytopeError::InvalidVertexIndex(vertex_index))?;

    let sigma = MatZ::from_fn(n, d, |i, j| p.facets()[j].normal[i].clone());
    let kernel_basis = integer_kernel_basis(&sigma);
    debug_assert_eq!(kernel_basis.ncols(), d - n);

    // right inverse from the chosen vertex: solve A a = x with A the column
    // matrix of the active normals (a lattice basis, so A⁻¹ is integral),
    // then include the solution at the active coordinate slots.
    let active = v.active.clone();
    let a = MatQ::from_fn(n, n, |i, l| {
        Rat::from_integer(p.facets()[active[l]].normal[i].clone())
    });
    let a_inv = a.inverse().expect("vertex normals form a basis");
    let mut right_inverse = MatQ::zeros(d, n);
    for (l, &j) in active.iter().enumerate() {
        for col in 0..n {
            right_inverse[(j, col)] = a_inv[(l, col)].clone();
        }
    }

    let data = ReductionData {
        facet_count: d,
        dim: n,
        sigma,
        kernel_basis,
        right_inverse,
        chosen_vertex: vertex_index,
        vertex_facets: active,
    };
    debug_assert!(data.verify_exactness());
    Ok(data)
}

impl ReductionData {
    pub fn sigma_rational(&self) -> MatQ {
        self.sigma.map(|e| Rat::from_integer(e.clone()))
    }

    /// The exactness bookkeeping: ς has full row rank, ς·kernel = 0 and
    /// ς·σ = I, all exact.
    pub fn verify_exactness(&self) -> bool {
        let s = self.sigma_rational();
        let k = self.kernel_basis.map(|e| Rat::from_integer(e.clone()));
        let prod = s.mul(&k);
        let zero_ok = (0..prod.nrows()).all(|i| (0..prod.ncols()).all(|j| prod[(i, j)].is_zero()));
        let id_ok = s.mul(&self.right_inverse) == MatQ::identity(self.dim);
        let rank_ok =
            s.rank(&Rat::zero()) == self.dim && k.rank(&Rat::zero()) + self.dim == self.facet_count;
        zero_ok && id_ok && rank_ok
    }
}

/// Pushforward of a bivector on ℝᵈ along ς: the matrix `ς C₀ ςᵀ`, exact.
pub fn wedge_pushforward(
    r: &ReductionData,
    c0: &AntiSymMatrix,
) -> Result<AntiSymMatrix, DelzantError> {
    if c0.dim() != r.facet_count {
        return Err(DelzantError::DimensionMismatch(format!(
            "C0 is {}x{} but the facet count is {}",
            c0.dim(),
            c0.dim(),
            r.facet_count
        )));
    }
    let s = r.sigma_rational();
    let pushed = s.mul(c0.entries()).mul(&s.transpose());
    Ok(AntiSymMatrix::new(pushed).expect("congruence preserves anti-symmetry"))
}

/// Vertex-based lift: `C₀ = σ C σᵀ`, an exact preimage of C under the wedge
/// pushforward.
pub fn lift_c(r: &ReductionData, c: &AntiSymMatrix) -> Result<AntiSymMatrix, DelzantError> {
    if c.dim() != r.dim {
        return Err(DelzantError::DimensionMismatch(format!(
            "C is {}x{} but the reduced dimension is {}",
            c.dim(),
            c.dim(),
            r.dim
        )));
    }
    let lifted = r
        .right_inverse
        .mul(c.entries())
        .mul(&r.right_inverse.transpose());
    let lifted = AntiSymMatrix::new(lifted).expect("congruence preserves anti-symmetry");
    debug_assert_eq!(wedge_pushforward(r, &lifted).unwrap(), *c);
    Ok(lifted)
}

// ---------------------------------------------------------------------------
// standard ℂᵈ data

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CdStandardData {
    /// Diagonal of ψ₀ = Diag{1/(2(ν_j − λ_j))} = Diag{1/|z_j|²}.
    pub psi0_diagonal: Vec<f64>,
    /// τ₀(ν) = ½ Σ (ν_j − λ_j) ln(ν_j − λ_j).
    pub tau0_value: f64,
    /// Residual between ψ₀ and the facet-sum Hessian of the orthant
    /// potential evaluated at ν (same formula through two code paths).
    pub consistency_residual: f64,
}

/// Standard Kähler coordinate data of ℂᵈ over the orthant `ν_j ≥ λ_j`, with
/// the offsets λ taken from the polytope's facets.
pub fn cd_standard_data(p: &DelzantPolytope, nu: &[f64]) -> Result<CdStandardData, DelzantError> {
    let d = p.facets().len();
    if nu.len() != d {
        return Err(DelzantError::DimensionMismatch(format!(
            "nu has length {} but there are {} facets",
            nu.len(),
            d
        )));
    }
    let lambda: Vec<f64> = p.facets().iter().map(|f| rat_to_f64(&f.offset)).collect();
    let mut psi0_diagonal = Vec::with_capacity(d);
    let mut tau0_value = 0.0;
    for j in 0..d {
        let slack = nu[j] - lambda[j];
        if slack <= 0.0 {
            return Err(DelzantError::OutsideOrthant(j));
        }
        psi0_diagonal.push(1.0 / (2.0 * slack));
        tau0_value += 0.5 * slack * slack.ln();
    }
    let orthant = orthant_potential(p);
    let h = orthant.hessian(nu)?;
    let mut consistency_residual = 0.0f64;
    for i in 0..d {
        for j in 0..d {
            let expect = if i == j { psi0_diagonal[i] } else { 0.0 };
            consistency_residual = consistency_residual.max((h[(i, j)] - expect).abs());
        }
    }
    Ok(CdStandardData {
        psi0_diagonal,
        tau0_value,
        consistency_residual,
    })
}

/// The ℂᵈ potential `τ₀ = ½ Σ (ν_j − λ_j) ln(ν_j − λ_j)` as a facet-sum
/// potential over the orthant.
pub fn orthant_potential(p: &DelzantPolytope) -> SymplecticPotential {
    let d = p.facets().len();
    let facets = (0..d)
        .map(|j| {
            let mut normal = vec![crate::Int::from(0); d];
            normal[j] = crate::Int::from(1);
            crate::polytope::Facet {
                normal,
                offset: p.facets()[j].offset.clone(),
            }
        })
        .collect();
    SymplecticPotential::guillemin_from_facets(d, facets)
}

// ---------------------------------------------------------------------------
// reduced structure fixture

/// Frame data of one sample, as raw f64 rows so reports can be compared
/// bitwise.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SampleFrame {
    pub point: Vec<f64>,
    pub phi_s: Vec<Vec<f64>>,
    pub g_flat: Vec<Vec<f64>>,
    pub b_flat: Vec<Vec<f64>>,
    pub beta1_sharp: Vec<Vec<f64>>,
    pub beta_re: Vec<Vec<f64>>,
    pub beta_im: Vec<Vec<f64>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ReducedFixtureReport {
    /// Downstairs matrix ς∧(C₀) as exact rational strings.
    pub c_down: Vec<Vec<String>>,
    pub interior_type: usize,
    /// Holomorphic Poisson coefficient matrix C/8, exact strings.
    pub poisson_coefficients: Vec<Vec<String>>,
    /// `ς∧(lift(ς∧(C₀))) = ς∧(C₀)` held exactly.
    pub roundtrip_exact: bool,
    /// Identity suite passed on every sampled frame.
    pub identities_pass: bool,
    pub samples: Vec<SampleFrame>,
}

/// Assembles the downstairs frames determined by an upstairs bivector C₀ at
/// the given interior samples.  Everything downstream depends on C₀ only
/// through the exact pushforward ς∧(C₀) = ςC₀ςᵀ, so two upstairs choices
/// with equal pushforward produce bitwise identical reports.
pub fn reduced_structure_fixture(
    p: &DelzantPolytope,
    r: &ReductionData,
    c0: &AntiSymMatrix,
    samples: &[Vec<f64>],
) -> Result<ReducedFixtureReport, DelzantError> {
    let c_down = wedge_pushforward(r, c0)?;
    let canonical_lift = lift_c(r, &c_down)?;
    let roundtrip_exact = wedge_pushforward(r, &canonical_lift)? == c_down;

    let tau = SymplecticPotential::guillemin(p);
    let mut frames = Vec::with_capacity(samples.len());
    let mut identities_pass = true;
    for x in samples {
        let phi_s = tau.hessian(x)?;
        let frame = assemble_frame(&phi_s, &c_down, x)?;
        identities_pass &= verify_identities(&frame, 1e-10).pass;
        frames.push(SampleFrame {
            point: x.clone(),
            phi_s: frame.phi_s.to_rows(),
            g_flat: frame.g_flat.to_rows(),
            b_flat: frame.b_flat.to_rows(),
            beta1_sharp: frame.beta1_sharp.to_rows(),
            beta_re: frame.beta_sharp.re.to_rows(),
            beta_im: frame.beta_sharp.im.to_rows(),
        });
    }
    let eighth = Rat::new(1.into(), 8.into());
    Ok(ReducedFixtureReport {
        c_down: c_down.to_strings(),
        interior_type: crate::gk::interior_type(&c_down),
        poisson_coefficients: c_down
            .entries()
            .scale(&eighth)
            .to_rows()
            .iter()
            .map(|row| row.iter().map(format_rat).collect())
            .collect(),
        roundtrip_exact,
        identities_pass,
        samples: frames,
    })
}

/// Bitwise comparison of two fixture reports (exact strings and f64 bits).
pub fn fixture_reports_identical(a: &ReducedFixtureReport, b: &ReducedFixtureReport) -> bool {
    fn rows_eq(a: &[Vec<f64>], b: &[Vec<f64>]) -> bool {
        a.len() == b.len()
            && a.iter().zip(b).all(|(ra, rb)| {
                ra.len() == rb.len() && ra.iter().zip(rb).all(|(x, y)| x.to_bits() == y.to_bits())
            })
    }
    a.c_down == b.c_down
        && a.interior_type == b.interior_type
        && a.poisson_coefficients == b.poisson_coefficients
        && a.samples.len() == b.samples.len()
        && a.samples.iter().zip(&b.samples).all(|(sa, sb)| {
            rows_eq(&sa.phi_s, &sb.phi_s)
                && rows_eq(&sa.g_flat, &sb.g_flat)
                && rows_eq(&sa.b_flat, &sb.b_flat)
                && rows_eq(&sa.beta1_sharp, &sb.beta1_sharp)
                && rows_eq(&sa.beta_re, &sb.beta_re)
                && rows_eq(&sa.beta_im, &sb.beta_im)
        })
}

/// ℂP² upstairs matrix `c₁e₁∧e₂ + c₂e₁∧e₃ + c₃e₂∧e₃`.
pub fn cp2_c0(c1: Rat, c2: Rat, c3: Rat) -> AntiSymMatrix {
    let mut m = MatQ::zeros(3, 3);
    m[(0, 1)] = c1.clone();
    m[(1, 0)] = -c1;
    m[(0, 2)] = c2.clone();
    m[(2, 0)] = -c2;
    m[(1, 2)] = c3.clone();
    m[(2, 1)] = -c3;
    AntiSymMatrix::new(m).expect("anti-symmetric by construction")
}

/// Convenience: downstairs frame directly from (Guillemin Hessian, C).
pub fn direct_frame(
    p: &DelzantPolytope,
    c: &AntiSymMatrix,
    x: &[f64],
) -> Result<crate::gk::GkFrame, DelzantError> {
    let tau = SymplecticPotential::guillemin(p);
    let phi_s = tau.hessian(x)?;
    Ok(assemble_frame(&phi_s, c, x)?)
}

/// Converts a frame to the serializable sample form used by the fixture.
pub fn frame_to_sample(frame: &crate::gk::GkFrame) -> SampleFrame {
    SampleFrame {
        point: frame.point.clone(),
        phi_s: frame.phi_s.to_rows(),
        g_flat: frame.g_flat.to_rows(),
        b_flat: frame.b_flat.to_rows(),
        beta1_sharp: frame.beta1_sharp.to_rows(),
        beta_re: frame.beta_sharp.re.to_rows(),
        beta_im: frame.beta_sharp.im.to_rows(),
    }
}
