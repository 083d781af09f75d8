//! Numerical probes of the compactification conditions: does interior tensor
//! data extend over the closed polytope?
//!
//! Smoothness cannot be certified by finitely many evaluations, so each probe
//! evaluates a named matrix quantity along a geometric approach sequence to a
//! face and classifies the Cauchy decay of successive differences.  A verdict
//! of `Converges` means "consistent with smooth extension", never "smooth";
//! a failed probe is likewise flagged inconclusive-negative rather than a
//! genuine obstruction, since the extension conditions are sufficient only.
//!
//! The reference Hessian ψ is the canonical facet-sum Hessian of the same
//! polytope.  The probed quantities, with φ = φ_s + C:
//!
//! * `phi_s - psi` and `psi phi^-1 psi - psi`,
//! * `phi^T phi_s^-1 phi - psi` and `psi phi_s^-1 psi - psi`,
//! * `-C phi^-1 C`, the combination that controls the average complex
//!   structure,
//! * `phi_s` itself, a deliberately divergent control (log-singular at every
//!   facet).

use serde::{Deserialize, Serialize};

use crate::gk::AntiSymMatrix;
use crate::num::rat_to_f64;
use crate::polytope::{
    enumerate_faces, face_approach_sequence, sample_interior, DelzantPolytope, FaceData,
    PolytopeError,
};
use crate::potential::{check_strict_convexity, PotentialError, SymplecticPotential};
use crate::{MatF, Rat};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Converges,
    Diverges,
    Inconclusive,
}

/// Matrix quantities that can be probed along a face approach sequence.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Quantity {
    /// Control: the Hessian itself, divergent toward every facet.
    PhiS,
    /// `φ_s − ψ`.
    PhiSMinusPsi,
    /// `ψ φ⁻¹ ψ − ψ`.
    PsiPhiInvPsiMinusPsi,
    /// `φᵀ φ_s⁻¹ φ − ψ`.
    PhiTPhiSInvPhiMinusPsi,
    /// `ψ φ_s⁻¹ ψ − ψ`.
    PsiPhiSInvPsiMinusPsi,
    /// `−C φ⁻¹ C`.
    MinusCPhiInvC,
}

impl Quantity {
    pub fn name(self) -> &'static str {
        match self {
            Quantity::PhiS => "phi_s",
            Quantity::PhiSMinusPsi => "phi_s - psi",
            Quantity::PsiPhiInvPsiMinusPsi => "psi phi^-1 psi - psi",
            Quantity::PhiTPhiSInvPhiMinusPsi => "phi^T phi_s^-1 phi - psi",
            Quantity::PsiPhiSInvPsiMinusPsi => "psi phi_s^-1 psi - psi",
            Quantity::MinusCPhiInvC => "-C phi^-1 C",
        }
    }

    /// The four extension-condition quantities.
    pub fn extension_suite() -> [Quantity; 4] {
        [
            Quantity::PhiSMinusPsi,
            Quantity::PsiPhiInvPsiMinusPsi,
            Quantity::PhiTPhiSInvPhiMinusPsi,
            Quantity::PsiPhiSInvPsiMinusPsi,
        ]
    }

    fn evaluate(self, phi_s: &MatF, c: &MatF, psi: &MatF) -> Option<MatF> {
        let phi = phi_s.add(c);
        match self {
            Quantity::PhiS => Some(phi_s.clone()),
            Quantity::PhiSMinusPsi => Some(phi_s.sub(psi)),
            Quantity::PsiPhiInvPsiMinusPsi => {
                let inv = phi.inverse()?;
                Some(psi.mul(&inv).mul(psi).sub(psi))
            }
            Quantity::PhiTPhiSInvPhiMinusPsi => {
                let inv = phi_s.inverse()?;
                Some(phi.transpose().mul(&inv).mul(&phi).sub(psi))
            }
            Quantity::PsiPhiSInvPsiMinusPsi => {
                let inv = phi_s.inverse()?;
                Some(psi.mul(&inv).mul(psi).sub(psi))
            }
            Quantity::MinusCPhiInvC => {
                let inv = phi.inverse()?;
                Some(c.mul(&inv).mul(c).neg())
            }
        }
    }
}

/// One probe: a quantity evaluated along an approach sequence.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BoundaryProbe {
    pub face_active: Vec<usize>,
    pub face_codim: usize,
    pub quantity: Quantity,
    pub quantity_name: String,
    /// The approach sequence points, one per step.
    pub sequence: Vec<Vec<f64>>,
    /// The quantity matrices along the sequence (`null` when undefined at a
    /// step); same length as `sequence`.
    pub values: Vec<Option<Vec<Vec<f64>>>>,
    /// Max-abs entry of the quantity at each step (`null` when undefined).
    pub value_norms: Vec<Option<f64>>,
    /// Max-abs of successive differences.
    pub diff_norms: Vec<f64>,
    pub verdict: Verdict,
    /// Measured Cauchy contraction ratio over the last steps (0 when the
    /// sequence is constant up to the noise floor).
    pub rate: f64,
    /// Differences at or below this magnitude are rounding noise of the
    /// matrix products involved, not signal.
    pub noise_floor: f64,
}

#[derive(Debug, thiserror::Error)]
pub enum BoundaryError {
    #[error(transparent)]
    Polytope(#[from] PolytopeError),
    #[error(transparent)]
    Potential(#[from] PotentialError),
}

/// Decay threshold for the convergence verdict.
pub const CONTRACTION_RATIO: f64 = 0.75;
/// Number of trailing difference ratios examined.
const TAIL_RATIOS: usize = 4;

/// Evaluates `quantity` along the approach sequence of `face` and classifies
/// Cauchy decay.  Undefined values (singular matrices) force `Diverges`.
pub fn probe_quantity(
    p: &DelzantPolytope,
    tau: &SymplecticPotential,
    c: &AntiSymMatrix,
    face: &FaceData,
    quantity: Quantity,
    depth: usize,
    t0: Option<Rat>,
) -> Result<BoundaryProbe, BoundaryError> {
    let psi_ref = SymplecticPotential::guillemin(p);
    let sequence = face_approach_sequence(p, face, depth, t0)?;
    let c_f = c.to_f64();
    let mut values: Vec<Option<MatF>> = Vec::with_capacity(sequence.len());
    let mut operand_scale = 1.0f64;
    for x in &sequence {
        let xf: Vec<f64> = x.iter().map(rat_to_f64).collect();
        let phi_s = tau.hessian(&xf)?;
        let psi = psi_ref.hessian(&xf)?;
        operand_scale = operand_scale.max(phi_s.max_abs()).max(psi.max_abs());
        let v = quantity
            .evaluate(&phi_s, &c_f, &psi)
            .filter(|m| (0..m.nrows()).all(|i| (0..m.ncols()).all(|j| m[(i, j)].is_finite())));
        values.push(v);
    }
    // rounding noise of the matrix products grows quadratically with the
    // Hessian magnitude; differences below this are not signal
    let noise_floor = 1e-13 * operand_scale * operand_scale;
    let (verdict, rate, diff_norms) = classify(&values, noise_floor);
    debug_assert_eq!(values.len(), sequence.len());
    Ok(BoundaryProbe {
        face_active: face.active_facets.clone(),
        face_codim: face.codim,
        quantity,
        quantity_name: quantity.name().to_string(),
        sequence: sequence
            .iter()
            .map(|x| x.iter().map(rat_to_f64).collect())
            .collect(),
        values: values
            .iter()
            .map(|v| v.as_ref().map(MatF::to_rows))
            .collect(),
        value_norms: values
            .iter()
            .map(|v| v.as_ref().map(MatF::max_abs))
            .collect(),
        diff_norms,
        verdict,
        rate,
        noise_floor,
    })
}

/// Cauchy classification of a matrix sequence: `Converges` when the last
/// difference ratios all sit at or below [`CONTRACTION_RATIO`] (or the tail
/// differences vanish up to noise), `Diverges` when a value is undefined or
/// the differences grow consistently, `Inconclusive` otherwise.
fn classify(values: &[Option<MatF>], noise_floor: f64) -> (Verdict, f64, Vec<f64>) {
    if values.iter().any(Option::is_none) {
        return (Verdict::Diverges, f64::INFINITY, Vec::new());
    }
    let vals: Vec<&MatF> = values.iter().map(|v| v.as_ref().unwrap()).collect();
    let diffs: Vec<f64> = vals.windows(2).map(|w| w[1].sub(w[0]).max_abs()).collect();
    if diffs.len() < TAIL_RATIOS + 1 {
        return (Verdict::Inconclusive, f64::NAN, diffs);
    }
    let tiny = noise_floor;
    let tail = &diffs[diffs.len() - (TAIL_RATIOS + 1)..];
    if tail.iter().all(|&d| d <= tiny) {
        return (Verdict::Converges, 0.0, diffs);
    }
    let ratios: Vec<f64> = tail
        .windows(2)
        .map(|w| if w[0] <= tiny { 0.0 } else { w[1] / w[0] })
        .collect();
    let max_ratio = ratios.iter().cloned().fold(0.0f64, f64::max);
    let min_ratio = ratios.iter().cloned().fold(f64::INFINITY, f64::min);
    if max_ratio <= CONTRACTION_RATIO {
        (Verdict::Converges, max_ratio, diffs)
    } else if min_ratio >= 1.25 {
        (Verdict::Diverges, min_ratio, diffs)
    } else {
        (Verdict::Inconclusive, max_ratio, diffs)
    }
}

// ---------------------------------------------------------------------------
// determinant lower bound

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DetBoundReport {
    /// `det(I + ψ⁻¹C)` at each sample.
    pub determinants: Vec<f64>,
    pub min_det: f64,
    pub pass: bool,
}

/// `det(I + ψ⁻¹C)` for a positive-definite ψ and anti-symmetric C; the value
/// is ≥ 1 in exact arithmetic.
pub fn det_one_plus_psi_inv_c(psi: &MatF, c: &MatF) -> Option<f64> {
    let inv = psi.inverse()?;
    let n = psi.nrows();
    Some(MatF::identity(n).add(&inv.mul(c)).det())
}

/// Per-point check of `det(I + ψ⁻¹C) ≥ 1 − 1e-12` with ψ the Hessian of
/// `tau` at each sample.
pub fn det_lower_bound_check(
    tau: &SymplecticPotential,
    c: &AntiSymMatrix,
    samples: &[Vec<f64>],
) -> Result<DetBoundReport, BoundaryError> {
    let c_f = c.to_f64();
    let mut determinants = Vec::with_capacity(samples.len());
    let mut min_det = f64::INFINITY;
    for x in samples {
        let psi = tau.hessian(x)?;
        let det = det_one_plus_psi_inv_c(&psi, &c_f).unwrap_or(f64::NEG_INFINITY);
        min_det = min_det.min(det);
        determinants.push(det);
    }
    Ok(DetBoundReport {
        determinants,
        min_det,
        pass: min_det >= 1.0 - 1e-12,
    })
}

// ---------------------------------------------------------------------------
// aggregate report

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CompactificationReport {
    /// Convexity precheck of the potential on seeded interior samples; the
    /// probes run only when it passes.
    pub convexity_pass: bool,
    pub probes: Vec<BoundaryProbe>,
    /// Control probes of the divergent quantity `phi_s`, one per face.
    pub control_probes: Vec<BoundaryProbe>,
    /// True when every control probe is flagged divergent.
    pub control_flagged: bool,
    /// Overall: convexity holds and every extension quantity converges on
    /// every face.
    pub pass: bool,
}

/// Runs the four extension quantities over every face of codimension ≥ 1,
/// plus the divergent control quantity, and aggregates verdicts.
pub fn compactification_report(
    p: &DelzantPolytope,
    tau: &SymplecticPotential,
    c: &AntiSymMatrix,
    depth: usize,
) -> Result<CompactificationReport, BoundaryError> {
    let samples = sample_interior(p, 25, 0x5eed);
    let convexity = check_strict_convexity(tau, &samples, 0.0)?;
    if !convexity.pass {
        return Ok(CompactificationReport {
            convexity_pass: false,
            probes: Vec::new(),
            control_probes: Vec::new(),
            control_flagged: false,
            pass: false,
        });
    }
    let faces = enumerate_faces(p)?;
    let mut probes = Vec::new();
    let mut control_probes = Vec::new();
    for face in faces.iter().filter(|f| f.codim >= 1) {
        for quantity in Quantity::extension_suite() {
            probes.push(probe_quantity(p, tau, c, face, quantity, depth, None)?);
        }
        control_probes.push(probe_quantity(
            p,
            tau,
            c,
            face,
            Quantity::PhiS,
            depth,
            None,
        )?);
    }
    let all_converge = probes.iter().all(|pr| pr.verdict == Verdict::Converges);
    let control_flagged = control_probes
        .iter()
        .all(|pr| pr.verdict == Verdict::Diverges);
    Ok(CompactificationReport {
        convexity_pass: true,
        probes,
        control_probes,
        control_flagged,
        pass: all_converge,
    })
}
