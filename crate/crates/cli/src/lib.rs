//! Command implementations and report schemas for the `toric-gk` binary.
//!
//! Every command produces a single JSON report (deterministic for a fixed
//! seed: no timestamps, fixed field order) and an exit status: 0 when all
//! checks of the selected command pass, 1 on a check failure, 2 on an input
//! error.  Optional CSV tables carry plot-ready data.

use serde::{Deserialize, Serialize};
use std::fmt::Write as _;
use std::path::Path;

use toric_gk_core::boundary::{
    compactification_report, det_lower_bound_check, CompactificationReport, DetBoundReport,
};
use toric_gk_core::cpn::{strong_hamiltonian_check_cpn, CpnBracketReport};
use toric_gk_core::delzant::{
    build_reduction, cp2_c0, fixture_reports_identical, lift_c, reduced_structure_fixture,
    wedge_pushforward, ReducedFixtureReport,
};
use toric_gk_core::gk::{
    assemble_frame, face_type, holomorphic_poisson, interior_type, verify_identities,
    AntiSymMatrix, IdentityReport,
};
use toric_gk_core::golden::{golden_cp1xcp1, GoldenReport, GoldenTolerances};
use toric_gk_core::mat::min_eigenvalue;
use toric_gk_core::num::{format_rat, rat};
use toric_gk_core::polytope::{enumerate_faces, sample_interior, DelzantPolytope, DelzantReport};
use toric_gk_core::potential::{PotentialDoc, SymplecticPotential};
use toric_gk_core::rng::SplitMix64;
use toric_gk_core::testkit::{random_antisym_rational, random_rational_point};
use toric_gk_core::{boundary, Rat};

/// Input or IO problem: exit code 2.  Check failures are not errors; they
/// surface as `pass = false` in the reports and exit code 1.
#[derive(Debug)]
pub struct InputError(pub String);

impl std::fmt::Display for InputError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl std::error::Error for InputError {}

fn bad<E: std::fmt::Display>(e: E) -> InputError {
    InputError(e.to_string())
}

pub type Outcome<T> = Result<(T, bool), InputError>;

// ---------------------------------------------------------------------------
// shared input plumbing

pub fn load_polytope(path: &Path) -> Result<DelzantPolytope, InputError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| InputError(format!("cannot read {}: {e}", path.display())))?;
    DelzantPolytope::parse(&text).map_err(bad)
}

/// `--C` accepts inline JSON (`[[...]]`) or a path to a JSON file.
pub fn load_antisym(spec: &str) -> Result<AntiSymMatrix, InputError> {
    let text = if spec.trim_start().starts_with('[') {
        spec.to_string()
    } else {
        std::fs::read_to_string(spec).map_err(|e| InputError(format!("cannot read {spec}: {e}")))?
    };
    AntiSymMatrix::parse(&text).map_err(bad)
}

pub fn load_potential(
    spec: Option<&str>,
    p: &DelzantPolytope,
) -> Result<SymplecticPotential, InputError> {
    let Some(spec) = spec else {
        return Ok(SymplecticPotential::guillemin(p));
    };
    let text = if spec.trim_start().starts_with('{') {
        spec.to_string()
    } else {
        std::fs::read_to_string(spec).map_err(|e| InputError(format!("cannot read {spec}: {e}")))?
    };
    let doc: PotentialDoc = serde_json::from_str(&text).map_err(bad)?;
    doc.build(p).map_err(bad)
}

/// `--points` accepts `sample:N:seed` or an explicit `x1,x2;y1,y2;...` list.
pub fn resolve_points(
    spec: Option<&str>,
    p: &DelzantPolytope,
) -> Result<Vec<Vec<f64>>, InputError> {
    let spec = spec.unwrap_or("sample:10:42");
    if let Some(rest) = spec.strip_prefix("sample:") {
        let parts: Vec<&str> = rest.split(':').collect();
        if parts.len() != 2 {
            return Err(InputError(format!(
                "expected sample:<count>:<seed>, got {spec:?}"
            )));
        }
        let count: usize = parts[0].parse().map_err(bad)?;
        let seed: u64 = parts[1].parse().map_err(bad)?;
        if count == 0 {
            return Err(InputError("sample count must be positive".into()));
        }
        return Ok(sample_interior(p, count, seed));
    }
    let mut points = Vec::new();
    for chunk in spec.split(';') {
        let coords: Vec<f64> = chunk
            .split(',')
            .map(|s| s.trim().parse::<f64>().map_err(bad))
            .collect::<Result<_, _>>()?;
        if coords.len() != p.dim() {
            return Err(InputError(format!(
                "point {chunk:?} has {} coordinates, polytope dimension is {}",
                coords.len(),
                p.dim()
            )));
        }
        if !p.contains_strictly_f64(&coords) {
            return Err(InputError(format!("point {chunk:?} is not interior")));
        }
        points.push(coords);
    }
    Ok(points)
}

pub fn require_positive(name: &str, value: f64) -> Result<(), InputError> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(InputError(format!("{name} must be positive, got {value}")))
    }
}

pub fn parse_rational_list(spec: &str, expect: usize) -> Result<Vec<Rat>, InputError> {
    let vals: Vec<Rat> = spec
        .split(',')
        .map(|s| toric_gk_core::num::parse_rat(s.trim()).map_err(bad))
        .collect::<Result<_, _>>()?;
    if vals.len() != expect {
        return Err(InputError(format!(
            "expected {expect} comma-separated rationals, got {}",
            vals.len()
        )));
    }
    Ok(vals)
}

// ---------------------------------------------------------------------------
// validate

#[derive(Debug, Serialize, Deserialize)]
pub struct ValidateOut {
    pub command: String,
    pub polytope: Option<String>,
    pub dim: usize,
    pub facet_count: usize,
    pub report: DelzantReport,
    pub pass: bool,
}

pub fn cmd_validate(path: &Path) -> Outcome<ValidateOut> {
    let p = load_polytope(path)?;
    let report = p.delzant_report().clone();
    let pass = report.pass;
    Ok((
        ValidateOut {
            command: "validate".into(),
            polytope: p.name().map(str::to_string),
            dim: p.dim(),
            facet_count: p.facets().len(),
            report,
            pass,
        },
        pass,
    ))
}

pub fn validate_csv(out: &ValidateOut) -> String {
    let mut s = String::from("vertex,active_facets,simple,det_abs,pass\n");
    for (i, v) in out.report.vertices.iter().enumerate() {
        let _ = writeln!(
            s,
            "{i},\"{:?}\",{},{},{}",
            v.active_facets,
            v.simple,
            v.det_abs.as_deref().unwrap_or("-"),
            v.pass
        );
    }
    s
}

// ---------------------------------------------------------------------------
// faces

#[derive(Debug, Serialize, Deserialize)]
pub struct FaceOut {
    pub active_facets: Vec<usize>,
    pub codim: usize,
    pub subspace_basis: Vec<Vec<String>>,
    pub barycenter: Vec<String>,
    /// Present when a C matrix was supplied.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ambient_type: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub submanifold_type: Option<usize>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct FacesOut {
    pub command: String,
    pub polytope: Option<String>,
    pub faces: Vec<FaceOut>,
    pub pass: bool,
}

pub fn cmd_faces(path: &Path, c: Option<&str>) -> Outcome<FacesOut> {
    let p = load_polytope(path)?;
    let c = c.map(load_antisym).transpose()?;
    if let Some(cm) = &c {
        if cm.dim() != p.dim() {
            return Err(InputError(format!(
                "C is {}x{} but the polytope dimension is {}",
                cm.dim(),
                cm.dim(),
                p.dim()
            )));
        }
    }
    let faces = enumerate_faces(&p).map_err(bad)?;
    let out = faces
        .iter()
        .map(|f| {
            let (ambient, sub) = match &c {
                Some(cm) => {
                    let (a, s) = face_type(&p, f, cm);
                    (Some(a), Some(s))
                }
                None => (None, None),
            };
            FaceOut {
                active_facets: f.active_facets.clone(),
                codim: f.codim,
                subspace_basis: f
                    .subspace_basis
                    .to_rows()
                    .iter()
                    .map(|row| row.iter().map(format_rat).collect())
                    .collect(),
                barycenter: f.barycenter.iter().map(format_rat).collect(),
                ambient_type: ambient,
                submanifold_type: sub,
            }
        })
        .collect();
    Ok((
        FacesOut {
            command: "faces".into(),
            polytope: p.name().map(str::to_string),
            faces: out,
            pass: true,
        },
        true,
    ))
}

/// Plot table: the type map over faces.
pub fn faces_csv(out: &FacesOut) -> String {
    let mut s = String::from("active_facets,codim,ambient_type,submanifold_type\n");
    for f in &out.faces {
        let _ = writeln!(
            s,
            "\"{:?}\",{},{},{}",
            f.active_facets,
            f.codim,
            f.ambient_type.map_or("-".into(), |t| t.to_string()),
            f.submanifold_type.map_or("-".into(), |t| t.to_string()),
        );
    }
    s
}

// ---------------------------------------------------------------------------
// tensors

#[derive(Debug, Serialize, Deserialize)]
pub struct TensorPointOut {
    pub point: Vec<f64>,
    pub phi_s: Vec<Vec<f64>>,
    /// Gram coefficient matrices in the (∂θ, ∂μ) frame.
    pub g: Vec<Vec<f64>>,
    pub b: Vec<Vec<f64>>,
    pub beta1_sharp: Vec<Vec<f64>>,
    pub det_one_plus_psi_inv_c: f64,
    pub min_eig_phi_s: f64,
    pub identities_pass: bool,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct TensorsOut {
    pub command: String,
    pub polytope: Option<String>,
    pub c: Vec<Vec<String>>,
    pub interior_type: usize,
    pub poisson_coefficients: Vec<Vec<String>>,
    pub points: Vec<TensorPointOut>,
    pub pass: bool,
}

pub fn cmd_tensors(
    path: &Path,
    c_spec: &str,
    potential: Option<&str>,
    points: Option<&str>,
    tol: f64,
) -> Outcome<TensorsOut> {
    require_positive("--tol", tol)?;
    let p = load_polytope(path)?;
    let c = load_antisym(c_spec)?;
    let tau = load_potential(potential, &p)?;
    let pts = resolve_points(points, &p)?;
    let mut rows = Vec::new();
    let mut pass = true;
    let eighth = rat(1, 8);
    for x in &pts {
        let phi_s = tau.hessian(x).map_err(bad)?;
        let frame = assemble_frame(&phi_s, &c, x).map_err(bad)?;
        let identities = verify_identities(&frame, tol);
        pass &= identities.pass;
        let hp = holomorphic_poisson(&frame);
        pass &= hp.frame_residual <= tol * 1e2;
        let det = boundary::det_one_plus_psi_inv_c(&phi_s, &frame.c).unwrap_or(f64::NEG_INFINITY);
        rows.push(TensorPointOut {
            point: x.clone(),
            phi_s: frame.phi_s.to_rows(),
            g: frame.g_gram().to_rows(),
            b: frame.b_gram().to_rows(),
            beta1_sharp: frame.beta1_sharp.to_rows(),
            det_one_plus_psi_inv_c: det,
            min_eig_phi_s: min_eigenvalue(&frame.phi_s),
            identities_pass: identities.pass,
        });
    }
    Ok((
        TensorsOut {
            command: "tensors".into(),
            polytope: p.name().map(str::to_string),
            c: c.to_strings(),
            interior_type: interior_type(&c),
            poisson_coefficients: c
                .entries()
                .scale(&eighth)
                .to_rows()
                .iter()
                .map(|row| row.iter().map(format_rat).collect())
                .collect(),
            points: rows,
            pass,
        },
        pass,
    ))
}

/// Plot table: one row per point with the tensor entries and the
/// det(I + ψ⁻¹C) heat value.
pub fn tensors_csv(out: &TensorsOut) -> String {
    let n2 = out.points.first().map_or(0, |r| r.g.len());
    let mut header = String::from("point");
    for i in 0..n2 {
        for j in 0..n2 {
            let _ = write!(header, ",g_{i}{j}");
        }
    }
    for i in 0..n2 {
        for j in 0..n2 {
            let _ = write!(header, ",b_{i}{j}");
        }
    }
    header.push_str(",det_one_plus_psi_inv_c\n");
    let mut s = header;
    for r in &out.points {
        let coord = r
            .point
            .iter()
            .map(|v| format!("{v}"))
            .collect::<Vec<_>>()
            .join(" ");
        let _ = write!(s, "\"{coord}\"");
        for row in &r.g {
            for v in row {
                let _ = write!(s, ",{v}");
            }
        }
        for row in &r.b {
            for v in row {
                let _ = write!(s, ",{v}");
            }
        }
        let _ = writeln!(s, ",{}", r.det_one_plus_psi_inv_c);
    }
    s
}

// ---------------------------------------------------------------------------
// check-identities

#[derive(Debug, Serialize, Deserialize)]
pub struct IdentitiesOut {
    pub command: String,
    pub polytope: Option<String>,
    pub tol: f64,
    pub per_point: Vec<IdentityReport>,
    pub pass: bool,
}

pub fn cmd_check_identities(
    path: &Path,
    c_spec: &str,
    potential: Option<&str>,
    points: Option<&str>,
    tol: f64,
) -> Outcome<IdentitiesOut> {
    require_positive("--tol", tol)?;
    let p = load_polytope(path)?;
    let c = load_antisym(c_spec)?;
    let tau = load_potential(potential, &p)?;
    let pts = resolve_points(points, &p)?;
    let mut per_point = Vec::new();
    let mut pass = true;
    for x in &pts {
        let phi_s = tau.hessian(x).map_err(bad)?;
        let frame = assemble_frame(&phi_s, &c, x).map_err(bad)?;
        let r = verify_identities(&frame, tol);
        pass &= r.pass;
        per_point.push(r);
    }
    Ok((
        IdentitiesOut {
            command: "check-identities".into(),
            polytope: p.name().map(str::to_string),
            tol,
            per_point,
            pass,
        },
        pass,
    ))
}

// ---------------------------------------------------------------------------
// boundary

#[derive(Debug, Serialize, Deserialize)]
pub struct BoundaryOut {
    pub command: String,
    pub polytope: Option<String>,
    pub depth: usize,
    pub compactification: CompactificationReport,
    pub det_bound: DetBoundReport,
    pub pass: bool,
}

pub fn cmd_boundary(
    path: &Path,
    c_spec: &str,
    potential: Option<&str>,
    points: Option<&str>,
    depth: usize,
) -> Outcome<BoundaryOut> {
    if depth == 0 {
        return Err(InputError("--depth must be at least 1".into()));
    }
    let p = load_polytope(path)?;
    let c = load_antisym(c_spec)?;
    let tau = load_potential(potential, &p)?;
    let samples = resolve_points(points.or(Some("sample:100:7")), &p)?;
    let compactification = compactification_report(&p, &tau, &c, depth).map_err(bad)?;
    let det_bound = det_lower_bound_check(&tau, &c, &samples).map_err(bad)?;
    let pass = compactification.pass && compactification.control_flagged && det_bound.pass;
    Ok((
        BoundaryOut {
            command: "boundary".into(),
            polytope: p.name().map(str::to_string),
            depth,
            compactification,
            det_bound,
            pass,
        },
        pass,
    ))
}

pub fn boundary_csv(out: &BoundaryOut) -> String {
    let mut s = String::from("face_active,codim,quantity,verdict,rate\n");
    for pr in out
        .compactification
        .probes
        .iter()
        .chain(&out.compactification.control_probes)
    {
        let _ = writeln!(
            s,
            "\"{:?}\",{},{},{:?},{}",
            pr.face_active, pr.face_codim, pr.quantity_name, pr.verdict, pr.rate
        );
    }
    s
}

// ---------------------------------------------------------------------------
// reduce

#[derive(Debug, Serialize, Deserialize)]
pub struct ReduceOut {
    pub command: String,
    pub polytope: Option<String>,
    pub sigma: Vec<Vec<String>>,
    pub kernel_basis: Vec<Vec<String>>,
    pub right_inverse: Vec<Vec<String>>,
    pub chosen_vertex: usize,
    pub vertex_facets: Vec<usize>,
    pub exactness: bool,
    /// Lift of `--C` (when given) and its roundtrip verdict.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lifted_c0: Option<Vec<Vec<String>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub roundtrip_exact: Option<bool>,
    /// Fixture over sample points for `--c0` (or the lifted `--C`).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fixture: Option<ReducedFixtureReport>,
    pub pass: bool,
}

pub fn cmd_reduce(
    path: &Path,
    c_spec: Option<&str>,
    c0_spec: Option<&str>,
    vertex: Option<usize>,
    points: Option<&str>,
) -> Outcome<ReduceOut> {
    let p = load_polytope(path)?;
    let r = build_reduction(&p, vertex).map_err(bad)?;
    let mut pass = r.verify_exactness();
    let exactness = pass;

    let to_strings = |m: &toric_gk_core::MatQ| -> Vec<Vec<String>> {
        m.to_rows()
            .iter()
            .map(|row| row.iter().map(format_rat).collect())
            .collect()
    };
    let zmat_strings = |m: &toric_gk_core::MatZ| -> Vec<Vec<String>> {
        m.to_rows()
            .iter()
            .map(|row| row.iter().map(|v| v.to_string()).collect())
            .collect()
    };

    let mut lifted_c0 = None;
    let mut roundtrip_exact = None;
    let mut fixture_c0 = None;
    if let Some(spec) = c_spec {
        let c = load_antisym(spec)?;
        let lifted = lift_c(&r, &c).map_err(bad)?;
        let rt = wedge_pushforward(&r, &lifted).map_err(bad)? == c;
        pass &= rt;
        lifted_c0 = Some(lifted.to_strings());
        roundtrip_exact = Some(rt);
        fixture_c0 = Some(lifted);
    }
    if let Some(spec) = c0_spec {
        fixture_c0 = Some(load_antisym(spec)?);
    }
    let fixture = match fixture_c0 {
        Some(c0) => {
            let pts = resolve_points(points, &p)?;
            let f = reduced_structure_fixture(&p, &r, &c0, &pts).map_err(bad)?;
            pass &= f.roundtrip_exact && f.identities_pass;
            Some(f)
        }
        None => None,
    };
    Ok((
        ReduceOut {
            command: "reduce".into(),
            polytope: p.name().map(str::to_string),
            sigma: zmat_strings(&r.sigma),
            kernel_basis: zmat_strings(&r.kernel_basis),
            right_inverse: to_strings(&r.right_inverse),
            chosen_vertex: r.chosen_vertex,
            vertex_facets: r.vertex_facets.clone(),
            exactness,
            lifted_c0,
            roundtrip_exact,
            fixture,
            pass,
        },
        pass,
    ))
}

// ---------------------------------------------------------------------------
// examples

#[derive(Debug, Serialize, Deserialize)]
pub struct GoldenOut {
    pub command: String,
    pub report: GoldenReport,
    pub pass: bool,
}

pub fn cmd_example_cp1xcp1(c: f64, mu: [f64; 2], tol: f64) -> Outcome<GoldenOut> {
    require_positive("--tol", tol)?;
    let report = golden_cp1xcp1(
        c,
        mu,
        GoldenTolerances {
            gb: tol,
            q_bprime: tol,
        },
    )
    .map_err(bad)?;
    let pass = report.pass;
    Ok((
        GoldenOut {
            command: "example-cp1xcp1".into(),
            report,
            pass,
        },
        pass,
    ))
}

#[derive(Debug, Serialize, Deserialize)]
pub struct Cp2Out {
    pub command: String,
    pub coeffs: Vec<String>,
    pub coeffs_alt: Vec<String>,
    pub combination: String,
    pub combination_alt: String,
    pub downstairs_c: Vec<Vec<String>>,
    pub frames_identical: bool,
    pub interior_type: usize,
    pub pass: bool,
}

pub fn cmd_example_cp2(coeffs: &str, coeffs_alt: &str, points: Option<&str>) -> Outcome<Cp2Out> {
    let p = toric_gk_core::fixtures::cp2_triangle();
    let a = parse_rational_list(coeffs, 3)?;
    let b = parse_rational_list(coeffs_alt, 3)?;
    let comb = |v: &[Rat]| v[0].clone() - v[1].clone() + v[2].clone();
    let r = build_reduction(&p, None).map_err(bad)?;
    let c0_a = cp2_c0(a[0].clone(), a[1].clone(), a[2].clone());
    let c0_b = cp2_c0(b[0].clone(), b[1].clone(), b[2].clone());
    let pts = resolve_points(points.or(Some("sample:10:11")), &p)?;
    let fa = reduced_structure_fixture(&p, &r, &c0_a, &pts).map_err(bad)?;
    let fb = reduced_structure_fixture(&p, &r, &c0_b, &pts).map_err(bad)?;
    let identical = fixture_reports_identical(&fa, &fb);
    let same_combination = comb(&a) == comb(&b);
    // frames agree bitwise exactly when the combinations agree
    let pass = fa.roundtrip_exact && fa.identities_pass && identical == same_combination;
    Ok((
        Cp2Out {
            command: "example-cp2".into(),
            coeffs: a.iter().map(format_rat).collect(),
            coeffs_alt: b.iter().map(format_rat).collect(),
            combination: format_rat(&comb(&a)),
            combination_alt: format_rat(&comb(&b)),
            downstairs_c: fa.c_down.clone(),
            frames_identical: identical,
            interior_type: fa.interior_type,
            pass,
        },
        pass,
    ))
}

#[derive(Debug, Serialize, Deserialize)]
pub struct CpnOut {
    pub command: String,
    pub coefficients: Vec<Vec<String>>,
    pub report: CpnBracketReport,
    pub pass: bool,
}

pub fn cmd_example_cpn_bracket(
    n: usize,
    k: usize,
    sample_count: usize,
    seed: u64,
    tol: f64,
) -> Outcome<CpnOut> {
    if k == 0 || k >= n {
        return Err(InputError(format!(
            "require 0 < k < n for the Poisson block (got n={n}, k={k})"
        )));
    }
    let mut rng = SplitMix64::new(seed);
    let c = random_antisym_rational(k, &mut rng);
    let samples: Vec<Vec<Rat>> = (0..sample_count)
        .map(|_| random_rational_point(2 * n, &mut rng))
        .collect();
    let report = strong_hamiltonian_check_cpn(n, c.entries(), &samples, true, tol).map_err(bad)?;
    let pass = report.pass
        && report
            .fault_max_bracket
            .is_none_or(|f| f >= 1e-3 || c.rank() == 0);
    Ok((
        CpnOut {
            command: "example-cpn-bracket".into(),
            coefficients: c.to_strings(),
            report,
            pass,
        },
        pass,
    ))
}
