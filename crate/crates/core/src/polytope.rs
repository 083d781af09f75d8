//! Delzant polytopes: parsing, validation, face enumeration and sampling.
//!
//! A polytope is stored in half-space form, `Δ = {x : ⟨u_j, x⟩ ≥ λ_j}`, with
//! primitive integer normals `u_j` and rational offsets `λ_j`, facets kept in
//! input order.  All combinatorial computation (vertices, determinants, face
//! subspaces) is exact rational arithmetic; floating point appears only in
//! the interior sampler.
//!
//! Vertices are enumerated by exhaustive n-subsets of facets with a rational
//! solve, which is entirely adequate at desk scale.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use std::sync::OnceLock;

use crate::num::{format_rat, parse_rat, rat, rat_to_f64};
use crate::rng::SplitMix64;
use crate::{Int, MatQ, MatZ, Rat};

/// One half-space `⟨normal, x⟩ ≥ offset`.
#[derive(Clone, Debug, PartialEq)]
pub struct Facet {
    pub normal: Vec<Int>,
    pub offset: Rat,
}

impl Facet {
    /// `⟨u_j, x⟩ − λ_j`, the distance to the facet in lattice units.
    pub fn slack(&self, x: &[Rat]) -> Rat {
        let mut acc = -self.offset.clone();
        for (u, xi) in self.normal.iter().zip(x) {
            acc += Rat::from_integer(u.clone()) * xi.clone();
        }
        acc
    }

    pub fn slack_f64(&self, x: &[f64]) -> f64 {
        let mut acc = -rat_to_f64(&self.offset);
        for (u, xi) in self.normal.iter().zip(x) {
            acc += u.to_f64().unwrap_or(f64::NAN) * xi;
        }
        acc
    }

    fn norm_f64(&self) -> f64 {
        self.normal
            .iter()
            .map(|u| {
                let v = u.to_f64().unwrap_or(f64::NAN);
                v * v
            })
            .sum::<f64>()
            .sqrt()
    }
}

/// A vertex together with the facets active there.
#[derive(Clone, Debug)]
pub struct Vertex {
    pub point: Vec<Rat>,
    pub active: Vec<usize>,
}

/// Bounded rational polytope with primitive integer facet normals.
#[derive(Debug)]
pub struct DelzantPolytope {
    dim: usize,
    facets: Vec<Facet>,
    name: Option<String>,
    vertices: Vec<Vertex>,
    interior_center: Vec<Rat>,
    delzant: OnceLock<DelzantReport>,
}

#[derive(Debug, thiserror::Error)]
pub enum PolytopeError {
    #[error("malformed polytope input: {0}")]
    Malformed(String),
    #[error("facet {0} has wrong dimension")]
    DimensionMismatch(usize),
    #[error("facet {0} has zero normal")]
    ZeroNormal(usize),
    #[error("facet {0} normal is not primitive (gcd of entries != 1)")]
    NonPrimitiveNormal(usize),
    #[error("polytope is unbounded")]
    Unbounded,
    #[error("polytope has empty interior")]
    EmptyInterior,
    #[error("polytope fails the Delzant condition: {0}")]
    NotDelzant(String),
    #[error("invalid face operation: {0}")]
    InvalidFace(String),
    #[error("vertex index {0} out of range")]
    InvalidVertexIndex(usize),
}

impl DelzantPolytope {
    /// Builds a polytope and checks every structural invariant except the
    /// Delzant condition: consistent dimensions, primitive normals,
    /// boundedness and nonempty interior.
    pub fn new(
        dim: usize,
        facets: Vec<Facet>,
        name: Option<String>,
    ) -> Result<Self, PolytopeError> {
        if dim == 0 {
            return Err(PolytopeError::Malformed(
                "dimension must be positive".into(),
            ));
        }
        for (j, f) in facets.iter().enumerate() {
            if f.normal.len() != dim {
                return Err(PolytopeError::DimensionMismatch(j));
            }
            if f.normal.iter().all(Zero::is_zero) {
                return Err(PolytopeError::ZeroNormal(j));
            }
            let mut g = BigInt::zero();
            for u in &f.normal {
                g = g.gcd(u);
            }
            if !g.is_one() {
                return Err(PolytopeError::NonPrimitiveNormal(j));
            }
        }
        check_bounded(dim, &facets)?;
        let vertices = enumerate_vertices(dim, &facets);
        if vertices.is_empty() {
            return Err(PolytopeError::EmptyInterior);
        }
        let interior_center = barycenter_of(&vertices.iter().map(|v| &v.point).collect::<Vec<_>>());
        // the vertex barycenter is interior iff the polytope is full-dimensional
        for f in &facets {
            if f.slack(&interior_center) <= Rat::zero() {
                return Err(PolytopeError::EmptyInterior);
            }
        }
        Ok(DelzantPolytope {
            dim,
            facets,
            name,
            vertices,
            interior_center,
            delzant: OnceLock::new(),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn facets(&self) -> &[Facet] {
        &self.facets
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    /// Vertices in a deterministic order (sorted by active facet set).
    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    /// Barycenter of the vertex set; strictly interior.
    pub fn interior_center(&self) -> &[Rat] {
        &self.interior_center
    }

    /// Exact slack vector `l_j(x) − λ_j`.
    pub fn slacks(&self, x: &[Rat]) -> Vec<Rat> {
        self.facets.iter().map(|f| f.slack(x)).collect()
    }

    pub fn contains_strictly(&self, x: &[Rat]) -> bool {
        self.facets.iter().all(|f| f.slack(x) > Rat::zero())
    }

    pub fn contains_strictly_f64(&self, x: &[f64]) -> bool {
        self.facets.iter().all(|f| f.slack_f64(x) > 0.0)
    }

    /// Cached Delzant validation report.
    pub fn delzant_report(&self) -> &DelzantReport {
        self.delzant.get_or_init(|| validate_delzant(self))
    }

    /// Parses the JSON polytope file format.
    pub fn parse(source: &str) -> Result<Self, PolytopeError> {
        let doc: PolytopeDoc =
            serde_json::from_str(source).map_err(|e| PolytopeError::Malformed(e.to_string()))?;
        doc.try_into()
    }

    /// Serializable document form (offsets as exact rational strings).
    pub fn to_doc(&self) -> PolytopeDoc {
        PolytopeDoc {
            dim: self.dim,
            facets: self
                .facets
                .iter()
                .map(|f| FacetDoc {
                    normal: f.normal.iter().map(|u| u.to_i64().unwrap()).collect(),
                    offset: OffsetDoc::Str(format_rat(&f.offset)),
                })
                .collect(),
            name: self.name.clone(),
        }
    }
}

// ---------------------------------------------------------------------------
// file format

#[derive(Debug, Serialize, Deserialize)]
pub struct PolytopeDoc {
    pub dim: usize,
    pub facets: Vec<FacetDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct FacetDoc {
    pub normal: Vec<i64>,
    pub offset: OffsetDoc,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum OffsetDoc {
    Str(String),
    Num(i64),
}

impl TryFrom<PolytopeDoc> for DelzantPolytope {
    type Error = PolytopeError;

    fn try_from(doc: PolytopeDoc) -> Result<Self, PolytopeError> {
        let facets = doc
            .facets
            .into_iter()
            .map(|f| {
                let offset = match f.offset {
                    OffsetDoc::Str(s) => {
                        parse_rat(&s).map_err(|e| PolytopeError::Malformed(e.to_string()))?
                    }
                    OffsetDoc::Num(n) => Rat::from_integer(BigInt::from(n)),
                };
                Ok(Facet {
                    normal: f.normal.into_iter().map(BigInt::from).collect(),
                    offset,
                })
            })
            .collect::<Result<Vec<_>, PolytopeError>>()?;
        DelzantPolytope::new(doc.dim, facets, doc.name)
    }
}

// ---------------------------------------------------------------------------
// construction-time geometry

/// Bounded iff the normals have full rank and the recession cone
/// `{x : ⟨u_j, x⟩ ≥ 0}` is trivial.  With full rank the cone is pointed, so
/// a nonzero cone would contain an extreme ray cut out by n−1 independent
/// normals; we enumerate those candidate rays exactly.
fn check_bounded(dim: usize, facets: &[Facet]) -> Result<(), PolytopeError> {
    let normal_mat = MatQ::from_fn(facets.len(), dim, |i, j| {
        Rat::from_integer(facets[i].normal[j].clone())
    });
    if normal_mat.rank(&Rat::zero()) < dim {
        return Err(PolytopeError::Unbounded);
    }
    for subset in combinations(facets.len(), dim - 1) {
        let rows = MatQ::from_fn(subset.len(), dim, |i, j| {
            Rat::from_integer(facets[subset[i]].normal[j].clone())
        });
        if rows.rank(&Rat::zero()) != dim - 1 {
            continue;
        }
        let kernel = rows.kernel_basis(&Rat::zero());
        debug_assert_eq!(kernel.ncols(), 1);
        let ray: Vec<Rat> = (0..dim).map(|i| kernel[(i, 0)].clone()).collect();
        for dir in [1i64, -1] {
            let d = rat(dir, 1);
            let feasible = facets.iter().all(|f| {
                let mut acc = Rat::zero();
                for (u, r) in f.normal.iter().zip(&ray) {
                    acc += Rat::from_integer(u.clone()) * r.clone() * d.clone();
                }
                acc >= Rat::zero()
            });
            if feasible {
                return Err(PolytopeError::Unbounded);
            }
        }
    }
    Ok(())
}

fn enumerate_vertices(dim: usize, facets: &[Facet]) -> Vec<Vertex> {
    let mut points: Vec<Vec<Rat>> = Vec::new();
    for subset in combinations(facets.len(), dim) {
        let a = MatQ::from_fn(dim, dim, |i, j| {
            Rat::from_integer(facets[subset[i]].normal[j].clone())
        });
        let b: Vec<Rat> = subset.iter().map(|&j| facets[j].offset.clone()).collect();
        let Some(x) = a.solve(&b) else { continue };
        if facets.iter().all(|f| f.slack(&x) >= Rat::zero()) && !points.contains(&x) {
            points.push(x);
        }
    }
    let mut vertices: Vec<Vertex> = points
        .into_iter()
        .map(|point| {
            let active = facets
                .iter()
                .enumerate()
                .filter(|(_, f)| f.slack(&point).is_zero())
                .map(|(j, _)| j)
                .collect();
            Vertex { point, active }
        })
        .collect();
    vertices.sort_by(|a, b| a.active.cmp(&b.active));
    vertices
}

fn barycenter_of(points: &[&Vec<Rat>]) -> Vec<Rat> {
    let n = points[0].len();
    let count = Rat::from_integer(BigInt::from(points.len() as i64));
    (0..n)
        .map(|i| {
            let mut acc = Rat::zero();
            for p in points {
                acc += p[i].clone();
            }
            acc / count.clone()
        })
        .collect()
}

/// All k-element subsets of `0..n` in lexicographic order.
pub(crate) fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut cur: Vec<usize> = (0..k).collect();
    loop {
        out.push(cur.clone());
        // advance
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] != i + n - k {
                break;
            }
            if i == 0 {
                return out;
            }
        }
        cur[i] += 1;
        for j in i + 1..k {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

// ---------------------------------------------------------------------------
// Delzant validation

/// Per-vertex outcome of the Delzant test.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VertexCheck {
    /// Vertex coordinates as exact rational strings.
    pub point: Vec<String>,
    /// Input indices of the facets active at this vertex.
    pub active_facets: Vec<usize>,
    /// True when exactly n facets are active.
    pub simple: bool,
    /// `|det|` of the active normal matrix when the vertex is simple.
    pub det_abs: Option<String>,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DelzantReport {
    pub vertices: Vec<VertexCheck>,
    pub pass: bool,
}

/// Checks the Delzant condition vertex by vertex: n active facets whose
/// primitive normals form a lattice basis (determinant ±1), in exact
/// arithmetic.  Failures are report entries, not errors.
pub fn validate_delzant(p: &DelzantPolytope) -> DelzantReport {
    let n = p.dim();
    let mut checks = Vec::new();
    let mut pass = true;
    for v in p.vertices() {
        let simple = v.active.len() == n;
        let (det_abs, ok) = if simple {
            let a = MatZ::from_fn(n, n, |i, j| p.facets()[v.active[i]].normal[j].clone());
            let det = a.map(|e| Rat::from_integer(e.clone())).det();
            let abs = det.abs();
            let ok = abs == Rat::one();
            (Some(format_rat(&abs)), ok)
        } else {
            (None, false)
        };
        pass &= ok;
        checks.push(VertexCheck {
            point: v.point.iter().map(format_rat).collect(),
            active_facets: v.active.clone(),
            simple,
            det_abs,
            pass: ok,
        });
    }
    DelzantReport {
        vertices: checks,
        pass,
    }
}

// ---------------------------------------------------------------------------
// faces

/// An open face of the polytope, plus the interior as the codim-0 face.
#[derive(Clone, Debug)]
pub struct FaceData {
    /// Input indices of the facets active on the face, sorted.
    pub active_facets: Vec<usize>,
    pub codim: usize,
    /// Exact rational basis of `V_F = {x : ⟨u_j, x⟩ = 0 for active j}`,
    /// one column per basis vector (n×(n−codim)).
    pub subspace_basis: MatQ,
    /// Barycenter of the closed face (rational, in the relative interior).
    pub barycenter: Vec<Rat>,
    /// Vector from the face barycenter to the polytope interior center.
    pub inward_direction: Vec<Rat>,
}

/// Enumerates all faces (codimension 0..n).  Requires the Delzant condition,
/// which makes the polytope simple so faces biject with facet subsets that
/// are active at some vertex.
pub fn enumerate_faces(p: &DelzantPolytope) -> Result<Vec<FaceData>, PolytopeError> {
    if !p.delzant_report().pass {
        return Err(PolytopeError::NotDelzant(
            "face enumeration requires a validated Delzant polytope".into(),
        ));
    }
    let n = p.dim();
    let mut faces = vec![FaceData {
        active_facets: Vec::new(),
        codim: 0,
        subspace_basis: MatQ::identity(n),
        barycenter: p.interior_center().to_vec(),
        inward_direction: vec![Rat::zero(); n],
    }];
    let mut seen: Vec<Vec<usize>> = Vec::new();
    for k in 1..=n {
        for v in p.vertices() {
            for idx in combinations(v.active.len(), k) {
                let subset: Vec<usize> = idx.iter().map(|&i| v.active[i]).collect();
                if seen.contains(&subset) {
                    continue;
                }
                seen.push(subset.clone());
                faces.push(build_face(p, subset, k));
            }
        }
    }
    faces.sort_by(|a, b| (a.codim, &a.active_facets).cmp(&(b.codim, &b.active_facets)));
    Ok(faces)
}

fn build_face(p: &DelzantPolytope, subset: Vec<usize>, codim: usize) -> FaceData {
    let n = p.dim();
    let rows = MatQ::from_fn(subset.len(), n, |i, j| {
        Rat::from_integer(p.facets()[subset[i]].normal[j].clone())
    });
    let basis = rows.kernel_basis(&Rat::zero());
    debug_assert_eq!(basis.ncols(), n - codim);
    let on_face: Vec<&Vec<Rat>> = p
        .vertices()
        .iter()
        .filter(|v| subset.iter().all(|j| v.active.contains(j)))
        .map(|v| &v.point)
        .collect();
    let barycenter = barycenter_of(&on_face);
    let inward_direction: Vec<Rat> = p
        .interior_center()
        .iter()
        .zip(&barycenter)
        .map(|(c, b)| c.clone() - b.clone())
        .collect();
    let mut active = subset;
    active.sort_unstable();
    FaceData {
        active_facets: active,
        codim,
        subspace_basis: basis,
        barycenter,
        inward_direction,
    }
}

// ---------------------------------------------------------------------------
// sampling

/// Seeded rejection sampler for strictly interior points.  Points keep a
/// normalized distance of at least `1e-3 ×` (smallest facet-to-center
/// distance) from every facet so downstream Hessians stay well conditioned.
pub fn sample_interior(p: &DelzantPolytope, count: usize, seed: u64) -> Vec<Vec<f64>> {
    assert!(count >= 1, "count must be at least 1");
    let n = p.dim();
    let verts: Vec<Vec<f64>> = p
        .vertices()
        .iter()
        .map(|v| v.point.iter().map(rat_to_f64).collect())
        .collect();
    let mut lo = vec![f64::INFINITY; n];
    let mut hi = vec![f64::NEG_INFINITY; n];
    for v in &verts {
        for i in 0..n {
            lo[i] = lo[i].min(v[i]);
            hi[i] = hi[i].max(v[i]);
        }
    }
    let center: Vec<f64> = p.interior_center().iter().map(rat_to_f64).collect();
    let margin = 1e-3 * delta_margin_base(p, &center);
    let mut rng = SplitMix64::new(seed);
    let mut out = Vec::with_capacity(count);
    let mut guard = 0usize;
    while out.len() < count {
        guard += 1;
        assert!(
            guard < 1_000_000 * count.max(1),
            "interior sampling failed to converge"
        );
        let x: Vec<f64> = (0..n).map(|i| rng.range_f64(lo[i], hi[i])).collect();
        let ok = p
            .facets()
            .iter()
            .all(|f| f.slack_f64(&x) / f.norm_f64() >= margin);
        if ok {
            out.push(x);
        }
    }
    out
}

fn delta_margin_base(p: &DelzantPolytope, center: &[f64]) -> f64 {
    p.facets()
        .iter()
        .map(|f| f.slack_f64(center) / f.norm_f64())
        .fold(f64::INFINITY, f64::min)
}

/// Geometric sequence of interior points approaching the face barycenter:
/// `x_m = barycenter + t₀·2⁻ᵐ · inward`, m = 0..depth.  Exact rational
/// points so distance ratios are exactly 1/2.
pub fn face_approach_sequence(
    p: &DelzantPolytope,
    face: &FaceData,
    depth: usize,
    t0: Option<Rat>,
) -> Result<Vec<Vec<Rat>>, PolytopeError> {
    if face.codim == 0 {
        return Err(PolytopeError::InvalidFace(
            "approach sequence requires codim >= 1".into(),
        ));
    }
    let mut t = t0.unwrap_or_else(|| rat(1, 4));
    if t <= Rat::zero() {
        return Err(PolytopeError::InvalidFace("t0 must be positive".into()));
    }
    if face.inward_direction.iter().all(Zero::is_zero) {
        return Err(PolytopeError::InvalidFace(
            "face has no inward direction".into(),
        ));
    }
    let point_at = |t: &Rat| -> Vec<Rat> {
        face.barycenter
            .iter()
            .zip(&face.inward_direction)
            .map(|(b, d)| b.clone() + t.clone() * d.clone())
            .collect()
    };
    let mut shrink = 0;
    while !p.contains_strictly(&point_at(&t)) {
        t /= rat(2, 1);
        shrink += 1;
        if shrink > 200 {
            return Err(PolytopeError::InvalidFace(
                "no interior point along the inward direction".into(),
            ));
        }
    }
    let mut points = Vec::with_capacity(depth);
    for _ in 0..depth {
        points.push(point_at(&t));
        t /= rat(2, 1);
    }
    Ok(points)
}
