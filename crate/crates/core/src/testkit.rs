//! Deterministic random instances for property tests and example commands:
//! SPD matrices with bounded condition number, rational anti-symmetric
//! matrices, unimodular lattice transforms.

use num_bigint::BigInt;

use crate::gk::AntiSymMatrix;
use crate::num::rat;
use crate::polytope::{DelzantPolytope, Facet};
use crate::rng::SplitMix64;
use crate::{MatF, MatQ, MatZ, Rat};

/// Random symmetric positive-definite matrix with eigenvalues log-uniform in
/// `[1/sqrt(cond), sqrt(cond)]`, so the condition number is at most `cond`.
/// The result is bitwise symmetric.
pub fn random_spd(n: usize, cond: f64, rng: &mut SplitMix64) -> MatF {
    let q = random_orthogonal(n, rng);
    let half_log = 0.5 * cond.ln();
    let eigs: Vec<f64> = (0..n)
        .map(|_| (rng.range_f64(-half_log, half_log)).exp())
        .collect();
    let m = q.mul(&MatF::diagonal(&eigs)).mul(&q.transpose());
    // symmetrize bitwise
    MatF::from_fn(n, n, |i, j| if i <= j { m[(i, j)] } else { m[(j, i)] })
}

/// Product of random Givens rotations: orthogonal up to rounding.
pub fn random_orthogonal(n: usize, rng: &mut SplitMix64) -> MatF {
    let mut q = MatF::identity(n);
    for p in 0..n {
        for r in p + 1..n {
            let angle = rng.range_f64(0.0, std::f64::consts::TAU);
            let (s, c) = angle.sin_cos();
            let mut g = MatF::identity(n);
            g[(p, p)] = c;
            g[(p, r)] = -s;
            g[(r, p)] = s;
            g[(r, r)] = c;
            q = q.mul(&g);
        }
    }
    q
}

/// Random anti-symmetric matrix with small rational entries `p/q`,
/// `p ∈ [-9, 9]`, `q ∈ [1, 8]`.
pub fn random_antisym_rational(n: usize, rng: &mut SplitMix64) -> AntiSymMatrix {
    let mut m = MatQ::zeros(n, n);
    for i in 0..n {
        for j in i + 1..n {
            let e = rat(rng.range_i64(-9, 9), rng.range_i64(1, 8));
            m[(i, j)] = e.clone();
            m[(j, i)] = -e;
        }
    }
    AntiSymMatrix::new(m).expect("anti-symmetric by construction")
}

/// Random invertible matrix with entries in `[-3, 3]`; retries until the
/// conditioning is moderate (`‖A‖·‖A⁻¹‖ ≤ 10³` in max-abs norm).
pub fn random_invertible(n: usize, rng: &mut SplitMix64) -> MatF {
    loop {
        let m = MatF::from_fn(n, n, |_, _| rng.range_f64(-3.0, 3.0));
        if let Some(inv) = m.inverse() {
            if m.max_abs() * inv.max_abs() <= 1e3 {
                return m;
            }
        }
    }
}

/// Random unimodular integer matrix: a product of elementary shears and
/// signed permutations, so `det = ±1` exactly.
pub fn random_unimodular(n: usize, steps: usize, rng: &mut SplitMix64) -> MatZ {
    let mut m = MatZ::identity(n);
    for _ in 0..steps {
        let i = rng.range_i64(0, n as i64 - 1) as usize;
        let mut j = rng.range_i64(0, n as i64 - 1) as usize;
        if n > 1 {
            while j == i {
                j = rng.range_i64(0, n as i64 - 1) as usize;
            }
            // row_i += k * row_j
            let k = BigInt::from(rng.range_i64(-2, 2));
            for c in 0..n {
                let add = &m[(j, c)] * &k;
                m[(i, c)] = &m[(i, c)] + add;
            }
        }
        if rng.next_u64().is_multiple_of(2) {
            for c in 0..n {
                m[(i, c)] = -m[(i, c)].clone();
            }
        }
    }
    m
}

/// Applies a unimodular change of lattice basis to every facet normal.
/// Delzant validity is preserved (determinants change by det = ±1).
pub fn transform_polytope(p: &DelzantPolytope, m: &MatZ) -> DelzantPolytope {
    let n = p.dim();
    let facets = p
        .facets()
        .iter()
        .map(|f| Facet {
            normal: (0..n)
                .map(|i| {
                    let mut acc = BigInt::from(0);
                    for j in 0..n {
                        acc += &m[(i, j)] * &f.normal[j];
                    }
                    acc
                })
                .collect(),
            offset: f.offset.clone(),
        })
        .collect();
    DelzantPolytope::new(n, facets, p.name().map(str::to_string))
        .expect("unimodular image of a valid polytope is valid")
}

/// Relabels facets by a permutation (entry k holds the old index).
pub fn permute_facets(p: &DelzantPolytope, perm: &[usize]) -> DelzantPolytope {
    let facets = perm.iter().map(|&j| p.facets()[j].clone()).collect();
    DelzantPolytope::new(p.dim(), facets, p.name().map(str::to_string))
        .expect("permutation preserves validity")
}

/// Random interior rational points of the unit box scaled into `|w| ≲ 1`,
/// used by the affine-chart bracket checks.
pub fn random_rational_point(len: usize, rng: &mut SplitMix64) -> Vec<Rat> {
    (0..len)
        .map(|_| {
            let mut num = rng.range_i64(-8, 8);
            if num == 0 {
                num = 3;
            }
            rat(num, rng.range_i64(9, 16))
        })
        .collect()
}
