//! Independent finite-difference validation of the analytic Hessian.
//!
//! The oracle computes central second differences of the potential *values*
//! at step `h = 1e-5 × margin`.  A naive evaluation of
//! `τ(x+h) − 2τ(x) + τ(x−h)` at that step loses everything to cancellation,
//! so the stencil combination is evaluated per facet through logarithm-ratio
//! identities (`ln_1p` of exactly computed ratios, no cancellation) and the
//! polynomial correction part in exact rational arithmetic.  The result is
//! the true finite-difference quotient to machine accuracy, fully
//! independent of the analytic rank-one-sum code path.

use num_traits::{ToPrimitive, Zero};
use toric_gk_core::num::{f64_to_rat, rat, rat_to_f64};
use toric_gk_core::polytope::{enumerate_faces, face_approach_sequence, sample_interior};
use toric_gk_core::potential::{Monomial, SymplecticPotential};
use toric_gk_core::{fixtures, DelzantPolytope, MatF, Rat, SymplecticPotential as Potential};

/// Facet slack and step component at a point.
fn slack_and_delta(tau: &Potential, j: usize, x: &[f64], dir: &[f64], h: f64) -> (f64, f64) {
    let f = &tau.facets()[j];
    let mut s = -rat_to_f64(&f.offset);
    let mut d = 0.0;
    for k in 0..x.len() {
        let u = f.normal[k].to_f64().unwrap();
        s += u * x[k];
        d += u * dir[k] * h;
    }
    (s, d)
}

/// `[f(s+δ) − 2f(s) + f(s−δ)]` for `f(s) = ½ s ln s`, cancellation-free.
fn facet_second_difference_diag(s: f64, d: f64) -> f64 {
    // s(ln s⁺ − 2 ln s + ln s⁻) + δ(ln s⁺ − ln s⁻)
    let curvature = (-(d / s) * (d / s)).ln_1p();
    let drift = (2.0 * d / (s - d)).ln_1p();
    0.5 * (s * curvature + d * drift)
}

/// Four-point stencil combination for the mixed difference, per facet.
fn facet_second_difference_mixed(s: f64, di: f64, dk: f64) -> f64 {
    let l0 = (-4.0 * di * dk / (s * s - (di - dk) * (di - dk))).ln_1p();
    let lk = (4.0 * s * dk / ((s - dk) * (s - dk) - di * di)).ln_1p();
    let li = (4.0 * s * di / ((s - di) * (s - di) - dk * dk)).ln_1p();
    0.5 * (s * l0 + di * lk + dk * li)
}

/// Exact rational evaluation of the polynomial correction.
fn poly_value(correction: &[Monomial], x: &[Rat]) -> Rat {
    let mut acc = Rat::zero();
    for m in correction {
        let mut term = m.coeff.clone();
        for (xi, &e) in x.iter().zip(&m.exponents) {
            for _ in 0..e {
                term *= xi.clone();
            }
        }
        acc += term;
    }
    acc
}

/// Finite-difference Hessian entry (i, k) of `tau` at `x` with step `h`.
fn fd_hessian_entry(tau: &Potential, x: &[f64], i: usize, k: usize, h: f64) -> f64 {
    let n = x.len();
    let mut ei = vec![0.0; n];
    ei[i] = 1.0;
    let mut ek = vec![0.0; n];
    ek[k] = 1.0;

    let mut numerator = 0.0;
    for j in 0..tau.facets().len() {
        if i == k {
            let (s, d) = slack_and_delta(tau, j, x, &ei, h);
            numerator += facet_second_difference_diag(s, d);
        } else {
            let (s, di) = slack_and_delta(tau, j, x, &ei, h);
            let (_, dk) = slack_and_delta(tau, j, x, &ek, h);
            numerator += facet_second_difference_mixed(s, di, dk);
        }
    }

    // polynomial part, exactly
    let hq = f64_to_rat(h);
    let xq: Vec<Rat> = x.iter().map(|&v| f64_to_rat(v)).collect();
    let shifted = |si: i64, sk: i64| -> Vec<Rat> {
        let mut p = xq.clone();
        p[i] += rat(si, 1) * hq.clone();
        if k != i {
            p[k] += rat(sk, 1) * hq.clone();
        }
        p
    };
    let poly_num = if i == k {
        poly_value(tau.correction(), &shifted(1, 0)) - rat(2, 1) * poly_value(tau.correction(), &xq)
            + poly_value(tau.correction(), &shifted(-1, 0))
    } else {
        poly_value(tau.correction(), &shifted(1, 1))
            - poly_value(tau.correction(), &shifted(1, -1))
            - poly_value(tau.correction(), &shifted(-1, 1))
            + poly_value(tau.correction(), &shifted(-1, -1))
    };
    let divisor = if i == k {
        hq.clone() * hq.clone()
    } else {
        rat(4, 1) * hq.clone() * hq.clone()
    };
    let poly_part = rat_to_f64(&(poly_num / divisor));

    let facet_part = if i == k {
        numerator / (h * h)
    } else {
        numerator / (4.0 * h * h)
    };
    facet_part + poly_part
}

fn margin(p: &DelzantPolytope, x: &[f64]) -> f64 {
    p.facets()
        .iter()
        .map(|f| f.slack_f64(x))
        .fold(f64::INFINITY, f64::min)
}

fn check_polytope(p: &DelzantPolytope, correction: Vec<Monomial>, seed: u64) {
    let tau = SymplecticPotential::guillemin(p)
        .with_correction(correction)
        .unwrap();
    let candidates = sample_interior(p, 400, seed);
    let points: Vec<Vec<f64>> = candidates
        .into_iter()
        .filter(|x| margin(p, x) >= 1e-2)
        .take(50)
        .collect();
    assert!(
        points.len() >= 50,
        "need at least 50 interior points with margin >= 1e-2"
    );
    for x in &points {
        let h = 1e-5 * margin(p, x);
        let analytic: MatF = tau.hessian(x).unwrap();
        for i in 0..p.dim() {
            for k in 0..p.dim() {
                let fd = fd_hessian_entry(&tau, x, i, k, h);
                let scale = analytic[(i, k)].abs().max(1.0);
                assert!(
                    (fd - analytic[(i, k)]).abs() <= 1e-6 * scale,
                    "entry ({i},{k}) at {x:?}: fd={fd}, analytic={}",
                    analytic[(i, k)]
                );
            }
        }
    }
}

#[test]
fn fd_matches_analytic_on_square() {
    check_polytope(&fixtures::cp1xcp1_square(), Vec::new(), 101);
}

#[test]
fn fd_matches_analytic_on_square_with_correction() {
    check_polytope(
        &fixtures::cp1xcp1_square(),
        vec![
            Monomial {
                coeff: rat(1, 3),
                exponents: vec![2, 1],
            },
            Monomial {
                coeff: rat(-1, 7),
                exponents: vec![0, 3],
            },
        ],
        102,
    );
}

#[test]
fn fd_matches_analytic_on_cp2() {
    check_polytope(&fixtures::cp2_triangle(), Vec::new(), 103);
}

#[test]
fn fd_matches_analytic_on_cube() {
    check_polytope(&fixtures::cube(), Vec::new(), 104);
}

#[test]
fn product_polytope_hessian_is_block_diagonal() {
    // [0, 1/2]² is a product of intervals: the facet-sum Hessian must be
    // exactly diagonal (rank-one terms never mix the coordinates)
    let p = fixtures::cp1xcp1_square();
    let tau = SymplecticPotential::guillemin(&p);
    for x in sample_interior(&p, 25, 77) {
        let h = tau.hessian(&x).unwrap();
        assert_eq!(h[(0, 1)], 0.0);
        assert_eq!(h[(1, 0)], 0.0);
    }
}

#[test]
fn hessian_diverges_monotonically_toward_facets() {
    for p in [fixtures::cp1xcp1_square(), fixtures::cp2_triangle()] {
        let tau = SymplecticPotential::guillemin(&p);
        let faces = enumerate_faces(&p).unwrap();
        for face in faces.iter().filter(|f| f.codim == 1) {
            let j = face.active_facets[0];
            let u = &p.facets()[j].normal;
            let seq = face_approach_sequence(&p, face, 8, None).unwrap();
            let hessians: Vec<MatF> = seq
                .iter()
                .map(|xq| {
                    let x: Vec<f64> = xq.iter().map(rat_to_f64).collect();
                    tau.hessian(&x).unwrap()
                })
                .collect();
            for i in 0..p.dim() {
                for k in 0..p.dim() {
                    if (u[i].clone() * u[k].clone()).is_zero() {
                        continue;
                    }
                    for w in hessians.windows(2) {
                        assert!(
                            w[1][(i, k)].abs() > w[0][(i, k)].abs(),
                            "entry ({i},{k}) not increasing toward facet {j}"
                        );
                    }
                }
            }
        }
    }
}
