//! Exactness properties of the reduction data: pushforward/lift roundtrips,
//! kernel annihilation, independence of the chosen vertex.

use proptest::prelude::*;
use toric_gk_core::delzant::{build_reduction, lift_c, wedge_pushforward};
use toric_gk_core::gk::AntiSymMatrix;
use toric_gk_core::rng::SplitMix64;
use toric_gk_core::testkit::random_antisym_rational;
use toric_gk_core::{fixtures, MatQ, Rat};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn pushforward_after_lift_is_identity(seed in any::<u64>()) {
        let mut rng = SplitMix64::new(seed);
        for p in [fixtures::cp1xcp1_square(), fixtures::cp2_triangle()] {
            let r = build_reduction(&p, None).unwrap();
            let c = random_antisym_rational(p.dim(), &mut rng);
            let lifted = lift_c(&r, &c).unwrap();
            prop_assert_eq!(wedge_pushforward(&r, &lifted).unwrap(), c);
        }
    }

    #[test]
    fn kernel_bivectors_do_not_change_pushforward(seed in any::<u64>()) {
        let mut rng = SplitMix64::new(seed);
        let p = fixtures::cp2_triangle();
        let r = build_reduction(&p, None).unwrap();
        let d = r.facet_count;
        let c0 = random_antisym_rational(d, &mut rng);
        // v ∧ w with v in the kernel: perturbing C₀ by it leaves ςC₀ςᵀ fixed
        let v: Vec<Rat> = (0..d)
            .map(|i| Rat::from_integer(r.kernel_basis[(i, 0)].clone()))
            .collect();
        let w: Vec<Rat> = (0..d)
            .map(|_| toric_gk_core::num::rat(rng.range_i64(-5, 5), rng.range_i64(1, 4)))
            .collect();
        let mut wedge = MatQ::zeros(d, d);
        for i in 0..d {
            for j in 0..d {
                wedge[(i, j)] = v[i].clone() * w[j].clone() - w[i].clone() * v[j].clone();
            }
        }
        let perturbed =
            AntiSymMatrix::new(c0.entries().add(&wedge)).expect("still anti-symmetric");
        let a = wedge_pushforward(&r, &c0).unwrap();
        let b = wedge_pushforward(&r, &perturbed).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn lifts_from_different_vertices_agree_after_pushforward(
        seed in any::<u64>(),
        vertex in 0usize..3,
    ) {
        let mut rng = SplitMix64::new(seed);
        let p = fixtures::cp2_triangle();
        let r0 = build_reduction(&p, Some(0)).unwrap();
        let rv = build_reduction(&p, Some(vertex)).unwrap();
        let c = random_antisym_rational(2, &mut rng);
        let l0 = lift_c(&r0, &c).unwrap();
        let lv = lift_c(&rv, &c).unwrap();
        // the lifts themselves may differ, their pushforwards may not
        prop_assert_eq!(wedge_pushforward(&r0, &lv).unwrap(), c.clone());
        prop_assert_eq!(wedge_pushforward(&rv, &l0).unwrap(), c);
    }
}

#[test]
fn kernel_basis_is_integral_and_exact() {
    for p in [
        fixtures::cp1xcp1_square(),
        fixtures::cp2_triangle(),
        fixtures::cube(),
        fixtures::simplex(3),
    ] {
        let r = build_reduction(&p, None).unwrap();
        assert!(r.verify_exactness());
        assert_eq!(
            r.kernel_basis.ncols() + p.dim(),
            p.facets().len(),
            "short exact sequence bookkeeping"
        );
    }
}

#[test]
fn invalid_vertex_index_is_rejected() {
    let p = fixtures::cp2_triangle();
    assert!(build_reduction(&p, Some(99)).is_err());
}

#[test]
fn non_delzant_polytope_is_rejected() {
    let src = r#"{"dim": 2, "facets": [
        {"normal": [1, 0], "offset": "0"},
        {"normal": [0, 1], "offset": "0"},
        {"normal": [-1, -2], "offset": "-2"}
    ]}"#;
    let p = toric_gk_core::DelzantPolytope::parse(src).unwrap();
    assert!(build_reduction(&p, None).is_err());
}
