//! Invariance properties of the Delzant validation and face data.

use proptest::prelude::*;
use toric_gk_core::polytope::{enumerate_faces, sample_interior, DelzantPolytope};
use toric_gk_core::rng::SplitMix64;
use toric_gk_core::testkit::{permute_facets, random_unimodular, transform_polytope};
use toric_gk_core::{fixtures, Rat};

fn all_fixtures() -> Vec<DelzantPolytope> {
    vec![
        fixtures::cp1xcp1_square(),
        fixtures::cp2_triangle(),
        fixtures::cube(),
        fixtures::simplex(3),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn delzant_verdict_is_unimodular_invariant(seed in any::<u64>()) {
        let mut rng = SplitMix64::new(seed);
        for p in all_fixtures() {
            let m = random_unimodular(p.dim(), 10, &mut rng);
            let q = transform_polytope(&p, &m);
            prop_assert_eq!(p.delzant_report().pass, q.delzant_report().pass);
            prop_assert_eq!(p.vertices().len(), q.vertices().len());
        }
    }

    #[test]
    fn delzant_verdict_is_relabeling_invariant(seed in any::<u64>()) {
        let mut rng = SplitMix64::new(seed);
        for p in all_fixtures() {
            // random permutation by sorting random keys
            let d = p.facets().len();
            let mut perm: Vec<usize> = (0..d).collect();
            for i in (1..d).rev() {
                let j = rng.range_i64(0, i as i64) as usize;
                perm.swap(i, j);
            }
            let q = permute_facets(&p, &perm);
            prop_assert_eq!(p.delzant_report().pass, q.delzant_report().pass);
        }
    }

    #[test]
    fn failing_polytope_stays_failing_under_unimodular_maps(seed in any::<u64>()) {
        let src = r#"{"dim": 2, "facets": [
            {"normal": [1, 0], "offset": "0"},
            {"normal": [0, 1], "offset": "0"},
            {"normal": [-1, -2], "offset": "-2"}
        ]}"#;
        let p = DelzantPolytope::parse(src).unwrap();
        let mut rng = SplitMix64::new(seed);
        let m = random_unimodular(2, 10, &mut rng);
        let q = transform_polytope(&p, &m);
        prop_assert!(!p.delzant_report().pass);
        prop_assert!(!q.delzant_report().pass);
    }
}

#[test]
fn face_subspace_rank_matches_codimension() {
    for p in all_fixtures() {
        for f in enumerate_faces(&p).unwrap() {
            assert_eq!(
                f.subspace_basis.rank(&Rat::from_integer(0.into())),
                p.dim() - f.codim
            );
        }
    }
}

#[test]
fn face_counts_match_expected_combinatorics() {
    let square = fixtures::cp1xcp1_square();
    let faces = enumerate_faces(&square).unwrap();
    assert_eq!(faces.iter().filter(|f| f.codim == 1).count(), 4);
    assert_eq!(faces.iter().filter(|f| f.codim == 2).count(), 4);

    let cube = fixtures::cube();
    let faces = enumerate_faces(&cube).unwrap();
    assert_eq!(faces.iter().filter(|f| f.codim == 1).count(), 6);
    assert_eq!(faces.iter().filter(|f| f.codim == 2).count(), 12);
    assert_eq!(faces.iter().filter(|f| f.codim == 3).count(), 8);
}

#[test]
fn sampled_points_are_strictly_interior() {
    for p in all_fixtures() {
        for x in sample_interior(&p, 200, 2718) {
            for f in p.facets() {
                assert!(f.slack_f64(&x) > 0.0);
            }
        }
    }
}

#[test]
fn barycenters_sit_on_their_faces_exactly() {
    for p in all_fixtures() {
        for face in enumerate_faces(&p).unwrap() {
            let slacks = p.slacks(&face.barycenter);
            for (j, s) in slacks.iter().enumerate() {
                if face.active_facets.contains(&j) {
                    assert!(s == &Rat::from_integer(0.into()));
                } else {
                    assert!(s > &Rat::from_integer(0.into()));
                }
            }
        }
    }
}
